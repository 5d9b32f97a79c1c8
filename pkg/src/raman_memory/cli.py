"""Command-line front end: ``raman-memory {spectrum,propagate,tune,info}``.

Configuration is an INI-style file (``[section]`` headers, ``key = value``
lines); anything not given falls back to the built-in defaults, which are the
cesium D1 parameters used throughout (delta_hf = 256, rabi = 15,
detuning = 50, od = 50, T = 10). Outputs are CSV with ``#`` metadata lines
and 17 significant digits, so files re-parse to the exact doubles.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import math
import sys
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import carrier_tuner, dressed_medium, info_merit, pulse_transport
from .dressed_medium import AtomSystem, ControlField
from .errors import RamanMemoryError
from .pulse_transport import Medium, PulseSpec

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

DEFAULTS: Dict[str, Dict[str, str]] = {
    "atom": {
        "weights": "derive",
        "nuclear_spin": "3.5",
        "delta_hf": "256",
        "gamma_0": "1e-6",
        "w_n": "0.5833333333333334",
        "w_nprime": "0.08333333333333333",
        "control_ratio": "-2.6457513110645907",
    },
    "control": {"rabi": "15", "detuning": "50"},
    "medium": {"od": "50"},
    "pulse": {
        "duration": "10",
        "carrier": "auto",
        "satellites": "false",
        "samples": str(pulse_transport.DEFAULT_SAMPLES),
        "t_min": "auto",
        "t_max": "auto",
        "cutoff": "auto",
        "stride": "64",
    },
    "spectrum": {"start": "-100", "stop": "350", "points": "4501"},
    "tune": {
        "carrier_min": "auto",
        "carrier_max": "auto",
        "half_span": "6",
        "points": "64",
        "objective": carrier_tuner.MAX_STORED_FRACTION,
        "min_transmission": "0.5",
    },
    "info": {
        "eta_min": "0",
        "eta_max": "1",
        "eta_points": "101",
        "squeezing": "2, 5, 10",
        "units": info_merit.NATS,
        "sp_eta": "0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9",
        "mu": "0.0001, 0.001, 0.005, 0.01",
    },
}


class ConfigError(Exception):
    """Invalid configuration; the message names the offending field."""


def fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class RunConfig:
    atom: AtomSystem
    control: ControlField
    medium: Medium
    raw: Dict[str, Dict[str, str]]

    def get(self, section: str, key: str) -> str:
        return self.raw[section][key]

    def number(self, section: str, key: str) -> float:
        return _as_float(self.raw, section, key)

    def integer(self, section: str, key: str) -> int:
        text = self.raw[section][key]
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"{section}.{key}: expected an integer, got {text!r}") from None

    def maybe_number(self, section: str, key: str) -> Optional[float]:
        if self.raw[section][key].strip().lower() == "auto":
            return None
        return self.number(section, key)

    def numbers(self, section: str, key: str) -> List[float]:
        text = self.raw[section][key]
        try:
            return [float(tok) for tok in text.replace(",", " ").split()]
        except ValueError:
            raise ConfigError(f"{section}.{key}: expected a list of numbers, got {text!r}") from None

    def flag(self, section: str, key: str) -> bool:
        text = self.raw[section][key].strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{section}.{key}: expected true/false, got {text!r}")

    def echo(self) -> List[str]:
        lines = []
        for section in sorted(self.raw):
            for key in sorted(self.raw[section]):
                lines.append(f"{section}.{key} = {self.raw[section][key]}")
        lines.append(f"derived.w_n = {fmt(self.atom.probe_weights[0])}")
        lines.append(f"derived.w_nprime = {fmt(self.atom.probe_weights[1])}")
        lines.append(f"derived.control_ratio = {fmt(self.atom.control_ratio)}")
        return lines


def _as_float(raw, section: str, key: str) -> float:
    text = raw[section][key]
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{section}.{key}: expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{section}.{key}: must be finite, got {text!r}")
    return value


def load_config(path: Optional[Path] = None, overrides: Sequence[str] = ()) -> RunConfig:
    """Merge defaults, an optional config file and ``section.key=value`` overrides."""
    raw = {section: dict(values) for section, values in DEFAULTS.items()}
    if path is not None:
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        for section in parser.sections():
            for key, value in parser.items(section):
                _set(raw, section, key, value)
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override {item!r} must look like section.key=value")
        lhs, value = item.split("=", 1)
        section, key = lhs.strip().split(".", 1)
        _set(raw, section, key.strip(), value.strip())
    return _validate(raw)


def _set(raw, section: str, key: str, value: str) -> None:
    if section not in raw:
        raise ConfigError(f"unknown config section [{section}]")
    if key not in raw[section]:
        raise ConfigError(f"{section}.{key}: unknown config field")
    raw[section][key] = value


def _validate(raw) -> RunConfig:
    mode = raw["atom"]["weights"].strip().lower()
    try:
        delta_hf = _as_float(raw, "atom", "delta_hf")
        gamma_0 = _as_float(raw, "atom", "gamma_0")
        if mode == "derive":
            atom = AtomSystem.alkali_d1(_as_float(raw, "atom", "nuclear_spin"), delta_hf, gamma_0)
        elif mode == "explicit":
            atom = AtomSystem(
                delta_hf=delta_hf, gamma_0=gamma_0,
                probe_weights=(_as_float(raw, "atom", "w_n"), _as_float(raw, "atom", "w_nprime")),
                control_ratio=_as_float(raw, "atom", "control_ratio"),
            )
        else:
            raise ConfigError(f"atom.weights: expected 'derive' or 'explicit', got {mode!r}")
    except RamanMemoryError as exc:
        raise ConfigError(f"atom: {exc}") from None
    try:
        control = ControlField(_as_float(raw, "control", "rabi"), _as_float(raw, "control", "detuning"))
    except RamanMemoryError as exc:
        raise ConfigError(f"control.rabi: {exc}") from None
    try:
        medium = Medium(_as_float(raw, "medium", "od"))
    except RamanMemoryError as exc:
        raise ConfigError(f"medium.od: {exc}") from None

    cfg = RunConfig(atom=atom, control=control, medium=medium, raw=raw)
    if cfg.number("pulse", "duration") <= 0:
        raise ConfigError("pulse.duration: must be positive")
    samples = cfg.integer("pulse", "samples")
    if samples < pulse_transport.MIN_SAMPLES or samples & (samples - 1):
        raise ConfigError(f"pulse.samples: must be a power of two >= {pulse_transport.MIN_SAMPLES}")
    if cfg.integer("pulse", "stride") < 1:
        raise ConfigError("pulse.stride: must be >= 1")
    for key in ("carrier", "t_min", "t_max", "cutoff"):
        cfg.maybe_number("pulse", key)
    duration = cfg.number("pulse", "duration")
    window = _window(cfg, duration)
    if window is not None and (window[0] > 0 or window[1] < 5.0 * duration):
        raise ConfigError("pulse.t_max: window must contain [0, T] plus a 4T margin after T")
    cfg.flag("pulse", "satellites")
    if cfg.integer("spectrum", "points") < 2:
        raise ConfigError("spectrum.points: must be >= 2")
    if not cfg.number("spectrum", "stop") > cfg.number("spectrum", "start"):
        raise ConfigError("spectrum.stop: must exceed spectrum.start")
    if cfg.integer("tune", "points") < 16:
        raise ConfigError("tune.points: must be >= 16")
    if cfg.get("tune", "objective") not in (carrier_tuner.MAX_STORED_FRACTION, carrier_tuner.MAX_DELAY):
        raise ConfigError(f"tune.objective: unknown objective {cfg.get('tune', 'objective')!r}")
    if not 0 < cfg.number("tune", "min_transmission") <= 1:
        raise ConfigError("tune.min_transmission: must lie in (0, 1]")
    cfg.maybe_number("tune", "carrier_min")
    cfg.maybe_number("tune", "carrier_max")
    if cfg.number("tune", "half_span") <= 0:
        raise ConfigError("tune.half_span: must be positive")
    if cfg.integer("info", "eta_points") < 2:
        raise ConfigError("info.eta_points: must be >= 2")
    eta_min, eta_max = cfg.number("info", "eta_min"), cfg.number("info", "eta_max")
    if not 0 <= eta_min < eta_max <= 1:
        raise ConfigError("info.eta_min: need 0 <= eta_min < eta_max <= 1")
    if any(s < 1 for s in cfg.numbers("info", "squeezing")):
        raise ConfigError("info.squeezing: every value must be >= 1")
    if cfg.get("info", "units") not in (info_merit.NATS, info_merit.BITS):
        raise ConfigError("info.units: expected 'nats' or 'bits'")
    if any(not 0 < e < 1 for e in cfg.numbers("info", "sp_eta")):
        raise ConfigError("info.sp_eta: every value must lie in (0, 1)")
    if any(not 0 <= m < 1 for m in cfg.numbers("info", "mu")):
        raise ConfigError("info.mu: every value must lie in [0, 1)")
    return cfg


def _write_csv(path: Path, meta: Sequence[str], header: Sequence[str], rows) -> None:
    buf = io.StringIO()
    for line in meta:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def read_csv(path: Path) -> Tuple[List[str], List[List[str]]]:
    """Parse an emitted CSV back into (header, rows), skipping ``#`` lines."""
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1:]


def sibling_path(out: Path, tag: str) -> Path:
    out = Path(out)
    return out.with_name(f"{out.stem}.{tag}{out.suffix or '.csv'}")


def cmd_spectrum(cfg: RunConfig, out: Path) -> str:
    start, stop = cfg.number("spectrum", "start"), cfg.number("spectrum", "stop")
    points = cfg.integer("spectrum", "points")
    full = dressed_medium.spectrum(cfg.atom, cfg.control, start, stop, points, "full")
    lam = dressed_medium.spectrum(cfg.atom, cfg.control, start, stop, points, "lambda")
    roots = dressed_medium.locate_at_resonances(cfg.atom, cfg.control)
    meta = cfg.echo() + [
        f"resonance.{r.index} = {fmt(r.position)} width {fmt(r.width)}" for r in roots
    ]
    rows = zip(full.detunings, full.real, full.imag, lam.real, lam.imag)
    _write_csv(out, meta, ["delta_bar", "chi_re_full", "chi_im_full", "chi_re_lambda", "chi_im_lambda"], rows)
    return f"spectrum: {points} points written to {out}"


def _tune(cfg: RunConfig, duration: float) -> carrier_tuner.TuneResult:
    res = dressed_medium.raman_resonance(cfg.atom, cfg.control).position
    span = cfg.number("tune", "half_span")
    lo = cfg.maybe_number("tune", "carrier_min")
    hi = cfg.maybe_number("tune", "carrier_max")
    lo = res - span if lo is None else lo
    hi = res + span if hi is None else hi
    objective = carrier_tuner.TuneObjective(
        cfg.get("tune", "objective"), cfg.number("tune", "min_transmission")
    )
    return carrier_tuner.scan(
        cfg.atom, cfg.control, cfg.medium, duration, (lo, hi), cfg.integer("tune", "points"),
        objective, window=_window(cfg, duration), samples=cfg.integer("pulse", "samples"),
    )


def _window(cfg: RunConfig, duration: float) -> Optional[Tuple[float, float]]:
    t_min = cfg.maybe_number("pulse", "t_min")
    t_max = cfg.maybe_number("pulse", "t_max")
    if t_min is None and t_max is None:
        return None
    return (-2.0 * duration if t_min is None else t_min, 62.0 * duration if t_max is None else t_max)


def cmd_propagate(cfg: RunConfig, out: Path) -> str:
    T = cfg.number("pulse", "duration")
    carrier = cfg.maybe_number("pulse", "carrier")
    meta_extra = []
    if carrier is None:
        carrier = _tune(cfg, T).best_carrier
        meta_extra.append(f"tuned carrier = {fmt(carrier)}")
    carriers = [carrier]
    labels = ["intensity_out"]
    if cfg.flag("pulse", "satellites"):
        shift = 2.0 * math.pi / T
        carriers = [carrier - shift, carrier, carrier + shift]
        labels = ["intensity_out_minus", "intensity_out_center", "intensity_out_plus"]

    cutoff = cfg.maybe_number("pulse", "cutoff")
    chi = partial(dressed_medium.susceptibility_full, cfg.atom, cfg.control)
    window = _window(cfg, T)
    samples = cfg.integer("pulse", "samples")
    outputs = []
    summary = []
    pulse_in = None
    for label, c in zip(labels, carriers):
        pulse_in = pulse_transport.make_rectangular(PulseSpec(T, c), window, samples)
        pulse_out = pulse_transport.propagate(pulse_in, cfg.medium, chi)
        m = pulse_transport.metrics(pulse_in, pulse_out, cutoff)
        outputs.append(pulse_out.intensity)
        summary.append(
            f"metrics {label}: carrier = {fmt(c)} transmission = {fmt(m.transmission)} "
            f"delay = {fmt(m.delay)} stored_fraction = {fmt(m.stored_fraction)}"
        )
    stride = cfg.integer("pulse", "stride")
    sel = slice(None, None, stride)
    columns = [pulse_in.times[sel], pulse_in.intensity[sel]] + [o[sel] for o in outputs]
    _write_csv(out, cfg.echo() + meta_extra + summary, ["time", "intensity_in"] + labels, zip(*columns))
    return "\n".join(summary)


def cmd_tune(cfg: RunConfig, out: Path) -> str:
    result = _tune(cfg, cfg.number("pulse", "duration"))
    m = result.metrics
    summary = (
        f"best carrier = {fmt(result.best_carrier)} transmission = {fmt(m.transmission)} "
        f"delay = {fmt(m.delay)} stored_fraction = {fmt(m.stored_fraction)}"
    )
    rows = [
        (c, tm.transmission, tm.delay, tm.stored_fraction, result.objective(tm))
        for c, tm in result.scan_trace
    ]
    _write_csv(out, cfg.echo() + [summary],
               ["carrier", "transmission", "delay", "stored_fraction", "objective"], rows)
    return summary


def cmd_info(cfg: RunConfig, out: Path) -> str:
    units = cfg.get("info", "units")
    etas = np.linspace(cfg.number("info", "eta_min"), cfg.number("info", "eta_max"),
                       cfg.integer("info", "eta_points"))
    table = info_merit.fig4_curves(etas.tolist(), cfg.numbers("info", "squeezing"), units)
    _write_csv(out, cfg.echo(), ["eta", "s", "I_e", "units"],
               [(eta, s, val, units) for eta, s, val in table])

    sp_rows = []
    for eta in cfg.numbers("info", "sp_eta"):
        for mu in cfg.numbers("info", "mu"):
            res = info_merit.single_photon_coherent_info(info_merit.ChannelParams(eta, mu))
            sp_rows.append((eta, mu, res.value, "true" if res.valid else "false"))
    sp_path = sibling_path(out, "single_photon")
    _write_csv(sp_path, cfg.echo() + ["I_e in bits"], ["eta", "mu", "I_e", "valid"], sp_rows)
    return f"info: {len(table)} rows to {out}, {len(sp_rows)} rows to {sp_path}"


COMMANDS = {
    "spectrum": cmd_spectrum,
    "propagate": cmd_propagate,
    "tune": cmd_tune,
    "info": cmd_info,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="raman-memory", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", type=Path, help="INI-style configuration file")
    parser.add_argument("--out", type=Path, help="output CSV path (default: <command>.csv)")
    parser.add_argument("--override", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override one config field; repeatable")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    out = args.out or Path(f"{args.command}.csv")
    try:
        cfg = load_config(args.config, args.override)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        message = COMMANDS[args.command](cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RamanMemoryError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(message)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
