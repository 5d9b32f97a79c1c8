from pathlib import Path

import numpy as np
import pytest

from raman_memory.cli import ConfigError, load_config, main, read_csv, sibling_path
from raman_memory.dressed_medium import spectrum, steady_state_susceptibility

FIXTURES = Path(__file__).parent / "fixtures"
FAST = ["--override", "pulse.samples=16384", "--override", "pulse.carrier=48.5"]


def run(tmp_path, command, *args, name=None):
    out = tmp_path / (name or f"{command}.csv")
    code = main([command, "--out", str(out), *args])
    return code, out


@pytest.mark.parametrize("command", ["spectrum", "tune", "propagate", "info"])
def test_golden_outputs(tmp_path, command):
    code, out = run(tmp_path, command)
    assert code == 0
    assert out.read_bytes() == (FIXTURES / f"{command}.csv").read_bytes()
    if command == "info":
        sp = sibling_path(out, "single_photon")
        assert sp.read_bytes() == (FIXTURES / "info.single_photon.csv").read_bytes()


def test_spectrum_fixture_matches_amplitude_oracle():
    cfg = load_config()
    header, rows = read_csv(FIXTURES / "spectrum.csv")
    assert header[:3] == ["delta_bar", "chi_re_full", "chi_im_full"]
    data = np.array(rows, dtype=float)
    oracle = np.array([steady_state_susceptibility(cfg.atom, cfg.control, x) for x in data[::20, 0]])
    chi = data[::20, 1] + 1j * data[::20, 2]
    np.testing.assert_allclose(chi, oracle, rtol=1e-12, atol=1e-14)


def test_csv_round_trips_exactly(tmp_path):
    code, out = run(tmp_path, "spectrum", "--override", "spectrum.points=257")
    assert code == 0
    _, rows = read_csv(out)
    cfg = load_config()
    spec = spectrum(cfg.atom, cfg.control, -100, 350, 257)
    assert np.array_equal(np.array(rows, dtype=float)[:, 1], spec.real)
    assert np.array_equal(np.array(rows, dtype=float)[:, 2], spec.imag)


def test_repeated_runs_are_identical(tmp_path):
    _, a = run(tmp_path, "propagate", *FAST, name="a.csv")
    _, b = run(tmp_path, "propagate", *FAST, name="b.csv")
    assert a.read_bytes() == b.read_bytes()


def test_lambda_columns_equal_full_without_far_level(tmp_path):
    code, out = run(tmp_path, "spectrum", "--override", "atom.weights=explicit",
                    "--override", "atom.w_nprime=0", "--override", "atom.control_ratio=0",
                    "--override", "spectrum.points=501")
    assert code == 0
    data = np.array(read_csv(out)[1], dtype=float)
    np.testing.assert_allclose(data[:, 3], data[:, 1], rtol=1e-12, atol=1e-13)
    np.testing.assert_allclose(data[:, 4], data[:, 2], rtol=1e-12, atol=1e-13)


def test_satellite_mode_writes_three_outputs(tmp_path, capsys):
    code, out = run(tmp_path, "propagate", *FAST, "--override", "pulse.satellites=true")
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["time", "intensity_in", "intensity_out_minus", "intensity_out_center",
                      "intensity_out_plus"]
    assert len(rows) == 16384 // 64
    assert capsys.readouterr().out.count("metrics") == 3


def test_config_file_and_overrides(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[control]\nrabi = 20\ndetuning = -50 ; red wing\n[medium]\nod = 10\n")
    cfg = load_config(ini, ["control.rabi=12"])
    assert cfg.control.rabi == 12.0
    assert cfg.control.detuning == -50.0
    assert cfg.medium.od == 10.0
    assert cfg.atom.probe_weights == pytest.approx((7 / 12, 1 / 12), abs=1e-15)


@pytest.mark.parametrize("override, field", [
    ("control.rabi=-1", "control.rabi"),
    ("medium.od=abc", "medium.od"),
    ("pulse.samples=1000", "pulse.samples"),
    ("pulse.t_max=20", "pulse.t_max"),
    ("tune.objective=fastest", "tune.objective"),
    ("info.eta_max=1.5", "info.eta_min"),
    ("info.squeezing=0.5", "info.squeezing"),
    ("atom.weights=guess", "atom.weights"),
    ("nosuch.key=1", "nosuch"),
    ("control.colour=red", "control.colour"),
])
def test_bad_config_names_the_field(override, field):
    with pytest.raises(ConfigError, match=field):
        load_config(None, [override])


def test_exit_code_for_bad_config(tmp_path, capsys):
    code, _ = run(tmp_path, "spectrum", "--override", "spectrum.points=1")
    assert code == 2
    assert "spectrum.points" in capsys.readouterr().err
    missing = tmp_path / "missing.ini"
    assert main(["info", "--config", str(missing), "--out", str(tmp_path / "x.csv")]) == 2


def test_exit_code_for_numerical_failure(tmp_path, capsys):
    code, _ = run(tmp_path, "tune", "--override", "tune.carrier_min=100",
                  "--override", "tune.carrier_max=120", "--override", "pulse.samples=16384")
    assert code == 3
    assert "RangeMissesResonance" in capsys.readouterr().err
    code, _ = run(tmp_path, "tune", "--override", "medium.od=0", "--override", "tune.points=16",
                  "--override", "pulse.samples=16384")
    assert code == 3


def test_zero_od_columns_match(tmp_path):
    code, out = run(tmp_path, "propagate", *FAST, "--override", "medium.od=0")
    assert code == 0
    data = np.array(read_csv(out)[1], dtype=float)
    np.testing.assert_allclose(data[:, 2], data[:, 1], atol=1e-12)
