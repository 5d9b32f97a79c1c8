"""Carrier-detuning search for the best transparency/delay compromise."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.optimize

from .dressed_medium import AtomSystem, ControlField, Model, raman_resonance, susceptibility
from .errors import InvalidParameters, ObjectiveAllZero, RangeMissesResonance
from .pulse_transport import (
    DEFAULT_SAMPLES,
    Medium,
    PulseSpec,
    TransportMetrics,
    make_rectangular,
    metrics,
    propagate,
)

MAX_STORED_FRACTION = "max_stored_fraction"
MAX_DELAY = "max_delay_subject_to_transmission"
CARRIER_TOL = 1e-3
_ZERO = 1e-9


@dataclass(frozen=True)
class TuneObjective:
    mode: str = MAX_STORED_FRACTION
    min_transmission: float = 0.5

    def __post_init__(self):
        if self.mode not in (MAX_STORED_FRACTION, MAX_DELAY):
            raise InvalidParameters(f"unknown objective mode {self.mode!r}")
        if not 0 < self.min_transmission <= 1:
            raise InvalidParameters("min_transmission must lie in (0, 1]")

    def __call__(self, m: TransportMetrics) -> float:
        if self.mode == MAX_STORED_FRACTION:
            return m.stored_fraction
        if m.transmission < self.min_transmission:
            return -math.inf
        return m.delay


@dataclass(frozen=True)
class TuneResult:
    best_carrier: float
    metrics: TransportMetrics
    scan_trace: Tuple[Tuple[float, TransportMetrics], ...]
    duration: float
    objective: TuneObjective

    @property
    def best_value(self) -> float:
        return self.objective(self.metrics)


def evaluate_carrier(atom: AtomSystem, ctrl: ControlField, medium: Medium, duration: float,
                     carrier: float, window: Optional[Tuple[float, float]] = None,
                     samples: int = DEFAULT_SAMPLES, model: Model = "full") -> TransportMetrics:
    """Propagate one rectangular pulse and return its transport metrics."""
    chi = partial(susceptibility, atom, ctrl, model=model)
    pulse = make_rectangular(PulseSpec(duration, carrier), window, samples)
    return metrics(pulse, propagate(pulse, medium, chi))


def scan(atom: AtomSystem, ctrl: ControlField, medium: Medium, duration: float,
         carrier_range: Tuple[float, float], points: int = 64,
         objective: TuneObjective = TuneObjective(),
         window: Optional[Tuple[float, float]] = None, samples: int = DEFAULT_SAMPLES,
         model: Model = "full", refine: bool = True, workers: int = 1) -> TuneResult:
    """Grid scan of the carrier followed by golden-section refinement.

    The range must contain the Raman (control-frequency) member of the
    Autler-Townes triplet. Grid points are independent and may be evaluated
    on ``workers`` threads; results are reduced in grid order, so the outcome
    does not depend on the worker count.
    """
    if points < 16:
        raise InvalidParameters(f"scan needs at least 16 points, got {points}")
    lo, hi = carrier_range
    if not hi > lo:
        raise InvalidParameters("carrier range must be increasing")
    model_atom = atom.lambda_reduced() if model == "lambda" else atom
    resonance = raman_resonance(model_atom, ctrl).position
    if not lo < resonance < hi:
        raise RangeMissesResonance(
            f"carrier range [{lo}, {hi}] does not contain the Raman resonance at {resonance:.6g}"
        )

    evaluate = partial(evaluate_carrier, atom, ctrl, medium, duration,
                       window=window, samples=samples, model=model)
    carriers = np.linspace(lo, hi, points)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            grid_metrics = list(pool.map(evaluate, carriers))
    else:
        grid_metrics = [evaluate(c) for c in carriers]
    values = np.array([objective(m) for m in grid_metrics])

    finite = values[np.isfinite(values)]
    if finite.size == 0 or finite.max() <= _ZERO:
        raise ObjectiveAllZero(f"objective {objective.mode} vanishes over the whole scan")

    trace: List[Tuple[float, TransportMetrics]] = list(zip(carriers.tolist(), grid_metrics))
    k = _argmax(carriers, values, resonance)
    best_x, best_m, best_v = float(carriers[k]), grid_metrics[k], values[k]

    if refine and 0 < k < points - 1:
        cache = {}

        def negative(x: float) -> float:
            m = evaluate(x)
            cache[x] = m
            v = objective(m)
            return -v if np.isfinite(v) else math.inf

        xtol = CARRIER_TOL / (2.0 * max(abs(best_x), 1.0))
        bracket = (float(carriers[k - 1]), best_x, float(carriers[k + 1]))
        try:
            res = scipy.optimize.minimize_scalar(
                negative, bracket=bracket, method="golden", options={"xtol": xtol}
            )
        except ValueError:
            # flat neighbourhood: the grid point already is the optimum
            res = None
        if res is not None:
            x = float(res.x)
            m = cache[x] if x in cache else evaluate(x)
            v = objective(m)
            if v > best_v or (v == best_v and abs(x - resonance) < abs(best_x - resonance)):
                best_x, best_m, best_v = x, m, v
                trace.append((x, m))
                trace.sort(key=lambda item: item[0])

    return TuneResult(best_carrier=best_x, metrics=best_m, scan_trace=tuple(trace),
                      duration=duration, objective=objective)


def scan_durations(atom: AtomSystem, ctrl: ControlField, medium: Medium,
                   durations: Sequence[float], carrier_range: Tuple[float, float],
                   points: int = 64, objective: TuneObjective = TuneObjective(),
                   **kwargs) -> Tuple[TuneResult, Tuple[TuneResult, ...]]:
    """Carrier scan repeated for each pulse duration; returns (best, all)."""
    if not durations:
        raise InvalidParameters("durations must not be empty")
    results = tuple(
        scan(atom, ctrl, medium, T, carrier_range, points, objective, **kwargs)
        for T in durations
    )
    best = max(results, key=lambda r: r.best_value)
    return best, results


def _argmax(carriers: np.ndarray, values: np.ndarray, resonance: float) -> int:
    best = np.max(values)
    ties = np.flatnonzero(values == best)
    return int(min(ties, key=lambda i: (abs(carriers[i] - resonance), i)))
