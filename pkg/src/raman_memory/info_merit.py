"""Coherent-information figures of merit for a lossy memory channel.

Thermal-state entropies are computed in nats and the single-photon
benchmark in bits; every entropy carries its unit so the two are never mixed
silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Tuple

from .errors import (
    EfficiencyOutOfRange,
    InvalidParameters,
    InvalidSqueezing,
    NegativePhotonNumber,
    UnitMismatch,
)

NATS = "nats"
BITS = "bits"
_UNITS = (NATS, BITS)
_SERIES_BELOW = 1e-8


def _check_units(units: str) -> None:
    if units not in _UNITS:
        raise UnitMismatch(f"unknown entropy unit {units!r}")


@dataclass(frozen=True)
class EntropyValue:
    value: float
    units: str = NATS

    def __post_init__(self):
        _check_units(self.units)
        if self.value < 0:
            raise InvalidParameters(f"entropy must be non-negative, got {self.value}")

    def to(self, units: str) -> "EntropyValue":
        _check_units(units)
        if units == self.units:
            return self
        factor = 1.0 / math.log(2.0) if units == BITS else math.log(2.0)
        return EntropyValue(self.value * factor, units)


@dataclass(frozen=True)
class ChannelParams:
    eta: float
    mu: float = 0.0

    def __post_init__(self):
        if not 0 <= self.eta <= 1:
            raise EfficiencyOutOfRange(f"eta must lie in [0, 1], got {self.eta}")
        if not 0 <= self.mu < 1:
            raise InvalidParameters(f"mu must lie in [0, 1), got {self.mu}")


@dataclass(frozen=True)
class EprSource:
    squeezing: float

    def __post_init__(self):
        if not self.squeezing >= 1:
            raise InvalidSqueezing(f"squeezing must be >= 1, got {self.squeezing}")

    @property
    def mean_photons(self) -> float:
        return mean_photons(self.squeezing)


def coherent_information(s_out: EntropyValue, s_joint: EntropyValue) -> float:
    """Entropy of the retrieved light minus that of light plus reference."""
    if s_out.units != s_joint.units:
        raise UnitMismatch(f"cannot subtract {s_joint.units} from {s_out.units}")
    return s_out.value - s_joint.value


def mean_photons(s: float) -> float:
    """Mean photon number per beam after splitting two squeezed modes."""
    if not s >= 1:
        raise InvalidSqueezing(f"squeezing must be >= 1, got {s}")
    return -0.5 + 0.25 * (s + 1.0 / s)


def thermal_entropy(n_bar: float, units: str = NATS) -> EntropyValue:
    """von Neumann entropy of a thermal mode with mean occupation ``n_bar``."""
    _check_units(units)
    if n_bar < 0:
        raise NegativePhotonNumber(f"mean photon number must be >= 0, got {n_bar}")
    if n_bar < _SERIES_BELOW:
        # (n+1)ln(n+1) - n ln n = n - n ln n + n^2/2 + O(n^3)
        value = n_bar - n_bar * math.log(n_bar) + 0.5 * n_bar * n_bar if n_bar > 0 else 0.0
    elif n_bar < 1.0:
        value = (n_bar + 1.0) * math.log1p(n_bar) - n_bar * math.log(n_bar)
    else:
        # same expression regrouped to avoid cancellation at large occupation
        value = math.log1p(n_bar) + n_bar * math.log1p(1.0 / n_bar)
    return EntropyValue(value, NATS).to(units)


def cv_coherent_info(eta: float, s: float, units: str = NATS) -> float:
    """Coherent information left after a pure-loss channel with transmission ``eta``.

    The reference-plus-output entropy equals the entropy dumped into the
    initially empty environment, ``S((1 - eta) n)``.
    """
    ChannelParams(eta)
    n = mean_photons(s)
    out = thermal_entropy(eta * n, units)
    env = thermal_entropy((1.0 - eta) * n, units)
    return coherent_information(out, env)


@dataclass(frozen=True)
class SinglePhotonInfo:
    value: float
    valid: bool
    units: str = BITS


def single_photon_coherent_info(params: ChannelParams) -> SinglePhotonInfo:
    """Asymptotic coherent information of the heralded single-photon memory, in bits.

    Meaningful only for ``mu << eta``; ``valid`` is False when ``mu > eta/10``
    or when the noise correction exceeds 0.5.
    """
    eta, mu = params.eta, params.mu
    if not 0 < eta < 1:
        raise EfficiencyOutOfRange(f"eta must lie in (0, 1), got {eta}")
    x = mu * (1.0 - eta)
    if x == 0:
        correction = 0.0
    else:
        correction = 3.0 * x / (4.0 * eta) * math.log2(4.0 * math.e * eta / x)
    valid = mu <= eta / 10.0 and correction <= 0.5
    return SinglePhotonInfo(value=1.0 - correction, valid=valid)


def fig4_curves(etas: Iterable[float], squeezings: Iterable[float],
                units: str = NATS) -> List[Tuple[float, float, float]]:
    """Table of (eta, s, I_e) rows, squeezing-major."""
    etas = list(etas)
    rows = []
    for s in squeezings:
        for eta in etas:
            rows.append((eta, s, cv_coherent_info(eta, s, units)))
    return rows
