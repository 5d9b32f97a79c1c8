"""Wigner 3j/6j symbols and hyperfine dipole transition weights.

Racah sums are evaluated in exact rational arithmetic (Python integers and
``fractions.Fraction``); only the final square root is taken in floating
point, so the returned doubles are correctly rounded up to one ulp even for
large angular momenta.

All quantum numbers may be passed as ``HalfInt``, ``int``, ``float`` or
``Fraction``; internally they are handled as doubled integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple, Union

from .errors import InvalidQuantumNumbers


@dataclass(frozen=True, order=True)
class HalfInt:
    """An integer or half-integer stored as twice its value."""

    twice_value: int

    @classmethod
    def of(cls, value) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        return cls(_twice(value))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    def __float__(self) -> float:
        return self.twice_value / 2

    def __repr__(self) -> str:
        if self.twice_value % 2:
            return f"HalfInt({self.twice_value}/2)"
        return f"HalfInt({self.twice_value // 2})"


Number = Union[HalfInt, int, float, Fraction]


def _twice(x: Number) -> int:
    if isinstance(x, HalfInt):
        return x.twice_value
    d = 2 * Fraction(x)
    if d.denominator != 1:
        raise InvalidQuantumNumbers(f"{x!r} is not an integer or half-integer")
    return int(d)


def _fact(twice: int) -> int:
    # factorial of an integer passed in doubled form
    return math.factorial(twice // 2)


def _triangle_ok(a: int, b: int, c: int) -> bool:
    """Triangle rule on doubled values, including integer perimeter."""
    return (
        a >= 0 and b >= 0 and c >= 0
        and c <= a + b and c >= abs(a - b)
        and (a + b + c) % 2 == 0
    )


def _delta(a: int, b: int, c: int) -> Fraction:
    return Fraction(
        _fact(a + b - c) * _fact(a - b + c) * _fact(-a + b + c),
        _fact(a + b + c + 2),
    )


def _signed_sqrt(sum_part: Fraction, radicand: Fraction) -> float:
    if sum_part == 0 or radicand == 0:
        return 0.0
    mag = math.sqrt(float(sum_part * sum_part * radicand))
    return mag if sum_part > 0 else -mag


@lru_cache(maxsize=65536)
def _wigner_3j_twice(j1: int, j2: int, j3: int, m1: int, m2: int, m3: int) -> float:
    if m1 + m2 + m3 != 0:
        return 0.0
    if not _triangle_ok(j1, j2, j3):
        return 0.0
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        if abs(m) > j or (j - m) % 2:
            return 0.0

    # all of the following are doubled integers with even values
    k1 = j3 - j2 + m1
    k2 = j3 - j1 - m2
    n1 = j1 + j2 - j3
    n2 = j1 - m1
    n3 = j2 + m2
    tmin = max(0, -k1, -k2)
    tmax = min(n1, n2, n3)
    total = Fraction(0)
    for t in range(tmin, tmax + 1, 2):
        denom = (
            _fact(t) * _fact(k1 + t) * _fact(k2 + t)
            * _fact(n1 - t) * _fact(n2 - t) * _fact(n3 - t)
        )
        term = Fraction(1, denom)
        total += -term if (t // 2) % 2 else term

    radicand = _delta(j1, j2, j3) * (
        _fact(j1 + m1) * _fact(j1 - m1)
        * _fact(j2 + m2) * _fact(j2 - m2)
        * _fact(j3 + m3) * _fact(j3 - m3)
    )
    phase = (j1 - j2 - m3) // 2
    if phase % 2:
        total = -total
    return _signed_sqrt(total, radicand)


@lru_cache(maxsize=65536)
def _wigner_6j_twice(j1: int, j2: int, j3: int, j4: int, j5: int, j6: int) -> float:
    triads = ((j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3))
    if not all(_triangle_ok(*t) for t in triads):
        return 0.0
    a = [sum(t) for t in triads]
    b = [j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4]
    tmin = max(a)
    tmax = min(b)
    total = Fraction(0)
    for t in range(tmin, tmax + 1, 2):
        num = _fact(t + 2)
        denom = 1
        for ai in a:
            denom *= _fact(t - ai)
        for bi in b:
            denom *= _fact(bi - t)
        term = Fraction(num, denom)
        total += -term if (t // 2) % 2 else term

    radicand = Fraction(1)
    for tri in triads:
        radicand *= _delta(*tri)
    return _signed_sqrt(total, radicand)


def wigner_3j(j1: Number, j2: Number, j3: Number,
              m1: Number, m2: Number, m3: Number) -> float:
    """Wigner 3j symbol ``(j1 j2 j3; m1 m2 m3)``.

    Returns 0 whenever a selection rule fails (triangle, ``m1+m2+m3 = 0``,
    ``|m| <= j`` or parity) rather than raising.
    """
    return _wigner_3j_twice(*(_twice(x) for x in (j1, j2, j3, m1, m2, m3)))


def wigner_6j(j1: Number, j2: Number, j3: Number,
              j4: Number, j5: Number, j6: Number) -> float:
    """Wigner 6j symbol ``{j1 j2 j3; j4 j5 j6}``; 0 if any triad fails."""
    return _wigner_6j_twice(*(_twice(x) for x in (j1, j2, j3, j4, j5, j6)))


def clebsch_gordan(j1: Number, m1: Number, j2: Number, m2: Number,
                   j: Number, m: Number) -> float:
    """``<j1 m1; j2 m2 | j m>`` via the 3j symbol."""
    tj1, tj2, tm = _twice(j1), _twice(j2), _twice(m)
    phase = (tj1 - tj2 + tm) // 2
    val = math.sqrt(_twice(j) + 1) * wigner_3j(j1, j2, j, m1, m2, -Fraction(tm, 2))
    return -val if phase % 2 else val


@dataclass(frozen=True)
class TransitionWeight:
    ground: Tuple[HalfInt, HalfInt]
    excited: Tuple[HalfInt, HalfInt]
    q: int
    weight: float


def _check_hyperfine(J: int, I: int, F: int, label: str) -> None:
    if not _triangle_ok(J, I, F):
        raise InvalidQuantumNumbers(
            f"{label}: F={F / 2} cannot be built from J={J / 2} and I={I / 2}"
        )


def dipole_amplitude(line: Tuple[Number, Number], I: Number,
                     ground: Tuple[Number, Number], excited: Tuple[Number, Number],
                     q: int) -> float:
    """Signed matrix element <F' M'| d_q |F M> in units of the reduced
    fine-structure element, scaled by sqrt(2J+1) so that squared amplitudes
    summed over F', M', q give 1.
    """
    J, Jp = (_twice(x) for x in line)
    tI = _twice(I)
    F, M = (_twice(x) for x in ground)
    Fp, Mp = (_twice(x) for x in excited)
    _check_hyperfine(J, tI, F, "ground")
    _check_hyperfine(Jp, tI, Fp, "excited")
    if q not in (-1, 0, 1):
        raise InvalidQuantumNumbers(f"polarization q={q} not in (-1, 0, 1)")
    if abs(M) > F or (F - M) % 2 or abs(Mp) > Fp or (Fp - Mp) % 2:
        raise InvalidQuantumNumbers("magnetic quantum number out of range")
    if Mp != M + 2 * q:
        return 0.0

    three_j = _wigner_3j_twice(Fp, 2, F, -Mp, 2 * q, M)
    six_j = _wigner_6j_twice(Jp, Fp, tI, F, J, 2)
    phase = (Fp - Mp) // 2 + (Jp + tI + F + 2) // 2
    amp = math.sqrt((J + 1) * (Fp + 1) * (F + 1)) * three_j * six_j
    return -amp if phase % 2 else amp


def transition_weight(line: Tuple[Number, Number], I: Number,
                      ground: Tuple[Number, Number], excited: Tuple[Number, Number],
                      q: int) -> TransitionWeight:
    """Relative strength of one hyperfine Zeeman component of a J -> J' line.

    ``w = (2F'+1)(2J+1) {J J' 1; F' F I}^2 * (2F+1) (F 1 F'; M q -M')^2``,
    which equals the usual Clebsch-Gordan form normalized so that the sum over
    all F', M' and q is exactly 1 for every ground sublevel.
    """
    amp = dipole_amplitude(line, I, ground, excited, q)
    return TransitionWeight(
        ground=(HalfInt.of(ground[0]), HalfInt.of(ground[1])),
        excited=(HalfInt.of(excited[0]), HalfInt.of(excited[1])),
        q=q,
        weight=amp * amp,
    )


@dataclass(frozen=True)
class D1Couplings:
    """Couplings of the four-level D1 scheme with sigma- probe and sigma+ control.

    ``probe_n``/``probe_nprime`` are signed amplitudes of |m> -> |n>, |n'>;
    ``control_n``/``control_nprime`` of |m'> -> |n>, |n'>.
    """

    probe_n: float
    probe_nprime: float
    control_n: float
    control_nprime: float

    @property
    def probe_weights(self) -> Tuple[float, float]:
        return self.probe_n ** 2, self.probe_nprime ** 2

    @property
    def control_ratio(self) -> float:
        # Phase of |n'> is chosen so both probe amplitudes are positive; the
        # relative sign then lives in the control ratio.
        sign = math.copysign(1.0, self.probe_n * self.probe_nprime)
        return sign * self.control_nprime / self.control_n


def d1_couplings(I: Number) -> D1Couplings:
    """Dipole couplings for the D1 scheme of an alkali atom with nuclear spin I.

    |m> = (F+, M=F+), |m'> = (F-, M=F+ - 2), |n> = (F'-, F+ - 1),
    |n'> = (F'+, F+ - 1), with F± = I ± 1/2.
    """
    tI = _twice(I)
    if tI < 3:
        raise InvalidQuantumNumbers("the D1 scheme needs I >= 3/2")
    line = (Fraction(1, 2), Fraction(1, 2))
    f_plus = Fraction(tI + 1, 2)
    f_minus = Fraction(tI - 1, 2)
    m = (f_plus, f_plus)
    m_prime = (f_minus, f_plus - 2)
    n = (f_minus, f_plus - 1)
    n_prime = (f_plus, f_plus - 1)
    return D1Couplings(
        probe_n=dipole_amplitude(line, I, m, n, -1),
        probe_nprime=dipole_amplitude(line, I, m, n_prime, -1),
        control_n=dipole_amplitude(line, I, m_prime, n, +1),
        control_nprime=dipole_amplitude(line, I, m_prime, n_prime, +1),
    )
