"""Probe susceptibility of an alkali D1 ensemble dressed by a control field.

Level scheme: population in |m>, the sigma- probe couples |m> to the two
excited hyperfine sublevels |n> (at 0) and |n'> (at +delta_hf), and the sigma+
control couples those to the storage state |m'>. All frequencies are in units
of the excited-state decay rate gamma, times in units of 1/gamma.

The scaled susceptibility is normalized so that a closed two-level transition
gives ``chi'' = 6*pi`` on resonance; ``exp(-od * chi'')`` is then the
intensity transmission of a sample with resonant optical depth ``od``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal, Tuple

import numpy as np
import scipy.signal

from .angular_momentum import d1_couplings
from .errors import InvalidParameters

Model = Literal["full", "lambda", "bare"]

CS133_NUCLEAR_SPIN = 3.5
CS133_D1_HYPERFINE = 256.0


@dataclass(frozen=True)
class AtomSystem:
    delta_hf: float = CS133_D1_HYPERFINE
    gamma: float = 1.0
    gamma_0: float = 1e-6
    probe_weights: Tuple[float, float] = (7 / 12, 1 / 12)
    control_ratio: float = -np.sqrt(7.0)

    def __post_init__(self):
        if not self.gamma > 0:
            raise InvalidParameters(f"gamma must be positive, got {self.gamma}")
        if not self.delta_hf > 0:
            raise InvalidParameters(f"delta_hf must be positive, got {self.delta_hf}")
        if not self.gamma_0 >= 0:
            raise InvalidParameters(f"gamma_0 must be non-negative, got {self.gamma_0}")
        w_n, w_np = self.probe_weights
        if not (0 <= w_n <= 1 and 0 <= w_np <= 1):
            raise InvalidParameters(f"probe_weights must lie in [0, 1], got {self.probe_weights}")
        if not np.isfinite(self.control_ratio):
            raise InvalidParameters("control_ratio must be finite")

    @classmethod
    def alkali_d1(cls, nuclear_spin: float = CS133_NUCLEAR_SPIN,
                  delta_hf: float = CS133_D1_HYPERFINE, gamma_0: float = 1e-6) -> "AtomSystem":
        """Atom with weights and control ratio derived from Racah algebra."""
        c = d1_couplings(nuclear_spin)
        return cls(delta_hf=delta_hf, gamma_0=gamma_0,
                   probe_weights=c.probe_weights, control_ratio=c.control_ratio)

    def lambda_reduced(self) -> "AtomSystem":
        """Same atom with |n'> removed from both probe and control channels."""
        return replace(self, probe_weights=(self.probe_weights[0], 0.0), control_ratio=0.0)


@dataclass(frozen=True)
class ControlField:
    rabi: float = 15.0
    detuning: float = 50.0

    def __post_init__(self):
        if not self.rabi >= 0:
            raise InvalidParameters(f"control rabi must be non-negative, got {self.rabi}")


@dataclass(frozen=True)
class SusceptibilitySpectrum:
    detunings: np.ndarray
    values: np.ndarray
    model: str = "full"
    meta: dict = field(default_factory=dict)

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    @property
    def imag(self) -> np.ndarray:
        return self.values.imag


@dataclass(frozen=True)
class AtResonance:
    position: float
    width: float
    index: int


def susceptibility_full(atom: AtomSystem, ctrl: ControlField, delta_bar):
    """Scaled susceptibility with both excited hyperfine sublevels retained.

    ``chi = -3*pi*gamma * v^T K^{-1} v`` with ``v = (sqrt(w_n), sqrt(w_n'))``
    and ``K = D - u u^T / (4 (delta + i gamma_0))`` the excited-state block
    left after eliminating |m'> (``D`` the bare excited denominators, ``u``
    the control Rabi frequencies), evaluated in closed form so it stays finite
    as ``gamma_0 -> 0``. Accepts scalars or arrays for ``delta_bar``.
    """
    d = np.asarray(delta_bar, dtype=float)
    g = atom.gamma
    w_n, w_np = atom.probe_weights
    om_n = ctrl.rabi
    om_np = atom.control_ratio * ctrl.rabi

    d_n = d + 0.5j * g
    d_np = d - atom.delta_hf + 0.5j * g
    ground = 4.0 * ((d - ctrl.detuning) + 1j * atom.gamma_0)
    # v^T K^{-1} v over the common denominator d_n * d_np. The Lagrange identity
    # turns the dark-state cancellation between the two excited paths into the
    # single mismatch term, so nothing large cancels near two-photon resonance.
    mismatch = np.sqrt(w_n) * om_np - np.sqrt(w_np) * om_n
    num = (w_n * d_np + w_np * d_n) * ground - mismatch * mismatch
    den = ground * d_n * d_np - (om_n * om_n * d_np + om_np * om_np * d_n)
    quad = num / den
    chi = -3.0 * np.pi * g * quad
    return chi[()] if chi.ndim == 0 else chi


def susceptibility_lambda(atom: AtomSystem, ctrl: ControlField, delta_bar):
    """Single-excited-level (Lambda-scheme) susceptibility through |n| only."""
    d = np.asarray(delta_bar, dtype=float)
    g = atom.gamma
    two_photon = (d - ctrl.detuning) + 1j * atom.gamma_0
    denom = (d + 0.5j * g) * two_photon - 0.25 * ctrl.rabi ** 2
    chi = -3.0 * np.pi * g * atom.probe_weights[0] * two_photon / denom
    return chi[()] if chi.ndim == 0 else chi


def susceptibility_bare(atom: AtomSystem, delta_bar):
    """Control-off susceptibility: two Lorentzians at 0 and delta_hf."""
    return susceptibility_full(atom, ControlField(rabi=0.0, detuning=0.0), delta_bar)


def susceptibility(atom: AtomSystem, ctrl: ControlField, delta_bar, model: Model = "full"):
    if model == "full":
        return susceptibility_full(atom, ctrl, delta_bar)
    if model == "lambda":
        return susceptibility_lambda(atom, ctrl, delta_bar)
    if model == "bare":
        return susceptibility_bare(atom, delta_bar)
    raise InvalidParameters(f"unknown susceptibility model {model!r}")


def spectrum(atom: AtomSystem, ctrl: ControlField, start: float, stop: float,
             count: int, model: Model = "full") -> SusceptibilitySpectrum:
    """Evaluate one model on ``count`` evenly spaced probe detunings."""
    if count < 2:
        raise InvalidParameters(f"spectrum needs at least 2 points, got {count}")
    if not stop > start:
        raise InvalidParameters("spectrum range must be increasing")
    grid = np.linspace(start, stop, count)
    values = np.asarray(susceptibility(atom, ctrl, grid, model), dtype=complex)
    return SusceptibilitySpectrum(
        detunings=grid, values=values, model=model,
        meta={"start": start, "stop": stop, "count": count},
    )


def dressing_matrix(atom: AtomSystem, ctrl: ControlField) -> np.ndarray:
    """Non-Hermitian 3x3 generator on (|n>, |n'>, |m'>) in the probe frame."""
    g = atom.gamma
    om_n = ctrl.rabi
    om_np = atom.control_ratio * ctrl.rabi
    return np.array([
        [-0.5j * g, 0.0, 0.5 * om_n],
        [0.0, atom.delta_hf - 0.5j * g, 0.5 * om_np],
        [0.5 * om_n, 0.5 * om_np, ctrl.detuning - 1j * atom.gamma_0],
    ], dtype=complex)


def locate_at_resonances(atom: AtomSystem, ctrl: ControlField) -> Tuple[AtResonance, ...]:
    """The Autler-Townes triplet as complex poles of the susceptibility."""
    roots = np.linalg.eigvals(dressing_matrix(atom, ctrl))
    roots = roots[np.argsort(roots.real, kind="stable")]
    return tuple(
        AtResonance(position=float(z.real), width=float(-2.0 * z.imag), index=i)
        for i, z in enumerate(roots)
    )


def raman_resonance(atom: AtomSystem, ctrl: ControlField) -> AtResonance:
    """The triplet member sitting closest to the control frequency."""
    res = locate_at_resonances(atom, ctrl)
    return min(res, key=lambda r: (abs(r.position - ctrl.detuning), r.index))


def peak_absorption(atom: AtomSystem, ctrl: ControlField, model: Model = "full",
                    points: int = 4001, half_widths: float = 10.0) -> Tuple[float, float]:
    """Location and height of the chi'' maximum of the Raman resonance.

    The search window is centred on the Raman pole of the chosen model and
    spans ``half_widths`` times its linewidth on either side.
    """
    model_atom = atom.lambda_reduced() if model == "lambda" else atom
    res = raman_resonance(model_atom, ctrl)
    span = half_widths * max(res.width, 1e-9)
    grid = np.linspace(res.position - span, res.position + span, points)
    chi_im = np.imag(susceptibility(atom, ctrl, grid, model))
    k = int(np.argmax(chi_im))
    # parabolic refinement on the three samples around the maximum
    if 0 < k < points - 1:
        y0, y1, y2 = chi_im[k - 1:k + 2]
        curv = y0 - 2 * y1 + y2
        if curv < 0:
            shift = 0.5 * (y0 - y2) / curv
            x = grid[k] + shift * (grid[1] - grid[0])
            return float(x), float(np.imag(susceptibility(atom, ctrl, x, model)))
    return float(grid[k]), float(chi_im[k])


def steady_state_susceptibility(atom: AtomSystem, ctrl: ControlField, delta_bar: float) -> complex:
    """Reference value from a direct 3x3 solve of the linear amplitude equations.

    Slower than ``susceptibility_full`` but shares none of its algebra, so it
    serves as a cross-check.
    """
    w_n, w_np = atom.probe_weights
    source = np.array([np.sqrt(w_n), np.sqrt(w_np), 0.0], dtype=complex)
    lhs = delta_bar * np.eye(3) - dressing_matrix(atom, ctrl)
    amps = np.linalg.solve(lhs, source)
    return complex(-3.0 * np.pi * atom.gamma * (source @ amps))


def kramers_kronig_dispersion(grid: np.ndarray, chi_im: np.ndarray,
                              tail_correction: bool = True) -> np.ndarray:
    """Reconstruct chi' from chi'' on a uniform grid.

    ``chi'(x) = (1/pi) P int chi''(y) / (y - x) dy``, evaluated with a
    zero-padded FFT Hilbert transform. With ``tail_correction`` the region
    outside the grid is filled with ``A / y^2`` tails matched to the edge
    values and integrated analytically.
    """
    grid = np.asarray(grid, dtype=float)
    chi_im = np.asarray(chi_im, dtype=float)
    n = len(grid)
    padded = scipy.signal.hilbert(chi_im, N=4 * n)
    disp = -np.imag(padded[:n])
    if not tail_correction:
        return disp

    # the outermost samples represent cells reaching half a step past the grid
    step = grid[1] - grid[0]
    lo, hi = grid[0] - 0.5 * step, grid[-1] + 0.5 * step
    a_lo = chi_im[0] * grid[0] ** 2
    a_hi = chi_im[-1] * grid[-1] ** 2
    disp = disp + _tail(grid, hi, a_hi) + _tail_neg(grid, lo, a_lo)
    return disp


def _tail(x: np.ndarray, edge: float, amp: float) -> np.ndarray:
    # (1/pi) int_edge^inf amp / (y^2 (y - x)) dy, for x < edge
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = np.abs(x) < 1e-6 * edge
    xs = x[~small]
    out[~small] = -np.log1p(-xs / edge) / xs ** 2 - 1.0 / (xs * edge)
    xz = x[small]
    out[small] = 1 / (2 * edge ** 2) + xz / (3 * edge ** 3)
    return amp * out / np.pi


def _tail_neg(x: np.ndarray, edge: float, amp: float) -> np.ndarray:
    # (1/pi) int_-inf^edge amp / (y^2 (y - x)) dy with edge < 0 < ..., by y -> -y
    return -_tail(-np.asarray(x, dtype=float), -edge, amp)
