"""Signal-pulse propagation through the dressed medium.

Envelopes live on a uniform time grid and are carried to the frequency domain
with the convention

    spec(w) = int alpha(t) exp(+i w t) dt,   alpha(t) = int spec(w) exp(-i w t) dw / 2pi,

where ``w`` is the offset from the carrier. The medium multiplies each
component by ``exp(i (od/2) chi(carrier + w))``; since chi is analytic in the
upper half plane this transfer function is causal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import InvalidParameters, WindowTooSmall, ZeroEnergyInput

ChiModel = Callable[[np.ndarray], np.ndarray]

DEFAULT_SAMPLES = 2 ** 17
MIN_SAMPLES = 2 ** 14


@dataclass(frozen=True)
class Medium:
    od: float = 50.0

    def __post_init__(self):
        if not self.od >= 0:
            raise InvalidParameters(f"optical depth must be non-negative, got {self.od}")


@dataclass(frozen=True)
class PulseSpec:
    duration: float = 10.0
    carrier: float = 0.0
    shape: str = "rectangular"

    def __post_init__(self):
        if not self.duration > 0:
            raise InvalidParameters(f"pulse duration must be positive, got {self.duration}")
        if self.shape != "rectangular":
            raise InvalidParameters(f"unsupported pulse shape {self.shape!r}")


class PulseRecord:
    """Immutable sampled envelope with its cached spectrum."""

    def __init__(self, times: np.ndarray, envelope: np.ndarray, carrier: float,
                 duration: Optional[float] = None, spectrum: Optional[np.ndarray] = None):
        times = np.asarray(times, dtype=float)
        envelope = np.asarray(envelope, dtype=complex)
        if times.shape != envelope.shape or times.ndim != 1 or len(times) < 2:
            raise InvalidParameters("times and envelope must be equal-length 1-D arrays")
        self._times = times
        self._envelope = envelope
        self.carrier = float(carrier)
        self.duration = duration
        self.dt = float(times[1] - times[0])
        self.omegas = -2.0 * np.pi * np.fft.fftfreq(len(times), self.dt)
        if spectrum is None:
            spectrum = self.dt * np.exp(1j * self.omegas * times[0]) * np.fft.fft(envelope)
        self._spectrum = np.asarray(spectrum, dtype=complex)
        for arr in (self._times, self._envelope, self.omegas, self._spectrum):
            arr.setflags(write=False)

    @classmethod
    def from_spectrum(cls, times: np.ndarray, spectrum: np.ndarray, carrier: float,
                      duration: Optional[float] = None) -> "PulseRecord":
        times = np.asarray(times, dtype=float)
        dt = times[1] - times[0]
        omegas = -2.0 * np.pi * np.fft.fftfreq(len(times), dt)
        envelope = np.fft.ifft(spectrum * np.exp(-1j * omegas * times[0])) / dt
        return cls(times, envelope, carrier, duration, spectrum=spectrum)

    @property
    def times(self) -> np.ndarray:
        return self._times

    @property
    def envelope(self) -> np.ndarray:
        return self._envelope

    @property
    def spectrum(self) -> np.ndarray:
        return self._spectrum

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self._envelope) ** 2

    def energy(self) -> float:
        return float(np.sum(self.intensity) * self.dt)

    def spectral_energy(self) -> float:
        d_omega = 2.0 * np.pi / (len(self._times) * self.dt)
        return float(np.sum(np.abs(self._spectrum) ** 2) * d_omega / (2.0 * np.pi))

    def centroid(self) -> float:
        weights = self.intensity
        total = weights.sum()
        if total == 0:
            raise ZeroEnergyInput("centroid of a zero-energy pulse")
        return float(np.dot(self._times, weights) / total)

    def spectrum_at(self, omega: float) -> complex:
        """Direct evaluation of the transform at an arbitrary offset."""
        return complex(self.dt * np.sum(self._envelope * np.exp(1j * omega * self._times)))


@dataclass(frozen=True)
class TransportMetrics:
    transmission: float
    delay: float
    stored_fraction: float


def make_rectangular(spec: PulseSpec, window: Optional[Tuple[float, float]] = None,
                     samples: int = DEFAULT_SAMPLES) -> PulseRecord:
    """Unit-amplitude rectangle on [0, T].

    Each sample holds the average of the ideal rectangle over its grid cell,
    so the time integral (and the zero-frequency spectrum) is exactly T even
    when the edges fall between samples.
    """
    T = spec.duration
    if window is None:
        # long trailing margin: the narrow Raman line rings for hundreds of 1/gamma
        # and anything past the window end would wrap to negative times
        window = (-2.0 * T, 62.0 * T)
    t_min, t_max = window
    if t_min > 0 or t_max < 5.0 * T:
        raise WindowTooSmall(
            f"window {window} must contain [0, T] plus a margin of 4T after T (T={T})"
        )
    if samples < MIN_SAMPLES or samples & (samples - 1):
        raise WindowTooSmall(f"samples must be a power of two >= {MIN_SAMPLES}, got {samples}")

    dt = (t_max - t_min) / samples
    # pin t = 0 to a sample so the leading edge never leaks to negative times
    k0 = int(round(-t_min / dt))
    times = dt * (np.arange(samples) - k0)
    lo = np.clip(times - 0.5 * dt, 0.0, T)
    hi = np.clip(times + 0.5 * dt, 0.0, T)
    envelope = (hi - lo) / dt
    return PulseRecord(times, envelope.astype(complex), spec.carrier, duration=T)


def transfer_amplitude(medium: Medium, chi: ChiModel, delta_bar):
    """Field transmission ``exp(i (od/2) chi)`` of the whole sample."""
    if medium.od == 0:
        return np.ones_like(np.asarray(delta_bar, dtype=float), dtype=complex)[()]
    return np.exp(0.5j * medium.od * np.asarray(chi(delta_bar)))


def propagate(pulse: PulseRecord, medium: Medium, chi: ChiModel) -> PulseRecord:
    """Output pulse after the sample, computed component by component."""
    transfer = transfer_amplitude(medium, chi, pulse.carrier + pulse.omegas)
    out_spec = pulse.spectrum * transfer
    return PulseRecord.from_spectrum(pulse.times, out_spec, pulse.carrier, pulse.duration)


def metrics(pulse_in: PulseRecord, pulse_out: PulseRecord,
            storage_cutoff: Optional[float] = None) -> TransportMetrics:
    """Transmission, centroid delay and the energy fraction arriving after the cutoff.

    The cutoff defaults to the pulse duration: whatever leaves the sample
    after the back edge has entered could be held by switching the control off.
    """
    if not np.array_equal(pulse_in.times, pulse_out.times):
        raise InvalidParameters("input and output pulses must share a time grid")
    e_in = pulse_in.energy()
    if e_in <= 0:
        raise ZeroEnergyInput("input pulse carries no energy")
    if storage_cutoff is None:
        if pulse_in.duration is None:
            raise InvalidParameters("storage_cutoff needed for pulses without a duration")
        storage_cutoff = pulse_in.duration
    e_out = pulse_out.energy()
    late = pulse_out.times > storage_cutoff
    e_late = float(np.sum(pulse_out.intensity[late]) * pulse_out.dt)
    delay = pulse_out.centroid() - pulse_in.centroid() if e_out > 0 else 0.0
    return TransportMetrics(transmission=e_out / e_in, delay=delay, stored_fraction=e_late / e_in)


def retrieval_profile(pulse_out: PulseRecord, cutoff: float) -> PulseRecord:
    """Part of the output after ``cutoff``, moved so the cut sits at t = 0.

    This is the shape recovered when the control is switched back on, and the
    natural local-oscillator mode for homodyne detection of the retrieved light.
    """
    keep = pulse_out.times > cutoff
    if cutoff <= pulse_out.times[0]:
        keep[:] = True
    envelope = np.where(keep, pulse_out.envelope, 0.0)
    shift = max(cutoff, pulse_out.times[0])
    return PulseRecord(pulse_out.times - shift, envelope, pulse_out.carrier, pulse_out.duration)
