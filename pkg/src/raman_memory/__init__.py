"""Raman quantum memory in alkali D1 lines with excited-state hyperfine structure."""

from .angular_momentum import HalfInt, transition_weight, wigner_3j, wigner_6j
from .carrier_tuner import TuneObjective, TuneResult, scan
from .dressed_medium import (
    AtomSystem,
    ControlField,
    locate_at_resonances,
    spectrum,
    susceptibility_full,
    susceptibility_lambda,
)
from .info_merit import cv_coherent_info, mean_photons, single_photon_coherent_info, thermal_entropy
from .pulse_transport import Medium, PulseSpec, make_rectangular, metrics, propagate

__version__ = "0.1.0"
