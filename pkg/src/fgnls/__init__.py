"""Finite-gap approximation of periodic anomalous-wave dynamics for the focusing NLS."""
from .closed_forms import (BreatherParams, RecurrenceParams, akhmediev, appearance_estimate,
                           fourier_energy_laws, recurrence_params)
from .riemann_core import Partition, RiemannData, partition, riemann_matrix, status, winding
from .spectral_data import CauchyData, ModeSet, derive_modes, linear_stage, perturbed_spectrum
from .ssfm import FieldGrid, SolverConfig, conserved, evolve, extract_peaks
from .theta_engine import FiniteGapField, solve_fg, theta_args

__all__ = [
    "BreatherParams", "CauchyData", "FieldGrid", "FiniteGapField", "ModeSet", "Partition",
    "RecurrenceParams", "RiemannData", "SolverConfig", "akhmediev", "appearance_estimate",
    "conserved", "derive_modes", "evolve", "extract_peaks", "fourier_energy_laws",
    "linear_stage", "partition", "perturbed_spectrum", "recurrence_params", "riemann_matrix",
    "solve_fg", "status", "theta_args", "winding",
]
