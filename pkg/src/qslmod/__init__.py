"""Quantum speed limit bounds for qubit channels, with finite-resolution freezing."""

from .bounds import BoundKind, BoundSeries, ResolutionConfig, Witness, find_tau_cri, qsl_series
from .channels import AmplitudeDamping, PhaseDamping, evolve

__all__ = [
    "AmplitudeDamping",
    "BoundKind",
    "BoundSeries",
    "PhaseDamping",
    "ResolutionConfig",
    "Witness",
    "evolve",
    "find_tau_cri",
    "qsl_series",
]
