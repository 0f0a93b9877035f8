"""Density-of-states correlations for random band matrices on the torus."""
from .profile import BandModel, ModelError, ProfileKind
from .spectral import ParameterError, Regime, SpectralParams, compute_params

__all__ = [
    "BandModel",
    "ModelError",
    "ProfileKind",
    "ParameterError",
    "Regime",
    "SpectralParams",
    "compute_params",
]
__version__ = "0.1.0"
