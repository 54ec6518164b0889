"""Robust conjugate-gradient adaptive filtering and benchmark harnesses."""

from .curves import LearningCurve, read_curves, smooth, write_curves
from .filters import (
    LMM, LMS, NLMS, NMCC, RLMS, RLS, AdaptiveFilter, CGFilter, LogLMS,
    OpCounter, TukeyBiweight, make_filter, regressor_matrix, tbmcg_filter,
)
from .noise import InputModel, NoiseSpec, Schedule, ar1_signal, logistic_chaotic, sample_alpha_stable
from .sysid import ExperimentResult, Plant, c_sweep, nmsd, run_experiment
from .validation import ConfigError

__version__ = "0.1.0"

__all__ = [
    "AdaptiveFilter", "CGFilter", "TukeyBiweight", "tbmcg_filter",
    "LMS", "NLMS", "RLS", "LMM", "NMCC", "RLMS", "LogLMS",
    "OpCounter", "make_filter", "regressor_matrix",
    "NoiseSpec", "Schedule", "InputModel",
    "sample_alpha_stable", "ar1_signal", "logistic_chaotic",
    "Plant", "nmsd", "run_experiment", "c_sweep", "ExperimentResult",
    "LearningCurve", "write_curves", "read_curves", "smooth",
    "ConfigError", "__version__",
]
