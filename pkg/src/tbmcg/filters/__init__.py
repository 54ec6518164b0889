"""Adaptive filter implementations and the kind registry used by configs."""

from ..mestimate import TukeyBiweight
from ..validation import ConfigError
from .base import AdaptiveFilter, OpCounter, regressor_matrix
from .cg import CGFilter, tbmcg_filter
from .gradient import LMM, LMS, NLMS, NMCC, RLMS, LogLMS
from .rls import RLS

__all__ = [
    "AdaptiveFilter", "OpCounter", "regressor_matrix",
    "CGFilter", "tbmcg_filter", "TukeyBiweight",
    "LMS", "NLMS", "LMM", "NMCC", "RLMS", "LogLMS", "RLS",
    "make_filter", "FILTER_KINDS",
]


def _make_tbmcg(n_taps, **params):
    c = params.pop("c", 20.0)
    return CGFilter(n_taps, weighting=TukeyBiweight(c), **params)


_FACTORY = {
    "cg": CGFilter,
    "tbmcg": _make_tbmcg,
    "lms": LMS,
    "nlms": NLMS,
    "rls": RLS,
    "lmm": LMM,
    "nmcc": NMCC,
    "rlms": RLMS,
    "loglms": LogLMS,
}

FILTER_KINDS = tuple(sorted(_FACTORY))


def make_filter(kind, n_taps, **params):
    """Build a filter by registry name, validating the kind and parameters."""
    try:
        factory = _FACTORY[kind]
    except KeyError:
        raise ConfigError(f"unknown filter kind {kind!r}; known: {', '.join(FILTER_KINDS)}") from None
    try:
        return factory(n_taps, **params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for filter kind {kind!r}: {exc}") from None
