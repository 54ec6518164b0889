"""Input validation helpers shared across the package."""

import numpy as np


class ConfigError(ValueError):
    """Raised when hyperparameters or experiment configuration are invalid."""


def check_positive(name, value, allow_inf=False):
    value = float(value)
    if np.isnan(value) or value <= 0.0 or (not allow_inf and np.isinf(value)):
        raise ConfigError(f"{name} must be a positive finite number, got {value!r}")
    return value


def check_open_unit(name, value):
    value = float(value)
    if not 0.0 < value < 1.0:
        raise ConfigError(f"{name} must lie in (0, 1), got {value!r}")
    return value


def check_length(name, value):
    value = int(value)
    if value < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    return value


def check_finite_scalar(name, value):
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def as_finite_vector(name, x, length=None):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {x.shape}")
    if length is not None and x.shape[0] != length:
        raise ValueError(f"{name} must have length {length}, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite values")
    return x
