"""Input validation helpers used by the solvers and estimators."""

import numbers

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "as_vector",
    "check_nonneg",
    "check_positive",
    "check_power_of_two",
]


def as_vector(x, name="x"):
    """Coerce ``x`` to a 1-d float64 array with finite entries."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidParameterError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < 1:
        raise InvalidParameterError(f"{name} must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError(f"{name} must have finite entries")
    return arr


def check_nonneg(value, name):
    """Validate a finite scalar >= 0 and return it as float."""
    if not isinstance(value, numbers.Real) or not np.isfinite(value) or value < 0:
        raise InvalidParameterError(f"{name} must be a finite nonnegative real, got {value!r}")
    return float(value)


def check_positive(value, name):
    """Validate a finite scalar > 0 and return it as float."""
    if not isinstance(value, numbers.Real) or not np.isfinite(value) or value <= 0:
        raise InvalidParameterError(f"{name} must be a finite positive real, got {value!r}")
    return float(value)


def check_power_of_two(n, name="length"):
    """Validate that ``n`` is a positive power of two."""
    n = int(n)
    if n < 1 or n & (n - 1):
        raise InvalidParameterError(f"{name} must be a power of two, got {n}")
    return n
