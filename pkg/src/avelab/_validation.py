"""Input validation helpers shared by every public entry point."""

import numpy as np


class DimensionError(ValueError):
    """Raised when array shapes do not fit together."""


def check_matrix(M, name="M", square=True):
    """Return ``M`` as a finite float64 2-D array.

    Parameters
    ----------
    M : array_like
        Candidate matrix.
    name : str
        Used in error messages.
    square : bool
        Require ``M`` to be square.
    """
    M = np.array(M, dtype=float)
    if M.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains non-finite entries")
    return M


def check_vector(v, n=None, name="v"):
    v = np.array(v, dtype=float).reshape(-1) if np.ndim(v) <= 1 else np.array(v, dtype=float)
    if v.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise DimensionError(f"{name} must have length {n}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


def check_sign_vector(s, n=None):
    """Validate an orthant label with entries in {-1, +1}."""
    s = np.asarray(s)
    if s.ndim != 1 or (n is not None and s.shape[0] != n):
        raise DimensionError(f"sign vector must have length {n}")
    if not np.all((s == 1) | (s == -1)):
        raise ValueError("sign vector entries must be -1 or +1")
    return s.astype(float)


def check_symmetric(M, rtol=1e-12, name="M"):
    M = check_matrix(M, name=name)
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    if np.max(np.abs(M - M.T), initial=0.0) > rtol * scale:
        raise ValueError(f"{name} is not symmetric")
    return M


def is_symmetric(M, rtol=1e-12):
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    return bool(np.max(np.abs(M - M.T), initial=0.0) <= rtol * scale)
