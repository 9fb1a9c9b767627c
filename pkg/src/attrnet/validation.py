"""Input validation helpers shared by the public API."""

import numpy as np

from .errors import DataError, ModelError

SYMMETRY_TOL = 1e-12


def as_square_matrix(a, name="matrix") -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DataError(f"{name} must be square, got shape {a.shape}")
    return a


def check_symmetric(a, name="matrix", tol=SYMMETRY_TOL) -> np.ndarray:
    a = as_square_matrix(a, name)
    if a.size and np.max(np.abs(a - a.T)) > tol:
        raise DataError(f"{name} is not symmetric within {tol}")
    return a


def check_distribution(pi, name="pi", tol=1e-12) -> np.ndarray:
    pi = np.asarray(pi, dtype=float)
    if pi.ndim != 1 or pi.size == 0:
        raise ModelError(f"{name} must be a nonempty vector")
    if np.any(pi < 0):
        raise ModelError(f"{name} has negative entries")
    if abs(pi.sum() - 1.0) > tol:
        raise ModelError(f"{name} must sum to 1 within {tol}, got {pi.sum()!r}")
    return pi


def check_epsilon(epsilon) -> float:
    epsilon = float(epsilon)
    if not 0.0 < epsilon < 0.5:
        raise ModelError(f"epsilon must lie in (0, 0.5), got {epsilon}")
    return epsilon


def check_probability_matrix(p, epsilon, name="kernel") -> np.ndarray:
    """Symmetric matrix with entries in [epsilon, 1 - epsilon]."""
    p = check_symmetric(p, name)
    epsilon = check_epsilon(epsilon)
    lo, hi = epsilon - 1e-12, 1.0 - epsilon + 1e-12
    if np.any(p < lo) or np.any(p > hi):
        raise ModelError(f"{name} entries must lie in [{epsilon}, {1 - epsilon}]")
    return p


def check_labels(labels, k, name="labels") -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    if labels.ndim != 1:
        raise DataError(f"{name} must be a vector")
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise DataError(f"{name} must take values in 0..{k - 1}")
    return labels


def check_adjacency(a, name="adjacency") -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DataError(f"{name} must be square, got shape {a.shape}")
    if not np.isin(a, (0, 1)).all():
        raise DataError(f"{name} must be a 0/1 matrix")
    if np.any(a != a.T):
        raise DataError(f"{name} must be symmetric")
    if np.any(np.diag(a) != 0):
        raise DataError(f"{name} must have a zero diagonal")
    return a.astype(np.uint8)


def check_nonnegative_matrix(a, name="matrix") -> np.ndarray:
    a = check_symmetric(a, name)
    if np.any(a < 0):
        raise ModelError(f"{name} must be entrywise nonnegative")
    return a


def check_open_unit(x, name) -> float:
    x = float(x)
    if not 0.0 < x < 1.0:
        raise ModelError(f"{name} must lie in (0, 1), got {x}")
    return x


def readonly(a: np.ndarray) -> np.ndarray:
    """Return ``a`` with its write flag cleared (immutability by contract)."""
    a.flags.writeable = False
    return a
