"""Input validation helpers in the spirit of ``sklearn.utils.validation``."""

import numbers

import numpy as np

from .exceptions import InputError


def check_matrix(A, *, square=False, name="A"):
    """Return ``A`` as a read-only 2-D complex128 array.

    Rejects non-2-D input, empty dimensions and non-finite entries.
    """
    try:
        arr = np.array(A, dtype=np.complex128, copy=True)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name} cannot be converted to a complex matrix: {exc}") from exc
    if arr.ndim != 2:
        raise InputError(f"{name} must be 2-D, got ndim={arr.ndim}")
    if square and arr.shape[0] != arr.shape[1]:
        raise InputError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains NaN or Inf entries")
    arr.flags.writeable = False
    return arr


def check_count(value, name, minimum=0):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise InputError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise InputError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_indices(indices, upper, name, *, unique=False):
    """Convert 1-based ``indices`` to a 0-based int array, validating range."""
    idx = np.asarray(indices)
    if idx.ndim != 1:
        raise InputError(f"{name} must be a 1-D list of indices")
    if idx.size and not np.issubdtype(idx.dtype, np.integer):
        if not np.all(np.equal(np.mod(idx, 1), 0)):
            raise InputError(f"{name} must contain integers")
        idx = idx.astype(np.int64)
    idx = idx.astype(np.int64)
    if idx.size and (idx.min() < 1 or idx.max() > upper):
        raise InputError(f"{name} entries must lie in [1, {upper}], got {idx.tolist()}")
    if unique and len(set(idx.tolist())) != idx.size:
        raise InputError(f"{name} must not repeat indices, got {idx.tolist()}")
    return idx - 1


def check_rng(random_state):
    """Turn ``None``, an int, a SeedSequence or a Generator into a Generator."""
    if isinstance(random_state, np.random.Generator):
        return random_state
    if random_state is None or isinstance(random_state, (numbers.Integral, np.random.SeedSequence)):
        return np.random.default_rng(random_state)
    raise InputError(f"cannot build a random generator from {random_state!r}")
