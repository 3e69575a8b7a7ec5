"""Matrix permanents.

``permanent_glynn`` evaluates Glynn's signed column-sum formula with the
sign vectors visited in binary reflected Gray code order, so every step
updates the column sums with a single row and costs O(k).
``minors_last_row`` returns all k permanents obtained by deleting the last
row and one column, in a single Gray sweep over the first k-1 rows using
forward/backward cumulative products of the column sums.
``permanent_naive`` sums over all permutations and is kept as an oracle.
"""

import functools
import itertools
from dataclasses import dataclass

import numba as nb
import numpy as np

from ._validation import check_matrix
from .exceptions import InputError

MAX_GRAY_ORDER = 64
NAIVE_MAX_ORDER = 10


@nb.njit(cache=True, inline="always")
def _trailing_zeros(t):
    c = 0
    while (t & 1) == 0:
        t >>= 1
        c += 1
    return c


@nb.njit(cache=True, inline="always")
def _flip_row(v, twice, delta, i):
    # delta[i] -> -delta[i]; column sums move by -2*delta[i]*b[i, :]
    if delta[i] > 0:
        for j in range(v.shape[0]):
            v[j] -= twice[i, j]
    else:
        for j in range(v.shape[0]):
            v[j] += twice[i, j]
    delta[i] = -delta[i]


@nb.njit(cache=True)
def _column_sums(b, nrows):
    k = b.shape[1]
    v = np.zeros(k, np.complex128)
    for i in range(nrows):
        for j in range(k):
            v[j] += b[i, j]
    return v


@nb.njit(cache=True)
def _glynn_kernel(b):
    k = b.shape[0]
    v = _column_sums(b, k)
    twice = 2.0 * b
    delta = np.ones(k)
    p = v[0]
    for j in range(1, k):
        p *= v[j]
    total = p
    sign = 1.0
    for t in range(1, np.int64(1) << (k - 1)):
        _flip_row(v, twice, delta, _trailing_zeros(t) + 1)
        sign = -sign
        p = v[0]
        for j in range(1, k):
            p *= v[j]
        total += sign * p
    return total / 2.0 ** (k - 1)


@nb.njit(cache=True)
def _minors_kernel(rows):
    """Permanents of ``rows`` with column l deleted, for every l.

    ``rows`` is (k-1) x k: the matrix with its last row already removed.
    """
    nrows, k = rows.shape
    v = _column_sums(rows, nrows)
    twice = 2.0 * rows
    delta = np.ones(nrows)
    acc = np.zeros(k, np.complex128)
    back = np.empty(k, np.complex128)
    sign = 1.0
    for t in range(np.int64(1) << (nrows - 1)):
        if t > 0:
            _flip_row(v, twice, delta, _trailing_zeros(t) + 1)
            sign = -sign
        back[k - 1] = 1.0
        for j in range(k - 1, 0, -1):
            back[j - 1] = back[j] * v[j]
        f = sign + 0j
        for l in range(k):
            acc[l] += f * back[l]
            f *= v[l]
    scale = 2.0 ** (nrows - 1)
    for l in range(k):
        acc[l] /= scale
    return acc


@nb.njit(cache=True)
def _gray_trace(b, steps):
    # Column sums after each requested Gray step; shares the update path with the kernels.
    k = b.shape[0]
    out = np.empty((steps.shape[0], k), np.complex128)
    deltas = np.empty((steps.shape[0], k))
    v = _column_sums(b, k)
    twice = 2.0 * b
    delta = np.ones(k)
    s = 0
    last = steps[-1] if steps.shape[0] else -1
    t = 0
    while t <= last:
        if t > 0:
            _flip_row(v, twice, delta, _trailing_zeros(t) + 1)
        while s < steps.shape[0] and steps[s] == t:
            out[s] = v
            deltas[s] = delta
            s += 1
        t += 1
    return out, deltas


def _square(B, name="B"):
    B = check_matrix(B, name=name)
    if B.shape[0] != B.shape[1]:
        raise InputError(f"{name} must be square, got shape {B.shape}")
    return B


def permanent_glynn(B):
    """Permanent of a square complex matrix in O(k 2^k) time.

    The empty (0 x 0) matrix has permanent 1.

    >>> permanent_glynn([[1, 2], [3, 4]])
    (10+0j)
    """
    B = _square(B)
    k = B.shape[0]
    if k == 0:
        return 1 + 0j
    if k == 1:
        return complex(B[0, 0])
    if k > MAX_GRAY_ORDER:
        raise InputError(f"order {k} exceeds the Gray counter width ({MAX_GRAY_ORDER})")
    return complex(_glynn_kernel(np.ascontiguousarray(B)))


@functools.lru_cache(maxsize=None)
def _permutation_table(k):
    # column-major so each row's column picks are contiguous
    return np.asfortranarray(np.array(list(itertools.permutations(range(k))), dtype=np.intp))


def permanent_naive(B):
    """Permanent by explicit summation over all k! permutations (k <= 10)."""
    B = _square(B)
    k = B.shape[0]
    if k > NAIVE_MAX_ORDER:
        raise InputError(f"naive permanent refuses order {k} > {NAIVE_MAX_ORDER}")
    if k == 0:
        return 1 + 0j
    perms = _permutation_table(k)
    terms = B[0, perms[:, 0]]
    for i in range(1, k):
        terms = terms * B[i, perms[:, i]]
    return complex(terms.sum())


@dataclass(frozen=True)
class MinorsResult:
    """Permanents of the minors ``B`` minus its last row and column ``l``."""

    minors: np.ndarray

    def __len__(self):
        return len(self.minors)

    def __getitem__(self, item):
        return self.minors[item]

    def laplace(self, last_row):
        """Permanent of the matrix whose last row is ``last_row``."""
        return complex(np.dot(np.asarray(last_row, dtype=np.complex128), self.minors))


def minors_last_row(B):
    """All last-row minor permanents of a k x k matrix, k >= 2.

    Only rows 1..k-1 are read. ``sum(B[-1] * minors)`` is ``Per B``.

    >>> minors_last_row([[3, 7], [0, 0]]).minors.real
    array([7., 3.])
    """
    B = _square(B)
    k = B.shape[0]
    if k < 2:
        raise InputError(f"minors need k >= 2, got k={k}")
    if k - 1 > MAX_GRAY_ORDER:
        raise InputError(f"order {k} exceeds the Gray counter width")
    return MinorsResult(_minors_kernel(np.ascontiguousarray(B[:-1])))


@dataclass(frozen=True)
class GrayState:
    """Snapshot of a Glynn sweep: sign vector and column sums after ``step`` flips."""

    step: int
    delta: np.ndarray
    colsums: np.ndarray


def gray_states(B, steps):
    """Incrementally maintained sweep states of ``B`` at the given step numbers."""
    B = _square(B)
    steps = np.sort(np.asarray(steps, dtype=np.int64))
    if steps.size and (steps[0] < 0 or steps[-1] >= 2 ** (B.shape[0] - 1)):
        raise InputError("steps must lie in [0, 2^(k-1))")
    cols, deltas = _gray_trace(np.ascontiguousarray(B), steps)
    return [GrayState(int(s), d, c) for s, d, c in zip(steps, deltas, cols)]


def gray_delta(step, k):
    """Sign vector visited at ``step`` by the binary reflected Gray code, first entry +1."""
    code = step ^ (step >> 1)
    delta = np.ones(k)
    for i in range(1, k):
        if (code >> (i - 1)) & 1:
            delta[i] = -1.0
    return delta


def warmup():
    """Compile the kernels so later timings exclude JIT cost."""
    writable = np.eye(3, dtype=np.complex128)
    readonly = writable.copy()
    readonly.flags.writeable = False
    # numba specialises on writeability; validated inputs are read-only
    for b in (writable, readonly):
        _glynn_kernel(b)
        _minors_kernel(np.ascontiguousarray(b[:-1]))
        _gray_trace(b, np.zeros(1, np.int64))


__all__ = [
    "GrayState",
    "MinorsResult",
    "gray_delta",
    "gray_states",
    "minors_last_row",
    "permanent_glynn",
    "permanent_naive",
]
