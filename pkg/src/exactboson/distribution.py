"""Exact boson-sampling probabilities and outcome enumeration.

Outcomes are 1-based mode tuples. A multiset outcome ``z`` is sorted
(non-decreasing); an expanded-space array ``r`` may be in any order. For an
m x n matrix ``A``::

    q(z) = |Per A_z|^2 / mu(z)        mu(z) = prod_j s_j!
    p(r) = |Per A_r|^2 / n!

where ``A_z`` stacks row ``z_k`` of ``A`` as its k-th row.
"""

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ._validation import check_matrix
from .exceptions import GuardError, InputError
from .permanent import permanent_glynn

DEFAULT_CAP = 10**7

# Negative probabilities clamped to zero; |.|^2 paths never trigger it.
diagnostics = Counter()


def _clamp(p):
    if p < 0.0:
        diagnostics["clamped_negative"] += 1
        return 0.0
    return p


def multichoose(m, n):
    """Number of size-n multisets over [m]: C(m+n-1, n)."""
    return math.comb(m + n - 1, n)


def _check_modes(r, A, *, sorted_=False, name="z"):
    m, n = A.shape
    arr = np.asarray(r)
    if arr.ndim != 1 or arr.size != n:
        raise InputError(f"{name} must have length n={n}, got {arr.tolist()}")
    if not np.issubdtype(arr.dtype, np.integer):
        raise InputError(f"{name} must contain integer modes")
    if arr.min() < 1 or arr.max() > m:
        raise InputError(f"{name} modes must lie in [1, {m}], got {arr.tolist()}")
    if sorted_ and np.any(np.diff(arr) < 0):
        raise InputError(f"{name} must be non-decreasing, got {arr.tolist()}")
    return arr.astype(np.intp) - 1


def mu(z):
    """Product of factorials of the mode multiplicities of ``z``."""
    return math.prod(math.factorial(s) for s in Counter(np.asarray(z).tolist()).values())


def prob_q(z, A):
    """Probability of the sorted outcome ``z`` under the boson-sampling pmf."""
    A = check_matrix(A)
    rows = _check_modes(z, A, sorted_=True)
    return _clamp(abs(permanent_glynn(A[rows])) ** 2 / mu(z))


def prob_p(r, A):
    """Probability of the ordered array ``r`` in the expanded space [m]^n."""
    A = check_matrix(A)
    rows = _check_modes(r, A, name="r")
    return _clamp(abs(permanent_glynn(A[rows])) ** 2 / math.factorial(A.shape[1]))


def marginal_p(prefix, A):
    """Joint probability of the leading subsequence ``prefix`` of ``r``.

    Sums ``|Per|^2`` over every k-subset of columns, scaled by (n-k)!/n!.
    """
    A = check_matrix(A)
    m, n = A.shape
    arr = np.asarray(prefix)
    k = arr.size
    if arr.ndim != 1 or not 1 <= k <= n:
        raise InputError(f"prefix length must lie in [1, n={n}], got {k}")
    if not np.issubdtype(arr.dtype, np.integer) or arr.min() < 1 or arr.max() > m:
        raise InputError(f"prefix modes must be integers in [1, {m}]")
    rows = A[arr.astype(np.intp) - 1]
    total = 0.0
    for cols in itertools.combinations(range(n), k):
        total += abs(permanent_glynn(rows[:, cols])) ** 2
    return _clamp(total * math.factorial(n - k) / math.factorial(n))


def enumerate_phi(m, n, cap=DEFAULT_CAP):
    """Yield every sorted outcome of n photons in m modes, lexicographically.

    Refuses up front when the number of outcomes exceeds ``cap``.
    """
    size = multichoose(m, n)
    if size > cap:
        raise GuardError(f"outcome space has {size} elements, above the enumeration cap {cap}")
    return itertools.combinations_with_replacement(range(1, m + 1), n)


@dataclass
class OutcomeTable:
    """Exact pmf over all sorted outcomes for one (m, n)."""

    m: int
    n: int
    outcomes: list
    probabilities: np.ndarray

    def __len__(self):
        return len(self.outcomes)

    def __iter__(self):
        return zip(self.outcomes, self.probabilities)

    def as_dict(self):
        return dict(zip(self.outcomes, self.probabilities.tolist()))

    def restrict(self, predicate):
        """Renormalised table over outcomes satisfying ``predicate``."""
        keep = [i for i, z in enumerate(self.outcomes) if predicate(z)]
        probs = self.probabilities[keep]
        return OutcomeTable(self.m, self.n, [self.outcomes[i] for i in keep], probs / probs.sum())


def iter_outcome_probs(A, cap=DEFAULT_CAP):
    """Stream ``(z, q(z))`` over the whole outcome space."""
    A = check_matrix(A)
    m, n = A.shape
    for z in enumerate_phi(m, n, cap):
        rows = np.asarray(z, dtype=np.intp) - 1
        yield z, _clamp(abs(permanent_glynn(A[rows])) ** 2 / mu(z))


def exact_table(A, cap=DEFAULT_CAP):
    """Materialise the exact outcome table of ``A``."""
    A = check_matrix(A)
    outcomes, probs = [], []
    for z, p in iter_outcome_probs(A, cap):
        outcomes.append(z)
        probs.append(p)
    return OutcomeTable(A.shape[0], A.shape[1], outcomes, np.array(probs))


@dataclass(frozen=True)
class CollisionBound:
    raw: float
    clamped: float


def collision_bound(A):
    """Union bound on the chance that an outcome repeats a mode.

    ``2 * sum_i sum_{k<l} |a_ik a_il|^2``; may exceed one for few modes, so
    both the raw and the [0, 1]-clamped values are returned.
    """
    A = check_matrix(A)
    sq = np.abs(A) ** 2
    raw = float(np.sum(sq.sum(axis=1) ** 2 - (sq**2).sum(axis=1)))
    return CollisionBound(raw=raw, clamped=min(max(raw, 0.0), 1.0))


def haar_collision_reference(m, n):
    """Haar average of the collision bound, n(n-1)/(m+1)."""
    return n * (n - 1) / (m + 1)
