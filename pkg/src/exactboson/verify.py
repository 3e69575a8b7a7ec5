"""Goodness-of-fit checks of sampler output against exact tables.

Total variation distance plus Pearson chi-square with pooling of sparse
cells, a two-sample chi-square contingency test between samplers, and an
audit of the observed collision rate against its union bound.
"""

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import gammaincc

from .distribution import collision_bound, haar_collision_reference
from .exceptions import InputError

DEFAULT_ALPHA = 1e-3
DEFAULT_MIN_EXPECTED = 5.0


def chi2_sf(x, dof):
    """P(X > x) for a chi-square variable with ``dof`` degrees of freedom."""
    if dof <= 0:
        raise InputError("dof must be positive")
    if x <= 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    return float(gammaincc(dof / 2.0, x / 2.0))


@dataclass
class Histogram:
    """Outcome counts keyed by sorted mode tuples."""

    counts: Counter = field(default_factory=Counter)

    @property
    def total(self):
        return sum(self.counts.values())

    @classmethod
    def from_samples(cls, samples):
        """Build from SampleRecords, mode sequences or a 2-D integer array."""
        counts = Counter()
        for s in samples:
            z = getattr(s, "z", s)
            counts[tuple(int(v) for v in z)] += 1
        return cls(counts)

    def __add__(self, other):
        return Histogram(self.counts + other.counts)

    def frequencies(self):
        t = self.total
        return {z: c / t for z, c in self.counts.items()}


@dataclass
class TestReport:
    __test__ = False  # not a pytest class

    statistic: float
    p_value: float
    dof: int
    tvd: float
    verdict: str
    test: str = "chisq"
    alpha: float = DEFAULT_ALPHA
    cells: int = 0
    total: int = 0

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _check_against_table(exact, emp):
    if emp.total == 0:
        raise InputError("empirical histogram is empty")
    index = set(exact.outcomes)
    for z in emp.counts:
        if len(z) != exact.n:
            raise InputError(f"outcome {z} has {len(z)} photons, table has n={exact.n}")
        if z not in index:
            raise InputError(f"outcome {z} is not a sorted outcome over [1, {exact.m}]")


def tvd(exact, emp):
    """Total variation distance between an exact table and a histogram."""
    _check_against_table(exact, emp)
    total = emp.total
    dist = 0.0
    for z, q in exact:
        dist += abs(q - emp.counts.get(z, 0) / total)
    return 0.5 * dist


def _pool(expected_min, *columns, min_expected):
    """Merge cells whose (row-wise minimum) expectation is under ``min_expected``.

    ``expected_min`` orders and thresholds the cells; every array in
    ``columns`` is summed consistently. Returns the pooled arrays.
    """
    order = np.argsort(expected_min, kind="stable")
    small = [i for i in order if expected_min[i] < min_expected]
    big = [i for i in order if expected_min[i] >= min_expected]
    groups = [[i] for i in big]
    if small:
        pooled = list(small)
        # absorb the smallest kept cells until the pooled cell is large enough
        while sum(expected_min[i] for i in pooled) < min_expected and groups:
            pooled += groups.pop(0)
        groups.append(pooled)
    return [np.array([col[g].sum(axis=0) for g in groups]) for col in columns]


def chisq_exact(exact, emp, min_expected=DEFAULT_MIN_EXPECTED, alpha=DEFAULT_ALPHA):
    """Pearson goodness-of-fit of ``emp`` against the exact table."""
    _check_against_table(exact, emp)
    total = emp.total
    expected = total * np.asarray(exact.probabilities, dtype=float)
    observed = np.array([emp.counts.get(z, 0) for z in exact.outcomes], dtype=float)
    e, o = _pool(expected, expected, observed, min_expected=min_expected)
    if len(e) < 2:
        raise InputError("fewer than two cells remain after pooling")
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(e > 0, (o - e) ** 2 / np.where(e > 0, e, 1.0), np.where(o > 0, np.inf, 0.0))
    stat = float(terms.sum())
    dof = len(e) - 1
    p = chi2_sf(stat, dof)
    return TestReport(
        statistic=stat, p_value=p, dof=dof, tvd=tvd(exact, emp),
        verdict="pass" if p > alpha else "fail", test="chisq", alpha=alpha,
        cells=len(e), total=total,
    )


def chisq_two_sample(h1, h2, min_expected=DEFAULT_MIN_EXPECTED, alpha=DEFAULT_ALPHA):
    """Chi-square homogeneity test of two histograms (2 x K contingency table)."""
    n1, n2 = h1.total, h2.total
    if n1 == 0 or n2 == 0:
        raise InputError("both histograms must be non-empty")
    keys = sorted(z for z in set(h1.counts) | set(h2.counts) if h1.counts.get(z, 0) + h2.counts.get(z, 0))
    o = np.array([[h1.counts.get(z, 0), h2.counts.get(z, 0)] for z in keys], dtype=float)
    col = o.sum(axis=1)
    e = np.outer(col, [n1, n2]) / (n1 + n2)
    e, o = _pool(e.min(axis=1), e, o, min_expected=min_expected)
    if len(e) < 2:
        raise InputError("fewer than two cells remain after pooling")
    stat = float(((o - e) ** 2 / e).sum())
    dof = len(e) - 1
    p = chi2_sf(stat, dof) if stat > 0 else 1.0
    f1, f2 = h1.frequencies(), h2.frequencies()
    dist = 0.5 * sum(abs(f1.get(z, 0.0) - f2.get(z, 0.0)) for z in keys)
    return TestReport(
        statistic=stat, p_value=p, dof=dof, tvd=dist,
        verdict="pass" if p > alpha else "fail", test="chisq-two-sample", alpha=alpha,
        cells=len(e), total=n1 + n2,
    )


@dataclass
class CollisionAudit:
    n_samples: int
    duplicates: int
    frequency: float
    bound_raw: float
    bound: float
    haar_reference: float
    sigma: float
    violation: bool

    def to_dict(self):
        return asdict(self)


def collision_audit(samples, A, n_sigma=3.0):
    """Compare the observed rate of repeated modes with the union bound.

    A violation is flagged only when the observed rate exceeds the bound by
    more than ``n_sigma`` binomial standard errors (evaluated at the bound).
    """
    zs = [tuple(getattr(s, "z", s)) for s in samples]
    if not zs:
        raise InputError("no samples to audit")
    A = np.asarray(A)
    m, n = A.shape
    dup = sum(len(set(z)) < len(z) for z in zs)
    freq = dup / len(zs)
    b = collision_bound(A)
    sigma = math.sqrt(b.clamped * (1.0 - b.clamped) / len(zs))
    return CollisionAudit(
        n_samples=len(zs), duplicates=dup, frequency=freq, bound_raw=b.raw, bound=b.clamped,
        haar_reference=haar_collision_reference(m, n), sigma=sigma,
        violation=bool(freq > b.clamped + n_sigma * sigma),
    )
