"""Wall-clock timing of Algorithm B against single permanents."""

import re
import statistics
import time
from dataclasses import dataclass

import numpy as np

from ._validation import check_rng
from .exceptions import InputError
from .linalg import haar_unitary, input_matrix
from .permanent import minors_last_row, permanent_glynn
from .permanent import warmup as _warm_permanent
from .sampler import sample_B
from .sampler import warmup as _warm_sampler

_M_RULE = re.compile(r"^\s*(\d+(?:\.\d+)?)?\s*\*?\s*n\s*(?:\^\s*(\d+))?\s*$")


def parse_m_rule(rule):
    """Turn ``"2n^2"``, ``"n"`` or ``"4*n"`` into a function of n."""
    match = _M_RULE.match(rule)
    if not match:
        raise InputError(f"m-rule must look like 'c*n^p' (e.g. '2n^2'), got {rule!r}")
    coef = float(match.group(1) or 1)
    power = int(match.group(2) or 1)
    return lambda n: max(n, int(round(coef * n**power)))


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def median_time(fn, reps):
    return statistics.median(_timed(fn) for _ in range(reps))


@dataclass
class BenchRow:
    n: int
    m: int
    sample_B: float
    permanent: float
    minors: float

    @property
    def ratio_sample_permanent(self):
        return self.sample_B / self.permanent

    @property
    def ratio_minors_permanent(self):
        return self.minors / self.permanent


def bench(n_values, m_rule="2n^2", reps=10, seed=0):
    """Median wall times of Algorithm B, one permanent and one minors sweep per n.

    Measurements are interleaved round by round across all sizes and
    kernels, so slow drift in machine speed hits every cell alike. The
    permanent and minors are timed on the top n x n block of the input.
    """
    rule = parse_m_rule(m_rule) if isinstance(m_rule, str) else m_rule
    _warm_permanent()
    _warm_sampler()
    rng = check_rng(seed)
    cases = []
    for n in n_values:
        A = input_matrix(haar_unitary(rule(n), rng), n)
        cases.append((n, A, np.ascontiguousarray(A[:n])))
    times = {(n, key): [] for n, _, _ in cases for key in ("B", "per", "min")}
    for _ in range(reps):
        for n, A, B in cases:
            times[n, "B"].append(_timed(lambda: sample_B(A, rng)))
            times[n, "per"].append(_timed(lambda: permanent_glynn(B)))
            times[n, "min"].append(_timed(lambda: minors_last_row(B)))
    med = {key: statistics.median(v) for key, v in times.items()}
    return [
        BenchRow(n, A.shape[0], med[n, "B"], med[n, "per"], med[n, "min"])
        for n, A, _ in cases
    ]
