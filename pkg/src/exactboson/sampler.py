"""Exact samplers for the boson-sampling distribution.

Three samplers target the same pmf over sorted outcomes:

``sample_brute``
    tabulate every outcome probability, then make one weighted draw.
``sample_A``
    chain rule over the leading subsequences of an ordered array ``r``;
    stage k sums ``|Per|^2`` over every k-subset of columns (O(m n 3^n)).
``sample_B``
    condition on a uniformly random column order ``alpha``. Stage k only
    needs the permanents of the k columns ``alpha_1..alpha_k``; all of them
    for every candidate row follow from one minors sweep plus a Laplace
    expansion, so a sample costs O(n 2^n + m n^2).

All randomness is drawn from a ``numpy.random.Generator`` before entering
the compiled kernels. In batch mode each sample's column permutation and
uniforms are fixed by its index, so the output does not depend on how the
batch is split across threads.
"""

import itertools
import math
import numbers
import warnings
from dataclasses import dataclass

import numba as nb
import numpy as np

from ._validation import check_count, check_rng
from .distribution import DEFAULT_CAP, exact_table, mu
from .exceptions import GuardError, InputError, SamplerError, UnderflowWarning
from .linalg import check_input_matrix
from .permanent import MAX_GRAY_ORDER, _glynn_kernel, _minors_kernel

UNDERFLOW_THRESHOLD = 1e-280
DEFAULT_MAX_N_A = 16
DEFAULT_BLOCK = 1 << 15


@dataclass
class SampleRecord:
    """One sorted outcome with its exact probability and provenance."""

    z: tuple
    probability: float = None
    sampler: str = "B"
    seed: int = None
    alpha: tuple = None
    tries: int = None

    def to_dict(self):
        out = {"z": list(self.z), "prob": self.probability}
        if self.alpha is not None:
            out["alpha"] = list(self.alpha)
        out["sampler"] = self.sampler
        if self.tries is not None:
            out["tries"] = self.tries
        return out


# --- compiled helpers -------------------------------------------------------


@nb.njit(cache=True)
def _draw(w, u):
    # Cumulative scan; target on a boundary goes to the lower index. -1 if all zero.
    total = 0.0
    for i in range(w.shape[0]):
        total += w[i]
    if not total > 0.0:
        return -1
    target = u * total
    acc = 0.0
    last = -1
    for i in range(w.shape[0]):
        if w[i] > 0.0:
            acc += w[i]
            last = i
            if target <= acc:
                return i
    return last


@nb.njit(cache=True)
def _fisher_yates(perm, swaps):
    # swaps[t] in [0, n-1-t] pairs with position n-1-t
    n = perm.shape[0]
    for t in range(n - 1):
        i = n - 1 - t
        j = swaps[t]
        tmp = perm[i]
        perm[i] = perm[j]
        perm[j] = tmp


@nb.njit(cache=True)
def _sorted_mu(r):
    z = np.sort(r)
    mult = 1.0
    run = 1
    for i in range(1, z.shape[0]):
        if z[i] == z[i - 1]:
            run += 1
            mult *= run
        else:
            run = 1
    return z, mult


@nb.njit(cache=True)
def _sample_b_one(A, alpha, u, r, trace):
    """Run the n stages for one column order; returns (|Per A_r|^2, failed stage, min stage max)."""
    m, n = A.shape
    ap = np.empty((m, n), np.complex128)
    for i in range(m):
        for l in range(n):
            ap[i, l] = A[i, alpha[l]]
    w = np.empty(m)
    wmin = np.inf
    for i in range(m):
        w[i] = ap[i, 0].real ** 2 + ap[i, 0].imag ** 2
    if trace.shape[0] > 0:
        trace[0] = w
    x = _draw(w, u[0])
    if x < 0:
        return 0.0, 1, 0.0
    wmin = min(wmin, w.max())
    r[0] = x
    final = w[x]
    for k in range(2, n + 1):
        rows = np.empty((k - 1, k), np.complex128)
        for a in range(k - 1):
            for b in range(k):
                rows[a, b] = ap[r[a], b]
        minors = _minors_kernel(rows)
        for i in range(m):
            s = 0j
            for l in range(k):
                s += ap[i, l] * minors[l]
            w[i] = s.real**2 + s.imag**2
        if trace.shape[0] > 0:
            trace[k - 1] = w
        x = _draw(w, u[k - 1])
        if x < 0:
            return 0.0, k, 0.0
        wmin = min(wmin, w.max())
        r[k - 1] = x
        final = w[x]
    return final, 0, wmin


@nb.njit(cache=True)
def _sample_b_block(A, swaps, u, fixed_alpha, z_out, prob_out, alpha_out, status_out, wmin_out):
    count = u.shape[0]
    n = A.shape[1]
    r = np.empty(n, np.int64)
    notrace = np.empty((0, A.shape[0]))
    for s in range(count):
        alpha = np.arange(n)
        if not fixed_alpha:
            _fisher_yates(alpha, swaps[s])
        final, status, wmin = _sample_b_one(A, alpha, u[s], r, notrace)
        status_out[s] = status
        wmin_out[s] = wmin
        alpha_out[s] = alpha
        if status == 0:
            z, mult = _sorted_mu(r)
            z_out[s] = z
            prob_out[s] = final / mult


@nb.njit(cache=True, parallel=True)
def _sample_b_block_parallel(A, swaps, u, fixed_alpha, z_out, prob_out, alpha_out, status_out, wmin_out):
    count = u.shape[0]
    n = A.shape[1]
    notrace = np.empty((0, A.shape[0]))
    for s in nb.prange(count):
        r = np.empty(n, np.int64)
        alpha = np.arange(n)
        if not fixed_alpha:
            _fisher_yates(alpha, swaps[s])
        final, status, wmin = _sample_b_one(A, alpha, u[s], r, notrace)
        status_out[s] = status
        wmin_out[s] = wmin
        alpha_out[s] = alpha
        if status == 0:
            z, mult = _sorted_mu(r)
            z_out[s] = z
            prob_out[s] = final / mult


@nb.njit(cache=True)
def _weights_a(A, prefix, combos):
    m = A.shape[0]
    k = combos.shape[1]
    w = np.zeros(m)
    sub = np.empty((k, k), np.complex128)
    for c in range(combos.shape[0]):
        for a in range(k - 1):
            for b in range(k):
                sub[a, b] = A[prefix[a], combos[c, b]]
        for i in range(m):
            for b in range(k):
                sub[k - 1, b] = A[i, combos[c, b]]
            if k == 1:
                val = sub[0, 0]
            else:
                val = _glynn_kernel(sub)
            w[i] += val.real**2 + val.imag**2
    return w


# --- utilities --------------------------------------------------------------


def _seed_of(random_state):
    return int(random_state) if isinstance(random_state, numbers.Integral) else None


def draw_weighted(w, rng=None):
    """Draw a 1-based index with probability proportional to ``w``."""
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise InputError("weights must be a non-empty 1-D array")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise InputError("weights must be finite and non-negative")
    x = _draw(w, check_rng(rng).random())
    if x < 0:
        raise SamplerError("all weights are zero")
    return int(x) + 1


def _swap_draws(rng, count, n):
    if n < 2:
        return np.zeros((count, 0), np.int64)
    return rng.integers(0, np.arange(n, 1, -1), size=(count, n - 1))


def random_permutation(n, rng=None):
    """Uniform permutation of 1..n by Fisher-Yates."""
    n = check_count(n, "n", minimum=1)
    perm = np.arange(n)
    _fisher_yates(perm, _swap_draws(check_rng(rng), 1, n)[0])
    return perm + 1


def _prepare(A):
    A = check_input_matrix(A)
    return np.ascontiguousarray(A)


# --- brute force ------------------------------------------------------------


def sample_brute_batch(A, count, rng=None, cap=DEFAULT_CAP, table=None):
    """``count`` draws from the fully tabulated pmf."""
    seed = _seed_of(rng)
    A = _prepare(A)
    count = check_count(count, "count")
    if table is None:
        table = exact_table(A, cap)
    gen = check_rng(rng)
    probs = table.probabilities
    cdf = np.cumsum(probs)
    idx = np.searchsorted(cdf, gen.random(count) * cdf[-1], side="left")
    idx = np.minimum(idx, len(probs) - 1)
    return [
        SampleRecord(z=table.outcomes[i], probability=float(probs[i]), sampler="brute", seed=seed)
        for i in idx
    ]


def sample_brute(A, rng=None, cap=DEFAULT_CAP):
    """One draw from the fully tabulated pmf."""
    return sample_brute_batch(A, 1, rng, cap)[0]


# --- Algorithm A ------------------------------------------------------------


def sample_A(A, rng=None, max_n=DEFAULT_MAX_N_A, _combos=None):
    """One sample via sequential subsequence marginals (O(m n 3^n))."""
    seed = _seed_of(rng)
    A = _prepare(A)
    m, n = A.shape
    if n > max_n:
        raise GuardError(f"Algorithm A is limited to n <= {max_n} (3^n cost); use Algorithm B")
    gen = check_rng(rng)
    combos = _combos or _combination_tables(n)
    r = np.empty(0, np.int64)
    for k in range(1, n + 1):
        w = _weights_a(A, r, combos[k - 1])
        x = _draw(w, gen.random())
        if x < 0:
            raise SamplerError(f"all conditional weights vanished at stage {k}", stage=k)
        r = np.append(r, x)
    z = tuple(int(v) + 1 for v in np.sort(r))
    # the last stage sums over the single full column set: w[x] = |Per A_r|^2
    return SampleRecord(z=z, probability=float(w[x]) / mu(z), sampler="A", seed=seed)


def _combination_tables(n):
    return [np.array(list(itertools.combinations(range(n), k)), dtype=np.int64) for k in range(1, n + 1)]


def sample_A_batch(A, count, rng=None, max_n=DEFAULT_MAX_N_A):
    A = _prepare(A)
    count = check_count(count, "count")
    seed = _seed_of(rng)
    gen = check_rng(rng)
    combos = _combination_tables(A.shape[1])
    out = []
    for _ in range(count):
        rec = sample_A(A, gen, max_n, _combos=combos)
        rec.seed = seed
        out.append(rec)
    return out


# --- Algorithm B ------------------------------------------------------------


def sample_B_arrays(A, count, rng=None, fixed_alpha=False, jobs=1, block=DEFAULT_BLOCK):
    """Vectorised Algorithm B.

    Returns ``(z, prob, alpha)``: sorted 1-based outcomes (count x n), their
    exact probabilities and the 1-based column orders used.
    """
    A = _prepare(A)
    count = check_count(count, "count")
    m, n = A.shape
    if n > MAX_GRAY_ORDER:
        raise InputError(f"n={n} exceeds the Gray counter width ({MAX_GRAY_ORDER})")
    if fixed_alpha and count > 1:
        warnings.warn(
            "identity column order is only valid for a single sample from a Haar-random matrix",
            UserWarning,
            stacklevel=2,
        )
    gen = check_rng(rng)
    kernel = _sample_b_block
    if jobs is not None and jobs > 1:
        nb.set_num_threads(min(jobs, nb.config.NUMBA_NUM_THREADS))
        kernel = _sample_b_block_parallel
    z = np.empty((count, n), np.int64)
    prob = np.empty(count)
    alpha = np.empty((count, n), np.int64)
    status = np.zeros(count, np.int64)
    wmin = np.empty(count)
    for start in range(0, count, block):
        stop = min(start + block, count)
        swaps = _swap_draws(gen, stop - start, n)
        u = gen.random((stop - start, n))
        kernel(A, swaps, u, fixed_alpha, z[start:stop], prob[start:stop], alpha[start:stop],
               status[start:stop], wmin[start:stop])
        bad = np.flatnonzero(status[start:stop])
        if bad.size:
            stage = int(status[start + bad[0]])
            raise SamplerError(
                f"all conditional weights vanished at stage {stage} (rank-deficient matrix?)",
                stage=stage,
            )
    if count and wmin.min() < UNDERFLOW_THRESHOLD:
        warnings.warn(
            f"stage weights fell to {wmin.min():.3g}, below {UNDERFLOW_THRESHOLD:g}",
            UnderflowWarning,
            stacklevel=2,
        )
    return z + 1, prob, alpha + 1


def sample_B_batch(A, count, rng=None, fixed_alpha=False, jobs=1):
    """``count`` independent Algorithm B samples, each with its own column order."""
    z, prob, alpha = sample_B_arrays(A, count, rng, fixed_alpha=fixed_alpha, jobs=jobs)
    seed = _seed_of(rng)
    return [
        SampleRecord(z=tuple(zi), probability=float(p), sampler="B", seed=seed, alpha=tuple(a))
        for zi, p, a in zip(z.tolist(), prob.tolist(), alpha.tolist())
    ]


def sample_B(A, rng=None, fixed_alpha=False):
    """One Algorithm B sample; its exact probability comes for free."""
    return sample_B_batch(A, 1, rng, fixed_alpha=fixed_alpha)[0]


def stage_weights_B(A, alpha, uniforms):
    """Debug hook: run Algorithm B with a given column order and uniforms.

    Returns the 0-based stage weight vectors (n x m) and the 1-based ordered
    array ``r`` they produced.
    """
    A = _prepare(A)
    m, n = A.shape
    alpha = np.asarray(alpha, dtype=np.int64) - 1
    trace = np.zeros((n, m))
    r = np.empty(n, np.int64)
    _, status, _ = _sample_b_one(A, alpha, np.asarray(uniforms, dtype=np.float64), r, trace)
    if status:
        raise SamplerError(f"all conditional weights vanished at stage {status}", stage=status)
    return trace, r + 1


# --- collision-free rejection -----------------------------------------------


def sample_collision_free_batch(A, count, rng=None, max_tries=10_000, jobs=1):
    """Algorithm B with rejection of outcomes that repeat a mode.

    Each returned record carries ``tries``: the number of Algorithm B draws
    spent on it, including the accepted one.
    """
    A = _prepare(A)
    count = check_count(count, "count")
    max_tries = check_count(max_tries, "max_tries", minimum=1)
    m, n = A.shape
    if n > m:
        raise InputError("collision-free sampling needs m >= n")
    seed = _seed_of(rng)
    gen = check_rng(rng)
    out = []
    tries = 0
    while len(out) < count:
        need = count - len(out)
        z, prob, alpha = sample_B_arrays(A, max(64, 2 * need), gen, jobs=jobs)
        distinct = np.all(np.diff(z, axis=1) > 0, axis=1) if n > 1 else np.ones(len(z), bool)
        for i in range(len(z)):
            tries += 1
            if distinct[i]:
                out.append(SampleRecord(
                    z=tuple(z[i].tolist()), probability=float(prob[i]), sampler="collision-free",
                    seed=seed, alpha=tuple(alpha[i].tolist()), tries=tries,
                ))
                tries = 0
                if len(out) == count:
                    break
            elif tries >= max_tries:
                raise SamplerError(
                    f"no collision-free outcome after {tries} attempts", attempts=tries
                )
    return out


def sample_collision_free(A, rng=None, max_tries=10_000):
    return sample_collision_free_batch(A, 1, rng, max_tries)[0]


def warmup():
    """Compile the sampler kernels (cached on disk after the first run)."""
    A = np.eye(3, 2, dtype=np.complex128)
    sample_B_arrays(A, 2, 0)
    readonly = A.copy()
    readonly.flags.writeable = False
    for a in (A, readonly):
        _weights_a(a, np.zeros(1, np.int64), np.array([[0, 1]], np.int64))
    _draw(np.ones(2), 0.5)


__all__ = [
    "SampleRecord",
    "draw_weighted",
    "random_permutation",
    "sample_A",
    "sample_A_batch",
    "sample_B",
    "sample_B_arrays",
    "sample_B_batch",
    "sample_brute",
    "sample_brute_batch",
    "sample_collision_free",
    "sample_collision_free_batch",
    "stage_weights_B",
]
