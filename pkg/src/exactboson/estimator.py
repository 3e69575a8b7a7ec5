"""scikit-learn style front end for the samplers.

``fit`` takes the m x n interferometer matrix (the first n columns of an
m x m unitary); ``sample`` then draws sorted outcomes and
``score_samples`` returns their exact log-probabilities, mirroring the
density-estimator API of ``sklearn.mixture``/``sklearn.neighbors``.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_count, check_rng
from .distribution import DEFAULT_CAP, collision_bound, exact_table, prob_q
from .exceptions import InputError
from .linalg import check_input_matrix, orthonormality_deviation
from .sampler import (
    DEFAULT_MAX_N_A,
    sample_A_batch,
    sample_B_batch,
    sample_brute_batch,
    sample_collision_free_batch,
)

ALGORITHMS = ("brute", "A", "B", "collision-free")


class BosonSampler(BaseEstimator):
    """Exact sampler for the boson-sampling distribution of a fitted matrix.

    Parameters
    ----------
    algorithm : {"B", "A", "brute", "collision-free"}, default="B"
        ``"B"`` is the O(n 2^n + m n^2) sampler. ``"A"`` and ``"brute"``
        exist for cross-checking; ``"collision-free"`` rejects outcomes with
        a repeated mode.
    fixed_alpha : bool, default=False
        Use the identity column order in Algorithm B instead of a fresh
        uniform permutation per sample. Only valid for a single draw from a
        Haar-random matrix.
    cap : int, default=10**7
        Largest outcome space the brute-force sampler will tabulate.
    max_n_A : int, default=16
        Photon-number guard for Algorithm A.
    max_tries : int, default=10000
        Rejection budget per collision-free sample.
    n_jobs : int, default=1
        Threads for batch sampling; results do not depend on it.
    random_state : int, Generator or None
        An int makes every ``sample`` call reproducible.

    Attributes
    ----------
    matrix_ : ndarray of shape (m, n)
    n_modes_, n_photons_ : int
    orthonormality_deviation_ : float
    collision_bound_ : CollisionBound
    table_ : OutcomeTable
        Only for ``algorithm="brute"``.
    """

    def __init__(
        self,
        algorithm="B",
        fixed_alpha=False,
        cap=DEFAULT_CAP,
        max_n_A=DEFAULT_MAX_N_A,
        max_tries=10_000,
        n_jobs=1,
        random_state=None,
    ):
        self.algorithm = algorithm
        self.fixed_alpha = fixed_alpha
        self.cap = cap
        self.max_n_A = max_n_A
        self.max_tries = max_tries
        self.n_jobs = n_jobs
        self.random_state = random_state

    def fit(self, X, y=None):
        if self.algorithm not in ALGORITHMS:
            raise InputError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        A = check_input_matrix(X)
        self.matrix_ = A
        self.n_modes_, self.n_photons_ = A.shape
        self.orthonormality_deviation_ = orthonormality_deviation(A)
        self.collision_bound_ = collision_bound(A)
        if self.algorithm == "brute":
            self.table_ = exact_table(A, self.cap)
        return self

    def sample_records(self, n_samples=1):
        """Draw ``n_samples`` outcomes as ``SampleRecord`` objects."""
        check_is_fitted(self, "matrix_")
        n_samples = check_count(n_samples, "n_samples")
        rng = self.random_state if isinstance(self.random_state, (int, np.integer)) else check_rng(self.random_state)
        A = self.matrix_
        if self.algorithm == "brute":
            return sample_brute_batch(A, n_samples, rng, self.cap, table=self.table_)
        if self.algorithm == "A":
            return sample_A_batch(A, n_samples, rng, self.max_n_A)
        if self.algorithm == "collision-free":
            return sample_collision_free_batch(A, n_samples, rng, self.max_tries, jobs=self.n_jobs)
        return sample_B_batch(A, n_samples, rng, fixed_alpha=self.fixed_alpha, jobs=self.n_jobs)

    def sample(self, n_samples=1):
        """Return ``(Z, prob)``: 1-based sorted outcomes and their probabilities."""
        records = self.sample_records(n_samples)
        Z = np.array([r.z for r in records], dtype=np.int64).reshape(len(records), self.n_photons_)
        prob = np.array([r.probability for r in records], dtype=float)
        return Z, prob

    def score_samples(self, Z):
        """Exact log-probability of each sorted outcome (row of ``Z``)."""
        check_is_fitted(self, "matrix_")
        Z = np.atleast_2d(np.asarray(Z))
        with np.errstate(divide="ignore"):
            return np.log(np.array([prob_q(z, self.matrix_) for z in Z]))

    def exact_table(self):
        check_is_fitted(self, "matrix_")
        return getattr(self, "table_", None) or exact_table(self.matrix_, self.cap)
