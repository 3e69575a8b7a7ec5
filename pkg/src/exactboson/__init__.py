"""Exact boson sampling: permanents, exact pmfs, samplers and verification."""

from .distribution import (
    OutcomeTable,
    collision_bound,
    enumerate_phi,
    exact_table,
    marginal_p,
    mu,
    multichoose,
    prob_p,
    prob_q,
)
from .estimator import BosonSampler
from .exceptions import GuardError, InputError, OrthonormalityWarning, SamplerError, UnderflowWarning
from .linalg import haar_unitary, input_matrix, submatrix
from .permanent import minors_last_row, permanent_glynn, permanent_naive
from .sampler import (
    SampleRecord,
    draw_weighted,
    random_permutation,
    sample_A,
    sample_B,
    sample_B_batch,
    sample_brute,
    sample_collision_free,
)
from .verify import Histogram, TestReport, chisq_exact, chisq_two_sample, collision_audit, tvd

__version__ = "0.1.0"
