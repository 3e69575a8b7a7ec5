"""Complex matrix helpers: submatrix selection and Haar random unitaries.

Matrices are plain ``numpy`` complex128 arrays. Index lists at this API
boundary are 1-based, matching the mode labels used everywhere else in the
package.
"""

import warnings

import numpy as np

from ._validation import check_count, check_indices, check_matrix, check_rng
from .exceptions import InputError, OrthonormalityWarning

ORTHONORMALITY_TOL = 1e-8


def submatrix(A, rows, cols):
    """Copy of ``A`` restricted to 1-based ``rows`` and ``cols``.

    Rows may repeat (a mode holding several photons); columns may not.

    >>> submatrix(np.eye(3), [1, 1], [1, 2]).real
    array([[1., 0.],
           [1., 0.]])
    """
    A = check_matrix(A)
    r = check_indices(rows, A.shape[0], "rows")
    c = check_indices(cols, A.shape[1], "cols", unique=True)
    return A[np.ix_(r, c)].copy()


def haar_unitary(m, seed=None):
    """Draw an ``m x m`` unitary from the Haar measure.

    Ginibre matrix of i.i.d. standard complex Gaussians (numpy PCG64 +
    ziggurat normals) followed by QR. Column ``j`` of Q is multiplied by the
    phase ``R_jj/|R_jj|``, which makes the factorisation unique (positive
    diagonal R) and the resulting Q exactly Haar distributed.
    """
    m = check_count(m, "m", minimum=1)
    rng = check_rng(seed)
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return q


def input_matrix(U, n):
    """First ``n`` columns of the unitary ``U`` (the m x n interferometer matrix)."""
    U = check_matrix(U, square=True, name="U")
    n = check_count(n, "n", minimum=1)
    if n > U.shape[1]:
        raise InputError(f"n={n} exceeds the number of modes m={U.shape[1]}")
    return U[:, :n].copy()


def orthonormality_deviation(A):
    """Max absolute entry of ``A^H A - I``."""
    A = np.asarray(A, dtype=np.complex128)
    gram = A.conj().T @ A
    return float(np.max(np.abs(gram - np.eye(A.shape[1]))))


def check_input_matrix(A, tol=ORTHONORMALITY_TOL):
    """Validate an m x n interferometer matrix.

    Non-orthonormal columns are accepted with an ``OrthonormalityWarning``
    because the pmf then no longer normalises.
    """
    A = check_matrix(A)
    m, n = A.shape
    if n > m:
        raise InputError(f"matrix has more columns ({n}) than rows ({m}); need n <= m")
    dev = orthonormality_deviation(A)
    if dev > tol:
        warnings.warn(
            f"columns deviate from orthonormality by {dev:.3g} (> {tol:g}); "
            "sampling proceeds with self-normalised weights",
            OrthonormalityWarning,
            stacklevel=2,
        )
    return A
