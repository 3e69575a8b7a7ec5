import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exactboson.exceptions import InputError, OrthonormalityWarning
from exactboson.io import load_matrix, matrix_from_dict, matrix_to_dict, save_matrix
from exactboson.linalg import (
    check_input_matrix,
    haar_unitary,
    input_matrix,
    orthonormality_deviation,
    submatrix,
)

from conftest import fixture_matrix, raw_fixture


def test_submatrix_repeated_row_of_identity():
    out = submatrix(np.eye(3), [1, 1], [1, 2])
    np.testing.assert_array_equal(out, [[1, 0], [1, 0]])


def test_submatrix_all_indices_is_identity_selection():
    A = fixture_matrix("haar_6x4.json")
    np.testing.assert_array_equal(submatrix(A, range(1, 7), range(1, 5)), A)


def test_submatrix_reads_fixture_positionally():
    raw = raw_fixture("haar_6x4.json")
    A = fixture_matrix("haar_6x4.json")
    rows, cols = (2, 5, 5), (1, 3)
    out = submatrix(A, rows, cols)
    assert out.shape == (3, 2)
    for i, r in enumerate(rows):
        for j, c in enumerate(cols):
            re, im = raw["data"][(r - 1) * raw["cols"] + (c - 1)]
            assert out[i, j] == complex(re, im)


def test_submatrix_is_a_copy():
    A = np.eye(3, dtype=complex)
    out = submatrix(A, [1], [1])
    out[0, 0] = 5
    assert A[0, 0] == 1


@pytest.mark.parametrize(
    "rows, cols",
    [([0], [1]), ([4], [1]), ([1], [4]), ([1], [1, 1])],
)
def test_submatrix_rejects_bad_indices(rows, cols):
    with pytest.raises(InputError):
        submatrix(np.eye(3), rows, cols)


@settings(max_examples=50, deadline=None)
@given(
    rows=st.lists(st.integers(1, 6), min_size=1, max_size=8),
    cols=st.lists(st.integers(1, 4), min_size=1, max_size=4, unique=True),
)
def test_submatrix_composes(rows, cols):
    A = fixture_matrix("haar_6x4.json")
    two_step = submatrix(submatrix(A, rows, range(1, 5)), range(1, len(rows) + 1), cols)
    np.testing.assert_array_equal(two_step, submatrix(A, rows, cols))


def test_haar_single_mode_is_a_phase():
    U = haar_unitary(1, 3)
    assert U.shape == (1, 1)
    assert abs(abs(U[0, 0]) - 1) <= 1e-12


@pytest.mark.parametrize("seed", [0, 1, 12345])
def test_haar_is_unitary(seed):
    U = haar_unitary(8, seed)
    assert np.max(np.abs(U.conj().T @ U - np.eye(8))) <= 1e-12
    assert abs(abs(np.linalg.det(U)) - 1) <= 1e-9
    assert np.max(np.abs(np.linalg.norm(U, axis=0) - 1)) <= 1e-12
    assert np.max(np.abs(np.linalg.norm(U, axis=1) - 1)) <= 1e-12


def test_haar_seeds_differ_and_repeat():
    a, b = haar_unitary(4, 1), haar_unitary(4, 2)
    assert np.max(np.abs(a - b)) > 1e-6
    np.testing.assert_array_equal(a, haar_unitary(4, 1))


def test_haar_rejects_zero_modes():
    with pytest.raises(InputError):
        haar_unitary(0, 1)


def test_haar_first_entry_is_uniform_on_unit_interval():
    # Haar: |u_11|^2 ~ Uniform[0, 1] for m = 2
    rng = np.random.default_rng(99)
    vals = [abs(haar_unitary(2, rng)[0, 0]) ** 2 for _ in range(2000)]
    assert abs(np.mean(vals) - 0.5) <= 0.03


def test_input_matrix_full_width_is_u():
    U = haar_unitary(5, 4)
    np.testing.assert_array_equal(input_matrix(U, 5), U)


def test_input_matrix_columns_orthonormal():
    A = input_matrix(haar_unitary(4, 8), 2)
    assert np.max(np.abs(np.linalg.norm(A, axis=0) - 1)) <= 1e-12
    B = input_matrix(haar_unitary(6, 9), 3)
    assert abs(np.vdot(B[:, 0], B[:, 1])) <= 1e-12


def test_input_matrix_rejects_too_many_columns():
    with pytest.raises(InputError):
        input_matrix(haar_unitary(3, 0), 4)


def test_check_input_matrix_warns_on_non_orthonormal():
    with pytest.warns(OrthonormalityWarning):
        check_input_matrix(np.ones((3, 2)))


def test_check_input_matrix_rejects_nan_and_wide():
    with pytest.raises(InputError):
        check_input_matrix([[np.nan, 0], [0, 1]])
    with pytest.raises(InputError):
        check_input_matrix(np.ones((2, 3)))


def test_orthonormality_deviation_of_haar_columns():
    assert orthonormality_deviation(input_matrix(haar_unitary(7, 2), 4)) < 1e-12


def test_matrix_json_roundtrip(tmp_path):
    A = input_matrix(haar_unitary(4, 5), 2)
    path = tmp_path / "a.json"
    save_matrix(path, A, {"seed": 5})
    np.testing.assert_array_equal(load_matrix(path), A)


@pytest.mark.parametrize(
    "obj",
    [
        {"rows": 2, "cols": 2, "data": [[1, 0]] * 3},
        {"rows": 1, "cols": 1, "data": [[float("nan"), 0]]},
        {"rows": 1, "cols": 1, "data": [[1, 0, 0]]},
        {"cols": 1, "data": [[1, 0]]},
    ],
)
def test_matrix_reader_validates(obj):
    with pytest.raises(InputError):
        matrix_from_dict(obj)


def test_matrix_dict_is_row_major():
    d = matrix_to_dict(np.array([[1, 2j], [3, 4]]))
    assert d["data"] == [[1.0, 0.0], [0.0, 2.0], [3.0, 0.0], [4.0, 0.0]]
