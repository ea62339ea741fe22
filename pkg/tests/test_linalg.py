import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhlcert.errors import InputError, NumericalError, SingularMatrixError
from hhlcert.linalg import (HermitianMatrix, InputVector, condition_number, eigendecompose,
                            load_matrix, make_matrix_with_spectrum, matrix_from_csv,
                            matrix_from_json, matrix_to_json, reference_solve, vector_from_json,
                            vector_to_json)


def _random_hermitian(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return HermitianMatrix.symmetrized(z)


def test_two_by_two_example():
    d = eigendecompose(np.array([[2.0, 1.0], [1.0, 2.0]], dtype=complex))
    np.testing.assert_allclose(d.eigenvalues, [1.0, 3.0], atol=1e-15)
    assert d.residual < 1e-14 and d.orthonormality_defect < 1e-14
    assert condition_number(d) == pytest.approx(3.0)


@settings(max_examples=40)
@given(st.integers(1, 24), st.integers(0, 2**32 - 1))
def test_matches_eigh(n, seed):
    a = _random_hermitian(np.random.default_rng(seed), n)
    d = eigendecompose(a)
    ref = np.linalg.eigvalsh(a.entries)
    scale = max(1.0, np.abs(ref).max())
    np.testing.assert_allclose(d.eigenvalues, ref, atol=1e-12 * scale)
    assert d.residual <= 1e-12 * scale
    assert d.orthonormality_defect <= 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_planted_spectrum_n64(seed):
    rng = np.random.default_rng(seed)
    lam = np.sort(rng.uniform(0.01, 1.0, 64))
    d = eigendecompose(make_matrix_with_spectrum(lam, seed=seed))
    np.testing.assert_allclose(d.eigenvalues, lam, atol=1e-10)


@pytest.mark.parametrize("n,method", [(8, "jacobi"), (32, "jacobi"), (128, "jacobi"),
                                      (128, "lapack")])
def test_round_trip(n, method):
    for seed in range(3 if n >= 64 else 10):
        a = _random_hermitian(np.random.default_rng(seed), n)
        d = eigendecompose(a, method=method)
        err = np.max(np.abs(d.reconstruct() - a.entries))
        assert err <= 1e-11 * max(1.0, a.max_abs_entry())


def test_repeated_eigenvalues_projectors():
    lam = np.array([0.2, 0.5, 0.5, 0.5, 0.9])
    A = make_matrix_with_spectrum(lam, seed=3)
    d = eigendecompose(A)
    u = np.linalg.eigh(A.entries)[1][:, 1:4]
    np.testing.assert_allclose(d.projector([1, 2, 3]), u @ u.conj().T, atol=1e-12)
    assert d.orthonormality_defect < 1e-13


def test_phase_convention():
    d = eigendecompose(_random_hermitian(np.random.default_rng(4), 6))
    for j in range(6):
        col = d.eigenvectors[:, j]
        first = col[np.flatnonzero(np.abs(col) > 1e-10 * np.abs(col).max())[0]]
        assert abs(first.imag) < 1e-15 and first.real > 0


def test_lapack_and_jacobi_agree():
    a = _random_hermitian(np.random.default_rng(5), 10)
    d1, d2 = eigendecompose(a), eigendecompose(a, method="lapack")
    np.testing.assert_allclose(d1.eigenvalues, d2.eigenvalues, atol=1e-12)
    np.testing.assert_allclose(np.abs(d1.eigenvectors), np.abs(d2.eigenvectors), atol=1e-9)


def test_reference_solve_examples():
    A = np.diag([0.5, 1.0]).astype(complex)
    np.testing.assert_allclose(reference_solve(A, [1, 0]), [1, 0], atol=1e-15)
    x = reference_solve(A, [1, 1])
    np.testing.assert_allclose(x, np.array([2, 1]) / np.sqrt(5), atol=1e-15)


@given(st.integers(0, 2**32 - 1))
def test_reference_solve_matches_numpy(seed):
    rng = np.random.default_rng(seed)
    A = make_matrix_with_spectrum(rng.uniform(0.1, 1.0, 5), seed=rng)
    b = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    x = np.linalg.solve(A.entries, b)
    np.testing.assert_allclose(reference_solve(A, b), x / np.linalg.norm(x), atol=1e-11)


def test_input_errors():
    with pytest.raises(InputError):
        HermitianMatrix(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(InputError):
        HermitianMatrix(np.ones((2, 3)))
    with pytest.raises(InputError):
        HermitianMatrix(np.array([[np.nan]]))
    with pytest.raises(InputError):
        InputVector.from_raw([0, 0])
    with pytest.raises(InputError):
        make_matrix_with_spectrum([])
    with pytest.raises(SingularMatrixError):
        reference_solve(np.diag([0.0, 1.0]).astype(complex), [1, 1])
    with pytest.raises(SingularMatrixError):
        condition_number(eigendecompose(np.diag([0.0, 1.0]).astype(complex)))
    with pytest.raises(ValueError):
        eigendecompose(np.eye(2, dtype=complex), method="qr")


def test_sweep_budget_exhaustion_raises():
    a = _random_hermitian(np.random.default_rng(0), 12)
    with pytest.raises(NumericalError):
        eigendecompose(a, max_sweeps=1)


def test_json_and_csv_io(tmp_path):
    A = make_matrix_with_spectrum([0.3, 0.7, 1.0], seed=1)
    assert np.array_equal(matrix_from_json(matrix_to_json(A)).entries, A.entries)
    v = np.array([1 + 2j, -0.5j])
    assert np.array_equal(vector_from_json(vector_to_json(v)), v)
    p = tmp_path / "m.csv"
    p.write_text("2,1\n1,2\n")
    assert np.array_equal(load_matrix(str(p)).entries, [[2, 1], [1, 2]])
    q = tmp_path / "m.json"
    q.write_text(matrix_to_json(A))
    assert np.array_equal(load_matrix(str(q)).entries, A.entries)
    for bad in ("{", '{"n": 2, "entries": [[1, 0]]}', '{"entries": []}'):
        with pytest.raises(InputError):
            matrix_from_json(bad)
    with pytest.raises(InputError):
        matrix_from_csv("1,x\n")
