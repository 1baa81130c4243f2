import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from spindelta import matkit
from spindelta.errors import SingularMatrix

from conftest import random_complex

small_ints = arrays(np.int64, st.tuples(st.integers(1, 3), st.integers(1, 3)), elements=st.integers(-5, 5))


def test_kron_of_identities_is_identity():
    assert np.array_equal(matkit.kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_block_structure():
    x = np.array([[0, 1], [1, 0]])
    out = matkit.kron(x, np.eye(2))
    assert np.array_equal(out[:2, 2:], np.eye(2))
    assert np.array_equal(out[2:, :2], np.eye(2))
    assert np.array_equal(out[:2, :2], np.zeros((2, 2)))


def test_kron_matches_index_formula(rng):
    a, b = random_complex(rng, (2, 3)), random_complex(rng, (4, 2))
    out = matkit.kron(a, b)
    assert out.shape == (8, 6)
    for i in range(2):
        for j in range(3):
            for k in range(4):
                for l in range(2):
                    expected = a[i, j] * b[k, l]
                    assert abs(out[i * 4 + k, j * 2 + l] - expected) <= 4e-16 * (1 + abs(expected))


@given(small_ints, small_ints, small_ints)
def test_kron_associative_exactly(a, b, c):
    left = matkit.kron(matkit.kron(a, b), c)
    right = matkit.kron(a, matkit.kron(b, c))
    assert np.array_equal(left, right)


def test_results_are_read_only():
    out = matkit.kron(np.eye(2), np.eye(2))
    with pytest.raises(ValueError):
        out[0, 0] = 5


def test_inverse_examples():
    assert np.allclose(matkit.inverse(np.eye(4)), np.eye(4))
    inv = matkit.inverse(np.diag([2j, -2j]))
    assert np.allclose(inv, np.diag([-0.5j, 0.5j]))
    with pytest.raises(SingularMatrix):
        matkit.inverse(np.zeros((3, 3)))


def test_inverse_detects_rank_deficiency():
    a = np.array([[1.0, 2.0], [2.0, 4.0 + 1e-15]])
    with pytest.raises(SingularMatrix):
        matkit.inverse(a)


@given(st.integers(0, 10_000), st.integers(1, 8))
def test_inverse_residual_contract(seed, dim):
    rng = np.random.default_rng(seed)
    a = random_complex(rng, (dim, dim))
    tol = 1e-9
    try:
        b = matkit.inverse(a, tol)
    except SingularMatrix:
        return
    scale = tol * matkit.fro(a)
    assert matkit.fro(a @ b - np.eye(dim)) <= scale
    assert matkit.fro(b @ a - np.eye(dim)) <= scale


def _assert_residuals(a, pairs, tol):
    scale = tol * matkit.fro(a)
    for p in pairs:
        if p.vector is None:
            continue
        assert abs(np.linalg.norm(p.vector) - 1) < 1e-12
        assert np.linalg.norm(a @ p.vector - p.value * p.vector) <= scale


def test_eigen_diagonal():
    pairs = matkit.eigen(np.diag([1.0, 2.0, 3.0, 4.0]))
    assert [p.value for p in pairs] == pytest.approx([1, 2, 3, 4])
    for k, p in enumerate(pairs):
        assert np.allclose(np.abs(p.vector), np.eye(4)[k])


def test_eigen_rotation_generator():
    values = sorted((p.value for p in matkit.eigen([[0, 1], [-1, 0]])), key=lambda z: z.imag)
    assert values == pytest.approx([-1j, 1j])


@given(st.integers(0, 10_000))
def test_eigen_random_residuals(seed):
    a = random_complex(np.random.default_rng(seed), (4, 4))
    pairs = matkit.eigen(a)
    assert len(pairs) == 4
    _assert_residuals(a, pairs, 1e-10)


@given(st.integers(0, 10_000), st.integers(1, 16))
def test_eigen_hermitian_values_are_real(seed, dim):
    x = random_complex(np.random.default_rng(seed), (dim, dim))
    a = x + x.conj().T
    values = np.array([p.value for p in matkit.eigen(a)])
    assert np.max(np.abs(values.imag)) <= 1e-10 * matkit.fro(a)


@given(st.integers(0, 10_000), st.integers(1, 16))
def test_eigen_real_input_conjugate_closed(seed, dim):
    a = np.random.default_rng(seed).normal(size=(dim, dim))
    values = np.array([p.value for p in matkit.eigen(a)])
    # each eigenvalue's conjugate is also present
    for v in values:
        assert np.min(np.abs(values - np.conj(v))) <= 1e-8 * matkit.fro(a)


def test_eigen_flags_jordan_block():
    a = np.array([[2.0, 1.0], [0.0, 2.0]])
    pairs = matkit.eigen(a)
    assert [p.value for p in pairs] == pytest.approx([2, 2])
    assert sum(p.vector is None for p in pairs) == 1
    assert [p.defective for p in pairs] == [p.vector is None for p in pairs]
    _assert_residuals(a, pairs, 1e-12)


def test_eigen_keeps_full_degenerate_eigenspace():
    pairs = matkit.eigen(np.diag([1.0, 1.0, 3.0]))
    vecs = np.column_stack([p.vector for p in pairs])
    assert np.linalg.matrix_rank(vecs) == 3
    assert not any(p.defective for p in pairs)
