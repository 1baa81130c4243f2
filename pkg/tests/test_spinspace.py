import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spindelta import matkit
from spindelta.errors import DimensionMismatch, IndexOutOfRange
from spindelta.spinspace import (
    ManyBodyModel,
    SpinHalfParams,
    Statistics,
    build_spin_half_h,
    classify_spin_half,
    commutator_norm,
    embed_pair,
    pair_permutation,
    signed_permutation,
    swap,
)

from conftest import random_complex

FAMILIES = ["general", "self_adjoint", "pt", "both"]
seeds = st.integers(0, 2**32 - 1)


def test_zero_params_give_zero_matrix():
    assert np.array_equal(build_spin_half_h(SpinHalfParams()), np.zeros((4, 4)))


def test_diagonal_specialization_is_scalar():
    g = -1.7
    h = build_spin_half_h(SpinHalfParams(a=g, b=g, f=g))
    assert np.array_equal(h, g * np.eye(4))


def test_layout_against_hand_table(rng):
    p = SpinHalfParams.random(rng)
    h = build_spin_half_h(p)
    v = p.as_dict()
    table = [
        ["a", "e1", "e1", "c"],
        ["e2", "f", "g", "e3"],
        ["e2", "g", "f", "e3"],
        ["d", "e4", "e4", "b"],
    ]
    for r in range(4):
        for c in range(4):
            assert h[r, c] == v[table[r][c]]


def test_classify_spin_half_subfamilies(rng):
    sa = SpinHalfParams(a=1, b=2, c=2 + 1j, d=2 - 1j, f=0, g=3, e1=1 + 1j, e2=1 - 1j, e3=1j, e4=-1j)
    s = classify_spin_half(sa)
    assert (s.self_adjoint, s.pt_symmetric) == (True, False)
    assert classify_spin_half(SpinHalfParams.random(rng, "pt")).pt_symmetric
    s = classify_spin_half(SpinHalfParams.random(rng, "both"))
    assert (s.self_adjoint, s.pt_symmetric) == (True, True)


@given(seeds, st.sampled_from(FAMILIES))
def test_family_commutes_with_swap(seed, family):
    h = build_spin_half_h(SpinHalfParams.random(np.random.default_rng(seed), family))
    assert commutator_norm(h, swap(2)) <= 1e-12 * (1 + matkit.fro(h))


def test_random_matrices_fail_the_criterion(rng):
    failures = sum(commutator_norm(random_complex(rng, (4, 4)), swap(2)) > 1e-3 for _ in range(100))
    assert failures >= 95


def test_commutator_norm_examples():
    h = np.diag([1.0, 2.0, 3.0, 4.0])
    p = swap(2)
    direct = np.linalg.norm(h @ p - p @ h)
    assert commutator_norm(h, p) == pytest.approx(direct)
    assert direct > 1e-3
    assert commutator_norm(-3 * np.eye(4), p) == 0


def test_swap_matrix_entries():
    p = pair_permutation(2, 2, 1, 2)
    expected = np.zeros((4, 4))
    for r, c in [(0, 0), (1, 2), (2, 1), (3, 3)]:
        expected[r, c] = 1
    assert np.array_equal(p, expected)


@given(st.integers(2, 4), st.integers(1, 3), st.data())
def test_pair_permutation_is_involution(N, n, data):
    i = data.draw(st.integers(1, N - 1))
    j = data.draw(st.integers(i + 1, N))
    p = pair_permutation(N, n, i, j)
    assert np.array_equal(p @ p, np.eye(n**N))


def test_p13_is_conjugated_p12():
    p12 = pair_permutation(3, 2, 1, 2)
    p23 = pair_permutation(3, 2, 2, 3)
    assert np.array_equal(pair_permutation(3, 2, 1, 3), p23 @ p12 @ p23)


def test_pair_permutation_rejects_bad_indices():
    with pytest.raises(IndexOutOfRange):
        pair_permutation(3, 2, 1, 4)
    with pytest.raises(IndexOutOfRange):
        pair_permutation(3, 2, 2, 2)


def test_signed_permutation_examples():
    h = np.zeros((4, 4))
    bose = ManyBodyModel(2, 2, h, "bose")
    fermi = ManyBodyModel(2, 2, h, "fermi")
    assert np.array_equal(signed_permutation(bose, 1, 2), swap(2))
    assert np.array_equal(signed_permutation(fermi, 1, 2), -swap(2))
    f3 = ManyBodyModel(3, 2, np.zeros((4, 4)), "fermi")
    assert np.array_equal(signed_permutation(f3, 1, 2), -np.kron(swap(2), np.eye(2)))


@given(st.sampled_from(["bose", "fermi"]), st.integers(2, 4), st.data())
def test_signed_permutation_squares_to_identity(stats, N, data):
    i = data.draw(st.integers(1, N - 1))
    j = data.draw(st.integers(i + 1, N))
    m = ManyBodyModel(N, 2, np.zeros((4, 4)), stats)
    P = signed_permutation(m, i, j)
    assert np.array_equal(P @ P, np.eye(m.dim))


def _direct_embedding(h, N, n, i, j):
    # entry-by-entry construction: h acts on digits i, j of the multi-index
    dim = n**N
    out = np.zeros((dim, dim), dtype=complex)
    for row in range(dim):
        r = np.unravel_index(row, (n,) * N)
        for col in range(dim):
            c = np.unravel_index(col, (n,) * N)
            if all(r[m] == c[m] for m in range(N) if m not in (i - 1, j - 1)):
                out[row, col] = h[r[i - 1] * n + r[j - 1], c[i - 1] * n + c[j - 1]]
    return out


def test_embed_pair_examples(rng):
    h = random_complex(rng, (4, 4))
    assert np.array_equal(embed_pair(ManyBodyModel(2, 2, h), 1, 2), h)
    m3 = ManyBodyModel(3, 2, h)
    assert np.allclose(embed_pair(m3, 1, 2), np.kron(h, np.eye(2)))
    p23 = pair_permutation(3, 2, 2, 3)
    assert np.allclose(embed_pair(m3, 1, 3), p23 @ np.kron(h, np.eye(2)) @ p23)


@given(seeds, st.integers(2, 4), st.integers(1, 2), st.data())
def test_embed_pair_matches_direct_index_construction(seed, N, n, data):
    i = data.draw(st.integers(1, N - 1))
    j = data.draw(st.integers(i + 1, N))
    h = random_complex(np.random.default_rng(seed), (n * n, n * n))
    got = embed_pair(ManyBodyModel(N, n, h), i, j)
    assert np.allclose(got, _direct_embedding(h, N, n, i, j), atol=1e-14)


@given(seeds)
def test_disjoint_embeddings_commute(seed):
    h = random_complex(np.random.default_rng(seed), (4, 4))
    m = ManyBodyModel(4, 2, h)
    for (i, j), (k, l) in [((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))]:
        a, b = embed_pair(m, i, j), embed_pair(m, k, l)
        assert matkit.fro(a @ b - b @ a) <= 1e-12 * matkit.fro(a) * matkit.fro(b)


def test_model_validation():
    with pytest.raises(ValueError):
        ManyBodyModel(1, 2, np.zeros((4, 4)))
    with pytest.raises(DimensionMismatch):
        ManyBodyModel(2, 2, np.zeros((3, 3)))


def test_physical_statistics_warning():
    with pytest.warns(UserWarning):
        ManyBodyModel(2, 2, np.zeros((4, 4)), "bose", physical=True)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ManyBodyModel(2, 2, np.zeros((4, 4)), "fermi", physical=True)
        ManyBodyModel(2, 1, np.zeros((1, 1)), "bose", physical=True)


def test_statistics_sign():
    assert Statistics("bose").sign == 1 and Statistics("fermi").sign == -1
