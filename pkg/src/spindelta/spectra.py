"""
Spectrum of the coupling matrix and the bound states it supports.

A mode is an eigenpair ``h u = L u`` whose spin vector is fixed by the
statistics-signed exchange ``P u = u``.  It decays as ``exp(kappa |x|)`` in
the relative coordinate with ``kappa = L / 2`` and is admissible when
``Re(kappa) < 0``.  The N-particle string built from it has energy
``-L**2 N (N**2 - 1) / 12``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import matkit
from .boundary import BoundaryCondition, SymmetryClass, classify
from .errors import DimensionMismatch, NoSimultaneousEigenvector, OnContactPlane
from .spinspace import ManyBodyModel, embed_pair, signed_permutation

MODE_TOL = 1e-9


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: tuple[complex, ...]
    all_real: bool
    conjugate_closed: bool
    symmetry: SymmetryClass

    @property
    def label(self) -> str:
        if self.all_real:
            return "all_real"
        if self.conjugate_closed:
            return "conjugate_closed"
        return "complex"


def string_energy(lam: complex, N: int) -> complex:
    return -(lam**2) * N * (N * N - 1) / 12


@dataclass(frozen=True)
class BoundStateMode:
    lam: complex
    vector: np.ndarray
    kappa: complex
    energy2: complex
    energyN: dict[int, complex] = field(default_factory=dict)
    # admissible but with non-real eigenvalue (PT-symmetric, complex spectrum)
    quasi_bound: bool = False

    def energy(self, N: int) -> complex:
        return string_energy(self.lam, N)


def classify_spectrum(h, tol: float = MODE_TOL) -> SpectrumReport:
    h = matkit.as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"h must be square, got {h.shape}")
    values = matkit.eigenvalues(h)
    scale = tol * (1.0 + matkit.fro(h))
    all_real = bool(np.max(np.abs(values.imag)) <= scale)
    # optimal matching of the spectrum against its own conjugate
    cost = np.abs(values[:, None] - values.conj()[None, :])
    rows, cols = linear_sum_assignment(cost)
    conjugate_closed = bool(np.max(cost[rows, cols]) <= scale)
    n = int(round(np.sqrt(h.shape[0])))
    if n * n == h.shape[0]:
        symmetry = classify(BoundaryCondition(n, h), tol)
    else:
        symmetry = SymmetryClass(
            matkit.fro(h - h.conj().T) <= tol * max(1.0, matkit.fro(h)),
            matkit.fro(h.imag) <= tol * max(1.0, matkit.fro(h)),
        )
    return SpectrumReport(tuple(complex(v) for v in values), all_real, conjugate_closed or all_real, symmetry)


def _fixed_vectors(basis: np.ndarray, P: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal vectors in ``span(basis)`` left unchanged by ``P`` within ``tol``."""
    q, _ = np.linalg.qr(basis)
    leak = (np.eye(P.shape[0]) - (np.eye(P.shape[0]) + P) / 2) @ q
    _, s, vh = np.linalg.svd(leak)
    s = np.concatenate([s, np.zeros(q.shape[1] - len(s))])
    return q @ vh.conj().T[:, s <= tol]


def bound_state_modes(model: ManyBodyModel, tol: float = MODE_TOL) -> list[BoundStateMode]:
    """Admissible two-body bound states of ``model.h``.

    Eigenvectors are grouped by (numerically) equal eigenvalue and each
    eigenspace is searched for vectors fixed by the signed exchange, so
    degenerate eigenvalues are handled.  Defective eigenvalues contribute only
    the vectors the eigensolver could return.
    """
    h = model.h
    two = model.with_N(2)
    P = signed_permutation(two, 1, 2)
    pairs = [p for p in matkit.eigen(h) if p.vector is not None]
    scale = tol * (1.0 + matkit.fro(h))

    modes: list[BoundStateMode] = []
    used = [False] * len(pairs)
    for a, pa in enumerate(pairs):
        if used[a]:
            continue
        group = [b for b in range(a, len(pairs)) if not used[b] and abs(pairs[b].value - pa.value) <= 1e-7 * (1 + matkit.fro(h))]
        for b in group:
            used[b] = True
        basis = np.column_stack([pairs[b].vector for b in group])
        for vec in _fixed_vectors(basis, P, tol).T:
            lam = complex(np.vdot(vec, h @ vec))
            if abs(lam.imag) <= scale:
                lam = complex(lam.real)
            kappa = lam / 2
            if kappa.real >= 0:
                continue
            energies = {N: string_energy(lam, N) for N in range(2, max(model.N, 2) + 1)}
            vec = vec.copy()
            vec.setflags(write=False)
            modes.append(
                BoundStateMode(
                    lam=lam,
                    vector=vec,
                    kappa=kappa,
                    energy2=-(lam**2) / 2,
                    energyN=energies,
                    quasi_bound=abs(lam.imag) > scale,
                )
            )
    modes.sort(key=lambda m: (m.lam.real, m.lam.imag))
    return modes


def simultaneous_eigenvector(model: ManyBodyModel, lam: complex, tol: float = MODE_TOL) -> np.ndarray:
    """Spin vector ``v`` with ``h_ij v = lam v`` and ``P_ij v = v`` for all pairs.

    Found as the smallest right singular vector of the stacked constraints.
    """
    eye = np.eye(model.dim)
    blocks = []
    for i, j in combinations(range(1, model.N + 1), 2):
        blocks.append(embed_pair(model, i, j) - lam * eye)
        blocks.append(signed_permutation(model, i, j) - eye)
    stacked = np.vstack(blocks)
    _, s, vh = np.linalg.svd(stacked)
    if s[-1] > tol * (1.0 + matkit.fro(model.h)):
        raise NoSimultaneousEigenvector(
            f"no spin vector satisfies all {len(blocks) // 2} pair conditions for "
            f"N={model.N} (smallest singular value {s[-1]:.3e})"
        )
    v = vh[-1].conj()
    return v / np.linalg.norm(v)


def _string_terms(model, v, kappa, x, order):
    # value, gradient and -Laplacian of v exp(kappa sum_{i<j} |x_i - x_j|)
    # continued from the region where particle order[m] is m-th from the left
    N = model.N
    rank = np.empty(N)
    rank[list(order)] = np.arange(N)
    coeff = 2 * rank - (N - 1)  # d/dx_i of sum |x_i - x_j| inside the region
    y = x[list(order)]
    phase = np.exp(kappa * np.dot(2 * np.arange(N) - (N - 1), y))
    value = v * phase
    grad = (kappa * coeff)[:, None] * value[None, :]
    neg_lap = -(kappa**2) * np.sum(coeff**2) * value
    return value, grad, neg_lap


def bound_state_residual(
    model: ManyBodyModel,
    mode: BoundStateMode,
    samples=None,
    rng: np.random.Generator | None = None,
    count: int = 10,
    tol: float = MODE_TOL,
) -> float:
    """Worst defect of the N-particle string state built on ``mode``.

    Checks, at each sampled point, continuity and the derivative jump on
    every plane ``x_i = x_j`` and, off the planes, the eigenvalue equation
    against ``mode.energy(N)``.  All derivatives are analytic.  Defects are
    relative to ``max(1, ||psi||)``.
    """
    N = model.N
    if N > 6:
        raise ValueError("string residual is limited to N <= 6")
    if mode.kappa.real >= 0:
        raise ValueError("mode does not decay")
    v = simultaneous_eigenvector(model, mode.lam, tol)
    energy = mode.energy(N)
    if samples is None:
        rng = np.random.default_rng(0) if rng is None else rng
        samples = rng.uniform(-3, 3, size=(count, N))

    worst = 0.0
    for point in samples:
        point = np.asarray(point, dtype=float)
        order = list(np.argsort(point, kind="stable"))
        if np.min(np.diff(point[order])) < 1e-12:
            raise OnContactPlane("sample lies on a contact plane")
        value, _, neg_lap = _string_terms(model, v, mode.kappa, point, order)
        norm = max(1.0, float(np.linalg.norm(value)))
        worst = max(worst, float(np.linalg.norm(neg_lap - energy * value)) / norm)
        for i, j in combinations(range(N), 2):
            x = point.copy()
            x[j] = x[i]
            others = sorted((m for m in range(N) if m not in (i, j)), key=lambda m: x[m])
            before = [m for m in others if x[m] < x[i]]
            after = [m for m in others if x[m] >= x[i]]
            v_m, g_m, _ = _string_terms(model, v, mode.kappa, x, before + [i, j] + after)
            v_p, g_p, _ = _string_terms(model, v, mode.kappa, x, before + [j, i] + after)
            d_m = (g_m[i] - g_m[j]) / 2
            d_p = (g_p[i] - g_p[j]) / 2
            h_ij = embed_pair(model, i + 1, j + 1)
            norm = max(1.0, float(np.linalg.norm(v_m)))
            worst = max(
                worst,
                float(np.linalg.norm(v_p - v_m)) / norm,
                float(np.linalg.norm(d_p - d_m - h_ij @ v_m)) / norm,
            )
    return worst
