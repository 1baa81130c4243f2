"""
Two-body exchange operators ``Y`` and the consistency relations they obey.

``Y(k) = [2ik I - h]^{-1} [2ik P + h]`` maps the amplitude of a plane-wave
term onto the amplitude of the term with the momenta of two neighbouring
particles exchanged.  Here ``k`` is half the momentum difference,
``(k_a - k_b) / 2``, with ``k_a`` the momentum carried by the left particle
of the pair *before* the exchange.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import matkit
from .errors import DegenerateMomenta, DimensionMismatch, IndexOutOfRange
from .spinspace import ManyBodyModel, embed_pair, signed_permutation


@dataclass(frozen=True)
class MomentumSet:
    k: tuple[float, ...]
    allow_degenerate: bool = False

    def __post_init__(self):
        k = tuple(float(v) for v in self.k)
        if not all(np.isfinite(k)):
            raise ValueError("momenta must be finite")
        object.__setattr__(self, "k", k)
        if not self.allow_degenerate:
            for a, b in combinations(range(len(k)), 2):
                if k[a] == k[b]:
                    raise DegenerateMomenta(f"k{a + 1} = k{b + 1} = {k[a]}")

    def __len__(self):
        return len(self.k)

    def half_difference(self, a: int, b: int) -> float:
        """``(k_a - k_b) / 2`` for 1-based labels."""
        return (self.k[a - 1] - self.k[b - 1]) / 2

    @property
    def energy(self) -> float:
        return float(sum(v * v for v in self.k))

    @classmethod
    def random(cls, rng: np.random.Generator, N: int, low=-2.0, high=2.0, min_gap=0.1):
        while True:
            k = rng.uniform(low, high, size=N)
            if N < 2 or np.min(np.diff(np.sort(k))) >= min_gap:
                return cls(tuple(k))


@dataclass(frozen=True)
class YOperator:
    matrix: np.ndarray
    pair: tuple[int, int]
    kdiff: complex


def y_two_body(h, P, kdiff: float, tol: float = matkit.DEFAULT_TOL) -> np.ndarray:
    h = matkit.as_matrix(h)
    P = matkit.as_matrix(P)
    if h.shape != P.shape or h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"h {h.shape} and P {P.shape} must be equal square shapes")
    z = 2j * kdiff
    eye = np.eye(h.shape[0])
    return matkit.as_matrix(matkit.inverse(z * eye - h, tol) @ (z * P + h))


def y_embedded(model: ManyBodyModel, j: int, kdiff: float, tol: float = matkit.DEFAULT_TOL) -> YOperator:
    if not 1 <= j <= model.N - 1:
        raise IndexOutOfRange(f"slot j={j} outside 1..{model.N - 1}")
    m = y_two_body(embed_pair(model, j, j + 1), signed_permutation(model, j, j + 1), kdiff, tol)
    return YOperator(m, (j, j + 1), kdiff)


def _relative(diff: np.ndarray, ref: np.ndarray) -> float:
    return matkit.fro(diff) / max(1.0, matkit.fro(ref))


def braid_sides(model: ManyBodyModel, k1: float, k2: float, k3: float, tol=matkit.DEFAULT_TOL):
    """Both sides of the three-particle braid relation on ``(C^n)^{⊗3}``.

    Exchanging momenta along ``s1 s2 s1`` and along ``s2 s1 s2`` must give the
    same operator::

        Y12(k23) Y23(k13) Y12(k12) = Y23(k12) Y12(k13) Y23(k23)

    with ``kab = (k_a - k_b) / 2``.
    """
    m3 = model.with_N(3)
    half = lambda a, b: (a - b) / 2  # noqa: E731
    k12, k13, k23 = half(k1, k2), half(k1, k3), half(k2, k3)

    def y(slot, kd):
        return y_embedded(m3, slot, kd, tol).matrix

    lhs = y(1, k23) @ y(2, k13) @ y(1, k12)
    rhs = y(2, k12) @ y(1, k13) @ y(2, k23)
    return lhs, rhs


def ybe_residual(model: ManyBodyModel, k1: float, k2: float, k3: float, tol: float = matkit.DEFAULT_TOL) -> float:
    lhs, rhs = braid_sides(model, k1, k2, k3, tol)
    return _relative(lhs - rhs, lhs)


def inverse_residual(model: ManyBodyModel, kdiff: float, j: int = 1, tol: float = matkit.DEFAULT_TOL) -> float:
    """``||Y(k) Y(-k) - I||_F`` for the exchange at slot ``(j, j+1)``."""
    fwd = y_embedded(model, j, kdiff, tol).matrix
    back = y_embedded(model, j, -kdiff, tol).matrix
    return matkit.fro(fwd @ back - np.eye(model.dim))


def ybe_far_commutation_residual(model: ManyBodyModel, momenta: MomentumSet, tol: float = matkit.DEFAULT_TOL) -> float:
    """Largest normalized commutator between exchanges on disjoint adjacent slots."""
    N = model.N
    if N < 4:
        raise ValueError("far commutation needs N >= 4")
    if len(momenta) != N:
        raise DimensionMismatch(f"need {N} momenta, got {len(momenta)}")
    ys = {
        j: y_embedded(model, j, momenta.half_difference(j, j + 1), tol).matrix
        for j in range(1, N)
    }
    worst = 0.0
    for j in range(1, N):
        for l in range(j + 2, N):
            a, b = ys[j], ys[l]
            worst = max(worst, matkit.fro(a @ b - b @ a) / max(1.0, matkit.fro(a) * matkit.fro(b)))
    return worst
