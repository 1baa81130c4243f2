"""
Operators on the spin space ``(C^n)^{⊗N}`` of ``N`` particles.

Tensor factor 1 is the leftmost Kronecker slot, so the basis vector
``e_{a1} ⊗ ... ⊗ e_{aN}`` (0-based ``a_k``) sits at index
``sum(a_k * n**(N-k))``.  Particle labels ``i, j`` are 1-based throughout, as
in the physics notation.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, fields

import numpy as np

from . import matkit
from .boundary import BoundaryCondition, SymmetryClass, classify
from .errors import DimensionMismatch, IndexOutOfRange


class Statistics(str, enum.Enum):
    BOSE = "bose"
    FERMI = "fermi"

    @property
    def sign(self) -> int:
        return 1 if self is Statistics.BOSE else -1


@dataclass(frozen=True)
class SpinHalfParams:
    """The ten complex parameters of the general swap-commuting 4x4 coupling."""

    a: complex = 0
    b: complex = 0
    c: complex = 0
    d: complex = 0
    f: complex = 0
    g: complex = 0
    e1: complex = 0
    e2: complex = 0
    e3: complex = 0
    e4: complex = 0

    def __post_init__(self):
        for fld in fields(self):
            value = complex(getattr(self, fld.name))
            if not np.isfinite(value):
                raise ValueError(f"parameter {fld.name} is not finite")
            object.__setattr__(self, fld.name, value)

    def as_dict(self) -> dict[str, complex]:
        return {fld.name: getattr(self, fld.name) for fld in fields(self)}

    @classmethod
    def random(cls, rng: np.random.Generator, family: str = "general", scale: float = 1.0):
        """Draw parameters from one of the named sub-families.

        ``family`` is one of ``"general"`` (ten independent complex numbers),
        ``"self_adjoint"`` (e2 = e1*, e4 = e3*, d = c*, a, b, f, g real),
        ``"pt"`` (all ten real) or ``"both"`` (real with e2 = e1, e4 = e3, d = c).
        """

        def cplx():
            return scale * complex(rng.normal(), rng.normal())

        def real():
            return scale * float(rng.normal())

        if family == "general":
            return cls(**{name: cplx() for name in _PARAM_NAMES})
        if family == "pt":
            return cls(**{name: real() for name in _PARAM_NAMES})
        if family == "self_adjoint":
            e1, e3, c = cplx(), cplx(), cplx()
            return cls(
                a=real(), b=real(), f=real(), g=real(),
                c=c, d=c.conjugate(), e1=e1, e2=e1.conjugate(), e3=e3, e4=e3.conjugate(),
            )
        if family == "both":
            e1, e3, c = real(), real(), real()
            return cls(a=real(), b=real(), f=real(), g=real(), c=c, d=c, e1=e1, e2=e1, e3=e3, e4=e3)
        raise ValueError(f"unknown family {family!r}")


_PARAM_NAMES = tuple(f.name for f in fields(SpinHalfParams))


@dataclass(frozen=True)
class ManyBodyModel:
    """``N`` identical particles with ``n`` spin components and pair coupling ``h``.

    With ``physical=True`` a mismatch between spin and statistics (integer
    spin must be Bose, half-integer Fermi) emits a warning.
    """

    N: int
    n: int
    h: np.ndarray
    statistics: Statistics = Statistics.BOSE
    physical: bool = False

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("a many-body model needs N >= 2")
        if self.n < 1:
            raise ValueError("spin dimension n must be >= 1")
        h = matkit.as_matrix(self.h)
        if h.shape != (self.n**2, self.n**2):
            raise DimensionMismatch(f"h must be {self.n**2}x{self.n**2} for n={self.n}, got {h.shape}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "statistics", Statistics(self.statistics))
        if self.physical:
            integer_spin = (self.n - 1) % 2 == 0
            expected = Statistics.BOSE if integer_spin else Statistics.FERMI
            if self.statistics is not expected:
                warnings.warn(
                    f"spin s={(self.n - 1) / 2} particles are {expected.value}s, "
                    f"model uses {self.statistics.value} statistics",
                    stacklevel=2,
                )

    @property
    def dim(self) -> int:
        return self.n**self.N

    def with_N(self, N: int) -> "ManyBodyModel":
        return ManyBodyModel(N, self.n, self.h, self.statistics)

    def with_statistics(self, statistics) -> "ManyBodyModel":
        return ManyBodyModel(self.N, self.n, self.h, Statistics(statistics))


def build_spin_half_h(p: SpinHalfParams) -> np.ndarray:
    return matkit.as_matrix(
        [
            [p.a, p.e1, p.e1, p.c],
            [p.e2, p.f, p.g, p.e3],
            [p.e2, p.g, p.f, p.e3],
            [p.d, p.e4, p.e4, p.b],
        ]
    )


def classify_spin_half(p: SpinHalfParams, tol: float = matkit.DEFAULT_TOL) -> SymmetryClass:
    return classify(BoundaryCondition(2, build_spin_half_h(p)), tol)


def _check_pair(N: int, i: int, j: int) -> None:
    if not (1 <= i < j <= N):
        raise IndexOutOfRange(f"need 1 <= i < j <= N, got i={i}, j={j}, N={N}")


def pair_permutation(N: int, n: int, i: int, j: int) -> np.ndarray:
    """0/1 matrix exchanging tensor factors ``i`` and ``j`` of ``(C^n)^{⊗N}``."""
    _check_pair(N, i, j)
    dim = n**N
    idx = np.arange(dim).reshape((n,) * N)
    target = np.swapaxes(idx, i - 1, j - 1).ravel()
    p = np.zeros((dim, dim), dtype=np.complex128)
    p[target, np.arange(dim)] = 1.0
    return matkit.as_matrix(p)


def signed_permutation(model: ManyBodyModel, i: int, j: int) -> np.ndarray:
    return matkit.as_matrix(model.statistics.sign * pair_permutation(model.N, model.n, i, j))


def embed_pair(model: ManyBodyModel, i: int, j: int) -> np.ndarray:
    """``h`` acting on factors ``i, j`` and the identity elsewhere.

    Built as ``1 ⊗ h ⊗ 1`` on the adjacent slots ``(i, i+1)`` and, for
    ``j > i + 1``, conjugated by the swap of factors ``i+1`` and ``j``.
    """
    N, n = model.N, model.n
    _check_pair(N, i, j)
    adjacent = matkit.kron_all(np.eye(n ** (i - 1)), model.h, np.eye(n ** (N - i - 1)))
    if j == i + 1:
        return adjacent
    swap = pair_permutation(N, n, i + 1, j)
    return matkit.as_matrix(swap @ adjacent @ swap)


def commutator_norm(h, P) -> float:
    h = matkit.as_matrix(h)
    P = matkit.as_matrix(P)
    if h.shape != P.shape:
        raise DimensionMismatch(f"shapes differ: {h.shape} vs {P.shape}")
    return matkit.fro(h @ P - P @ h)


def swap(n: int = 2) -> np.ndarray:
    """Two-particle spin exchange on ``C^n ⊗ C^n``."""
    return pair_permutation(2, n, 1, 2)
