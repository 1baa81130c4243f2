"""
Point-interaction boundary conditions of delta type and their symmetry class.

A boundary condition links the (value, derivative) pair of the ``n**2``
component relative wave function across ``x = 0``::

    [psi ]        [ I  0 ] [psi ]
    [psi']_{0+} = [ C  I ] [psi']_{0-}

It is self-adjoint when ``C`` is Hermitian and PT-symmetric when ``C`` is
real.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matkit
from .errors import DimensionMismatch


@dataclass(frozen=True)
class SymmetryClass:
    self_adjoint: bool
    pt_symmetric: bool

    def label(self) -> str:
        if self.self_adjoint and self.pt_symmetric:
            return "self-adjoint and PT-symmetric"
        if self.self_adjoint:
            return "self-adjoint"
        if self.pt_symmetric:
            return "PT-symmetric"
        return "neither"


@dataclass(frozen=True)
class BoundaryCondition:
    n: int
    C: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        c = matkit.as_matrix(self.C)
        if c.shape != (self.n**2, self.n**2):
            raise DimensionMismatch(
                f"C must be {self.n**2}x{self.n**2} for n={self.n}, got {c.shape}"
            )
        object.__setattr__(self, "C", c)

    @classmethod
    def scalar(cls, gamma: complex) -> "BoundaryCondition":
        return cls(1, np.array([[gamma]]))


def classify(bc: BoundaryCondition, tol: float = matkit.DEFAULT_TOL) -> SymmetryClass:
    c = bc.C
    scale = tol * max(1.0, matkit.fro(c))
    return SymmetryClass(
        self_adjoint=matkit.fro(c - c.conj().T) <= scale,
        pt_symmetric=matkit.fro(c.imag) <= scale,
    )


def pt_transform(bc: BoundaryCondition) -> BoundaryCondition:
    """Raw map ``C -> -conj(C)`` picked up by ``PT psi``.

    The returned condition is written in the reversed (0+ to 0-) orientation,
    so its fixed points are *not* the PT-symmetric conditions; use
    :func:`classify` or :func:`pt_fixed_point_defect` for that question.
    """
    return BoundaryCondition(bc.n, -bc.C.conj())


def transfer_matrix(C) -> np.ndarray:
    """Block matrix ``[[I, 0], [C, I]]`` of size ``2 d x 2 d``."""
    c = matkit.as_matrix(C)
    d = c.shape[0]
    t = np.eye(2 * d, dtype=np.complex128)
    t[d:, :d] = c
    return matkit.as_matrix(t)


def pt_fixed_point_defect(bc: BoundaryCondition, tol: float = matkit.DEFAULT_TOL) -> float:
    """Frobenius distance between ``[[I,0],[-C*,I]]`` and ``T(C)^-1``.

    Zero exactly when the boundary condition is mapped onto itself by PT.
    The inverse is taken numerically, not from the closed form.
    """
    lhs = transfer_matrix(-bc.C.conj())
    rhs = matkit.inverse(transfer_matrix(bc.C), tol)
    return matkit.fro(lhs - rhs)
