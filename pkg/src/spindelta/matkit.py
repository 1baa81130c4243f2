"""
Dense complex linear algebra for the small operators used throughout.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  Every
public function validates its input with :func:`as_matrix`, which rejects
non-finite entries and non-2D shapes.  The dimensions involved never exceed
a few dozen (``n**N`` with ``n = 2`` and ``N <= 5``), so nothing here is
optimized for size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NoConvergence, SingularMatrix

DEFAULT_TOL = 1e-12

# eigenvalues closer than this (relative to ||A||_F) are treated as one cluster
_CLUSTER_TOL = 1e-7


def as_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise DimensionMismatch(f"expected a non-empty 2D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or Inf entries")
    m.setflags(write=False)
    return m


def _square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def identity(dim: int) -> np.ndarray:
    return as_matrix(np.eye(dim))


def fro(a) -> float:
    return float(np.linalg.norm(a))


def kron(a, b) -> np.ndarray:
    return as_matrix(np.kron(as_matrix(a), as_matrix(b)))


def kron_all(*factors) -> np.ndarray:
    out = as_matrix(factors[0])
    for f in factors[1:]:
        out = kron(out, f)
    return out


def inverse(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Invert a square matrix through a pivoted LU factorization.

    Raises :class:`SingularMatrix` when the smallest pivot is below
    ``tol * ||A||_F`` or when the result misses ``||AB - I||_F <= tol * ||A||_F``
    (in either order).
    """
    m = _square(a)
    scale = fro(m)
    if scale == 0.0:
        raise SingularMatrix("zero matrix")
    lu, piv = scipy.linalg.lu_factor(m, check_finite=False)
    smallest = float(np.min(np.abs(np.diag(lu))))
    if smallest <= tol * scale:
        raise SingularMatrix(f"pivot {smallest:.3e} below {tol:.1e} * ||A||_F")
    eye = np.eye(m.shape[0])
    b = scipy.linalg.lu_solve((lu, piv), eye, check_finite=False)
    worst = max(fro(m @ b - eye), fro(b @ m - eye))
    if worst > tol * scale:
        raise SingularMatrix(
            f"inverse residual {worst:.3e} exceeds {tol:.1e} * ||A||_F (ill-conditioned)"
        )
    return as_matrix(b)


@dataclass(frozen=True)
class EigenPair:
    value: complex
    vector: np.ndarray | None
    # set when the eigenvalue's cluster has fewer independent vectors than its
    # multiplicity; such pairs carry vector=None
    defective: bool = False


def eigen(a, tol: float = DEFAULT_TOL) -> list[EigenPair]:
    """All eigenpairs of a square matrix, with algebraic multiplicity.

    Parameters
    ----------
    a : array_like
        Square matrix, Hermitian or not.
    tol : float
        Relative residual bound: every returned vector satisfies
        ``||A v - lambda v|| <= tol * ||A||_F`` with ``||v|| = 1``.

    Returns
    -------
    list of EigenPair
        Sorted by (real, imag) part.  Hermitian input is routed through
        ``eigh`` so values are exactly real; real input through the real
        ``geev`` driver so complex values come in exact conjugate pairs.
        When a cluster of (numerically) equal eigenvalues is defective, only
        as many vectors as its numerical rank are returned and the remaining
        pairs are flagged with ``defective=True`` and ``vector=None``.

    Raises
    ------
    NoConvergence
        If LAPACK fails or the residual contract is violated.
    """
    m = _square(a)
    dim = m.shape[0]
    scale = fro(m)
    if scale == 0.0:
        return [EigenPair(0j, v) for v in np.eye(dim, dtype=np.complex128).T]
    try:
        if fro(m - m.conj().T) <= 1e-14 * scale:
            w, v = np.linalg.eigh((m + m.conj().T) / 2)
            w = w.astype(np.complex128)
        elif not np.any(m.imag):
            w, v = np.linalg.eig(m.real)
        else:
            w, v = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    v = v.astype(np.complex128)

    order = np.lexsort((w.imag, w.real))
    w, v = w[order], v[:, order]

    pairs: list[EigenPair] = []
    for cluster in _clusters(w, _CLUSTER_TOL * scale):
        keep = set(cluster)
        if len(cluster) > 1:
            # a defective cluster returns nearly parallel vectors; keep the
            # most independent subset, as many as its numerical rank
            block = v[:, cluster]
            _, r, cols = scipy.linalg.qr(block, mode="economic", pivoting=True)
            diag = np.abs(np.diag(r))
            rank = int(np.sum(diag > 1e-6 * diag[0]))
            keep = {cluster[c] for c in cols[:rank]}
        for idx in cluster:
            if idx not in keep:
                pairs.append(EigenPair(complex(w[idx]), None, defective=True))
                continue
            vec = v[:, idx] / np.linalg.norm(v[:, idx])
            res = np.linalg.norm(m @ vec - w[idx] * vec)
            if res > tol * scale:
                raise NoConvergence(f"eigen residual {res:.3e} exceeds {tol:.1e} * ||A||_F")
            vec.setflags(write=False)
            pairs.append(EigenPair(complex(w[idx]), vec))
    return pairs


def _clusters(w: np.ndarray, gap: float) -> list[list[int]]:
    # single-linkage grouping of nearly equal eigenvalues
    remaining = list(range(len(w)))
    out = []
    while remaining:
        group = [remaining.pop(0)]
        grew = True
        while grew:
            grew = False
            for j in list(remaining):
                if any(abs(w[j] - w[g]) <= gap for g in group):
                    group.append(j)
                    remaining.remove(j)
                    grew = True
        out.append(sorted(group))
    return out


def eigenvalues(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    return np.array([p.value for p in eigen(a, tol)], dtype=np.complex128)
