"""
Coordinate Bethe ansatz for N particles with spin-coupled contact interactions.

In the fundamental region ``x_1 < x_2 < ... < x_N`` the wave function is

    Psi(x) = sum_sigma u_sigma exp(i sum_m k_{sigma(m)} x_m)

where ``sigma`` runs over the permutations of momentum labels and ``u_sigma``
is an ``n**N`` spin vector.  A permutation is stored as a tuple whose m-th
entry is the label of the momentum carried by the m-th particle from the
left.  Neighbouring terms are linked by the exchange operators of
:mod:`spindelta.scattering`; the other regions follow from Bose or Fermi
symmetry under simultaneous exchange of coordinates and spins.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterator, Sequence

import numpy as np

from . import matkit
from .errors import DimensionMismatch, OnContactPlane, PathInconsistency
from .scattering import MomentumSet, y_embedded
from .spinspace import ManyBodyModel, embed_pair

CONTACT_EPS = 1e-12
PATH_TOL = 1e-9

Perm = tuple[int, ...]


@dataclass(frozen=True)
class BetheAmplitudes:
    model: ManyBodyModel
    momenta: MomentumSet
    table: dict[Perm, np.ndarray]
    # relative operator mismatch between the two canonical words of the longest element
    path_defect: float = 0.0
    _exps: np.ndarray = field(init=False, repr=False, compare=False)
    _amps: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        perms = sorted(self.table)
        k = np.asarray(self.momenta.k)
        object.__setattr__(self, "_exps", np.array([[k[s - 1] for s in p] for p in perms]))
        object.__setattr__(self, "_amps", np.array([self.table[p] for p in perms]))

    @property
    def seed(self) -> np.ndarray:
        return self.table[tuple(range(1, self.model.N + 1))]

    @property
    def energy(self) -> float:
        return self.momenta.energy


@dataclass(frozen=True)
class WavefunctionSample:
    position: tuple[float, ...]
    value: np.ndarray
    gradient: np.ndarray  # shape (N, n**N)


def default_seed(model: ManyBodyModel) -> np.ndarray:
    seed = np.zeros(model.dim, dtype=np.complex128)
    seed[0] = 1.0
    return seed


def reduced_words(perm: Perm) -> Iterator[tuple[int, ...]]:
    """All reduced words ``(j1, j2, ...)`` with ``perm = id . s_j1 . s_j2 ...``.

    Applying ``s_j`` swaps the entries at positions ``j, j+1``; every letter of
    a reduced word creates one new inversion.
    """
    perm = tuple(perm)
    N = len(perm)
    descents = [j for j in range(1, N) if perm[j - 1] > perm[j]]
    if not descents:
        yield ()
        return
    for j in descents:
        prev = list(perm)
        prev[j - 1], prev[j] = prev[j], prev[j - 1]
        for word in reduced_words(tuple(prev)):
            yield word + (j,)


def canonical_words(N: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Two reduced words of the longest permutation, mirror images of each other."""
    first = tuple(j for top in range(1, N) for j in range(top, 0, -1))
    return first, tuple(N - j for j in first)


class _Exchanger:
    """Caches exchange operators keyed by slot and momentum labels."""

    def __init__(self, model: ManyBodyModel, momenta: MomentumSet, tol: float):
        self.model, self.momenta, self.tol = model, momenta, tol
        self._cache: dict[tuple[int, int, int], np.ndarray] = {}

    def __call__(self, j: int, left: int, right: int) -> np.ndarray:
        key = (j, left, right)
        if key not in self._cache:
            kd = self.momenta.half_difference(left, right)
            self._cache[key] = y_embedded(self.model, j, kd, self.tol).matrix
        return self._cache[key]

    def word_operator(self, word: Sequence[int]) -> np.ndarray:
        perm = list(range(1, self.model.N + 1))
        op = np.eye(self.model.dim, dtype=np.complex128)
        for j in word:
            op = self(j, perm[j - 1], perm[j]) @ op
            perm[j - 1], perm[j] = perm[j], perm[j - 1]
        return op


def _relative_gap(a: np.ndarray, b: np.ndarray) -> float:
    return matkit.fro(a - b) / max(1.0, matkit.fro(a))


def propagate_amplitudes(
    model: ManyBodyModel,
    momenta: MomentumSet,
    seed=None,
    tol: float = PATH_TOL,
    inv_tol: float = matkit.DEFAULT_TOL,
) -> BetheAmplitudes:
    """Fill the amplitude table over the whole symmetric group.

    Starting from ``u_id = seed`` each permutation is reached by a
    breadth-first chain of adjacent exchanges.  The operator products along
    the two canonical reduced words of the longest permutation are compared
    first; a relative mismatch above ``tol`` raises
    :class:`PathInconsistency`, since the table would then depend on the
    chosen factorization.
    """
    N = model.N
    if len(momenta) != N:
        raise DimensionMismatch(f"model has N={N} but {len(momenta)} momenta were given")
    MomentumSet(momenta.k)  # rejects degenerate momenta even if the caller allowed them
    seed = default_seed(model) if seed is None else np.asarray(seed, dtype=np.complex128)
    if seed.shape != (model.dim,):
        raise DimensionMismatch(f"seed must have length {model.dim}, got {seed.shape}")

    ex = _Exchanger(model, momenta, inv_tol)
    w1, w2 = canonical_words(N)
    defect = _relative_gap(ex.word_operator(w1), ex.word_operator(w2))
    if defect > tol:
        raise PathInconsistency(
            f"longest permutation differs between words {w1} and {w2} "
            f"(relative defect {defect:.3e} > {tol:.1e})",
            defect,
        )

    start = tuple(range(1, N + 1))
    table = {start: seed.copy()}
    queue = deque([start])
    while queue:
        perm = queue.popleft()
        for j in range(1, N):
            if perm[j - 1] < perm[j]:
                nxt = list(perm)
                nxt[j - 1], nxt[j] = nxt[j], nxt[j - 1]
                nxt = tuple(nxt)
                if nxt not in table:
                    table[nxt] = ex(j, perm[j - 1], perm[j]) @ table[perm]
                    queue.append(nxt)
    for v in table.values():
        v.setflags(write=False)
    return BetheAmplitudes(model, momenta, table, defect)


def path_independence_defect(
    model: ManyBodyModel,
    momenta: MomentumSet,
    perm: Perm | None = None,
    inv_tol: float = matkit.DEFAULT_TOL,
) -> float:
    """Largest relative operator mismatch over *all* reduced words of ``perm``.

    ``perm`` defaults to the longest permutation.  Exhaustive, so intended
    for ``N <= 4`` (16 words for the longest element of S_4).
    """
    N = model.N
    perm = tuple(range(N, 0, -1)) if perm is None else tuple(perm)
    ex = _Exchanger(model, momenta, inv_tol)
    words = list(reduced_words(perm))
    ref = ex.word_operator(words[0])
    return max((_relative_gap(ref, ex.word_operator(w)) for w in words[1:]), default=0.0)


def _spin_relabel(vecs: np.ndarray, order: Sequence[int], n: int, N: int) -> np.ndarray:
    # moves spin slot m of each vector to slot order[m] (both 0-based)
    lead = vecs.shape[:-1]
    t = vecs.reshape(lead + (n,) * N)
    inv = np.argsort(order)
    axes = tuple(range(len(lead))) + tuple(len(lead) + a for a in inv)
    return np.transpose(t, axes).reshape(lead + (n**N,))


def _perm_sign(order: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(order)
    for start in range(len(order)):
        if seen[start]:
            continue
        length, cur = 0, start
        while not seen[cur]:
            seen[cur] = True
            cur = order[cur]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _in_region(amps: BetheAmplitudes, x: np.ndarray, order: Sequence[int]):
    """Value, gradient and ``-Laplacian`` of the analytic continuation of the
    region in which particle ``order[m]`` (0-based) is the m-th from the left.
    Valid on the closure of that region, contact planes included.
    """
    model = amps.model
    n, N = model.n, model.N
    y = x[list(order)]
    phases = np.exp(1j * (amps._exps @ y))
    weighted = amps._amps * phases[:, None]
    value_f = weighted.sum(axis=0)
    grad_f = 1j * np.einsum("pm,pd->md", amps._exps, weighted)
    lap_f = np.einsum("p,pd->d", (amps._exps**2).sum(axis=1), weighted)

    sign = _perm_sign(order) if model.statistics.sign < 0 else 1
    value = sign * _spin_relabel(value_f, order, n, N)
    grad_sorted = sign * _spin_relabel(grad_f, order, n, N)
    grad = np.empty_like(grad_sorted)
    grad[list(order)] = grad_sorted
    neg_lap = sign * _spin_relabel(lap_f, order, n, N)
    return value, grad, neg_lap


def _order_of(x: np.ndarray) -> list[int]:
    order = list(np.argsort(x, kind="stable"))
    ys = x[order]
    if len(ys) > 1 and np.min(np.diff(ys)) < CONTACT_EPS:
        raise OnContactPlane(f"coordinates {x.tolist()} lie on a contact plane")
    return order


def evaluate(amps: BetheAmplitudes, x: Sequence[float]) -> WavefunctionSample:
    x = np.asarray(x, dtype=float)
    if x.shape != (amps.model.N,):
        raise DimensionMismatch(f"need {amps.model.N} coordinates, got {x.shape}")
    value, grad, _ = _in_region(amps, x, _order_of(x))
    return WavefunctionSample(tuple(x.tolist()), value, grad)


def _plane_orders(x: np.ndarray, i: int, j: int) -> tuple[list[int], list[int]]:
    # orders on the two sides of x_i = x_j (0-based labels): i left of j, then j left of i
    others = [m for m in range(len(x)) if m not in (i, j)]
    for m in others:
        if abs(x[m] - x[i]) < CONTACT_EPS:
            raise OnContactPlane(f"particle {m + 1} sits on the plane x{i + 1}=x{j + 1}")
    others.sort(key=lambda m: x[m])
    before = [m for m in others if x[m] < x[i]]
    after = [m for m in others if x[m] > x[i]]
    return before + [i, j] + after, before + [j, i] + after


def boundary_defects(amps: BetheAmplitudes, plane: tuple[int, int], point: Sequence[float]):
    """Continuity and derivative-jump defects at one point of the plane ``x_i = x_j``.

    ``point`` is a full coordinate vector; its j-th entry is replaced by the
    i-th so the point lies on the plane.  Uses the relative coordinate
    ``x_i - x_j``, whose derivative is ``(d_i - d_j) / 2``.  Returns the pair
    ``(continuity, jump)`` normalized by ``max(1, ||psi(0)||)``.
    """
    i, j = plane
    x = np.array(point, dtype=float)
    x[j - 1] = x[i - 1]
    minus, plus = _plane_orders(x, i - 1, j - 1)
    v_m, g_m, _ = _in_region(amps, x, minus)
    v_p, g_p, _ = _in_region(amps, x, plus)
    d_m = (g_m[i - 1] - g_m[j - 1]) / 2
    d_p = (g_p[i - 1] - g_p[j - 1]) / 2
    h_ij = embed_pair(amps.model, i, j)
    norm = max(1.0, float(np.linalg.norm(v_m)))
    continuity = float(np.linalg.norm(v_p - v_m)) / norm
    jump = float(np.linalg.norm(d_p - d_m - h_ij @ v_m)) / norm
    return continuity, jump


def boundary_residual(
    amps: BetheAmplitudes,
    plane: tuple[int, int],
    samples: Sequence[Sequence[float]] | None = None,
    rng: np.random.Generator | None = None,
    count: int = 10,
) -> float:
    """Worst contact-condition defect on the plane ``x_i = x_j`` over samples.

    Without explicit ``samples``, ``count`` points are drawn uniformly from
    ``[-3, 3]^N`` using ``rng`` (seeded with 0 when omitted).
    """
    i, j = plane
    if not 1 <= i < j <= amps.model.N:
        raise ValueError(f"invalid plane {plane}")
    if samples is None:
        rng = np.random.default_rng(0) if rng is None else rng
        samples = rng.uniform(-3, 3, size=(count, amps.model.N))
    return max(max(boundary_defects(amps, (i, j), p)) for p in samples)


def energy_residual(amps: BetheAmplitudes, x_samples: Sequence[Sequence[float]]) -> float:
    """Worst ``||(-Laplacian - E) Psi|| / ||Psi||`` with ``E = sum k_i**2``."""
    e = amps.energy
    worst = 0.0
    for x in x_samples:
        x = np.asarray(x, dtype=float)
        value, _, neg_lap = _in_region(amps, x, _order_of(x))
        worst = max(worst, float(np.linalg.norm(neg_lap - e * value) / np.linalg.norm(value)))
    return worst


def all_permutations(N: int) -> list[Perm]:
    return list(permutations(range(1, N + 1)))
