"""
JSON model files.

Either the ten spin-1/2 parameters::

    {"statistics": "fermi", "N": 3,
     "spin_half_params": {"a": [1, 0], "b": [2, 0], ..., "e4": [0, -1]}}

or an explicit coupling for spin dimension ``n``, row-major, given as a list
of rows or as one flat list::

    {"statistics": "bose", "n": 1, "h": [[[-2, 0]]]}

Complex numbers are always ``[re, im]`` pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError
from .spinspace import ManyBodyModel, SpinHalfParams, Statistics, build_spin_half_h

PARAM_NAMES = ("a", "b", "c", "d", "f", "g", "e1", "e2", "e3", "e4")
_KNOWN_KEYS = {"statistics", "N", "n", "h", "spin_half_params"}


@dataclass(frozen=True)
class ModelFile:
    n: int
    h: np.ndarray
    statistics: Statistics
    N: int | None = None
    params: SpinHalfParams | None = None

    def model(self, N: int | None = None, statistics=None) -> ManyBodyModel:
        N = N if N is not None else (self.N or 2)
        return ManyBodyModel(N, self.n, self.h, statistics or self.statistics)


def _complex(value, where: str) -> complex:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise ParseError(f"{where}: expected a [re, im] pair of numbers, got {json.dumps(value)}")
    z = complex(value[0], value[1])
    if not np.isfinite(z):
        raise ParseError(f"{where}: entries must be finite")
    return z


def _matrix(raw, n: int) -> np.ndarray:
    dim = n * n
    if not isinstance(raw, list) or not raw:
        raise ParseError("h: expected a non-empty list")
    nested = isinstance(raw[0], list) and raw[0] and isinstance(raw[0][0], list)
    if nested:
        rows = len(raw)
        cols = {len(r) if isinstance(r, list) else -1 for r in raw}
        if len(cols) != 1 or -1 in cols:
            raise ParseError("h: rows must all be lists of the same length")
        cols = cols.pop()
        if (rows, cols) != (dim, dim):
            raise ParseError(
                f"h: n={n} requires an n^2 x n^2 = {dim}x{dim} matrix, got {rows}x{cols}"
            )
        flat = [entry for row in raw for entry in row]
    else:
        if len(raw) != dim * dim:
            raise ParseError(
                f"h: n={n} requires {dim * dim} row-major entries (n^2 x n^2), got {len(raw)}"
            )
        flat = raw
    values = [_complex(v, f"h[{k // dim}][{k % dim}]") for k, v in enumerate(flat)]
    return np.array(values, dtype=np.complex128).reshape(dim, dim)


def parse_model(doc) -> ModelFile:
    if not isinstance(doc, dict):
        raise ParseError("model file must contain a JSON object")
    unknown = set(doc) - _KNOWN_KEYS
    if unknown:
        raise ParseError(f"unknown field(s): {', '.join(sorted(unknown))}")

    stats = doc.get("statistics")
    if stats not in ("bose", "fermi"):
        raise ParseError(f'statistics: expected "bose" or "fermi", got {json.dumps(stats)}')

    N = doc.get("N")
    if N is not None and (not isinstance(N, int) or isinstance(N, bool) or N < 2):
        raise ParseError(f"N: expected an integer >= 2, got {json.dumps(N)}")

    has_params = "spin_half_params" in doc
    has_h = "h" in doc
    if has_params == has_h:
        raise ParseError("exactly one of spin_half_params or h must be present")

    if has_params:
        raw = doc["spin_half_params"]
        if not isinstance(raw, dict):
            raise ParseError("spin_half_params: expected an object")
        missing = [p for p in PARAM_NAMES if p not in raw]
        extra = sorted(set(raw) - set(PARAM_NAMES))
        if missing:
            raise ParseError(f"spin_half_params: missing {', '.join(missing)}")
        if extra:
            raise ParseError(f"spin_half_params: unknown {', '.join(extra)}")
        if "n" in doc and doc["n"] != 2:
            raise ParseError("n: spin_half_params implies n = 2")
        params = SpinHalfParams(**{p: _complex(raw[p], f"spin_half_params.{p}") for p in PARAM_NAMES})
        return ModelFile(2, build_spin_half_h(params), Statistics(stats), N, params)

    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"n: expected a positive integer, got {json.dumps(n)}")
    return ModelFile(n, _matrix(doc["h"], n), Statistics(stats), N)


def load_model(path) -> tuple[ModelFile, bytes]:
    """Parse a model file; also returns the raw bytes for digests."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 text") from exc
    try:
        return parse_model(doc), raw
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def dump_model(model: ModelFile) -> dict:
    doc: dict = {"statistics": model.statistics.value}
    if model.N is not None:
        doc["N"] = model.N
    if model.params is not None:
        doc["spin_half_params"] = {
            k: [v.real, v.imag] for k, v in model.params.as_dict().items()
        }
    else:
        doc["n"] = model.n
        doc["h"] = [[[z.real, z.imag] for z in row] for row in model.h.tolist()]
    return doc
