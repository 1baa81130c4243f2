"""
Command-line front end: ``spindelta {classify,ybe,bethe,bound} MODEL [options]``.

Exit codes are shared by all commands: 0 when every check passes, 1 when
some check fails, 2 for unusable input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

import numpy as np

from . import __version__, bethe, oracle, scattering, spectra
from .boundary import BoundaryCondition, classify
from .errors import (
    DegenerateMomenta,
    GridTooCoarse,
    NoSimultaneousEigenvector,
    ParseError,
    PathInconsistency,
    SingularMatrix,
)
from .modelfile import load_model
from .spinspace import commutator_norm, signed_permutation

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class Check:
    name: str
    value: Any
    threshold: float | None
    passed: bool

    def as_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "threshold": self.threshold, "pass": self.passed}


@dataclass
class Report:
    command: str
    digest: str
    checks: list[Check] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    summary: str = ""
    seconds: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name, value, threshold=None, passed=None) -> Check:
        if passed is None:
            passed = value is not None and threshold is not None and value <= threshold
        c = Check(name, value, threshold, bool(passed))
        self.checks.append(c)
        return c

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "digest": self.digest,
            "checks": [c.as_dict() for c in self.checks],
            "pass": self.passed,
            "seconds": self.seconds,
            "details": self.details,
            "notes": self.notes,
        }
        return json.dumps(doc, indent=2, sort_keys=False, allow_nan=True)

    def to_text(self) -> str:
        lines = [f"spindelta {self.command}", f"digest  {self.digest[:16]}"]
        if self.summary:
            lines.append(self.summary)
        width = max([len(c.name) for c in self.checks] + [5])
        lines.append(f"{'check':<{width}}  {'value':>14}  {'threshold':>10}  result")
        for c in self.checks:
            lines.append(
                f"{c.name:<{width}}  {_fmt(c.value):>14}  {_fmt(c.threshold):>10}  {'PASS' if c.passed else 'FAIL'}"
            )
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        if self.seconds is not None:
            lines.append(f"wall-clock: {self.seconds:.3f} s")
        return "\n".join(lines)


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.3e}" if v and (abs(v) < 1e-3 or abs(v) >= 1e4) else f"{v:.6g}"
    return str(v)


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _digest(raw: bytes, argv: list[str]) -> str:
    h = hashlib.sha256(raw)
    h.update(b"\0")
    h.update(json.dumps(argv).encode())
    return h.hexdigest()


# -- commands -----------------------------------------------------------------


def cmd_classify(args, mf, report: Report) -> int:
    sym = classify(BoundaryCondition(mf.n, mf.h))
    spectrum = spectra.classify_spectrum(mf.h)
    report.check("self_adjoint", sym.self_adjoint, passed=True)
    report.check("pt_symmetric", sym.pt_symmetric, passed=True)
    report.check("all_real", spectrum.all_real, passed=True)
    report.check("conjugate_closed", spectrum.conjugate_closed, passed=True)
    report.details = {
        "symmetry": sym.label(),
        "spectrum": spectrum.label,
        "eigenvalues": [_pair(z) for z in spectrum.eigenvalues],
    }
    report.summary = (
        f"self_adjoint: {_fmt(sym.self_adjoint)}, pt_symmetric: {_fmt(sym.pt_symmetric)}, "
        f"spectrum: {spectrum.label}"
    )
    return EXIT_PASS


def cmd_ybe(args, mf, report: Report) -> int:
    rng = np.random.default_rng(args.seed)
    tol = args.tol
    model3 = mf.model(3)
    model4 = mf.model(4)
    ybe, inv, far = [], [], []
    skipped = 0
    for s in range(args.samples):
        k = scattering.MomentumSet.random(rng, 4)
        try:
            ybe.append(scattering.ybe_residual(model3, *k.k[:3]))
            inv.append(scattering.inverse_residual(model3, k.half_difference(1, 2)))
            far.append(scattering.ybe_far_commutation_residual(model4, k))
        except SingularMatrix as exc:
            skipped += 1
            report.notes.append(f"sample {s}: skipped, exchange operator singular ({exc})")
    comm = commutator_norm(mf.h, signed_permutation(mf.model(2), 1, 2))
    report.check("max_ybe_residual", max(ybe, default=None), tol)
    report.check("max_inverse_residual", max(inv, default=None), tol)
    report.check("max_far_commutation_residual", max(far, default=None), tol)
    report.check("commutator_norm", comm, tol)
    report.details = {"samples": args.samples, "evaluated": len(ybe), "skipped": skipped}
    report.summary = f"{len(ybe)} of {args.samples} momentum samples evaluated"
    return EXIT_PASS if report.passed else EXIT_FAIL


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ParseError(f"{what}: expected comma-separated numbers, got {text!r}") from None


def cmd_bethe(args, mf, report: Report) -> int:
    k = _parse_floats(args.momenta, "--momenta")
    if len(k) < 2:
        raise ParseError("--momenta: need at least two momenta")
    momenta = scattering.MomentumSet(tuple(k))
    model = mf.model(len(k), args.stats)
    tol = args.tol
    report.details = {"N": model.N, "statistics": model.statistics.value, "momenta": list(momenta.k)}
    report.check("energy", momenta.energy, passed=True)
    try:
        amps = bethe.propagate_amplitudes(model, momenta, tol=tol)
    except PathInconsistency as exc:
        report.check("path_independence", exc.defect, tol)
        report.notes.append(f"non-integrable coupling: {exc}")
        report.summary = f"E = {momenta.energy:.12g}; amplitudes depend on the factorization path"
        return EXIT_FAIL
    if model.N <= 4:
        defect = bethe.path_independence_defect(model, momenta)
    else:
        defect = amps.path_defect
    report.check("path_independence", defect, tol)
    rng = np.random.default_rng(args.seed)
    for i, j in combinations(range(1, model.N + 1), 2):
        report.check(f"boundary_residual_{i}{j}", bethe.boundary_residual(amps, (i, j), rng=rng), tol)
    points = rng.uniform(-3, 3, size=(10, model.N))
    report.check("energy_residual", bethe.energy_residual(amps, points), tol)
    report.summary = f"E = {momenta.energy:.12g}"
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_bound(args, mf, report: Report) -> int:
    N_max = args.N or mf.N or 2
    if N_max < 2:
        raise ParseError("--N: need N >= 2")
    model = mf.model(N_max)
    modes = spectra.bound_state_modes(model)
    rng = np.random.default_rng(args.seed)
    listing = []
    for idx, mode in enumerate(modes):
        entry = {
            "lambda": _pair(mode.lam),
            "kappa": _pair(mode.kappa),
            "quasi_bound": mode.quasi_bound,
            "energies": {str(N): _pair(mode.energy(N)) for N in range(2, N_max + 1)},
        }
        listing.append(entry)
        for N in range(2, N_max + 1):
            try:
                res = spectra.bound_state_residual(model.with_N(N), mode, rng=rng)
            except NoSimultaneousEigenvector:
                report.notes.append(f"mode {idx}: no simultaneous spin eigenvector for N={N}")
                continue
            report.check(f"mode{idx}_N{N}_residual", res, args.tol)
    report.details = {"modes": listing}
    if not modes:
        report.summary = "no bound states"
    else:
        parts = []
        for mode in modes:
            es = ", ".join(_fmt_energy(mode.energy(N)) for N in range(2, N_max + 1))
            parts.append(f"Lambda={_fmt_energy(mode.lam)}: E(N=2..{N_max}) = {es}")
        report.summary = "\n".join(parts)

    if args.grid:
        try:
            L, M, sigma = _parse_floats(args.grid, "--grid")
        except ValueError:
            raise ParseError("--grid: expected L,M,sigma") from None
        grid = oracle.GridSpec(L, int(M), sigma)
        if not oracle.is_hermitian(mf.h):
            report.notes.append("grid oracle skipped: h is not Hermitian")
        else:
            cmp = oracle.compare_bound_states(model.with_N(2), grid, args.grid_tol)
            for idx, m in enumerate(cmp.matches):
                if m.resolved:
                    report.check(f"oracle_mode{idx}_rel_error", m.rel_error, args.grid_tol)
            if not cmp.matches:
                report.check("oracle_grid_minimum", cmp.grid_minimum, passed=cmp.passed)
            if cmp.note:
                report.notes.append(cmp.note)
            report.details["oracle"] = {
                "grid": [L, int(M), sigma],
                "matches": [[m.analytic, m.grid] for m in cmp.matches],
                "grid_minimum": cmp.grid_minimum,
            }
    return EXIT_PASS if report.passed else EXIT_FAIL


def _fmt_energy(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}j"


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spindelta",
        description="Verify integrability and bound states of spin-coupled delta interactions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("model", help="JSON model file")
        p.add_argument("--json", action="store_true", help="emit the machine-readable report")
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
        p.add_argument("--timing", action="store_true", help="record wall-clock time in the report")

    p = sub.add_parser("classify", help="symmetry class and spectrum of the coupling")
    common(p)

    p = sub.add_parser("ybe", help="Yang-Baxter and exchange-operator relations")
    common(p)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("bethe", help="Bethe wave function consistency checks")
    common(p)
    p.add_argument("--momenta", required=True, help="comma-separated k1,...,kN")
    p.add_argument("--stats", choices=["bose", "fermi"], default=None)
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("bound", help="bound states and their energies")
    common(p)
    p.add_argument("--N", type=int, default=None, help="largest particle number")
    p.add_argument("--grid", default=None, help="L,M,sigma for the finite-difference oracle")
    p.add_argument("--grid-tol", type=float, default=0.01)
    p.add_argument("--tol", type=float, default=1e-9)
    return parser


COMMANDS = {"classify": cmd_classify, "ybe": cmd_ybe, "bethe": cmd_bethe, "bound": cmd_bound}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        mf, raw = load_model(args.model)
        report = Report(args.command, _digest(raw, argv))
        code = COMMANDS[args.command](args, mf, report)
    except (ParseError, DegenerateMomenta, GridTooCoarse) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.timing:
        report.seconds = time.perf_counter() - start
    print(report.to_json() if args.json else report.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
