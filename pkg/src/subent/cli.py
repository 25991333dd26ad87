"""Command-line front end.

One subcommand per computation family: closed forms for the two-level
problem (case1) and the permutation-invariant family (symmetric),
fidelity sweeps (scan), bifurcation location (bifurcate), entanglement of
formation for isotropic and doubled states (eof-isotropic, double),
diagonal-class embeddings (embed), and the acceptance suite (verify).
Exit codes: 0 success, 1 computation error, 2 usage error.  All output is
deterministic for fixed flags including --seed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import acceptance
from .bipartite import doubling, embed, eof, f_double_star, isotropic, maximally_entangled
from .decomp import decomposition_to_json
from .errors import SubentError
from .optimizer import OptimizerConfig, find_bifurcation, minimize_objective, s_of_f, theta_scan
from .qstate import SubalgebraSpec, overlap, state_from_json, state_to_json, validate_density
from .symmetric import (
    F_STAR,
    case1_optimal,
    case1_symmetric_entanglement,
    case2_entanglement,
    perm_symmetric_state,
)

LN2 = math.log(2.0)
LN3 = math.log(3.0)


def _fmt(x: float) -> str:
    """Nine significant digits, trailing zeros kept."""
    return f"{x:#.9g}"


@dataclass
class ScanRow:
    F: float
    E_closed: float | None
    E_numeric: float
    theta_stars: list
    gap: float | None


@dataclass
class RunConfig:
    """Parsed command-line request."""

    command: str
    d: int = 3
    F: float = 0.0
    f_lo: float = 0.0
    f_hi: float = 1.0
    steps: int = 1
    a: float = 0.5
    b: complex = 0.0
    z1: complex = 0.0
    z2: complex = 0.0
    n: int = 2
    method: str = "closed"
    length: int = 0
    restarts: int = 32
    seed: int = 0
    tol: float = 1e-9
    out: str = ""
    fmt: str = "csv"
    restricted: bool = False
    state_path: str = ""
    eof_flag: bool = False
    tol_f: float = 1e-5
    criteria: list = field(default_factory=list)

    def optimizer_config(self) -> OptimizerConfig:
        return OptimizerConfig(
            length=self.length, restarts=self.restarts, seed=self.seed, tol=self.tol
        )


def symmetric_closed_form(d: int, F: float) -> float | None:
    """Proven-optimal closed form for the permutation-invariant family, or None.

    d = 2 is solved for every fidelity.  For d = 3: ln 2 at F = 0, the
    orbit closed form on [F*, 8/9], and the linear leaf on [8/9, 1].  For
    d >= 4 the single-orbit form holds on [1/d, 4(d-1)/d^2] and the
    linear leaf above; below 1/d (and inside (0, F*) for d = 3) only
    numerical values exist, so the closed field stays empty.
    """
    if d == 2:
        return case1_symmetric_entanglement(F)
    if d == 3:
        if F <= 1e-12:
            return LN2
        if F_STAR - 1e-9 <= F <= 8 / 9 + 1e-9:
            return case2_entanglement(F)
        if F > 8 / 9:
            p = 9 * F - 8
            return p * LN3 + (1 - p) * (LN3 - LN2 / 3)
        return None
    fds = f_double_star(d)
    from .symmetric import prop23_entanglement

    if 1 / d - 1e-12 <= F <= fds + 1e-12:
        return prop23_entanglement(d, F)
    if F > fds:
        p = (F - fds) / (1 - fds)
        return p * math.log(d) + (1 - p) * prop23_entanglement(d, fds)
    return None


def emit_scan(rows: list, fmt: str, sink) -> None:
    """Write scan rows as CSV (fixed header) or JSON to a file-like sink."""
    if not rows:
        raise SubentError("emit_scan needs at least one row")
    if fmt == "csv":
        sink.write("F,E_closed,E_numeric,theta_stars,gap\n")
        for row in rows:
            closed = _fmt(row.E_closed) if row.E_closed is not None else ""
            gap = _fmt(row.gap) if row.gap is not None else ""
            thetas = ";".join(f"{t:.9f}" for t in row.theta_stars)
            sink.write(f"{_fmt(row.F)},{closed},{_fmt(row.E_numeric)},{thetas},{gap}\n")
    elif fmt == "json":
        payload = [
            {
                "F": row.F,
                "E_closed": row.E_closed,
                "E_numeric": row.E_numeric,
                "theta_stars": list(row.theta_stars),
                "gap": row.gap,
            }
            for row in rows
        ]
        json.dump(payload, sink, indent=2)
        sink.write("\n")
    else:
        raise SubentError(f"unknown format {fmt!r}")


def _write_or_print(text: str, path: str) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_case1(cfg: RunConfig) -> int:
    closed = case1_optimal(cfg.a, cfg.b)
    lines = []
    numeric = None
    if cfg.method in ("closed", "both"):
        lines.append(f"E_closed = {_fmt(closed.entanglement)}")
    if cfg.method in ("numeric", "both"):
        rho = np.array([[cfg.a, cfg.b], [np.conj(cfg.b), 1 - cfg.a]])
        opt = cfg.optimizer_config()
        if not opt.length:
            opt = OptimizerConfig(length=4, restarts=opt.restarts, seed=opt.seed, tol=opt.tol)
        numeric = minimize_objective(validate_density(rho), SubalgebraSpec.diagonal(), opt)
        lines.append(f"E_numeric = {_fmt(numeric.value)}")
        if cfg.method == "both":
            lines.append(f"gap = {_fmt(numeric.value - closed.entanglement)}")
    print("\n".join(lines))
    if cfg.out:
        dec = numeric.decomposition if numeric is not None else closed.decomposition
        payload = {"E_closed": closed.entanglement, "decomposition": decomposition_to_json(dec)}
        if numeric is not None:
            payload["E_numeric"] = numeric.value
        with open(cfg.out, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return 0


def _cmd_symmetric(cfg: RunConfig) -> int:
    closed = symmetric_closed_form(cfg.d, cfg.F)
    lines = []
    numeric = None
    if cfg.method in ("closed", "both"):
        lines.append(f"E_closed = {_fmt(closed) if closed is not None else ''}")
    if cfg.method in ("numeric", "both"):
        rho = perm_symmetric_state(cfg.d, cfg.F)
        numeric = minimize_objective(rho, SubalgebraSpec.diagonal(), cfg.optimizer_config())
        lines.append(f"E_numeric = {_fmt(numeric.value)}")
        if cfg.method == "both" and closed is not None:
            lines.append(f"gap = {_fmt(numeric.value - closed)}")
    print("\n".join(lines))
    if cfg.out and numeric is not None:
        with open(cfg.out, "w") as fh:
            json.dump(
                {"E_numeric": numeric.value,
                 "decomposition": decomposition_to_json(numeric.decomposition)},
                fh, indent=2)
            fh.write("\n")
    return 0


def _cmd_scan(cfg: RunConfig) -> int:
    if cfg.d != 3:
        raise SubentError(f"scan covers the d = 3 family only, got d = {cfg.d}")
    fs = np.linspace(cfg.f_lo, cfg.f_hi, cfg.steps)
    rows = []
    for F in fs:
        F = float(F)
        profile = theta_scan(F)
        closed = symmetric_closed_form(3, F)
        gap = profile.min_value - closed if closed is not None else None
        rows.append(
            ScanRow(
                F=F,
                E_closed=closed,
                E_numeric=profile.min_value,
                theta_stars=list(profile.minimizers_mod_symmetry()),
                gap=gap,
            )
        )
    if cfg.out:
        with open(cfg.out, "w") as fh:
            emit_scan(rows, cfg.fmt, fh)
        print(f"wrote {len(rows)} rows to {cfg.out}")
    else:
        emit_scan(rows, cfg.fmt, sys.stdout)
    return 0


def _cmd_bifurcate(cfg: RunConfig) -> int:
    if cfg.d != 3:
        raise SubentError(f"bifurcate covers the d = 3 family only, got d = {cfg.d}")
    fstar = find_bifurcation(cfg.f_lo, cfg.f_hi, cfg.tol_f)
    print(f"F* = {_fmt(fstar)}")
    return 0


def _cmd_eof_isotropic(cfg: RunConfig) -> int:
    state = isotropic(cfg.d, cfg.F)
    opt = cfg.optimizer_config()
    if not opt.length:
        # default to the state rank: the d^2-squared worst case is far too
        # large a simplex for the bipartite problems
        from .decomp import eigen_ensemble

        rank = len(eigen_ensemble(state.state)[0])
        opt = OptimizerConfig(length=rank, restarts=opt.restarts, seed=opt.seed, tol=opt.tol)
    result = eof(state, opt)
    print(f"E_numeric = {_fmt(result.value)}")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump(
                {"E_numeric": result.value, "converged": result.converged,
                 "decomposition": decomposition_to_json(result.decomposition)},
                fh, indent=2)
            fh.write("\n")
    return 0


def _cmd_double(cfg: RunConfig) -> int:
    if cfg.state_path:
        with open(cfg.state_path) as fh:
            rho = state_from_json(json.load(fh))
    else:
        rho = perm_symmetric_state(cfg.d, cfg.F)
    doubled = doubling(rho)
    if cfg.eof_flag:
        opt = cfg.optimizer_config()
        result = eof(doubled, opt, restricted=cfg.restricted)
        print(f"E_numeric = {_fmt(result.value)}")
    text = json.dumps(state_to_json(doubled.state), indent=2) + "\n"
    if cfg.out:
        _write_or_print(text, cfg.out)
        print(f"wrote doubled state to {cfg.out}")
    elif not cfg.eof_flag:
        sys.stdout.write(text)
    return 0


def _cmd_embed(cfg: RunConfig) -> int:
    vec = embed(cfg.z1, cfg.z2, cfg.n)
    psi = maximally_entangled(cfg.n + 1)
    fidelity = overlap(vec.projector(), psi)
    print(f"fidelity = {_fmt(fidelity)}")
    print(f"F** = {_fmt(f_double_star(cfg.n + 1))}")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump(state_to_json(vec.projector()), fh, indent=2)
            fh.write("\n")
    return 0


def _cmd_verify(cfg: RunConfig) -> int:
    results = acceptance.run_criteria(cfg.criteria or None)
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"criterion {res.index}: {status}  {res.name}")
        for line in res.details:
            print(f"    {line}")
        if not res.passed:
            failed += 1
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return 0 if failed == 0 else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_optimizer_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--length", type=int, default=0, help="ensemble size (0 = default)")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=str, default="")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subent",
        description="entanglement with respect to a subalgebra, and entanglement of formation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("case1", help="closed form and optimizer for a 2x2 state")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b-re", type=float, default=0.0)
    p.add_argument("--b-im", type=float, default=0.0)
    p.add_argument("--method", choices=("closed", "numeric", "both"), default="closed")
    _add_optimizer_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("symmetric", help="permutation-invariant family at one fidelity")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--F", type=float, required=True)
    p.add_argument("--method", choices=("closed", "numeric", "both"), default="closed")
    _add_optimizer_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("scan", help="fidelity sweep of the d = 3 orbit scan")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--f-lo", type=float, default=0.0)
    p.add_argument("--f-hi", type=float, default=8 / 9)
    p.add_argument("--steps", type=int, default=90)
    _add_optimizer_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("bifurcate", help="locate the symmetry-breaking fidelity")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--f-lo", type=float, required=True)
    p.add_argument("--f-hi", type=float, required=True)
    p.add_argument("--tol-f", type=float, default=1e-5)

    p = sub.add_parser("eof-isotropic", help="entanglement of formation of an isotropic state")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--F", type=float, required=True)
    _add_optimizer_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("double", help="doubling map of a state (optionally its eof)")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--F", type=float, default=0.5)
    p.add_argument("--state", type=str, default="", help="path to a state JSON instead of --d/--F")
    p.add_argument("--eof", action="store_true")
    p.add_argument("--restricted", action="store_true", help="diagonal-class eof")
    _add_optimizer_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("embed", help="two-component embedding into the diagonal class")
    p.add_argument("--z1-re", type=float, required=True)
    p.add_argument("--z1-im", type=float, default=0.0)
    p.add_argument("--z2-re", type=float, required=True)
    p.add_argument("--z2-im", type=float, default=0.0)
    p.add_argument("--n", type=int, required=True)
    _add_output_flags(p)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--criteria", type=str, default="",
                   help="comma-separated criterion numbers (default: all)")

    return parser


def _to_runconfig(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    for name in ("d", "F", "steps", "method", "length", "restarts", "seed", "tol", "out", "fmt", "n"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if hasattr(ns, "f_lo"):
        cfg.f_lo, cfg.f_hi = ns.f_lo, ns.f_hi
    if hasattr(ns, "tol_f"):
        cfg.tol_f = ns.tol_f
    if hasattr(ns, "a"):
        cfg.a = ns.a
        cfg.b = complex(ns.b_re, ns.b_im)
    if hasattr(ns, "z1_re"):
        cfg.z1 = complex(ns.z1_re, ns.z1_im)
        cfg.z2 = complex(ns.z2_re, ns.z2_im)
    if hasattr(ns, "state"):
        cfg.state_path = ns.state
    if hasattr(ns, "eof"):
        cfg.eof_flag = ns.eof
    if hasattr(ns, "restricted"):
        cfg.restricted = ns.restricted
    if hasattr(ns, "criteria") and ns.criteria:
        cfg.criteria = [int(tok) for tok in ns.criteria.split(",") if tok.strip()]
    return cfg


_COMMANDS = {
    "case1": _cmd_case1,
    "symmetric": _cmd_symmetric,
    "scan": _cmd_scan,
    "bifurcate": _cmd_bifurcate,
    "eof-isotropic": _cmd_eof_isotropic,
    "double": _cmd_double,
    "embed": _cmd_embed,
    "verify": _cmd_verify,
}


def run(argv: list) -> int:
    """Execute one CLI invocation; returns the exit code."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = _to_runconfig(ns)
    try:
        return _COMMANDS[cfg.command](cfg)
    except SubentError as exc:
        print(f"error: {exc.name}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: IOError: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
