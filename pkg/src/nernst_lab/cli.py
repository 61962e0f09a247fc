"""Batch command-line front end: ``nernst-lab {audit,tabulate,limits,bh}``.

Exit codes: 0 for a pure computation or a COMPLIANT audit, 1 for
PLANCK_VIOLATION or CONTINUITY_FAILURE, 2 for usage and domain errors,
3 for an INCONCLUSIVE audit. Diagnostics go to standard error as a single
line; data goes to ``--out`` or standard output. Every float is written
with 17 significant digits.

CSV columns
-----------
tabulate : model, model parameters, work coordinates, T, S_total, S_per_site
    (plus ``stderr`` for the Monte Carlo oracle)
limits   : expression, stage, parameter, classification, value, slope, residual
audit    : Z..., S0 (residual row only; JSON carries the full report)
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from .errors import NernstLabError
from .io import csv_lines, dumps, fmt
from .kerr_newman import (BRANCHES, KerrNewmanModel, KNParams, kn_derived,
                          kn_invert_temperature, kn_residual_entropy)
from .limit_lab import Verdict, audit_model, default_t_sequence, iterated_limit_experiment
from .spin_models import (ClassicalHeisenbergChainModel, ClassicalHeisenbergLimitModel,
                          ParamagnetModel, QuantumHeisenbergModel, RotorModel,
                          classical_entropy_montecarlo, classical_entropy_quadrature)

PROG = "nernst-lab"
MODELS = ("paramagnet", "rotor", "heisenberg-classical", "heisenberg-quantum", "kerr-newman")
EXIT_OK, EXIT_AUDIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
_VERDICT_EXIT = {
    Verdict.COMPLIANT: EXIT_OK,
    Verdict.PLANCK_VIOLATION: EXIT_AUDIT_FAIL,
    Verdict.CONTINUITY_FAILURE: EXIT_AUDIT_FAIL,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# Grid syntax
# ---------------------------------------------------------------------------

def parse_grid(text: str) -> list[float]:
    """Comma list ``a,b,c`` or geometric range ``start:stop:count``."""
    text = text.strip()
    if not text:
        raise UsageError("empty grid")
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise UsageError(f"range must be start:stop:count, got {text!r}")
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1 or not (start > 0 and stop > 0):
                raise UsageError(f"geometric range needs positive ends and count >= 1: {text!r}")
            if count == 1:
                return [start]
            return [float(v) for v in np.geomspace(start, stop, count)]
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse grid {text!r}") from None


def parse_pairs(text: str) -> list[tuple[float, float]]:
    """``J:Q,J:Q,...`` pairs for the Kerr-Newman work coordinates."""
    out = []
    for item in text.split(","):
        parts = item.split(":")
        if len(parts) != 2:
            raise UsageError(f"expected J:Q pairs, got {item!r}")
        try:
            out.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise UsageError(f"cannot parse pair {item!r}") from None
    return out


# ---------------------------------------------------------------------------
# Argument grammar
# ---------------------------------------------------------------------------

def _add_model_flags(p):
    p.add_argument("--model", choices=MODELS)
    p.add_argument("--spec", metavar="PATH", help="JSON file with model parameters and grid")
    p.add_argument("--N", type=int)
    p.add_argument("--twoJ", type=int)
    p.add_argument("--bc", choices=("periodic", "open"))
    p.add_argument("--branch", choices=BRANCHES)
    p.add_argument("--B-grid", dest="B_grid")
    p.add_argument("--lambda-grid", dest="lambda_grid")
    p.add_argument("--JQ-grid", dest="JQ_grid", help="J:Q pairs, comma separated")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Third-law audits of model entropies.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    a = sub.add_parser("audit", help="classify T -> 0 limits and check Planck equivalence")
    _add_model_flags(a)
    a.add_argument("--t0", type=float)
    a.add_argument("--k", type=int, default=12)
    a.add_argument("--tol", type=float, default=1e-6)
    a.add_argument("--out")
    a.add_argument("--format", choices=("json", "csv"), default="json")

    t = sub.add_parser("tabulate", help="entropy on a temperature grid")
    _add_model_flags(t)
    t.add_argument("--t-grid", dest="t_grid", required=True)
    t.add_argument("--z-grid", dest="z_grid")
    t.add_argument("--oracle", choices=("closed", "quadrature", "montecarlo"),
                   default="closed", help="classical models with N <= 4 only")
    t.add_argument("--samples", type=int, default=200_000)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out")
    t.add_argument("--format", choices=("csv", "json"), default="csv")

    lim = sub.add_parser("limits", help="iterated N/J limits of the per-spin entropy")
    lim.add_argument("--family", choices=("paramagnet",), default="paramagnet")
    lim.add_argument("--order", choices=("NJ", "JN"), required=True)
    lim.add_argument("--J-max", dest="J_max", type=int, default=50)
    lim.add_argument("--b", type=float, default=1.0)
    lim.add_argument("--out")
    lim.add_argument("--format", choices=("csv", "json"), default="csv")

    bh = sub.add_parser("bh", help="Kerr-Newman queries")
    mode = bh.add_mutually_exclusive_group()
    mode.add_argument("--derive", action="store_true")
    mode.add_argument("--residual", action="store_true")
    mode.add_argument("--invert", action="store_true")
    bh.add_argument("--input", metavar="PATH", help="JSON {M,J,Q} or {T,J,Q,branch}")
    bh.add_argument("--M", type=float)
    bh.add_argument("--J", type=float)
    bh.add_argument("--Q", type=float)
    bh.add_argument("--T", type=float)
    bh.add_argument("--branch", choices=BRANCHES)
    bh.add_argument("--out")
    return parser


# ---------------------------------------------------------------------------
# Model construction
# ---------------------------------------------------------------------------

def _read_json(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(data, dict):
        raise UsageError(f"{path} must hold a JSON object")
    return data


def _model_options(args) -> dict:
    opts = {}
    if getattr(args, "spec", None):
        data = _read_json(args.spec)
        alias = {"lambda": "lambda_grid", "B": "B_grid", "JQ": "JQ_grid", "grid": "grid"}
        for key, value in data.items():
            opts[alias.get(key, key)] = value
    for key in ("model", "N", "twoJ", "bc", "branch", "B_grid", "lambda_grid", "JQ_grid"):
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    if "model" not in opts:
        raise UsageError("--model is required (or a model entry in --spec)")
    if opts["model"] not in MODELS:
        raise UsageError(f"unknown model {opts['model']!r}")
    return opts


def _as_grid(value):
    if value is None:
        return None
    if isinstance(value, str):
        return parse_grid(value)
    return [float(v) for v in np.atleast_1d(value)]


def _build(opts):
    """(model, z grid or None) from merged options."""
    name = opts["model"]
    N = opts.get("N")
    two_j = opts.get("twoJ", 1)
    grid = opts.get("grid")
    if name == "paramagnet":
        model = ParamagnetModel(N or 1, two_j)
        z = _as_grid(opts.get("B_grid", grid))
    elif name == "rotor":
        model = RotorModel(N or 1)
        z = _as_grid(opts.get("B_grid", grid))
    elif name == "heisenberg-classical":
        model = (ClassicalHeisenbergLimitModel() if N is None
                 else ClassicalHeisenbergChainModel(N, opts.get("bc", "periodic")))
        z = _as_grid(opts.get("lambda_grid", grid))
    elif name == "heisenberg-quantum":
        model = QuantumHeisenbergModel(N or 2, two_j, opts.get("bc"))
        z = _as_grid(opts.get("lambda_grid", grid))
    else:
        model = KerrNewmanModel(opts.get("branch", "near_extremal"))
        raw = opts.get("JQ_grid", grid)
        if raw is None:
            z = None
        elif isinstance(raw, str):
            z = parse_pairs(raw)
        else:
            z = [tuple(float(c) for c in pair) for pair in raw]
        return model, z
    return model, (None if z is None else [(v,) for v in z])


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_audit(args) -> int:
    opts = _model_options(args)
    model, zs = _build(opts)
    if not zs:
        raise UsageError("audit needs a work-coordinate grid (--B-grid, --lambda-grid or --JQ-grid)")
    ts = None if args.t0 is None else default_t_sequence(args.t0, args.k)
    if ts is None and args.k != 12:
        ts = default_t_sequence(min(model.t_scale(z) for z in zs), args.k)
    report = audit_model(model, zs, ts, args.tol)
    if args.format == "json":
        doc = report.to_dict()
        doc["parameters"] = model.describe()
        _emit(dumps(doc) + "\n", args.out)
    else:
        rows = [list(z) + [s if s is not None else "null"] for z, s in report.residual_table]
        _emit(csv_lines(model.z_names + ["S0"], rows), args.out)
    print(f"verdict: {report.verdict.value}", file=sys.stderr)
    return _VERDICT_EXIT[report.verdict]


_ORACLE_NAMES = {"rotor": "rotor", "heisenberg-classical": "heisenberg_classical"}


def _cmd_tabulate(args) -> int:
    opts = _model_options(args)
    if args.z_grid is not None:
        opts["JQ_grid" if opts["model"] == "kerr-newman" else "grid"] = args.z_grid
        opts.pop("B_grid", None)
        opts.pop("lambda_grid", None)
    model, zs = _build(opts)
    if not zs:
        raise UsageError("tabulate needs a work-coordinate grid (--z-grid)")
    ts = parse_grid(args.t_grid)
    params = {k: v for k, v in model.describe().items() if k != "model"}

    oracle = args.oracle
    if oracle != "closed":
        if opts["model"] not in _ORACLE_NAMES or opts.get("N") is None:
            raise UsageError("quadrature and montecarlo oracles need a classical model and --N")
    mc = oracle == "montecarlo"

    header = ["model"] + list(params) + model.z_names + ["T", "S_total", "S_per_site"]
    if mc:
        header.append("stderr")
    rows = []
    for z in zs:
        for t in ts:
            extra = []
            if oracle == "closed":
                s = model.entropy(z, t)
            else:
                model.validate(z, t)
                bc = getattr(model, "bc", None) or "periodic"
                if mc:
                    res = classical_entropy_montecarlo(_ORACLE_NAMES[opts["model"]], model.N,
                                                       1.0 / t, args.samples, args.seed,
                                                       coupling=z[0], bc=bc)
                    s, extra = res.value, [res.stderr]
                else:
                    s = classical_entropy_quadrature(_ORACLE_NAMES[opts["model"]], model.N,
                                                     1.0 / t, coupling=z[0], bc=bc).value
            rows.append([model.name] + list(params.values()) + [float(c) for c in z]
                        + [float(t), float(s), float(s) / model.size] + extra)

    if args.format == "csv":
        _emit(csv_lines(header, rows), args.out)
    else:
        _emit(dumps([dict(zip(header, r)) for r in rows]) + "\n", args.out)
    return EXIT_OK


def _two_j_grid(J_max):
    top = 2 * J_max
    grid = sorted({v for v in (1, 2, 4, 8, 16, 32, 64) if v < top} | {top})
    if len(grid) < 4:
        raise UsageError("--J-max must be at least 4")
    return grid


def _cmd_limits(args) -> int:
    if not 4 <= args.J_max <= 50:
        raise UsageError(f"--J-max must lie in [4, 50], got {args.J_max}")
    report = iterated_limit_experiment(args.order, args.b, two_j_grid=_two_j_grid(args.J_max),
                                       family=args.family)
    header = ["expression", "stage", "parameter", "classification", "value", "slope", "residual"]
    rows = []
    for name, stage, param, est in report.rows():
        rows.append([name, stage, param, est.classification.value,
                     est.value if est.value is not None else "",
                     est.slope if est.slope is not None else "",
                     est.residual if est.residual is not None else ""])
    if args.format == "csv":
        _emit(csv_lines(header, rows), args.out)
    else:
        doc = {"order": report.order, "b": report.b, "N_grid": report.N_grid,
               "twoJ_grid": report.two_j_grid, "rows": [dict(zip(header, r)) for r in rows],
               "classical_value": report.classical_value,
               "classical_gaps": [{"J": j, "gap": g} for j, g in report.classical_gaps],
               "sign_bounds_hold": report.sign_bounds_hold}
        _emit(dumps(doc) + "\n", args.out)
    return EXIT_OK


def _bh_value(args, data, key, default=None):
    value = getattr(args, key)
    if value is None:
        value = data.get(key, default)
    if value is None:
        raise UsageError(f"--{key} is required")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise UsageError(f"{key} must be a number, got {value!r}") from None


def _cmd_bh(args) -> int:
    data = _read_json(args.input) if args.input else {}
    mode = ("derive" if args.derive else "residual" if args.residual
            else "invert" if args.invert else None)
    if mode is None:
        mode = "invert" if "T" in data else "derive" if "M" in data else None
    if mode is None:
        raise UsageError("choose one of --derive, --residual, --invert")
    J = _bh_value(args, data, "J", 0.0)
    Q = _bh_value(args, data, "Q", 0.0)
    if mode == "residual":
        _emit(fmt(kn_residual_entropy(J, Q)) + "\n", args.out)
    elif mode == "derive":
        derived = kn_derived(KNParams(_bh_value(args, data, "M"), J, Q))
        _emit(dumps(derived.to_dict()) + "\n", args.out)
    else:
        branch = args.branch or data.get("branch", "near_extremal")
        inv = kn_invert_temperature(_bh_value(args, data, "T"), J, Q, branch)
        doc = {"T_target": _bh_value(args, data, "T"), "branch": inv.branch}
        doc.update(kn_derived(KNParams(inv.M, J, Q)).to_dict())
        _emit(dumps(doc) + "\n", args.out)
    return EXIT_OK


_COMMANDS = {"audit": _cmd_audit, "tabulate": _cmd_tabulate, "limits": _cmd_limits,
             "bh": _cmd_bh}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` and execute one subcommand; returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: audit, tabulate, limits or bh")
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NernstLabError, ValueError) as exc:
        print(f"{PROG}: error: {' '.join(str(exc).split())}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
