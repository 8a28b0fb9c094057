"""Command-line surface.

Subcommands: gen, solve, exact, formula, verify, cover. Every JSON output
embeds the tool version and the parsed config (seed included), so reruns
are byte-identical apart from elapsed-time fields.

Exit codes: 0 success/verified, 1 usage or parameter error, 2 infeasible
refusal, 3 verification mismatch, 4 internal assertion failure.

The --density flag carries the real-valued parameter of whichever command
is running: edge probability for gen/cover instances, alpha for the
matching and forest lower bounds, c for the asymptotic bound.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .cover import peel_cover, random_rpartite
from .errors import (
    CheckpointError,
    DomainError,
    InfeasibleError,
    InternalCheckError,
    ParseError,
    ValidationError,
)
from .formulas import (
    asymptotic_forest_rhs,
    beta0,
    conjecture_rhs,
    dense_forest_lb,
    emc_rhs,
    emc_reduction_check,
    matching_lb_general,
    matching_lb_r3,
    ning_wang_rhs,
)
from .hypergraph import (
    complete,
    empty,
    extremal_construction,
    parse_hg,
    perfect_matching,
    serialize_hg,
)
from .limits import load_limits
from .search import (
    CSV_COLUMNS,
    turan_exact,
    verify_conjecture,
    verify_emc_small,
    verify_ning_wang,
)
from .solvers import lforest, max_tight_path, nu

TOOL_NAME = "tightforest"

GEN_CONSTRUCTIONS = (
    "complete",
    "empty",
    "clique-join-empty",
    "clique-plus-isolated",
    "perfect-matching",
)

FORMULAS = (
    "emc-rhs",
    "conjecture-rhs",
    "ning-wang-rhs",
    "beta0",
    "matching-lb",
    "dense-forest-lb",
    "asymptotic-rhs",
    "reduction-check",
)


def _envelope(args, result, elapsed):
    config = {
        key: val
        for key, val in sorted(vars(args).items())
        if key not in ("func",) and not key.startswith("_")
    }
    return {
        "tool": {"name": TOOL_NAME, "version": __version__},
        "command": args.command,
        "config": config,
        "result": result,
        "elapsed_seconds": round(elapsed, 6),
    }


def _emit(args, text):
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, result, elapsed):
    _emit(args, json.dumps(_envelope(args, result, elapsed), sort_keys=True, indent=2))


def _overrides(args):
    out = {}
    for item in getattr(args, "limit_override", None) or ():
        if "=" not in item:
            raise ValidationError(f"--limit-override needs KEY=VALUE, got {item!r}")
        key, val = item.split("=", 1)
        out[key] = val
    return out


def _limits(args):
    return load_limits(_overrides(args))


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise ValidationError(f"this command requires --{name.replace('_', '-')}")
    return [getattr(args, name) for name in names]


# --- commands --------------------------------------------------------------


def cmd_gen(args):
    name = args.construction
    if name in ("complete", "empty", "perfect-matching"):
        (n, r) = _need(args, "n", "r")
        if name == "complete":
            h = complete(n, r)
        elif name == "empty":
            h = empty(n, r)
        else:
            h = perfect_matching(n, r)
        note = f"gen {name} n={n} r={r}"
    else:
        (n, r, k) = _need(args, "n", "r", "k")
        a, b = extremal_construction(n, r, k)
        h = a if name == "clique-plus-isolated" else b
        note = f"gen {name} n={n} r={r} k={k}"
    if not args.output:
        raise ValidationError("gen requires --output PATH for the .hg file")
    with open(args.output, "w", encoding="utf-8") as f:
        f.write(serialize_hg(h, comments=(note,)))
    summary = {"path": args.output, "n": h.n, "r": h.r, "edges": h.num_edges}
    if args.format == "text":
        sys.stdout.write(f"wrote {args.output}: n={h.n} r={h.r} edges={h.num_edges}\n")
    else:
        # the .hg file holds the graph; the envelope goes to stdout
        sys.stdout.write(
            json.dumps(_envelope(args, summary, 0.0), sort_keys=True, indent=2) + "\n"
        )
    return 0


def cmd_solve(args):
    lim = _limits(args)
    try:
        with open(args.input, encoding="utf-8") as f:
            h = parse_hg(f.read())
    except OSError as exc:
        raise ParseError(f"cannot read {args.input}: {exc}") from None
    t0 = time.perf_counter()
    if args.what == "nu":
        value, wit = nu(h, lim)
        witness = wit.to_json()
    elif args.what == "lforest":
        value, wit = lforest(h, lim)
        witness = wit.to_json()
    else:
        value, wit = max_tight_path(h, lim)
        witness = wit.to_json() if wit is not None else None
    elapsed = time.perf_counter() - t0
    result = {"what": args.what, "value": value, "witness": witness}
    if args.format == "text":
        _emit(args, f"{args.what}({args.input}) = {value}")
    else:
        _emit_json(args, result, elapsed)
    return 0


def _csv_row(rec, elapsed):
    vals = [
        rec.n,
        rec.r,
        rec.k,
        rec.target,
        rec.value,
        "",
        "",
        rec.status,
        rec.nodes_explored,
        f"{elapsed:.3f}",
    ]
    return ",".join(str(v) for v in vals)


def cmd_exact(args):
    lim = _limits(args)
    (n, r, k) = _need(args, "n", "r", "k")
    t0 = time.perf_counter()
    rec = turan_exact(
        n,
        r,
        k,
        args.target,
        workers=args.workers,
        checkpoint=args.checkpoint,
        limits=lim,
    )
    elapsed = time.perf_counter() - t0
    if args.format == "csv":
        row = _csv_row(rec, elapsed)
        header = ",".join(CSV_COLUMNS)
        if args.output:
            fresh = not os.path.exists(args.output) or os.path.getsize(args.output) == 0
            with open(args.output, "a", encoding="utf-8") as f:
                if fresh:
                    f.write(header + "\n")
                f.write(row + "\n")
        else:
            sys.stdout.write(header + "\n" + row + "\n")
    elif args.format == "text":
        _emit(
            args,
            f"exact n={n} r={r} k={k} target={args.target}: value={rec.value} "
            f"status={rec.status} nodes={rec.nodes_explored} "
            f"witnesses={len(rec.witnesses)}",
        )
    else:
        _emit_json(args, rec.to_json(), elapsed)
    return 0


def cmd_formula(args):
    which = args.which
    t0 = time.perf_counter()
    if which == "beta0":
        b = beta0()
        result = {"value": b.value, "residual": b.residual}
        text = f"beta0 = {b.value!r} residual = {b.residual!r}"
    elif which == "reduction-check":
        (n, r, k) = _need(args, "n", "r", "k")
        ok = emc_reduction_check(n, r, k)
        result = {"holds": ok}
        text = f"reduction-check n={n} r={r} k={k}: {ok}"
    else:
        if which == "emc-rhs":
            (n, r, k) = _need(args, "n", "r", "k")
            bv = emc_rhs(n, r, k)
        elif which == "conjecture-rhs":
            (n, r, k) = _need(args, "n", "r", "k")
            bv = conjecture_rhs(n, r, k)
        elif which == "ning-wang-rhs":
            (n, k) = _need(args, "n", "k")
            bv = ning_wang_rhs(n, k)
        elif which == "matching-lb":
            (n, r, alpha) = _need(args, "n", "r", "density")
            bv = matching_lb_r3(alpha, n) if r == 3 else matching_lb_general(alpha, n, r)
        elif which == "dense-forest-lb":
            (n, r, alpha) = _need(args, "n", "r", "density")
            bv = dense_forest_lb(alpha, n, r)
        else:
            (n, r, c) = _need(args, "n", "r", "density")
            bv = asymptotic_forest_rhs(n, r, c)
        result = bv.to_json()
        text = f"{which} = {bv.value!r} [{bv.condition}]"
    elapsed = time.perf_counter() - t0
    if args.format == "text":
        _emit(args, text)
    else:
        _emit_json(args, result, elapsed)
    return 0


def cmd_verify(args):
    lim = _limits(args)
    witness_dir = (
        os.path.dirname(os.path.abspath(args.output)) if args.output else os.getcwd()
    )
    t0 = time.perf_counter()
    if args.verify_target == "ning-wang":
        (n_max,) = _need(args, "n_max")
        report = verify_ning_wang(
            n_max, limits=lim, workers=args.workers, witness_dir=witness_dir
        )
    elif args.verify_target == "conjecture":
        (n_max, r, k) = _need(args, "n_max", "r", "k")
        report = verify_conjecture(
            n_max, r, [k], limits=lim, workers=args.workers, witness_dir=witness_dir
        )
    else:
        (n_max, r, k_max) = _need(args, "n_max", "r", "k_max")
        report = verify_emc_small(
            n_max, r, k_max, limits=lim, workers=args.workers, witness_dir=witness_dir
        )
    elapsed = time.perf_counter() - t0
    if args.format == "csv":
        _emit(args, report.to_csv())
    elif args.format == "text":
        checked = sum(1 for row in report.rows if row.match is not None)
        skipped = len(report.rows) - checked
        _emit(
            args,
            f"verify {args.verify_target}: {checked} checked, {skipped} skipped, "
            f"all_match={report.all_match}",
        )
    else:
        _emit_json(args, report.to_json(), elapsed)
    return 0 if report.all_match else 3


def cmd_cover(args):
    lim = _limits(args)
    (r, m, d, eps, seed) = _need(args, "r", "m", "density", "eps", "seed")
    t0 = time.perf_counter()
    h = random_rpartite(r, m, d, seed)
    report = peel_cover(h, eps, d, lim)
    elapsed = time.perf_counter() - t0
    if args.format == "text":
        _emit(
            args,
            f"cover r={r} m={m} d={d} eps={eps}: paths={len(report.paths)} "
            f"leftover={report.leftover} violated={report.violated}",
        )
    else:
        _emit_json(args, report.to_json(), elapsed)
    return 0


# --- parser ----------------------------------------------------------------


def _add_common(sub):
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument("--r", type=int, default=None)
    sub.add_argument("--k", type=int, default=None)
    sub.add_argument("--target", choices=("forest", "matching"), default="forest")
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--eps", type=float, default=None)
    sub.add_argument("--density", type=float, default=None)
    sub.add_argument("--m", type=int, default=None)
    sub.add_argument("--checkpoint", default=None)
    sub.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sub.add_argument("--output", default=None)
    sub.add_argument(
        "--limit-override",
        action="append",
        default=None,
        metavar="KEY=VAL",
        help="override a feasibility limit, e.g. turan_n_r3=8",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="exact computation and verification for tight-linear-forest extremal problems",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("gen", help="write a construction to a .hg file")
    p.add_argument("construction", choices=GEN_CONSTRUCTIONS)
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = subs.add_parser("solve", help="run a solver on a .hg file")
    p.add_argument("what", choices=("nu", "lforest", "tightpath"))
    p.add_argument("input")
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = subs.add_parser("exact", help="exact extremal edge count with witnesses")
    _add_common(p)
    p.set_defaults(func=cmd_exact)

    p = subs.add_parser("formula", help="evaluate a closed-form bound")
    p.add_argument("which", choices=FORMULAS)
    _add_common(p)
    p.set_defaults(func=cmd_formula)

    p = subs.add_parser("verify", help="sweep exact search against a formula")
    p.add_argument("verify_target", choices=("conjecture", "emc", "ning-wang"))
    p.add_argument("--n-max", dest="n_max", type=int, default=None)
    p.add_argument("--k-max", dest="k_max", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("cover", help="peel a random r-partite instance into tight paths")
    _add_common(p)
    p.set_defaults(func=cmd_cover)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return 0 if code in (0, None) else 1
    try:
        return args.func(args)
    except (ParseError, ValidationError, DomainError, CheckpointError) as exc:
        print(f"{TOOL_NAME}: error: {exc}", file=sys.stderr)
        return 1
    except InfeasibleError as exc:
        print(f"{TOOL_NAME}: infeasible: {exc}", file=sys.stderr)
        return 2
    except (InternalCheckError, AssertionError) as exc:
        print(f"{TOOL_NAME}: internal check failed: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
