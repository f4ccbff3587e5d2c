"""Command-line front end; every subcommand prints one JSON document.

Exit status: 0 on success, 1 on a domain or input error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from decimal import Decimal, getcontext
from fractions import Fraction
from pathlib import Path

from . import asym, binary, bounds_sim, dmd, mary
from .core import (
    BinaryAsymmetric, BinarySymmetric, Distribution, MomentFunction, MPartition, Partition,
    guesswork_moment, parse_distribution, unconstrained_minimum,
)
from .errors import GuessworkError, InputError


@dataclass
class CommandResult:
    status: str
    payload: dict
    exit_code: int


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def decimal_str(x: Fraction, digits: int = 30) -> str:
    getcontext().prec = digits
    d = Decimal(x.numerator) / Decimal(x.denominator)
    text = format(d.normalize(), "f")
    return text


def put(out: dict, name: str, x: Fraction) -> None:
    out[name] = rational(x)
    out[f"{name}_decimal"] = decimal_str(x)


def labels(dist: Distribution, members) -> list[int]:
    return sorted(dist.user_label(k) for k in members)


def class_blocks(dist: Distribution, part: MPartition) -> list[list[int]]:
    return [labels(dist, b) for b in part.blocks()]


# ---------------------------------------------------------------------------
# input
# ---------------------------------------------------------------------------

def read_text(path: str | None) -> str:
    if not path:
        raise UsageError("--input is required")
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def load_instance(args):
    dist, noise, f = parse_distribution(read_text(args.input))
    if getattr(args, "f", None):
        doc = json.loads(read_text(args.f))
        values = doc["f"] if isinstance(doc, dict) else doc
        f = MomentFunction.from_values(values)
        if len(f) != dist.n:
            raise InputError(f"moment table has {len(f)} entries, expected {dist.n}")
    return dist, noise, f


def _internal(dist: Distribution, label: int) -> int:
    try:
        return dist.user_order.index(label - 1)
    except ValueError:
        raise InputError(f"symbol label {label} out of range") from None


def parse_partition_flag(dist: Distribution, noise, args):
    """``--partition 1,3`` (labels in A) or ``--classes 0,1,2,0`` (class per label); default zigzag."""
    if args.classes:
        per_label = [int(x) for x in args.classes.split(",")]
        if len(per_label) != dist.n:
            raise InputError("--classes needs one entry per symbol")
        return MPartition(tuple(per_label[dist.user_order[k]] for k in range(dist.n)), noise.m)
    if args.partition is not None:
        if noise.m != 2:
            raise InputError("--partition is for binary questions; use --classes")
        chosen = [int(x) for x in args.partition.split(",") if x.strip()]
        return Partition.from_set(dist.n, [_internal(dist, c) for c in chosen])
    if noise.m == 2:
        return binary.zigzag_partition(dist.n)
    return mary.mary_zigzag(dist.n, noise.m)


def _need_symmetric(noise):
    if isinstance(noise, BinaryAsymmetric):
        raise InputError("this command needs 'bsc' or 'mary' noise")


def _need_bsc(noise):
    if not isinstance(noise, BinarySymmetric):
        raise InputError("this command needs 'bsc' noise")


def _describe(part, dist):
    if isinstance(part, Partition):
        return {"A": labels(dist, part.subset)}
    return {"classes": class_blocks(dist, part)}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_optimal(args):
    dist, noise, f = load_instance(args)
    _need_bsc(noise)
    res = binary.enumerate_optimal_partitions(dist, noise, list_limit=args.list_limit)
    zz = binary.zigzag_partition(dist.n)
    g_zz = guesswork_moment(dist, noise, zz, f)
    out = {
        "count": res.count,
        "canonical_count": res.canonical_count,
        "components": res.components,
        "certified": res.certified,
        "truncated": res.truncated,
        "partitions": [labels(dist, p.subset) for p in res.partitions],
        "zigzag": labels(dist, zz.subset),
    }
    put(out, "G", res.value(f))
    put(out, "zigzag_G", g_zz)
    out["zigzag_optimal"] = g_zz == res.value(f)
    out["levels"] = [rational(x) for x in res.optimum_levels]
    return out


def cmd_zigzag(args):
    dist, noise, f = load_instance(args)
    _need_symmetric(noise)
    part = binary.zigzag_partition(dist.n) if noise.m == 2 else mary.mary_zigzag(dist.n, noise.m)
    out = _describe(part, dist)
    put(out, "G", guesswork_moment(dist, noise, part, f))
    put(out, "unconstrained", unconstrained_minimum(dist, noise, f))
    return out


def cmd_brute(args):
    dist, noise, f = load_instance(args)
    _need_bsc(noise)
    best, parts = binary.brute_force_optimal(dist, noise, f, workers=args.threads)
    out = {"argmin": [labels(dist, p.subset) for p in parts[:args.list_limit]],
           "canonical_count": len(parts)}
    put(out, "min", best)
    return out


def cmd_mary_optimal(args):
    dist, noise, f = load_instance(args)
    _need_symmetric(noise)
    best, parts = mary.mary_brute_force_optimal(dist, noise, f, workers=args.threads)
    zz = mary.mary_zigzag(dist.n, noise.m)
    g_zz = guesswork_moment(dist, noise, zz, f)
    unc = unconstrained_minimum(dist, noise, f)
    out = {"argmin": [class_blocks(dist, p) for p in parts[:args.list_limit]],
           "argmin_count": len(parts), "zigzag": class_blocks(dist, zz),
           "zigzag_optimal": g_zz == best, "attains_unconstrained": best == unc}
    put(out, "min", best)
    put(out, "zigzag_G", g_zz)
    put(out, "unconstrained", unc)
    return out


def cmd_achievable(args):
    dist, noise, f = load_instance(args)
    _need_symmetric(noise)
    part = mary.unconstrained_achievable(dist, noise, allow_ties=args.allow_ties)
    out = {"achievable": part is not None}
    put(out, "unconstrained", unconstrained_minimum(dist, noise, f))
    if part is not None:
        out["classes"] = class_blocks(dist, part)
        put(out, "G", guesswork_moment(dist, noise, part, f))
    return out


def cmd_dmd_solve(args):
    system = dmd.parse_dmd(read_text(args.input))
    z = dmd.solve_dmd(system)
    return {"sat": z is not None, "assignment": z}


def _write(path, text):
    if path:
        Path(path).write_text(text)


def cmd_nae2dmd(args):
    inst = dmd.parse_naecnf(read_text(args.input))
    system, vmap = dmd.nae3sat_to_dmd(inst)
    text = dmd.format_dmd(system)
    _write(args.output, text)
    return {"num_vars": system.num_vars, "num_disequations": len(system.disequations),
            "s": vmap.s + 1, "w": [v + 1 for v in vmap.w], "w_hat": [v + 1 for v in vmap.w_hat],
            "clause_vars": [v + 1 for v in vmap.clause_vars], "system": text}


def cmd_dmd2sigma(args):
    system = dmd.parse_dmd(read_text(args.input))
    sigma, rowmap = dmd.dmd_to_sigma(system)
    text = dmd.format_sigma(sigma)
    _write(args.output, text)
    return {"rows": rowmap.num_rows, "blocks": len(sigma.blocks),
            "variable_rows": list(range(1, system.num_vars + 1)),
            "helper_rows": [r + 1 for r in rowmap.helper_rows],
            "gadget_rows": [[r + 1 for r in g] for g in rowmap.gadget_rows],
            "sigma": text}


def cmd_dmd2graph(args):
    system = dmd.parse_dmd(read_text(args.input))
    g = dmd.dmd_to_graph(system)
    text = dmd.format_dimacs_graph(g)
    _write(args.output, text)
    out = {"vertices": g.num_vertices, "edges": len(g.edges), "num_vars": g.num_vars,
           "dimacs": text}
    if args.alpha:
        out["alpha"] = dmd.max_independent_set_bruteforce(g)
    return out


def cmd_asym(args):
    dist, noise, _ = load_instance(args)
    if not isinstance(noise, BinaryAsymmetric):
        raise InputError("this command needs 'asym' noise")
    ok = asym.check_small_noise(dist, noise.eps, noise.delta)
    out = {"small_noise": ok}
    if ok:
        part, value = asym.asym_optimal_partition(dist, noise.eps, noise.delta)
        out["A"] = labels(dist, part.subset)
        put(out, "G", value)
    return out


def cmd_bounds(args):
    dist, noise, f = load_instance(args)
    _need_symmetric(noise)
    kappa = math.e if args.kappa == "e" else float(args.kappa)
    opt = unconstrained_minimum(dist, noise)
    if noise.m > 2:
        best, _ = mary.mary_brute_force_optimal(dist, noise, workers=args.threads)
        opt = best
    out = {"massey_lower_bound": bounds_sim.massey_lower_bound(dist, noise, kappa),
           "kappa": kappa, "kappa_universal": args.kappa == "4",
           "entropy_x": bounds_sim.entropy(dist.probs),
           "entropy_v": bounds_sim.entropy(noise.channel)}
    put(out, "optimum", opt)
    return out


def cmd_simulate(args):
    dist, noise, f = load_instance(args)
    _need_symmetric(noise)
    part = parse_partition_flag(dist, noise, args)
    rep = bounds_sim.simulate_game(dist, noise, part, f, trials=args.trials, seed=args.seed)
    out = rep.to_json()
    out["exact_decimal"] = decimal_str(rep.exact)
    out.update(_describe(part, dist))
    return out


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", help="input file ('-' for stdin)")
    common.add_argument("--pretty", action="store_true", help="indent the JSON output")
    common.add_argument("--threads", type=int, default=1, help="worker processes for brute force")

    inst = _Parser(add_help=False, parents=[common])
    inst.add_argument("--f", help="JSON moment table, one entry per guess")
    inst.add_argument("--list-limit", type=int, default=binary.DEFAULT_LIST_LIMIT)

    parser = _Parser(prog="guesswork", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, parents, help):
        p = sub.add_parser(name, parents=parents, help=help)
        p.set_defaults(func=fn)
        return p

    add("optimal", cmd_optimal, [inst], "count and list all optimal binary questions")
    add("zigzag", cmd_zigzag, [inst], "zigzag question and its value")
    add("brute", cmd_brute, [inst], "exhaustive binary optimum")
    add("mary-optimal", cmd_mary_optimal, [inst], "exhaustive M-ary optimum vs zigzag")
    p = add("achievable", cmd_achievable, [inst], "is the relaxation bound attainable?")
    p.add_argument("--allow-ties", action="store_true")
    add("asym", cmd_asym, [inst], "optimal question for the asymmetric binary channel")
    p = add("bounds", cmd_bounds, [inst], "entropy lower bound")
    p.add_argument("--kappa", default="4", help="4 (always safe) or 'e' (geometric-tight)")
    p = add("simulate", cmd_simulate, [inst], "Monte Carlo replay of the game")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--partition", help="comma-separated labels in A (binary)")
    p.add_argument("--classes", help="comma-separated class per label (M-ary)")

    p = add("dmd", None, [], "difference modular disequation tools")
    dsub = p.add_subparsers(dest="action", parser_class=_Parser)
    dsub.required = True
    dsub.add_parser("solve", parents=[common]).set_defaults(func=cmd_dmd_solve)

    p = add("reduce", None, [], "reductions between NAE-3SAT, DMD, bijections and graphs")
    rsub = p.add_subparsers(dest="action", parser_class=_Parser)
    rsub.required = True
    for name, fn in (("nae2dmd", cmd_nae2dmd), ("dmd2sigma", cmd_dmd2sigma),
                     ("dmd2graph", cmd_dmd2graph)):
        r = rsub.add_parser(name, parents=[common])
        r.add_argument("--output", help="also write the native text format here")
        r.set_defaults(func=fn)
        if name == "dmd2graph":
            r.add_argument("--alpha", action="store_true", help="compute the independence number")
    return parser


def dispatch(argv: list[str]) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.func is None:
            raise UsageError("missing action")
        if args.threads < 1:
            raise UsageError("--threads must be positive")
        payload = args.func(args)
    except SystemExit as exc:  # --help
        code = int(exc.code or 0)
        return CommandResult("ok" if code == 0 else "error", {}, code)
    except UsageError as exc:
        return CommandResult("error", {"status": "error", "error": str(exc), "usage": True}, 2)
    except (GuessworkError, json.JSONDecodeError, KeyError) as exc:
        return CommandResult("error", {"status": "error", "error": str(exc)}, 1)
    return CommandResult("ok", {"status": "ok", **payload}, 0)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    res = dispatch(argv)
    if res.payload:
        stream = sys.stdout if res.exit_code == 0 else sys.stderr
        print(json.dumps(res.payload, indent=2 if "--pretty" in argv else None), file=stream)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
