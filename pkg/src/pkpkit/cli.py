"""Command-line front end: gen / solve / estimate / sweep / verify.

Machine output (instances, solutions, CSV) goes to stdout or --out;
progress and stage logs go to stderr. Exit codes: 0 success, 1 nothing
found, 2 escalated warning, 3 invalid parameters, 4 resource cap hit.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from . import backend
from .baseline import BaselineParams, solve_baseline
from .estimator import (
    CSV_HEADER,
    DEFAULT_D_MAX,
    InfeasibleParamsError,
    cost_baseline,
    cost_filtered,
    csv_rows,
    optimize,
    sweep,
)
from .filtered import FilteredParams, solve_filtered
from .instance import (
    Permutation,
    brute_force_solve,
    extend,
    generate_instance,
    read_instance,
    verify,
    write_instance,
)
from .mitm import DEFAULT_MEM_CAP, MemoryCapError
from .subcodes import SubcodeSearchError

EXIT_OK = 0
EXIT_NOTHING = 1
EXIT_WARNING = 2
EXIT_BAD_PARAMS = 3
EXIT_RESOURCE = 4


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; 2 means "escalated warning" here.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_PARAMS)


def _build_parser() -> _Parser:
    parser = _Parser(prog="pkpkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a planted instance")
    gen.add_argument("--q", type=int, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None)
    gen.add_argument("--strict", action="store_true", help="escalate warnings to exit 2")

    solve = sub.add_parser("solve", help="solve an instance file")
    solve.add_argument("instance")
    solve.add_argument("--solver", choices=["brute", "baseline", "filtered"], required=True)
    solve.add_argument("--params", default=None, help="comma-separated k=v pairs")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--exhaustive", action="store_true")
    solve.add_argument("--mem-cap", type=int, default=DEFAULT_MEM_CAP)
    solve.add_argument("--threads", type=int, default=1)
    solve.add_argument("--out", default=None)

    est = sub.add_parser("estimate", help="closed-form cost of one parameter set")
    est.add_argument("--q", type=int, required=True)
    est.add_argument("--n", type=int, required=True)
    est.add_argument("--m", type=int, required=True)
    est.add_argument("--solver", choices=["baseline", "filtered"], required=True)
    est.add_argument("--params", default=None)
    est.add_argument("--d-max", type=int, default=DEFAULT_D_MAX)
    est.add_argument("--out", default=None)

    sw = sub.add_parser("sweep", help="optimized costs over a range of m")
    sw.add_argument("--q", type=int, required=True)
    sw.add_argument("--n", type=int, required=True)
    sw.add_argument("--m-over-n", default=None, help="start:stop:step rate grid")
    sw.add_argument("--m-range", default=None, help="lo:hi[:step] integer grid")
    sw.add_argument("--solver", choices=["baseline", "filtered", "both"], default="both")
    sw.add_argument("--d-max", type=int, default=DEFAULT_D_MAX)
    sw.add_argument("--threads", type=int, default=1)
    sw.add_argument("--out", default=None)

    ver = sub.add_parser("verify", help="check a permutation against an instance")
    ver.add_argument("instance")
    ver.add_argument("--perm", default=None, help="1-based indices; default: embedded SOLUTION")
    return parser


def _parse_params(text: str | None) -> dict[str, int]:
    if not text:
        return {}
    out = {}
    for chunk in text.split(","):
        key, _, value = chunk.partition("=")
        if not value:
            raise ValueError(f"malformed parameter {chunk!r}; expected k=v")
        out[key.strip()] = int(value)
    return out


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rng = np.random.default_rng(np.random.SeedSequence(args.seed))
        inst = generate_instance(args.q, args.n, args.m, rng)
    for warning in caught:
        print(f"warning: {warning.message}", file=sys.stderr)
    _emit(write_instance(inst), args.out)
    if caught and args.strict:
        return EXIT_WARNING
    return EXIT_OK


def _auto_params(solver: str, n: int, m: int, q: int) -> dict[str, int]:
    point = optimize(n, m, q, solver)
    params = point.params
    logging.getLogger(__name__).info(
        "auto-params solver=%s %s log2_total=%.4f", solver, params, point.total_log2
    )
    if solver == "baseline":
        return {"l": params.l, "l1": params.l1, "l2": params.l2}
    return {"d": params.d, "w": params.w, "w1": params.w1, "w2": params.w2, "l": params.l}


def _cmd_solve(args) -> int:
    with open(args.instance, encoding="ascii") as fh:
        inst = read_instance(fh.read())
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    given = _parse_params(args.params)
    n, m, q = inst.n, inst.m, inst.q

    if args.solver == "brute":
        solutions = brute_force_solve(inst)
        perms = solutions if args.exhaustive else solutions[:1]
    else:
        system = extend(inst)
        if not given:
            given = _auto_params(args.solver, n, m, q)
        if args.solver == "baseline":
            if "l" not in given:
                given["l"] = given["l1"] + given["l2"] - (n - m - 1)
            params = BaselineParams(l=given["l"], l1=given["l1"], l2=given["l2"])
            outcome = solve_baseline(
                system, inst.c, params, rng=rng,
                exhaustive=args.exhaustive, mem_cap=args.mem_cap,
            )
        else:
            params = FilteredParams(
                d=given["d"], w=given["w"], w1=given["w1"], w2=given["w2"], l=given["l"]
            )
            outcome = solve_filtered(
                system, inst.c, params, rng=rng,
                exhaustive=args.exhaustive, mem_cap=args.mem_cap,
            )
        perms = outcome.permutations
    if not perms:
        print("no solution found", file=sys.stderr)
        return EXIT_NOTHING
    for perm in perms:
        if not verify(inst, perm):
            raise AssertionError("solver returned a non-solution")
    text = "\n".join(" ".join(str(i) for i in p.to_one_based()) for p in perms) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _cmd_estimate(args) -> int:
    given = _parse_params(args.params)
    n, m, q = args.n, args.m, args.q
    lines = [f"solver={args.solver}", f"n={n}", f"m={m}", f"q={q}"]
    if args.solver == "baseline":
        if not given:
            point = optimize(n, m, q, "baseline")
            given = {"l1": point.params.l1, "l2": point.params.l2}
        total = cost_baseline(n, m, q, given["l1"], given["l2"])
        l = given["l1"] + given["l2"] - (n - m - 1)
        lines += [f"l={l}", f"l1={given['l1']}", f"l2={given['l2']}", f"log2_total={total:.4f}"]
    else:
        if not given:
            point = optimize(n, m, q, "filtered", args.d_max)
            params = point.params
        else:
            params = FilteredParams(
                d=given["d"], w=given["w"], w1=given["w1"], w2=given["w2"], l=given["l"]
            )
        breakdown = cost_filtered(n, m, q, params)
        lines += [
            f"d={params.d}", f"w={params.w}", f"w1={params.w1}",
            f"w2={params.w2}", f"l={params.l}",
        ]
        lines += [f"{k}={v:.4f}" for k, v in breakdown.terms().items()]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _parse_m_values(args) -> list[int]:
    n = args.n
    if (args.m_over_n is None) == (args.m_range is None):
        raise ValueError("exactly one of --m-over-n and --m-range is required")
    values: list[int] = []
    if args.m_over_n:
        start, stop, step = (float(v) for v in args.m_over_n.split(":"))
        ratio = start
        while ratio <= stop + 1e-9:
            m = round(ratio * n)
            if 1 <= m < n and m not in values:
                values.append(m)
            ratio += step
    else:
        parts = [int(v) for v in args.m_range.split(":")]
        lo, hi = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        values = [m for m in range(lo, hi + 1, step) if 1 <= m < n]
    if not values:
        raise ValueError("empty m grid")
    return values


def _sweep_m(n, q, solvers, d_max, m):
    return sweep(n, q, [m], solvers, d_max)


def _cmd_sweep(args) -> int:
    m_values = _parse_m_values(args)
    solvers = ["baseline", "filtered"] if args.solver == "both" else [args.solver]
    if args.threads > 1:
        worker = partial(_sweep_m, args.n, args.q, solvers, args.d_max)
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            chunks = list(pool.map(worker, m_values))
        points = [p for chunk in chunks for p in chunk]
    else:
        points = sweep(args.n, args.q, m_values, solvers, args.d_max)
    _emit("\n".join([CSV_HEADER] + csv_rows(points)) + "\n", args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    with open(args.instance, encoding="ascii") as fh:
        inst = read_instance(fh.read())
    if args.perm:
        perm = Permutation.from_one_based([int(v) for v in args.perm.split()])
    elif inst.planted is not None:
        perm = inst.planted
    else:
        raise ValueError("no permutation given and no SOLUTION line in file")
    if verify(inst, perm):
        print("valid")
        return EXIT_OK
    print("invalid")
    return EXIT_NOTHING


_COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "estimate": _cmd_estimate,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, format="%(message)s", level=logging.INFO)
    logging.getLogger(__name__).info("backend=%s", backend.NAME)
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except MemoryCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except SubcodeSearchError as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_NOTHING
    except (InfeasibleParamsError, ValueError, KeyError, FileNotFoundError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_BAD_PARAMS


if __name__ == "__main__":
    sys.exit(main())
