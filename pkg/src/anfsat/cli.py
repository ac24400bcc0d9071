"""anfsat command line: gen, convert, mvc, solve, bench."""

from __future__ import annotations

import argparse
import glob as globmod
import sys
from pathlib import Path
from typing import List, Optional

from .anf import AnfParseError, ConstantConflict, format_anf, is_model, parse_anf, to_cnf_xor
from .bench import CONFIG_NAMES, aggregate, format_table, run_bench
from .dimacs import MAX_XOR_WIDTH, export_dimacs
from .mvc import BudgetExceeded, build_graph, format_order_file, min_vertex_cover, parse_order_file, security_bound
from .solver import EngineInconsistency, SolverConfig, collect_stats, solve
from .weil import InstanceSpec, generate_instance

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_ERROR = 1


class CliError(Exception):
    pass


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_anf(path: str):
    try:
        return parse_anf(Path(path).read_text())
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from None


def cmd_gen(args) -> int:
    spec = InstanceSpec(args.n, args.m, args.l, args.seed, args.mode)
    try:
        inst = generate_instance(spec)
    except ValueError as e:
        raise CliError(str(e)) from None
    _write(format_anf(inst.system, inst.comments()), args.out)
    return 0


def cmd_convert(args) -> int:
    system = _read_anf(args.inp)
    formula = to_cnf_xor(system)
    try:
        text = export_dimacs(formula, mode=args.to, max_xor_width=args.max_width)
    except ValueError as e:
        raise CliError(str(e)) from None
    _write(text, args.out)
    return 0


def cmd_mvc(args) -> int:
    system = _read_anf(args.inp)
    try:
        result = min_vertex_cover(build_graph(system), node_budget=args.budget)
    except BudgetExceeded as e:
        raise CliError(str(e)) from None
    print(f"k_prime={result.k_prime} bound={security_bound(result)}")
    print("cover=" + ",".join(map(str, result.cover)))
    if args.order_out:
        Path(args.order_out).write_text(format_order_file(result))
    return 0


def _resolve_order(args, system) -> tuple:
    if args.order == "default":
        return None, "default"
    if args.order == "mvc":
        try:
            return list(min_vertex_cover(build_graph(system)).order), "mvc"
        except BudgetExceeded as e:
            raise CliError(str(e)) from None
    try:
        return parse_order_file(Path(args.order).read_text()), "file"
    except OSError as e:
        raise CliError(f"cannot read order file {args.order}: {e.strerror}") from None


def cmd_solve(args) -> int:
    system = _read_anf(args.inp)
    order, label = _resolve_order(args, system)
    cfg = SolverConfig(
        xg_mode=args.xg.replace("-", "_"),
        branching_order=order,
        value_order=args.value_order.replace("-", "_"),
        xorset_enabled=not args.no_xorset,
        find_all=args.all,
        order_label=label,
    )
    try:
        result = solve(to_cnf_xor(system), system, cfg)
    except ValueError as e:
        raise CliError(str(e)) from None
    if args.verify:
        for m in result.models:
            if not is_model(system, m):
                raise CliError("model " + "".join(map(str, m)) + " fails verification")
    sys.stdout.write(collect_stats(result))
    if args.verify and result.models:
        print(f"c verified {len(result.models)} model(s)")
    return EXIT_SAT if result.sat else EXIT_UNSAT


def cmd_bench(args) -> int:
    paths: List[str] = []
    for pattern in args.glob:
        paths.extend(globmod.glob(pattern))
    paths = sorted(set(paths))
    configs = args.configs.split(",") if args.configs else ["xg", "xg+mvc", "xg-ext", "xg-ext+mvc"]
    try:
        runs = run_bench(paths, configs, jobs=args.jobs)
    except ValueError as e:
        raise CliError(str(e)) from None
    rows = aggregate(runs, configs)
    delim = "\t" if args.format == "tsv" else ","
    table = format_table(rows, delim)
    sys.stdout.write(table)
    if args.out:
        Path(args.out).write_text(table)
    if args.plot:
        from .plotting import plot_table
        plot_table(rows, args.plot, title=args.title or "")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="anfsat", description="XOR-aware DPLL for Boolean polynomial systems")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a Weil-descent instance")
    g.add_argument("--n", type=int, required=True, help="field extension degree")
    g.add_argument("--m", type=int, required=True, help="number of unknown points (2 or 3)")
    g.add_argument("--l", type=int, required=True, help="bits per unknown point")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--mode", choices=("planted", "random"), default="planted")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("convert", help="ANF to DIMACS CNF or CNF-XOR")
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--to", choices=("cnf", "cnfxor"), default="cnfxor")
    c.add_argument("--max-width", type=int, default=MAX_XOR_WIDTH,
                   help="largest XOR clause expanded in cnf mode")
    c.add_argument("--out")
    c.set_defaults(func=cmd_convert)

    v = sub.add_parser("mvc", help="minimum vertex cover branching order")
    v.add_argument("--in", dest="inp", required=True)
    v.add_argument("--order-out")
    v.add_argument("--budget", type=int, default=10**8)
    v.set_defaults(func=cmd_mvc)

    s = sub.add_parser("solve", help="run the solver")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--xg", choices=("off", "xg", "xg-ext"), default="xg-ext")
    s.add_argument("--order", default="default", help="default, mvc, or an order file")
    s.add_argument("--value-order", choices=("true-first", "false-first"), default="true-first")
    s.add_argument("--no-xorset", action="store_true", help="disable the XOR-clause parity module")
    s.add_argument("--all", action="store_true", help="enumerate every model")
    s.add_argument("--verify", action="store_true", help="re-check models against the ANF system")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="average statistics over instance files")
    b.add_argument("--glob", action="append", default=[], help="instance file pattern (repeatable)")
    b.add_argument("--configs", help="comma list from " + ",".join(CONFIG_NAMES))
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--format", choices=("csv", "tsv"), default="csv")
    b.add_argument("--out", help="also write the table here")
    b.add_argument("--plot", help="write a PNG figure here")
    b.add_argument("--title")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, AnfParseError, ConstantConflict, EngineInconsistency) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
