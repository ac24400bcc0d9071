"""Batch runs over instance files and per-configuration averages."""

from __future__ import annotations

import csv
import io
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .anf import parse_anf, to_cnf_xor
from .mvc import build_graph, min_vertex_cover
from .solver import SolveResult, SolverConfig, collect_stats, parse_stats, solve

CONFIG_NAMES = ("off", "off+mvc", "xg", "xg+mvc", "xg-ext", "xg-ext+mvc")
TABLE_FIELDS = ("config", "status", "runs", "mean_time_s", "mean_conflicts", "mean_nodes",
                "stdev_conflicts")


def parse_config(name: str) -> Tuple[str, bool]:
    """'xg-ext+mvc' -> ('xg_ext', True)."""
    base, _, suffix = name.partition("+")
    if suffix not in ("", "mvc"):
        raise ValueError(f"bad configuration {name!r}")
    mode = {"off": "off", "xg": "xg", "xg-ext": "xg_ext", "xg_ext": "xg_ext"}.get(base)
    if mode is None:
        raise ValueError(f"bad configuration {name!r}")
    return mode, suffix == "mvc"


@dataclass
class BenchRun:
    instance: str
    config: str
    result: SolveResult

    def roundtrips(self) -> bool:
        return parse_stats(collect_stats(self.result)) == self.result


def _run_one(job: Tuple[str, Sequence[str]]) -> List[BenchRun]:
    path, configs = job
    system = parse_anf(Path(path).read_text())
    formula = to_cnf_xor(system)
    cover = None
    runs = []
    for name in configs:
        mode, use_mvc = parse_config(name)
        order = None
        if use_mvc:
            if cover is None:
                cover = min_vertex_cover(build_graph(system))
            order = cover.order
        cfg = SolverConfig(xg_mode=mode, branching_order=order, order_label="mvc" if use_mvc else "default")
        runs.append(BenchRun(path, name, solve(formula, system, cfg)))
    return runs


def run_bench(paths: Iterable[str], configs: Sequence[str], jobs: int = 1) -> List[BenchRun]:
    for name in configs:
        parse_config(name)
    work = [(str(p), tuple(configs)) for p in sorted(paths)]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_one, work))
    else:
        chunks = [_run_one(w) for w in work]
    return [r for chunk in chunks for r in chunk]


@dataclass
class TableRow:
    config: str
    status: str
    runs: int
    mean_time_s: float
    mean_conflicts: float
    mean_nodes: float
    stdev_conflicts: float


def aggregate(runs: Sequence[BenchRun], configs: Optional[Sequence[str]] = None) -> List[TableRow]:
    """Means per (configuration, status), configurations in the given order, SAT rows before UNSAT."""
    groups: Dict[Tuple[str, str], List[SolveResult]] = {}
    for r in runs:
        groups.setdefault((r.config, r.result.status), []).append(r.result)
    order = list(configs) if configs else list(dict.fromkeys(r.config for r in runs))
    rows = []
    for status in ("SAT", "UNSAT"):
        for name in order:
            res = groups.get((name, status))
            if not res:
                continue
            conf = [x.conflicts for x in res]
            rows.append(TableRow(
                name, status, len(res),
                statistics.fmean(x.time_s for x in res),
                statistics.fmean(conf),
                statistics.fmean(x.nodes for x in res),
                statistics.pstdev(conf),
            ))
    return rows


def format_table(rows: Sequence[TableRow], delimiter: str = ",") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow(TABLE_FIELDS)
    for r in rows:
        w.writerow([r.config, r.status, r.runs, f"{r.mean_time_s:.6f}", f"{r.mean_conflicts:.2f}",
                    f"{r.mean_nodes:.2f}", f"{r.stdev_conflicts:.2f}"])
    return buf.getvalue()
