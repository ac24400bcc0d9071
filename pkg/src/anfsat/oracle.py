"""Brute-force reference implementations used to check the engines.

Nothing here touches the propagation code: models come from exhaustive
evaluation and covers from subset enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .anf import AnfSystem, CnfXorFormula, ONE
from .mvc import InteractionGraph

MAX_ENUM_VARS = 24
MAX_MVC_VERTICES = 16
_CHUNK_BITS = 16


class OracleRefusal(ValueError):
    pass


def _assignment_block(k: int, start: int, count: int) -> np.ndarray:
    """Rows are assignments start..start+count-1; column i is variable i+1 (bit i of the index)."""
    idx = np.arange(start, start + count, dtype=np.int64)
    return ((idx[:, None] >> np.arange(k, dtype=np.int64)) & 1).astype(bool)


def _enumerate(k: int, rows_true: Callable[[np.ndarray], np.ndarray]) -> List[Tuple[int, ...]]:
    total = 1 << k
    step = min(total, 1 << _CHUNK_BITS)
    out: List[Tuple[int, ...]] = []
    for start in range(0, total, step):
        block = _assignment_block(k, start, step)
        ok = rows_true(block)
        for row in block[ok]:
            out.append(tuple(int(b) for b in row))
    return out


def brute_force_models(system: AnfSystem, max_vars: int = MAX_ENUM_VARS) -> Set[Tuple[int, ...]]:
    """All 0/1 assignments (tuples indexed by variable - 1) satisfying every equation."""
    k = system.num_vars
    if k > max_vars:
        raise OracleRefusal(f"{k} variables exceed the enumeration cap of {max_vars}")
    eqs = [list(eq.monomials) for eq in system.equations]

    def check(block):
        ok = np.ones(block.shape[0], dtype=bool)
        for mons in eqs:
            acc = np.zeros(block.shape[0], dtype=bool)
            for m in mons:
                if m == ONE:
                    acc ^= True
                else:
                    acc ^= np.logical_and.reduce(block[:, [v - 1 for v in m]], axis=1)
            ok &= ~acc
        return ok

    if k == 0:
        return {()} if all(not eq.monomials for eq in system.equations) else set()
    return set(_enumerate(k, check))


def models_of_formula(formula: CnfXorFormula, max_vars: int = MAX_ENUM_VARS) -> Set[Tuple[int, ...]]:
    """Models of a CNF-XOR formula over all of its variables."""
    k = formula.num_vars
    if k > max_vars:
        raise OracleRefusal(f"{k} variables exceed the enumeration cap of {max_vars}")
    ors = list(formula.or_clauses)
    xors = list(formula.xor_clauses)

    def check(block):
        ok = np.ones(block.shape[0], dtype=bool)
        for cl in ors:
            sat = np.zeros(block.shape[0], dtype=bool)
            for lit in cl:
                col = block[:, abs(lit) - 1]
                sat |= col if lit > 0 else ~col
            ok &= sat
        for x in xors:
            par = np.full(block.shape[0], bool(x.rhs))
            for v in x.vars:
                par ^= block[:, v - 1]
            ok &= ~par
        return ok

    if k == 0:
        return {()} if not any(not c for c in ors) and not any(x.rhs for x in xors) else set()
    return set(_enumerate(k, check))


def xor_row_solutions(num_vars: int, rows: Iterable[int], fixed: Optional[Dict[int, int]] = None,
                      max_vars: int = MAX_ENUM_VARS) -> Set[Tuple[int, ...]]:
    """Assignments of x_1..x_num_vars with XOR(vars(row)) ^ const(row) = 0 for every row.

    Rows use bit 0 for the constant and bit i for variable i.  `fixed` pins
    variables to 0/1.
    """
    if num_vars > max_vars:
        raise OracleRefusal(f"{num_vars} variables exceed the enumeration cap of {max_vars}")
    rows = list(rows)
    fixed = dict(fixed or {})

    def check(block):
        ok = np.ones(block.shape[0], dtype=bool)
        for r in rows:
            par = np.full(block.shape[0], bool(r & 1))
            for v in range(1, num_vars + 1):
                if r >> v & 1:
                    par ^= block[:, v - 1]
            ok &= ~par
        for v, b in fixed.items():
            ok &= block[:, v - 1] == bool(b)
        return ok

    return set(_enumerate(num_vars, check))


def brute_force_mvc(graph: InteractionGraph, max_vertices: int = MAX_MVC_VERTICES) -> int:
    """Size of a minimum vertex cover, by trying subsets in increasing size."""
    n = graph.num_vertices
    if n > max_vertices:
        raise OracleRefusal(f"{n} vertices exceed the subset-enumeration cap of {max_vertices}")
    edges = list(graph.edges)
    for size in range(n + 1):
        for subset in combinations(range(1, n + 1), size):
            s = set(subset)
            if all(a in s or b in s for a, b in edges):
                return size
    return n


# -- undo exactness ------------------------------------------------------------

Op = Tuple  # ("new_level",) | ("backtrack", level) | ("set", lits) | ("substitute", x1, x2)


def apply_op(engine, op: Op):
    kind = op[0]
    if kind == "new_level":
        return engine.new_level()
    if kind == "backtrack":
        return engine.backtrack(op[1])
    if kind == "set":
        return engine.set(list(op[1]))
    if kind == "substitute":
        return engine.substitute_equiv(op[1], op[2])
    raise ValueError(f"unknown operation {kind!r}")


def effective_ops(trace: Sequence[Op]) -> List[Op]:
    """The trace with every operation undone by a later backtrack removed."""
    kept: List[Op] = []
    level_starts: List[int] = []
    for op in trace:
        if op[0] == "new_level":
            level_starts.append(len(kept))
            kept.append(op)
        elif op[0] == "backtrack":
            lvl = op[1]
            cut = level_starts[lvl]
            del kept[cut:]
            del level_starts[lvl:]
        else:
            kept.append(op)
    return kept


def replay_check(factory: Callable[[], object], trace: Sequence[Op], engine=None) -> str:
    """Run `trace` (with its backtracks) and compare against a fresh replay of its effective part.

    `engine` may be passed to check an existing instance (used for negative
    controls); otherwise one is built by `factory`.
    """
    live = engine if engine is not None else factory()
    for op in trace:
        apply_op(live, op)
    fresh = factory()
    for op in effective_ops(trace):
        apply_op(fresh, op)
    return "equal" if live.state() == fresh.state() else "divergent"


@dataclass
class OracleReport:
    instance_id: str
    models: Set[Tuple[int, ...]]
    agreement: Dict[str, bool] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "SAT" if self.models else "UNSAT"

    @property
    def all_agree(self) -> bool:
        return all(self.agreement.values())


def compare_with_solver(instance_id: str, system: AnfSystem, results: Dict[str, object],
                        models: Optional[Set[Tuple[int, ...]]] = None) -> OracleReport:
    """Check each labelled SolveResult (run with find_all) against the enumerated model set."""
    truth = brute_force_models(system) if models is None else models
    report = OracleReport(instance_id, truth)
    for label, res in results.items():
        found = set(res.models)
        report.agreement[label] = (res.status == report.status and found == truth
                                   and len(found) == len(res.models))
    return report
