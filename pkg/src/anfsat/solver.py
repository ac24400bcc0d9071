"""Plain DPLL search over the CNF, XORSET and XG modules."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from .anf import AnfSystem, CnfXorFormula, is_model
from .cnf import CnfState
from .xorgauss import XorGauss
from .xorset import XorSetState

XG_MODES = ("off", "xg", "xg_ext")


class EngineInconsistency(RuntimeError):
    """A propagated model failed re-verification against the ANF system."""


@dataclass
class SolverConfig:
    xg_mode: str = "xg_ext"
    branching_order: Optional[Sequence[int]] = None
    value_order: str = "true_first"
    xorset_enabled: bool = True
    find_all: bool = False
    order_label: str = "default"

    def validate(self, num_original: int) -> List[int]:
        if self.xg_mode not in XG_MODES:
            raise ValueError(f"xg_mode must be one of {XG_MODES}, got {self.xg_mode!r}")
        if self.value_order not in ("true_first", "false_first"):
            raise ValueError(f"bad value_order {self.value_order!r}")
        if self.xg_mode == "off" and not self.xorset_enabled:
            raise ValueError("at least one of XORSET and XG must reason on the XOR part")
        order = list(self.branching_order) if self.branching_order is not None else list(range(1, num_original + 1))
        if sorted(order) != list(range(1, num_original + 1)):
            raise ValueError("branching_order must be a permutation of the original variables")
        return order


@dataclass
class SolveResult:
    status: str
    model: Optional[Tuple[int, ...]] = None
    models: List[Tuple[int, ...]] = field(default_factory=list)
    conflicts: int = 0
    nodes: int = 0
    propagations: int = 0
    time_s: float = 0.0
    xg_mode: str = "xg_ext"
    order: str = "default"

    @property
    def sat(self) -> bool:
        return self.status == "SAT"

    def stats(self) -> Tuple[int, int, int]:
        return (self.conflicts, self.nodes, self.propagations)


class _Stop(Exception):
    pass


class Solver:
    """One search run.  Owns a private copy of every engine state.

    `hook`, when given, is called as ``hook(solver, index)`` each time the
    search reaches a node, `index` being the position in the branching order
    of the next variable to decide (``len(order)`` at a leaf).
    """

    def __init__(self, formula: CnfXorFormula, system: AnfSystem, config: Optional[SolverConfig] = None,
                 hook: Optional[Callable[["Solver", int], None]] = None):
        self.formula = formula
        self.system = system
        self.config = config or SolverConfig()
        self.k = system.num_vars
        self.order = self.config.validate(self.k)
        self.hook = hook
        n = formula.num_vars
        self.cnf = CnfState(n, formula.or_clauses)
        self.xorset = XorSetState(n, formula.xor_clauses) if self.config.xorset_enabled else None
        mode = self.config.xg_mode
        self.xg = None
        if mode != "off":
            self.xg = XorGauss(n, formula.xor_clauses, formula.monomial_defs, ext=(mode == "xg_ext"))
        self.engines = [e for e in (self.cnf, self.xorset, self.xg) if e is not None]
        self.conflicts = 0
        self.nodes = 0
        self.propagations = 0
        self.models: List[Tuple[int, ...]] = []

    # -- propagation loop --------------------------------------------------------

    def assign(self, lit) -> bool:
        """Assign one literal (or a list) and synchronise all modules to fixpoint."""
        lits = [lit] if isinstance(lit, int) else list(lit)
        to_set = lits
        to_set_in_xg: List[int] = []
        inputs = {abs(l) for l in lits}
        while to_set:
            while to_set:
                if not self.cnf.set(to_set):
                    return False
                to_set = self.cnf.last_assigned()
                self.propagations += sum(1 for l in to_set if abs(l) not in inputs)
                to_set_in_xg.extend(to_set)
                if self.xorset is None:
                    break
                if not self.xorset.set(to_set):
                    return False
                to_set = self.xorset.last_assigned()
                to_set_in_xg.extend(to_set)
            if self.xg is None:
                break
            if not self.xg.set(to_set_in_xg):
                return False
            to_set = self.xg.last_assigned()
            to_set_in_xg = []
        return True

    # -- search -------------------------------------------------------------

    @property
    def values(self) -> List[int]:
        """Current assignment of every variable: 1, -1 or 0 (unassigned)."""
        return self.cnf.value

    def _push(self):
        for e in self.engines:
            e.new_level()

    def _pop(self):
        for e in self.engines:
            e.backtrack(e.level - 1)

    def _initial_units(self) -> Optional[List[int]]:
        if self.cnf.is_empty_clause_present():
            return None
        if self.xorset is not None and self.xorset.is_trivially_unsat():
            return None
        if self.xg is not None and self.xg.unsat:
            return None
        if any(not x.vars and x.rhs for x in self.formula.xor_clauses):
            return None
        units = self.cnf.unit_literals()
        if self.xorset is not None:
            units += self.xorset.unit_literals()
        if self.xg is not None:
            units += self.xg.pending_units()
        return units

    def _leaf(self):
        vals = self.cnf.value
        model = tuple(1 if vals[v] > 0 else 0 for v in range(1, self.k + 1))
        if any(vals[v] == 0 for v in range(1, self.k + 1)):
            raise EngineInconsistency("leaf reached with unassigned original variables")
        if not is_model(self.system, model):
            raise EngineInconsistency(f"propagated assignment {model} violates the ANF system")
        self.models.append(model)
        if not self.config.find_all:
            raise _Stop

    def _search(self, idx: int):
        vals = self.cnf.value
        order = self.order
        while idx < len(order) and vals[order[idx]]:
            idx += 1
        if self.hook is not None:
            self.hook(self, idx)
        if idx == len(order):
            self._leaf()
            return
        v = order[idx]
        first, second = (v, -v) if self.config.value_order == "true_first" else (-v, v)
        for lit in (first, second):
            self.nodes += 1
            self._push()
            if self.assign(lit):
                self._search(idx + 1)
            else:
                self.conflicts += 1
            self._pop()

    def solve(self) -> SolveResult:
        t0 = time.perf_counter()
        units = self._initial_units()
        ok = units is not None
        if ok:
            ok = self.assign(units) if units else True
            if not ok:
                self.conflicts += 1
        else:
            self.conflicts += 1
        if ok:
            try:
                self._search(0)
            except _Stop:
                pass
        status = "SAT" if self.models else "UNSAT"
        return SolveResult(
            status=status,
            model=self.models[0] if self.models else None,
            models=list(self.models),
            conflicts=self.conflicts,
            nodes=self.nodes,
            propagations=self.propagations,
            time_s=time.perf_counter() - t0,
            xg_mode=self.config.xg_mode,
            order=self.config.order_label,
        )


def solve(formula: CnfXorFormula, system: AnfSystem, config: Optional[SolverConfig] = None, hook=None) -> SolveResult:
    return Solver(formula, system, config, hook).solve()


def collect_stats(result: SolveResult, models: bool = True) -> str:
    """Render the key=value stats block (plus ``v <bits>`` model lines)."""
    lines = [
        f"status={result.status}",
        f"conflicts={result.conflicts}",
        f"nodes={result.nodes}",
        f"propagations={result.propagations}",
        f"time_s={result.time_s!r}",
        f"xg={result.xg_mode}",
        f"order={result.order}",
    ]
    if models:
        for m in result.models:
            lines.append("v " + "".join(map(str, m)))
    return "\n".join(lines) + "\n"


def parse_stats(text: str) -> SolveResult:
    fields = {}
    models = []
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("v "):
            models.append(tuple(int(ch) for ch in line[2:].strip()))
        elif "=" in line:
            key, val = line.split("=", 1)
            fields[key] = val
    return SolveResult(
        status=fields["status"],
        model=models[0] if models else None,
        models=models,
        conflicts=int(fields["conflicts"]),
        nodes=int(fields["nodes"]),
        propagations=int(fields["propagations"]),
        time_s=float(fields["time_s"]),
        xg_mode=fields["xg"],
        order=fields["order"],
    )
