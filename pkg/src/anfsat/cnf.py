"""Counter-based unit propagation over OR-clauses."""

from __future__ import annotations

from collections import deque
from typing import Iterable, List, Sequence


def _code(lit: int) -> int:
    return 2 * abs(lit) + (lit < 0)


def _decode(code: int) -> int:
    v = code >> 1
    return -v if code & 1 else v


class CnfState:
    """OR-clause module state.

    Each clause keeps its number of unassigned literals, its number of true
    literals and the XOR of the codes of its unassigned literals, so the last
    open literal of a unit clause is read off in O(1).  Undo replays the
    per-level trail backwards.
    """

    def __init__(self, num_vars: int, clauses: Iterable[Sequence[int]]):
        self.num_vars = num_vars
        self.clauses: List[tuple] = []
        for c in clauses:
            lits = tuple(dict.fromkeys(c))
            if any(-l in lits for l in lits):
                continue  # tautology
            self.clauses.append(lits)
        self.value = [0] * (num_vars + 1)
        self.occ_pos: List[List[int]] = [[] for _ in range(num_vars + 1)]
        self.occ_neg: List[List[int]] = [[] for _ in range(num_vars + 1)]
        self.unassigned = [len(c) for c in self.clauses]
        self.true_count = [0] * len(self.clauses)
        self.open_xor = [0] * len(self.clauses)
        for i, c in enumerate(self.clauses):
            for l in c:
                (self.occ_pos if l > 0 else self.occ_neg)[abs(l)].append(i)
                self.open_xor[i] ^= _code(l)
        self.trail: List[int] = []
        self.level_marks: List[int] = []
        self._last: List[int] = []

    @property
    def level(self) -> int:
        return len(self.level_marks)

    def new_level(self) -> None:
        self.level_marks.append(len(self.trail))

    def is_empty_clause_present(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)

    def unit_literals(self) -> List[int]:
        return [c[0] for c in self.clauses if len(c) == 1]

    def _assign(self, lit: int) -> bool:
        """Set `lit` true and update counters; returns False on a falsified clause."""
        v = abs(lit)
        self.value[v] = 1 if lit > 0 else -1
        self.trail.append(lit)
        ok = True
        sat_occ, unsat_occ = (self.occ_pos[v], self.occ_neg[v]) if lit > 0 else (self.occ_neg[v], self.occ_pos[v])
        code_t, code_f = _code(lit), _code(-lit)
        for i in sat_occ:
            self.unassigned[i] -= 1
            self.true_count[i] += 1
            self.open_xor[i] ^= code_t
        for i in unsat_occ:
            self.unassigned[i] -= 1
            self.open_xor[i] ^= code_f
            if self.true_count[i] == 0:
                if self.unassigned[i] == 0:
                    ok = False
                elif self.unassigned[i] == 1:
                    self._queue.append(_decode(self.open_xor[i]))
        return ok

    def set_in_cnf(self, lits: Iterable[int]) -> bool:
        """Assign `lits` true and propagate to fixpoint (FIFO); False on conflict."""
        self._last = []
        self._queue = deque(lits)
        while self._queue:
            lit = self._queue.popleft()
            cur = self.value[abs(lit)]
            if cur:
                if (cur > 0) != (lit > 0):
                    return False
                continue
            self._last.append(lit)
            if not self._assign(lit):
                return False
        return True

    def last_assigned_in_cnf(self) -> List[int]:
        return list(self._last)

    def backtrack_cnf(self, level: int) -> None:
        if not 0 <= level < self.level:
            raise ValueError(f"cannot backtrack to level {level} from {self.level}")
        mark = self.level_marks[level]
        del self.level_marks[level:]
        while len(self.trail) > mark:
            lit = self.trail.pop()
            v = abs(lit)
            self.value[v] = 0
            sat_occ, unsat_occ = (self.occ_pos[v], self.occ_neg[v]) if lit > 0 else (self.occ_neg[v], self.occ_pos[v])
            code_t, code_f = _code(lit), _code(-lit)
            for i in sat_occ:
                self.unassigned[i] += 1
                self.true_count[i] -= 1
                self.open_xor[i] ^= code_t
            for i in unsat_occ:
                self.unassigned[i] += 1
                self.open_xor[i] ^= code_f

    # uniform names used by the solver
    set = set_in_cnf
    last_assigned = last_assigned_in_cnf
    backtrack = backtrack_cnf

    def state(self):
        """Comparable snapshot of everything undo must restore."""
        return (tuple(self.value), tuple(self.unassigned), tuple(self.true_count),
                tuple(self.open_xor), tuple(self.trail), tuple(self.level_marks))
