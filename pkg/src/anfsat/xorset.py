"""Parity propagation on XOR clauses, one clause at a time."""

from __future__ import annotations

from collections import deque
from typing import Iterable, List

from .anf import XorClause


class XorSetState:
    """XOR-clause module state.

    Per clause: number of unassigned variables, parity of the assigned ones,
    and the XOR of the unassigned variable indices (the survivor of a unit
    clause is that value).
    """

    def __init__(self, num_vars: int, clauses: Iterable[XorClause]):
        self.num_vars = num_vars
        self.clauses = list(clauses)
        self.value = [0] * (num_vars + 1)
        self.occ: List[List[int]] = [[] for _ in range(num_vars + 1)]
        self.unassigned = [len(c.vars) for c in self.clauses]
        self.parity = [0] * len(self.clauses)
        self.open_xor = [0] * len(self.clauses)
        for i, c in enumerate(self.clauses):
            for v in c.vars:
                self.occ[v].append(i)
                self.open_xor[i] ^= v
        self.trail: List[int] = []
        self.level_marks: List[int] = []
        self._last: List[int] = []

    @property
    def level(self) -> int:
        return len(self.level_marks)

    def new_level(self) -> None:
        self.level_marks.append(len(self.trail))

    def is_trivially_unsat(self) -> bool:
        return any(not c.vars and c.rhs for c in self.clauses)

    def unit_literals(self) -> List[int]:
        return [c.vars[0] if c.rhs else -c.vars[0] for c in self.clauses if len(c.vars) == 1]

    def set_in_xorset(self, lits: Iterable[int]) -> bool:
        self._last = []
        queue = deque(lits)
        ok = True
        while queue and ok:
            lit = queue.popleft()
            v = abs(lit)
            cur = self.value[v]
            if cur:
                if (cur > 0) != (lit > 0):
                    return False
                continue
            bit = 1 if lit > 0 else 0
            self.value[v] = 1 if bit else -1
            self.trail.append(lit)
            self._last.append(lit)
            for i in self.occ[v]:
                self.unassigned[i] -= 1
                self.parity[i] ^= bit
                self.open_xor[i] ^= v
                n = self.unassigned[i]
                if n == 0:
                    if self.parity[i] != self.clauses[i].rhs:
                        ok = False
                elif n == 1:
                    u = self.open_xor[i]
                    queue.append(u if self.parity[i] != self.clauses[i].rhs else -u)
        return ok

    def last_assigned_in_xorset(self) -> List[int]:
        return list(self._last)

    def backtrack_xorset(self, level: int) -> None:
        if not 0 <= level < self.level:
            raise ValueError(f"cannot backtrack to level {level} from {self.level}")
        mark = self.level_marks[level]
        del self.level_marks[level:]
        while len(self.trail) > mark:
            lit = self.trail.pop()
            v = abs(lit)
            bit = 1 if lit > 0 else 0
            self.value[v] = 0
            for i in self.occ[v]:
                self.unassigned[i] += 1
                self.parity[i] ^= bit
                self.open_xor[i] ^= v

    set = set_in_xorset
    last_assigned = last_assigned_in_xorset
    backtrack = backtrack_xorset

    def state(self):
        return (tuple(self.value), tuple(self.unassigned), tuple(self.parity),
                tuple(self.open_xor), tuple(self.trail), tuple(self.level_marks))
