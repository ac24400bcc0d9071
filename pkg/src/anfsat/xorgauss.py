"""Dynamic Gaussian elimination over XOR constraints.

Every constraint is kept in equivalence-class form ``r <-> C_r`` where ``C_r``
is a bit vector: bit 0 holds the constant, bit i the presence of variable i.
A representative never occurs inside any stored clause (unicity), so the store
is always a reduced echelon form of the XOR system under the current partial
assignment.

With ``ext=True`` the store also watches the monomial definitions
x' <-> (x_1 & ... & x_d).  Once every constituent but one (x_r) is true the
equivalence x' <-> x_r holds, and x' is eliminated from the store through
:meth:`XorGauss.substitute_equiv`.  This recovers the term cancellations that
the CNF-XOR encoding hides from plain elimination.
"""

from __future__ import annotations

from collections import deque
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .anf import XorClause


def lowest_var(bits: int) -> int:
    """Index of the lowest variable bit (bit 0 is the constant and is ignored)."""
    v = bits & ~1
    return (v & -v).bit_length() - 1


def clause_bits(vars: Iterable[int], rhs: int = 0) -> int:
    bits = int(bool(rhs))
    for v in vars:
        bits ^= 1 << v
    return bits


def bits_vars(bits: int) -> List[int]:
    out = []
    v = bits >> 1
    i = 1
    while v:
        if v & 1:
            out.append(i)
        v >>= 1
        i += 1
    return out


def bits_from_string(text: str) -> int:
    """'11010100' (constant first, then x1, x2, ...) to a clause vector."""
    return sum(1 << i for i, ch in enumerate(text) if ch == "1")


def bits_to_string(bits: int, num_vars: int) -> str:
    return "".join("1" if bits >> i & 1 else "0" for i in range(num_vars + 1))


def to_words(bits: int, num_vars: int) -> List[int]:
    """Split a clause vector into ceil((k+1)/64) 64-bit words, low word first."""
    nwords = (num_vars + 1 + 63) // 64
    return [(bits >> (64 * i)) & 0xFFFFFFFFFFFFFFFF for i in range(nwords)]


class XorGauss:
    """The XG store: representatives, their clauses, and the monomial watches."""

    def __init__(
        self,
        num_vars: int,
        xor_clauses: Iterable[XorClause],
        monomial_defs: Optional[Mapping[int, Sequence[int]]] = None,
        ext: bool = False,
    ):
        self.num_vars = num_vars
        self.ext = ext
        self.rows: Dict[int, int] = {}
        self.value = [0] * (num_vars + 1)
        self.unsat = False
        for c in xor_clauses:
            if not self._add_row(clause_bits(c.vars, c.rhs)):
                self.unsat = True
        self.defs = {xp: tuple(cs) for xp, cs in (monomial_defs or {}).items()}
        self.watch_of: List[List[int]] = [[] for _ in range(num_vars + 1)]
        self.count: Dict[int, int] = {}
        if ext:
            for xp, cs in sorted(self.defs.items()):
                self.count[xp] = len(cs)
                for v in cs:
                    self.watch_of[v].append(xp)
        self.applied: set = set()
        self.snapshots: list = []
        self._last: List[int] = []
        self._queue: deque = deque()
        self._queued: set = set()

    # -- construction -------------------------------------------------------

    def _add_row(self, row: int) -> bool:
        """Insert the equation XOR(vars(row)) ^ const(row) = 0."""
        for r, c in self.rows.items():
            if row >> r & 1:
                row ^= (1 << r) ^ c
        if row <= 1:
            return row == 0
        rep = lowest_var(row)
        self._install(rep, row ^ (1 << rep))
        return True

    def _install(self, x: int, clause: int) -> None:
        """Make x a representative with C_x = clause and eliminate x elsewhere."""
        bit = 1 << x
        mask = bit ^ clause
        for r, c in self.rows.items():
            if c & bit:
                self.rows[r] = c ^ mask
        self.rows[x] = clause

    def pending_units(self) -> List[int]:
        """Representatives already fixed by a constant-only clause."""
        return [r if c else -r for r, c in sorted(self.rows.items()) if c <= 1]

    # -- levels -------------------------------------------------------------

    @property
    def level(self) -> int:
        return len(self.snapshots)

    def new_level(self) -> None:
        self.snapshots.append((dict(self.rows), list(self.value), dict(self.count), set(self.applied)))

    def backtrack_xg(self, level: int) -> None:
        if not 0 <= level < self.level:
            raise ValueError(f"cannot backtrack to level {level} from {self.level}")
        rows, value, count, applied = self.snapshots[level]
        del self.snapshots[level:]
        self.rows, self.value, self.count, self.applied = rows, value, count, applied

    backtrack = backtrack_xg

    # -- assignment (Gaussian elimination rules) -----------------------------

    def set_in_xg(self, lits: Iterable[int]) -> bool:
        self._last = []
        self._queue = deque(lits)
        self._queued = set()
        return self._drain()

    set = set_in_xg

    def last_assigned_xg(self) -> List[int]:
        """Literals inferred by the store during the last call (inputs excluded)."""
        return list(self._last)

    last_assigned = last_assigned_xg

    def _drain(self) -> bool:
        rows = self.rows
        while self._queue:
            lit = self._queue.popleft()
            v = abs(lit)
            val = 1 if lit > 0 else 0
            cur = self.value[v]
            if cur:
                if (cur > 0) != bool(val):
                    return False
                continue
            self.value[v] = 1 if val else -1
            c = rows.pop(v, None)
            if c is not None:
                # v is a representative: v = C_v and v = val, so C_v ^ val = 0
                c ^= val
                if c <= 1:
                    if c:
                        return False
                else:
                    x2 = lowest_var(c)
                    self._install(x2, c ^ (1 << x2))
            else:
                bit = 1 << v
                mask = bit | val
                for r, cr in rows.items():
                    if cr & bit:
                        rows[r] = cr ^ mask
            if val and self.ext and not self.xg_ext_on_true(v):
                return False
            self._scan()
        return True

    def _scan(self) -> None:
        for r, c in self.rows.items():
            if c <= 1 and r not in self._queued:
                self._queued.add(r)
                lit = r if c else -r
                self._queue.append(lit)
                self._last.append(lit)

    # -- monomial watches -----------------------------------------------------

    def xg_ext_on_true(self, v: int) -> bool:
        """Count down the watches of a variable just set true (called from set_in_xg).

        One open constituent left: derive x' <-> x_r and substitute.  None left:
        x' itself is true.
        """
        for xp in self.watch_of[v]:
            n = self.count[xp] - 1
            self.count[xp] = n
            if n == 1:
                u = next(c for c in self.defs[xp] if self.value[c] != 1)
                if self.value[u] == 0 and self.value[xp] == 0 and (xp, u) not in self.applied:
                    self.applied.add((xp, u))
                    if not self._substitute(xp, u):
                        return False
            elif n == 0 and self.value[xp] != 1 and xp not in self._queued:
                self._queued.add(xp)
                self._queue.append(xp)
                self._last.append(xp)
        return True

    def substitute_equiv(self, x1: int, x2: int) -> bool:
        """Apply the equivalence x1 <-> x2, eliminating x1 from the store."""
        if x1 == x2:
            raise ValueError("x1 and x2 must differ")
        if self.value[x1] or self.value[x2]:
            raise ValueError("substitute_equiv needs two unassigned variables")
        self._last = []
        self._queue = deque()
        self._queued = set()
        if not self._substitute(x1, x2):
            return False
        self._scan()
        return self._drain()

    def _resolve(self, rest: int) -> bool:
        """Store the constraint XOR(vars(rest)) ^ const(rest) = 0 under a new representative."""
        if rest <= 1:
            return rest == 0
        x3 = lowest_var(rest)
        self._install(x3, rest ^ (1 << x3))
        return True

    def _substitute(self, x1: int, x2: int) -> bool:
        rows = self.rows
        b1, b2 = 1 << x1, 1 << x2
        in1, in2 = x1 in rows, x2 in rows
        if not in1 and not in2:
            # C[x1/x2]
            swap = b1 | b2
            for r, c in rows.items():
                if c & b1:
                    rows[r] = c ^ swap
            return True
        if in1 and not in2:
            c1 = rows.pop(x1)
            if not c1 & b2:
                # C_x2 <- C_x1, x2 replaces x1 as representative
                self._install(x2, c1)
                return True
            # x1 = x2 ^ rest and x1 = x2, so rest = 0
            return self._resolve(c1 ^ b2)
        if not in1 and in2:
            c2 = rows[x2]
            if not c2 & b1:
                # C[x1/C_x2]
                mask = b1 ^ c2
                for r, c in rows.items():
                    if c & b1:
                        rows[r] = c ^ mask
                return True
            # x2 = x1 ^ rest and x1 = x2, so rest = 0; x2 leaves R, x1 becomes x2
            del rows[x2]
            swap = b1 | b2
            for r, c in rows.items():
                if c & b1:
                    rows[r] = c ^ swap
            return self._resolve(c2 ^ b1)
        # both representatives: C_x1 = C_x2.  x2 keeps its class so that
        # x1 <-> x2 plus the store still pins both variables.
        c1 = rows.pop(x1)
        return self._resolve(c1 ^ rows[x2])

    # -- inspection -----------------------------------------------------------

    def representatives(self) -> List[int]:
        return sorted(self.rows)

    def clause(self, rep: int) -> int:
        return self.rows[rep]

    def clause_words(self, rep: int) -> List[int]:
        return to_words(self.rows[rep], self.num_vars)

    def unicity_holds(self) -> bool:
        reps = 0
        for r in self.rows:
            reps |= 1 << r
        return all(not (c & reps) for c in self.rows.values())

    def equations(self) -> List[int]:
        """Store constraints as full rows (rep bit included), each meaning row = 0."""
        return [(1 << r) | c for r, c in sorted(self.rows.items())]

    def state(self) -> Tuple:
        return (tuple(sorted(self.rows.items())), tuple(self.value),
                tuple(sorted(self.count.items())), tuple(sorted(self.applied)), self.level)


def init_xg(num_vars: int, xor_clauses: Iterable[XorClause], monomial_defs=None, ext: bool = False) -> XorGauss:
    return XorGauss(num_vars, xor_clauses, monomial_defs, ext)
