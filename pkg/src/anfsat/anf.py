"""Boolean polynomial systems in algebraic normal form.

A monomial is a sorted tuple of 1-based variable indices; the empty tuple is
the constant term 1.  An equation is an XOR of monomials set equal to zero.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]
ONE: Monomial = ()


class AnfParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def monomial(vars: Iterable[int]) -> Monomial:
    """Build a monomial, collapsing repeated variables (x*x = x)."""
    return tuple(sorted(set(vars)))


def _monomial_key(m: Monomial):
    # constant last, others lexicographic: "1 2.3 5 6 T"
    return (len(m) == 0, m)


@dataclass(frozen=True)
class AnfEquation:
    """XOR of monomials equated to 0."""

    monomials: frozenset

    @classmethod
    def from_terms(cls, terms: Iterable[Iterable[int]]) -> "AnfEquation":
        counts = Counter(monomial(t) for t in terms)
        return cls(frozenset(m for m, c in counts.items() if c % 2))

    @property
    def has_constant(self) -> bool:
        return ONE in self.monomials

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.monomials), default=0)

    def sorted_monomials(self) -> List[Monomial]:
        return sorted(self.monomials, key=_monomial_key)

    def evaluate(self, assignment: Sequence[int]) -> int:
        """Value of the polynomial (0 or 1); `assignment[i]` is x_{i+1}."""
        total = 0
        for m in self.monomials:
            if all(assignment[v - 1] for v in m):
                total ^= 1
        return total

    def substitute(self, values: Mapping[int, int]) -> "AnfEquation":
        terms = []
        for m in self.monomials:
            if any(v in values and not values[v] for v in m):
                continue
            terms.append([v for v in m if v not in values])
        return AnfEquation.from_terms(terms)

    def __str__(self) -> str:
        if not self.monomials:
            return "0 = 0"
        parts = ["1" if not m else "*".join(f"x{v}" for v in m) for m in self.sorted_monomials()]
        return " + ".join(parts) + " = 0"


@dataclass(frozen=True)
class AnfSystem:
    num_vars: int
    equations: Tuple[AnfEquation, ...]
    comments: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))
        for i, eq in enumerate(self.equations):
            for m in eq.monomials:
                for v in m:
                    if not 1 <= v <= self.num_vars:
                        raise ValueError(
                            f"equation {i + 1}: variable {v} outside [1, {self.num_vars}]"
                        )

    @classmethod
    def from_terms(cls, num_vars: int, equations: Iterable[Iterable[Iterable[int]]], comments=()):
        return cls(num_vars, tuple(AnfEquation.from_terms(e) for e in equations), tuple(comments))

    def monomials(self) -> set:
        out = set()
        for eq in self.equations:
            out |= eq.monomials
        return out

    def nonlinear_monomials(self) -> List[Monomial]:
        return sorted(m for m in self.monomials() if len(m) >= 2)

    def is_linear(self) -> bool:
        return all(eq.degree <= 1 for eq in self.equations)

    def substitute(self, values: Mapping[int, int]) -> "AnfSystem":
        """Partially evaluate; variables keep their indices."""
        return AnfSystem(self.num_vars, tuple(eq.substitute(values) for eq in self.equations))

    def structure(self) -> Tuple[frozenset, ...]:
        """Equations with the constant term stripped."""
        return tuple(eq.monomials - {ONE} for eq in self.equations)


def evaluate(system: AnfSystem, assignment: Sequence[int]) -> List[bool]:
    """Entry i is True iff equation i vanishes under `assignment` (x_1 first)."""
    if len(assignment) < system.num_vars:
        raise ValueError("assignment does not cover every variable")
    return [eq.evaluate(assignment) == 0 for eq in system.equations]


def is_model(system: AnfSystem, assignment: Sequence[int]) -> bool:
    return all(evaluate(system, assignment))


# ---------------------------------------------------------------------------
# ANF text format
#
#   c <comment>
#   p anf <num_vars> <num_equations>
#   1 2.3 5 6 T 0        x1 + x2*x3 + x5 + x6 + 1 = 0
# ---------------------------------------------------------------------------


def _parse_token(tok: str, lineno: int, num_vars: int) -> Monomial:
    if tok == "T":
        return ONE
    try:
        idx = [int(p) for p in tok.split(".")]
    except ValueError:
        raise AnfParseError(f"bad monomial token {tok!r}", lineno) from None
    for v in idx:
        if not 1 <= v <= num_vars:
            raise AnfParseError(f"variable {v} out of range [1, {num_vars}]", lineno)
    return monomial(idx)


def parse_anf(text: str) -> AnfSystem:
    num_vars = None
    declared = None
    equations = []
    comments = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            comments.append(line[1:].strip())
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "anf":
                raise AnfParseError(f"bad header {line!r}", lineno)
            if num_vars is not None:
                raise AnfParseError("duplicate header", lineno)
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise AnfParseError(f"bad header {line!r}", lineno) from None
            if num_vars < 0 or declared < 0:
                raise AnfParseError("negative header field", lineno)
            continue
        if num_vars is None:
            raise AnfParseError("missing 'p anf' header", lineno)
        toks = line.split()
        if toks[-1] != "0":
            raise AnfParseError("equation must end with 0", lineno)
        if "0" in toks[:-1]:
            raise AnfParseError("stray 0 inside equation", lineno)
        equations.append(AnfEquation.from_terms(_parse_token(t, lineno, num_vars) for t in toks[:-1]))
    if num_vars is None:
        raise AnfParseError("missing 'p anf' header")
    if declared != len(equations):
        raise AnfParseError(f"header declares {declared} equations, found {len(equations)}")
    return AnfSystem(num_vars, tuple(equations), tuple(comments))


def format_anf(system: AnfSystem, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" if c else "c" for c in comments]
    lines.append(f"p anf {system.num_vars} {len(system.equations)}")
    for eq in system.equations:
        toks = ["T" if not m else ".".join(map(str, m)) for m in eq.sorted_monomials()]
        lines.append(" ".join(toks + ["0"]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# CNF-XOR conversion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class XorClause:
    """XOR of `vars` equals `rhs` (positive literals only)."""

    vars: Tuple[int, ...]
    rhs: int

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(sorted(self.vars)))
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("xor clause not in normal form: repeated variable")
        object.__setattr__(self, "rhs", int(bool(self.rhs)))

    @classmethod
    def normalize(cls, vars: Iterable[int], rhs: int = 0) -> "XorClause":
        counts = Counter(vars)
        return cls(tuple(v for v, c in counts.items() if c % 2), rhs)

    def __len__(self):
        return len(self.vars)


@dataclass(frozen=True)
class CnfXorFormula:
    num_vars: int
    or_clauses: Tuple[Tuple[int, ...], ...]
    xor_clauses: Tuple[XorClause, ...]
    monomial_defs: Dict[int, Tuple[int, ...]] = field(default_factory=dict, hash=False)

    @property
    def num_original(self) -> int:
        return self.num_vars - len(self.monomial_defs)


class ConstantConflict(ValueError):
    """An XOR clause with no variables and right-hand side 1."""


def tseitin_block(xprime: int, constituents: Sequence[int]) -> List[Tuple[int, ...]]:
    """Clauses for x' <-> AND(constituents): the long clause first, then the binaries."""
    long = (xprime,) + tuple(-v for v in constituents)
    return [long] + [(-xprime, v) for v in constituents]


def to_cnf_xor(system: AnfSystem) -> CnfXorFormula:
    k = system.num_vars
    subst: Dict[Monomial, int] = {}
    or_clauses: List[Tuple[int, ...]] = []
    xors = []
    for eq in system.equations:
        vars_ = []
        for m in eq.sorted_monomials():
            if len(m) == 0:
                continue
            if len(m) == 1:
                vars_.append(m[0])
                continue
            if m not in subst:
                subst[m] = k + len(subst) + 1
                or_clauses.extend(tseitin_block(subst[m], m))
            vars_.append(subst[m])
        xors.append(XorClause(tuple(vars_), int(eq.has_constant)))
    defs = {x: m for m, x in subst.items()}
    return CnfXorFormula(k + len(subst), tuple(or_clauses), tuple(xors), defs)


def xor_to_cnf(clause: XorClause) -> List[Tuple[int, ...]]:
    """Expand XOR(vars) = rhs into the 2^(w-1) clauses that forbid wrong parity."""
    w = len(clause.vars)
    if w == 0:
        if clause.rhs:
            raise ConstantConflict("empty xor clause with rhs 1 is unsatisfiable")
        return []
    out = []
    for bits in product((0, 1), repeat=w):
        if sum(bits) % 2 != clause.rhs:
            # clause false exactly on this assignment
            out.append(tuple(-v if b else v for v, b in zip(clause.vars, bits)))
    return out

