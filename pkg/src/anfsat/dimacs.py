"""DIMACS CNF and CNF-XOR text formats.

XOR lines follow the CryptoMiniSat convention: ``x 1 2 3 0`` asserts
x1 ^ x2 ^ x3 = 1, and a negated first literal flips the parity, so
``x -3 5 6 0`` asserts x3 ^ x5 ^ x6 = 0.  Substitution-variable definitions
survive the round trip as ``c def <x'> <v1> ... 0`` comment lines.
"""

from __future__ import annotations

from typing import List

from .anf import ConstantConflict, CnfXorFormula, XorClause, xor_to_cnf

MAX_XOR_WIDTH = 20


class DimacsParseError(ValueError):
    pass


def _xor_line(clause: XorClause) -> str:
    lits = list(clause.vars)
    if not clause.rhs:
        lits[0] = -lits[0]
    return "x " + " ".join(map(str, lits)) + " 0"


def export_dimacs(formula: CnfXorFormula, mode: str = "cnfxor", max_xor_width: int = MAX_XOR_WIDTH) -> str:
    if mode not in ("cnf", "cnfxor"):
        raise ValueError(f"unknown mode {mode!r}")
    body: List[str] = []
    for c in formula.or_clauses:
        body.append(" ".join(map(str, c)) + " 0")
    for x in formula.xor_clauses:
        if not x.vars:
            if x.rhs:
                body.append("x 0" if mode == "cnfxor" else "0")
            continue
        if mode == "cnfxor":
            body.append(_xor_line(x))
            continue
        if len(x.vars) > max_xor_width:
            raise ValueError(
                f"xor clause of width {len(x.vars)} exceeds the cnf expansion cap of {max_xor_width}"
            )
        try:
            body.extend(" ".join(map(str, c)) + " 0" for c in xor_to_cnf(x))
        except ConstantConflict:
            body.append("0")
    head = [
        f"c def {xp} " + " ".join(map(str, formula.monomial_defs[xp])) + " 0"
        for xp in sorted(formula.monomial_defs)
    ]
    head.append(f"p cnf {formula.num_vars} {len(body)}")
    return "\n".join(head + body) + "\n"


def parse_dimacs(text: str) -> CnfXorFormula:
    num_vars = None
    declared = None
    ors = []
    xors = []
    defs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) >= 4 and parts[1] == "def" and parts[-1] == "0":
                xp, *cs = (int(p) for p in parts[2:-1])
                defs[xp] = tuple(sorted(cs))
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsParseError(f"line {lineno}: bad header {line!r}")
            num_vars, declared = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise DimacsParseError(f"line {lineno}: clause before header")
        is_xor = line.startswith("x")
        if is_xor:
            line = line[1:]
        try:
            lits = [int(t) for t in line.split()]
        except ValueError:
            raise DimacsParseError(f"line {lineno}: bad literal") from None
        if not lits or lits[-1] != 0:
            raise DimacsParseError(f"line {lineno}: clause must end with 0")
        lits = lits[:-1]
        if any(abs(l) > num_vars for l in lits):
            raise DimacsParseError(f"line {lineno}: literal out of range")
        if is_xor:
            rhs = 1
            for l in lits:
                if l < 0:
                    rhs ^= 1
            xors.append(XorClause.normalize([abs(l) for l in lits], rhs))
        else:
            ors.append(tuple(lits))
    if num_vars is None:
        raise DimacsParseError("missing 'p cnf' header")
    if declared != len(ors) + len(xors):
        raise DimacsParseError(f"header declares {declared} clauses, found {len(ors) + len(xors)}")
    return CnfXorFormula(num_vars, tuple(ors), tuple(xors), defs)
