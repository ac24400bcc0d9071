"""Point-decomposition benchmark instances over binary fields.

Summation polynomials S_2, S_3 (closed form) and S_4 (resultant of two S_3),
Weil descent of a polynomial over GF(2^n) to a Boolean system, and the
planted/random instance generator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import reduce
from itertools import permutations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .anf import ONE, AnfEquation, AnfSystem

# Lowest-weight irreducible t^n + (middle terms) + 1: trinomial when one
# exists, else the lexicographically smallest pentanomial.
REDUCTION_TERMS: Dict[int, Tuple[int, ...]] = {
    2: (1,), 3: (1,), 4: (1,), 5: (2,), 6: (1,), 7: (1,), 8: (4, 3, 1), 9: (1,),
    10: (3,), 11: (2,), 12: (3,), 13: (4, 3, 1), 14: (5,), 15: (1,), 16: (5, 3, 1),
    17: (3,), 18: (3,), 19: (5, 2, 1), 20: (3,), 21: (2,), 22: (1,), 23: (5,),
    24: (4, 3, 1), 25: (3,), 26: (4, 3, 1), 27: (5, 2, 1), 28: (1,), 29: (2,),
    30: (1,), 31: (3,), 32: (7, 3, 2), 33: (10,), 34: (7,), 35: (2,), 36: (9,),
    37: (6, 4, 1), 38: (6, 5, 1), 39: (4,), 40: (5, 4, 3), 41: (3,), 42: (7,),
    43: (6, 4, 3), 44: (5,), 45: (4, 3, 1), 46: (1,), 47: (5,), 48: (5, 3, 2),
    49: (9,), 50: (4, 3, 2), 51: (6, 3, 1), 52: (3,), 53: (6, 2, 1), 54: (9,),
    55: (7,), 56: (7, 4, 2), 57: (4,), 58: (19,), 59: (7, 4, 2), 60: (1,),
    61: (5, 2, 1), 62: (29,), 63: (1,), 64: (4, 3, 1),
}

MAX_DESCENT_VARS = 64


# ---------------------------------------------------------------------------
# GF(2)[t] helpers (polynomials as ints, bit i = coefficient of t^i)
# ---------------------------------------------------------------------------


def gf2_mod(a: int, f: int) -> int:
    df = f.bit_length() - 1
    while a and a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, gf2_mod(a, b)
    return a


def _prime_factors(n: int) -> List[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: int) -> bool:
    """Rabin's test: t^(2^n) = t mod f, and gcd(t^(2^(n/p)) - t, f) = 1 for primes p | n."""
    n = f.bit_length() - 1
    if n < 1:
        return False
    if n == 1:
        return True

    def t_pow_2k(k):
        x = 2
        for _ in range(k):
            x = _mulmod(x, x, f, n)
        return x

    if t_pow_2k(n) != 2:
        return False
    return all(gf2_gcd(f, t_pow_2k(n // p) ^ 2) == 1 for p in _prime_factors(n))


def _mulmod(a: int, b: int, f: int, n: int) -> int:
    r = 0
    top = 1 << n
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= f
    return r


class BinaryField:
    """GF(2^n) in polynomial basis; elements are n-bit ints."""

    def __init__(self, n: int, modulus: Optional[int] = None):
        if modulus is None:
            if n not in REDUCTION_TERMS:
                raise ValueError(f"no reduction polynomial on file for n={n}")
            modulus = (1 << n) | 1
            for e in REDUCTION_TERMS[n]:
                modulus |= 1 << e
        if modulus.bit_length() - 1 != n:
            raise ValueError("reduction polynomial must have degree n")
        if not is_irreducible(modulus):
            raise ValueError(f"{modulus:#x} is reducible over GF(2)")
        self.n = n
        self.modulus = modulus
        self.order = 1 << n

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        return _mulmod(a, b, self.modulus, self.n)

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def t_pow(self, e: int) -> int:
        """t^e reduced."""
        return self.pow(2, e) if self.n > 1 else 1

    def random(self, rng: random.Random) -> int:
        return rng.getrandbits(self.n)


# ---------------------------------------------------------------------------
# Multivariate polynomials over GF(2)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolicPoly:
    """Polynomial over GF(2) in X_1..X_nvars, stored as a set of exponent vectors."""

    nvars: int
    terms: FrozenSet[Tuple[int, ...]]

    @classmethod
    def from_terms(cls, nvars: int, terms: Iterable[Sequence[int]]) -> "SymbolicPoly":
        acc: set = set()
        for t in terms:
            acc ^= {tuple(t)}
        return cls(nvars, frozenset(acc))

    @classmethod
    def zero(cls, nvars):
        return cls(nvars, frozenset())

    @classmethod
    def one(cls, nvars):
        return cls(nvars, frozenset({(0,) * nvars}))

    @classmethod
    def var(cls, nvars, i, power=1):
        e = [0] * nvars
        e[i - 1] = power
        return cls(nvars, frozenset({tuple(e)}))

    def __add__(self, other: "SymbolicPoly") -> "SymbolicPoly":
        return SymbolicPoly(self.nvars, self.terms ^ other.terms)

    def __mul__(self, other: "SymbolicPoly") -> "SymbolicPoly":
        acc: set = set()
        for a in self.terms:
            for b in other.terms:
                acc ^= {tuple(x + y for x, y in zip(a, b))}
        return SymbolicPoly(self.nvars, frozenset(acc))

    def __bool__(self):
        return bool(self.terms)

    def degree_in(self, i: int) -> int:
        return max((t[i - 1] for t in self.terms), default=-1)

    def coefficients_in(self, i: int) -> Dict[int, "SymbolicPoly"]:
        """Split as sum_d c_d * X_i^d; c_d no longer depends on X_i."""
        out: Dict[int, set] = {}
        for t in self.terms:
            d = t[i - 1]
            rest = t[: i - 1] + (0,) + t[i:]
            out.setdefault(d, set()).add(rest)
        return {d: SymbolicPoly(self.nvars, frozenset(s)) for d, s in out.items()}

    def rename(self, mapping: Mapping[int, int], nvars: int) -> "SymbolicPoly":
        """Move variable i to mapping[i] in a ring with `nvars` variables."""
        acc = []
        for t in self.terms:
            e = [0] * nvars
            for i, p in enumerate(t, start=1):
                if p:
                    e[mapping[i] - 1] += p
            acc.append(e)
        return SymbolicPoly.from_terms(nvars, acc)

    def drop_var(self, i: int) -> "SymbolicPoly":
        if self.degree_in(i) > 0:
            raise ValueError(f"X_{i} still occurs")
        return SymbolicPoly(self.nvars - 1, frozenset(t[: i - 1] + t[i:] for t in self.terms))

    def permute(self, perm: Sequence[int]) -> "SymbolicPoly":
        """X_i -> X_perm[i-1]."""
        return self.rename({i + 1: p for i, p in enumerate(perm)}, self.nvars)

    def evaluate(self, field: BinaryField, values: Sequence[int]) -> int:
        total = 0
        for t in self.terms:
            term = 1
            for x, p in zip(values, t):
                if p:
                    term = field.mul(term, field.pow(x, p))
            total ^= term
        return total

    def is_symmetric(self) -> bool:
        return all(self.permute(p) == self for p in permutations(range(1, self.nvars + 1)))


def sylvester_matrix(f: SymbolicPoly, g: SymbolicPoly, var: int) -> List[List[SymbolicPoly]]:
    fc, gc = f.coefficients_in(var), g.coefficients_in(var)
    df, dg = f.degree_in(var), g.degree_in(var)
    z = SymbolicPoly.zero(f.nvars)
    size = df + dg
    rows = []
    for shift in range(dg):
        rows.append([fc.get(df - (j - shift), z) if 0 <= j - shift <= df else z for j in range(size)])
    for shift in range(df):
        rows.append([gc.get(dg - (j - shift), z) if 0 <= j - shift <= dg else z for j in range(size)])
    return rows


def determinant(matrix: List[List[SymbolicPoly]]) -> SymbolicPoly:
    """Laplace expansion along the first row (signs vanish in characteristic 2)."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = SymbolicPoly.zero(matrix[0][0].nvars)
    for j, entry in enumerate(matrix[0]):
        if not entry:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        total = total + entry * determinant(minor)
    return total


def resultant(f: SymbolicPoly, g: SymbolicPoly, var: int) -> SymbolicPoly:
    return determinant(sylvester_matrix(f, g, var)).drop_var(var)


S3_TERMS = [(2, 2, 0), (2, 0, 2), (1, 1, 1), (0, 2, 2), (0, 0, 0)]


def summation_poly(order: int) -> SymbolicPoly:
    if order == 2:
        return SymbolicPoly.from_terms(2, [(1, 0), (0, 1)])
    s3 = SymbolicPoly.from_terms(3, S3_TERMS)
    if order == 3:
        return s3
    if order == 4:
        # S_4(X1..X4) = Res_X(S_3(X1, X2, X), S_3(X3, X4, X)); X is variable 5
        f = s3.rename({1: 1, 2: 2, 3: 5}, 5)
        g = s3.rename({1: 3, 2: 4, 3: 5}, 5)
        return resultant(f, g, 5)
    raise ValueError(f"unsupported summation polynomial order {order}")


# ---------------------------------------------------------------------------
# Weil descent
# ---------------------------------------------------------------------------


def bit_variable(point: int, bit: int, l: int) -> int:
    """1-based Boolean variable for bit `bit` of free point `point` (both 0-based), block layout."""
    return point * l + bit + 1


def _expand_product(a: Dict[int, int], b: Dict[int, int], field: BinaryField) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = ma | mb
            c = field.mul(ca, cb)
            v = out.get(m, 0) ^ c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def weil_descent(poly: SymbolicPoly, field: BinaryField, l: int, fixed_values: Mapping[int, int],
                 max_vars: int = MAX_DESCENT_VARS, labels: Optional[Sequence[int]] = None) -> AnfSystem:
    """Rewrite poly = 0 over GF(2^n) as n Boolean equations in the bits of the free variables.

    Each free X_i is restricted to sum_{j<l} x_{i,j} t^j; variables listed in
    `fixed_values` take those field constants.  Bit j of the p-th free point
    becomes variable ``labels[bit_variable(p, j, l) - 1]`` (identity by default).
    """
    n = field.n
    for i, v in fixed_values.items():
        if not 1 <= i <= poly.nvars:
            raise ValueError(f"fixed variable X_{i} not in the polynomial")
        if not 0 <= v < field.order:
            raise ValueError(f"fixed value {v} is not an element of GF(2^{n})")
    free = [i for i in range(1, poly.nvars + 1) if i not in fixed_values]
    if not 1 <= l <= n:
        raise ValueError("l must lie in [1, n]")
    if l * len(free) > max_vars:
        raise ValueError(f"{l * len(free)} Boolean variables exceed the cap of {max_vars}")
    num_vars = l * len(free)
    if labels is None:
        labels = list(range(1, num_vars + 1))
    if sorted(labels) != list(range(1, num_vars + 1)):
        raise ValueError("labels must be a permutation of 1..l*m_free")

    # X_i^(2^s) = sum_j x_ij t^(j 2^s): linear in the bits
    frob: Dict[Tuple[int, int], Dict[int, int]] = {}
    for p, i in enumerate(free):
        for s in range(max(poly.degree_in(i), 1).bit_length()):
            frob[(i, s)] = {1 << labels[bit_variable(p, j, l) - 1]: field.t_pow(j << s) for j in range(l)}

    powers: Dict[Tuple[int, int], Dict[int, int]] = {}

    def power(i: int, e: int) -> Dict[int, int]:
        key = (i, e)
        if key not in powers:
            out = {0: 1}
            s = 0
            while e >> s:
                if e >> s & 1:
                    out = _expand_product(out, frob[(i, s)], field)
                s += 1
            powers[key] = out
        return powers[key]

    acc: Dict[int, int] = {}
    for t in sorted(poly.terms):
        scalar = 1
        for i, v in fixed_values.items():
            scalar = field.mul(scalar, field.pow(v, t[i - 1]))
        if not scalar:
            continue
        expr = {0: scalar}
        for i in free:
            if t[i - 1]:
                expr = _expand_product(expr, power(i, t[i - 1]), field)
        for m, c in expr.items():
            v = acc.get(m, 0) ^ c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)

    equations = []
    for b in range(n):
        mons = []
        for mask, c in acc.items():
            if c >> b & 1:
                mons.append(tuple(v for v in range(1, num_vars + 1) if mask >> v & 1))
        equations.append(AnfEquation(frozenset(mons)))
    return AnfSystem(num_vars, tuple(equations))


def lift_assignment(assignment: Sequence[int], l: int, num_free: int,
                    labels: Optional[Sequence[int]] = None) -> List[int]:
    """Field values sum_j x_ij t^j of the free points for a Boolean assignment."""
    if labels is None:
        labels = list(range(1, l * num_free + 1))
    out = []
    for p in range(num_free):
        x = 0
        for j in range(l):
            if assignment[labels[bit_variable(p, j, l) - 1] - 1]:
                x |= 1 << j
        out.append(x)
    return out


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    m: int
    l: int
    seed: int = 0
    mode: str = "planted"

    def validate(self):
        if self.m not in (2, 3):
            raise ValueError(f"m must be 2 or 3 (third or fourth summation polynomial), got {self.m}")
        if self.mode not in ("planted", "random"):
            raise ValueError(f"mode must be planted or random, got {self.mode!r}")
        if self.n not in REDUCTION_TERMS:
            raise ValueError(f"n={self.n} outside the supported range 2..64")
        if not 1 <= self.l <= self.n:
            raise ValueError("l must lie in [1, n]")
        if self.l * self.m > self.n + 2:
            raise ValueError(f"l*m = {self.l * self.m} exceeds n + 2 = {self.n + 2}")


@dataclass
class Instance:
    spec: InstanceSpec
    system: AnfSystem
    planted: Optional[Tuple[int, ...]] = None
    target: int = 0
    labels: Tuple[int, ...] = ()

    def comments(self) -> List[str]:
        s = self.spec
        out = [f"n={s.n}", f"m={s.m}", f"l={s.l}", f"seed={s.seed}", f"mode={s.mode}",
               f"target={self.target:#x}", "labels=" + ",".join(map(str, self.labels))]
        if self.planted is not None:
            out.append("planted=" + "".join(map(str, self.planted)))
        return out

    def points(self, assignment: Sequence[int]) -> List[int]:
        """Field values of the free points encoded by a model."""
        return lift_assignment(assignment, self.spec.l, self.spec.m, self.labels)


def shape_target(n: int, m: int, l: int) -> int:
    """Field constant for X_{m+1}, fixed per (n, m, l) so that instances of a shape share structure."""
    return random.Random(f"target:{n}:{m}:{l}").getrandbits(n)


def shape_labels(n: int, m: int, l: int) -> List[int]:
    """Shape-fixed shuffle of the bit variables.

    With the plain block layout ascending index order already assigns one
    whole point first, which is a minimum vertex cover of the S_3 graph, so the
    default order would silently be the cover order.  Shuffled labels carry no
    structure, as an unguided static order should.
    """
    labels = list(range(1, m * l + 1))
    random.Random(f"labels:{n}:{m}:{l}").shuffle(labels)
    return labels


def base_system(n: int, m: int, l: int) -> Tuple[AnfSystem, int, List[int]]:
    field = BinaryField(n)
    target = shape_target(n, m, l)
    labels = shape_labels(n, m, l)
    system = weil_descent(summation_poly(m + 1), field, l, {m + 1: target}, labels=labels)
    return system, target, labels


def with_constants(system: AnfSystem, constants: Sequence[int]) -> AnfSystem:
    eqs = []
    for eq, c in zip(system.equations, constants):
        mons = eq.monomials - {ONE}
        eqs.append(AnfEquation(mons | {ONE} if c else mons))
    return AnfSystem(system.num_vars, tuple(eqs))


def generate_instance(spec: InstanceSpec) -> Instance:
    """Descent of S_{m+1} at the shape's target; only the constants depend on the seed.

    planted: constants chosen so a seed-drawn assignment is a model.
    random: constants drawn uniformly; satisfiability is left to the solver.
    """
    spec.validate()
    base, target, labels = base_system(spec.n, spec.m, spec.l)
    rng = random.Random(spec.seed)
    k = base.num_vars
    if spec.mode == "planted":
        model = tuple(rng.getrandbits(1) for _ in range(k))
        constants = [AnfEquation(eq.monomials - {ONE}).evaluate(model) for eq in base.equations]
        return Instance(spec, with_constants(base, constants), model, target, tuple(labels))
    constants = [rng.getrandbits(1) for _ in base.equations]
    return Instance(spec, with_constants(base, constants), None, target, tuple(labels))
