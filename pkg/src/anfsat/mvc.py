"""Branching order from a minimum vertex cover of the monomial interaction graph.

Assigning every variable of a vertex cover leaves at most one free variable in
each nonlinear monomial, so the residual system is linear.  The cover size k'
therefore bounds the search by 2^k'.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .anf import AnfSystem

DEFAULT_NODE_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class InteractionGraph:
    num_vertices: int
    edges: FrozenSet[Tuple[int, int]]

    def neighbours(self) -> Dict[int, Set[int]]:
        adj: Dict[int, Set[int]] = {v: set() for v in range(1, self.num_vertices + 1)}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def is_cover(self, cover: Iterable[int]) -> bool:
        cs = set(cover)
        return all(a in cs or b in cs for a, b in self.edges)

    def is_complete(self) -> bool:
        n = self.num_vertices
        return len(self.edges) == n * (n - 1) // 2


@dataclass(frozen=True)
class CoverResult:
    cover: Tuple[int, ...]
    order: Tuple[int, ...]
    nodes: int = 0

    @property
    def k_prime(self) -> int:
        return len(self.cover)


def build_graph(system: AnfSystem) -> InteractionGraph:
    edges = set()
    for m in system.nonlinear_monomials():
        edges.update(combinations(m, 2))
    return InteractionGraph(system.num_vars, frozenset(edges))


def complete_graph(q: int) -> InteractionGraph:
    return InteractionGraph(q, frozenset(combinations(range(1, q + 1), 2)))


def _matching_bound(edges: List[Tuple[int, int]], chosen: Set[int]) -> int:
    """Greedy maximal matching on the uncovered edges: a lower bound on the cover still needed."""
    used: Set[int] = set()
    size = 0
    for a, b in edges:
        if a in chosen or b in chosen or a in used or b in used:
            continue
        used.add(a)
        used.add(b)
        size += 1
    return size


def min_vertex_cover(graph: InteractionGraph, node_budget: int = DEFAULT_NODE_BUDGET) -> CoverResult:
    """Exact minimum vertex cover by branch and bound.

    Branch on the lowest uncovered edge (a, b): either a joins the cover, or a
    is left out and all of its neighbours join.  A greedy matching over the
    still-uncovered edges gives the lower bound.  Ties resolve toward lower
    vertex indices because the include branch is explored first.
    """
    adj = graph.neighbours()
    edges = sorted(graph.edges)
    best: List[Optional[FrozenSet[int]]] = [None]
    best_size = [len({v for e in edges for v in e})]
    nodes = [0]

    def first_uncovered(chosen):
        for a, b in edges:
            if a not in chosen and b not in chosen:
                return a, b
        return None

    def rec(chosen: Set[int]):
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise BudgetExceeded(f"vertex cover search exceeded {node_budget} nodes")
        if best[0] is not None and len(chosen) + _matching_bound(edges, chosen) >= best_size[0]:
            return
        e = first_uncovered(chosen)
        if e is None:
            if best[0] is None or len(chosen) < best_size[0]:
                best[0] = frozenset(chosen)
                best_size[0] = len(chosen)
            return
        a = e[0]
        chosen.add(a)
        rec(chosen)
        chosen.discard(a)
        added = adj[a] - chosen
        chosen |= added
        rec(chosen)
        chosen -= added

    rec(set())
    cover = tuple(sorted(best[0] or ()))
    return CoverResult(cover, tuple(branching_order(graph.num_vertices, cover)), nodes[0])


def branching_order(num_vars: int, cover: Iterable[int]) -> List[int]:
    """Cover variables first (ascending), then the rest (ascending)."""
    chosen = set(cover)
    rest = [v for v in range(1, num_vars + 1) if v not in chosen]
    return sorted(chosen) + rest


def security_bound(cover) -> str:
    k = cover if isinstance(cover, int) else len(cover.cover if isinstance(cover, CoverResult) else cover)
    return f"2^{k}"


def format_order_file(result: CoverResult) -> str:
    lines = [f"c mvc k_prime={result.k_prime}"]
    lines += [str(v) for v in result.order]
    return "\n".join(lines) + "\n"


def parse_order_file(text: str) -> List[int]:
    order = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        order.extend(int(t) for t in line.split())
    return order
