"""Pattern-spanned subgraph structure.

A spanned graph is connected with every edge covered by some pattern copy.
This module extracts the spanned components of an arbitrary graph, computes
the exact minimum number of copies needed to cover a component (set cover by
branch and bound), evaluates the spanning-excess inequality
(2/delta)*e - v >= (l_star - 1)/delta, and handles the dyadic bookkeeping
used to classify components by how many copies they carry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .counting import DEFAULT_MAP_BUDGET, iter_copies
from .errors import (
    BudgetExceededError,
    DomainError,
    NotEnoughCopiesError,
    NotSpannedError,
    PoolTooSmallError,
)
from .graphs import Pattern, SimpleGraph

MAX_COVER_COPIES = 10_000  # set-cover instances beyond this are refused


@dataclass(frozen=True)
class SpannedComponent:
    """One spanned component: original vertex labels, the compact relabeled
    graph, and its copies in compact labels."""

    vertices: tuple
    graph: SimpleGraph
    copies: tuple

    @property
    def copy_count(self) -> int:
        return len(self.copies)


@dataclass(frozen=True)
class SpannedDecomposition:
    components: tuple
    dropped_edges: tuple

    @property
    def total_copies(self) -> int:
        return sum(c.copy_count for c in self.components)


def _relabel(vertices, edges, copies):
    pos = {v: i for i, v in enumerate(vertices)}
    new_edges = [tuple(sorted((pos[u], pos[v]))) for u, v in edges]
    new_copies = tuple(
        frozenset(tuple(sorted((pos[u], pos[v]))) for u, v in copy) for copy in copies
    )
    return SimpleGraph(len(vertices), new_edges), new_copies


def spanned_decompose(
    P: Pattern, g: SimpleGraph, budget: int = DEFAULT_MAP_BUDGET
) -> SpannedDecomposition:
    """Drop edges of g in no pattern copy and split the rest into connected
    components, each reported with the copies it contains."""
    copies = iter_copies(P, g, budget)
    covered = set()
    for c in copies:
        covered |= c
    dropped = tuple(e for e in g.edges if e not in covered)

    parent = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for u, v in covered:
        parent.setdefault(u, u)
        parent.setdefault(v, v)
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv

    comp_vertices: dict = {}
    for v in parent:
        comp_vertices.setdefault(find(v), set()).add(v)
    comp_edges: dict = {root: [] for root in comp_vertices}
    for e in sorted(covered):
        comp_edges[find(e[0])].append(e)
    comp_copies: dict = {root: [] for root in comp_vertices}
    for c in copies:
        root = find(next(iter(c))[0])
        comp_copies[root].append(c)

    components = []
    for root in sorted(comp_vertices, key=lambda r: min(comp_vertices[r])):
        verts = tuple(sorted(comp_vertices[root]))
        graph, new_copies = _relabel(verts, comp_edges[root], comp_copies[root])
        components.append(
            SpannedComponent(vertices=verts, graph=graph, copies=new_copies)
        )
    return SpannedDecomposition(components=tuple(components), dropped_edges=dropped)


def _greedy_cover(universe, sets):
    uncovered = set(universe)
    chosen = 0
    while uncovered:
        best = max(sets, key=lambda s: len(s & uncovered))
        gain = len(best & uncovered)
        if gain == 0:
            return None
        uncovered -= best
        chosen += 1
    return chosen


def _min_cover(universe, sets):
    """Exact minimum set cover by branch and bound.

    Branches on the uncovered element with the fewest covering sets; prunes
    with the greedy upper bound and a counting lower bound.
    """
    ub = _greedy_cover(universe, sets)
    if ub is None:
        raise NotSpannedError("an edge is covered by no copy")
    max_size = max(len(s) for s in sets)
    best = [ub]

    cover_map = {e: [s for s in sets if e in s] for e in universe}

    def rec(uncovered, depth):
        if not uncovered:
            best[0] = min(best[0], depth)
            return
        if depth + math.ceil(len(uncovered) / max_size) >= best[0]:
            return
        e = min(uncovered, key=lambda x: len(cover_map[x]))
        for s in cover_map[e]:
            rec(uncovered - s, depth + 1)

    rec(frozenset(universe), 0)
    return best[0]


def minimal_spanning_count(
    P: Pattern, S: SimpleGraph, budget: int = DEFAULT_MAP_BUDGET
) -> int:
    """Exact minimum number of copies whose union covers every edge of S.

    Equals 1 exactly when S is a copy of the pattern itself. Raises
    NotSpannedError if some edge lies in no copy.
    """
    if S.m == 0:
        raise NotSpannedError("graph has no edges")
    copies = iter_copies(P, S, budget)
    if len(copies) > MAX_COVER_COPIES:
        raise BudgetExceededError(
            f"{len(copies)} copies exceed the set-cover cap {MAX_COVER_COPIES}"
        )
    return _min_cover(set(S.edges), [set(c) for c in copies])


@dataclass(frozen=True)
class SpanningExcessReport:
    """Spanning excess f = (2/delta)*e(S) - v(S) with the proven lower bound
    (l_star - 1)/delta; loose_lower is the weaker e(S)/(2*delta*q**2) rate
    reported for reference."""

    f: float
    l_star: int
    lower: float
    loose_lower: float


def spanning_excess_report(
    P: Pattern, S: SimpleGraph, budget: int = DEFAULT_MAP_BUDGET
) -> SpanningExcessReport:
    """Evaluate the spanning-excess inequality on a spanned graph S.

    f >= (l_star - 1)/delta whenever l_star >= 2, and f = 0 when S is a
    single copy. Vertices are counted over the support of S.
    """
    l_star = minimal_spanning_count(P, S, budget)
    v = len(S.support())
    f = 2.0 * S.m / P.delta - v
    lower = (l_star - 1) / P.delta
    loose = S.m / (2.0 * P.delta * P.q**2)
    return SpanningExcessReport(f=f, l_star=l_star, lower=lower, loose_lower=loose)


@dataclass(frozen=True)
class DyadicProfile:
    """Counts c[i] of values in [2**i, 2**(i+1)); t is the top nonzero index."""

    c: dict
    t: int

    @property
    def weighted_sum(self) -> int:
        return sum(ci * 2**i for i, ci in self.c.items())


def dyadic_profile(l_list) -> DyadicProfile:
    """Dyadic class counts for a list of copy counts, all at least 2.

    The weighted sum of class floors is sandwiched between the exact total
    and half of it: sum(l) >= sum(c_i * 2**i) >= sum(l)/2.
    """
    c: dict = {}
    for l in l_list:
        if l < 2:
            raise DomainError(f"copy counts must be at least 2, got {l}")
        i = l.bit_length() - 1  # 2**i <= l < 2**(i+1)
        c[i] = c.get(i, 0) + 1
    t = max(c) if c else 0
    return DyadicProfile(c=c, t=t)


def _overlap_bfs_order(copies):
    """Copies ordered so every prefix has a connected union (breadth-first
    over the copy-overlap graph from the first copy)."""
    vsets = [frozenset(v for e in c for v in e) for c in copies]
    k = len(copies)
    seen = [False] * k
    order = [0]
    seen[0] = True
    queue = [0]
    while queue:
        i = queue.pop(0)
        for j in range(k):
            if not seen[j] and vsets[i] & vsets[j]:
                seen[j] = True
                order.append(j)
                queue.append(j)
    return order


def truncate_spanned(
    P: Pattern, S: SimpleGraph, target: int, budget: int = DEFAULT_MAP_BUDGET
) -> SimpleGraph:
    """Connected subgraph of S spanned by exactly `target` of its copies.

    Copies are taken breadth-first over the copy-overlap graph so that every
    prefix union is connected; the union of the first `target` copies is
    returned as a compact graph.
    """
    if target < 1:
        raise DomainError(f"target must be positive, got {target}")
    copies = iter_copies(P, S, budget)
    if not copies:
        raise NotSpannedError("graph holds no copy of the pattern")
    covered = set()
    for c in copies:
        covered |= c
    if covered != set(S.edges):
        raise NotSpannedError("graph has edges outside every copy")
    if len(copies) < target:
        raise NotEnoughCopiesError(
            f"only {len(copies)} copies available, need {target}"
        )
    order = _overlap_bfs_order(copies)
    if len(order) < target:
        raise NotSpannedError("copy-overlap graph is disconnected")
    union = set()
    for i in order[:target]:
        union |= copies[i]
    verts = tuple(sorted({v for e in union for v in e}))
    graph, _ = _relabel(verts, sorted(union), ())
    return graph


def glue_random_spanned(
    P: Pattern, copies: int, rng: np.random.Generator, vertex_pool: int
) -> SimpleGraph:
    """Random connected graph built by placing `copies` images of the
    pattern, each sharing at least one vertex with the union so far.

    The output is spanned by construction. Raises PoolTooSmallError when the
    pool cannot host even one copy.
    """
    if copies < 1:
        raise DomainError(f"copy count must be positive, got {copies}")
    q = P.q
    if vertex_pool < q:
        raise PoolTooSmallError(f"pool of {vertex_pool} cannot host a {q}-vertex copy")
    pool = list(range(vertex_pool))
    used: list = []
    used_set: set = set()
    edges: set = set()
    for i in range(copies):
        if i == 0:
            image = [int(v) for v in rng.choice(pool, size=q, replace=False)]
        else:
            free = [v for v in pool if v not in used_set]
            max_fresh = min(q - 1, len(free))
            n_fresh = int(rng.integers(0, max_fresh + 1))
            n_shared = q - n_fresh
            if n_shared > len(used):
                n_shared = len(used)
                n_fresh = q - n_shared
            shared = [int(v) for v in rng.choice(used, size=n_shared, replace=False)]
            fresh = (
                [int(v) for v in rng.choice(free, size=n_fresh, replace=False)]
                if n_fresh
                else []
            )
            image = shared + fresh
            image = [image[j] for j in rng.permutation(q)]
        for v in image:
            if v not in used_set:
                used_set.add(v)
                used.append(v)
        for u, v in P.graph.edges:
            a, b = image[u], image[v]
            edges.add((a, b) if a < b else (b, a))
    verts = tuple(sorted(used_set))
    graph, _ = _relabel(verts, sorted(edges), ())
    return graph
