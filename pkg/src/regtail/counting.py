"""Exact copy and homomorphism counting, planted-model conditional
expectations, and exact small-n probability enumeration.

This is the brute-force oracle layer: every routine here is exact (up to
floating-point accumulation where probabilities are involved) and every
other module's inequality is checked against it.

The injective-map kernel enumerates vertex images in a greedy connected
order (each new pattern vertex adjacent to an already-placed one when
possible), with candidates filtered by degree and adjacency. Conditional
expectations over a planted graph are computed by expanding the product of
per-edge factors p + (1-p)*1[planted] over edge subsets of the pattern,
which reduces each term to a small injective-matching count inside the
planted graph times a falling factorial for the untouched vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    BudgetExceededError,
    DomainError,
    EdgeAbsentError,
    TooLargeError,
)
from .graphs import Pattern, SimpleGraph

DEFAULT_MAP_BUDGET = 10**9  # partial assignments per enumeration call
DEFAULT_PLANTED_BUDGET = 10**8  # cap on n**q for planted-model calls
MAX_EXACT_N = 7  # exact probability enumerates all 2^C(n,2) graphs

_plan_cache: dict = {}


def _greedy_order(q, edge_list, pinned):
    """Order vertices so each one has as many placed neighbors as possible.

    Pinned vertices come first. Works for disconnected edge sets (a fresh
    root is started whenever no unplaced vertex touches the placed set).
    """
    nbrs = {v: set() for v in range(q)}
    for u, v in edge_list:
        nbrs[u].add(v)
        nbrs[v].add(u)
    verts = sorted({v for e in edge_list for v in e} | set(pinned))
    order = list(pinned)
    placed = set(pinned)
    while len(order) < len(verts):
        best = None
        best_key = None
        for v in verts:
            if v in placed:
                continue
            key = (len(nbrs[v] & placed), len(nbrs[v]), -v)
            if best_key is None or key > best_key:
                best, best_key = v, key
        order.append(best)
        placed.add(best)
    back = []
    for i, v in enumerate(order):
        back.append(tuple(j for j in range(i) if order[j] in nbrs[v]))
    hdeg = tuple(len(nbrs[v]) for v in order)
    return tuple(order), tuple(back), hdeg


def _plan(pattern_graph: SimpleGraph, edge_subset=None, pins=()):
    """Cached enumeration plan for a pattern (or one of its edge subsets)."""
    if edge_subset is None:
        edge_subset = pattern_graph.edges
    key = (pattern_graph, frozenset(edge_subset), tuple(pins))
    plan = _plan_cache.get(key)
    if plan is None:
        plan = _greedy_order(pattern_graph.n, edge_subset, pins)
        _plan_cache[key] = plan
    return plan


def _count_maps(plan, g: SimpleGraph, pins, budget, state=None):
    """Number of injective maps that realize the planned edges inside g.

    pins maps plan positions (a prefix) to fixed images. budget counts
    partial assignments; exceeding it raises BudgetExceededError. Passing a
    shared mutable `state` cell lets several calls draw on one budget.
    """
    order, back, hdeg = plan
    npos = len(order)
    adj = g.adj
    images = [0] * npos
    used = set()
    n_pins = len(pins)
    for i in range(n_pins):
        w = pins[i]
        if w in used:
            return 0
        for j in back[i]:
            if w not in adj.get(images[j], ()):
                return 0
        images[i] = w
        used.add(w)
    if npos == n_pins:
        return 1
    if state is None:
        state = [budget]

    def rec(i):
        if i == npos:
            return 1
        bk = back[i]
        need = hdeg[i]
        if bk:
            anchor = min(bk, key=lambda j: len(adj.get(images[j], ())))
            cands = adj.get(images[anchor], ())
        else:
            cands = adj.keys()
        total = 0
        for w in cands:
            if w in used:
                continue
            if len(adj.get(w, ())) < need:
                continue
            ok = True
            for j in bk:
                if w not in adj[images[j]]:
                    ok = False
                    break
            if not ok:
                continue
            state[0] -= 1
            if state[0] < 0:
                raise BudgetExceededError("injective-map enumeration budget hit")
            images[i] = w
            used.add(w)
            total += rec(i + 1)
            used.discard(w)
        return total

    return rec(n_pins)


def count_injective_homs(P: Pattern, g: SimpleGraph, budget: int = DEFAULT_MAP_BUDGET) -> int:
    """Number of injective vertex maps carrying every pattern edge to an edge of g."""
    plan = _plan(P.graph)
    return _count_maps(plan, g, (), budget)


def count_copies(P: Pattern, g: SimpleGraph, budget: int = DEFAULT_MAP_BUDGET) -> int:
    """Number of edge subsets of g isomorphic to the pattern."""
    homs = count_injective_homs(P, g, budget)
    assert homs % P.aut_count == 0, "hom count must be divisible by |Aut|"
    return homs // P.aut_count


def iter_copies(P: Pattern, g: SimpleGraph, budget: int = DEFAULT_MAP_BUDGET):
    """Distinct copies of the pattern in g, each a frozenset of edges."""
    order, back, hdeg = _plan(P.graph)
    adj = g.adj
    npos = len(order)
    images = [0] * npos
    used = set()
    state = [budget]
    out = set()
    pedges = P.graph.edges

    def rec(i):
        if i == npos:
            pos = {order[j]: images[j] for j in range(npos)}
            copy = frozenset(
                (pos[u], pos[v]) if pos[u] < pos[v] else (pos[v], pos[u])
                for u, v in pedges
            )
            out.add(copy)
            return
        bk = back[i]
        need = hdeg[i]
        if bk:
            anchor = min(bk, key=lambda j: len(adj.get(images[j], ())))
            cands = adj.get(images[anchor], ())
        else:
            cands = adj.keys()
        for w in cands:
            if w in used or len(adj.get(w, ())) < need:
                continue
            if any(w not in adj[images[j]] for j in bk):
                continue
            state[0] -= 1
            if state[0] < 0:
                raise BudgetExceededError("copy enumeration budget hit")
            images[i] = w
            used.add(w)
            rec(i + 1)
            used.discard(w)

    rec(0)
    return sorted(out, key=sorted)


def count_copies_through_edge(
    P: Pattern, g: SimpleGraph, f, budget: int = DEFAULT_MAP_BUDGET
) -> int:
    """Number of copies of the pattern in g whose edge set contains f."""
    a, b = f
    if not g.has_edge(a, b):
        raise EdgeAbsentError(f"edge {f} not present in graph")
    total = 0
    for u, v in P.graph.edges:
        for pu, pv in ((u, v), (v, u)):
            plan = _plan(P.graph, pins=(pu, pv))
            total += _count_maps(plan, g, (a, b), budget)
    assert total % P.aut_count == 0
    return total // P.aut_count


@dataclass(frozen=True)
class PlantedModel:
    """G(n, p) conditioned on a planted edge set being present.

    Edges of `planted` are present with probability 1, every other pair
    independently with probability p.
    """

    n: int
    p: float
    planted: SimpleGraph

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"p must lie strictly in (0, 1), got {self.p}")
        if self.planted.n > self.n:
            raise DomainError(
                f"planted graph on {self.planted.n} labels exceeds ambient n={self.n}"
            )


def _check_planted_budget(P: Pattern, model: PlantedModel, budget):
    if model.n**P.q > budget:
        raise BudgetExceededError(
            f"n**q = {model.n}**{P.q} exceeds planted-model budget {budget}"
        )


def _planted_injective_sum(P: Pattern, model: PlantedModel, pins: dict, budget) -> float:
    """Sum over injective maps (extending pins) of p**(#image edges missing
    from the planted graph). Exact up to floating accumulation.

    Expands the per-edge factor p + (1-p)*1[planted] over subsets of the
    pattern's edges; each subset contributes an injective matching count
    inside the planted graph times a falling factorial.
    """
    p = model.p
    n = model.n
    q = P.q
    planted = model.planted
    pedges = P.graph.edges
    e_h = len(pedges)
    pin_verts = tuple(sorted(pins))
    pin_imgs = tuple(pins[v] for v in pin_verts)
    if len(set(pin_imgs)) != len(pin_imgs):
        raise DomainError("pinned images must be distinct")
    total = 0.0
    state = [budget]  # one budget across all subset terms
    for bits in range(1 << e_h):
        subset = tuple(pedges[i] for i in range(e_h) if bits >> i & 1)
        touched = {v for e in subset for v in e} | set(pin_verts)
        t = len(touched)
        plan = _plan(P.graph, edge_subset=subset, pins=pin_verts)
        cnt = _count_maps(plan, planted, pin_imgs, budget, state)
        if cnt == 0:
            continue
        k = bits.bit_count()
        weight = p ** (e_h - k) * (1.0 - p) ** k
        total += weight * cnt * math.perm(n - t, q - t)
    return total


def planted_expectation(
    P: Pattern, model: PlantedModel, budget: int = DEFAULT_PLANTED_BUDGET
) -> float:
    """Expected number of pattern copies in the planted model.

    Equals the sum over all copies in the complete graph of p raised to the
    number of copy edges missing from the planted graph.
    """
    _check_planted_budget(P, model, budget)
    return _planted_injective_sum(P, model, {}, budget) / P.aut_count


def edge_rooted_expectation(
    P: Pattern, model: PlantedModel, f, budget: int = DEFAULT_PLANTED_BUDGET
) -> float:
    """Expected number of copies containing the planted edge f.

    Sum over copies through f of p**(#copy edges missing from the planted
    graph); f itself must be planted.
    """
    a, b = f
    if not model.planted.has_edge(a, b):
        raise EdgeAbsentError(f"edge {f} not present in planted graph")
    _check_planted_budget(P, model, budget)
    total = 0.0
    for u, v in P.graph.edges:
        for pu, pv in ((u, v), (v, u)):
            total += _planted_injective_sum(P, model, {pu: a, pv: b}, budget)
    return total / P.aut_count


def planted_edge_delta(
    P: Pattern, model: PlantedModel, f, budget: int = DEFAULT_PLANTED_BUDGET
):
    """Drop in conditional expectation when the planted edge f is released.

    Returns (delta, rooted) where rooted is the edge-rooted expectation of
    copies through f and delta = (1 - p) * rooted, the exact decrease
    E[planted] - E[planted minus f].
    """
    rooted = edge_rooted_expectation(P, model, f, budget)
    return (1.0 - model.p) * rooted, rooted


def edge_rooted_outside_sum(
    P: Pattern, model: PlantedModel, f, budget: int = DEFAULT_PLANTED_BUDGET
) -> float:
    """Expected number of copies through f that use at least one non-planted edge."""
    rooted = edge_rooted_expectation(P, model, f, budget)
    inside = count_copies_through_edge(P, model.planted, f, budget)
    return rooted - inside


# ---------------------------------------------------------------------------
# Exact probabilities over all labeled graphs (n <= 7).
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _edge_slots(n: int):
    """Row-major bit position for each pair, as a dict (u, v) -> bit."""
    slots = {}
    i = 0
    for u in range(n - 1):
        for v in range(u + 1, n):
            slots[(u, v)] = i
            i += 1
    return slots


@lru_cache(maxsize=32)
def _kn_copies(P: Pattern, n: int):
    """All copies of the pattern inside the complete graph on n vertices,
    as (bitmask, vertex frozenset) pairs."""
    from .graphs import complete_graph

    if n < P.q:
        return ()
    slots = _edge_slots(n)
    out = []
    for copy in iter_copies(P, complete_graph(n)):
        mask = 0
        for e in copy:
            mask |= 1 << slots[e]
        out.append((mask, frozenset(v for e in copy for v in e)))
    return tuple(out)


@lru_cache(maxsize=16)
def _all_masks(m_slots: int):
    arr = np.arange(1 << m_slots, dtype=np.uint32)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=16)
def _popcounts(m_slots: int):
    pc = np.bitwise_count(_all_masks(m_slots)).astype(np.uint8)
    pc.setflags(write=False)
    return pc


@lru_cache(maxsize=32)
def copy_count_array(P: Pattern, n: int) -> np.ndarray:
    """Pattern-copy count of every labeled graph on n vertices (n <= 7),
    indexed by the row-major edge bitmask."""
    if n > MAX_EXACT_N:
        raise TooLargeError(f"exact enumeration capped at n={MAX_EXACT_N}, got {n}")
    m_slots = n * (n - 1) // 2
    masks = _all_masks(m_slots)
    counts = np.zeros(len(masks), dtype=np.uint16)
    for cmask, _ in _kn_copies(P, n):
        cm = np.uint32(cmask)
        counts += ((masks & cm) == cm).astype(np.uint16)
    counts.setflags(write=False)
    return counts


def _union_find_components(items, vertex_sets):
    """Group item indices whose vertex sets overlap, transitively."""
    parent = list(range(len(items)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    by_vertex: dict = {}
    for i, vs in enumerate(vertex_sets):
        for v in vs:
            j = by_vertex.get(v)
            if j is None:
                by_vertex[v] = i
            else:
                ra, rb = find(i), find(j)
                if ra != rb:
                    parent[ra] = rb
    groups: dict = {}
    for i in range(len(items)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _connected_copy_subsets(copies, size, cap):
    """All size-element sets of copy indices whose overlap graph (copies
    sharing a vertex) restricted to the set is connected; each set once."""
    k = len(copies)
    nbrs = [set() for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            if copies[i][1] & copies[j][1]:
                nbrs[i].add(j)
                nbrs[j].add(i)
    out = []

    def grow(sub, frontier, forbidden, root):
        if len(sub) == size:
            out.append(tuple(sorted(sub)))
            if len(out) > cap:
                raise BudgetExceededError("connected copy-subset enumeration cap hit")
            return
        cand = sorted(frontier)
        for idx, w in enumerate(cand):
            # branches that skip cand[:idx] forbid them for good, so each
            # subset is produced exactly once
            forb = forbidden | set(cand[:idx])
            front = (frontier | {u for u in nbrs[w] if u > root}) - sub - forb - {w}
            grow(sub | {w}, front, forb, root)

    for root in range(k):
        grow({root}, {u for u in nbrs[root] if u > root}, set(), root)
    return out


@dataclass(frozen=True)
class CopiesAtLeast:
    """Event: the graph contains at least k copies of the pattern."""

    pattern: Pattern
    k: int

    def mask_array(self, n: int) -> np.ndarray:
        return copy_count_array(self.pattern, n) >= self.k

    def holds(self, g: SimpleGraph) -> bool:
        return count_copies(self.pattern, g) >= self.k


@dataclass(frozen=True)
class DisjointCopies:
    """Event: there are s pairwise vertex-disjoint copies of the pattern."""

    pattern: Pattern
    s: int
    family_cap: int = 500_000

    def _families(self, n: int):
        copies = _kn_copies(self.pattern, n)
        out = []

        def rec(start, chosen_masks, chosen_verts, left):
            if left == 0:
                out.append(tuple(chosen_masks))
                if len(out) > self.family_cap:
                    raise BudgetExceededError("disjoint-family enumeration cap hit")
                return
            for i in range(start, len(copies)):
                mask, vs = copies[i]
                if vs & chosen_verts:
                    continue
                rec(i + 1, chosen_masks + [mask], chosen_verts | vs, left - 1)

        rec(0, [], frozenset(), self.s)
        return out

    def mask_array(self, n: int) -> np.ndarray:
        m_slots = n * (n - 1) // 2
        masks = _all_masks(m_slots)
        if self.s <= 0:
            return np.ones(len(masks), dtype=bool)
        pred = np.zeros(len(masks), dtype=bool)
        unions = set()
        for fam in self._families(n):
            um = 0
            for mask in fam:
                um |= mask
            unions.add(np.uint32(um))
        for um in unions:
            pred |= (masks & um) == um
        return pred

    def holds(self, g: SimpleGraph) -> bool:
        if self.s <= 0:
            return True
        copies = [(c, frozenset(v for e in c for v in e)) for c in iter_copies(self.pattern, g)]

        def rec(start, chosen_verts, left):
            if left == 0:
                return True
            for i in range(start, len(copies)):
                _, vs = copies[i]
                if vs & chosen_verts:
                    continue
                if rec(i + 1, chosen_verts | vs, left - 1):
                    return True
            return False

        return rec(0, frozenset(), self.s)


@dataclass(frozen=True)
class HasSpannedWithCopies:
    """Event: some connected union of `count` distinct copies exists, i.e.
    the graph has a spanned subgraph spanned by that many copies."""

    pattern: Pattern
    count: int
    subset_cap: int = 500_000

    def mask_array(self, n: int) -> np.ndarray:
        m_slots = n * (n - 1) // 2
        masks = _all_masks(m_slots)
        if self.count <= 0:
            return np.ones(len(masks), dtype=bool)
        copies = _kn_copies(self.pattern, n)
        if self.count == 1:
            return CopiesAtLeast(self.pattern, 1).mask_array(n)
        pred = np.zeros(len(masks), dtype=bool)
        unions = set()
        for subset in _connected_copy_subsets(copies, self.count, self.subset_cap):
            um = 0
            for i in subset:
                um |= copies[i][0]
            unions.add(np.uint32(um))
        for um in unions:
            pred |= (masks & um) == um
        return pred

    def holds(self, g: SimpleGraph) -> bool:
        if self.count <= 0:
            return True
        copies = iter_copies(self.pattern, g)
        vsets = [frozenset(v for e in c for v in e) for c in copies]
        comps = _union_find_components(copies, vsets)
        return any(len(comp) >= self.count for comp in comps)


def _weights_by_popcount(m_slots: int, p: float) -> np.ndarray:
    """p**j * (1-p)**(m_slots - j) for j = 0..m_slots, computed in log space."""
    w = np.zeros(m_slots + 1)
    if p == 0.0:
        w[0] = 1.0
        return w
    if p == 1.0:
        w[m_slots] = 1.0
        return w
    lp, lq = math.log(p), math.log1p(-p)
    for j in range(m_slots + 1):
        w[j] = math.exp(j * lp + (m_slots - j) * lq)
    return w


def exact_probability(model, pred) -> float:
    """Exact probability of the event under G(n, p), by summing the weight
    p**m (1-p)**(C(n,2)-m) over all labeled graphs satisfying the predicate."""
    n = model.n
    if n > MAX_EXACT_N:
        raise TooLargeError(f"exact enumeration capped at n={MAX_EXACT_N}, got {n}")
    m_slots = n * (n - 1) // 2
    bits = pred.mask_array(n)
    pc = _popcounts(m_slots)
    cnt = np.bincount(pc[bits], minlength=m_slots + 1)
    w = _weights_by_popcount(m_slots, model.p)
    return float(np.dot(cnt.astype(np.float64), w))


def tail_probability_table(P: Pattern, n: int, p: float) -> np.ndarray:
    """P(copy count >= k) for k = 0..max over all labeled graphs; entry [k]."""
    if n > MAX_EXACT_N:
        raise TooLargeError(f"exact enumeration capped at n={MAX_EXACT_N}, got {n}")
    m_slots = n * (n - 1) // 2
    counts = copy_count_array(P, n)
    pc = _popcounts(m_slots)
    kmax = int(counts.max())
    hist = np.zeros((m_slots + 1, kmax + 1))
    np.add.at(hist, (pc, counts), 1.0)
    w = _weights_by_popcount(m_slots, p)
    mass_by_count = w @ hist  # probability of exactly j copies, j = 0..kmax
    tail = np.cumsum(mass_by_count[::-1])[::-1]
    return tail
