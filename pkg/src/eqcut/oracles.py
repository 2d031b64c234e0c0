"""Exhaustive reference solvers for the cut problems, used as ground truth.

Everything here enumerates subsets outright and is only meant for desk-scale
verification of the real algorithms and reductions.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Optional, Sequence

from .cutgraph import CutGraph, RequestList, TripleSet, components, reachable, separates


def _deletable_vertices(g: CutGraph) -> list[str]:
    return [v for v in g.vertices if g.deletable(v)]


def edge_multicut_opt(g: CutGraph, requests: Sequence[tuple[str, str]]
                      ) -> Optional[int]:
    """Minimum number of edge deletions (counting multiplicity) separating
    every request pair, or None if impossible."""
    edges = sorted(g.edges, key=sorted)

    def ok(removed: set) -> bool:
        kept = {e: m for e, m in g.edges.items() if e not in removed}
        gg = CutGraph(g.vertices, g.undeletable, kept)
        return all(t not in reachable(gg, [s]) for s, t in requests if s != t)

    if any(s == t for s, t in requests):
        return None
    for size in range(len(edges) + 1):
        best = None
        for removed in itertools.combinations(edges, size):
            if ok(set(removed)):
                cost = sum(g.edges[e] for e in removed)
                if best is None or cost < best:
                    best = cost
        if best is not None:
            # a smaller-cardinality set can never have larger cost than
            # needed; still scan one more size in case multiplicities differ
            costs = [best]
            for extra in range(size + 1, len(edges) + 1):
                for removed in itertools.combinations(edges, extra):
                    if ok(set(removed)):
                        costs.append(sum(g.edges[e] for e in removed))
            return min(costs)
    return None


def vertex_multicut_opt(g: CutGraph, requests: Sequence[tuple[str, str]]
                        ) -> Optional[frozenset]:
    dels = _deletable_vertices(g)
    for size in range(len(dels) + 1):
        for removed in itertools.combinations(dels, size):
            cut = set(removed)
            if all(separates(g, cut, s, t) for s, t in requests):
                return frozenset(cut)
    return None


def multiway_cut_opt(g: CutGraph, terminals: Sequence) -> Optional[frozenset]:
    groups = [frozenset({t}) if isinstance(t, str) else frozenset(t)
              for t in terminals]
    pairs = [(a, b)
             for (i, grp1), (j, grp2) in itertools.combinations(enumerate(groups), 2)
             for a in grp1 for b in grp2 if i != j]
    dels = [v for v in _deletable_vertices(g)
            if all(v not in grp for grp in groups)]
    for size in range(len(dels) + 1):
        for removed in itertools.combinations(dels, size):
            cut = set(removed)
            if all(t not in reachable(g, [s], cut) for s, t in pairs):
                return frozenset(cut)
    return None


def all_min_separators(g: CutGraph, s: str, targets: Sequence[str],
                       cut_targets: bool = True) -> list[frozenset]:
    """All minimum s-target separators (vertex sets), by subset enumeration."""
    dels = [v for v in _deletable_vertices(g) if v != s]
    if not cut_targets:
        dels = [v for v in dels if v not in targets]
    for size in range(len(dels) + 1):
        found = [
            frozenset(rm) for rm in itertools.combinations(dels, size)
            if all(separates(g, set(rm), s, t) for t in targets)
        ]
        if found:
            return found
    return []


def steiner_multicut_vertex_opt(g: CutGraph, t_sets: Sequence[Iterable[str]],
                                forbidden: Iterable[str] = ()
                                ) -> Optional[frozenset]:
    """Minimum vertex set satisfying every terminal set (some pair in each
    set separated, membership counts)."""
    forbidden = set(forbidden)
    dels = [v for v in _deletable_vertices(g) if v not in forbidden]

    def satisfied(cut: set) -> bool:
        for ts in t_sets:
            ts = list(ts)
            if not any(separates(g, cut, a, b)
                       for a, b in itertools.combinations(ts, 2)):
                return False
        return True

    for size in range(len(dels) + 1):
        for removed in itertools.combinations(dels, size):
            if satisfied(set(removed)):
                return frozenset(removed)
    return None


def steiner_multicut_edge_opt(g: CutGraph, t_sets: Sequence[Iterable[str]]
                              ) -> Optional[int]:
    """Minimum edge-deletion cost separating some pair inside every set."""
    edges = sorted(g.edges, key=sorted)

    def satisfied(removed: set) -> bool:
        kept = {e: m for e, m in g.edges.items() if e not in removed}
        gg = CutGraph(g.vertices, g.undeletable, kept)
        for ts in t_sets:
            ts = list(ts)
            if not any(b not in reachable(gg, [a])
                       for a, b in itertools.combinations(ts, 2)):
                return False
        return True

    best = None
    for size in range(len(edges) + 1):
        for removed in itertools.combinations(edges, size):
            if satisfied(set(removed)):
                cost = sum(g.edges[e] for e in removed)
                if best is None or cost < best:
                    best = cost
        if best is not None and best <= size:
            return best
    return best


def djmc_cost(g: CutGraph, lists: Sequence[RequestList]) -> Optional[int]:
    """Minimum size of a deletable vertex set satisfying every request list."""
    dels = _deletable_vertices(g)

    def satisfied(cut: set) -> bool:
        for lst in lists:
            if not any(
                (len(p) == 1 and next(iter(p)) in cut)
                or (len(p) == 2 and separates(g, cut, *sorted(p)))
                for p in lst.pairs
            ):
                return False
        return True

    for size in range(len(dels) + 1):
        for removed in itertools.combinations(dels, size):
            if satisfied(set(removed)):
                return size
    return None


def triple_multicut_feasible(g: CutGraph, triples: TripleSet,
                             z_v: Iterable[str], z_t: Iterable[frozenset]) -> bool:
    z_v, z_t = set(z_v), set(z_t)
    if any(not g.deletable(v) for v in z_v):
        return False
    comp_of: dict = {}
    for i, comp in enumerate(components(g, z_v)):
        for v in comp:
            comp_of[v] = i
    for tri, _m in triples:
        if tri in z_t:
            continue
        survivors = [comp_of[v] for v in tri if v in comp_of]
        if len(survivors) != len(set(survivors)):
            return False
    return True


def triple_multicut_opt(g: CutGraph, triples: TripleSet) -> Optional[int]:
    """Minimum |Z_V| + cost(Z_T) over all feasible deletion pairs."""
    dels = _deletable_vertices(g)
    tri_list = list(triples)
    best = None
    for nv in range(len(dels) + 1):
        for z_v in itertools.combinations(dels, nv):
            for nt in range(len(tri_list) + 1):
                for chosen in itertools.combinations(tri_list, nt):
                    cost = nv + sum(m for _t, m in chosen)
                    if best is not None and cost >= best:
                        continue
                    if triple_multicut_feasible(
                            g, triples, z_v, [t for t, _ in chosen]):
                        best = cost
    return best


def hitting_set_opt(sets: Sequence[Iterable], universe: Iterable = ()
                    ) -> Optional[frozenset]:
    elems = sorted({x for s in sets for x in s} | set(universe))
    fams = [set(s) for s in sets]
    if any(not s for s in fams):
        return None
    for size in range(len(elems) + 1):
        for chosen in itertools.combinations(elems, size):
            cs = set(chosen)
            if all(s & cs for s in fams):
                return frozenset(cs)
    return None
