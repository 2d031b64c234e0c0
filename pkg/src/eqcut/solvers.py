"""Parameterized solvers: bounded hitting-set branching, strict Steiner
multicut, the Steiner 2-approximation outer loop, and the branching
algorithms for strictly negative languages with assignment constraints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .cutgraph import (
    CutGraph,
    components,
    min_vertex_separator,
    multiway_cut,
    separates,
)
from .instances import Constraint, MinCspInstance
from .relations import is_strictly_negative


def hitting_set_branch(sets: Sequence[Iterable], k: int) -> Optional[frozenset]:
    """A hitting set of size <= k by branching on a smallest unhit set."""
    fams = [frozenset(s) for s in sets]
    if any(not s for s in fams):
        return None

    def rec(live: list[frozenset], budget: int) -> Optional[frozenset]:
        if not live:
            return frozenset()
        if budget == 0:
            return None
        pick = min(live, key=len)
        for e in sorted(pick):
            rest = [s for s in live if e not in s]
            sub = rec(rest, budget - 1)
            if sub is not None:
                return sub | {e}
        return None

    return rec(fams, k)


# ---------------------------------------------------------------------------
# Strict Steiner Multicut


@dataclass
class StrictSteinerStats:
    max_depth: int = 0
    flows: list = field(default_factory=list)
    monotone: bool = True


def _tset_satisfied(g: CutGraph, cut: Iterable[str], tset: Sequence[str]) -> bool:
    cut = set(cut)
    return any(separates(g, cut, a, b)
               for a, b in itertools.combinations(sorted(set(tset)), 2))


def strict_steiner(g: CutGraph, hub: str, t_sets: Sequence[Iterable[str]],
                   k: int, stats: Optional[StrictSteinerStats] = None
                   ) -> Optional[frozenset]:
    """Minimum multicut of size <= k avoiding the hub, assuming deleting the
    hub alone satisfies every terminal set.

    Branches on the terminals of an unsatisfied set, recomputing the closest
    minimum hub-side separator; its flow value strictly increases with depth.
    """
    t_sets = [sorted(set(ts)) for ts in t_sets]
    for ts in t_sets:
        if not _tset_satisfied(g, {hub}, ts):
            raise ValueError("the hub does not satisfy every terminal set")
    best: Optional[frozenset] = None

    def rec(y: frozenset, depth: int, prev_flow: int):
        nonlocal best
        w = min_vertex_separator(g, hub, sorted(y), limit=k, cut_targets=True,
                                 forbidden={hub})
        if w is None:
            return
        if stats is not None:
            stats.max_depth = max(stats.max_depth, depth)
            stats.flows.append((depth, len(w)))
            if depth > 0 and len(w) <= prev_flow:
                stats.monotone = False
        assert depth == 0 or len(w) > prev_flow, \
            "closest-separator flow must grow along a branch"
        if len(w) > k:
            return
        unsat = [ts for ts in t_sets if not _tset_satisfied(g, w, ts)]
        if not unsat:
            if best is None or len(w) < len(best):
                best = w
            return
        for t in unsat[0]:
            if t == hub or t in y:
                continue
            rec(y | {t}, depth + 1, len(w))

    rec(frozenset(), 0, -1)
    return best


def strict_steiner_opt(g: CutGraph, hub: str, t_sets: Sequence[Iterable[str]],
                       k: int) -> Optional[frozenset]:
    """Smallest strict-Steiner cut of size <= k (ascending-budget wrapper)."""
    for budget in range(k + 1):
        out = strict_steiner(g, hub, t_sets, budget)
        if out is not None:
            return out
    return None


# ---------------------------------------------------------------------------
# Steiner Multicut 2-approximation


def _steiner_feasible(g: CutGraph, cut: Iterable[str],
                      t_sets: Sequence[Iterable[str]]) -> bool:
    cut = set(cut)
    if any(not g.deletable(v) for v in cut):
        return False
    return all(_tset_satisfied(g, cut, ts) for ts in t_sets)


def _partitions_of(items: Sequence) -> Iterable[list[list]]:
    if not items:
        yield []
        return
    first, rest = items[0], list(items[1:])
    for part in _partitions_of(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [first]] + part[i + 1:]
        yield part + [[first]]


def _greedy_feasible(g: CutGraph, t_sets) -> Optional[frozenset]:
    """One deletable member per unsatisfied terminal set, pruned minimal."""
    chosen: set = set()
    for ts in t_sets:
        if _tset_satisfied(g, chosen, ts):
            continue
        pick = next((v for v in ts if g.deletable(v)), None)
        if pick is None:
            return None
        chosen.add(pick)
    for v in sorted(chosen):
        if _steiner_feasible(g, chosen - {v}, t_sets):
            chosen.discard(v)
    return frozenset(chosen)


def steiner_2approx(g: CutGraph, t_sets: Sequence[Iterable[str]], k: int,
                    initial: Optional[frozenset] = None
                    ) -> Optional[frozenset]:
    """Accept with a feasible cut of size <= 2*OPT when OPT <= k, reject
    (returning None) when no budget b <= k admits one.

    Compression guessing: split a feasible set X into the deleted part W and
    a partition of X - W into intended components; contract classes, compute
    an exact multiway cut, and finish each piece with strict Steiner cuts.
    Any feasible start works; a greedy member-per-set choice keeps the guess
    space small, with the brute-force oracle as desk-scale fallback.
    """
    t_sets = [sorted(set(ts)) for ts in t_sets]
    if _steiner_feasible(g, frozenset(), t_sets):
        return frozenset()
    if initial is None:
        initial = _greedy_feasible(g, t_sets)
    if initial is None:
        from .oracles import steiner_multicut_vertex_opt

        initial = steiner_multicut_vertex_opt(g, t_sets)
    if initial is None:
        return None

    for b in range(k + 1):
        out = _steiner_compress(g, t_sets, list(initial), b)
        if out is not None:
            assert _steiner_feasible(g, out, t_sets)
            assert len(out) <= 2 * b
            return out
    return None


def _steiner_compress(g: CutGraph, t_sets, x_list: list[str], b: int
                      ) -> Optional[frozenset]:
    best: Optional[frozenset] = None
    for w_size in range(min(len(x_list), b) + 1):
        for w in itertools.combinations(x_list, w_size):
            w = frozenset(w)
            rest = [v for v in x_list if v not in w]
            g1 = g.without(w)
            live_sets = [ts for ts in t_sets
                         if not _tset_satisfied(g, w, ts)]
            for partition in _partitions_of(rest):
                out = _steiner_guess(g1, live_sets, partition, b - len(w))
                if out is not None:
                    cand = w | out
                    if best is None or len(cand) < len(best):
                        best = cand
    return best


def _steiner_guess(g1: CutGraph, t_sets, partition: list[list[str]], budget: int
                   ) -> Optional[frozenset]:
    """Contract the guessed classes, cut them apart, and solve each component
    as a strict-Steiner instance around its contracted hub."""
    if budget < 0:
        return None
    rename: dict = {}
    hubs = []
    g2 = g1
    for i, cls in enumerate(partition):
        hub = f"#hub{i}"
        hubs.append(hub)
        g2 = g2.identify(cls, hub)
        for v in cls:
            rename[v] = hub
    mapped_sets = []
    for ts in t_sets:
        mts = sorted({rename.get(v, v) for v in ts})
        if len(mts) == 1 and mts[0] in hubs:
            return None  # the guess merged a whole terminal set
        mapped_sets.append(mts)
    g2 = g2.make_undeletable(hubs)
    m = multiway_cut(g2, hubs, budget) if len(hubs) > 1 else frozenset()
    if m is None:
        return None
    g3 = g2.without(m)
    comp_of: dict = {}
    for ci, comp in enumerate(components(g3)):
        for v in comp:
            comp_of[v] = ci
    live = [ts for ts in mapped_sets if not _tset_satisfied(g2, m, ts)]
    by_comp: dict = {}
    for ts in live:
        cids = {comp_of[v] for v in ts if v in comp_of}
        if len(cids) != 1:
            continue  # split across components: already satisfied
        by_comp.setdefault(cids.pop(), []).append(ts)
    total: set = set(m)
    remaining = budget
    for ci, sets_here in sorted(by_comp.items()):
        hub_here = [h for h in hubs if comp_of.get(h) == ci]
        if len(hub_here) != 1:
            return None  # terminal sets stranded away from any hub
        sub_vertices = [v for v, c in comp_of.items() if c == ci]
        sub = CutGraph(
            tuple(sub_vertices),
            g3.undeletable & frozenset(sub_vertices),
            {e: mm for e, mm in g3.edges.items()
             if e <= frozenset(sub_vertices)},
        )
        try:
            cut = strict_steiner_opt(sub, hub_here[0], sets_here, remaining)
        except ValueError:
            return None
        if cut is None:
            return None
        total |= cut
        remaining -= len(cut)
        if remaining < 0:
            return None
    return frozenset(total)


# ---------------------------------------------------------------------------
# Strictly negative languages with assignment constraints


def _tentative_violation(inst: MinCspInstance) -> Optional[Constraint]:
    """Violated relation constraint under the canonical assignment that obeys
    every remaining assignment constraint and spreads other variables out."""
    from .instances import Assignment, _constraint_violated

    value: dict = {}
    for c in inst.constraints:
        if c.is_assignment():
            value[c.scope[0]] = ("const", c.value)
    fresh = 0
    for v in inst.variables:
        if v not in value:
            value[v] = ("fresh", fresh)
            fresh += 1
    a = Assignment(value)
    for c in inst.constraints:
        if not c.is_assignment() and _constraint_violated(c, a):
            return c
    return None


def _conflicting_assignments(inst: MinCspInstance) -> Optional[str]:
    by_var: dict = {}
    for c in inst.constraints:
        if c.is_assignment():
            by_var.setdefault(c.scope[0], set()).add(c.value)
    for v, vals in by_var.items():
        if len(vals) > 1:
            return v
    return None


def negative_fpt_solve(inst: MinCspInstance, k: int) -> bool:
    """Branching decision procedure for strictly negative relations plus
    assignment constraints: resolve contradictory assignments, then branch on
    a constraint violated by the tentative assignment."""
    for c in inst.constraints:
        if not c.is_assignment() and not is_strictly_negative(c.relation):
            raise ValueError(f"relation {c.relation.name} is not strictly negative")

    def rec(cur: MinCspInstance, budget: int) -> bool:
        if budget < 0:
            return False
        crisp_vals: dict = {}
        for c in cur.constraints:
            if c.is_assignment() and c.kind == "crisp":
                crisp_vals.setdefault(c.scope[0], set()).add(c.value)
        if any(len(vals) > 1 for vals in crisp_vals.values()):
            return False

        v = _conflicting_assignments(cur)
        if v is not None:
            vals = sorted({c.value for c in cur.constraints
                           if c.is_assignment() and c.scope[0] == v})
            for keep in vals:
                drop = [c for c in cur.constraints
                        if c.is_assignment() and c.scope[0] == v
                        and c.value != keep]
                if any(c.kind == "crisp" for c in drop):
                    continue
                cost = sum(c.multiplicity for c in drop)
                if cost <= budget and rec(cur.with_constraints(
                        [c for c in cur.constraints if c not in drop]),
                        budget - cost):
                    return True
            return False

        bad = _tentative_violation(cur)
        if bad is None:
            return True
        # branch: the violated constraint goes, or one scope variable's
        # assignments go
        if bad.kind == "soft" and bad.multiplicity <= budget:
            rest = list(cur.constraints)
            rest.remove(bad)
            if rec(cur.with_constraints(rest), budget - bad.multiplicity):
                return True
        for x in dict.fromkeys(bad.scope):
            drop = [c for c in cur.constraints
                    if c.is_assignment() and c.scope[0] == x]
            if not drop or any(c.kind == "crisp" for c in drop):
                continue
            cost = sum(c.multiplicity for c in drop)
            if cost <= budget and rec(cur.with_constraints(
                    [c for c in cur.constraints if c not in drop]),
                    budget - cost):
                return True
        return False

    return rec(inst, k)


def negative_approx(inst: MinCspInstance) -> tuple[int, list[Constraint]]:
    """Factor-r(Gamma) approximation: clean up contradictory assignments by
    majority, then repeatedly delete a violated constraint together with one
    assignment copy per scope variable.  Returns (cost, deleted constraints)."""
    deleted: list[Constraint] = []
    work = list(inst.constraints)

    def assigned(values: list[Constraint], var: str) -> list[Constraint]:
        return [c for c in values if c.is_assignment() and c.scope[0] == var]

    changed = True
    while changed:
        changed = False
        by_var: dict = {}
        for c in work:
            if c.is_assignment():
                by_var.setdefault(c.scope[0], {}).setdefault(c.value, []).append(c)
        for v, groups in by_var.items():
            if len(groups) <= 1:
                continue
            crisp_vals = [val for val, cs in groups.items()
                          if any(c.kind == "crisp" for c in cs)]
            if len(crisp_vals) > 1:
                raise ValueError("contradictory crisp assignments")
            if crisp_vals:
                best_val = crisp_vals[0]
            else:
                best_val = max(groups, key=lambda val: sum(
                    c.multiplicity for c in groups[val]))
            m1 = sum(c.multiplicity for val, cs in groups.items()
                     if val != best_val for c in cs)
            m2 = sum(c.multiplicity for c in groups[best_val]
                     if c.kind == "soft")
            for val, cs in groups.items():
                if val != best_val:
                    for c in cs:
                        work.remove(c)
                        deleted.append(c)
            from dataclasses import replace

            surplus = min(m1, m2)
            for c in list(groups[best_val]):
                if surplus <= 0:
                    break
                if c.kind == "crisp":
                    continue
                take = min(surplus, c.multiplicity)
                work.remove(c)
                if take < c.multiplicity:
                    work.append(replace(c, multiplicity=c.multiplicity - take))
                deleted.append(Constraint(c.relation, c.scope, c.kind, take,
                                          c.value))
                surplus -= take
            changed = True

    from dataclasses import replace

    while True:
        cur = MinCspInstance.build(inst.name, work, inst.variables)
        bad = _tentative_violation(cur)
        if bad is None:
            break
        if bad.kind == "crisp":
            # the relation itself cannot go: unassign the cheapest variable
            choices = []
            for x in dict.fromkeys(bad.scope):
                copies = [c for c in work
                          if c.is_assignment() and c.scope[0] == x]
                if copies and all(c.kind == "soft" for c in copies):
                    choices.append((sum(c.multiplicity for c in copies), x, copies))
            if not choices:
                raise ValueError("crisp constraint conflicts with crisp assignments")
            _, x, copies = min(choices)
            for c in copies:
                work.remove(c)
                deleted.append(c)
            continue
        work.remove(bad)
        deleted.append(bad)
        for x in dict.fromkeys(bad.scope):
            for c in list(work):
                if c.is_assignment() and c.scope[0] == x and c.kind == "soft":
                    work.remove(c)
                    if c.multiplicity > 1:
                        work.append(replace(c, multiplicity=c.multiplicity - 1))
                    deleted.append(Constraint(None, c.scope, c.kind, 1, c.value))
                    break
    cost = sum(c.multiplicity for c in deleted)
    return cost, deleted
