import itertools
import random

import pytest

from eqcut.cutgraph import CutGraph, RequestList
from eqcut.djmc import (
    ListMeasure,
    compute_rv,
    family_mu,
    family_mu2,
    family_nu,
    list_satisfied,
    shadow_cover,
    simplify,
    solve_djmc,
)
from eqcut.oracles import djmc_cost


def test_measures():
    lst = RequestList.of(("a", "b"), ("c",))
    m = ListMeasure.of(lst)
    assert (m.mu1, m.mu2, m.mu, m.nu) == (1, 1, 4, 3)
    assert m.mu == len(lst) + 2 * m.mu2
    assert family_mu([lst]) == 4 and family_nu([lst]) == 3
    assert family_mu([]) == 0


def test_shadow_cover_contract():
    g = CutGraph.build("xabt", [("x", "a"), ("a", "b"), ("b", "t")])
    covers = list(shadow_cover(g, ["x"], 2))
    assert covers
    for cover in covers:
        assert cover.contract_ok(g, ["x"])
    # Y = empty on a connected graph: empty shadow
    first = covers[0]
    assert first.transversal == frozenset() and first.s_set == frozenset()


def test_compute_rv_cases():
    g = CutGraph.build(["x", "a", "b", "c"], [("x", "a"), ("a", "b")])
    assert compute_rv(g, set(), ["x"], "c") == frozenset()
    assert compute_rv(g, set(), ["x"], "a") == frozenset({"a"})
    assert compute_rv(g, {"b"}, ["x"], "b") == frozenset({"b"})
    assert compute_rv(g, {"x", "a"}, ["x"], "b") == frozenset({"a"})
    # an R_v drawn from a shadow boundary separates x from v
    g2 = CutGraph.build(["x", "p", "q", "v"],
                        [("x", "p"), ("p", "q"), ("q", "v")])
    rv = compute_rv(g2, {"x", "p"}, ["x"], "v")
    assert rv == frozenset({"p"})


def test_simplify_branch_invariants():
    g = CutGraph.build(["s", "m", "t", "u"],
                       [("s", "m"), ("m", "t"), ("t", "u")])
    lists = [RequestList.of(("s", "t"), ("u",)), RequestList.of(("s", "u"))]
    mu_in = family_mu(lists)
    nu_in = family_nu(lists)
    branches = list(simplify(g, lists, 2))
    assert branches
    for br in branches:
        assert len(br.graph.vertices) <= len(g.vertices)
        assert family_nu(br.lists) <= nu_in
        if br.lists:
            assert family_mu(br.lists) <= mu_in - 1
        assert len(br.lists) <= 4 * len(lists)
        assert br.budget == 4


def test_solve_djmc_examples():
    g = CutGraph.build("ab", [("a", "b")])
    assert solve_djmc(g, [], 1).accepted
    g2 = CutGraph.build("sabt", [("s", "a"), ("a", "b"), ("b", "t")])
    lists = [RequestList.of(("s", "t"))]
    res = solve_djmc(g2, lists, 1)
    assert res.accepted and all(list_satisfied(g2, res.solution, l)
                                for l in lists)
    # pure hitting set endgame
    g3 = CutGraph.build("abc", [])
    hs = [RequestList.of(("a",), ("b",)), RequestList.of(("b",), ("c",))]
    res = solve_djmc(g3, hs, 1)
    assert res.accepted and res.solution == frozenset({"b"})
    assert not solve_djmc(g3, [RequestList.of(("a",)),
                               RequestList.of(("b",))], 1).accepted


def test_solve_djmc_contract_random():
    rng = random.Random(31)
    for _ in range(40):
        n = rng.randint(4, 9)
        vs = [f"v{i}" for i in range(n)]
        edges = [(u, v) for u, v in itertools.combinations(vs, 2)
                 if rng.random() < 0.3]
        g = CutGraph.build(vs, edges)
        d = rng.choice([1, 2])
        lists = []
        for _ in range(rng.randint(1, 3)):
            pairs = []
            for _ in range(rng.randint(1, d)):
                if rng.random() < 0.25:
                    pairs.append((rng.choice(vs),))
                else:
                    pairs.append(tuple(rng.sample(vs, 2)))
            lists.append(RequestList.of(*pairs))
        k = rng.randint(0, 2)
        opt = djmc_cost(g, lists)
        res = solve_djmc(g, lists, k)
        if opt is not None and opt <= k:
            assert res.accepted
        if res.accepted:
            assert all(list_satisfied(g, res.solution, l) for l in lists)


def test_solve_djmc_undeletable_singletons():
    g = CutGraph.build("ab", [], undeletable={"a"})
    res = solve_djmc(g, [RequestList.of(("a",))], 3)
    assert not res.accepted
