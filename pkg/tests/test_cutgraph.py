import itertools
import random

import pytest

from eqcut.cutgraph import (
    CutGraph,
    RequestList,
    TripleSet,
    closest_min_separator,
    components,
    important_separators,
    min_vertex_separator,
    multiway_cut,
    reachable,
    separates,
    shadow,
)
from eqcut.oracles import (
    all_min_separators,
    multiway_cut_opt,
    vertex_multicut_opt,
)


def test_components():
    g = CutGraph.build("abc", [("a", "b"), ("b", "c")])
    assert {frozenset(c) for c in components(g, {"b"})} == \
        {frozenset({"a"}), frozenset({"c"})}
    assert components(g) == [frozenset({"a", "b", "c"})]
    star = CutGraph.build(["c", "l1", "l2", "l3"],
                          [("c", "l1"), ("c", "l2"), ("c", "l3")])
    assert sorted(len(c) for c in components(star, {"c"})) == [1, 1, 1]
    gu = g.make_undeletable(["b"])
    with pytest.raises(ValueError):
        components(gu, {"b"})


def test_min_separator_examples():
    g = CutGraph.build("sat", [("s", "a"), ("a", "t")])
    assert min_vertex_separator(g, "s", ["t"]) == frozenset({"a"})
    g2 = CutGraph.build(["s", "a", "b", "t"],
                        [("s", "a"), ("a", "t"), ("s", "b"), ("b", "t")])
    assert len(min_vertex_separator(g2, "s", ["t"])) == 2
    g3 = CutGraph.build(["s", "t"], [("s", "t")], undeletable={"t"})
    assert min_vertex_separator(g3, "s", ["t"]) is None
    g4 = CutGraph.build(["s", "t"], [("s", "t")])
    assert min_vertex_separator(g4, "s", ["t"], cut_targets=True) == \
        frozenset({"t"})


def test_closest_min_separator_examples():
    g = CutGraph.build("vxyw", [("v", "x"), ("x", "y"), ("y", "w")])
    assert closest_min_separator(g, "v", ["w"]) == frozenset({"x"})
    g2 = CutGraph.build(["v", "w"], [])
    assert closest_min_separator(g2, "v", ["w"]) == frozenset()
    g3 = CutGraph.build(["v", "w"], [("v", "w")])
    with pytest.raises(ValueError):
        closest_min_separator(g3, "v", ["w"])


def test_closest_min_separator_random():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(4, 10)
        vs = [f"v{i}" for i in range(n)]
        edges = [(u, v) for u, v in itertools.combinations(vs, 2)
                 if rng.random() < 0.3]
        g = CutGraph.build(vs, edges)
        s, t = rng.sample(vs, 2)
        seps = all_min_separators(g, s, [t], cut_targets=False)
        if not seps:
            with pytest.raises(ValueError):
                closest_min_separator(g, s, [t])
            continue
        mine = closest_min_separator(g, s, [t])
        assert mine in seps
        side = reachable(g, [s], mine)
        for other in seps:
            assert side <= reachable(g, [s], other)


def test_shadow():
    g = CutGraph.build("abct", [("a", "b"), ("b", "c"), ("c", "t")])
    assert shadow(g, {"c"}, {"t"}) == {"a", "b"}
    assert shadow(g, set(), {"t"}) == set()
    assert shadow(g, set(), set()) == {"a", "b", "c", "t"}


def test_important_separators_examples():
    gp = CutGraph.build("xay", [("x", "a"), ("a", "y")])
    assert important_separators(gp, ["x"], ["y"], 2) == [frozenset({"a"})]
    gp2 = CutGraph.build("xaby", [("x", "a"), ("a", "b"), ("b", "y")])
    assert important_separators(gp2, ["x"], ["y"], 1) == [frozenset({"b"})]
    assert important_separators(gp, ["x"], ["y"], 0) == []


def _important_oracle(g, xs, ys, k):
    xset, yset = set(xs), set(ys)
    dels = [v for v in g.vertices
            if g.deletable(v) and v not in xset and v not in yset]
    seps = []
    for size in range(0, k + 1):
        for rm in itertools.combinations(dels, size):
            cut = set(rm)
            if any(y in reachable(g, xs, cut) for y in ys):
                continue
            if any(not any(y in reachable(g, xs, cut - {v}) for y in ys)
                   for v in cut):
                continue
            seps.append(frozenset(cut))
    out = []
    for s in seps:
        rs = reachable(g, xs, s)
        if any(len(o) <= len(s) and o != s and rs < reachable(g, xs, o)
               for o in seps):
            continue
        if any(len(o) < len(s) and reachable(g, xs, o) == rs for o in seps):
            continue
        out.append(s)
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def test_important_separators_random_exact():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(3, 7)
        vs = [f"v{i}" for i in range(n)]
        edges = [(u, v) for u, v in itertools.combinations(vs, 2)
                 if rng.random() < 0.4]
        g = CutGraph.build(vs, edges)
        x, y = rng.sample(vs, 2)
        k = rng.randint(0, 3)
        mine = sorted(important_separators(g, [x], [y], k),
                      key=lambda s: (len(s), sorted(s)))
        want = _important_oracle(g, [x], [y], k)
        assert mine == want
        assert len(mine) <= 4 ** max(k, 1)


def test_multiway_cut_examples():
    g = CutGraph.build(["t1", "t2", "t3", "m"],
                       [("t1", "m"), ("t2", "m"), ("t3", "m")])
    assert multiway_cut(g, ["t1", "t2", "t3"], 1) == frozenset({"m"})
    g2 = CutGraph.build(["t1", "t2"], [])
    assert multiway_cut(g2, ["t1", "t2"], 0) == frozenset()


def test_multiway_cut_random_optimal():
    rng = random.Random(13)
    for _ in range(50):
        n = rng.randint(4, 10)
        vs = [f"v{i}" for i in range(n)]
        edges = [(u, v) for u, v in itertools.combinations(vs, 2)
                 if rng.random() < 0.32]
        ts = rng.sample(vs, min(3, n))
        g = CutGraph.build(vs, edges).make_undeletable(ts)
        opt = multiway_cut_opt(g, ts)
        mine = multiway_cut(g, ts, 4)
        if opt is not None and len(opt) <= 4:
            assert mine is not None and len(mine) == len(opt)
        else:
            assert mine is None


def test_graph_plumbing():
    g = CutGraph.build("ab", [("a", "b", 2)])
    assert g.edges[frozenset({"a", "b"})] == 2
    h = g.identify(["a", "b"], "ab")
    assert h.vertices == ("ab",) and not h.edges
    with pytest.raises(ValueError):
        CutGraph.build("a", [("a", "a")])
    assert separates(g, {"a"}, "a", "b")
    assert not separates(g, set(), "a", "b")
    ts = TripleSet.of(("a", "b", "c"), (("a", "b", "c"), 2))
    assert list(ts) == [(frozenset({"a", "b", "c"}), 3)]
    rl = RequestList.of(("a", "b"), ("c",))
    assert len(rl) == 2 and rl.vertices() == {"a", "b", "c"}


def test_vertex_multicut_oracle_sanity():
    g = CutGraph.build("sabt", [("s", "a"), ("a", "t"), ("s", "b"), ("b", "t")])
    cut = vertex_multicut_opt(g, [("s", "t")])
    assert cut is not None and len(cut) in (1, 2)
