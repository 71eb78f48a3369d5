import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robberloc.cop_translation import (ResultStore, ThreadGeometry, TranslationError, deduce_and_update,
                                       deduce_round_moves, deduce_round_stays, probe_plan, run_multicop_game,
                                       probe_bound)
from robberloc.corpus import path
from robberloc.game import Adversarial, RestrictedRobberRules, Scripted
from robberloc.graph import build_graph, corr_end, subdivide
from robberloc.solver import decide_localizable, subdivision_number
from robberloc.strategy_graph import StrategyGraph, build


def restricted(g, eta):
    sg = subdivide(g, eta)
    rules = RestrictedRobberRules(eta)
    h = build(decide_localizable(sg, 1, rules=rules).strategy, sg, rules=rules)
    assert isinstance(h, StrategyGraph)
    return sg, h


def test_moves_example(G5):
    sg = subdivide(G5, 2)
    geom = ThreadGeometry.of(sg, "A~B:1")
    assert (geom.a, geom.b, geom.da, geom.db) == ("A", "B", 1, 1)
    entry = (G5.dist["B"]["A"], G5.dist["B"]["B"], G5.dist["D"]["A"], G5.dist["D"]["B"])
    assert entry == (1, 0, 2, 1)
    assert deduce_round_moves(entry, 1, geom, 2) == 2 == sg.dist["B~D:1"]["A~B:1"]


def test_stays_example(G5):
    sg = subdivide(G5, 2)
    geom = ThreadGeometry.of(sg, "A~B:1")
    assert deduce_round_stays((1, 0, 1, 0), geom, 2) == 1 == sg.dist["B"]["A~B:1"]
    b = ThreadGeometry.of(sg, "B")
    assert deduce_round_stays((2, 0, 2, 0), b, 2) == 0


def test_moves_onto_branch_probe(G5):
    sg = subdivide(G5, 3)
    geom = ThreadGeometry.of(sg, "D")
    entry = (G5.dist["B"]["D"], G5.dist["B"]["D"], 0, 0)
    assert deduce_round_moves(entry, 3, geom, 3) == 0


def test_moves_along_own_thread():
    g = build_graph([("A", "B"), ("B", "C"), ("C", "A")])
    sg = subdivide(g, 4)
    geom = ThreadGeometry.of(sg, "A~B:3")
    entry = (0, 1, 1, 0)  # robber walks A -> B
    for j in range(1, 5):
        here = "B" if j == 4 else f"A~B:{j}"
        assert deduce_round_moves(entry, j, geom, 4) == sg.dist[here]["A~B:3"]


@pytest.mark.parametrize("args,want", [((1, 1, 1), 32), ((4, 2, 3), 82944), ((3, 2, 1), 3 * 256)])
def test_bound(args, want):
    assert probe_bound(*args) == want


def test_bound_is_exact_for_large_inputs():
    # the leading factor is the least c with c^eta >= 2^capt
    for capt, eta in [(60, 7), (99, 3), (64, 8), (1, 5)]:
        b = probe_bound(capt, eta, 1)
        assert b % 16 ** eta == 0
        c = b // 16 ** eta
        assert c ** eta >= 2 ** capt > (c - 1) ** eta


def test_bound_rejects_zero():
    with pytest.raises(ValueError):
        probe_bound(0, 1, 1)


def test_plan_from_root_covers_everything(G5):
    sg, h = restricted(G5, 2)
    levels = {h.stride_level(n) for n in h.nodes}
    want = set()
    for n in h.nodes:
        for x in (n.extended if n.leaf else n.probes):
            want |= corr_end(sg, x)
    assert probe_plan([0], h, levels, sg) == want


def test_plan_of_branch_probes_is_their_images(G5):
    sg, h = restricted(G5, 1)
    for n in h.nodes:
        if not n.leaf:
            lv = {h.stride_level(n)}
            below = [h.nodes[c] for c in n.children.values()]
            want = set(n.probes) | {x for c in below if c.leaf and h.stride_level(c) in lv for x in c.extended}
            assert probe_plan([n.id], h, lv, sg) >= set(n.probes)
            assert probe_plan([n.id], h, lv, sg) <= set(G5.vertices)
            assert want <= probe_plan([n.id], h, lv, sg)


def test_plan_rejects_unknown_state(G5):
    sg, h = restricted(G5, 1)
    with pytest.raises(TranslationError):
        probe_plan([999], h, {0}, sg)


def _full(g, x):
    return dict(g.dist[x])


def test_update_branching(G5):
    sg, h = restricted(G5, 1)
    inner = [n for n in h.nodes if not n.leaf and n.round >= 1]
    assert inner
    for n in inner:
        moved = deduce_and_update(ResultStore(_full(G5, "B"), _full(G5, "D")), h, n.id, sg, 1)
        stayed = deduce_and_update(ResultStore(_full(G5, "B"), _full(G5, "B")), h, n.id, sg, 1)
        assert len(moved) <= 1 and len(stayed) <= 2


def test_missing_store_entry(G5):
    sg, h = restricted(G5, 2)
    node = next(n for n in h.nodes if not n.leaf)
    with pytest.raises(TranslationError):
        deduce_and_update(ResultStore({}, {}), h, node.id, sg, 2)


def test_single_vertex():
    g = path(1)
    _, h = restricted(g, 1)
    res = run_multicop_game(h, g, 1, Adversarial(), 3)
    assert res.located and res.rounds == 0


def test_g5_eta1(G5):
    _, h = restricted(G5, 1)
    capt = h.capture_time()
    bound = probe_bound(capt, 1, G5.diameter)
    res = run_multicop_game(h, G5, 1, Adversarial(), math.ceil(capt) + 1, bound)
    assert res.located and not res.violations
    assert res.max_probes <= bound


def test_k3(K3):
    eta = subdivision_number(K3, 4).value
    _, h = restricted(K3, eta)
    res = run_multicop_game(h, K3, eta, Adversarial(), math.ceil(h.capture_time() / eta) + 1)
    assert res.located and all(t and len(t[-1].robber_set) == 1 for t in res.traces)


def test_eta_mismatch(G5):
    _, h = restricted(G5, 2)
    with pytest.raises(TranslationError):
        run_multicop_game(h, G5, 3, Adversarial(), 5)


def _tree(seed, n):
    r = random.Random(seed)
    return build_graph([(f"t{i}", f"t{r.randrange(i)}") for i in range(1, n)])


def _spider(legs, length):
    edges = []
    for a in range(legs):
        prev = "c"
        for k in range(length):
            edges.append((prev, f"l{a}_{k}"))
            prev = f"l{a}_{k}"
    return build_graph(edges)


LARGER = [_spider(5, 3), _tree(1, 16), _tree(3, 16), _tree(4, 16),
          build_graph([(f"v{i}", f"v{(i + 1) % 8}") for i in range(8)])]
_prepared = {}


def _prepared_for(i):
    if i not in _prepared:
        g = LARGER[i]
        eta = subdivision_number(g, 3).value
        _prepared[i] = (g, eta) + restricted(g, eta)
    return _prepared[i]


@pytest.mark.parametrize("i", range(len(LARGER)))
def test_larger_adversarial(i):
    g, eta, _, h = _prepared_for(i)
    capt = h.capture_time()
    bound = probe_bound(capt, eta, g.diameter)
    res = run_multicop_game(h, g, eta, Adversarial(), math.ceil(capt / eta) + 1, bound)
    assert res.located and not res.violations


@settings(max_examples=80, deadline=None)
@given(st.integers(0, len(LARGER) - 1), st.randoms(use_true_random=False))
def test_true_mock_is_never_dropped(i, rnd):
    g, eta, _, h = _prepared_for(i)
    w = [rnd.choice(g.vertices)]
    for _ in range(8):
        w.append(rnd.choice((w[-1],) + g.adj[w[-1]]))
    res = run_multicop_game(h, g, eta, Scripted(w), math.ceil(h.capture_time() / eta) + 1)
    assert res.located and not res.violations
    final = res.traces[0][-1]
    assert final.robber_set == {w[min(final.round, len(w) - 1)]}
