import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CORPUS
from robberloc.game import Adversarial, Scripted
from robberloc.graph import VertexClass, classify, subdivide, vicinity
from robberloc.solver import decide_localizable, localization_number
from robberloc.subs_translation import (RESTART, AdmissionError, MidpointResidueError, check_all_walks,
                                        deduce_case, deduce_distance, run_subdivision_game, strategic_probe)


@pytest.fixture
def g5_table(G5):
    return decide_localizable(G5, 1).strategy


def test_deduce_examples(G5):
    sg = subdivide(G5, 3)
    one_from_a = "A~B:1"
    one_from_b = "A~B:2"
    assert sg.dist["C"][one_from_a] == 4 and deduce_distance(4, 3) == 1 == G5.dist["C"]["A"]
    assert sg.dist["C"][one_from_b] == 5 and deduce_distance(5, 3) == 2 == G5.dist["C"]["B"]
    assert deduce_case(4, 3) == 1 and deduce_case(5, 3) == 2
    for m in (2, 3, 4):
        assert deduce_distance(0, m) == 0


@pytest.mark.parametrize("d,m", [(1, 2), (3, 2), (2, 4), (6, 4)])
def test_deduce_rejects_ties(d, m):
    with pytest.raises(MidpointResidueError):
        deduce_distance(d, m)


@st.composite
def probe_cases(draw):
    _, g = draw(st.sampled_from([c for c in CORPUS if len(c[1]) > 1]))
    m = draw(st.integers(2, 6))
    sg = subdivide(g, m)
    p = draw(st.sampled_from(sg.branch_vertices))
    x = draw(st.sampled_from(sg.vertices))
    return g, sg, p, x


@settings(max_examples=200, deadline=None)
@given(probe_cases())
def test_deduce_matches_bfs(case):
    g, sg, p, x = case
    if classify(sg, x) is VertexClass.MIDPOINT:
        return
    (w,) = vicinity(sg, x)
    d = sg.dist[p][x]
    assert deduce_distance(d, sg.m) == g.dist[p][w]


def test_strategic_probe():
    readings = iter([5, 6])
    assert strategic_probe(["C", "D"], 4, lambda p: next(readings)) == RESTART
    readings = iter([5, 11, 0])
    assert strategic_probe(["C", "D", "E"], 4, lambda p: next(readings)) == [1, 3, 0]
    # with m = 3 every inner reading is in the zone
    assert strategic_probe(["C"], 3, lambda p: 4) == RESTART


def test_admission(K3):
    table = decide_localizable(K3, 2).strategy
    with pytest.raises(AdmissionError, match="2\\*zeta"):
        run_subdivision_game(table, K3, 3, Adversarial(), 10)
    assert run_subdivision_game(table, K3, 4, Adversarial(), 200).located


def test_thread_stayer_found_in_sweep(G5, g5_table):
    res = run_subdivision_game(g5_table, G5, 2, Scripted(["A~C:1"]), 80)
    assert res.located and all(r.stage == 1 for r in res.trace)


def test_branch_walker_uses_mirrored_block(G5, g5_table):
    walk = ["D", "B~D:1", "B", "A~B:1", "A"]
    res = run_subdivision_game(g5_table, G5, 2, Scripted(walk), 80)
    assert res.located and not res.violations
    # once a block starts, its first probe is the multiple-cop root probe
    stage2 = [r for r in res.trace if r.stage == 2]
    assert stage2 and stage2[0].probe == "C"


def test_every_stationary_robber(G5, g5_table):
    for x in subdivide(G5, 2).vertices:
        res = run_subdivision_game(g5_table, G5, 2, Scripted([x]), 80)
        assert res.located and not res.violations, x


def test_all_walks_g5(G5, g5_table):
    rep = check_all_walks(g5_table, G5, 2, horizon=12, max_rounds=80)
    assert rep.ok and rep.walks_checked > 0


def test_single_vertex():
    from robberloc.corpus import path
    g = path(1)
    table = decide_localizable(g, 1).strategy
    assert run_subdivision_game(table, g, 2, Adversarial(), 5).rounds == 0


_SMALL = [(n, g) for n, g in CORPUS if len(g) > 1]


@st.composite
def subdivided_walks(draw):
    name, g = draw(st.sampled_from(_SMALL))
    z = localization_number(g, 2)
    if z.value is None:
        return None
    m = 2 * z.value
    sg = subdivide(g, m)
    w = [draw(st.sampled_from(sg.vertices))]
    for _ in range(draw(st.integers(0, 6 * m))):
        w.append(draw(st.sampled_from((w[-1],) + sg.adj[w[-1]])))
    return g, z.verdicts[z.value].strategy, m, z.value, w


@settings(max_examples=60, deadline=None)
@given(subdivided_walks())
def test_random_walks_located(case):
    if case is None:
        return
    g, table, m, zeta, w = case
    res = run_subdivision_game(table, g, m, Scripted(w), 40 * m, zeta=zeta)
    assert res.located, w
    assert not res.violations
    for t, r in enumerate(res.trace):
        assert w[min(t, len(w) - 1)] in r.robber_set
