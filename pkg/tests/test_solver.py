import pytest

from conftest import CORPUS
from oracle import capture_time
from robberloc.corpus import complete, path
from robberloc.solver import (BUDGET_EXCEEDED, NOT_WINNING, NotWinningError, decide_localizable, extract_strategy,
                              localization_number, subdivision_number)
from robberloc.strategy import make_key


def test_g5(G5):
    v = decide_localizable(G5, 1)
    assert v.winning and v.capture_time == 2
    assert v.strategy[make_key(G5.vertices)] == ("C",)


def test_k3(K3):
    assert decide_localizable(K3, 1).status == NOT_WINNING
    v = decide_localizable(K3, 2)
    assert v.winning and v.capture_time == 1
    a, b = v.strategy[make_key(K3.vertices)]
    assert a != b


def test_path3_endpoint_probe(P3):
    # an endpoint separates all three vertices at once
    v = decide_localizable(P3, 1)
    assert v.winning and v.capture_time == 1


def test_single_vertex():
    g = path(1)
    v = decide_localizable(g, 1)
    assert v.winning and v.capture_time == 0 and len(v.strategy) == 0
    assert localization_number(g, 3).value == 1


def test_parameters(G5, K3):
    assert localization_number(G5, 3).value == 1
    assert localization_number(K3, 3).value == 2
    assert localization_number(path(3), 3).value == 1
    assert subdivision_number(G5, 3).value == 1
    eta = subdivision_number(K3, 4)
    assert eta.value == 3
    assert [eta.verdicts[m].status for m in (1, 2)] == [NOT_WINNING, NOT_WINNING]


def test_complete_graphs():
    assert localization_number(complete(4), 4).value == 3
    assert localization_number(complete(5), 5).value == 4


def test_budget(G5):
    v = decide_localizable(G5, 1, budget=1)
    assert v.status == BUDGET_EXCEEDED
    res = localization_number(G5, 2, budget=1)
    assert res.budget_exceeded and res.value is None


def test_extract_rejects_losing(K3):
    with pytest.raises(NotWinningError):
        extract_strategy(K3, 1)


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("name", [n for n, _ in CORPUS])
def test_capture_time_matches_recursion(name, k):
    g = dict(CORPUS)[name]
    v = decide_localizable(g, k)
    want = capture_time(g.adj, k, horizon=6)
    assert (v.capture_time if v.winning else None) == want


def test_deterministic(G5):
    a = decide_localizable(G5, 2).strategy.to_json()
    b = decide_localizable(G5, 2).strategy.to_json()
    assert a == b
