import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CORPUS
from robberloc import io as rio
from robberloc.solver import decide_localizable
from robberloc.strategy import StrategyTable, make_key
from robberloc.strategy_graph import StrategyGraph, build


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(CORPUS))
def test_graph_round_trip(named):
    _, g = named
    assert rio.loads_graph(rio.dumps(rio.graph_to_json(g))) == g


def test_graph_file(tmp_path, G5):
    p = tmp_path / "g.json"
    rio.save_graph(G5, p)
    assert rio.load_graph(p) == G5
    assert json.loads(p.read_text()) == {"vertices": ["C", "A", "B", "D", "E"],
                                         "edges": [["C", "A"], ["A", "B"], ["B", "D"], ["B", "E"]]}


def test_parse_error_has_position():
    with pytest.raises(rio.GraphFileError, match=r"g\.json:2:\d+"):
        rio.loads_graph('{"edges": [\n  ["a" "b"]]}', "g.json")


@pytest.mark.parametrize("text,msg", [
    ('{"edges": [["a", "b"], ["b"]]}', r"edges\[1\]"),
    ('{"vertices": ["a", 3], "edges": []}', r"vertices\[1\]"),
    ('{"vertices": ["a"], "edges": [["a", "z"]]}', "undeclared"),
    ('{"edges": [["a", "b"]], "extra": 1}', "unexpected key"),
    ('[1, 2]', "top level"),
    ('{"edges": [["a", "b"], ["c", "d"]]}', "disconnected"),
])
def test_element_diagnostics(text, msg):
    with pytest.raises(rio.GraphFileError, match=msg):
        rio.loads_graph(text)


def test_strategy_table_round_trip(tmp_path, K3):
    table = decide_localizable(K3, 2).strategy
    rio.save_strategy(table, tmp_path / "s.json")
    assert rio.load_strategy(tmp_path / "s.json") == table
    phased = StrategyTable({make_key(["a", "b"], 2): ["a"]})
    assert StrategyTable.from_json(phased.to_json()) == phased


def test_strategy_graph_round_trip(tmp_path, G5):
    h = build(decide_localizable(G5, 1).strategy, G5)
    rio.save_strategy_graph(h, tmp_path / "h.json")
    back = rio.load_strategy_graph(tmp_path / "h.json")
    assert back.to_json() == h.to_json()
    assert isinstance(back, StrategyGraph)
    assert back.root.children == h.root.children
