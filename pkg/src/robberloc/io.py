"""JSON files: graphs, strategy tables, strategy graphs.

Output is always ``sort_keys`` + two-space indent so repeated runs are
byte-identical.
"""
from __future__ import annotations

import json
from pathlib import Path

from .graph import Graph, GraphError, build_graph
from .strategy import StrategyTable
from .strategy_graph import StrategyGraph


class GraphFileError(GraphError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def graph_to_json(g: Graph) -> dict:
    return {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges]}


def graph_from_json(data, where: str = "<graph>") -> Graph:
    if not isinstance(data, dict):
        raise GraphFileError(f"{where}: top level must be an object with 'vertices' and 'edges'")
    unknown = set(data) - {"vertices", "edges"}
    if unknown:
        raise GraphFileError(f"{where}: unexpected key {sorted(unknown)[0]!r}")
    vertices = data.get("vertices", [])
    edges = data.get("edges")
    if edges is None:
        raise GraphFileError(f"{where}: missing 'edges'")
    if not isinstance(vertices, list):
        raise GraphFileError(f"{where}: 'vertices' must be a list")
    if not isinstance(edges, list):
        raise GraphFileError(f"{where}: 'edges' must be a list")
    for i, v in enumerate(vertices):
        if not isinstance(v, str) or not v:
            raise GraphFileError(f"{where}: vertices[{i}] must be a non-empty string, got {v!r}")
        if "," in v:
            raise GraphFileError(f"{where}: vertices[{i}] {v!r} may not contain ','")
    for i, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)):
            raise GraphFileError(f"{where}: edges[{i}] must be a pair of vertex names, got {e!r}")
        if vertices:
            for x in e:
                if x not in vertices:
                    raise GraphFileError(f"{where}: edges[{i}] uses undeclared vertex {x!r}")
    try:
        g = build_graph([tuple(e) for e in edges], vertices=vertices)
    except GraphError as exc:
        raise GraphFileError(f"{where}: {exc}") from None
    return g


def loads_graph(text: str, where: str = "<graph>") -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"{where}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return graph_from_json(data, where)


def load_graph(path) -> Graph:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise GraphFileError(f"{path}: {exc.strerror}") from None
    return loads_graph(text, str(path))


def save_graph(g: Graph, path) -> None:
    Path(path).write_text(dumps(graph_to_json(g)))


def load_strategy(path) -> StrategyTable:
    return StrategyTable.from_json(json.loads(Path(path).read_text()))


def save_strategy(table: StrategyTable, path) -> None:
    Path(path).write_text(dumps(table.to_json()))


def load_strategy_graph(path) -> StrategyGraph:
    return StrategyGraph.from_json(json.loads(Path(path).read_text()))


def save_strategy_graph(h: StrategyGraph, path) -> None:
    Path(path).write_text(dumps(h.to_json()))
