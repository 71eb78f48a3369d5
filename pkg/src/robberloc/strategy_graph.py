"""Cop Strategy Graphs: construction, finiteness, restricted reduction, export."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .game import RestrictedRobberRules, Semantics, partition_mask
from .graph import Graph, SubdividedGraph
from .strategy import StateKey, StrategyTable, StrategyUndefined, key_string, set_string

DEFAULT_DEPTH_BUDGET = 200


@dataclass
class Node:
    id: int
    extended: frozenset  # for a leaf: the located position
    round: int  # probe round of an inner node; location round of a leaf
    depth: int
    phase: int | None = None
    parent: int | None = None
    answer: tuple | None = None  # label on the edge from the parent
    probes: tuple | None = None
    leaf: bool = False
    children: dict = field(default_factory=dict)  # answer vector -> node id

    @property
    def key(self) -> StateKey:
        return (self.extended, self.phase)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "set": set_string(self.extended),
            "round": self.round,
            "depth": self.depth,
            "phase": self.phase,
            "parent": self.parent,
            "answer": None if self.answer is None else list(self.answer),
            "probes": None if self.probes is None else list(self.probes),
            "leaf": self.leaf,
        }


@dataclass
class StrategyGraph:
    nodes: list
    eta: int | None = None  # set when stride levels are assigned

    @property
    def root(self) -> Node:
        return self.nodes[0]

    def __len__(self) -> int:
        return len(self.nodes)

    def leaves(self) -> list:
        return [n for n in self.nodes if n.leaf]

    def capture_time(self) -> int:
        return max((n.depth for n in self.nodes if n.leaf), default=0)

    def stride_level(self, node: Node) -> int:
        if self.eta is None:
            raise ValueError("graph has no stride levels assigned")
        return -(-node.round // self.eta)

    def descendants(self, node_id: int) -> list[int]:
        out = []
        stack = [node_id]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(self.nodes[x].children.values())
        return out

    def to_json(self) -> dict:
        return {"eta": self.eta, "nodes": [n.to_json() for n in self.nodes]}

    @classmethod
    def from_json(cls, data: dict) -> "StrategyGraph":
        nodes = []
        for d in data["nodes"]:
            nodes.append(Node(
                id=d["id"],
                extended=frozenset(x for x in d["set"].split(",") if x),
                round=d["round"], depth=d["depth"], phase=d["phase"], parent=d["parent"],
                answer=None if d["answer"] is None else tuple(d["answer"]),
                probes=None if d["probes"] is None else tuple(d["probes"]),
                leaf=d["leaf"],
            ))
        for n in nodes:
            if n.parent is not None:
                nodes[n.parent].children[n.answer] = n.id
        return cls(nodes, data.get("eta"))


@dataclass
class Divergence:
    """Build stopped without reaching leaves on every branch."""

    reason: str  # "cycle" or "budget"
    witness: list  # state keys along the offending root path
    partial: StrategyGraph

    def describe(self) -> str:
        path = " -> ".join(key_string(k) for k in self.witness)
        if self.reason == "cycle":
            return f"state repeats along a root path: {path}"
        return f"depth budget reached along: {path}"


def build(strategy: StrategyTable, arena: Graph, depth_budget: int = DEFAULT_DEPTH_BUDGET,
          rules: RestrictedRobberRules | None = None) -> StrategyGraph | Divergence:
    """Breadth-first expansion of H(A) as a tree.

    Singleton answer parts become leaves; other parts are expanded by the
    robber's move and become children.  A child whose state already appears
    on its root path proves the tree infinite.
    """
    sem = Semantics(arena, rules)
    X0, ph0 = sem.initial()
    nodes = [Node(0, arena.names(X0), 0, 0, ph0)]
    graph = StrategyGraph(nodes, rules.eta if rules else None)
    if X0 & (X0 - 1) == 0:
        nodes[0].leaf = True
        return graph
    masks = {0: X0}
    queue = deque([0])
    while queue:
        nid = queue.popleft()
        node = nodes[nid]
        probes = strategy[node.key]
        node.probes = tuple(probes)
        idx = [arena.index[p] for p in probes]
        for ans, R in partition_mask(arena, masks[nid], idx):
            if R & (R - 1) == 0:
                leaf = Node(len(nodes), arena.names(R), node.round, node.depth + 1, node.phase,
                            nid, ans, leaf=True)
                nodes.append(leaf)
                node.children[ans] = leaf.id
                continue
            X, ph = sem.advance(R, node.phase)
            if not X:
                continue
            if X & (X - 1) == 0:
                # the move itself pins the robber down (restricted play)
                leaf = Node(len(nodes), arena.names(X), node.round + 1, node.depth + 1, ph, nid, ans, leaf=True)
                nodes.append(leaf)
                node.children[ans] = leaf.id
                continue
            child = Node(len(nodes), arena.names(X), node.round + 1, node.depth + 1, ph, nid, ans)
            nodes.append(child)
            node.children[ans] = child.id
            masks[child.id] = X
            path = _root_path(graph, child.id)
            if child.key in path[:-1]:
                start = path.index(child.key)
                return Divergence("cycle", path[start:], graph)
            if child.depth > depth_budget:
                return Divergence("budget", path, graph)
            queue.append(child.id)
    return graph


def _root_path(h: StrategyGraph, nid: int) -> list:
    out = []
    x = nid
    while x is not None:
        out.append(h.nodes[x].key)
        x = h.nodes[x].parent
    return out[::-1]


def is_cop_winning(h: StrategyGraph | Divergence) -> bool | None:
    """True for a finite graph, False on a cycle witness, None when only the budget stopped the build."""
    if isinstance(h, StrategyGraph):
        return True
    if h.reason == "cycle":
        return False
    return None


def round_index(t: int, eta: int) -> int:
    """Round index inside a stride; round 0 counts as a stride end."""
    return eta if t == 0 else (t - 1) % eta + 1


def reduce_restricted(h: StrategyGraph, arena: SubdividedGraph, rules: RestrictedRobberRules) -> StrategyGraph:
    """Drop positions the restricted robber cannot occupy; prune emptied subtrees."""
    rules.check_arena(arena)
    keep: dict[int, int] = {}
    nodes: list[Node] = []
    for old in h.nodes:  # parents precede children in id order
        if old.parent is not None and old.parent not in keep:
            continue
        j = round_index(old.round, rules.eta)
        allowed = rules.allowed_depths(j)
        ext = frozenset(x for x in old.extended if arena.depth(x) in allowed)
        if not ext:
            continue
        parent = keep.get(old.parent) if old.parent is not None else None
        node = Node(len(nodes), ext, old.round, old.depth, j, parent, old.answer, old.probes, old.leaf)
        keep[old.id] = node.id
        nodes.append(node)
        if parent is not None:
            nodes[parent].children[old.answer] = node.id
    return StrategyGraph(nodes, rules.eta)


def subtree(h: StrategyGraph, node_id: int, levels) -> set[int]:
    if h.eta is None:
        raise ValueError("subtree queries need stride levels (build with restricted rules)")
    levels = set(levels)
    return {x for x in h.descendants(node_id) if h.stride_level(h.nodes[x]) in levels}


def export_dot(h: StrategyGraph) -> str:
    lines = ["digraph H {", "  node [shape=box];"]
    for n in h.nodes:
        label = set_string(n.extended)
        if n.probes is not None:
            label += "\\nprobe " + ",".join(n.probes)
        shape = ' shape=doublecircle' if n.leaf else ''
        lines.append(f'  n{n.id} [label="{label}"{shape}];')
    for n in h.nodes:
        if n.parent is not None:
            lines.append(f'  n{n.parent} -> n{n.id} [label="{",".join(map(str, n.answer))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
