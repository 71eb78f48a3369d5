"""Graphs, subdivisions and thread arithmetic.

Vertex sets are handled internally as integer bitmasks over the graph's
vertex order; the public helpers accept and return plain name collections.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterable


class GraphError(ValueError):
    """Raised for malformed graphs or invalid subdivision parameters."""


class VertexClass(enum.Enum):
    BRANCH = "Branch"
    MIDPOINT = "Midpoint"
    NEAR_MIDPOINT = "NearMidpoint"
    INNER_OTHER = "InnerOther"


class Residue(enum.Enum):
    AT_BRANCH = "AtBranch"
    AT_MIDPOINT_ZONE = "AtMidpointZone"
    OTHER = "Other"


@dataclass(frozen=True)
class Branch:
    vertex: str


@dataclass(frozen=True)
class Inner:
    thread: tuple[str, str]  # canonical: thread[0] < thread[1]
    offset: int  # distance from thread[0]


def _bfs(adj: dict[str, tuple[str, ...]], source: str) -> dict[str, int]:
    seen = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen:
                seen[y] = seen[x] + 1
                queue.append(y)
    return seen


class Graph:
    """Finite simple connected undirected graph with all-pairs distances."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str]]):
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.edges: tuple[tuple[str, str], ...] = tuple(edges)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise GraphError("duplicate vertex name")
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at {u!r}")
            if u not in adj or v not in adj:
                raise GraphError(f"edge ({u!r}, {v!r}) uses an unknown vertex")
            key = frozenset((u, v))
            if key in seen:
                raise GraphError(f"duplicate edge ({u!r}, {v!r})")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        self.adj = {v: tuple(ns) for v, ns in adj.items()}
        self.dist = {v: _bfs(self.adj, v) for v in self.vertices}
        if self.vertices:
            missing = [v for v in self.vertices if v not in self.dist[self.vertices[0]]]
            if missing:
                raise GraphError(f"graph is disconnected: {missing[0]!r} unreachable from {self.vertices[0]!r}")
        self.diameter = max((max(row.values()) for row in self.dist.values()), default=0)

        n = len(self.vertices)
        self.full_mask = (1 << n) - 1
        self.closed_nbr_mask = []
        for v in self.vertices:
            mask = 1 << self.index[v]
            for w in self.adj[v]:
                mask |= 1 << self.index[w]
            self.closed_nbr_mask.append(mask)
        # layers[i][d]: vertices at distance d from vertex i
        self.layers: list[list[int]] = []
        for v in self.vertices:
            row = [0] * (self.diameter + 1)
            for w, d in self.dist[v].items():
                row[d] |= 1 << self.index[w]
            self.layers.append(row)

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.vertices == other.vertices
                and {frozenset(e) for e in self.edges} == {frozenset(e) for e in other.edges})

    def __hash__(self) -> int:
        return hash((self.vertices, frozenset(frozenset(e) for e in self.edges)))

    def __repr__(self) -> str:
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    # -- bitmask helpers -------------------------------------------------
    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for v in names:
            m |= 1 << self.index[v]
        return m

    def names(self, mask: int) -> frozenset[str]:
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(self.vertices[i])
            mask >>= 1
            i += 1
        return frozenset(out)

    def ordered(self, names: Iterable[str]) -> list[str]:
        return sorted(names, key=self.index.__getitem__)

    def expand_mask(self, mask: int) -> int:
        out = 0
        i = 0
        m = mask
        while m:
            if m & 1:
                out |= self.closed_nbr_mask[i]
            m >>= 1
            i += 1
        return out

    def is_branch(self, x: str) -> bool:
        return True

    def depth(self, x: str) -> int:
        """Distance from ``x`` to its nearest branch vertex."""
        return 0


class SubdividedGraph(Graph):
    """G^{1/m}: every edge of ``base`` replaced by a path of length ``m``.

    Inner vertices are named ``"u~v:k"`` with ``u < v`` and ``k`` the
    offset from ``u``.
    """

    def __init__(self, base: Graph, m: int):
        if m < 1:
            raise GraphError(f"subdivision parameter must be >= 1, got {m}")
        self.base = base
        self.m = m
        self.kind: dict[str, Branch | Inner] = {v: Branch(v) for v in base.vertices}
        vertices = list(base.vertices)
        edges = []
        for a, b in base.edges:
            u, v = (a, b) if a < b else (b, a)
            chain = [u]
            for k in range(1, m):
                name = inner_name(u, v, k)
                self.kind[name] = Inner((u, v), k)
                vertices.append(name)
                chain.append(name)
            chain.append(v)
            edges.extend(zip(chain, chain[1:]))
        super().__init__(vertices, edges)
        self.branch_vertices = tuple(base.vertices)
        self.branch_mask = self.mask(base.vertices)

    def __repr__(self) -> str:
        return f"SubdividedGraph(m={self.m}, {len(self.vertices)} vertices)"

    def is_branch(self, x: str) -> bool:
        return isinstance(self.kind[x], Branch)

    def depth(self, x: str) -> int:
        kind = self.kind[x]
        if isinstance(kind, Branch):
            return 0
        return min(kind.offset, self.m - kind.offset)

    def branch_of(self, v: str) -> str:
        """b = v^{1/m}; branch vertices keep their base names."""
        if v not in self.base.index:
            raise GraphError(f"{v!r} is not a base vertex")
        return v


def inner_name(u: str, v: str, k: int) -> str:
    return f"{u}~{v}:{k}"


def build_graph(edges: Iterable[tuple[str, str]], vertices: Iterable[str] | None = None) -> Graph:
    """Build a graph from an edge list; vertex order is first appearance.

    ``vertices`` may list isolated names up front (only meaningful for the
    one-vertex graph, since the result must be connected).
    """
    edges = [tuple(e) for e in edges]
    order: list[str] = list(vertices or [])
    for e in edges:
        if len(e) != 2:
            raise GraphError(f"edge {e!r} is not a pair")
    for u, v in edges:
        for x in (u, v):
            if not isinstance(x, str) or not x:
                raise GraphError(f"vertex name {x!r} must be a non-empty string")
            if "," in x:
                raise GraphError(f"vertex name {x!r} may not contain ','")
            if x not in order:
                order.append(x)
    if not order:
        raise GraphError("empty graph")
    return Graph(order, edges)


def subdivide(g: Graph, m: int) -> SubdividedGraph:
    return SubdividedGraph(g, m)


def as_subdivided(g: Graph) -> SubdividedGraph:
    """View any graph as its own trivial subdivision (m = 1)."""
    if isinstance(g, SubdividedGraph):
        return g
    return SubdividedGraph(g, 1)


def classify(sg: SubdividedGraph, x: str) -> VertexClass:
    kind = sg.kind[x]
    if isinstance(kind, Branch):
        return VertexClass.BRANCH
    near = min(kind.offset, sg.m - kind.offset)
    if 2 * kind.offset == sg.m:
        return VertexClass.MIDPOINT
    if sg.m % 2 == 1 and near == (sg.m - 1) // 2:
        return VertexClass.NEAR_MIDPOINT
    return VertexClass.INNER_OTHER


def vicinity(sg: SubdividedGraph, x: str) -> frozenset[str]:
    """Branch vertices nearest to ``x`` (measured in the subdivided graph)."""
    row = sg.dist[x]
    best = min(row[b] for b in sg.branch_vertices)
    return frozenset(b for b in sg.branch_vertices if row[b] == best)


def corr_end(sg: SubdividedGraph, x: str) -> frozenset[str]:
    """Base vertices at the two ends of the thread holding ``x``."""
    kind = sg.kind[x]
    if isinstance(kind, Branch):
        return frozenset((kind.vertex,))
    return frozenset(kind.thread)


def residue_class(d: int, m: int) -> Residue:
    """What a branch-vertex probe result says about the robber's offset.

    The residue of ``d`` mod ``m`` is the robber's offset from the thread
    endpoint the shortest path enters through, so ``min(r, m - r)`` is its
    distance to the nearest branch vertex.
    """
    if m <= 1:
        raise GraphError("residue classes need m >= 2")
    if d < 0:
        raise GraphError("distance must be non-negative")
    r = d % m
    if r == 0:
        return Residue.AT_BRANCH
    if min(r, m - r) == m // 2:
        return Residue.AT_MIDPOINT_ZONE
    return Residue.OTHER


def residue_depth(d: int, m: int) -> int:
    r = d % m
    return min(r, m - r)
