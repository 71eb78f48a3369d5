"""Small-graph corpus: one connected graph per isomorphism class, plus named examples."""
from __future__ import annotations

import itertools
from functools import lru_cache

from .graph import Graph, build_graph

NAMES = "abcdefgh"


def _connected(n: int, edges) -> bool:
    adj = {i: set() for i in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x] - seen:
            seen.add(y)
            stack.append(y)
    return len(seen) == n


def _canonical(n: int, edges) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        form = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges))
        if best is None or form < best:
            best = form
    return best


@lru_cache(maxsize=None)
def connected_graphs(max_n: int = 5) -> tuple[tuple[str, Graph], ...]:
    """All connected simple graphs on 1..max_n vertices up to isomorphism.

    Brute force over edge subsets with a permutation-minimal canonical form;
    fine up to 6 vertices.
    """
    out = [("n1_0", build_graph([], vertices=["a"]))]
    for n in range(2, max_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        forms = set()
        for r in range(n - 1, len(pairs) + 1):
            for edges in itertools.combinations(pairs, r):
                if not _connected(n, edges):
                    continue
                forms.add(_canonical(n, edges))
        for i, form in enumerate(sorted(forms, key=lambda f: (len(f), f))):
            g = build_graph([(NAMES[u], NAMES[v]) for u, v in form], vertices=NAMES[:n])
            out.append((f"n{n}_{i}", g))
    return tuple(out)


def g5() -> Graph:
    """Five-vertex tree matching the worked one-cop example."""
    return build_graph([("C", "A"), ("A", "B"), ("B", "D"), ("B", "E")])


def complete(n: int) -> Graph:
    return build_graph(list(itertools.combinations(NAMES[:n], 2)), vertices=NAMES[:n])


def path(n: int) -> Graph:
    return build_graph(list(zip(NAMES[:n], NAMES[1:n])), vertices=NAMES[:n])
