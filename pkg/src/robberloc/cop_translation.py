"""Playing many cops on G by mocking a restricted one-cop game on G^{1/eta}.

Every real robber step u -> v in G is mirrored by a mock robber walking the
thread u' -> v' (or standing on u') over the eta rounds of one stride.  The
mock's probe results are rebuilt from real distances to the two thread ends
of each planned probe, taken before and after the step.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .game import RobberModel, Scripted, partition_mask
from .graph import Branch, Graph, SubdividedGraph, corr_end, subdivide
from .strategy import set_string
from .strategy_graph import StrategyGraph, subtree


class TranslationError(RuntimeError):
    pass


@dataclass(frozen=True)
class ThreadGeometry:
    a: str
    b: str
    da: int  # offset of the probe from a
    db: int  # offset of the probe from b

    @classmethod
    def of(cls, sg: SubdividedGraph, p: str) -> "ThreadGeometry":
        kind = sg.kind[p]
        if isinstance(kind, Branch):
            return cls(p, p, 0, 0)
        a, b = kind.thread
        return cls(a, b, kind.offset, sg.m - kind.offset)


def deduce_round_moves(entry: tuple[int, int, int, int], j: int, geom: ThreadGeometry, eta: int) -> int:
    """Distance from the mock robber, j steps from u' toward v', to the probe.

    ``entry`` holds the real distances (u->a, u->b, v->a, v->b).  Besides
    the four routes through a thread end on each side, a probe on the very
    thread being walked is reached directly along it.
    """
    uA, uB, vA, vB = entry
    best = min(j + eta * uA + geom.da, j + eta * uB + geom.db,
               (eta - j) + eta * vA + geom.da, (eta - j) + eta * vB + geom.db)
    if geom.a != geom.b:
        if uA == 0 and vB == 0:
            best = min(best, abs(j - geom.da))
        elif uB == 0 and vA == 0:
            best = min(best, abs(j - geom.db))
    return best


def deduce_round_stays(entry: tuple[int, int, int, int], geom: ThreadGeometry, eta: int) -> int:
    uA, uB, _, _ = entry
    return min(eta * uA + geom.da, eta * uB + geom.db)


def probe_bound(capt: int, eta: int, delta: int) -> int:
    """ceil(2^(capt/eta)) * 16^eta * delta^(2 eta), computed exactly."""
    if min(capt, eta, delta) < 1:
        raise ValueError("capt, eta and delta must all be >= 1")
    target = 2 ** capt
    c = max(1, int(2 ** (capt / eta)) - 1)
    while c ** eta < target:
        c += 1
    return c * 16 ** eta * delta ** (2 * eta)


def probe_plan(states, h: StrategyGraph, levels, sg: SubdividedGraph) -> set[str]:
    """Base vertices to probe: thread ends of every planned probe and every terminating location."""
    plan: set[str] = set()
    for nid in states:
        if nid >= len(h.nodes):
            raise TranslationError(f"state {nid} is not a node of the strategy graph")
        for x in subtree(h, nid, levels):
            node = h.nodes[x]
            if node.leaf:
                for r in node.extended:
                    plan |= corr_end(sg, r)
            else:
                for p in node.probes:
                    plan |= corr_end(sg, p)
    return plan


@dataclass
class ResultStore:
    """Real distances from the robber to probed base vertices, previous and current round."""

    prev: dict
    cur: dict

    def entry(self, geom: ThreadGeometry) -> tuple[int, int, int, int]:
        try:
            return (self.prev[geom.a], self.prev[geom.b], self.cur[geom.a], self.cur[geom.b])
        except KeyError as exc:
            raise TranslationError(f"thread end {exc.args[0]} was not probed in both rounds") from None

    def differs(self) -> bool:
        return any(self.prev[x] != self.cur[x] for x in self.prev.keys() & self.cur.keys())


def _advance(h: StrategyGraph, sg: SubdividedGraph, nid: int, store: ResultStore, moves: bool,
             eta: int) -> int | None:
    """Feed one stride of deduced results into H; None when the mock dies or terminates."""
    node = h.nodes[nid]
    for j in range(1, eta + 1):
        if node.leaf:
            return None
        answers = []
        for p in node.probes:
            geom = ThreadGeometry.of(sg, p)
            e = store.entry(geom)
            answers.append(deduce_round_moves(e, j, geom, eta) if moves else deduce_round_stays(e, geom, eta))
        child = node.children.get(tuple(answers))
        if child is None:
            return None
        node = h.nodes[child]
    return None if node.leaf else node.id


def deduce_and_update(store: ResultStore, h: StrategyGraph, nid: int, sg: SubdividedGraph,
                      eta: int) -> list[int]:
    """One stride of mock play from node ``nid``: one state if the readings moved, else stay and move."""
    branches = [True] if store.differs() else [True, False]
    out = []
    for moves in branches:
        nxt = _advance(h, sg, nid, store, moves, eta)
        if nxt is not None and nxt not in out:
            out.append(nxt)
    return out


@dataclass
class StrideRecord:
    round: int
    probes: tuple
    answers: tuple
    robber_set: frozenset
    phi_before: int
    phi_after: int
    diff: bool | None

    def to_json(self) -> dict:
        return {"round": self.round, "probes": list(self.probes), "answers": list(self.answers),
                "refined": set_string(self.robber_set), "probe_count": len(self.probes),
                "phi_before": self.phi_before, "phi_after": self.phi_after, "diff": self.diff}


@dataclass
class MultiCopResult:
    located: bool
    rounds: int | None
    traces: list = field(default_factory=list)
    max_probes: int = 0
    violations: list = field(default_factory=list)

    @property
    def outcome(self) -> str:
        return f"Located({self.rounds})" if self.located else "Undecided"

    def to_json(self) -> dict:
        return {"outcome": self.outcome, "located": self.located, "rounds": self.rounds,
                "max_probes_per_round": self.max_probes, "violations": self.violations,
                "traces": [[r.to_json() for r in t] for t in self.traces]}


class MultiCopProcedure:
    def __init__(self, h: StrategyGraph, g: Graph, eta: int):
        if h.eta is None:
            raise TranslationError("strategy graph needs stride levels")
        if h.eta != eta:
            raise TranslationError(f"strategy graph was built for eta={h.eta}, not {eta}")
        self.h, self.g, self.eta = h, g, eta
        self.sg = subdivide(g, eta)
        if not h.root.extended <= set(self.sg.vertices):
            raise TranslationError("strategy graph does not live on the subdivision of this graph")

    def plan(self, i: int, phi: tuple) -> tuple[str, ...]:
        levels = {0, 1} if i == 0 else {i, i + 1}
        return tuple(self.g.ordered(probe_plan(phi, self.h, levels, self.sg)))

    def update(self, i: int, phi: tuple, prev: dict, cur: dict) -> tuple[tuple, bool | None]:
        if i == 0:
            # round 0 mirrors the opening probe with the mock standing on its start
            store = ResultStore(cur, cur)
            return tuple(n for n in [_stays_root(self.h, self.sg, store, self.eta)] if n is not None), None
        store = ResultStore(prev, cur)
        diff = store.differs()
        out: list[int] = []
        seen = set()
        for nid in phi:
            for nxt in deduce_and_update(store, self.h, nid, self.sg, self.eta):
                node = self.h.nodes[nxt]
                key = (node.extended, node.phase, node.round)
                if key not in seen:
                    seen.add(key)
                    out.append(nxt)
        return tuple(out), diff


def _stays_root(h: StrategyGraph, sg: SubdividedGraph, store: ResultStore, eta: int) -> int | None:
    root = h.root
    if root.leaf:
        return None
    answers = tuple(deduce_round_stays(store.entry(ThreadGeometry.of(sg, p)), ThreadGeometry.of(sg, p), eta)
                    for p in root.probes)
    child = root.children.get(answers)
    if child is None or h.nodes[child].leaf:
        return None
    return child


def run_multicop_game(h: StrategyGraph, g: Graph, eta: int, robber: RobberModel,
                      max_rounds: int, bound: int | None = None) -> MultiCopResult:
    """Run the derived multiple-cop strategy against every branch the robber allows.

    ``bound`` caps probes per round when given; breaches are recorded as
    violations rather than raised.
    """
    proc = MultiCopProcedure(h, g, eta)
    if len(g.vertices) == 1:
        return MultiCopResult(True, 0, [[]])
    result = MultiCopResult(True, 0)
    if isinstance(robber, Scripted):
        robber.check(g)
    # (round, phi, extended mask, previous answers, trace, true mock node)
    stack = [(0, (0,), g.full_mask, {}, [], 0)]
    while stack:
        i, phi, X, prev, trace, true_node = stack.pop()
        if i >= max_rounds:
            result.located = False
            result.rounds = None
            result.traces.append(trace)
            continue
        probes = proc.plan(i, phi)
        result.max_probes = max(result.max_probes, len(probes))
        if bound is not None and len(probes) > bound:
            result.violations.append(f"round {i}: {len(probes)} probes exceed bound {bound}")
        idx = [g.index[p] for p in probes]
        parts = partition_mask(g, X, idx)
        if isinstance(robber, Scripted):
            pos = robber.position(i)
            want = tuple(g.dist[p][pos] for p in probes)
            parts = [(a, R) for a, R in parts if a == want]
        children = []
        for ans, R in parts:
            cur = dict(zip(probes, ans))
            if R & (R - 1) == 0:
                rec = StrideRecord(i, probes, ans, g.names(R), len(phi), 0, None)
                result.traces.append(trace + [rec])
                if result.located:
                    result.rounds = max(result.rounds, i + 1)
                continue
            new_phi, diff = proc.update(i, phi, prev, cur)
            rec = StrideRecord(i, probes, ans, g.names(R), len(phi), len(new_phi), diff)
            if len(new_phi) > 2 * len(phi):
                result.violations.append(f"round {i}: state set grew {len(phi)} -> {len(new_phi)}")
            if diff and len(new_phi) > len(phi):
                result.violations.append(f"round {i}: state set grew on a diff stride")
            if isinstance(robber, Scripted):
                true_node = _true_mock(proc, i, true_node, prev, cur, robber)
                if true_node is not None and true_node not in new_phi:
                    same = [n for n in new_phi if h.nodes[n].extended == h.nodes[true_node].extended
                            and h.nodes[n].round == h.nodes[true_node].round]
                    if not same:
                        result.violations.append(f"round {i}: true mock state dropped from the state set")
            if not new_phi:
                raise TranslationError(f"round {i}: state set emptied without locating the robber")
            children.append((i + 1, new_phi, g.expand_mask(R), cur, trace + [rec], true_node))
        stack.extend(reversed(children))
    if not result.located:
        result.rounds = None
    return result


def _true_mock(proc: MultiCopProcedure, i: int, nid, prev: dict, cur: dict, robber: Scripted):
    if nid is None:
        return None
    if i == 0:
        return _stays_root(proc.h, proc.sg, ResultStore(cur, cur), proc.eta)
    moved = robber.position(i) != robber.position(i - 1)
    return _advance(proc.h, proc.sg, nid, ResultStore(prev, cur), moved, proc.eta)
