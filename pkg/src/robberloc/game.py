"""One round of the Robber Locating Game and full playouts."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from .graph import Graph, GraphError, SubdividedGraph
from .strategy import StateKey, StrategyTable, StrategyUndefined, key_string, set_string


@dataclass(frozen=True)
class GameState:
    extended: frozenset
    round: int = 0
    stage: str | None = None
    stride: int | None = None
    round_index: int | None = None

    def key(self) -> StateKey:
        return (self.extended, self.round_index)


@dataclass(frozen=True)
class Adversarial:
    """Robber that commits to nothing; every consistent answer is explored."""


@dataclass(frozen=True)
class Scripted:
    walk: tuple[str, ...]

    def __init__(self, walk: Iterable[str]):
        object.__setattr__(self, "walk", tuple(walk))
        if not self.walk:
            raise ValueError("scripted walk must be non-empty")

    def position(self, t: int) -> str:
        """Position at the t-th probe (0-based); the robber stays after the walk ends."""
        return self.walk[min(t, len(self.walk) - 1)]

    def check(self, arena: Graph) -> None:
        for x in self.walk:
            if x not in arena.index:
                raise GraphError(f"walk visits unknown vertex {x!r}")
        for a, b in zip(self.walk, self.walk[1:]):
            if a != b and b not in arena.adj[a]:
                raise GraphError(f"walk step {a!r} -> {b!r} is not a move to a neighbour")


RobberModel = Union[Adversarial, Scripted]


# -- restricted subdivision play -------------------------------------------

@dataclass(frozen=True)
class RestrictedRobberRules:
    """Robber constraints used when mocking the subdivision game.

    The robber starts on a branch vertex and lands on a branch vertex at the
    end of every stride of ``eta`` rounds.  At round index ``j`` inside a
    stride it is either on a branch vertex or at distance ``min(j, eta - j)``
    from one, which covers straight traversals, staying put and
    midpoint-and-back excursions.
    """

    eta: int

    def __post_init__(self):
        if self.eta < 1:
            raise ValueError("eta must be >= 1")

    def allowed_depths(self, j: int) -> frozenset[int]:
        return frozenset((0, min(j, self.eta - j)))

    def allowed_mask(self, arena: Graph, j: int) -> int:
        cache = arena.__dict__.setdefault("_allowed_cache", {})
        key = (self.eta, j)
        if key not in cache:
            depths = self.allowed_depths(j)
            cache[key] = arena.mask(x for x in arena.vertices if arena.depth(x) in depths)
        return cache[key]

    def check_arena(self, arena: Graph) -> None:
        m = arena.m if isinstance(arena, SubdividedGraph) else 1
        if m != self.eta:
            raise GraphError(f"rules use eta={self.eta} but the arena has m={m}")


class Semantics:
    """How the extended robber set evolves between probe rounds."""

    def __init__(self, arena: Graph, rules: RestrictedRobberRules | None = None):
        if rules is not None:
            rules.check_arena(arena)
        self.arena = arena
        self.rules = rules

    def initial(self) -> tuple[int, int | None]:
        if self.rules is None:
            return self.arena.full_mask, None
        return self.arena.mask(x for x in self.arena.vertices if self.arena.depth(x) == 0), self.rules.eta

    def advance(self, refined: int, phase: int | None) -> tuple[int, int | None]:
        expanded = self.arena.expand_mask(refined)
        if self.rules is None:
            return expanded, None
        nxt = phase % self.rules.eta + 1
        return expanded & self.rules.allowed_mask(self.arena, nxt), nxt


# -- set operations -----------------------------------------------------------

def partition_mask(arena: Graph, extended: int, probe_idx: Sequence[int]) -> list[tuple[tuple[int, ...], int]]:
    """Split ``extended`` by answer vector; parts come in lexicographic answer order."""
    parts = [((), extended)]
    for p in probe_idx:
        nxt = []
        layers = arena.layers[p]
        for answers, mask in parts:
            for d, layer in enumerate(layers):
                sub = mask & layer
                if sub:
                    nxt.append((answers + (d,), sub))
        parts = nxt
    return parts


def refine(X: Iterable[str], probes: Sequence[str], answers: Sequence[int], arena: Graph) -> frozenset[str]:
    if len(probes) != len(answers):
        raise ValueError("probe and answer vectors differ in length")
    return frozenset(x for x in X if all(arena.dist[p][x] == a for p, a in zip(probes, answers)))


def partition_answers(X: Iterable[str], probes: Sequence[str], arena: Graph) -> list[tuple[tuple[int, ...], frozenset[str]]]:
    idx = [arena.index[p] for p in probes]
    return [(a, arena.names(m)) for a, m in partition_mask(arena, arena.mask(X), idx)]


def expand(R: Iterable[str], arena: Graph) -> frozenset[str]:
    """Closed neighbourhood of ``R``."""
    return arena.names(arena.expand_mask(arena.mask(R)))


def answer_vector(probes: Sequence[str], robber: str, arena: Graph) -> tuple[int, ...]:
    return tuple(arena.dist[p][robber] for p in probes)


# -- playout ---------------------------------------------------------------

@dataclass(frozen=True)
class RoundRecord:
    state: GameState
    probes: tuple[str, ...]
    answers: tuple[int, ...]
    refined: frozenset

    def to_json(self) -> dict:
        return {
            "round": self.state.round,
            "state": set_string(self.state.extended),
            "round_index": self.state.round_index,
            "probes": list(self.probes),
            "answers": list(self.answers),
            "refined": set_string(self.refined),
        }


@dataclass
class PlayResult:
    located: bool
    rounds: int | None  # worst-case rounds to locate when located
    traces: list[list[RoundRecord]] = field(default_factory=list)

    @property
    def outcome(self) -> str:
        return f"Located({self.rounds})" if self.located else "Undecided"

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "located": self.located,
            "rounds": self.rounds,
            "traces": [[r.to_json() for r in t] for t in self.traces],
        }


Strategy = Union[StrategyTable, Callable[[StateKey], Sequence[str]]]


def _lookup(strategy: Strategy, key: StateKey) -> tuple[str, ...]:
    if callable(strategy) and not isinstance(strategy, StrategyTable):
        return tuple(strategy(key))
    return strategy[key]


def play(strategy: Strategy, arena: Graph, robber: RobberModel, max_rounds: int,
         rules: RestrictedRobberRules | None = None) -> PlayResult:
    """Play ``strategy`` against ``robber`` for at most ``max_rounds`` probe rounds.

    Against the adversarial robber every answer branch is followed and the
    game counts as located only when all branches are.
    """
    sem = Semantics(arena, rules)
    start, phase = sem.initial()
    if isinstance(robber, Scripted):
        robber.check(arena)
        if not start >> arena.index[robber.walk[0]] & 1:
            raise GraphError(f"robber cannot start at {robber.walk[0]!r} under these rules")

    traces: list[list[RoundRecord]] = []
    worst = 0
    located_all = True

    # iterative DFS keeps the branch order deterministic
    stack = [(start, phase, 0, [])]
    while stack:
        X, ph, t, trace = stack.pop()
        if X == 0:
            continue
        if X & (X - 1) == 0:
            traces.append(trace)
            worst = max(worst, t)
            continue
        if t >= max_rounds:
            traces.append(trace)
            located_all = False
            continue
        state = GameState(arena.names(X), round=t, round_index=ph)
        try:
            probes = _lookup(strategy, state.key())
        except KeyError as exc:
            if isinstance(exc, StrategyUndefined):
                raise
            raise StrategyUndefined(state.key()) from exc
        idx = [arena.index[p] for p in probes]
        if isinstance(robber, Scripted):
            ans = answer_vector(probes, robber.position(t), arena)
            parts = [(a, m) for a, m in partition_mask(arena, X, idx) if a == ans]
            if not parts:
                raise RuntimeError(f"robber position lost from tracked set at round {t + 1}")
        else:
            parts = partition_mask(arena, X, idx)
        children = []
        for ans, R in parts:
            rec = RoundRecord(state, tuple(probes), ans, arena.names(R))
            if R & (R - 1) == 0:
                traces.append(trace + [rec])
                worst = max(worst, t + 1)
                continue
            nX, nph = sem.advance(R, ph)
            children.append((nX, nph, t + 1, trace + [rec]))
        stack.extend(reversed(children))

    return PlayResult(located_all, worst if located_all else None, traces)


def describe_state(key: StateKey) -> str:
    return key_string(key)
