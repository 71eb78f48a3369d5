"""Exact localizability by least-fixpoint search over extended robber sets."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .game import RestrictedRobberRules, Semantics, partition_mask
from .graph import Graph, subdivide
from .strategy import StrategyTable

WINNING = "Winning"
NOT_WINNING = "NotWinning"
BUDGET_EXCEEDED = "BudgetExceeded"

DEFAULT_BUDGET = 250_000

INF = float("inf")


class NotWinningError(ValueError):
    pass


@dataclass
class Verdict:
    status: str
    capture_time: int | None = None
    strategy: StrategyTable | None = None
    states_explored: int = 0

    @property
    def winning(self) -> bool:
        return self.status == WINNING

    def __repr__(self) -> str:
        if self.status == WINNING:
            return f"Winning(capt={self.capture_time}, states={self.states_explored})"
        if self.status == BUDGET_EXCEEDED:
            return f"BudgetExceeded({self.states_explored})"
        return f"NotWinning(states={self.states_explored})"


def probe_candidates(arena: Graph, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations_with_replacement(range(len(arena.vertices)), k))


class _Search:
    """Reachable state space for k cops, every probe candidate included."""

    def __init__(self, arena: Graph, k: int, rules: RestrictedRobberRules | None, budget: int):
        self.arena = arena
        self.sem = Semantics(arena, rules)
        self.candidates = probe_candidates(arena, k)
        self.budget = budget
        self.root = self.sem.initial()
        # state -> list of (candidate index, child states); singleton parts drop out
        self.moves: dict[tuple[int, int | None], list[tuple[int, tuple]]] = {}
        self.exceeded = False

    def successors(self, state):
        X, phase = state
        out = []
        seen = set()
        for ci, cand in enumerate(self.candidates):
            children = []
            for _, R in partition_mask(self.arena, X, cand):
                if R & (R - 1):
                    child = self.sem.advance(R, phase)
                    if child[0]:
                        children.append(child)
            sig = frozenset(children)
            if sig in seen:
                continue  # an earlier candidate does at least as well
            seen.add(sig)
            out.append((ci, tuple(children)))
        return out

    def explore(self) -> None:
        queue = deque([self.root])
        self.moves[self.root] = None
        order = []
        while queue:
            s = queue.popleft()
            order.append(s)
            if s[0] & (s[0] - 1) == 0:
                self.moves[s] = []
                continue
            succ = self.successors(s)
            self.moves[s] = succ
            for _, children in succ:
                for c in children:
                    if c not in self.moves:
                        if len(self.moves) >= self.budget:
                            self.exceeded = True
                            return
                        self.moves[c] = None
                        queue.append(c)
        self.order = order

    def solve(self, t_cap: int | None):
        """Label states with their least winning time; returns (values, choice)."""
        value: dict = {}
        choice: dict = {}
        pending = []
        for s in self.order:
            if s[0] & (s[0] - 1) == 0:
                value[s] = 0
            else:
                pending.append(s)
        t = 0
        while pending:
            t += 1
            if t_cap is not None and t > t_cap:
                return value, choice, True
            newly = []
            rest = []
            for s in pending:
                for ci, children in self.moves[s]:
                    if all(value.get(c, INF) < t for c in children):
                        newly.append((s, ci))
                        break
                else:
                    rest.append(s)
            if not newly:
                break
            for s, ci in newly:
                value[s] = t
                choice[s] = ci
            pending = rest
        return value, choice, False


def _extract(search: _Search, choice: dict) -> StrategyTable:
    arena = search.arena
    table = {}
    queue = deque([search.root])
    seen = {search.root}
    while queue:
        s = queue.popleft()
        X, phase = s
        if X & (X - 1) == 0:
            continue
        ci = choice[s]
        cand = search.candidates[ci]
        table[(arena.names(X), phase)] = tuple(arena.vertices[i] for i in cand)
        for _, R in partition_mask(arena, X, cand):
            if R & (R - 1):
                child = search.sem.advance(R, phase)
                if child[0] and child not in seen:
                    seen.add(child)
                    queue.append(child)
    return StrategyTable(table)


def decide_localizable(arena: Graph, k: int, budget: int = DEFAULT_BUDGET, t_cap: int | None = None,
                       rules: RestrictedRobberRules | None = None) -> Verdict:
    """Decide whether ``k`` cops can locate the robber on ``arena``.

    A set is t-winning when some probe choice leaves every answer part either
    a singleton or, after the robber's move, a (t-1)-winning set.  Labels are
    assigned in increasing t, so the first candidate found for a set is the
    lexicographically first among the time-optimal ones.
    """
    if k < 1:
        raise ValueError("need at least one cop")
    search = _Search(arena, k, rules, budget)
    search.explore()
    explored = len(search.moves)
    if search.exceeded:
        return Verdict(BUDGET_EXCEEDED, states_explored=explored)
    value, choice, capped = search.solve(t_cap)
    root = search.root
    if root in value:
        return Verdict(WINNING, value[root], _extract(search, choice), explored)
    if capped:
        return Verdict(BUDGET_EXCEEDED, states_explored=explored)
    return Verdict(NOT_WINNING, states_explored=explored)


def extract_strategy(arena: Graph, k: int, budget: int = DEFAULT_BUDGET,
                     rules: RestrictedRobberRules | None = None) -> StrategyTable:
    verdict = decide_localizable(arena, k, budget, rules=rules)
    if not verdict.winning:
        raise NotWinningError(f"{k} cop(s) cannot win on this arena ({verdict!r})")
    return verdict.strategy


def candidate_strategy(arena: Graph, k: int, rules: RestrictedRobberRules | None = None,
                       budget: int = DEFAULT_BUDGET) -> StrategyTable:
    """A greedy deterministic strategy, total on its own reachable states.

    Each state probes the first candidate minimising the largest answer part.
    Used as the strategy under test where no winning strategy exists.
    """
    sem = Semantics(arena, rules)
    cands = probe_candidates(arena, k)
    root = sem.initial()
    table = {}
    queue = deque([root])
    seen = {root}
    while queue:
        X, phase = queue.popleft()
        if X & (X - 1) == 0:
            continue
        best = None
        for cand in cands:
            worst = max(bin(R).count("1") for _, R in partition_mask(arena, X, cand))
            if best is None or worst < best[0]:
                best = (worst, cand)
        cand = best[1]
        table[(arena.names(X), phase)] = tuple(arena.vertices[i] for i in cand)
        for _, R in partition_mask(arena, X, cand):
            if R & (R - 1):
                child = sem.advance(R, phase)
                if child[0] and child not in seen:
                    if len(seen) >= budget:
                        raise RuntimeError("candidate strategy exceeded its state budget")
                    seen.add(child)
                    queue.append(child)
    return StrategyTable(table)


@dataclass
class ParameterResult:
    value: int | None
    verdicts: dict = field(default_factory=dict)
    budget_exceeded: bool = False

    @property
    def decided(self) -> bool:
        return self.value is not None


def localization_number(g: Graph, k_max: int, budget: int = DEFAULT_BUDGET) -> ParameterResult:
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    res = ParameterResult(None)
    for k in range(1, k_max + 1):
        v = decide_localizable(g, k, budget)
        res.verdicts[k] = v
        if v.winning:
            res.value = k
            return res
        if v.status == BUDGET_EXCEEDED:
            res.budget_exceeded = True
            return res
    return res


def subdivision_number(g: Graph, m_max: int, budget: int = DEFAULT_BUDGET) -> ParameterResult:
    """Smallest m <= m_max with G^{1/m} localizable by a single cop."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    res = ParameterResult(None)
    for m in range(1, m_max + 1):
        arena = g if m == 1 else subdivide(g, m)
        v = decide_localizable(arena, 1, budget)
        res.verdicts[m] = v
        if v.winning:
            res.value = m
            return res
        if v.status == BUDGET_EXCEEDED:
            res.budget_exceeded = True
            return res
    return res
