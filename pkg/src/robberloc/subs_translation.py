"""Playing one cop on G^{1/m} by mirroring a multiple-cop strategy on G.

The cop only probes branch vertices.  Any such probe result, taken mod m,
gives the robber's distance to its nearest branch vertex, and that nearest
branch vertex cannot change without the robber passing a midpoint zone.
A block of mirrored probes finished between two midpoint-zone readings
therefore sees the robber near one branch vertex b, and rounding each result
to a multiple of m yields exactly the answers the multiple-cop game would
give for a robber sitting on b.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .game import Adversarial, RobberModel, Scripted, partition_mask
from .graph import Graph, Residue, SubdividedGraph, residue_class, subdivide
from .strategy import StrategyTable, set_string

RESTART = "Restart"


class MidpointResidueError(ValueError):
    """The probe result is a tie: the robber is equidistant from both thread ends."""


class AdmissionError(ValueError):
    pass


class SoundnessError(RuntimeError):
    pass


def deduce_distance(d: int, m: int) -> int:
    """Round a branch-probe result to the base-graph distance of the nearer endpoint."""
    r = d % m
    if 2 * r == m:
        raise MidpointResidueError(f"result {d} is a midpoint tie for m={m}")
    return d // m + (1 if 2 * r > m else 0)


def deduce_case(d: int, m: int) -> int:
    """1 when the shortest path enters through the nearer endpoint, 2 through the farther one."""
    r = d % m
    if 2 * r == m:
        raise MidpointResidueError(f"result {d} is a midpoint tie for m={m}")
    return 2 if 2 * r > m else 1


def strategic_probe(pending: Sequence[str], m: int, execute: Callable[[str], int]):
    """Probe each base vertex's branch image on consecutive rounds.

    Returns the deduced base distances, or ``RESTART`` as soon as a result
    lands in the midpoint zone (the caller repeats the whole block).
    """
    results = []
    for p in pending:
        d = execute(p)
        if m > 1 and residue_class(d, m) is Residue.AT_MIDPOINT_ZONE:
            return RESTART
        results.append(deduce_distance(d, m) if m > 1 else d)
    return results


@dataclass(frozen=True)
class TrackerState:
    """Everything the subdivision cop knows; hashable so playouts can be memoised."""

    stage: int
    extended: int  # extended robber set in G^{1/m}, as a bitmask
    cop_extended: frozenset  # mirrored multiple-cop game state
    block: tuple = ()
    pending: tuple = ()
    done: tuple = ()
    waiting: bool = False
    sweep: int = 0
    waits: int = 0  # consecutive midpoint-zone readings while waiting
    strides: int = 0  # completed strategic blocks
    resets: int = 0
    cop_refined: frozenset | None = None


@dataclass
class StepReport:
    probe: str
    answer: int
    refined: int
    located: bool
    block_completed: bool = False
    cop_refined: frozenset | None = None
    stage: int = 1


@dataclass
class SubsRound:
    round: int
    stage: int
    stride: int
    probe: str
    answer: int
    robber_set: frozenset
    cop_set: frozenset

    def to_json(self) -> dict:
        return {
            "round": self.round, "stage": self.stage, "stride": self.stride,
            "probes": [self.probe], "answers": [self.answer],
            "refined": set_string(self.robber_set), "cop_set": set_string(self.cop_set),
        }


@dataclass
class SubsResult:
    located: bool
    rounds: int | None
    trace: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def outcome(self) -> str:
        return f"Located({self.rounds})" if self.located else "Undecided"

    def to_json(self) -> dict:
        return {"outcome": self.outcome, "located": self.located, "rounds": self.rounds,
                "violations": self.violations, "trace": [r.to_json() for r in self.trace]}


class SubdivisionCop:
    """Deterministic one-cop strategy on ``G^{1/m}`` derived from ``a_cop`` on ``G``."""

    def __init__(self, a_cop: StrategyTable, g: Graph, m: int, zeta: int | None = None):
        root = (frozenset(g.vertices), None)
        if len(g.vertices) > 1 and root not in a_cop:
            raise AdmissionError("multiple-cop strategy has no entry for the initial state")
        if zeta is None:
            zeta = len(a_cop[root]) if root in a_cop else 1
        if m < 2 * zeta:
            raise AdmissionError(f"m={m} is below 2*zeta={2 * zeta}; blocks would not fit inside a vicinity window")
        self.g = g
        self.m = m
        self.zeta = zeta
        self.a_cop = a_cop
        self.sg: SubdividedGraph = subdivide(g, m)
        self.slack = m - 1 - zeta
        self.zone_mask = self.sg.mask(x for x in self.sg.vertices
                                      if self.sg.depth(x) == m // 2 and self.sg.depth(x) > 0)
        self.branch_idx = [self.sg.index[b] for b in self.sg.branch_vertices]

    # -- state machine ----------------------------------------------------
    def initial(self) -> TrackerState:
        return TrackerState(1, self.sg.full_mask, frozenset(self.g.vertices))

    def _block_for(self, cop_extended: frozenset) -> tuple:
        return tuple(self.a_cop[(cop_extended, None)])

    def _greedy(self, X: int, mode: str = "split") -> str | None:
        """Most informative branch probe for the tracked set ``X``.

        ``split`` minimises the largest answer part, ``zone`` first splits
        the midpoint-zone candidates (a robber parked on a midpoint),
        ``resolve`` only accepts probes that pin down every candidate
        outside the zone, and ``lookahead`` minimises the next extended set.
        """
        sg = self.sg
        best = None
        for i in self.branch_idx:
            parts = [R for _, R in partition_mask(sg, X, (i,))]
            if mode == "resolve" and any(R & (R - 1) and R & ~self.zone_mask for R in parts):
                continue
            worst = max(_popcount(R) for R in parts)
            if mode == "zone":
                score = (max(_popcount(R & self.zone_mask) for R in parts), worst)
            elif mode == "lookahead":
                score = (max(_popcount(sg.expand_mask(R)) if R & (R - 1) else 0 for R in parts), worst)
            else:
                score = (worst,)
            if best is None or score < best[0]:
                best = (score, i)
        return None if best is None else sg.vertices[best[1]]

    def next_probe(self, s: TrackerState) -> str:
        if s.stage == 1:
            return self.sg.branch_vertices[s.sweep % len(self.sg.branch_vertices)]
        if s.stage == 3:
            return self._greedy(s.extended, "lookahead")
        if s.waiting:
            if self.slack >= 1:
                return self._greedy(s.extended, "zone")
            # no spare round in a vicinity window: only leave the block probe
            # for one that would locate a robber stepping out of the zone, or
            # on alternate rounds to make progress against a parked robber
            q = self._greedy(s.extended, "resolve")
            if q is not None:
                return q
            return s.block[0] if s.waits % 2 == 0 else self._greedy(s.extended, "zone")
        return s.pending[0]

    def observe(self, s: TrackerState, probe: str, d: int) -> tuple[TrackerState, StepReport]:
        sg = self.sg
        R = s.extended & sg.layers[sg.index[probe]][d] if d < len(sg.layers[0]) else 0
        if not R:
            raise SoundnessError(f"probe {probe} answer {d} is inconsistent with the tracked set")
        report = StepReport(probe, d, R, R & (R - 1) == 0, stage=s.stage)
        X = sg.expand_mask(R)
        zone = residue_class(d, self.m) is Residue.AT_MIDPOINT_ZONE
        if report.located:
            return replace(s, extended=X), report

        if s.stage == 1:
            if d % self.m == 0:
                block = self._block_for(s.cop_extended)
                return replace(s, stage=2, extended=X, sweep=s.sweep + 1, block=block,
                               pending=block, done=()), report
            return replace(s, extended=X, sweep=s.sweep + 1), report

        if s.stage == 3:
            return replace(s, extended=X), report

        if s.waiting:
            if zone:
                return replace(s, extended=X, waits=s.waits + 1), report
            if probe != s.block[0]:
                if self.slack >= 1:
                    return replace(s, extended=X, waiting=False, pending=s.block, done=()), report
                # the window was spent on a wait probe; the mirrored robber may
                # now be two steps away, so restart the mirror from V(G)
                root = frozenset(self.g.vertices)
                block = self._block_for(root)
                return replace(s, extended=X, waiting=False, cop_extended=root, block=block,
                               pending=block, done=(), resets=s.resets + 1), report
            # the wait probe doubles as the first block probe
            s = replace(s, waiting=False, pending=s.block, done=())
        elif zone:
            return replace(s, extended=X, waiting=True, waits=1, pending=s.block, done=()), report

        done = s.done + (deduce_distance(d, self.m),)
        pending = s.pending[1:]
        if pending:
            return replace(s, extended=X, pending=pending, done=done), report

        # block complete: one round of the mirrored multiple-cop game
        g = self.g
        idx = [g.index[p] for p in s.block]
        Rc = next((m for a, m in partition_mask(g, g.mask(s.cop_extended), idx) if a == done), 0)
        if not Rc:
            raise SoundnessError(f"deduced answers {done} empty the mirrored robber set")
        cop_refined = g.names(Rc)
        report.block_completed = True
        report.cop_refined = cop_refined
        strides = s.strides + 1
        if Rc & (Rc - 1) == 0:
            return replace(s, stage=3, extended=X, pending=(), done=(), strides=strides,
                           cop_refined=cop_refined), report
        cop_ext = g.names(g.expand_mask(Rc))
        block = self._block_for(cop_ext)
        return replace(s, extended=X, cop_extended=cop_ext, block=block, pending=block, done=(),
                       strides=strides, cop_refined=cop_refined), report

    # -- checks -----------------------------------------------------------
    def containment_violation(self, report: StepReport, robber: str | None = None) -> str | None:
        """Robber set must sit in the vicinity-preimage of the mirrored robber set."""
        if not report.block_completed:
            return None
        sg = self.sg
        for x in sg.names(report.refined):
            if not {_vicinity_fast(sg, x)} & report.cop_refined:
                return f"{x} outside vicinity-preimage of {set_string(report.cop_refined)}"
        if robber is not None and _vicinity_fast(sg, robber) not in report.cop_refined:
            return f"true robber {robber} not mirrored in {set_string(report.cop_refined)}"
        return None


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _vicinity_fast(sg: SubdividedGraph, x: str) -> str:
    kind = sg.kind[x]
    if sg.is_branch(x):
        return x
    u, v = kind.thread
    return u if 2 * kind.offset < sg.m else v


def run_subdivision_game(a_cop: StrategyTable, g: Graph, m: int, robber: RobberModel,
                         max_rounds: int, zeta: int | None = None) -> SubsResult:
    """Play the derived one-cop strategy on G^{1/m}.

    Scripted robbers give a full trace; the adversarial robber explores every
    answer branch (memoised on the cop's state) and reports the worst case.
    """
    cop = SubdivisionCop(a_cop, g, m, zeta)
    sg = cop.sg
    s = cop.initial()
    if len(sg.vertices) == 1:
        return SubsResult(True, 0)
    if isinstance(robber, Adversarial):
        worst = _adversarial_rounds(cop, s, max_rounds, {})
        return SubsResult(worst is not None, worst)
    robber.check(sg)
    result = SubsResult(False, None)
    for t in range(max_rounds):
        pos = robber.position(t)
        probe = cop.next_probe(s)
        d = sg.dist[probe][pos]
        s, rep = cop.observe(s, probe, d)
        problem = cop.containment_violation(rep, pos)
        if problem:
            result.violations.append(f"round {t}: {problem}")
        result.trace.append(SubsRound(t, rep.stage, s.strides, probe, d, sg.names(rep.refined),
                                      s.cop_refined if s.cop_refined is not None else s.cop_extended))
        if rep.located:
            result.located = True
            result.rounds = t + 1
            break
    return result


def _adversarial_rounds(cop: SubdivisionCop, s: TrackerState, remaining: int, memo: dict) -> int | None:
    if remaining <= 0:
        return None
    key = (s, remaining)
    if key in memo:
        return memo[key]
    sg = cop.sg
    probe = cop.next_probe(s)
    worst = 0
    for d, R in partition_mask(sg, s.extended, (sg.index[probe],)):
        nxt, rep = cop.observe(s, probe, d[0])
        if rep.located:
            sub = 1
        else:
            r = _adversarial_rounds(cop, nxt, remaining - 1, memo)
            if r is None:
                memo[key] = None
                return None
            sub = r + 1
        worst = max(worst, sub)
    memo[key] = worst
    return worst


@dataclass
class WalkReport:
    walks_checked: int = 0  # distinct (cop state, position, horizon) nodes explored
    failures: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    worst_rounds: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures and not self.violations


def check_all_walks(a_cop: StrategyTable, g: Graph, m: int, horizon: int, max_rounds: int,
                    zeta: int | None = None) -> WalkReport:
    """Every robber walk of ``horizon`` moves (stays allowed), then standing still.

    Walk prefixes that leave the cop in the same state at the same position
    behave identically from then on, so the search memoises on that pair.
    Each must be located within ``max_rounds`` with no containment violation.
    """
    cop = SubdivisionCop(a_cop, g, m, zeta)
    sg = cop.sg
    report = WalkReport()
    if len(sg.vertices) == 1:
        return report
    memo: dict = {}
    stay_memo: dict = {}

    def stay(s, pos):
        key = (s, pos)
        if key in stay_memo:
            return stay_memo[key]
        for extra in range(1, max_rounds + 1):
            probe = cop.next_probe(s)
            s, rep = cop.observe(s, probe, sg.dist[probe][pos])
            problem = cop.containment_violation(rep, pos)
            if problem:
                report.violations.append(problem)
            if rep.located:
                stay_memo[key] = extra
                return extra
        stay_memo[key] = None
        return None

    def walk(s, pos, t, left, path):
        key = (s, pos, left)
        if key in memo:
            return
        memo[key] = True
        report.walks_checked += 1
        if left == 0:
            extra = stay(s, pos)
            if extra is None or t + extra > max_rounds:
                report.failures.append(tuple(path))
            else:
                report.worst_rounds = max(report.worst_rounds, t + extra)
            return
        probe = cop.next_probe(s)
        nxt, rep = cop.observe(s, probe, sg.dist[probe][pos])
        problem = cop.containment_violation(rep, pos)
        if problem:
            report.violations.append(f"{'>'.join(path)}: {problem}")
        if rep.located:
            report.worst_rounds = max(report.worst_rounds, t + 1)
            return
        for y in (pos,) + sg.adj[pos]:
            walk(nxt, y, t + 1, left - 1, path + [y])

    for x in sg.vertices:
        walk(cop.initial(), x, 0, horizon, [x])
    return report
