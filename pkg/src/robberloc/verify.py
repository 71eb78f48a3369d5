"""Acceptance checks, shared by ``robberloc verify`` and the test suite.

Each check returns a ``Check`` whose ``detail`` is deterministic (no
timings), so the CLI output is reproducible; tests time the calls
themselves.
"""
from __future__ import annotations

import contextlib
import io
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from .corpus import connected_graphs, g5
from .cop_translation import (ThreadGeometry, deduce_round_moves, deduce_round_stays, run_multicop_game,
                              probe_bound)
from .game import Adversarial, RestrictedRobberRules, partition_answers
from .graph import VertexClass, classify, inner_name, subdivide, vicinity
from .solver import candidate_strategy, decide_localizable, localization_number, subdivision_number
from .strategy_graph import Divergence, build, is_cop_winning
from .subs_translation import check_all_walks, deduce_case, deduce_distance


@dataclass
class Check:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.name}: {self.detail}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed, "detail": self.detail}


def _corpus():
    return dict(connected_graphs(5))


def _map(fn, items, threads: int):
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# 1 ------------------------------------------------------------------------

def check_worked_example(threads: int = 1) -> Check:
    g = g5()
    v = decide_localizable(g, 1)
    problems = []
    if not v.winning or v.capture_time != 2:
        return Check(1, "five-vertex worked example", False, f"solver verdict {v!r}")
    h = build(v.strategy, g)
    root = h.root
    parts = [set(R) for _, R in partition_answers(root.extended, root.probes, g)]
    want = [{"C"}, {"A"}, {"B"}, {"D", "E"}]
    if sorted(map(sorted, parts)) != sorted(map(sorted, want)):
        problems.append(f"root parts {parts}")
    if len(root.children) != 4:
        problems.append(f"root has {len(root.children)} children")
    inner = [h.nodes[c] for c in root.children.values() if not h.nodes[c].leaf]
    if [set(n.extended) for n in inner] != [{"B", "D", "E"}]:
        problems.append(f"non-leaf children {[sorted(n.extended) for n in inner]}")
    if h.capture_time() != 2:
        problems.append(f"graph capture time {h.capture_time()}")
    detail = (f"capt=2, root probe {root.probes[0]}, parts C|A|B|D,E, expansion B,D,E"
              if not problems else "; ".join(problems))
    return Check(1, "five-vertex worked example", not problems, detail)


# 2 ------------------------------------------------------------------------

def _equivalence_case(item):
    name, k = item
    g = _corpus()[name]
    v = decide_localizable(g, k)
    if v.winning:
        h = build(v.strategy, g)
    else:
        h = build(candidate_strategy(g, k), g)
    verdict = is_cop_winning(h)
    return name, k, v.status, verdict


def check_equivalence(threads: int = 1) -> Check:
    items = [(name, k) for name, _ in connected_graphs(5) for k in (1, 2)]
    bad = []
    winning = 0
    for name, k, status, verdict in _map(_equivalence_case, items, threads):
        winning += status == "Winning"
        if verdict is not (status == "Winning"):
            bad.append(f"{name}/k={k}: solver {status}, graph {verdict}")
    detail = f"{len(items)} cases ({winning} winning), {len(bad)} mismatches"
    if bad:
        detail += ": " + "; ".join(bad[:5])
    return Check(2, "solver verdict vs strategy-graph finiteness", not bad, detail)


# 3 ------------------------------------------------------------------------

def _deduce_case(name):
    g = _corpus()[name]
    checked = fired = 0
    bad = []
    for m in (2, 3, 4):
        sg = subdivide(g, m)
        for p in sg.branch_vertices:
            for x in sg.vertices:
                if classify(sg, x) is VertexClass.MIDPOINT:
                    continue
                (w1,) = vicinity(sg, x)
                d = sg.dist[p][x]
                checked += 1
                if deduce_distance(d, m) != g.dist[p][w1]:
                    bad.append(f"{name} m={m} p={p} x={x}")
                if deduce_case(d, m) == 2:
                    fired += 1
                    kind = sg.kind[x]
                    w2 = kind.thread[1] if kind.thread[0] == w1 else kind.thread[0]
                    if sg.dist[p][w1] != sg.dist[p][w2] + m:
                        bad.append(f"{name} m={m} p={p} x={x}: witness fails")
    return checked, fired, bad


def check_deduce(threads: int = 1) -> Check:
    checked = fired = 0
    bad = []
    for c, f, b in _map(_deduce_case, [n for n, _ in connected_graphs(5)], threads):
        checked, fired, bad = checked + c, fired + f, bad + b
    detail = f"{checked} (probe, vertex) pairs, {fired} far-endpoint cases, {len(bad)} mismatches"
    return Check(3, "branch-probe distance deduction", not bad, detail)


# 4 ------------------------------------------------------------------------

@lru_cache(maxsize=None)
def corpus_zeta(name: str):
    res = localization_number(_corpus()[name], 4)
    return res.value, res.verdicts[res.value] if res.value else None


def _cop_subs_case(name):
    g = _corpus()[name]
    zeta, verdict = corpus_zeta(name)
    if zeta is None or zeta > 2:
        return None
    m = 2 * zeta
    rep = check_all_walks(verdict.strategy, g, m, horizon=6 * m, max_rounds=40 * m, zeta=zeta)
    return name, zeta, rep.walks_checked, rep.worst_rounds, rep.failures[:3], rep.violations[:3]


def check_cop_to_subs(threads: int = 1) -> Check:
    rows = [r for r in _map(_cop_subs_case, [n for n, _ in connected_graphs(5)], threads) if r]
    bad = [f"{n}: failures {f} violations {v}" for n, _, _, _, f, v in rows if f or v]
    nodes = sum(r[2] for r in rows)
    worst = max(r[3] for r in rows)
    detail = f"{len(rows)} graphs with zeta<=2, {nodes} walk states, worst {worst} rounds, {len(bad)} bad"
    if bad:
        detail += ": " + "; ".join(bad[:3])
    return Check(4, "subdivision strategy from a multi-cop strategy", not bad, detail)


# 5 ------------------------------------------------------------------------

def mock_position(u: str, v: str, j: int, eta: int) -> str:
    """Vertex of G^{1/eta} that is j steps from u along the thread toward v."""
    if j == 0:
        return u
    if j == eta:
        return v
    a, b = (u, v) if u < v else (v, u)
    return inner_name(a, b, j if u == a else eta - j)


def _round_oracle_case(name):
    g = _corpus()[name]
    if len(g) < 2:
        return 0, []
    checked = 0
    bad = []
    D = g.dist
    for eta in (1, 2, 3, 4):
        sg = subdivide(g, eta)
        for p in sg.vertices:
            geom = ThreadGeometry.of(sg, p)
            for u in g.vertices:
                stay = (D[u][geom.a], D[u][geom.b], D[u][geom.a], D[u][geom.b])
                checked += 1
                if deduce_round_stays(stay, geom, eta) != sg.dist[u][p]:
                    bad.append(f"{name} eta={eta} stays u={u} p={p}")
                for v in g.adj[u]:
                    entry = (D[u][geom.a], D[u][geom.b], D[v][geom.a], D[v][geom.b])
                    for j in range(1, eta + 1):
                        checked += 1
                        if deduce_round_moves(entry, j, geom, eta) != sg.dist[mock_position(u, v, j, eta)][p]:
                            bad.append(f"{name} eta={eta} moves {u}->{v} j={j} p={p}")
    return checked, bad


def check_round_oracles(threads: int = 1) -> Check:
    checked = 0
    bad = []
    for c, b in _map(_round_oracle_case, [n for n, _ in connected_graphs(5)], threads):
        checked += c
        bad += b
    detail = f"{checked} (probe, u, v, j) cases for eta 1..4, {len(bad)} mismatches"
    return Check(5, "per-round distance deduction", not bad, detail)


# 6 and 7 ------------------------------------------------------------------

@lru_cache(maxsize=None)
def corpus_eta(name: str):
    res = subdivision_number(_corpus()[name], 3)
    return res.value


def restricted_graph(g, eta: int):
    sg = subdivide(g, eta)
    rules = RestrictedRobberRules(eta)
    v = decide_localizable(sg, 1, rules=rules)
    if not v.winning:
        return v
    return build(v.strategy, sg, rules=rules)


def _subs_cop_case(name):
    g = _corpus()[name]
    eta = corpus_eta(name)
    if eta is None:
        return name, None, None, None, None
    h = restricted_graph(g, eta)
    if isinstance(h, Divergence) or not hasattr(h, "nodes"):
        return name, eta, None, None, None
    capt = h.capture_time()
    strides = math.ceil(capt / eta) + 1
    bound = probe_bound(capt, eta, g.diameter) if g.diameter >= 1 and capt >= 1 else None
    r = run_multicop_game(h, g, eta, Adversarial(), strides, bound=bound)
    return name, eta, capt, (r.located, r.rounds, strides), (r.max_probes, bound, r.violations)


@lru_cache(maxsize=None)
def _subs_cop_runs(threads: int = 1):
    return tuple(_map(_subs_cop_case, [n for n, _ in connected_graphs(5)], threads))


def check_subs_to_cop(threads: int = 1) -> Check:
    rows = _subs_cop_runs(threads)
    bad = []
    for name, eta, capt, run, _ in rows:
        if eta is None or run is None:
            bad.append(f"{name}: no restricted strategy")
        elif not run[0]:
            bad.append(f"{name}: not located within {run[2]} rounds")
    worst = max((r[3][1] for r in rows if r[3] and r[3][0]), default=0)
    detail = f"{len(rows)} graphs with eta<=3, worst {worst} cop rounds, {len(bad)} failures"
    if bad:
        detail += ": " + "; ".join(bad[:3])
    return Check(6, "multi-cop strategy from a restricted subdivision strategy", not bad, detail)


def check_monitor(threads: int = 1) -> Check:
    rows = _subs_cop_runs(threads)
    bad = []
    tightest = None
    for name, _, _, _, mon in rows:
        if mon is None:
            bad.append(f"{name}: no run")
            continue
        probes, bound, violations = mon
        bad += [f"{name}: {v}" for v in violations]
        if bound is not None:
            ratio = (probes, bound)
            if tightest is None or probes * tightest[1] > tightest[0] * bound:
                tightest = ratio
    detail = f"{len(rows)} runs, {len(bad)} violations"
    if tightest:
        detail += f", largest probes/bound {tightest[0]}/{tightest[1]}"
    if bad:
        detail += ": " + "; ".join(bad[:3])
    return Check(7, "probe-count bound and state-set growth", not bad, detail)


# 8 ------------------------------------------------------------------------

def _capture(argv) -> tuple[int, str, dict]:
    """Run the CLI in-process inside a scratch directory holding g5.json."""
    from . import cli
    from .io import save_graph

    with tempfile.TemporaryDirectory() as tmp:
        save_graph(g5(), os.path.join(tmp, "g5.json"))
        argv = [a.replace("{tmp}", tmp) for a in argv]
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
            code = cli.main(argv)
        files = {}
        for root, _, names in os.walk(tmp):
            for n in sorted(names):
                path = os.path.join(root, n)
                with open(path, "rb") as fh:
                    files[os.path.relpath(path, tmp)] = fh.read()
        return code, buf.getvalue().replace(tmp, "{tmp}"), files


DETERMINISM_COMMANDS = [
    ["params", "--graph", "{tmp}/g5.json", "--format", "json"],
    ["strategy-graph", "--graph", "{tmp}/g5.json", "--cops", "1", "--format", "dot", "--out", "{tmp}/h"],
    ["translate", "--graph", "{tmp}/g5.json", "--direction", "cop-subs", "--m", "2", "--out", "{tmp}/t1",
     "--format", "json"],
    ["translate", "--graph", "{tmp}/g5.json", "--direction", "subs-cop", "--out", "{tmp}/t2"],
    ["simulate", "--graph", "{tmp}/g5.json", "--cops", "1", "--format", "json"],
    ["verify", "--criteria", "1,3,5"],
]


def check_determinism(threads: int = 1) -> Check:
    bad = []
    for argv in DETERMINISM_COMMANDS:
        first = _capture(argv)
        if _capture(argv) != first:
            bad.append(f"{argv[0]} (repeat)")
        if _capture(argv + ["--threads", "3"]) != first:
            bad.append(f"{argv[0]} (--threads 3)")
    detail = f"{len(DETERMINISM_COMMANDS)} commands, each run twice and once with --threads 3, {len(bad)} differ"
    if bad:
        detail += ": " + ", ".join(bad)
    return Check(8, "byte-identical CLI output", not bad, detail)


CHECKS = {1: check_worked_example, 2: check_equivalence, 3: check_deduce, 4: check_cop_to_subs,
          5: check_round_oracles, 6: check_subs_to_cop, 7: check_monitor, 8: check_determinism}


def run_checks(numbers=None, threads: int = 1) -> list[Check]:
    numbers = sorted(numbers or CHECKS)
    return [CHECKS[n](threads) for n in numbers]
