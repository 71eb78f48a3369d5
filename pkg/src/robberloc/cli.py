"""robberloc command line.

Exit codes: 0 decided / located, 2 budget exhausted, 3 invalid input,
4 a checked property failed.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import io as rio
from .cop_translation import TranslationError, probe_bound, run_multicop_game
from .game import Adversarial, RestrictedRobberRules, Scripted, play
from .graph import GraphError, subdivide
from .solver import (BUDGET_EXCEEDED, DEFAULT_BUDGET, candidate_strategy, decide_localizable,
                     localization_number, subdivision_number)
from .strategy import StrategyUndefined
from .strategy_graph import Divergence, build, export_dot
from .subs_translation import AdmissionError, check_all_walks, run_subdivision_game

EXIT_OK = 0
EXIT_BUDGET = 2
EXIT_INVALID = 3
EXIT_VIOLATION = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 means "budget" here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        sys.stdout.write(rio.dumps(data))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- params -----------------------------------------------------------------

def cmd_params(args) -> int:
    g = rio.load_graph(args.graph)
    budget = args.budget
    z = localization_number(g, args.cops or 4, budget)
    data = {"vertices": len(g), "edges": len(g.edges), "diameter": g.diameter,
            "zeta": z.value, "zeta_capture_time": None, "eta": None, "eta_capture_time": None,
            "budget_exceeded": z.budget_exceeded}
    lines = [f"graph: {len(g)} vertices, {len(g.edges)} edges, diameter {g.diameter}"]
    if z.decided:
        data["zeta_capture_time"] = z.verdicts[z.value].capture_time
        lines.append(f"zeta = {z.value} (capture time {data['zeta_capture_time']})")
    else:
        lines.append("zeta: " + ("budget exhausted" if z.budget_exceeded else f"> {args.cops or 4}"))
    e = subdivision_number(g, args.m or 4, budget)
    data["budget_exceeded"] = z.budget_exceeded or e.budget_exceeded
    if e.decided:
        data["eta"] = e.value
        data["eta_capture_time"] = e.verdicts[e.value].capture_time
        lines.append(f"eta = {e.value} (one-cop capture time on the subdivision {data['eta_capture_time']})")
    else:
        lines.append("eta: " + ("budget exhausted" if e.budget_exceeded else f"> {args.m or 4}"))
    decided = z.decided and e.decided
    data["status"] = "decided" if decided else "undecided"
    lines.append(f"status: {data['status']}")
    _emit(args, "\n".join(lines), data)
    return EXIT_OK if decided else EXIT_BUDGET


# -- strategy-graph -----------------------------------------------------------

def _arena(args, g):
    if args.eta:
        return subdivide(g, args.eta), RestrictedRobberRules(args.eta)
    if args.m and args.m > 1:
        return subdivide(g, args.m), None
    return g, None


def cmd_strategy_graph(args) -> int:
    g = rio.load_graph(args.graph)
    arena, rules = _arena(args, g)
    k = args.cops or 1
    if args.strategy:
        table = rio.load_strategy(args.strategy)
    else:
        v = decide_localizable(arena, k, args.budget, rules=rules)
        if v.status == BUDGET_EXCEEDED:
            print(f"solver budget exhausted after {v.states_explored} states", file=sys.stderr)
            return EXIT_BUDGET
        table = v.strategy if v.winning else candidate_strategy(arena, k, rules, args.budget)
    h = build(table, arena, rules=rules)
    code = EXIT_OK
    if isinstance(h, Divergence):
        print(f"strategy is not cop-winning ({h.reason}): {h.describe()}", file=sys.stderr)
        if not args.allow_divergent:
            return EXIT_VIOLATION
        h = h.partial
    if args.out:
        rio.save_strategy_graph(h, f"{args.out}.json")
        Path(f"{args.out}.dot").write_text(export_dot(h))
    if args.format == "dot":
        sys.stdout.write(export_dot(h))
    else:
        leaves = len(h.leaves())
        text = (f"{len(h)} nodes, {leaves} leaves, capture time {h.capture_time()}, "
                f"root probe {','.join(h.root.probes or ())}")
        _emit(args, text, h.to_json())
    return code


# -- translate ----------------------------------------------------------------

def _cop_strategy(g, args):
    if args.cops:
        v = decide_localizable(g, args.cops, args.budget)
        if v.status == BUDGET_EXCEEDED:
            return None, None, EXIT_BUDGET
        if not v.winning:
            raise UsageError(f"{args.cops} cop(s) cannot locate the robber on this graph")
        return args.cops, v.strategy, EXIT_OK
    z = localization_number(g, 4, args.budget)
    if not z.decided:
        return None, None, EXIT_BUDGET
    return z.value, z.verdicts[z.value].strategy, EXIT_OK


def _cop_to_subs(args, g) -> int:
    k, table, code = _cop_strategy(g, args)
    if code:
        print("solver budget exhausted", file=sys.stderr)
        return code
    m = args.m or 2 * k
    max_rounds = args.max_rounds or 40 * m
    horizon = 6 * m
    adv = run_subdivision_game(table, g, m, Adversarial(), max_rounds, zeta=k)
    walks = check_all_walks(table, g, m, horizon, max_rounds, zeta=k)
    stationary = {x: run_subdivision_game(table, g, m, Scripted([x]), max_rounds, zeta=k)
                  for x in subdivide(g, m).vertices}
    ok = adv.located and walks.ok and all(r.located and not r.violations for r in stationary.values())
    data = {"direction": "cop-subs", "cops": k, "m": m, "max_rounds": max_rounds,
            "adversarial": adv.outcome, "walk_horizon": horizon, "walk_states": walks.walks_checked,
            "walk_failures": [list(w) for w in walks.failures[:20]], "violations": walks.violations[:20],
            "worst_walk_rounds": walks.worst_rounds, "verdict": "ok" if ok else "violated"}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "summary.json").write_text(rio.dumps(data))
        (out / "stationary.json").write_text(rio.dumps({x: r.to_json() for x, r in stationary.items()}))
    text = (f"cop-subs: {k} cop(s) -> one cop on G^(1/{m})\n"
            f"adversarial robber: {adv.outcome}\n"
            f"walks up to {horizon} moves: {walks.walks_checked} states, worst {walks.worst_rounds} rounds, "
            f"{len(walks.failures)} not located, {len(walks.violations)} containment violations\n"
            f"verdict: {data['verdict']}")
    _emit(args, text, data)
    return EXIT_OK if ok else EXIT_VIOLATION


def _subs_to_cop(args, g) -> int:
    if args.eta:
        eta = args.eta
    else:
        res = subdivision_number(g, args.m or 4, args.budget)
        if not res.decided:
            print("could not determine eta within the limits", file=sys.stderr)
            return EXIT_BUDGET
        eta = res.value
    sg = subdivide(g, eta)
    rules = RestrictedRobberRules(eta)
    v = decide_localizable(sg, 1, args.budget, rules=rules)
    if v.status == BUDGET_EXCEEDED:
        print("solver budget exhausted", file=sys.stderr)
        return EXIT_BUDGET
    if not v.winning:
        raise UsageError(f"one cop cannot win the restricted game on G^(1/{eta})")
    h = build(v.strategy, sg, rules=rules)
    capt = h.capture_time()
    rounds = args.max_rounds or math.ceil(capt / eta) + 1
    bound = probe_bound(capt, eta, g.diameter) if capt >= 1 and g.diameter >= 1 else None
    adv = run_multicop_game(h, g, eta, Adversarial(), rounds, bound)
    scripted = {x: run_multicop_game(h, g, eta, Scripted([x]), rounds, bound) for x in g.vertices}
    violations = adv.violations + [f"{x}: {msg}" for x, r in scripted.items() for msg in r.violations]
    ok = adv.located and not violations and all(r.located for r in scripted.values())
    data = {"direction": "subs-cop", "eta": eta, "capture_time": capt, "rounds_allowed": rounds,
            "bound": bound, "max_probes_per_round": adv.max_probes, "adversarial": adv.outcome,
            "violations": violations, "verdict": "ok" if ok else "violated"}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "summary.json").write_text(rio.dumps(data))
        (out / "adversarial.json").write_text(rio.dumps(adv.to_json()))
        (out / "stationary.json").write_text(rio.dumps({x: r.to_json() for x, r in scripted.items()}))
        rio.save_strategy_graph(h, out / "strategy_graph.json")
    text = (f"subs-cop: restricted one-cop strategy on G^(1/{eta}) -> cops on G\n"
            f"subdivision capture time {capt}, {rounds} cop rounds allowed\n"
            f"adversarial robber: {adv.outcome}, at most {adv.max_probes} probes per round"
            + (f" (bound {bound})" if bound is not None else "") + "\n"
            f"violations: {len(violations)}\nverdict: {data['verdict']}")
    _emit(args, text, data)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_translate(args) -> int:
    g = rio.load_graph(args.graph)
    if args.direction == "cop-subs":
        return _cop_to_subs(args, g)
    return _subs_to_cop(args, g)


# -- simulate -----------------------------------------------------------------

def cmd_simulate(args) -> int:
    g = rio.load_graph(args.graph)
    arena, rules = _arena(args, g)
    k = args.cops or 1
    if args.strategy:
        table = rio.load_strategy(args.strategy)
    else:
        v = decide_localizable(arena, k, args.budget, rules=rules)
        if v.status == BUDGET_EXCEEDED:
            print("solver budget exhausted", file=sys.stderr)
            return EXIT_BUDGET
        table = v.strategy if v.winning else candidate_strategy(arena, k, rules, args.budget)
    robber = Scripted(args.walk.split(",")) if args.walk else Adversarial()
    max_rounds = args.max_rounds or 4 * len(arena)
    result = play(table, arena, robber, max_rounds, rules)
    if args.out:
        Path(args.out).write_text(rio.dumps(result.to_json()))
    lines = []
    for trace in result.traces[:1] if args.walk else []:
        for rec in trace:
            lines.append(f"round {rec.state.round}: probe {','.join(rec.probes)} -> "
                         f"{','.join(map(str, rec.answers))}, robber in {{{','.join(sorted(rec.refined))}}}")
    lines.append(f"outcome: {result.outcome} over {len(result.traces)} branch(es)")
    _emit(args, "\n".join(lines), result.to_json())
    return EXIT_OK if result.located else EXIT_VIOLATION


# -- verify -------------------------------------------------------------------

def cmd_verify(args) -> int:
    from .verify import CHECKS, run_checks

    if args.criteria:
        try:
            numbers = sorted({int(x) for x in args.criteria.split(",")})
        except ValueError:
            raise UsageError(f"--criteria expects numbers like 1,3,5, got {args.criteria!r}") from None
        unknown = [n for n in numbers if n not in CHECKS]
        if unknown:
            raise UsageError(f"unknown criterion {unknown[0]}")
    else:
        numbers = sorted(CHECKS)
    checks = run_checks(numbers, args.threads)
    data = [c.to_json() for c in checks]
    _emit(args, "\n".join(c.line() for c in checks), data)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VIOLATION


# -- wiring -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "dot"], default="text")
    common.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="solver state cap")
    common.add_argument("--max-rounds", type=_positive)
    common.add_argument("--out")
    common.add_argument("--threads", type=_positive, default=1,
                        help="worker processes (never changes the output)")

    graph_opts = argparse.ArgumentParser(add_help=False)
    graph_opts.add_argument("--graph", required=True, help='JSON file {"vertices": [...], "edges": [[u, v], ...]}')
    graph_opts.add_argument("--cops", type=_positive)
    graph_opts.add_argument("--m", type=_positive)
    graph_opts.add_argument("--eta", type=_positive)

    p = _Parser(prog="robberloc", description="Robber locating game workbench.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("params", parents=[common, graph_opts],
                        help="localization number, subdivision number and capture times")
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("strategy-graph", parents=[common, graph_opts], help="build and export H(A)")
    sp.add_argument("--strategy", help="strategy table JSON instead of the solver's")
    sp.add_argument("--allow-divergent", action="store_true",
                    help="export the partial graph of a non-winning strategy")
    sp.set_defaults(func=cmd_strategy_graph)

    sp = sub.add_parser("translate", parents=[common, graph_opts], help="run a strategy translation")
    sp.add_argument("--direction", required=True, choices=["cop-subs", "subs-cop"])
    sp.set_defaults(func=cmd_translate)

    sp = sub.add_parser("simulate", parents=[common, graph_opts], help="play a strategy against a robber")
    sp.add_argument("--strategy")
    sp.add_argument("--walk", help="comma-separated robber walk; adversarial when omitted")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    sp.add_argument("--criteria", help="comma-separated subset, e.g. 1,3,5")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    if args.format == "dot" and args.command != "strategy-graph":
        print("--format dot is only available for strategy-graph", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except (GraphError, UsageError, AdmissionError, StrategyUndefined, TranslationError,
            json.JSONDecodeError) as exc:
        print(f"robberloc: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
