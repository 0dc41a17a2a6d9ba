"""Command-line surface: solve, generate, bounds, simulate, play, experiment,
verify-paper.

Exit codes for `solve`: 0 cop win, 1 robber win, 2 usage/parse error,
3 state budget exceeded.  All timing output goes to stderr so stdout is a
deterministic function of the arguments and seeds.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from .core import (
    AllocationPlan,
    MlgError,
    MlgParseError,
    MultiLayerGraph,
    ml_min_degree,
    parse_mlg_file,
    write_mlg_file,
)
from .solver import (
    DEFAULT_STATE_BUDGET,
    StateBudgetExceeded,
    Winner,
    decide_allocated,
    decide_choose_allocation,
    decide_free_layer_choice,
)
from .treealgo import decide_tree_robber, is_tree

EXIT_COP = 0
EXIT_ROBBER = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _say_time(label: str, t0: float) -> None:
    print(f"# {label}: {time.perf_counter() - t0:.3f}s", file=sys.stderr)


def _load(path: str) -> MultiLayerGraph:
    return parse_mlg_file(path)


def cmd_solve(args) -> int:
    t0 = time.perf_counter()
    try:
        g = _load(args.graph)
    except (OSError, MlgParseError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    modes = [m for m in (args.allocation, args.cops, args.free_choice) if m is not None]
    if len(modes) != 1:
        print("error: pass exactly one of --allocation/--cops/--free-choice", file=sys.stderr)
        return EXIT_USAGE
    try:
        tree_ok = is_tree(g.robber_layer_edges(), g.n)
        if args.tree_fast and not tree_ok:
            print("error: --tree-fast requires a tree robber layer", file=sys.stderr)
            return EXIT_USAGE
        use_tree = tree_ok if args.tree_fast is None else args.tree_fast
        if args.allocation is not None:
            counts = tuple(int(x) for x in args.allocation.split(","))
            plan = AllocationPlan(counts)
            if len(counts) != g.tau:
                print(f"error: allocation has {len(counts)} entries, graph has {g.tau} layers",
                      file=sys.stderr)
                return EXIT_USAGE
            if args.dump_table and plan.total >= 1:
                from .solver import build_copwin, dump_cwt

                table = build_copwin(g, plan.assignment(), state_budget=args.state_budget)
                with open(args.dump_table, "w") as fh:
                    fh.write(dump_cwt(table))
                print(f"TABLE={args.dump_table}")
            if use_tree and plan.total >= 1:
                from .solver import GameVerdict
                from .treealgo import find_robbers_edge

                box: list = []
                cert = find_robbers_edge(g, plan.assignment(), profile_out=box)
                if cert is None:
                    verdict = GameVerdict(
                        Winner.COP,
                        assignment=plan.assignment(),
                        placement=tuple(min(c) for c in box[0]),
                    )
                else:
                    verdict = GameVerdict(
                        Winner.ROBBER, assignment=plan.assignment(), certificate=cert
                    )
                print("METHOD=tree")
            else:
                verdict = decide_allocated(g, plan, state_budget=args.state_budget)
                print("METHOD=state-graph")
            print(f"ALLOCATION={plan}")
        elif args.cops is not None:
            if use_tree:
                verdict, plan = decide_tree_robber(g, args.cops)
                print("METHOD=tree")
            else:
                verdict, plan = decide_choose_allocation(g, args.cops, state_budget=args.state_budget)
                print("METHOD=state-graph")
            if plan is not None:
                print(f"WINNING_ALLOCATION={plan}")
        else:
            verdict, plan = decide_free_layer_choice(g, args.free_choice, state_budget=args.state_budget)
            if plan is not None:
                print(f"WINNING_ALLOCATION={plan}")
    except StateBudgetExceeded as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_BUDGET
    except MlgError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    for line in verdict.record_lines():
        print(line)
    _say_time("solve", t0)
    return EXIT_COP if verdict.winner is Winner.COP else EXIT_ROBBER


def cmd_generate(args) -> int:
    from . import generators as gen

    t0 = time.perf_counter()
    layout = None
    try:
        fam = args.family
        if fam == "grid":
            g, report = gen.gen_grid(args.n)
        elif fam == "mirror":
            g, report = gen.gen_min_counterexample()
        elif fam == "slices":
            g, report = gen.gen_slices(args.k)
        elif fam == "cycle-matchings":
            g, report = gen.gen_cycle_matchings(args.n)
        elif fam == "soifer":
            g, report = gen.gen_soifer(args.n, args.tau)
        elif fam == "random-layers":
            g, report = gen.gen_random_layers(args.n, args.p, args.tau, args.seed, robber=args.robber)
        elif fam == "copsbane":
            g, report, layout = gen.gen_copsbane(
                args.n, alpha=args.alpha, D=args.D, seed=args.seed
            )
        elif fam == "domset-reduction":
            base = gen.gen_gnp(args.n, args.p, args.seed)
            g, report = gen.gen_domset_reduction(base, args.n)
        else:
            print(f"error: unknown family {fam!r}", file=sys.stderr)
            return EXIT_USAGE
    except MlgError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    write_mlg_file(g, args.output)
    print(f"WROTE={args.output}")
    print(f"VERTICES={g.n}")
    print(f"LAYERS={g.tau}")
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(report.render())
        print(f"REPORT={args.report}")
    _say_time("generate", t0)
    return 0


def cmd_bounds(args) -> int:
    from .bounds import (
        EnumerationBudgetExceeded,
        domset_exact,
        domset_greedy,
        mec_check,
        treewidth_exact_small,
    )
    from .core import flatten

    t0 = time.perf_counter()
    try:
        g = _load(args.graph)
    except (OSError, MlgParseError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    lb = 0
    k = 1
    while k <= args.max_k:
        try:
            if mec_check(g, k):
                lb = k
                k += 1
            else:
                break
        except EnumerationBudgetExceeded:
            break
    print(f"LB_mec={lb}")
    try:
        ds = domset_exact(g)
        print(f"UB_domset={len(ds)}")
        if args.dump_domset:
            sys.stdout.write(ds.render())
    except EnumerationBudgetExceeded:
        ds = domset_greedy(g)
        print(f"UB_domset={len(ds)} (greedy)")
    try:
        width, decomp = treewidth_exact_small(flatten(g), g.n)
        connected = all(g.layer_view(i).n_components == 1 for i in range(g.tau))
        if connected:
            print(f"UB_treewidth={width + 1}")
        else:
            print("UB_treewidth=n/a (disconnected layer)")
        if args.dump_td:
            sys.stdout.write(decomp.render())
    except EnumerationBudgetExceeded:
        print("UB_treewidth=n/a (too large)")
    _say_time("bounds", t0)
    return 0


def cmd_simulate(args) -> int:
    from .sim import cop_strategy_from_name, referee_check, robber_strategy_from_name, run_match

    t0 = time.perf_counter()
    try:
        g = _load(args.graph)
        if args.tag:
            g.tag = args.tag
        counts = tuple(int(x) for x in args.allocation.split(","))
        plan = AllocationPlan(counts)
    except (OSError, MlgError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE

    seeds = [args.seed + i for i in range(args.batch)]

    def one(seed: int):
        cop = cop_strategy_from_name(args.cop_strategy, g, plan, state_budget=args.state_budget)
        rob = robber_strategy_from_name(args.robber_strategy, g, plan, state_budget=args.state_budget)
        return run_match(g, plan, cop, rob, T=args.rounds, seed=seed)

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            records = list(pool.map(one, seeds))
    else:
        records = [one(s) for s in seeds]
    captures = 0
    for rec in records:
        ok, msg = referee_check(rec, g)
        if not ok:
            print(f"error: referee rejected record: {msg}", file=sys.stderr)
            return EXIT_USAGE
        if rec.outcome == "CAPTURE":
            captures += 1
        line = f"MATCH seed={rec.seed} outcome={rec.outcome}"
        if rec.capture_round is not None:
            line += f" round={rec.capture_round}"
        if rec.tags:
            line += " tags=" + ",".join(rec.tags)
        print(line)
    print(f"SUMMARY matches={len(records)} captures={captures}")
    if args.record:
        with open(args.record, "w") as fh:
            for rec in records:
                fh.write(rec.render())
    _say_time("simulate", t0)
    return 0


def cmd_play(args) -> int:
    from .sim import interactive_play

    try:
        g = _load(args.graph)
        counts = tuple(int(x) for x in args.allocation.split(","))
        plan = AllocationPlan(counts)
        record = interactive_play(g, plan, args.role, state_budget=args.state_budget)
    except (OSError, MlgError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    print(f"OUTCOME={record.outcome}")
    return 0


def cmd_experiment(args) -> int:
    from .bounds import EnumerationBudgetExceeded, domination_bound, domset_greedy, mec_check
    from .generators import gen_random_layers

    t0 = time.perf_counter()
    seeds = [int(s) for s in args.seeds.split(",")]

    def one_row(seed: int):
        row_t = time.perf_counter()
        g, _ = gen_random_layers(args.n, args.p, args.tau, seed)
        delta = ml_min_degree(g)
        gamma = len(domset_greedy(g))
        bound = domination_bound(g.n, g.tau, delta) if delta >= 1 else float("nan")
        mec_k = 0
        k = 1
        while True:
            try:
                if mec_check(g, k):
                    mec_k = k
                    k += 1
                else:
                    break
            except EnumerationBudgetExceeded:
                break
        return {
            "n": args.n,
            "p": args.p,
            "tau": args.tau,
            "seed": seed,
            "delta_mlg": delta,
            "gamma_greedy": gamma,
            "domination_bound": f"{bound:.4f}",
            "mec_lb_k": mec_k,
        }, time.perf_counter() - row_t

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(one_row, seeds))
    else:
        results = [one_row(s) for s in seeds]

    fieldnames = ["n", "p", "tau", "seed", "delta_mlg", "gamma_greedy", "domination_bound", "mec_lb_k"]
    buf = io.StringIO()
    writer = csv.DictWriter(
        buf, fieldnames=["format"] + fieldnames, extrasaction="ignore", lineterminator="\n"
    )
    buf.write("format," + ",".join(fieldnames) + "\n")
    for row, _ in results:
        writer.writerow({"format": "mlcr-experiment-v1", **row})
    mean_gamma = sum(r["gamma_greedy"] for r, _ in results) / len(results)
    mean_delta = sum(r["delta_mlg"] for r, _ in results) / len(results)
    buf.write(f"summary,mean_gamma={mean_gamma:.3f},mean_delta={mean_delta:.3f}\n")
    sys.stdout.write(buf.getvalue())
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(buf.getvalue())
    for (row, wall) in results:
        print(f"# seed={row['seed']} wall={wall:.3f}s", file=sys.stderr)
    _say_time("experiment", t0)
    return 0


def cmd_verify_paper(args) -> int:
    from .verify import run_criteria

    results = run_criteria(only=args.only, state_budget=args.state_budget)
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.cid} {res.title}")
        for line in res.details:
            print(f"  {line}")
        print(f"# {res.cid}: {res.elapsed:.2f}s", file=sys.stderr)
        if not res.passed:
            failed += 1
    print(f"TOTAL {len(results) - failed}/{len(results)} PASS")
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mlcr", description=__doc__)
    ap.add_argument("--state-budget", type=int, default=DEFAULT_STATE_BUDGET)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide a game instance")
    p.add_argument("graph")
    p.add_argument("--allocation", help="per-layer cop counts, e.g. 2,0")
    p.add_argument("--cops", type=int, help="total cops, solver picks the allocation")
    p.add_argument("--free-choice", type=int, help="total cops, robber picks its layer")
    p.add_argument("--tree-fast", action="store_true", default=None,
                   help="force the tree-robber fast path (auto when the robber layer is a tree)")
    p.add_argument("--dump-table", help="write the solved table in CWT1 format to this file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="construct a family instance")
    p.add_argument("family", choices=["grid", "mirror", "slices", "cycle-matchings", "soifer",
                                      "random-layers", "copsbane", "domset-reduction"])
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--report")
    p.add_argument("-n", type=int, default=4)
    p.add_argument("-k", type=int, default=1)
    p.add_argument("--tau", type=int, default=2)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--alpha", type=float, default=0.3)
    p.add_argument("--D", type=int, default=None)
    p.add_argument("--robber", choices=["COMPLETE", "UNION"], default="COMPLETE")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bounds", help="lower/upper bounds for a graph")
    p.add_argument("graph")
    p.add_argument("--max-k", type=int, default=3)
    p.add_argument("--dump-domset", action="store_true")
    p.add_argument("--dump-td", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("simulate", help="run strategy matches")
    p.add_argument("graph")
    p.add_argument("--allocation", required=True)
    p.add_argument("--cop-strategy", default="greedy")
    p.add_argument("--robber-strategy", default="random")
    p.add_argument("--rounds", type=int, default=100)
    p.add_argument("--batch", type=int, default=1)
    p.add_argument("--record", help="write MR1 records to this file")
    p.add_argument("--tag", help="override the graph family tag")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("play", help="interactive match against the tablebase")
    p.add_argument("graph")
    p.add_argument("--allocation", required=True)
    p.add_argument("--role", choices=["robber", "cops"], default="robber")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("experiment", help="random layered-graph bound sweep")
    p.add_argument("-n", type=int, default=128)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--tau", type=int, default=2)
    p.add_argument("--seeds", default="1,2,3,4,5")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("verify-paper", help="run the acceptance criteria suite")
    p.add_argument("--only", help="run only criteria whose id contains this substring")
    p.set_defaults(func=cmd_verify_paper)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as ex:
        return EXIT_USAGE if ex.code not in (0, None) else 0
    # seeds offered globally; subcommands read them off the namespace
    args.seed = getattr(args, "seed", 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
