"""Acceptance criteria: every desk-scale claim checked end to end.

Each criterion is a registered function returning (passed, detail lines);
`run_criteria` executes them in order with fixed seeds so repeated runs
produce identical reports.  The pytest acceptance module and the
`verify-paper` CLI subcommand both drive this registry.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .core import (
    AllocationPlan,
    MultiLayerGraph,
    RobberSpec,
    flatten,
    ml_min_degree,
)
from .solver import (
    DEFAULT_STATE_BUDGET,
    Winner,
    build_copwin,
    decide_allocated,
    decide_choose_allocation,
    decide_free_layer_choice,
    multilayer_cop_number,
    single_layer_cop_number,
)


@dataclass
class CriterionResult:
    cid: str
    title: str
    passed: bool
    details: list[str] = field(default_factory=list)
    elapsed: float = 0.0


_REGISTRY: list[tuple[str, str, Callable]] = []


def criterion(cid: str, title: str):
    def wrap(fn):
        _REGISTRY.append((cid, title, fn))
        return fn

    return wrap


def run_criteria(only: str | None = None, state_budget: int | None = None) -> list[CriterionResult]:
    budget = state_budget or DEFAULT_STATE_BUDGET
    results = []
    for cid, title, fn in _REGISTRY:
        if only and only not in cid:
            continue
        t0 = time.perf_counter()
        passed, details = fn(budget)
        results.append(CriterionResult(cid, title, passed, details, time.perf_counter() - t0))
    return results


# -- shared corpus builders ---------------------------------------------------------


def random_tree_edges(rng: random.Random, n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((rng.randrange(v), v) for v in range(1, n)))


def random_connected_edges(rng: random.Random, n: int, extra: int) -> tuple[tuple[int, int], ...]:
    edges = set(random_tree_edges(rng, n))
    for _ in range(extra):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return tuple(sorted(edges))


def random_instance(
    rng: random.Random,
    n_max: int = 6,
    tau_max: int = 2,
    specs=(RobberSpec.UNION, RobberSpec.COMPLETE, RobberSpec.EXPLICIT),
) -> MultiLayerGraph:
    n = rng.randint(2, n_max)
    tau = rng.randint(1, tau_max)
    layers = tuple(
        tuple(
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < rng.choice([0.2, 0.4, 0.7])
        )
        for _ in range(tau)
    )
    spec = rng.choice(list(specs))
    redges = None
    if spec is RobberSpec.EXPLICIT:
        redges = tuple(
            (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5
        )
    return MultiLayerGraph(n=n, layers=layers, robber_spec=spec, robber_edges=redges)


# -- criteria ----------------------------------------------------------------------


@criterion("c01-grid", "two-layer grid: same-layer pairs win, split pair loses")
def _c01(budget):
    from .generators import gen_grid

    details = []
    ok = True
    for n in (4, 5):
        g, _ = gen_grid(n)
        for alloc, want in (((2, 0), Winner.COP), ((0, 2), Winner.COP), ((1, 1), Winner.ROBBER)):
            got = decide_allocated(g, AllocationPlan(alloc), state_budget=budget).winner
            ok &= got is want
            details.append(f"n={n} alloc={alloc}: {got.value} (want {want.value})")
    g3, _ = gen_grid(3)
    got = decide_allocated(g3, AllocationPlan((1, 1)), state_budget=budget).winner
    ok &= got is Winner.COP
    details.append(f"n=3 alloc=(1,1): {got.value} (want COP)")
    return ok, details


@criterion("c02-mirror", "mirrored high-girth base: layers need 3 cops, pair wins")
def _c02(budget):
    from .generators import gen_min_counterexample

    g, _ = gen_min_counterexample()
    details = []
    mc = multilayer_cop_number(g, 2, state_budget=budget)
    details.append(f"multi-layer cop number = {mc} (want 2)")
    ok = mc == 2
    for i in (0, 1):
        c = single_layer_cop_number(g.layers[i], g.n, 3, state_budget=budget)
        details.append(f"layer {i + 1} single-layer cop number = {c} (want 3)")
        ok &= c == 3
    return ok, details


@criterion("c03-cycle-matchings", "cycle split into matchings needs |V|/2 cops")
def _c03(budget):
    from .generators import gen_cycle_matchings

    details = []
    ok = True
    for half in (3, 4):
        g, _ = gen_cycle_matchings(half)
        mc = multilayer_cop_number(g, half, state_budget=budget)
        details.append(f"2n={2 * half}: cop number {mc} (want {half})")
        ok &= mc == half
    return ok, details


@criterion("c04-slices", "slices construction: cheap layers, expensive game")
def _c04(budget):
    from .generators import gen_slices, slices_induced_robber_slice

    g, _ = gen_slices(2)
    details = []
    ok = True
    for i in (0, 1):
        c = single_layer_cop_number(g.layers[i], g.n, 2, state_budget=budget)
        details.append(f"layer {i + 1} cop number = {c} (want <= 2)")
        ok &= c is not None and c <= 2
    for x in (1, 2):
        edges, m = slices_induced_robber_slice(2, x)
        c = single_layer_cop_number(edges, m, 2, state_budget=budget)
        details.append(f"slice {x} cop number = {c} (want <= 2)")
        ok &= c is not None and c <= 2
    for alloc in ((1, 0), (0, 1)):
        got = decide_allocated(g, AllocationPlan(alloc), state_budget=budget).winner
        details.append(f"one cop alloc={alloc}: {got.value} (want ROBBER)")
        ok &= got is Winner.ROBBER
    return ok, details


@criterion("c05-star-reduction", "per-vertex star layers decide domination")
def _c05(budget):
    from .generators import gen_domset_reduction
    from .oracles import brute_domination_number

    rng = random.Random(20240605)
    ok = True
    checked = 0
    mismatches = []
    for trial in range(200):
        n = rng.randint(3, 7)
        edges = random_connected_edges(rng, n, rng.randint(0, n))
        g, _ = gen_domset_reduction(edges, n)
        gamma = brute_domination_number(edges, n)
        for k in (1, 2, 3):
            verdict, _ = decide_free_layer_choice(g, k, state_budget=budget)
            want = Winner.COP if gamma <= k else Winner.ROBBER
            checked += 1
            if verdict.winner is not want:
                ok = False
                mismatches.append(f"trial {trial} n={n} k={k}: got {verdict.winner.value}, gamma={gamma}")
    details = [f"200 graphs x k in 1..3: {checked} verdicts compared against brute-force domination"]
    details.extend(mismatches[:5])
    return ok, details


@criterion("c06-tree-robber", "tree-robber fast path matches the exact solver")
def _c06(budget):
    from .treealgo import decide_tree_robber

    rng = random.Random(20240606)
    ok = True
    mismatches = []
    trials = 0
    while trials < 300:
        n = rng.randint(2, 8)
        tau = rng.randint(1, 2)
        layers = tuple(
            tuple(
                (u, v)
                for u in range(n)
                for v in range(u + 1, n)
                if rng.random() < rng.choice([0.15, 0.3, 0.5, 0.8])
            )
            for _ in range(tau)
        )
        g = MultiLayerGraph(
            n=n, layers=layers, robber_spec=RobberSpec.EXPLICIT,
            robber_edges=random_tree_edges(rng, n),
        )
        k = rng.randint(1, 2)
        fast, _ = decide_tree_robber(g, k)
        slow, _ = decide_choose_allocation(g, k, state_budget=budget)
        if fast.winner is not slow.winner:
            ok = False
            mismatches.append(f"trial {trials}: tree={fast.winner.value} solver={slow.winner.value}")
        trials += 1
    details = [f"{trials} random tree-robber instances, verdicts identical"]
    details.extend(mismatches[:5])
    return ok, details


@criterion("c07-clique-partition", "clique partition invariants over the full sweep")
def _c07(budget):
    from .generators import ConstructionError, gen_soifer

    ok = True
    count = 0
    failures = []
    for n in range(4, 31):
        for tau in range(1, max(1, n // 2)):
            if not (1 <= tau < n // 2):
                continue
            count += 1
            try:
                g, report = gen_soifer(n, tau)
            except ConstructionError as ex:
                ok = False
                failures.append(f"(n={n}, tau={tau}): {ex}")
                continue
            max_deg = max(max(g.layer_view(i).degrees) for i in range(tau))
            if max_deg > math.ceil(n / tau):
                ok = False
                failures.append(f"(n={n}, tau={tau}): max degree {max_deg}")
    details = [f"{count} (n, tau) pairs: connected layers, exact cover, degree <= ceil(n/tau)"]
    details.extend(failures[:5])
    return ok, details


@criterion("c08-clique-lower-bound", "closed-neighbourhood certificate at k = tau/10")
def _c08(budget):
    from .bounds import clique_lb_check, mec_check
    from .generators import gen_soifer

    ok = True
    details = []
    for n, tau in ((24, 10), (30, 11), (40, 12)):
        g, _ = gen_soifer(n, tau)
        k = tau // 10
        got = clique_lb_check(g, k)
        mec = mec_check(g, k)
        details.append(f"(n={n}, tau={tau}, k={k}): certificate={got} mec={mec}")
        ok &= got and mec
    return ok, details


@criterion("c09-solver-oracle", "retrograde table equals naive fixed point, state by state")
def _c09(budget):
    from .oracles import naive_copwin_status

    rng = random.Random(20240609)
    ok = True
    mismatches = []
    for trial in range(300):
        g = random_instance(rng, n_max=6, tau_max=2)
        k = rng.randint(1, 2)
        assignment = tuple(rng.randrange(g.tau) for _ in range(k))
        table = build_copwin(g, assignment, state_budget=budget)
        win = naive_copwin_status(g, assignment)
        for (p0, cops, t), w in win.items():
            if bool(table.is_copwin(p0, cops, t)) != w:
                ok = False
                mismatches.append(f"trial {trial} state {(p0, cops, t)}")
                break
    details = ["300 random instances (n<=6, tau<=2, k<=2) checked state by state"]
    details.extend(mismatches[:5])
    return ok, details


@criterion("c10-monotonicity", "robber edges help the robber, cop edges help the cops")
def _c10(budget):
    rng = random.Random(20240610)
    ok = True
    failures = []
    all_pairs = lambda n: [(u, v) for u in range(n) for v in range(u + 1, n)]
    for trial in range(200):
        g = random_instance(rng, n_max=5, tau_max=2, specs=(RobberSpec.EXPLICIT,))
        n = g.n
        k = rng.randint(1, 2)
        base, _ = decide_choose_allocation(g, k, state_budget=budget)
        # robber layer grows: a cop win may only appear on the smaller layer
        extra = [e for e in all_pairs(n) if e not in g.robber_edges]
        rng.shuffle(extra)
        bigger = tuple(sorted(set(g.robber_edges) | set(extra[:2])))
        g_r = MultiLayerGraph(n=n, layers=g.layers, robber_spec=RobberSpec.EXPLICIT, robber_edges=bigger)
        after, _ = decide_choose_allocation(g_r, k, state_budget=budget)
        if base.winner is Winner.ROBBER and after.winner is Winner.COP:
            ok = False
            failures.append(f"trial {trial}: robber-layer growth flipped ROBBER->COP")
        # cop layers grow: a cop win must survive
        glayers = []
        for layer in g.layers:
            extra = [e for e in all_pairs(n) if e not in layer]
            rng.shuffle(extra)
            glayers.append(tuple(sorted(set(layer) | set(extra[:2]))))
        g_c = MultiLayerGraph(
            n=n, layers=tuple(glayers), robber_spec=RobberSpec.EXPLICIT, robber_edges=g.robber_edges
        )
        after_c, _ = decide_choose_allocation(g_c, k, state_budget=budget)
        if base.winner is Winner.COP and after_c.winner is Winner.ROBBER:
            ok = False
            failures.append(f"trial {trial}: cop-layer growth flipped COP->ROBBER")
        # union-robber win implies free-layer-choice win
        g_u = MultiLayerGraph(n=n, layers=g.layers, robber_spec=RobberSpec.UNION)
        union_verdict, _ = decide_choose_allocation(g_u, k, state_budget=budget)
        if union_verdict.winner is Winner.COP:
            free_verdict, _ = decide_free_layer_choice(g_u, k, state_budget=budget)
            if free_verdict.winner is not Winner.COP:
                ok = False
                failures.append(f"trial {trial}: union win without free-layer-choice win")
    details = ["200 random instances under edge additions and robber-layer substitution"]
    details.extend(failures[:5])
    return ok, details


@criterion("c11-bounds-soundness", "existential closure and domination bound the cop number")
def _c11(budget):
    from .bounds import domination_bound, domset_exact, domset_greedy, mec_check

    rng = random.Random(20240611)
    ok = True
    failures = []
    mec_hits = 0
    dom_checks = 0
    chain_checks = 0
    for trial in range(120):
        g = random_instance(rng, n_max=6, tau_max=2, specs=(RobberSpec.COMPLETE,))
        n, tau = g.n, g.tau
        for k in (1, 2):
            if mec_check(g, k):
                mec_hits += 1
                mc = multilayer_cop_number(g, k, state_budget=budget)
                if mc is not None:
                    ok = False
                    failures.append(f"trial {trial}: mec at k={k} but cop number {mc} <= k")
        ds = domset_exact(g)
        mc = multilayer_cop_number(g, len(ds), state_budget=budget)
        dom_checks += 1
        if mc is None:
            ok = False
            failures.append(f"trial {trial}: domination {len(ds)} does not bound the cop number")
        greedy = domset_greedy(g)
        if len(ds) > len(greedy):
            ok = False
            failures.append(f"trial {trial}: exact {len(ds)} > greedy {len(greedy)}")
        delta = ml_min_degree(g)
        if delta >= tau * (math.e - 1):
            chain_checks += 1
            bound = domination_bound(n, tau, delta)
            if len(greedy) > bound + 1e-9:
                ok = False
                failures.append(f"trial {trial}: greedy {len(greedy)} above bound {bound:.3f}")
    details = [
        f"120 complete-robber instances: {mec_hits} mec certificates, "
        f"{dom_checks} domination bounds, {chain_checks} dense chain checks"
    ]
    details.extend(failures[:5])
    return ok, details


@criterion("c12-pstar-density", "splitting probability and layered density")
def _c12(budget):
    from .bounds import pstar, pstar_residual
    from .generators import gen_random_layers

    ok = True
    details = []
    worst = 0.0
    for i in range(101):
        p = i / 100
        for tau in range(1, 11):
            worst = max(worst, pstar_residual(p, tau))
            ps = pstar(p, tau)
            if p <= 0.5 and not (ps / 2 - 1e-12 <= p <= ps + 1e-12):
                ok = False
                details.append(f"sandwich violated at p={p}, tau={tau}")
    details.append(f"max defining-equation residual {worst:.2e} (want < 1e-12)")
    ok &= worst < 1e-12
    n, p, seeds = 64, 0.3, 200
    pairs = n * (n - 1) // 2
    for tau in (1, 2, 3):
        total_edges = 0
        for seed in range(seeds):
            g, _ = gen_random_layers(n, p, tau, seed)
            total_edges += len(flatten(g))
        mean = total_edges / (seeds * pairs)
        sigma = math.sqrt(p * (1 - p) / (seeds * pairs))
        details.append(f"tau={tau}: flattened density {mean:.5f} vs p={p} (3 sigma = {3 * sigma:.5f})")
        ok &= abs(mean - p) <= 3 * sigma
    return ok, details


@criterion("c13-treewidth-sweep", "bag sweep with max-bag-size cops beats optimal robbers")
def _c13(budget):
    from .bounds import treewidth_cop_bound, treewidth_exact_small
    from .sim import BagsweepCops, TablebaseRobber, run_match

    rng = random.Random(20240613)
    ok = True
    failures = []
    tested = 0
    while tested < 50:
        n = rng.randint(4, 10)
        tau = rng.randint(1, 2)
        layers = tuple(
            tuple(sorted(set(random_connected_edges(rng, n, rng.randint(0, 2)))))
            for _ in range(tau)
        )
        g = MultiLayerGraph(n=n, layers=layers, robber_spec=RobberSpec.UNION)
        width, decomp = treewidth_exact_small(flatten(g), n)
        cops = treewidth_cop_bound(g, decomp)
        if cops > 4:
            continue
        counts = [0] * tau
        for c in range(cops):
            counts[c % tau] += 1
        plan = AllocationPlan(tuple(counts))
        table = build_copwin(g, plan.assignment(), state_budget=budget)
        rec = run_match(g, plan, BagsweepCops(decomp), TablebaseRobber(table), T=60 * n * n, seed=tested)
        if rec.outcome != "CAPTURE":
            ok = False
            failures.append(f"instance {tested}: bag sweep did not capture (n={n}, cops={cops})")
        mc = multilayer_cop_number(g, cops, state_budget=budget)
        if mc is None:
            ok = False
            failures.append(f"instance {tested}: cop number above bag bound {cops}")
        tested += 1
    details = [f"50 random connected-layer instances, bag-size cops always capture"]
    details.extend(failures[:5])
    return ok, details


@criterion("c14-copsbane", "expander-core family: validators and robber survival")
def _c14(budget):
    from .generators import gen_copsbane
    from .sim import CopsbaneRobber, GreedyCops, run_match

    ok = True
    details = []
    for N in (8, 12, 16, 20):
        g, report, layout = gen_copsbane(N, seed=3)
        details.append(
            f"N={N}: validator {'PASS' if report.ok else 'FAIL'}, D={layout.D}, "
            f"arm length {2 * layout.D + 1}, clustering {layout.clustering}, "
            f"expansion {layout.expansion:.3f} ({'exact' if layout.expansion_exact else 'heuristic'})"
        )
        ok &= report.ok and layout.expansion_exact
    captures = 0
    matches = 0
    for N in (20, 50):
        g, _, layout = gen_copsbane(N, seed=3)
        for seed in range(20):
            rec = run_match(g, AllocationPlan((2, 2)), GreedyCops(), CopsbaneRobber(layout), T=1000, seed=seed)
            matches += 1
            if rec.outcome != "SURVIVED":
                captures += 1
    details.append(f"survival: {matches - captures}/{matches} matches survived T=1000 (want all)")
    ok &= captures == 0
    return ok, details


@criterion("c15-determinism", "verify-paper output is a pure function of its arguments")
def _c15(budget):
    import subprocess
    import sys as _sys

    cmd = [_sys.executable, "-m", "mlcr.cli", "verify-paper", "--only", "c07"]
    outs = []
    for _ in range(2):
        proc = subprocess.run(cmd, capture_output=True)
        outs.append(proc.stdout)
    ok = outs[0] == outs[1] and b"PASS" in outs[0]
    details = [f"two runs produced {'identical' if outs[0] == outs[1] else 'DIFFERENT'} stdout "
               f"({len(outs[0])} bytes)"]
    return ok, details
