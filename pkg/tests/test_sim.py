import io
import random

import pytest

from mlcr.core import AllocationPlan, MultiLayerGraph, RobberSpec
from mlcr.generators import gen_copsbane, gen_grid, gen_slices
from mlcr.solver import Winner, build_copwin
from mlcr.sim import (
    BagsweepCops,
    CopsbaneRobber,
    CopTeamStrategy,
    GreedyCops,
    GridCopGuard,
    GridRobberCorner,
    IllegalMoveError,
    RandomCops,
    RandomRobber,
    SlicesRobber,
    StrategyMismatchError,
    TablebaseCops,
    TablebaseRobber,
    TreeSqueezeCops,
    interactive_play,
    parse_match_record,
    referee_check,
    run_match,
    tablebase_pair,
)


def single(edges, n, spec=RobberSpec.UNION):
    return MultiLayerGraph(n=n, layers=(tuple(edges),), robber_spec=spec)


def cycle(n):
    return tuple(sorted((min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)))


def random_instance(rng, n_max=5):
    n = rng.randint(2, n_max)
    tau = rng.randint(1, 2)
    layers = tuple(
        tuple((u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5)
        for _ in range(tau)
    )
    return MultiLayerGraph(n=n, layers=layers, robber_spec=RobberSpec.UNION)


# -- runner basics -------------------------------------------------------------------------


def test_zero_round_match_decided_by_placement():
    g = single([(0, 1)], 2)
    rec = run_match(g, AllocationPlan((1,)), GreedyCops(), RandomRobber(), T=0, seed=1)
    assert rec.outcome in ("SURVIVED", "CAPTURE")
    assert len(rec.rows) == 1


def test_capture_at_placement():
    g = single([], 2)

    class Camp(CopTeamStrategy):
        name = "camp"

        def place(self):
            return (0, 1)

        def moves(self, view):
            return view.cops

    rec = run_match(g, AllocationPlan((2,)), Camp(), RandomRobber(), T=5, seed=1)
    assert rec.outcome == "CAPTURE" and rec.capture_round == 0


def test_illegal_move_aborts_with_diagnostic():
    g = single([(0, 1), (1, 2)], 3)

    class Teleporter(CopTeamStrategy):
        name = "teleporter"

        def place(self):
            return (0,)

        def moves(self, view):
            return (2,)  # 0 -> 2 is not an edge

    with pytest.raises(IllegalMoveError) as exc:
        run_match(g, AllocationPlan((1,)), Teleporter(), RandomRobber(), T=5, seed=1)
    assert "cop 1" in str(exc.value)
    assert exc.value.edge == (0, 2)


def test_match_record_render_parse_round_trip():
    g, _ = gen_grid(4)
    tc, tr, _ = tablebase_pair(g, AllocationPlan((2, 0)))
    rec = run_match(g, AllocationPlan((2, 0)), tc, tr, T=60, seed=9)
    text = rec.render()
    again = parse_match_record(text)
    assert again.rows == rec.rows
    assert again.outcome == rec.outcome
    assert again.capture_round == rec.capture_round
    assert again.allocation == rec.allocation


def test_referee_rejects_tampered_records():
    g, _ = gen_grid(4)
    tc, tr, _ = tablebase_pair(g, AllocationPlan((2, 0)))
    rec = run_match(g, AllocationPlan((2, 0)), tc, tr, T=60, seed=9)
    assert referee_check(rec, g)[0]
    # robber teleports
    bad = parse_match_record(rec.render())
    rnd, mover, robber, cops = bad.rows[-1]
    bad.rows[-1] = (rnd, mover, (robber + 5) % g.n, cops)
    ok, msg = referee_check(bad, g)
    assert not ok
    # outcome forged
    bad2 = parse_match_record(rec.render())
    bad2.outcome = "SURVIVED"
    assert not referee_check(bad2, g)[0]


def test_legality_fuzz_hundred_thousand_matches():
    """10^5 fuzzed matches: no illegal move slips through and the referee
    confirms every capture flag."""

    rng = random.Random(2024)
    graphs = [random_instance(rng) for _ in range(60)]
    matches = 0
    captures = 0
    while matches < 100_000:
        g = graphs[matches % len(graphs)]
        k = 1 + matches % 2
        counts = [0] * g.tau
        for i in range(k):
            counts[(matches + i) % g.tau] += 1
        rec = run_match(
            g,
            AllocationPlan(tuple(counts)),
            RandomCops(),
            RandomRobber(),
            T=6,
            seed=matches,
        )
        ok, msg = referee_check(rec, g)
        assert ok, msg
        captures += rec.outcome == "CAPTURE"
        matches += 1
    assert 0 < captures < matches


# -- tablebase strategies --------------------------------------------------------------------


def test_tablebase_capture_within_rank():
    g, _ = gen_grid(4)
    tc, tr, table = tablebase_pair(g, AllocationPlan((0, 2)))
    rec = run_match(g, AllocationPlan((0, 2)), tc, tr, T=200, seed=4)
    assert rec.outcome == "CAPTURE"
    start_rank = table.rank_of(rec.rows[0][2], rec.rows[0][3], 0)
    assert rec.capture_round <= start_rank


def test_tablebase_robber_survives_split_cops():
    g, _ = gen_grid(4)
    tc, tr, _ = tablebase_pair(g, AllocationPlan((1, 1)))
    rec = run_match(g, AllocationPlan((1, 1)), tc, tr, T=200, seed=4)
    assert rec.outcome == "SURVIVED"


def test_tablebase_strategy_assignment_mismatch():
    g, _ = gen_grid(4)
    table = build_copwin(g, (0, 0))
    with pytest.raises(StrategyMismatchError):
        run_match(g, AllocationPlan((1, 1)), TablebaseCops(table), RandomRobber(), T=2, seed=0)


# -- scripted strategies ----------------------------------------------------------------------


@pytest.mark.parametrize("n", [4, 5, 6])
@pytest.mark.parametrize("alloc", [(0, 2), (2, 0)])
def test_grid_guard_beats_optimal_robber(n, alloc):
    g, _ = gen_grid(n)
    _, tr, _ = tablebase_pair(g, AllocationPlan(alloc))
    rec = run_match(g, AllocationPlan(alloc), GridCopGuard(n), tr, T=30 * n * n, seed=7)
    assert rec.outcome == "CAPTURE"
    assert referee_check(rec, g)[0]


@pytest.mark.parametrize("n", [4, 5, 6])
def test_grid_corner_survives_optimal_cops(n):
    g, _ = gen_grid(n)
    tc, _, _ = tablebase_pair(g, AllocationPlan((1, 1)))
    rec = run_match(g, AllocationPlan((1, 1)), tc, GridRobberCorner(n), T=500, seed=8)
    assert rec.outcome == "SURVIVED"
    assert referee_check(rec, g)[0]


def test_grid_guard_rejects_wrong_graph_or_alloc():
    g, _ = gen_grid(4)
    with pytest.raises(StrategyMismatchError):
        run_match(g, AllocationPlan((1, 1)), GridCopGuard(4), RandomRobber(), T=2, seed=0)
    other = single(cycle(16), 16)
    other2 = MultiLayerGraph(n=16, layers=(cycle(16), cycle(16)))
    with pytest.raises(StrategyMismatchError):
        run_match(other2, AllocationPlan((0, 2)), GridCopGuard(4), RandomRobber(), T=2, seed=0)


def test_slices_robber_survives_one_cop():
    g, _ = gen_slices(2)
    for alloc in ((1, 0), (0, 1)):
        table = build_copwin(g, AllocationPlan(alloc).assignment())
        rec = run_match(g, AllocationPlan(alloc), TablebaseCops(table), SlicesRobber(2), T=1000, seed=3)
        assert rec.outcome == "SURVIVED", alloc
        rec = run_match(g, AllocationPlan(alloc), GreedyCops(), SlicesRobber(2), T=1000, seed=3)
        assert rec.outcome == "SURVIVED", alloc


def test_tree_squeeze_captures_within_bound():
    from mlcr.treealgo import decide_tree_robber

    rng = random.Random(321)
    checked = 0
    while checked < 25:
        n = rng.randint(3, 9)
        tree = tuple(sorted((rng.randrange(v), v) for v in range(1, n)))
        layers = tuple(
            tuple((u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5)
            for _ in range(rng.randint(1, 2))
        )
        g = MultiLayerGraph(n=n, layers=layers, robber_spec=RobberSpec.EXPLICIT, robber_edges=tree)
        verdict, plan = decide_tree_robber(g, rng.randint(1, 2))
        if verdict.winner is not Winner.COP:
            continue
        table = build_copwin(g, plan.assignment())
        rec = run_match(g, plan, TreeSqueezeCops(), TablebaseRobber(table), T=n * (3 * n + 2), seed=checked)
        assert rec.outcome == "CAPTURE"
        assert rec.capture_round <= n * (3 * n + 2)
        checked += 1


def test_tree_squeeze_refuses_robber_win_instances():
    g = MultiLayerGraph(
        n=4, layers=(((0, 1), (1, 2), (2, 3)),), robber_spec=RobberSpec.EXPLICIT,
        robber_edges=((0, 3), (0, 1), (1, 2)),
    )
    with pytest.raises(StrategyMismatchError):
        run_match(g, AllocationPlan((1,)), TreeSqueezeCops(), RandomRobber(), T=2, seed=0)


def test_bagsweep_needs_enough_cops_and_connected_layers():
    from mlcr.bounds import treewidth_exact_small

    path = ((0, 1), (1, 2), (2, 3))
    g = single(path, 4)
    _, decomp = treewidth_exact_small(path, 4)
    with pytest.raises(StrategyMismatchError):
        run_match(g, AllocationPlan((1,)), BagsweepCops(decomp), RandomRobber(), T=2, seed=0)
    rec = run_match(
        g, AllocationPlan((2,)), BagsweepCops(decomp),
        TablebaseRobber(build_copwin(g, (0, 0))), T=200, seed=0,
    )
    assert rec.outcome == "CAPTURE"


def test_copsbane_robber_survives_and_flags_degraded_mode():
    g, _, layout = gen_copsbane(20, seed=3)
    rec = run_match(g, AllocationPlan((2, 2)), GreedyCops(), CopsbaneRobber(layout), T=300, seed=0)
    assert rec.outcome == "SURVIVED"
    assert referee_check(rec, g)[0]


# -- interactive play --------------------------------------------------------------------------


def _scripted_io(answers):
    answers = iter(answers)

    def fake_input(prompt):
        return next(answers)

    outputs = []
    return fake_input, outputs.append, outputs


def test_interactive_play_quit():
    g, _ = gen_grid(4)
    fake_input, sink, _ = _scripted_io(["quit"])
    rec = interactive_play(g, AllocationPlan((2, 0)), "robber", fake_input, sink)
    assert rec.outcome == "ABANDONED"


def test_interactive_play_robber_gets_captured():
    g = single(((0, 1), (1, 2)), 3)
    # engine cop chases; the human robber stands still at vertex 2 then walks in
    answers = ["2", "2", "2", "2", "2"]
    fake_input, sink, out = _scripted_io(answers)
    rec = interactive_play(g, AllocationPlan((1,)), "robber", fake_input, sink, max_rounds=5)
    assert rec.outcome == "CAPTURE"


def test_interactive_play_reprompts_on_illegal():
    g = single(((0, 1), (1, 2)), 3)
    # illegal then legal placement, then quit
    answers = ["9", "banana", "2", "quit"]
    fake_input, sink, out = _scripted_io(answers)
    rec = interactive_play(g, AllocationPlan((1,)), "robber", fake_input, sink, max_rounds=1)
    assert rec.outcome in ("ABANDONED", "SURVIVED", "CAPTURE")
    assert any("vertex" in line or "illegal" in line for line in out)


def test_interactive_play_human_cops_capture():
    g = single(((0, 1), (1, 2)), 3)
    # cop placed at 1 dominates the path; any robber placement loses at once
    answers = ["1", "0", "1", "2"]
    fake_input, sink, out = _scripted_io(answers)
    rec = interactive_play(g, AllocationPlan((1,)), "cops", fake_input, sink, max_rounds=4)
    assert rec.outcome == "CAPTURE"


def test_match_record_tags_round_trip():
    g, _, layout = gen_copsbane(8, seed=1)
    rec = run_match(g, AllocationPlan((2, 2)), GreedyCops(), CopsbaneRobber(layout), T=30, seed=2)
    text = rec.render()
    again = parse_match_record(text)
    assert again.tags == rec.tags
    assert again.outcome == rec.outcome
