import subprocess
import sys

import pytest

from mlcr.cli import main
from mlcr.core import parse_mlg_file, write_mlg_file
from mlcr.generators import gen_grid


@pytest.fixture()
def grid4_file(tmp_path):
    g, _ = gen_grid(4)
    path = tmp_path / "grid4.mlg"
    write_mlg_file(g, path)
    return str(path)


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


# -- solve exit codes ------------------------------------------------------------------


def test_solve_cop_win_exit_zero(grid4_file, capsys):
    code, out, _ = run_cli(["solve", grid4_file, "--allocation", "2,0"], capsys)
    assert code == 0
    assert "VERDICT=COP" in out
    assert "PLACEMENT=" in out


def test_solve_robber_win_exit_one(grid4_file, capsys):
    code, out, _ = run_cli(["solve", grid4_file, "--allocation", "1,1"], capsys)
    assert code == 1
    assert "VERDICT=ROBBER" in out
    assert "SAFE_VERTEX=" in out


def test_solve_missing_file_exit_two(capsys):
    code, _, err = run_cli(["solve", "/nonexistent/graph.mlg", "--allocation", "1"], capsys)
    assert code == 2
    assert "error" in err


def test_solve_budget_exceeded_exit_three(grid4_file, capsys):
    code, _, err = run_cli(
        ["--state-budget", "100", "solve", grid4_file, "--allocation", "2,0"], capsys
    )
    assert code == 3
    assert "budget" in err


def test_solve_requires_exactly_one_mode(grid4_file, capsys):
    code, _, err = run_cli(["solve", grid4_file], capsys)
    assert code == 2
    code, _, err = run_cli(
        ["solve", grid4_file, "--allocation", "2,0", "--cops", "2"], capsys
    )
    assert code == 2


def test_solve_choose_allocation(grid4_file, capsys):
    code, out, _ = run_cli(["solve", grid4_file, "--cops", "2"], capsys)
    assert code == 0
    assert "WINNING_ALLOCATION=2,0" in out


def test_solve_tree_fast_path(tmp_path, capsys):
    from mlcr.core import MultiLayerGraph, RobberSpec

    g = MultiLayerGraph(
        n=4,
        layers=(((0, 1), (1, 2), (2, 3)),),
        robber_spec=RobberSpec.EXPLICIT,
        robber_edges=((0, 3), (0, 1), (1, 2)),
    )
    path = tmp_path / "tree.mlg"
    write_mlg_file(g, path)
    code, out, _ = run_cli(["solve", str(path), "--allocation", "1"], capsys)
    assert code == 1
    assert "METHOD=tree" in out
    assert "ROBBERS_EDGE 0 3 ncops=1 dist=3" in out
    code, out, _ = run_cli(["solve", str(path), "--cops", "2"], capsys)
    assert code == 0 and "METHOD=tree" in out


# -- generate ---------------------------------------------------------------------------


def test_generate_round_trips(tmp_path, capsys):
    out_path = tmp_path / "g.mlg"
    rep_path = tmp_path / "g.report"
    code, out, _ = run_cli(
        ["generate", "grid", "-n", "5", "-o", str(out_path), "--report", str(rep_path)], capsys
    )
    assert code == 0
    g = parse_mlg_file(out_path)
    expected, _ = gen_grid(5)
    assert g.layers == expected.layers
    report = rep_path.read_text()
    assert "FAMILY grid" in report and "CHECK" in report


def test_generate_soifer_and_solve(tmp_path, capsys):
    out_path = tmp_path / "s.mlg"
    code, _, _ = run_cli(["generate", "soifer", "-n", "8", "--tau", "3", "-o", str(out_path)], capsys)
    assert code == 0
    g = parse_mlg_file(out_path)
    assert g.tau == 3


# -- bounds -----------------------------------------------------------------------------


def test_bounds_output_lines(tmp_path, capsys):
    from mlcr.core import MultiLayerGraph

    g = MultiLayerGraph(n=5, layers=(((0, 1), (1, 2), (2, 3), (3, 4), (0, 4)),))
    path = tmp_path / "c5.mlg"
    write_mlg_file(g, path)
    code, out, _ = run_cli(["bounds", str(path)], capsys)
    assert code == 0
    assert "LB_mec=1" in out
    assert "UB_domset=" in out
    assert "UB_treewidth=3" in out


# -- simulate ----------------------------------------------------------------------------


def test_simulate_batch_and_records(grid4_file, tmp_path, capsys):
    rec_path = tmp_path / "matches.mr1"
    code, out, _ = run_cli(
        [
            "simulate", grid4_file,
            "--allocation", "2,0",
            "--cop-strategy", "tablebase",
            "--robber-strategy", "tablebase",
            "--rounds", "100",
            "--batch", "3",
            "--record", str(rec_path),
        ],
        capsys,
    )
    assert code == 0
    assert out.count("MATCH") == 3
    assert "SUMMARY matches=3 captures=3" in out
    assert "MR1" in rec_path.read_text()


def test_simulate_stdout_deterministic(grid4_file, capsys):
    args = [
        "simulate", grid4_file, "--allocation", "1,1",
        "--cop-strategy", "greedy", "--robber-strategy", "random",
        "--rounds", "30", "--batch", "4",
    ]
    _, out1, _ = run_cli(args, capsys)
    _, out2, _ = run_cli(args, capsys)
    assert out1 == out2


# -- experiment -------------------------------------------------------------------------


def test_experiment_csv_shape_and_determinism(capsys):
    args = ["experiment", "-n", "24", "--p", "0.4", "--tau", "2", "--seeds", "1,2,3"]
    code, out1, err = run_cli(args, capsys)
    assert code == 0
    lines = out1.strip().splitlines()
    assert lines[0].startswith("format,n,p,tau,seed,delta_mlg,gamma_greedy")
    assert len([l for l in lines if l.startswith("mlcr-experiment-v1")]) == 3
    assert lines[-1].startswith("summary,")
    assert "wall=" in err  # timings on stderr only
    _, out2, _ = run_cli(args, capsys)
    assert out1 == out2


# -- play -------------------------------------------------------------------------------


def test_play_subprocess_quit(grid4_file):
    proc = subprocess.run(
        [sys.executable, "-m", "mlcr.cli", "play", grid4_file, "--allocation", "2,0", "--role", "robber"],
        input=b"quit\n",
        capture_output=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert b"OUTCOME=ABANDONED" in proc.stdout


# -- verify-paper -----------------------------------------------------------------------


def test_verify_paper_subset(capsys):
    code, out, err = run_cli(["verify-paper", "--only", "c01"], capsys)
    assert code == 0
    assert out.startswith("PASS c01-grid")
    assert "TOTAL 1/1 PASS" in out


def test_experiment_rows_respect_domination_bound(capsys):
    import math as _math

    code, out, _ = run_cli(
        ["experiment", "-n", "48", "--p", "0.5", "--tau", "2", "--seeds", "1,2,3,4"], capsys
    )
    assert code == 0
    for line in out.splitlines():
        if not line.startswith("mlcr-experiment-v1"):
            continue
        _, n, p, tau, seed, delta, gamma, bound, mec_k = line.split(",")
        if int(delta) >= int(tau) * (_math.e - 1):
            assert float(gamma) <= float(bound) + 1e-9


def test_verify_paper_reports_failures(capsys, monkeypatch):
    import mlcr.verify as verify

    def doomed(budget):
        return False, ["injected failure"]

    monkeypatch.setattr(verify, "_REGISTRY", [("c99-doomed", "always fails", doomed)])
    code, out, _ = run_cli(["verify-paper"], capsys)
    assert code == 1
    assert "FAIL c99-doomed" in out
    assert "injected failure" in out
    assert "TOTAL 0/1 PASS" in out


@pytest.mark.parametrize(
    "args",
    [
        ["generate", "grid", "-n", "5"],
        ["generate", "mirror"],
        ["generate", "slices", "-k", "1"],
        ["generate", "cycle-matchings", "-n", "4"],
        ["generate", "soifer", "-n", "9", "--tau", "3"],
        ["generate", "domset-reduction", "-n", "6", "--p", "0.5"],
    ],
)
def test_generate_families_round_trip(args, tmp_path, capsys):
    out = tmp_path / "g.mlg"
    code, _, _ = run_cli(args + ["-o", str(out)], capsys)
    assert code == 0
    g = parse_mlg_file(out)
    assert g.n >= 2


def test_generate_seeded_families_cross_process_deterministic(tmp_path):
    for family, extra in (
        ("copsbane", ["-n", "8"]),
        ("random-layers", ["-n", "16", "--p", "0.4", "--tau", "2"]),
    ):
        blobs = []
        for run in range(2):
            out = tmp_path / f"{family}-{run}.mlg"
            proc = subprocess.run(
                [sys.executable, "-m", "mlcr.cli", "--seed", "9", "generate", family, *extra, "-o", str(out)],
                capture_output=True,
                timeout=300,
            )
            assert proc.returncode == 0, proc.stderr
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1], family


def test_experiment_output_file_matches_stdout(tmp_path, capsys):
    out_file = tmp_path / "rows.csv"
    args = ["experiment", "-n", "20", "--p", "0.3", "--tau", "2", "--seeds", "1,2", "-o", str(out_file)]
    code, out, _ = run_cli(args, capsys)
    assert code == 0
    assert out_file.read_text() == out


def test_experiment_complete_graph_edge_case(capsys):
    code, out, _ = run_cli(["experiment", "-n", "12", "--p", "1.0", "--tau", "1", "--seeds", "7"], capsys)
    assert code == 0
    row = [l for l in out.splitlines() if l.startswith("mlcr-experiment-v1")][0]
    _, n, p, tau, seed, delta, gamma, bound, mec_k = row.split(",")
    assert gamma == "1"  # one pair dominates a complete graph
    assert delta == "11"  # n-1, consistent with the summed-degree minimum


def test_threaded_batches_match_sequential(grid4_file, capsys):
    base = [
        "simulate", grid4_file, "--allocation", "1,1",
        "--cop-strategy", "greedy", "--robber-strategy", "random",
        "--rounds", "20", "--batch", "4",
    ]
    _, seq, _ = run_cli(base, capsys)
    _, par, _ = run_cli(["--threads", "3"] + base, capsys)
    assert seq == par
