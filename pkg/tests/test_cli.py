import json

import numpy as np

from exactnmf.cli import main
from exactnmf.generators import ledm_integer, regular_ngon_slack
from exactnmf.linalg import relative_error
from exactnmf.matrixio import read_matrix, write_matrix


def test_generate_registry_matrix(tmp_path, capsys):
    out = tmp_path / "ledm6.txt"
    assert main(["generate", "--name", "LEDM6", "--out", str(out)]) == 0
    M = read_matrix(out)
    assert M.shape == (6, 6)
    assert np.array_equal(M, ledm_integer(6))
    assert out.read_text().splitlines()[0] == "6 6"


def test_generate_parametric_csv(tmp_path):
    out = tmp_path / "ngon.csv"
    assert main(["generate", "--family", "ngon", "--n", "8", "--out", str(out)]) == 0
    assert np.array_equal(read_matrix(out), regular_ngon_slack(8))


def test_generate_list(capsys):
    assert main(["generate", "--list"]) == 0
    names = capsys.readouterr().out.split()
    assert "LEDM6" in names and "24-C" in names and len(names) == 18


def test_generate_unknown_name(tmp_path, capsys):
    code = main(["generate", "--name", "LEDM99", "--out", str(tmp_path / "x.txt")])
    assert code == 2  # usage error
    assert "LEDM6" in capsys.readouterr().err  # lists the valid names


def test_factorize_unknown_name_lists_registry(tmp_path, capsys):
    code = main(["factorize", "--name", "LEDM99", "--r", "3", "--out", str(tmp_path)])
    assert code == 2
    assert "24-C" in capsys.readouterr().err


def test_rank_command(tmp_path, capsys):
    path = tmp_path / "m.txt"
    write_matrix(ledm_integer(6), path)
    assert main(["rank", "--matrix", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "rank 3"


def test_factorize_hexagon(tmp_path, capsys):
    code = main(["factorize", "--name", "6-G", "--r", "5", "--heuristic", "rbr",
                 "--seed", "1", "--fr-sweeps", "10000", "--out", str(tmp_path)])
    assert code == 0
    W = read_matrix(tmp_path / "6-G_W.txt")
    H = read_matrix(tmp_path / "6-G_H.txt")
    assert W.shape == (6, 5) and H.shape == (5, 6)
    assert W.min() >= 0 and H.min() >= 0
    record = json.loads((tmp_path / "6-G_run.json").read_text())
    assert record["success"] is True
    assert record["error"] <= 1e-6
    assert record["heuristic"] == "rbr"
    assert {"matrix", "m", "n", "r", "init", "solver", "seed",
            "sweeps", "elapsed_s"} <= record.keys()
    # the written factors reproduce the reported error
    err = relative_error(regular_ngon_slack(6), W, H)
    assert abs(err - record["error"]) <= 1e-12


def test_factorize_budget_exhausted_is_exit_3(tmp_path, capsys):
    # hexagon at rank 4 has no exact factorization; tiny budget, one run
    code = main(["factorize", "--name", "6-G", "--r", "4", "--heuristic", "ms1",
                 "--fr-sweeps", "200", "--out", str(tmp_path)])
    assert code == 3
    record = json.loads((tmp_path / "6-G_run.json").read_text())
    assert record["success"] is False
    assert not (tmp_path / "6-G_W.txt").exists()


def test_factorize_from_file_and_retry_seeds(tmp_path):
    path = tmp_path / "prod.txt"
    rng = np.random.default_rng(0)
    W = rng.random((8, 2))
    H = rng.random((2, 7))
    write_matrix(W @ H, path)
    code = main(["factorize", "--matrix", str(path), "--r", "2", "--runs", "3",
                 "--heuristic", "ms1", "--fr-sweeps", "2000", "--out", str(tmp_path)])
    assert code == 0
    record = json.loads((tmp_path / "prod_run.json").read_text())
    assert record["m"] == 8 and record["n"] == 7


def test_factorize_usage_error_without_matrix(capsys):
    assert main(["factorize", "--r", "3"]) == 2


def test_missing_subcommand_is_usage_error():
    assert main([]) == 2
    assert main(["--help"]) == 0


def test_verify_command(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert out.count("ok") == 18


def test_sweep_command(tmp_path, capsys):
    code = main(["sweep", "--param", "rbr.attempts_per_stage", "--values", "1,2",
                 "--heuristic", "rbr", "--matrices", "6-G",
                 "--max-runs", "2", "--target", "1", "--check-every", "2",
                 "--out", str(tmp_path)])
    assert code == 0
    md = (tmp_path / "sweep_rbr_attempts_per_stage.md").read_text()
    assert "rbr.attempts_per_stage=1" in md
    assert (tmp_path / "sweep_rbr_attempts_per_stage.csv").exists()


def test_bench_command(tmp_path):
    code = main(["bench", "--table", "t2", "--scale", "small",
                 "--matrices", "RND1", "--out", str(tmp_path)])
    assert code == 0
    md = (tmp_path / "table_t2_small.md").read_text()
    assert "MS2(200,20)" in md
    assert "RND1" in md
