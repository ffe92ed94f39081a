import json

import numpy as np
import pytest

from cli import dispatch
from config import PRIME_POWER_MESSAGE, build_config
from errors import ModrepError
from gadget_store import GadgetFile, load_gadget, save_gadget
from matrix_io import load_matrix, parse_matrix, save_matrix
from zmod import factorize, identity

pytestmark = [pytest.mark.cli, pytest.mark.integration]


@pytest.fixture
def g9_path(tmp_path):
    path = tmp_path / "g9.json"
    assert dispatch(["gadget", "--m", "6", "--n", "9", "--strategy", "block",
                     "--block-size", "3", "--out", str(path)]) == 0
    return path


# ── gadget ───────────────────────────────────────────────────────────────────

def test_gadget_block(g9_path):
    g = load_gadget(g9_path)
    assert (g.n, g.t, g.mod.m) == (9, 7, 6)
    assert g.recipe == "block(n=9,s=3)"


def test_gadget_summary_line(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert dispatch(["gadget", "--n", "9", "--strategy", "block", "--block-size", "3", "--out", str(out)]) == 0
    assert "gadget n=9 t=7 m=6 seed=0" in capsys.readouterr().out


def test_gadget_json_records_seed(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert dispatch(["gadget", "--n", "9", "--strategy", "block", "--block-size", "3",
                     "--seed", "5", "--format", "json", "--out", str(out)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["seed"] == 5
    assert payload["t"] == 7


def test_gadget_to_stdout(capsys):
    assert dispatch(["gadget", "--n", "3", "--strategy", "trivial"]) == 0
    record = GadgetFile.model_validate_json(capsys.readouterr().out)
    assert record.t == 3
    assert record.recipe == "trivial(n=3)"


def test_gadget_levels(tmp_path):
    path = tmp_path / "g81.json"
    assert dispatch(["gadget", "--n", "9", "--strategy", "block", "--block-size", "3",
                     "--levels", "2", "--out", str(path)]) == 0
    g = load_gadget(path)
    assert (g.n, g.t) == (81, 49)


def test_gadget_from_target_file(tmp_path):
    target = tmp_path / "M.txt"
    save_matrix(target, np.array([[1, 4, 3], [4, 1, 0], [3, 0, 1]]), factorize(6))
    out = tmp_path / "g.json"
    assert dispatch(["gadget", "--strategy", "target", "--target", str(target), "--out", str(out)]) == 0
    assert load_gadget(out).t == 2


def test_prime_power_rejected(capsys):
    assert dispatch(["gadget", "--m", "8", "--n", "3", "--strategy", "trivial"]) == 3
    assert PRIME_POWER_MESSAGE in capsys.readouterr().err


def test_non_square_free_rejected():
    assert dispatch(["gadget", "--m", "12", "--n", "3", "--strategy", "trivial"]) == 3


def test_unknown_flag_exits_3():
    with pytest.raises(SystemExit) as exc:
        dispatch(["gadget", "--colour", "red"])
    assert exc.value.code == 3


def test_unknown_command_exits_3():
    with pytest.raises(SystemExit) as exc:
        dispatch(["frobnicate"])
    assert exc.value.code == 3


def test_search_budget_exhausted(capsys):
    code = dispatch(["gadget", "--n", "3", "--strategy", "search", "--t-goal", "1",
                     "--budget", "50", "--format", "json"])
    assert code == 2
    payload = json.loads(capsys.readouterr().out)
    assert payload["found"] is False
    assert payload["seed"] == 0


def test_exhaustive_infeasible():
    assert dispatch(["gadget", "--n", "3", "--strategy", "exhaustive", "--t", "2"]) == 2


def test_exhaustive_found(tmp_path):
    out = tmp_path / "e.json"
    assert dispatch(["gadget", "--n", "2", "--strategy", "exhaustive", "--t", "2", "--out", str(out)]) == 0
    assert np.array_equal(load_gadget(out).B, identity(2))


def test_missing_required_parameter(capsys):
    assert dispatch(["gadget", "--strategy", "block", "--n", "9"]) == 3
    assert "--block-size" in capsys.readouterr().err


def test_search_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert dispatch(["gadget", "--n", "4", "--strategy", "search", "--t-goal", "4",
                         "--seed", "7", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


# ── verify ───────────────────────────────────────────────────────────────────

def test_verify_round_trip(g9_path, capsys):
    assert dispatch(["verify", "--gadget", str(g9_path)]) == 0
    out = capsys.readouterr().out
    assert "one-a-strong: confirmed" in out
    assert "probe compress/recover" in out


def test_verify_json(g9_path, capsys):
    assert dispatch(["verify", "--gadget", str(g9_path), "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["one_a_strong"] is True
    assert payload["checks"]["compress/recover"]["one_a_strong"] is True
    assert payload["checks"]["compress/recover"]["exact"] is False


def test_verify_invalid_gadget(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(GadgetFile(m=6, n=2, t=2, B=[1, 0, 0, 1], C=[1, 0, 1, 1]).dumps())
    assert dispatch(["verify", "--gadget", str(path)]) == 1
    assert "INVALID gadget" in capsys.readouterr().out


def test_verify_missing_file(tmp_path, capsys):
    assert dispatch(["verify", "--gadget", str(tmp_path / "nope.json")]) == 3
    assert "not found" in capsys.readouterr().err


# ── compress / recover / matmul ──────────────────────────────────────────────

def test_compress_recover(g9_path, tmp_path, rng):
    mod = factorize(6)
    X = rng.integers(0, 6, size=(9, 9))
    x_path, s_path, r_path = tmp_path / "X.txt", tmp_path / "S.txt", tmp_path / "R.txt"
    save_matrix(x_path, X, mod)
    assert dispatch(["compress", "--gadget", str(g9_path), "--input", str(x_path), "--out", str(s_path)]) == 0
    S, _ = load_matrix(s_path)
    assert S.shape == (7, 7)
    assert dispatch(["recover", "--gadget", str(g9_path), "--input", str(s_path), "--out", str(r_path)]) == 0
    R, _ = load_matrix(r_path)
    g = load_gadget(g9_path)
    M = g.M
    assert np.array_equal(R, (M.T @ X @ M) % 6)


def test_compress_modulus_mismatch(g9_path, tmp_path):
    x_path = tmp_path / "X.txt"
    save_matrix(x_path, identity(9), factorize(10))
    assert dispatch(["compress", "--gadget", str(g9_path), "--input", str(x_path)]) == 3


def test_matmul_naive(tmp_path, capsys):
    mod = factorize(6)
    x_path, y_path = tmp_path / "X.txt", tmp_path / "Y.txt"
    save_matrix(x_path, np.array([[1, 2], [3, 4]]), mod)
    save_matrix(y_path, np.array([[5, 0], [1, 1]]), mod)
    assert dispatch(["matmul", "--naive", "--x", str(x_path), "--y", str(y_path)]) == 0
    captured = capsys.readouterr()
    D, _ = parse_matrix(captured.out)
    assert np.array_equal(D, [[1, 2], [1, 4]])
    assert "counted multiplications: 8" in captured.err


def test_matmul_represented(g9_path, tmp_path, rng, capsys):
    mod = factorize(6)
    x_path, y_path, d_path = tmp_path / "X.txt", tmp_path / "Y.txt", tmp_path / "D.txt"
    save_matrix(x_path, rng.integers(0, 6, size=(9, 9)), mod)
    save_matrix(y_path, rng.integers(0, 6, size=(9, 9)), mod)
    assert dispatch(["matmul", "--gadget", str(g9_path), "--x", str(x_path), "--y", str(y_path),
                     "--out", str(d_path)]) == 0
    assert "counted multiplications: 343" in capsys.readouterr().err
    assert load_matrix(d_path)[0].shape == (9, 9)


# ── bench ────────────────────────────────────────────────────────────────────

def test_bench_csv(g9_path, tmp_path, mocker):
    mocker.patch("bench_runner.time.perf_counter", return_value=0.0)
    csv_a, csv_b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (csv_a, csv_b):
        assert dispatch(["bench", "--gadget", str(g9_path), "--levels", "2", "--csv", str(path)]) == 0
    assert csv_a.read_bytes() == csv_b.read_bytes()
    assert csv_a.read_text().startswith("# modrep-bench v1\n")


@pytest.mark.slow
def test_bench_three_levels(g9_path, tmp_path):
    csv = tmp_path / "out.csv"
    assert dispatch(["bench", "--gadget", str(g9_path), "--levels", "3", "--csv", str(csv)]) == 0
    body = csv.read_text().splitlines()[2:]
    counted = [tuple(int(v) for v in line.split(",")[3:5]) for line in body]
    assert counted == [(343, 729), (117649, 531441), (40353607, 387420489)]


# ── configuration ────────────────────────────────────────────────────────────

def test_yaml_config(tmp_path):
    config = tmp_path / "run.yaml"
    out = tmp_path / "g.json"
    config.write_text(f"m: 6\nn: 9\nstrategy: block\nblock-size: 3\nout: {out}\n")
    assert dispatch(["gadget", "--config", str(config)]) == 0
    assert load_gadget(out).t == 7


def test_cli_overrides_yaml(tmp_path):
    config = tmp_path / "run.yaml"
    config.write_text("n: 9\nstrategy: block\ns: 3\nseed: 4\n")
    cfg = build_config("gadget", {"n": 12, "seed": None}, config)
    assert (cfg.n, cfg.s, cfg.seed, cfg.strategy) == (12, 3, 4, "block")


def test_config_errors(tmp_path):
    with pytest.raises(ModrepError):
        build_config("gadget", {}, tmp_path / "missing.yaml")
    bad = tmp_path / "list.yaml"
    bad.write_text("- 1\n- 2\n")
    with pytest.raises(ModrepError):
        build_config("gadget", {}, bad)


def test_modulus_below_two():
    assert dispatch(["gadget", "--m", "1", "--n", "3", "--strategy", "trivial"]) == 3


def test_saved_gadget_reverifies(tmp_path, witness3):
    path = tmp_path / "w.json"
    save_gadget(path, witness3)
    assert dispatch(["verify", "--gadget", str(path), "--probes"]) == 0
