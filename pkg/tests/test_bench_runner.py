import pytest

from bench_runner import COLUMNS, CSV_HEADER, read_bench_csv, run_bench, strategy_of, write_bench_csv

pytestmark = pytest.mark.bilinear


def test_strategy_label(block9, witness3):
    assert strategy_of(block9) == "block"
    assert strategy_of(witness3) == "target"


def test_two_levels(block9):
    df = run_bench(block9, 2, seed=5)
    assert list(df.columns) == COLUMNS
    assert df["n"].tolist() == [9, 81]
    assert df["t"].tolist() == [7, 49]
    assert df["counted_rep"].tolist() == [343, 117649]
    assert df["counted_naive"].tolist() == [729, 531441]
    assert df["verified"].all()
    assert (df["seed"] == 5).all()
    assert (df["strategy"] == "block").all()
    assert df["ratio"].iloc[0] == pytest.approx(343 / 729, abs=1e-6)


@pytest.mark.slow
def test_three_levels(block9):
    df = run_bench(block9, 3)
    assert df["counted_rep"].tolist() == [343, 117649, 40353607]
    assert df["counted_naive"].tolist() == [729, 531441, 387420489]
    assert df["verified"].all()


def test_csv_is_deterministic(tmp_path, block9, mocker):
    mocker.patch("bench_runner.time.perf_counter", return_value=0.0)
    a = write_bench_csv(run_bench(block9, 2, seed=1), tmp_path / "a.csv")
    b = write_bench_csv(run_bench(block9, 2, seed=1), tmp_path / "b.csv")
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[1] == ",".join(COLUMNS)


def test_csv_round_trip(tmp_path, trivial3):
    df = run_bench(trivial3, 1, seed=0)
    path = write_bench_csv(df, tmp_path / "bench.csv")
    back = read_bench_csv(path)
    assert back["counted_rep"].tolist() == [27]
    assert back["counted_naive"].tolist() == [27]
    assert back["ratio"].tolist() == [1.0]
    assert bool(back["verified"].iloc[0])
