import csv

import pytest

from mpx.bench import CSV_HEADER, run_bench, summarize, write_csv


def test_run_bench_records():
    records = run_bench([4, 6], trials=2, seed=5)
    assert len(records) == 8  # two methods per (size, trial)
    for rec in records:
        assert rec.wall_time > 0
        assert rec.residuals.max() <= 1e-9
        assert rec.oracle_distance <= 1e-7
    assert {rec.method for rec in records} == {"oracle", "thm33"}


def test_bench_deterministic_instances():
    a = run_bench([4], trials=2, seed=99)
    b = run_bench([4], trials=2, seed=99)
    # wall times differ run to run, distances do not
    assert [r.oracle_distance for r in a] == [r.oracle_distance for r in b]


def test_bench_argument_validation():
    with pytest.raises(ValueError):
        run_bench([4], trials=0, seed=1)
    with pytest.raises(ValueError):
        run_bench([1], trials=1, seed=1)


def test_csv_output(tmp_path):
    records = run_bench([4], trials=1, seed=2)
    path = tmp_path / "bench.csv"
    write_csv(records, path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_HEADER.split(",")
    assert len(rows) == 1 + len(records)
    for row in rows[1:]:
        assert len(row) == 10
        float(row[4])  # wall time parses
        assert float(row[9]) <= 1e-7


def test_summary_lines():
    records = run_bench([4], trials=2, seed=3)
    lines = summarize(records)
    assert len(lines) == 2
    assert lines[0].startswith("size=4 method=oracle")
    assert "max_oracle_distance=" in lines[1]
