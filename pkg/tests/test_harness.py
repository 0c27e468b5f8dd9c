import csv
import io
import json
import math

import pytest

import sortlab.rhbs
from sortlab.core import pow2_ratio
from sortlab.harness import (
    CSV_COLUMNS,
    Fig1Spec,
    main,
    make_row,
    rows_to_csv_text,
    run_fig1,
    run_fig2,
    run_verify,
)


def parse(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    return rows


def test_csv_schema_and_consistency():
    rows = [make_row("one_two", 64, "formula", 300.25), make_row("binary", 8, "exact", 16.0, 3, 10)]
    text = rows_to_csv_text(rows)
    assert "\r" not in text and text.endswith("\n")
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    parsed = parse(text)
    for rec in parsed:
        n = int(rec["n"])
        comparisons = float(rec["comparisons"])
        constant = float(rec["constant_c"])
        assert abs(constant - (comparisons - n * math.log2(n)) / n) < 1e-9
        assert float(rec["p_n"]) == pow2_ratio(n)
    assert parsed[0]["seed"] == "" and parsed[0]["trials"] == ""
    assert parsed[1]["seed"] == "3" and parsed[1]["trials"] == "10"


def test_fig2_rows_and_error_decay():
    rows = run_fig2(64, step=16, variant="star")
    byn: dict = {}
    for rec in rows:
        byn.setdefault(rec.n, {})[rec.source] = rec.comparisons
    assert sorted(byn) == [16, 32, 48, 64]
    for n, pair in byn.items():
        assert set(pair) == {"exact", "formula"}
        assert abs(pair["exact"] - pair["formula"]) < 0.2
    with pytest.raises(ValueError):
        run_fig2(8192)


def test_fig1_small_run_deterministic():
    spec = Fig1Spec(n_from=64, n_to=128, step=64, seed=11, trials=60)
    text1 = rows_to_csv_text(run_fig1(spec))
    text2 = rows_to_csv_text(run_fig1(spec))
    assert text1 == text2
    recs = parse(text1)
    algs = {r["algorithm"] for r in recs}
    assert algs == {"one_two", "one_two_star", "combination", "merge_insertion"}
    for rec in recs:
        if rec["source"] == "monte_carlo":
            assert rec["seed"] != "" and rec["trials"] != ""


def test_fig1_beyond_exact_cap_emits_formula_and_sample_rows():
    spec = Fig1Spec(n_from=128, n_to=128, step=2, seed=3, trials=40, exact_cap=64)
    recs = parse(rows_to_csv_text(run_fig1(spec)))
    sources = {(r["algorithm"], r["source"]) for r in recs}
    for alg in ("one_two", "one_two_star", "combination"):
        assert (alg, "formula") in sources and (alg, "monte_carlo") in sources


def test_verify_all_passes():
    report = run_verify("all")
    assert report["ok"], [c for c in report["checks"] if not c["ok"]]
    with pytest.raises(ValueError):
        run_verify("nonsense")


def test_verify_detects_pivot_mutation(monkeypatch):
    original = sortlab.rhbs.rhbs_pivot

    def skewed(i):
        d = original(i)
        return min(d + 1, i)

    monkeypatch.setattr(sortlab.rhbs, "rhbs_pivot", skewed)
    report = run_verify("rhbs")
    assert not report["ok"]


def test_cli_sort_and_mc(capsys):
    assert main(["sort", "--alg", "one_two", "--n", "100", "--seed", "4"]) == 0
    out1 = capsys.readouterr().out
    assert main(["sort", "--alg", "one_two", "--n", "100", "--seed", "4"]) == 0
    assert capsys.readouterr().out == out1
    assert main(["mc", "--alg", "binary", "--n", "32", "--trials", "50", "--seed", "1"]) == 0
    rec = parse(capsys.readouterr().out)[0]
    assert rec["source"] == "monte_carlo" and rec["trials"] == "50"


def test_cli_expect_and_formulas(capsys):
    assert main(["expect", "--alg", "one_two_star", "--n", "256"]) == 0
    rec = parse(capsys.readouterr().out)[0]
    assert rec["source"] == "exact"
    assert main(["formulas", "--alg", "one_two", "--from", "64", "--to", "128", "--step", "32"]) == 0
    recs = parse(capsys.readouterr().out)
    assert [int(r["n"]) for r in recs] == [64, 96, 128]


def test_cli_verify_exit_codes(capsys):
    assert main(["verify", "--suite", "rhbs"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] and report["suite"] == "rhbs"


def test_cli_writes_files(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    assert main(["fig2", "--to", "32", "--step", "16", "--out", str(out)]) == 0
    recs = parse(out.read_text())
    assert {r["algorithm"] for r in recs} == {"two_merge_star"}
    assert main(["mc", "--alg", "binary", "--n", "16", "--trials", "5", "--seed", "0",
                 "--out", "/nonexistent-dir/x.csv"]) == 3
    capsys.readouterr()


def test_cli_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["mc", "--alg", "mystery", "--n", "8"])
    assert err.value.code == 2
