import csv
import io
import json
import subprocess
import sys

import pytest

from fig8jones.cache import HEADER, CacheFormatError, PolynomialCache, checksum, dumps, loads
from fig8jones.cli import main, parse_int_list, strip_timestamp
from fig8jones.jones import habiro_exact


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def run_json(argv, capsys):
    code, out = run(argv, capsys)
    return code, json.loads(out)


# -- subcommands -------------------------------------------------------------------


def test_eval_kashaev_point(capsys):
    code, rep = run_json(["eval", "--n", "2", "--a", "2pi*i"], capsys)
    assert code == 0
    assert float(rep["results"]["value_re"][0]) == 5
    assert abs(float(rep["results"]["value_im"][0])) < 1e-30
    assert set(rep) == {"meta", "params", "results", "verdicts"}
    assert rep["meta"]["command"] == "eval" and rep["meta"]["precision"] == 128


def test_eval_at_zero(capsys):
    code, rep = run_json(["eval", "--n", "2", "--a", "0"], capsys)
    assert code == 0
    assert float(rep["results"]["value_re"][0]) == 1 and float(rep["results"]["value_im"][0]) == 0


def test_limit_passes(capsys):
    code, rep = run_json(["limit", "--a", "0.5", "--schedule", "25,50,100"], capsys)
    assert code == 0
    assert all(rep["verdicts"].values())
    assert rep["results"]["N"] == [25, 50, 100]


def test_limit_fails_tight_threshold(capsys):
    code, rep = run_json(["limit", "--a", "0.5", "--schedule", "25,50", "--threshold", "1e-12"], capsys)
    assert code == 1
    assert rep["verdicts"]["final_relative_error_below_threshold"] is False


def test_limit_outside_refused_then_exploratory(capsys):
    assert main(["limit", "--a", "1.5", "--schedule", "10,20"]) == 2
    code, rep = run_json(["limit", "--a", "1.5", "--schedule", "10,20", "--allow-outside"], capsys)
    assert code == 0
    assert rep["params"]["exploratory"] is True and rep["verdicts"] == {}


def test_shifted(capsys):
    code, rep = run_json(["shifted", "--a", "0.5", "--l", "1", "--schedule", "50,100"], capsys)
    assert code == 0 and rep["verdicts"]["within_bounds"]


def test_growth(capsys):
    code, rep = run_json(["growth", "--schedule", "100,200,400"], capsys)
    assert rep["params"]["decreasing"] is True
    assert code == (0 if rep["verdicts"]["within_5_percent_of_reference"] else 1)


def test_mmr(capsys):
    code, rep = run_json(["mmr"], capsys)
    assert code == 0
    assert rep["results"]["diagonal"] == ["1", "0", "1", "0", "13/12", "0", "421/360"]


def test_mmr_too_few_nodes_is_usage_error():
    assert main(["mmr", "--n-set", "2..5"]) == 2


def test_lemmas_only(capsys):
    code, rep = run_json(["lemmas", "--only", "exp_integral,re_a2"], capsys)
    assert code == 0
    assert rep["results"]["lemma_id"] == ["exp_integral", "re_a2"]
    assert main(["lemmas", "--only", "bogus"]) == 2


def test_recursion_csv(capsys):
    code, out = run(["recursion", "--n", "3..10", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["N", "residual", "residual_terms"]
    assert [r[0] for r in rows[1:]] == [str(n) for n in range(3, 11)]
    assert all(r[1] == "zero" for r in rows[1:])


def test_region(capsys):
    code, rep = run_json(["region", "--a", "0.5"], capsys)
    assert code == 0
    assert rep["results"]["inside"] == [True]
    code, rep = run_json(["region", "--a", "2pi*i"], capsys)
    assert code == 0 and rep["results"]["inside"] == [False]


def test_region_at_pole_has_no_target(capsys):
    code, rep = run_json(["region", "--a", "0.9624236501192068949955178268487368462703"], capsys)
    assert code == 0 and rep["results"]["target_re"] == [None]


# -- exit codes ------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--n", "0", "--a", "0.3"],
        ["eval", "--n", "5", "--a", "zz"],
        ["eval", "--n", "5"],
        ["eval", "--n", "5", "--a", "0.3", "--precision", "40"],
        ["limit", "--a", "0.3", "--schedule", "100,50"],
        ["recursion", "--n", "2..4"],
        ["nosuch"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_io_error(tmp_path, capsys):
    assert main(["eval", "--n", "3", "--a", "0.3", "--out", str(tmp_path / "no" / "such" / "r.json")]) == 3
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["recursion", "--n", "3", "--cache", str(blocker / "sub")]) == 3


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert main(["eval", "--n", "4", "--a", "0.3", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text())["params"]["N"] == 4


def test_parse_int_list():
    assert parse_int_list("3..6") == [3, 4, 5, 6]
    assert parse_int_list("100, 200,400") == [100, 200, 400]
    assert parse_int_list("2..4,9") == [2, 3, 4, 9]


# -- determinism -------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["limit", "--a", "0.3+0.2i", "--schedule", "20,40"],
        ["mmr", "--j-max", "4", "--n-set", "2..8"],
        ["region", "--a", "0.25i"],
    ],
)
def test_reports_reproducible(argv, capsys):
    _, a = run_json(argv, capsys)
    _, b = run_json(argv, capsys)
    assert json.dumps(strip_timestamp(a)) == json.dumps(strip_timestamp(b))


def test_byte_identical_with_fixed_epoch(monkeypatch, capsys):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    argv = ["eval", "--n", "30", "--a", "0.4+0.3i"]
    _, a = run(argv, capsys)
    _, b = run(argv, capsys)
    assert a == b
    assert json.loads(a)["meta"]["timestamp"] == "2023-11-14T22:13:20+00:00"


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "fig8jones.cli", "eval", "--n", "3", "--a", "2pi*i", "--format", "csv"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "N,l,value_re,value_im,delta,inside"


# -- cache ---------------------------------------------------------------------------------


def test_cache_round_trip_and_hits(tmp_path):
    cache = PolynomialCache(tmp_path / "c")
    first = cache(9)
    assert cache.misses == 1
    again = PolynomialCache(tmp_path / "c")(9)
    assert checksum(again) == checksum(first) == checksum(habiro_exact(9))
    text = (tmp_path / "c" / "jones_fig8_N9.txt").read_text()
    assert text.splitlines()[0] == HEADER.format(n=9)


def test_cache_used_by_cli(tmp_path, capsys):
    argv = ["recursion", "--n", "3..6", "--cache", str(tmp_path)]
    _, a = run_json(argv, capsys)
    _, b = run_json(argv, capsys)
    assert strip_timestamp(a) == strip_timestamp(b)
    assert len(list(tmp_path.glob("jones_fig8_N*.txt"))) == 6  # N = 1..6


def test_cache_format_errors():
    good = dumps(habiro_exact(3))
    assert loads(good).poly == habiro_exact(3).poly
    with pytest.raises(CacheFormatError):
        loads("")
    with pytest.raises(CacheFormatError):
        loads("not a header\n0 1\n")
    lines = good.splitlines()
    with pytest.raises(CacheFormatError):
        loads("\n".join([lines[0], lines[2], lines[1]]))
