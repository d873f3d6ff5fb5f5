import json
import logging
import math

import pytest

from entlifepy.cli import build_parser, emit_table, run
from entlifepy.entlifeTypes import LatticeKind, OutputFormat, ResultTable
from entlifepy.ghz_analysis import group_lifetime, lifetime_scan
from entlifepy.graph_core import make_lattice, pair_threshold


@pytest.fixture(autouse=True)
def restore_logging():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


# ===================================================================
# TABLE RENDERING
# ===================================================================

def test_emit_csv():
    table = ResultTable(command="ghz mlifetime", params={}, columns=["M", "kappa_tau"], rows=[[2, 0.804719]])
    assert emit_table(table, OutputFormat.Csv) == "M,kappa_tau\n2,0.804719000000\n"


def test_emit_empty_table_is_header_only():
    table = ResultTable(command="ghz scan", params={}, columns=["M", "kappa_tau"])
    assert emit_table(table, "csv") == "M,kappa_tau\n"


def test_emit_plain():
    table = ResultTable(command="ghz mlifetime", params={}, columns=["M", "kappa_tau"], rows=[[2, 0.804719]])
    assert emit_table(table, OutputFormat.Plain) == "M  kappa_tau\n2  0.804719000000\n"


def test_emit_json():
    table = ResultTable(command="ghz mbound", params={"p": 1.0}, columns=["M_upper", "ok"],
                        rows=[[float("inf"), True]])
    doc = json.loads(emit_table(table, OutputFormat.Json))
    assert doc == {"command": "ghz mbound", "params": {"p": 1.0}, "columns": ["M_upper", "ok"],
                   "rows": [["inf", True]]}


def test_rows_must_match_columns():
    table = ResultTable(command="x", params={}, columns=["a", "b"])
    with pytest.raises(ValueError):
        table.add_row([1])


# ===================================================================
# COMMANDS
# ===================================================================

def test_mlifetime_csv(capsys):
    code, out = invoke(capsys, "ghz", "mlifetime", "--m", "2")
    assert code == 0
    header, row = out.splitlines()
    assert header == "M,kappa_tau"
    M, kappa = row.split(",")
    assert M == "2"
    assert float(kappa) == pytest.approx(0.5 * math.log(5.0), abs=1e-11)
    assert invoke(capsys, "ghz", "mlifetime", "--m", "2") == (code, out)


def test_mlifetime_json(capsys):
    code, out = invoke(capsys, "ghz", "mlifetime", "--m", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "ghz mlifetime"
    assert doc["params"] == {"lower": False, "m": 2}
    assert doc["columns"] == ["M", "kappa_tau"]
    [[M, kappa]] = doc["rows"]
    assert M == 2
    assert kappa == pytest.approx(0.5 * math.log(5.0), abs=1e-11)


def test_spectrum(capsys):
    code, out = invoke(capsys, "ghz", "spectrum", "--n", "3", "--p", "0.5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "k,sign,lambda,ln_lambda"
    assert lines[1].startswith("0,+,0.281250000000,")
    assert lines[2].startswith("0,-,0.156250000000,")
    assert lines[3].startswith("1,,0.0937500000000,")
    assert len(lines) == 4


def test_mbound(capsys):
    code, out = invoke(capsys, "ghz", "mbound", "--p", "0.99")
    assert code == 0
    row = out.splitlines()[1].split(",")
    assert row[2] == "1051"
    assert row[4] == "true"


def test_mbound_noiseless(capsys):
    code, out = invoke(capsys, "ghz", "mbound", "--p", "1")
    assert code == 0
    assert out.splitlines()[1].endswith(",inf,inf,true")


def test_lifetime_matches_library(capsys):
    code, out = invoke(capsys, "ghz", "lifetime", "--n", "12", "--m", "3")
    assert code == 0
    threshold = group_lifetime(12, 3)
    assert out.splitlines()[1] == f"12,3,{threshold.p:#.12g},{threshold.kappa_t:#.12g}"


def test_scan_keeps_order_and_decreases(capsys):
    code, out = invoke(capsys, "ghz", "scan", "--m-from", "2", "--m-to", "8")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert [int(r[0]) for r in rows] == list(range(2, 9))
    values = [float(r[1]) for r in rows]
    assert values == sorted(values, reverse=True)
    assert values == pytest.approx([v for _, v in lifetime_scan(range(2, 9))], rel=1e-11)


def test_partition_by_groups(capsys):
    code, out = invoke(capsys, "ghz", "partition", "--groups", "0,0,0,0,1,1")
    assert code == 0
    assert out.splitlines()[1].startswith("6,2,2,")


def test_pair_threshold(capsys):
    code, out = invoke(capsys, "graph", "pair-threshold", "--lattice", "linear", "--length", "10", "--pair", "4", "5")
    assert code == 0
    k, l, p_less, kappa = out.splitlines()[1].split(",")
    assert (k, l) == ("4", "5")
    threshold = pair_threshold(make_lattice(LatticeKind.Linear, (10,)), 4, 5)
    assert float(p_less) == pytest.approx(threshold.p, rel=1e-11)
    assert float(kappa) == pytest.approx(0.3327, abs=5e-4)


def test_pair_threshold_default_pair_on_grid(capsys):
    code, out = invoke(capsys, "graph", "pair-threshold", "--lattice", "grid2d", "--dims", "5", "5")
    assert code == 0
    row = out.splitlines()[1].split(",")
    assert row[:2] == ["12", "13"]
    assert float(row[2]) == pytest.approx(0.8281, abs=5e-4)


def test_reduced_pair_from_graph_file(capsys, tmp_path):
    path = tmp_path / "linear4.txt"
    path.write_text("0 1\n1 2\n2 3\n", encoding="utf-8")
    code, out = invoke(capsys, "graph", "reduced-pair", "--graph-file", str(path), "--p", "0.8")
    assert code == 0
    row = out.splitlines()[1].split(",")
    assert row[:2] == ["1", "2"]
    assert float(row[2]) == pytest.approx((1 + 2 * 0.8 ** 3 + 0.8 ** 4) / 4, rel=1e-11)
    assert row[-1] == "true"


def test_bounds(capsys):
    code, out = invoke(capsys, "graph", "degree-bound", "--dk", "4", "--dj", "4")
    assert code == 0
    assert float(out.splitlines()[1].split(",")[2]) == pytest.approx(0.13863, abs=1e-5)

    code, out = invoke(capsys, "graph", "sep-bound", "--lattice", "grid2d", "--dims", "4", "4")
    assert code == 0
    assert out.splitlines()[1].startswith("4,7.0509")


def test_deterministic_output(capsys):
    argv = ("graph", "reduced-pair", "--lattice", "ring", "--length", "6", "--kt", "0.2", "--format", "json")
    first = invoke(capsys, *argv)
    second = invoke(capsys, *argv)
    assert first == second


@pytest.mark.oracle
def test_oracle_verify_cluster(capsys):
    code, out = invoke(capsys, "oracle", "verify", "--suite", "cluster")
    assert code == 0
    rows = out.splitlines()[1:]
    assert rows and all(line.endswith(",true") for line in rows)


# ===================================================================
# ERRORS
# ===================================================================

@pytest.mark.parametrize("argv", [
    ["ghz", "mlifetime", "--m", "2", "--bogus"],
    ["ghz", "mbound", "--p", "0.5", "--kt", "0.1"],
    ["ghz", "mbound"],
    ["nonsense"],
])
def test_usage_errors_exit_1(capsys, argv):
    code, out = invoke(capsys, *argv)
    assert code == 1
    assert out == ""


@pytest.mark.parametrize("argv", [
    ["ghz", "lifetime", "--n", "6", "--m", "4"],
    ["ghz", "mlifetime", "--m", "1"],
    ["graph", "pair-threshold", "--lattice", "linear", "--length", "10", "--pair", "2", "5"],
    ["graph", "reduced-pair", "--p", "0.5"],
    ["ghz", "mbound", "--p", "1.5"],
])
def test_domain_errors_exit_1(capsys, argv):
    code, out = invoke(capsys, *argv)
    assert code == 1
    assert out == ""


def test_help_exits_0(capsys):
    assert run(["--help"]) == 0
    assert "entlifepy" in capsys.readouterr().out


def test_parser_lists_command_groups():
    parser = build_parser()
    args = parser.parse_args(["graph", "sep-bound", "--m", "3"])
    assert (args.group, args.command, args.m) == ("graph", "sep-bound", 3)


def test_setup_logging_writes_rotating_file(tmp_path, monkeypatch):
    import common.logger

    monkeypatch.setattr(common.logger, "_LOGS_DIR", tmp_path)
    logger = common.logger.setup_logging("entlifepy verify (choi)", log_level=logging.INFO, log_to_file=True)
    logger.info("hello")
    for handler in logging.getLogger().handlers:
        handler.flush()
    assert "hello" in (tmp_path / "entlifepy_verify_choi.log").read_text(encoding="utf-8")
