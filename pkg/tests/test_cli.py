import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import pytest
from click.testing import CliRunner

from matchmaker.cli import main
from matchmaker.matcher import MatchReport

DATA = Path(__file__).parent / "data"

REQUESTED = 'service "R" in(q: String) out(a1: Integer, a2: String)\n'
ADVERTISED = 'service "Q" in(r: String) out(b1: Real, b2: String)\n'


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def files(tmp_path):
    (tmp_path / "r.svc").write_text(REQUESTED)
    (tmp_path / "q.svc").write_text(ADVERTISED)
    (tmp_path / "bad.svc").write_text('service "Y" in(a: Complex) out()\n')
    (tmp_path / "empty.svc").write_text('service "E" in() out()\n')
    reg = tmp_path / "reg"
    reg.mkdir()
    (reg / "1_low.svc").write_text('service "low" in(q: Date) out(a1: Boolean)\n')
    (reg / "2_same.svc").write_text(REQUESTED.replace('"R"', '"same"'))
    (reg / "3_other.svc").write_text(ADVERTISED)
    (tmp_path / "empty_reg").mkdir()
    return tmp_path


# ---------------------------------------------------------------------------
# validate

def test_validate_ok(runner, files):
    result = runner.invoke(main, ["validate", str(files / "r.svc"), str(files / "q.svc")])
    assert result.exit_code == 0
    assert result.stdout == "" and result.stderr == ""


def test_validate_unknown_datatype(runner, files):
    result = runner.invoke(main, ["validate", str(files / "bad.svc")])
    assert result.exit_code == 1
    lines = result.stderr.splitlines()
    assert len(lines) == 1
    assert lines[0] == f"{files / 'bad.svc'}:1:19: error: unknown-datatype: unknown datatype `Complex`"


def test_validate_missing_file(runner, files):
    result = runner.invoke(main, ["validate", str(files / "nope.svc")])
    assert result.exit_code == 2


def test_validate_warning_only(runner, files):
    result = runner.invoke(main, ["validate", str(files / "empty.svc")])
    assert result.exit_code == 0
    assert "warning: vacuous-profile" in result.stderr


def test_validate_io_takes_precedence(runner, files):
    result = runner.invoke(main, ["validate", str(files / "bad.svc"), str(files / "nope.svc")])
    assert result.exit_code == 2
    assert len(result.stderr.splitlines()) == 2


# ---------------------------------------------------------------------------
# sim

def test_sim_identical(runner, files):
    result = runner.invoke(main, ["sim", str(files / "r.svc"), str(files / "r.svc")])
    assert result.exit_code == 0
    assert "overall: 10\n" in result.stdout


def test_sim_golden(runner, files):
    result = runner.invoke(main, ["sim", str(files / "r.svc"), str(files / "q.svc")])
    assert result.exit_code == 0
    assert result.stdout == (
        "requested: R\n"
        "advertised: Q\n"
        "input_score: 10\n"
        "output_score: 9\n"
        "overall: 9.5 (19/2)\n"
    )


def test_sim_explain(runner, files):
    result = runner.invoke(main, ["sim", str(files / "r.svc"), str(files / "q.svc"), "--explain"])
    assert result.exit_code == 0
    out = result.stdout
    assert "outputs: flow 18" in out
    assert "a1: Integer -> b1: Real  weight 5" in out
    assert "a2: String -> b2: String  weight 10" in out
    flows = [int(line.rsplit(" ", 1)[1]) for line in out.splitlines() if "weight" in line]
    assert sum(flows) == 10 + 18


def test_sim_strategies_agree_on_scores(runner, files):
    outs = []
    for strategy in ("dfs", "bfs"):
        result = runner.invoke(main, ["sim", str(files / "r.svc"), str(files / "q.svc"), "--strategy", strategy])
        assert result.exit_code == 0
        outs.append(result.stdout)
    assert outs[0] == outs[1]


def test_sim_json_round_trip(runner, files):
    result = runner.invoke(main, ["sim", str(files / "r.svc"), str(files / "q.svc"), "--format", "json", "--explain"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    report = MatchReport.from_dict(data)
    assert report.overall == Fraction(19, 2)
    assert data["overall"] == {"fraction": "19/2", "decimal": "9.5"}
    assert data["requested_name"] == "R"
    assert {e["advertised"] for e in data["explain"]["outputs"]} == {"b1", "b2"}


def test_sim_invalid_descriptor(runner, files):
    result = runner.invoke(main, ["sim", str(files / "bad.svc"), str(files / "q.svc")])
    assert result.exit_code == 1


def test_sim_missing_file(runner, files):
    result = runner.invoke(main, ["sim", str(files / "nope.svc"), str(files / "q.svc")])
    assert result.exit_code == 2


def test_sim_custom_table_flag_and_env(runner, files):
    table = (DATA / "table1.rules").read_text().replace("Integer Real    5", "Integer Real    10")
    (files / "t.rules").write_text(table)
    args = ["sim", str(files / "r.svc"), str(files / "q.svc")]
    with_flag = runner.invoke(main, args + ["--table", str(files / "t.rules")])
    assert with_flag.exit_code == 0
    assert "output_score: 10\n" in with_flag.stdout
    with_env = runner.invoke(main, args, env={"MATCHMAKER_TABLE": str(files / "t.rules")})
    assert with_env.stdout == with_flag.stdout
    flag_wins = runner.invoke(main, args + ["--table", str(DATA / "table1.rules")],
                              env={"MATCHMAKER_TABLE": str(files / "t.rules")})
    assert "output_score: 9\n" in flag_wins.stdout


def test_sim_bad_table(runner, files):
    (files / "bad.rules").write_text("Integer Integer 9\n")
    result = runner.invoke(main, ["sim", str(files / "r.svc"), str(files / "q.svc"), "--table", str(files / "bad.rules")])
    assert result.exit_code == 1
    result = runner.invoke(main, ["sim", str(files / "r.svc"), str(files / "q.svc"), "--table", str(files / "none.rules")])
    assert result.exit_code == 2


def test_unknown_flag_is_usage_error(runner, files):
    result = runner.invoke(main, ["sim", str(files / "r.svc"), str(files / "q.svc"), "--bogus"])
    assert result.exit_code == 2


# ---------------------------------------------------------------------------
# discover

def test_discover_best(runner, files):
    result = runner.invoke(main, ["discover", str(files / "reg"), str(files / "r.svc")])
    assert result.exit_code == 0
    assert result.stdout == "best: same\noverall: 10\nscanned: 2 of 3\n"


def test_discover_ranked(runner, files):
    result = runner.invoke(main, ["discover", str(files / "reg"), str(files / "r.svc"), "--mode", "ranked"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "1. same: overall 10 (input 10, output 10)"
    assert lines[1] == "2. Q: overall 9.5 (19/2) (input 10, output 9)"
    assert lines[-1] == "scanned: 3 of 3"


def test_discover_empty_registry(runner, files):
    result = runner.invoke(main, ["discover", str(files / "empty_reg"), str(files / "r.svc")])
    assert result.exit_code == 0
    assert result.stdout == "no services\n"
    result = runner.invoke(main, ["discover", str(files / "empty_reg"), str(files / "r.svc"), "--format", "json"])
    data = json.loads(result.stdout)
    assert data["best"] is None and data["scanned_count"] == 0


def test_discover_json(runner, files):
    result = runner.invoke(main, ["discover", str(files / "reg"), str(files / "r.svc"), "--format", "json"])
    data = json.loads(result.stdout)
    assert data["scanned_count"] == 2 and data["registry_size"] == 3
    assert MatchReport.from_dict(data["best"]).advertised_name == "same"


def test_discover_zero_score_exits_zero(runner, files):
    (files / "z.svc").write_text('service "z" in(x: Real) out(y: Real)\n')
    (files / "zreg.svcreg").write_text('service "d" in(x: Date) out(y: Date)\n')
    result = runner.invoke(main, ["discover", str(files / "zreg.svcreg"), str(files / "z.svc")])
    assert result.exit_code == 0
    assert "overall: 0\n" in result.stdout


def test_discover_errors(runner, files):
    result = runner.invoke(main, ["discover", str(files / "missing.svcreg"), str(files / "r.svc")])
    assert result.exit_code == 2
    (files / "dup.svcreg").write_text(REQUESTED + "---\n" + REQUESTED)
    result = runner.invoke(main, ["discover", str(files / "dup.svcreg"), str(files / "r.svc")])
    assert result.exit_code == 1
    assert "duplicate-name" in result.stderr


def test_discover_jobs(runner, files):
    args = ["discover", str(files / "reg"), str(files / "r.svc"), "--mode", "ranked"]
    assert runner.invoke(main, args + ["--jobs", "3"]).stdout == runner.invoke(main, args).stdout


# ---------------------------------------------------------------------------
# bench

def _bench_rows(output):
    return list(csv.DictReader(io.StringIO(output)))


def test_bench_header_and_rows(runner):
    result = runner.invoke(main, ["bench", "--sizes", "1,4", "--seeds", "3"])
    assert result.exit_code == 0
    assert result.stdout.splitlines()[0] == "strategy,vertices,edges,fmax,iterations,nanos"
    rows = _bench_rows(result.stdout)
    assert len(rows) == 2 * 2 * 3
    for row in rows:
        fmax, iterations = int(row["fmax"]), int(row["iterations"])
        if row["vertices"] == "4":
            assert fmax <= 10 and iterations <= 1
        assert iterations <= fmax
        assert iterations <= int(row["vertices"]) * int(row["edges"])


def test_bench_reproducible(runner):
    runs = [runner.invoke(main, ["bench", "--sizes", "5,8", "--seeds", "4", "--seed", "11"]) for _ in range(2)]
    strip = [[r[:-1] for r in csv.reader(io.StringIO(x.stdout))] for x in runs]
    assert strip[0] == strip[1]
    other = runner.invoke(main, ["bench", "--sizes", "5,8", "--seeds", "4", "--seed", "12"])
    assert [r[:-1] for r in csv.reader(io.StringIO(other.stdout))] != strip[0]


@pytest.mark.parametrize("sizes", ["0", "a,b", ""])
def test_bench_bad_sizes(runner, sizes):
    assert runner.invoke(main, ["bench", "--sizes", sizes]).exit_code == 2


def test_bench_bound_failure_exits_one(runner, monkeypatch):
    from matchmaker import bench

    real = bench.max_flow

    def lying(net, strategy):
        flow = real(net, strategy)
        return type(flow)(flow.amount, flow.value, flow.value + 1)

    monkeypatch.setattr(bench, "max_flow", lying)
    result = runner.invoke(main, ["bench", "--sizes", "3", "--seeds", "1"])
    assert result.exit_code == 1
    assert "bound violated" in result.stderr
