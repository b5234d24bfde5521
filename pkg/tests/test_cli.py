"""End-to-end command-line behaviour."""

import json

import pytest

from summarysd.cli import main

SAMPLE_CSV = """study_id,n,min,q1,median,q3,max
alpha,10,0,,4,,10
beta,12,0,2,3,5,9
gamma,20,,1,2,3,
delta,9,5,,5,,5
omega,8,,3,2,1,
"""


@pytest.fixture
def sample_file(tmp_path):
    path = tmp_path / "studies.csv"
    path.write_text(SAMPLE_CSV)
    return path


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEstimate:
    def test_sample_file(self, capsys, sample_file):
        code, out, err = run(capsys, "estimate", str(sample_file))
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "study_id,scenario,mean,sd,divisor,correction,degenerate"
        assert len(lines) == 5  # header + 4 estimates
        assert sum(1 for line in err.splitlines() if line.startswith("error:")) == 1
        assert "omega" in err

    def test_known_row_values(self, capsys, sample_file):
        from summarysd.estimators import xi_hat

        code, out, _ = run(capsys, "estimate", str(sample_file))
        alpha = out.strip().splitlines()[1].split(",")
        assert alpha[0] == "alpha"
        assert alpha[1] == "c1"
        assert float(alpha[2]) == pytest.approx(4.55)
        assert float(alpha[3]) == pytest.approx(10 / xi_hat(10), rel=1e-5)

    def test_scenario_priority(self, capsys, sample_file):
        _, out, _ = run(capsys, "estimate", str(sample_file))
        beta = [l for l in out.splitlines() if l.startswith("beta,")][0]
        assert beta.split(",")[1] == "c2"

    def test_degenerate_row_flagged(self, capsys, sample_file):
        _, out, _ = run(capsys, "estimate", str(sample_file))
        row = [l for l in out.splitlines() if l.startswith("delta,")][0].split(",")
        assert float(row[3]) == 0.0
        assert row[6] == "1"

    def test_byte_stable(self, capsys, sample_file):
        _, out1, err1 = run(capsys, "estimate", str(sample_file))
        _, out2, err2 = run(capsys, "estimate", str(sample_file))
        assert out1 == out2
        assert err1 == err2

    def test_jsonl_format(self, capsys, sample_file):
        code, out, _ = run(capsys, "estimate", str(sample_file), "--format", "jsonl")
        assert code == 0
        records = [json.loads(line) for line in out.strip().splitlines()]
        assert len(records) == 4
        assert records[0]["study_id"] == "alpha"

    def test_own_output_rejected(self, capsys, sample_file, tmp_path):
        _, out, _ = run(capsys, "estimate", str(sample_file))
        loop = tmp_path / "loop.csv"
        loop.write_text(out)
        code, _, err = run(capsys, "estimate", str(loop))
        assert code == 2
        assert "malformed header" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "estimate", "/nonexistent/input.csv")
        assert code == 2
        assert "error:" in err

    def test_scenario_override(self, capsys, sample_file):
        _, out, _ = run(capsys, "estimate", str(sample_file), "--scenario", "c3")
        rows = out.strip().splitlines()[1:]
        # Only beta and gamma have quartiles; alpha and delta now fail.
        assert {r.split(",")[0] for r in rows} == {"beta", "gamma"}
        assert all(r.split(",")[1] == "c3" for r in rows)

    def test_duplicate_id_is_row_error(self, capsys, tmp_path):
        path = tmp_path / "dup.csv"
        path.write_text("study_id,n,min,median,max\na,10,0,4,10\na,10,0,4,10\n")
        code, out, err = run(capsys, "estimate", str(path))
        assert code == 0
        assert len(out.strip().splitlines()) == 2
        assert "duplicate" in err


class TestTables:
    def test_default_range(self, capsys):
        code, out, _ = run(capsys, "tables", "--which", "xi")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 1 + 49
        first = lines[1].split("\t")
        assert first[0] == "2"
        assert float(first[1]) == 1.128

    def test_residual_column_small(self, capsys):
        _, out, _ = run(capsys, "tables", "--which", "xi")
        residuals = [abs(float(l.split("\t")[4])) for l in out.strip().splitlines()[1:]]
        assert max(residuals) <= 0.006

    def test_beyond_fixture_range(self, capsys):
        code, out, _ = run(capsys, "tables", "--which", "eta", "--range", "60:63")
        assert code == 0
        lines = out.strip().splitlines()[1:]
        assert len(lines) == 4
        for line in lines:
            cols = line.split("\t")
            assert cols[1] == ""  # no table value
            assert cols[2] != "" and cols[3] != ""

    def test_bad_range(self, capsys):
        code, _, err = run(capsys, "tables", "--range", "9:2")
        assert code == 2
        assert "range" in err


class TestRefit:
    def test_epsilon_summary(self, capsys):
        code, out, _ = run(capsys, "refit", "--kind", "epsilon")
        assert code == 0
        assert "-2.88221" in out
        assert "-0.23079" in out

    def test_delta_summary(self, capsys):
        code, out, _ = run(capsys, "refit", "--kind", "delta")
        assert code == 0
        assert "-0.06259" in out
        assert "0.01966" in out

    def test_second_order(self, capsys):
        code, out, _ = run(capsys, "refit", "--kind", "epsilon", "--order", "second")
        assert code == 0
        assert "45 degrees of freedom" in out

    def test_delta_second_rejected(self, capsys):
        code, _, err = run(capsys, "refit", "--kind", "delta", "--order", "second")
        assert code == 2
        assert "epsilon" in err

    def test_emit_series(self, capsys, tmp_path):
        path = tmp_path / "series.tsv"
        code, _, _ = run(capsys, "refit", "--kind", "delta", "--emit-series", str(path))
        assert code == 0
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "n\tresidual"
        assert len(lines) == 50


class TestOracle:
    def test_xi_analytic_spot(self, capsys):
        code, out, _ = run(capsys, "oracle", "--which", "xi", "--range", "2:2")
        assert code == 0
        n, xi, eta = out.splitlines()[0].split("\t")
        assert n == "2"
        assert float(xi) == pytest.approx(1.1283791670955126, abs=1e-6)
        assert eta == ""

    def test_eta_deterministic(self, capsys):
        args = ("oracle", "--which", "eta", "--range", "4:5", "--reps", "20000",
                "--seed", "7", "--convention", "quarter-groups")
        code1, out1, err1 = run(capsys, *args)
        code2, out2, err2 = run(capsys, *args)
        assert code1 == code2 == 0
        assert out1 == out2
        assert err1 == err2

    def test_report_file(self, capsys, tmp_path):
        report = tmp_path / "report.tsv"
        code, _, err = run(
            capsys, "oracle", "--which", "eta", "--range", "3:3", "--reps", "20000",
            "--convention", "quarter-groups", "--report", str(report),
        )
        assert code == 0
        assert err == ""
        assert "best convention" in report.read_text()

    def test_range_guard(self, capsys):
        code, _, err = run(capsys, "oracle", "--range", "2:99")
        assert code == 2
        assert "limited" in err
