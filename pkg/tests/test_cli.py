import csv
import io
import json

import pytest

from app import cli


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


class TestConstructCommand:
    def test_rounded(self):
        code, output = run(["construct", "--order", "4", "--method", "rounded"])
        assert code == 0
        data = json.loads(output)
        assert data["formula"]["exponents"] == [4, 10]
        assert data["formula"]["coefficients"] == ["-4/21", "25/21"]
        assert "real_formula" not in data

    def test_chin_base4(self):
        code, output = run(["construct", "--order", "6", "--method", "chin", "--base", "4"])
        assert code == 0
        assert json.loads(output)["formula"]["coefficients"] == ["-1/15", "16/15"]

    def test_odd_order_exits_1(self, capsys):
        code, _ = run(["construct", "--order", "5", "--method", "chin"])
        assert code == 1
        assert "even" in capsys.readouterr().err


class TestOptimizeCommand:
    def test_product(self):
        code, output = run(["optimize", "--m", "3"])
        assert code == 0
        data = json.loads(output)
        assert data["exponents"] == [1, 2, 6]
        assert data["objective"] == "min_product"
        assert data["exhaustive"] is False

    def test_enumerate_supports_flag(self):
        code, output = run(["optimize", "--m", "5", "--enumerate-supports"])
        assert code == 0
        data = json.loads(output)
        assert data["exponents"] == [1, 2, 3, 4, 17]
        assert data["exhaustive"] is True

    def test_capped(self):
        code, output = run(["optimize", "--m", "3", "--objective", "k1cap", "--cap", "2"])
        assert code == 0
        assert json.loads(output)["k_norm1"] == 7

    def test_bad_cap_is_usage_error(self):
        with pytest.raises(SystemExit) as exc_info:
            cli.main(["optimize", "--m", "3", "--cap", "two"])
        assert exc_info.value.code == 1


class TestVerifyTablesCommand:
    def test_bundled_tables(self):
        code, output = run(["verify-tables"])
        assert code == 0
        data = json.loads(output)
        assert data["passed"] is True
        assert [r["row_count"] for r in data["reports"]] == [27, 25]

    def test_failed_verification_exits_2(self, tmp_path, base2_fixture_bytes):
        data = json.loads(base2_fixture_bytes)
        data["rows"][0]["coefficients"] = ["1/3", "2/3"]
        path = tmp_path / "corrupt.json"
        path.write_text(json.dumps(data))
        code, output = run(["verify-tables", "--fixtures", str(path)])
        assert code == 2
        assert json.loads(output)["reports"][0]["failed_count"] == 1

    def test_missing_file_exits_1(self, tmp_path):
        code, _ = run(["verify-tables", "--fixtures", str(tmp_path / "absent.json")])
        assert code == 1

    def test_parse_error_exits_1(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text('{"alpha": 2, "rows": [{"section": "min_a1k1"}]}')
        code, _ = run(["verify-tables", "--fixtures", str(path)])
        assert code == 1
        assert "broken.json:rows[0]" in capsys.readouterr().err


class TestCostCommand:
    def test_formula_file(self, tmp_path):
        path = tmp_path / "m2.json"
        path.write_text(json.dumps({"alpha": 2, "order": 4, "exponents": [1, 2], "coefficients": ["-1/3", "4/3"]}))
        code, output = run(
            ["cost", "--t-lambda", "0.1", "--epsilon", "0.1", "--formula", str(path), "--steps", "1", "--unamplified"]
        )
        assert code == 0
        data = json.loads(output)
        assert data["u2_queries"] == 3
        assert data["success_probability_floor"] == pytest.approx(0.36)

    def test_default_formula(self):
        code, output = run(["cost", "--t-lambda", "50", "--epsilon", "1e-8"])
        assert code == 0
        assert json.loads(output)["oaa_multiplier"] % 2 == 1

    def test_invalid_formula_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("[1, 2]")
        code, _ = run(["cost", "--t-lambda", "1", "--epsilon", "0.1", "--formula", str(path)])
        assert code == 1

    def test_missing_arguments(self):
        code, _ = run(["cost", "--t-lambda", "1"])
        assert code == 1

    def test_sweep_csv(self):
        code, output = run(["cost", "--sweep", "--t-lambdas", "10", "100", "--eps-list", "1e-3", "1e-6"])
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(output)))
        assert len(rows) == 4
        assert list(rows[0]) == ["t_lambda", "epsilon", "order", "r", "u2_queries", "progmpf_queries"]


class TestBenchCommands:
    def test_bench_writes_csv(self, tmp_path):
        path = tmp_path / "bench.csv"
        code, output = run(
            ["bench", "--sites", "2", "--time", "1", "--eps-list", "1e-2", "1e-3", "--max-m", "2", "--csv", str(path)]
        )
        assert code == 0
        assert len(json.loads(output)["points"]) == 2
        rows = list(csv.DictReader(path.open()))
        # Two MPF points plus two Suzuki comparison points
        assert len(rows) == 4
        assert rows[0]["formula_id"] == "base2-min_a1k1-m2"

    def test_site_cap_exits_1(self):
        code, _ = run(["bench", "--sites", "9", "--eps-list", "1e-2"])
        assert code == 1

    def test_fig1_csv(self):
        code, output = run(["fig1", "--max-m", "3"])
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(output)))
        assert [row["order"] for row in rows] == ["2", "4", "6"]
        assert rows[1]["chin_k_norm1"] == "3"


class TestUsage:
    def test_unknown_command_exits_1(self):
        with pytest.raises(SystemExit) as exc_info:
            cli.main(["plot"])
        assert exc_info.value.code == 1

    def test_missing_required_option_exits_1(self):
        with pytest.raises(SystemExit) as exc_info:
            cli.main(["construct"])
        assert exc_info.value.code == 1
