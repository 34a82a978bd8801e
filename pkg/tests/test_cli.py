import csv
import io
import json
import subprocess
import sys

import pytest

from todahurwitz import coefficients as co
from todahurwitz.cli import main


@pytest.fixture(autouse=True)
def _fresh_cache():
    old = co.get_cache()
    co.set_cache(co.CoefficientCache())
    yield
    co.set_cache(old)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


class TestHurwitz:
    def test_value(self):
        code, out, _ = run("hurwitz", "[2,1]", "[2,1]")
        assert code == 0
        assert json.loads(out)["value"] == {"num": "4", "den": "1"}

    def test_verify(self):
        code, out, _ = run("hurwitz", "[1,1]", "[2]", "--verify")
        data = json.loads(out)
        assert code == 0
        half = {"num": "1", "den": "2"}
        assert data["value"] == half and data["closed_form"] == half
        assert data["oracle"] == dict(half, count="1")

    def test_weight_mismatch(self):
        code, _, err = run("hurwitz", "[2]", "[3]")
        assert code == 2 and "weights differ" in err

    def test_parse_error_names_token(self):
        code, _, err = run("hurwitz", "[2,q]", "[2,1]")
        assert code == 2 and "'q'" in err

    def test_budget(self):
        code, _, err = run("hurwitz", "[1,1,1]", "[1,1,1]", "--verify", "--budget", "5")
        assert code == 3 and "budget" in err

    def test_csv(self):
        code, out, _ = run("hurwitz", "[3]", "[3]", "--format", "csv")
        assert code == 0 and next(csv.DictReader(io.StringIO(out)))["value"] == "1/3"


class TestTable:
    def test_csv(self):
        code, out, _ = run("table", "2", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 5
        assert [r["value"] for r in rows] == ["1/1"] + ["1/2"] * 4
        assert rows[2]["delta"] == "[2]" and rows[2]["delta_bar"] == "[1,1]"

    def test_table1(self):
        code, out, _ = run("table", "1")
        data = json.loads(out)
        assert code == 0 and len(data) == 1 and data[0]["value"] == {"num": "1", "den": "1"}

    def test_table3_verify(self):
        code, out, _ = run("table", "3", "--verify")
        data = json.loads(out)
        assert code == 0
        assert sum(1 for r in data if r["d"] == 3) == 9
        assert all(r["oracle"]["num"] == r["value"]["num"] for r in data)

    def test_pretty(self):
        code, out, _ = run("table", "2", "--format", "pretty")
        assert code == 0 and out.splitlines()[1].startswith("---")

    def test_bad_dmax(self):
        assert run("table", "0")[0] == 2

    def test_disagreement_exit(self, monkeypatch):
        from todahurwitz import hurwitz

        real = hurwitz.hurwitz_closed_form
        monkeypatch.setattr(hurwitz, "hurwitz_closed_form", lambda a, b: (real(a, b) or 0) + 1)
        code, _, err = run("hurwitz", "[2,1]", "[2,1]")
        assert code == 4 and "closed_form" in err


class TestOther:
    def test_coeff(self):
        code, out, _ = run("coeff", "[2,1]", "[2,1]")
        data = json.loads(out)
        assert code == 0
        assert [(c["s"], c["r"], c["N"]) for c in data["coefficients"]] == [
            ([3], [2], "4/3"), ([1, 2], [1, 1], "-1/1"), ([2, 1], [1, 1], "-1/1"),
        ]

    def test_coeff_matrix(self):
        code, out, _ = run("coeff", "[1,1]", "[2]", "--matrix", "1,1|1,0", "--format", "pretty")
        assert code == 2
        code, out, _ = run("coeff", "[1,1]", "[2]", "--matrix", "2|1", "--format", "pretty")
        assert code == 0 and out == "2|1\t1/2\n"

    def test_oracle(self):
        code, out, _ = run("oracle", "[2,1]", "[3]")
        data = json.loads(out)
        assert code == 0 and data["count"] == "6" and data["rep_count"] == "2"

    def test_oracle_budget(self):
        assert run("oracle", "[1,1,1,1]", "[1,1,1,1]", "--budget", "10")[0] == 3

    def test_series_check(self, tmp_path):
        export = tmp_path / "series.json"
        code, out, _ = run("series-check", "hurwitz", "--depth", "3", "--export", str(export))
        data = json.loads(out)
        assert code == 0 and data["passed"] is True
        assert {r["check"] for r in data["reports"]} == {
            "mixed_derivatives", "toda_equation", "cut_and_join", "homogeneity"}
        assert json.loads(export.read_text())["bound"] == 3

    def test_series_check_homogeneous(self):
        code, out, _ = run("series-check", "homogeneous", "--alpha", "1", "--depth", "2", "--format", "pretty")
        assert code == 0 and "PASS  homogeneity" in out

    def test_series_depth0(self):
        assert run("series-check", "hurwitz", "--depth", "0")[0] == 0

    @pytest.mark.parametrize("argv", [
        ("series-check", "homogeneous", "--depth", "2"),
        ("series-check", "hurwitz", "--alpha", "1", "--depth", "2"),
        ("series-check", "homogeneous", "--alpha", "-1", "--depth", "2"),
    ])
    def test_series_bad_params(self, argv):
        assert run(*argv)[0] == 2

    def test_identity_failure_exit(self, monkeypatch):
        from todahurwitz import algebra

        real = algebra.HurwitzFamily.f_power_derivative
        monkeypatch.setattr(algebra.HurwitzFamily, "f_power_derivative",
                            lambda self, s, r: real(self, s, r) * (2 if (s, r) == (2, 1) else 1))
        code, _, err = run("series-check", "hurwitz", "--depth", "3")
        assert code == 5 and "fails at monomial" in err

    def test_usage_errors_exit_2(self):
        with pytest.raises(SystemExit) as info:
            run("nonsense")
        assert info.value.code == 2
        with pytest.raises(SystemExit) as info:
            run("table", "2", "--jobs", "0")
        assert info.value.code == 2


class TestDeterminism:
    def test_repeat_runs_identical(self):
        assert run("table", "4")[1] == run("table", "4")[1]

    def test_cache_file_is_transparent(self, tmp_path):
        cache = tmp_path / "c.tsv"
        cold = run("table", "4", "--cache", str(cache))
        assert cache.exists()
        co.set_cache(co.CoefficientCache())
        warm = run("table", "4", "--cache", str(cache))
        assert cold == warm

    def test_stale_cache_refused(self, tmp_path):
        cache = tmp_path / "c.tsv"
        cache.write_text("version\told\n", encoding="utf-8")
        code, _, err = run("table", "2", "--cache", str(cache))
        assert code == 2 and "version" in err

    def test_version_flag(self):
        proc = subprocess.run([sys.executable, "-m", "todahurwitz", "--version"],
                              capture_output=True, text=True, check=True)
        assert co.FORMULA_VERSION in proc.stdout
