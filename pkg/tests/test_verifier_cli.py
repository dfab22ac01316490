import io
import json
import math
import shutil
import subprocess
from dataclasses import replace

import numpy as np
import pytest

from automorphic.errors import DomainError
from automorphic.kernels import TruncationBudget, automorphic_K
from automorphic.verifier_cli import (CHECKS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS, EXIT_USAGE, CheckReport,
                                      CheckSpec, UsageError, emit_grid, exit_code, main, make_spec,
                                      parse_complex, parse_config, parse_element, read_grid, report_document,
                                      run, run_one)

CONFIG = """
# two cheap checks
check_id = transform_closed_form
s = 2
r = 0.5

check_id = poisson_scalar   # closed form e^{-u sqrt(lam + Z)}
lam = 2
tolerance = 1e-9
"""


class TestParsing:
    @pytest.mark.parametrize("text, expected", [("2i", 2j), ("1+i", 1 + 1j), ("i", 1j), ("-0.5+2.5i", -0.5 + 2.5j),
                                                ("3", 3 + 0j)])
    def test_complex(self, text, expected):
        assert parse_complex(text) == expected

    def test_named_rho(self):
        np.testing.assert_allclose(parse_complex("rho"), complex(0.5, math.sqrt(3) / 2))

    def test_element(self):
        assert parse_element("2,1,1,1").entries == (2, 1, 1, 1)
        with pytest.raises(UsageError):
            parse_element("2,1,1")

    def test_config(self):
        specs = parse_config(CONFIG)
        assert [s.check_id for s in specs] == ["transform_closed_form", "poisson_scalar"]
        assert specs[0].params == {"s": "2", "r": "0.5"}
        assert specs[1].tolerance == 1e-9

    def test_config_errors(self):
        with pytest.raises(UsageError):
            parse_config("s = 2\n")
        with pytest.raises(UsageError):
            parse_config("check_id = poisson_scalar\nbogus = 1\n")
        with pytest.raises(UsageError):
            parse_config("check_id = poisson_scalar\nlam = 1\nlam = 2\n")

    def test_settings_split(self):
        spec = make_spec("wave_equals_K", {"s": "3", "group_bound": "50", "order": "16", "tolerance": "1e-4"})
        assert spec.budget.group_bound == 50.0
        assert spec.quad.order == 16
        assert spec.tolerance == 1e-4

    def test_unknown_check(self):
        with pytest.raises(UsageError):
            CheckSpec("no_such_check")


class TestReports:
    def test_decide(self):
        assert CheckReport.decide(1e-12, {"t": 1e-13}, 1e-10) == "pass"
        assert CheckReport.decide(1e-12, {"t": 1e-3}, 1e-10) == "inconclusive"
        assert CheckReport.decide(1e-3, {}, 1e-10) == "fail"
        assert CheckReport.decide(math.nan, {}, 1e-10) == "fail"

    def test_exit_codes(self):
        assert exit_code([]) == EXIT_PASS
        rep = run_one(CheckSpec("poisson_scalar"))
        assert rep.verdict == "pass"
        assert exit_code([rep, replace_verdict(rep, "inconclusive")]) == EXIT_INCONCLUSIVE
        assert exit_code([rep, replace_verdict(rep, "fail")]) == EXIT_FAIL

    def test_error_is_a_fail(self):
        rep = run_one(CheckSpec("transform_closed_form", {"s": "0.4"}))
        assert rep.verdict == "fail"
        assert rep.error.startswith("DomainError")

    def test_run_preserves_order(self):
        specs = parse_config(CONFIG)
        reps = run(specs, jobs=2)
        assert [r.check_id for r in reps] == [s.check_id for s in specs]
        assert all(r.verdict == "pass" for r in reps)

    def test_json_schema(self):
        specs = [CheckSpec("transform_closed_form").resolved()]
        doc = json.loads(json.dumps(report_document(specs, run(specs))))
        assert set(doc) == {"version", "specs", "reports"}
        rep = doc["reports"][0]
        for key in ("check_id", "params", "lhs", "rhs", "residual", "tail_estimates", "elapsed", "verdict"):
            assert key in rep
        assert set(rep["lhs"]) == {"re", "im"}
        assert doc["specs"][0]["budget"]["group_bound"] == 60.0

    def test_registry_defaults_resolve(self):
        for cid in CHECKS:
            spec = CheckSpec(cid).resolved()
            assert spec.tolerance > 0 and spec.budget is not None


def replace_verdict(rep, verdict):
    return replace(rep, verdict=verdict)


class TestGrid:
    def test_single_point_matches_kernel(self, tmp_path):
        bud = TruncationBudget(group_bound=20.0)
        path = tmp_path / "k.csv"
        with open(path, "w", newline="") as fh:
            emit_grid("K_s", (0.2, 0.2, 1.5, 1.5), (1, 1), {}, bud, fh)
        header, rows = read_grid(path)
        kv = automorphic_K(0.2 + 1.5j, 1 + 1j, 3.0, bud)
        assert rows.shape == (1, 5)
        assert rows[0, 2] == kv.value.real
        assert rows[0, 4] == kv.tail_estimate
        assert header["function"] == "K_s" and header["w"] == "1+i" and header["group_bound"] == "20.0"

    def test_round_trip(self, tmp_path):
        bud = TruncationBudget(group_bound=10.0)
        buf = io.StringIO()
        n = emit_grid("E_ell", (-0.4, 0.4, 0.9, 1.8), (3, 2), {"s": "2.5"}, bud, buf)
        path = tmp_path / "e.csv"
        path.write_text(buf.getvalue())
        header, rows = read_grid(path)
        assert n == 6 and rows.shape == (6, 5)
        np.testing.assert_allclose(rows[:3, 0], [-0.4, 0.0, 0.4])
        assert header["s"] == "2.5"

    def test_singular_point_row(self):
        buf = io.StringIO()
        emit_grid("G_s", (1.0, 1.0, 1.0, 1.0), (1, 1), {}, TruncationBudget(group_bound=10.0), buf)
        last = buf.getvalue().strip().splitlines()[-1].split(",")
        assert last[2] == "nan" and last[4] == "inf"

    def test_rejects_lower_half_plane(self):
        with pytest.raises(DomainError):
            emit_grid("K_s", (0, 1, -1, 1), (2, 2), {}, TruncationBudget(), io.StringIO())
        with pytest.raises(UsageError):
            emit_grid("K_s", (0, 1, 1, 2), (2, 2), {"t": "1"}, TruncationBudget(), io.StringIO())


class TestMain:
    def test_run_check(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code = main(["run", "--check", "shift_identity", "--set", "r=1.3", "--set", "s=2.7", "--out", str(out)])
        assert code == EXIT_PASS
        doc = json.loads(out.read_text())
        assert doc["reports"][0]["verdict"] == "pass"

    def test_run_config(self, tmp_path, capsys):
        cfg = tmp_path / "c.txt"
        cfg.write_text(CONFIG)
        assert main(["run", "--config", str(cfg)]) == EXIT_PASS
        assert json.loads(capsys.readouterr().out)["reports"][1]["check_id"] == "poisson_scalar"

    def test_usage_errors(self, capsys):
        assert main(["run", "--check", "nope"]) == EXIT_USAGE
        assert main(["run", "--check", "poisson_scalar", "--set", "bogus=1"]) == EXIT_USAGE
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_inconclusive(self, capsys):
        code = main(["run", "--check", "ell_binomial", "--set", "group_bound=5"])
        assert code == EXIT_INCONCLUSIVE

    def test_grid_command(self, tmp_path):
        out = tmp_path / "g.csv"
        code = main(["grid", "--fn", "heat_M", "--xmin", "0", "--xmax", "0.3", "--ymin", "1", "--ymax", "1.5",
                     "--nx", "2", "--ny", "2", "--group-bound", "8", "--out", str(out)])
        assert code == EXIT_PASS
        header, rows = read_grid(out)
        assert rows.shape == (4, 5) and np.all(rows[:, 2] > 0)

    @pytest.mark.skipif(shutil.which("verify") is None, reason="console script not installed")
    def test_console_script(self):
        proc = subprocess.run(["verify", "list"], capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0
        assert all(cid in proc.stdout for cid in CHECKS)
