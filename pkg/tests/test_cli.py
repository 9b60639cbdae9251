import csv
import io
import json
import math

import pytest
from click.testing import CliRunner

from dirac_ab.cli import main


def run(*args):
    result = CliRunner().invoke(main, list(args))
    return result


def rows_of(result):
    return list(csv.DictReader(io.StringIO(result.stdout)))


class TestSpectrum:
    def test_grid(self):
        res = run("spectrum", "--mass", "1", "--omega", "1", "--alpha", "0.5", "--spin", "+1",
                  "--m", "-2..2", "--n", "0..3", "--format", "csv")
        assert res.exit_code == 0
        rows = rows_of(res)
        assert len(rows) == 20
        assert list(rows[0]) == ["m", "n", "class", "status", "E_relativistic",
                                 "epsilon_nonrel", "degeneracy_family_id"]
        for row in rows:
            m, n = int(row["m"]), int(row["n"])
            x = m + 0.5
            assert float(row["E_relativistic"]) == pytest.approx(
                math.sqrt(1 + 2 * (abs(x) + x + 2 * n)), rel=1e-14)

    def test_rest_mass(self):
        rows = rows_of(run("spectrum", "--alpha", "0", "--spin", "+1", "--m", "0..0",
                           "--n", "0..0"))
        assert len(rows) == 1 and float(rows[0]["E_relativistic"]) == 1.0

    def test_case_a_rows(self):
        rows = rows_of(run("spectrum", "--alpha", "2.3", "--spin", "-1", "--m", "-2..-2",
                           "--n", "0..2"))
        assert [r["class"] for r in rows] == ["IrregularA"] * 3
        assert [float(r["E_relativistic"]) for r in rows] == pytest.approx(
            [math.sqrt(1 + 0.2 * (n - 0.3)) for n in range(3)], rel=1e-14)

    def test_fifteen_significant_digits(self):
        rows = rows_of(run("spectrum", "--m", "1", "--n", "1"))
        mantissa = rows[0]["E_relativistic"].split("e")[0]
        assert len(mantissa.replace(".", "").lstrip("-")) == 15

    def test_json_matches_csv(self):
        args = ["spectrum", "--alpha", "0.5", "--spin", "-1", "--m", "-1..1", "--n", "0..1"]
        csv_rows = rows_of(run(*args))
        json_rows = json.loads(run(*args, "--format", "json").stdout)
        assert len(csv_rows) == len(json_rows)
        for c, j in zip(csv_rows, json_rows):
            if c["status"] == "nonreal":
                assert j["E_relativistic"] is None
            else:
                assert float(c["E_relativistic"]) == j["E_relativistic"]
            assert float(c["epsilon_nonrel"]) == j["epsilon_nonrel"]

    def test_deterministic_file(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run("spectrum", "--output", str(a)).exit_code == 0
        assert run("spectrum", "--output", str(b)).exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_nonreal_rows_not_fatal(self):
        res = run("spectrum", "--alpha", "0.5", "--spin", "-1", "--omega", "1", "--m", "0",
                  "--n", "0..1")
        assert res.exit_code == 0
        assert [r["status"] for r in rows_of(res)] == ["ok", "nonreal"]

    @pytest.mark.parametrize("args", [["--spin", "0"], ["--mass", "-1"], ["--m", "3..1"],
                                      ["--m", "a..b"], ["--format", "xml"]])
    def test_invalid_input(self, args):
        assert run("spectrum", *args).exit_code == 2

    def test_unit_check(self):
        res = run("spectrum", "--omega", "0.05", "--mass", "2", "--unit-check")
        assert "omega/M = 2.50000000000000e-02" in res.stderr


class TestWavefunction:
    def test_ground_state(self):
        res = run("wavefunction", "--alpha", "0", "--m", "0", "--n", "0", "--points", "20")
        assert res.exit_code == 0
        rows = rows_of(res)
        assert list(rows[0]) == ["r", "re_psi1", "im_psi1", "re_psi2", "im_psi2"]
        assert all(abs(float(r["re_psi2"])) + abs(float(r["im_psi2"])) == 0 for r in rows)

    def test_ground_state_check(self):
        res = run("wavefunction", "--alpha", "0", "--m", "0", "--n", "0", "--check")
        assert res.exit_code == 0
        assert max(float(r["residual_1"]) for r in rows_of(res)) <= 1e-8

    def test_check_flags_first_line_residual(self):
        # closed-form energies leave a first-line residual for m + alpha != 0
        res = run("wavefunction", "--omega", "1", "--alpha", "0.5", "--m", "1", "--n", "1",
                  "--check")
        assert res.exit_code == 1
        rows = rows_of(res)
        assert max(float(r["residual_2"]) for r in rows) <= 1e-8

    def test_irregular_leading_power(self):
        res = run("wavefunction", "--alpha", "2.3", "--spin", "-1", "--m", "-2", "--n", "0",
                  "--r-min", "1e-4", "--r-max", "2e-4", "--points", "2")
        rows = rows_of(res)
        r = [float(x["r"]) for x in rows]
        f = [float(x["re_psi1"]) for x in rows]
        assert math.log(f[1] / f[0]) / math.log(r[1] / r[0]) == pytest.approx(-0.3, abs=1e-5)

    def test_single_channel_required(self):
        assert run("wavefunction", "--m", "0..1", "--n", "0").exit_code == 2

    def test_bad_grid(self):
        assert run("wavefunction", "--m", "0", "--n", "0", "--r-min", "2",
                   "--r-max", "1").exit_code == 2

    def test_nonreal_level(self):
        assert run("wavefunction", "--omega", "1", "--alpha", "0.5", "--spin", "-1",
                   "--m", "0", "--n", "0").exit_code == 2


class TestMatch:
    def test_no_flux(self):
        res = run("match", "--alpha", "0", "--m", "0", "--n", "1")
        assert res.exit_code == 0
        assert all(float(r["error"]) < 1e-9 for r in rows_of(res))

    def test_case_a_sweep(self):
        res = run("match", "--alpha", "2.3", "--spin", "-1", "--m", "-2", "--n", "1")
        rows = rows_of(res)
        assert list(rows[0]) == ["R", "E_root", "error", "A_weight", "B_weight"]
        errors = [float(r["error"]) for r in rows]
        assert errors == sorted(errors, reverse=True)

    def test_regular_sweep(self):
        rows = rows_of(run("match", "--alpha", "0.5", "--spin", "1", "--m", "1", "--n", "0"))
        weights = [float(r["B_weight"]) for r in rows]
        assert weights == sorted(weights, reverse=True) and weights[-1] < 1e-3

    def test_radii_must_descend(self):
        assert run("match", "--R", "0.01,0.1", "--m", "1", "--n", "0").exit_code == 2

    def test_no_root(self, monkeypatch):
        import dirac_ab.shellmatch as sm
        monkeypatch.setattr(sm, "SCAN_POINTS", 2)
        monkeypatch.setattr(sm, "quantization_mismatch", lambda shell, E: 1.0)
        assert run("match", "--m", "1", "--n", "0").exit_code == 3


class TestVerify:
    def test_default(self):
        res = run("verify")
        assert res.exit_code == 0
        assert "max relative error" in res.stderr

    def test_coarse_grid_breaches(self):
        assert run("verify", "--grid-count", "100", "--no-richardson").exit_code == 1

    def test_no_flux(self):
        assert run("verify", "--alpha", "0").exit_code == 0

    def test_short_domain(self):
        assert run("verify", "--r-max", "5").exit_code == 2

    def test_too_few_points(self):
        assert run("verify", "--grid-count", "50").exit_code == 2


class TestDegeneracy:
    def test_ladder(self):
        rows = rows_of(run("degeneracy", "--alpha", "0.3", "--spin", "1", "--m", "1", "--n", "0",
                           "--max-shift", "1"))
        assert {(int(r["m"]), int(r["n"])) for r in rows} == {(1, 0), (0, 1)}
        assert all(float(r["abs_diff"]) == 0.0 for r in rows)

    def test_collapse_window(self):
        rows = rows_of(run("degeneracy", "--alpha", "0.3", "--spin", "-1", "--m", "1",
                           "--n", "2", "--window", "0..5"))
        assert sorted(int(r["m"]) for r in rows) == [1, 2, 3, 4, 5]

    def test_window_required(self):
        assert run("degeneracy", "--alpha", "0.3", "--spin", "-1", "--m", "1",
                   "--n", "2").exit_code == 2
