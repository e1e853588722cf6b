import json
import subprocess
import sys

import pytest

from sdepthlab import (
    InputError,
    cycle_path_ideal,
    emit_csv,
    emit_json,
    emit_md,
    format_ideal,
    line_path_ideal,
    prop16_structure_check,
    run_scan,
    sequence_check,
)


def rows_by_nm(rows):
    return {(r.n, r.m): r for r in rows}


class TestThm14Scan:
    def test_small_grid(self):
        rows = run_scan("thm14", n_max=6)
        table = rows_by_nm(rows)
        r52 = table[(5, 2)]
        assert (r52.psi, r52.sdepth, r52.phi, r52.status) == (2, 2, 2, "ok")
        r42 = table[(4, 2)]
        assert (r42.psi, r42.sdepth, r42.phi, r42.status) == (1, 1, 2, "ok")
        assert all(r.status == "ok" for r in rows)
        assert all(r.depth == r.psi for r in rows)

    def test_rows_sorted(self):
        rows = run_scan("thm14", n_max=6)
        keys = [(r.n, r.m, r.check) for r in rows]
        assert keys == sorted(keys)

    def test_jobs_do_not_change_rows(self):
        sequential = emit_csv(run_scan("thm14", n_max=6))
        parallel = emit_csv(run_scan("thm14", n_max=6, jobs=2))
        assert sequential == parallel

    def test_certificates_stored(self, tmp_path):
        run_scan("thm14", n_max=4, cert_dir=str(tmp_path))
        files = sorted(p.name for p in tmp_path.iterdir())
        assert files == ["thm14-n3-m2.cert", "thm14-n4-m2.cert", "thm14-n4-m3.cert"]


class TestCor15Scan:
    def test_equality_rows_asserted(self):
        rows = run_scan("cor15", n_max=8)
        eq = [r for r in rows if r.check == "cor15"]
        assert all(r.status == "ok" and r.sdepth == r.phi == r.psi for r in eq)
        r83 = next(r for r in eq if (r.n, r.m) == (8, 3))
        assert r83.sdepth == 4

    def test_printed_condition_rows_informational(self):
        rows = run_scan("cor15", n_max=8)
        printed = [r for r in rows if r.check == "cor15-printed-cond"]
        assert printed and all(r.status == "ok" and r.sdepth is None for r in printed)
        # On these instances the two formulas always differ by one.
        assert all(r.phi == r.psi + 1 for r in printed)
        assert {(r.n, r.m) for r in printed} == {
            (n, m)
            for n in range(3, 9)
            for m in range(2, n)
            if n % (m + 1) not in (0, m)
        }


class TestProp16Scan:
    def test_anchor_five_two(self):
        rows = run_scan("prop16", n_max=5)
        r52 = rows_by_nm(rows)[(5, 2)]
        assert (r52.sdepth, r52.bound_lo, r52.status) == (3, 3, "ok")
        assert r52.depth == 3  # derived from the component structure

    def test_width_two_rows_all_ok(self):
        rows = run_scan("prop16", n_max=9, m_max=2)
        assert all(r.status == "ok" for r in rows)
        assert all(r.sdepth == r.bound_lo for r in rows)

    def test_wider_windows_fall_below_stated_bound(self):
        # Exact computation: the quotient value is psi+1, which sits strictly
        # below the configured bound psi+m-1 once m exceeds 2; the scan must
        # surface that as a violation rather than hide it.
        rows = run_scan("prop16", n_max=7, m_min=3)
        r73 = rows_by_nm(rows)[(7, 3)]
        assert r73.sdepth == 5
        assert r73.bound_lo == 6
        assert r73.status == "violation"


class TestConjectureScan:
    def test_reports_without_asserting(self):
        rows = run_scan("conjecture", n_max=10)
        assert {(r.n, r.m) for r in rows} == {(10, 2)}
        row = rows[0]
        assert row.status == "ok"
        assert row.sdepth == 4
        assert row.bound_lo == row.bound_hi == 4


class TestFormulasScan:
    def test_small_grid(self):
        rows = run_scan("formulas", n_max=7)
        assert all(r.status == "ok" for r in rows)
        line = [r for r in rows if r.check == "formulas-line"]
        cycle = [r for r in rows if r.check == "formulas-cycle"]
        assert len(line) == len(cycle)
        assert all(r.depth == r.phi for r in line)
        assert all(r.depth == r.psi for r in cycle)


class TestEmitters:
    def test_csv_deterministic_and_timings_off(self):
        rows = run_scan("thm14", n_max=5)
        text = emit_csv(rows)
        assert text == emit_csv(rows)
        assert text.splitlines()[0] == "n,m,check,psi,phi,sdepth,depth,bound_lo,bound_hi,status,ms"
        assert all(line.endswith(",0") for line in text.splitlines()[1:])

    def test_json_round_trips(self):
        rows = run_scan("thm14", n_max=4)
        payload = json.loads(emit_json(rows))
        assert [r["n"] for r in payload] == [3, 4, 4]

    def test_md_has_all_rows(self):
        rows = run_scan("thm14", n_max=4)
        text = emit_md(rows)
        assert text.count("\n") == len(rows) + 2

    def test_bad_check_rejected(self):
        with pytest.raises(InputError):
            run_scan("nonsense")


class TestStructureCheck:
    def test_four_two_single_element(self):
        report = prop16_structure_check(4, 2)
        assert report.ok
        component = report.components[0]
        assert component.wrap_window == (1, 4)
        assert component.forced_var == 3
        assert component.residual_count == 1
        assert component.minimal_nonfaces == ((2,),)
        assert report.derived_depth == report.claimed_depth == 2

    def test_five_two_anchor(self):
        report = prop16_structure_check(5, 2)
        assert report.ok
        component = report.components[0]
        assert component.residual_count == 2
        assert component.minimal_nonfaces == ((2,),)
        assert report.derived_depth == 3
        assert report.derived_equals_claimed

    def test_seven_three_first_component(self):
        report = prop16_structure_check(7, 3)
        assert report.ok
        first = report.components[0]
        assert first.wrap_window == (1, 6, 7)
        assert first.minimal_nonfaces == ((2, 3),)
        second = report.components[1]
        assert second.wrap_window == (1, 2, 7)
        assert second.forced_var == 6
        assert second.minimal_nonfaces == ((3,),)
        assert report.derived_depth == 5
        assert report.claimed_depth == 6
        assert report.derived_equals_claimed is False

    def test_structure_holds_across_grid(self):
        from sdepthlab import cycle_depth_formula

        for n in range(3, 13):
            for m in range(2, n):
                report = prop16_structure_check(n, m)
                assert report.ok, (n, m, report.problems)
                assert len(report.components) == m - 1
                # Every component contributes residual depth + m; the minimum
                # always lands exactly one above the cycle-quotient depth.
                assert report.derived_depth == min(
                    c.component_depth for c in report.components
                )
                assert report.derived_depth == cycle_depth_formula(n, m) + 1
                assert report.derived_equals_claimed == (m == 2)

    def test_bounds(self):
        with pytest.raises(InputError):
            prop16_structure_check(13, 2)
        with pytest.raises(InputError):
            prop16_structure_check(4, 4)


class TestSequenceCheck:
    def test_seven_three(self):
        report = sequence_check(7, 3)
        assert report.ok and not report.unknown
        assert len(report.steps) == 2
        assert report.final_ok is True

    def test_six_two_depth_inequalities(self):
        report = sequence_check(6, 2)
        assert report.ok
        assert all(step.depth_ok for step in report.steps)

    def test_five_four_routes_to_relabel_branch(self):
        report = sequence_check(5, 4)
        assert report.relabel_ok is True
        assert report.ok
        assert len(report.steps) == 1

    def test_bad_bounds(self):
        with pytest.raises(InputError):
            sequence_check(4, 4)


CLI = [sys.executable, "-m", "sdepthlab.cli"]


def run_cli(*args, **kw):
    return subprocess.run(CLI + list(args), capture_output=True, text=True, **kw)


class TestCli:
    def test_family_text(self):
        proc = run_cli("family", "--kind", "cycle", "--n", "5", "--m", "2")
        assert proc.returncode == 0
        assert format_ideal(cycle_path_ideal(5, 2)) in proc.stdout
        assert "phi=2 psi=2" in proc.stdout

    def test_family_json(self):
        proc = run_cli("family", "--kind", "line", "--n", "4", "--m", "2", "--out", "json")
        payload = json.loads(proc.stdout)
        assert payload["ideal"] == format_ideal(line_path_ideal(4, 2))
        assert payload["formulas"]["phi"] == 2

    def test_sdepth_ring_quotient(self, tmp_path):
        ideal_file = tmp_path / "j42.txt"
        ideal_file.write_text(format_ideal(cycle_path_ideal(4, 2)))
        cert = tmp_path / "out.cert"
        proc = run_cli(
            "sdepth", "--ideal-file", str(ideal_file), "--certificate", str(cert)
        )
        assert proc.returncode == 0
        assert "sdepth = 1" in proc.stdout
        assert cert.exists()
        verify = run_cli(
            "verify-decomp", "--ideal-file", str(ideal_file),
            "--decomp-file", str(cert), "--k", "1",
        )
        assert verify.returncode == 0
        assert "valid decomposition" in verify.stdout

    def test_verify_rejects_tampered(self, tmp_path):
        ideal_file = tmp_path / "j42.txt"
        ideal_file.write_text(format_ideal(cycle_path_ideal(4, 2)))
        cert = tmp_path / "out.cert"
        run_cli("sdepth", "--ideal-file", str(ideal_file), "--certificate", str(cert))
        lines = cert.read_text().splitlines()
        cert.write_text("\n".join(lines[:-1]) + "\n")
        proc = run_cli(
            "verify-decomp", "--ideal-file", str(ideal_file),
            "--decomp-file", str(cert), "--k", "1",
        )
        assert proc.returncode == 2
        assert "invalid" in proc.stdout

    def test_sdepth_quotient_module(self, tmp_path):
        num = tmp_path / "num.txt"
        den = tmp_path / "den.txt"
        num.write_text(format_ideal(cycle_path_ideal(5, 2)))
        den.write_text(format_ideal(line_path_ideal(5, 2)))
        proc = run_cli(
            "sdepth", "--ideal-file", str(num), "--quotient-by", str(den)
        )
        assert proc.returncode == 0
        assert "sdepth = 3" in proc.stdout

    def test_depth_with_betti(self, tmp_path):
        ideal_file = tmp_path / "i42.txt"
        ideal_file.write_text(format_ideal(line_path_ideal(4, 2)))
        proc = run_cli("depth", "--ideal-file", str(ideal_file), "--betti")
        assert proc.returncode == 0
        assert "depth = 2" in proc.stdout
        assert "pd = 2" in proc.stdout
        assert "0,,1" in proc.stdout  # the empty-degree table entry

    def test_input_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("n=2: x1 + x2")
        proc = run_cli("depth", "--ideal-file", str(bad))
        assert proc.returncode == 3
        assert "error:" in proc.stderr

    def test_resource_cap_exit_code(self, tmp_path):
        ideal_file = tmp_path / "big.txt"
        ideal_file.write_text(format_ideal(cycle_path_ideal(10, 2)))
        proc = run_cli("sdepth", "--ideal-file", str(ideal_file), "--max-poset", "10")
        assert proc.returncode == 4

    def test_scan_violation_exit_code(self):
        proc = run_cli("scan", "--check", "prop16", "--n-max", "7", "--m-min", "3")
        assert proc.returncode == 2
        assert "violation" in proc.stdout

    def test_scan_csv_ok(self):
        proc = run_cli("scan", "--check", "thm14", "--n-max", "5")
        assert proc.returncode == 0
        assert proc.stdout.startswith("n,m,check")
