"""Integration tests for subdd."""

import io
import subprocess
import sys

import pytest

from src.subdd.formats import read_rays


def run_cli(*args, stdin=None):
    return subprocess.run(
        [sys.executable, "-m", "src.subdd.cli", *args],
        capture_output=True,
        text=True,
        input=stdin,
        check=False,
    )


class TestCLIIntegration:
    """Integration tests for CLI functionality."""

    def test_help_output(self):
        result = run_cli("--help")
        assert result.returncode == 0
        assert "subdd" in result.stdout
        assert "dd-step" in result.stdout
        assert "estimate" in result.stdout

    def test_version_output(self):
        result = run_cli("--version")
        assert result.returncode == 0
        assert "subdd" in result.stdout
        assert "0.1.0" in result.stdout

    def test_package_entry_point(self):
        result = subprocess.run(
            [sys.executable, "-m", "src.subdd", "--version"],
            capture_output=True,
            text=True,
            check=False,
        )
        assert result.returncode == 0
        assert "subdd" in result.stdout

    def test_import_structure(self):
        from src.subdd import __version__, cli, cone, dd, neighbors, stats, symmetry

        assert __version__
        assert callable(cli.main)
        assert cone.build_reduced_matrix(3).d == 4
        assert dd.run_dd and neighbors.orbit_bfs and stats.capture_recapture
        assert symmetry.symmetry_group(3).order == 12


class TestEndToEndScenarios:
    def test_dd_n4(self, tmp_path):
        out = tmp_path / "c4.rays"
        result = run_cli("dd", "-n", "4", "-q", "-o", str(out))
        assert result.returncode == 0, result.stderr
        assert read_rays(out).shape == (37, 11)

    @pytest.mark.timeout(180)
    def test_pipe_chain(self):
        from src.subdd.cone import build_reduced_matrix
        from src.subdd.dd import run_dd
        from src.subdd.formats import write_dd_pair
        from src.subdd.orders import topt_order

        spec = build_reduced_matrix(4)
        full = run_dd(spec, topt_order(spec))
        expected = io.StringIO()
        write_dd_pair(expected, spec.matrix[list(full.order)], full.rays)

        step = run_cli("dd", "-n", "4", "-q", "--stop-after", str(spec.d), "--pair-out", "-")
        assert step.returncode == 0, step.stderr
        assert step.stdout.splitlines()[0] == f"11 11 {spec.d}"
        for row in full.order[spec.d :]:
            row_text = " ".join(str(int(v)) for v in spec.matrix[row])
            step = run_cli("dd-step", "-q", "--row", row_text, stdin=step.stdout)
            assert step.returncode == 0, step.stderr
        assert step.stdout.splitlines()[0] == f"11 {spec.m} 37"
        assert step.stdout == expected.getvalue()

    def test_estimate_output(self):
        result = run_cli(
            "estimate", "--pool-size", "260000000", "--probe-size", "2797684", "--overlap", "154170"
        )
        assert result.returncode == 0
        assert "estimated_orbits: 4.718" in result.stdout


class TestErrorHandling:
    def test_no_command(self):
        assert run_cli().returncode == 1

    def test_bad_n(self):
        result = run_cli("dd", "-n", "2", "-q")
        assert result.returncode == 1
        assert "between" in result.stderr

    def test_malformed_pair(self):
        result = run_cli("dd-step", "-q", stdin="3 1\n")
        assert result.returncode == 3
        assert "line 1" in result.stderr

    @pytest.mark.slow
    @pytest.mark.timeout(900)
    def test_dd_n5(self, tmp_path):
        out = tmp_path / "c5.rays"
        result = run_cli("dd", "-n", "5", "-q", "-o", str(out))
        assert result.returncode == 0
        assert read_rays(out).shape == (117978, 26)
