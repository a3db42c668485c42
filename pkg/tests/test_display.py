"""Tests for display module."""

from collections import Counter
from unittest.mock import patch

import pytest
from rich import box

from src.subdd.display import (
    compat_mode,
    dd_progress,
    estimate_table,
    histogram_table,
    orbit_table,
    summary_table,
    trajectory_table,
)
from src.subdd.logger import debug
from src.subdd.stats import CaptureEstimate, Histogram
from src.subdd.symmetry import OrbitRecord


class TestTables:
    def test_summary_table(self):
        table = summary_table("Run", {"n": 4, "rays": 37})
        assert table.title == "Run"
        assert table.row_count == 2

    @pytest.mark.parametrize(("value", "expected"), [("0", box.ROUNDED), ("1", box.SIMPLE)])
    def test_compat_mode_box(self, monkeypatch, value, expected):
        monkeypatch.setenv("SUBDD_TTY_COMPAT", value)
        assert summary_table("Run", {}).box is expected
        assert compat_mode() is (value != "0")

    def test_histogram_caption(self):
        table = histogram_table(Histogram(Counter({10: 3, 12: 1})), "Weights")
        assert table.row_count == 2
        assert table.caption == "total 4, range 10..12"
        assert histogram_table(Histogram(), "Empty").caption == "empty"

    def test_trajectory_labels(self, spec3):
        order = (0, 1, 2, 3, 4, 5)
        table = trajectory_table([(4, 4), (5, 5)], spec3, order)
        assert table.row_count == 2
        assert len(table.columns) == 3
        assert len(trajectory_table([(4, 4)]).columns) == 2

    def test_orbit_table_limit(self):
        records = [OrbitRecord((k, 1), 2, 5) for k in range(25)]
        table = orbit_table(records, limit=20)
        assert table.row_count == 20
        assert table.caption == "5 more not shown"

    def test_estimate_table(self):
        assert estimate_table(CaptureEstimate(10, 5, 0)).row_count == 4
        assert estimate_table(CaptureEstimate(10, 5, 1, 2.0)).row_count == 5


class TestProgress:
    def test_quiet_progress_reports_to_debug(self, spec3):
        with patch.object(debug, "dd_step") as dd_step:
            with dd_progress(6, spec3, quiet=True) as callback:
                callback(5, 7, 0)
        dd_step.assert_called_once_with(5, 7, "(0,1|∅)")
