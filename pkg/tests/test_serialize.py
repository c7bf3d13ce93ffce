"""JSON/CSV serialization and golden-file comparison."""

from __future__ import annotations

import json

import pytest

from fpgreen.potential import builtin
from fpgreen.remainder import remainder_report
from fpgreen.serialize import (
    CSV_HEADER,
    csv_from_record,
    from_json,
    golden_diff,
    report_to_csv,
    to_json,
)


@pytest.fixture(scope="module")
def report():
    return remainder_report(builtin("ex1"), 0.7, -0.4, 3, "sector:pi/4", [4.0, 8.0, 16.0])


class TestJson:
    def test_round_trip(self, report):
        blob = to_json(report.record())
        assert from_json(blob) == report.record()

    def test_sorted_keys_and_trailing_newline(self, report):
        blob = to_json(report.record())
        assert blob.endswith("\n")
        keys = list(json.loads(blob))
        assert keys == sorted(keys)

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            to_json({"value": float("nan")})


class TestCsv:
    def test_header_and_row_count(self, report):
        text = report_to_csv(report)
        lines = text.strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert CSV_HEADER == "k_re,k_im,abs_kN_DeltaN,re_Delta,im_Delta"
        assert len(lines) == 1 + len(report.samples)

    def test_row_values_full_precision(self, report):
        text = csv_from_record(report.record())
        row = text.strip().split("\n")[1].split(",")
        sample = report.samples[0]
        assert float(row[0]) == sample.k.real
        assert float(row[1]) == sample.k.imag
        assert float(row[2]) == sample.scaled_abs
        assert float(row[3]) == sample.delta.real
        assert float(row[4]) == sample.delta.imag


class TestGoldenDiff:
    def test_identical_is_empty(self):
        assert golden_diff("a\nb\n", "a\nb\n") == []

    def test_reports_differing_line(self):
        issues = golden_diff("a\nx\n", "a\nb\n")
        assert len(issues) == 1
        assert "line 2" in issues[0]
        assert "x" in issues[0] and "b" in issues[0]

    def test_reports_length_mismatch(self):
        issues = golden_diff("a\n", "a\nb\n")
        assert any("line" in msg for msg in issues)
