"""Deterministic emission of results as JSON and CSV.

Two runs with identical inputs must produce byte-identical files, so JSON
uses sorted keys and Python's shortest-round-trip float repr, while CSV
uses fixed 17-significant-digit formatting.  The CSV schema for remainder
sweeps is frozen: "k_re,k_im,abs_kN_DeltaN,re_Delta,im_Delta".
"""

from __future__ import annotations

import json

from .remainder import RemainderReport

__all__ = [
    "CSV_HEADER",
    "to_json",
    "from_json",
    "report_to_csv",
    "csv_from_record",
    "golden_diff",
]

CSV_HEADER = "k_re,k_im,abs_kN_DeltaN,re_Delta,im_Delta"

_CSV_FLOAT = "%.17g"


def to_json(record: dict) -> str:
    """Render a record as deterministic JSON (sorted keys, trailing newline)."""
    return json.dumps(record, sort_keys=True, indent=2, allow_nan=False) + "\n"


def from_json(text: str) -> dict:
    return json.loads(text)


def csv_from_record(record: dict) -> str:
    """CSV for a remainder-sweep record dict (as produced by RemainderReport.record)."""
    lines = [CSV_HEADER]
    for s in record["samples"]:
        fields = (s["k"][0], s["k"][1], s["abs_kN_delta"], s["delta"][0], s["delta"][1])
        lines.append(",".join(_CSV_FLOAT % f for f in fields))
    return "\n".join(lines) + "\n"


def report_to_csv(report: RemainderReport) -> str:
    """Render a remainder sweep as CSV with the frozen header and 17-digit floats."""
    return csv_from_record(report.record())


def golden_diff(actual: str, expected: str) -> list[str]:
    """Line-by-line differences between produced and golden text, empty if identical."""
    actual_lines = actual.splitlines()
    expected_lines = expected.splitlines()
    diffs: list[str] = []
    for i, (a, e) in enumerate(zip(actual_lines, expected_lines), start=1):
        if a != e:
            diffs.append(f"line {i}: got {a!r}, want {e!r}")
    if len(actual_lines) != len(expected_lines):
        diffs.append(
            f"line count differs: got {len(actual_lines)}, want {len(expected_lines)}"
        )
    return diffs
