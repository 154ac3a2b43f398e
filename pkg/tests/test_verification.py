"""Tests for the verification records and reports."""

import json

import pytest

import logchoquard as lcq
from logchoquard.errors import InvalidParameterError


def test_make_record_upper():
    record = lcq.make_record(
        "c2", "riesz-constant", measured=0.1, bound=0.25, witness=2.0
    )
    assert record.passed
    assert record.margin == pytest.approx(0.15)
    assert record.witness == 2.0

    failed = lcq.make_record("c2", "riesz-constant", measured=0.3, bound=0.25)
    assert not failed.passed
    assert failed.margin == pytest.approx(-0.05)


def test_make_record_lower_and_slack():
    record = lcq.make_record(
        "eta", "mountain-pass-rim", measured=0.5, bound=0.0, upper=False
    )
    assert record.passed
    assert record.margin == 0.5
    within_slack = lcq.make_record(
        "sum", "riesz-constant", measured=1.0 + 1e-14, bound=1.0, slack=1e-12
    )
    assert within_slack.passed


def test_make_record_missing_value():
    """A missing measurement is a failure, never a pass."""
    record = lcq.make_record(
        "log-energy", "log-energy-finite", measured=None, bound=0.0
    )
    assert not record.passed
    assert record.margin is None


def test_skip_record():
    record = lcq.skip_record("psi-growth", "psi-growth", "zero field")
    assert record.passed
    assert record.note == "skipped: zero field"
    assert record.measured is None


def test_unknown_anchor():
    with pytest.raises(InvalidParameterError, match="Unknown anchor"):
        lcq.make_record("x", "no-such-statement", measured=0.0, bound=1.0)
    with pytest.raises(InvalidParameterError, match="Unknown anchor"):
        lcq.skip_record("x", "no-such-statement", "reason")
    report = lcq.VerificationReport()
    record = lcq.CheckRecord("x", "no-such-statement", 0.0, 1.0, 1.0, True)
    with pytest.raises(InvalidParameterError, match="Unknown anchor"):
        report.add(record)


def test_anchors():
    assert all(isinstance(text, str) and text for text in lcq.ANCHORS.values())
    assert "riesz-constant" in lcq.ANCHORS


def _report():
    report = lcq.VerificationReport()
    report.add(
        lcq.make_record("c2", "riesz-constant", measured=0.1, bound=0.2)
    )
    report.extend(
        [
            lcq.make_record(
                "level", "level-bound", measured=0.2, bound=0.125,
                witness="mu=1",
            ),
            lcq.skip_record("psi", "psi-growth", "zero field"),
        ]
    )
    return report


def test_report():
    report = _report()
    assert len(report) == 3
    assert not report.passed
    assert [record.check_id for record in report.failures] == ["level"]
    assert report["c2"].measured == 0.1
    with pytest.raises(KeyError):
        report["missing"]
    assert [record.check_id for record in report] == ["c2", "level", "psi"]

    merged = lcq.VerificationReport()
    merged.extend(report)
    assert merged == report
    assert lcq.VerificationReport().passed


def test_report_json(tmp_path):
    report = _report()
    payload = json.loads(report.to_json())
    assert payload["passed"] is False
    assert payload["records"][1]["witness"] == "mu=1"

    path = tmp_path / "report.json"
    report.write(path)
    again = lcq.VerificationReport.read(path)
    assert again == report
    assert again["level"] == report["level"]
