from __future__ import annotations

import csv
import dataclasses
import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffdist import analysis, report
from ffdist.exact_dist import Mode


def test_empty_csv_is_header_only():
    assert report.to_csv([], analysis.TVReport) == "n,q,d_tv,scaled,s1,s2,s3,mode\n"
    assert report.to_csv([], report.PiRecord) == "d,pi_q\n"


def test_tv_n2_q2_csv():
    text = report.to_csv([analysis.tv_report(2, 2)], analysis.TVReport)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows[0]["d_tv"] == "1/4"
    assert rows[0]["d_tv_decimal"] == "0.25"
    assert rows[0]["mode"] == "exact"


def test_decimal_string_18_digits():
    assert report.decimal_string(Fraction(1, 3)) == "0.333333333333333333"
    assert report.decimal_string(Fraction(1, 4)) == "0.25"


def test_csv_float_roundtrip():
    vals = [0.1, 1 / 3, 2.0**-1074, 1.7976931348623157e308, -0.0, 123456.789]
    recs = [report.HqRecord(2, v, 1e-10, v) for v in vals]
    rows = list(csv.DictReader(io.StringIO(report.to_csv(recs, report.HqRecord))))
    assert [float(r["value"]) for r in rows] == vals
    assert rows[0]["oracle"] == ""


def _roundtrip(records, cls):
    return report.from_json(report.to_json(records), cls)


def test_json_roundtrip_all_report_types():
    samples = [
        ([report.PiRecord(1, 2), report.PiRecord(5, 6)], report.PiRecord),
        ([report.DistRecord("omega", 3, 2, "exact", 1, Fraction(1, 4))], report.DistRecord),
        ([report.DistRecord("cycles", 3, None, "float", 2, 0.5)], report.DistRecord),
        ([report.HqRecord(3, 1.5, 1e-10, 1.2345, 1.2345000001, 1e-20)], report.HqRecord),
        ([report.MainTermRecord(100, 3, 2, "hwang", 0.434, 0.12)], report.MainTermRecord),
        ([report.CheckRecord("x", True, "ok", 0.5)], report.CheckRecord),
        ([report.TVSummaryRecord(2, 2, Fraction(1, 4), 0.41, "exact")], report.TVSummaryRecord),
        (analysis.ratio_report(3, 40, 10), analysis.ComparisonRow),
        ([analysis.tv_report(3, 30, Mode.EXACT), analysis.tv_report(3, 30, Mode.FLOAT)], analysis.TVReport),
    ]
    for records, cls in samples:
        assert _roundtrip(records, cls) == list(records)


def test_json_field_names():
    data = json.loads(report.to_json([analysis.tv_report(2, 2)]))
    assert list(data[0]) == [f.name for f in dataclasses.fields(analysis.TVReport)]


@settings(max_examples=100, deadline=None)
@given(st.floats(allow_nan=False, allow_infinity=False), st.fractions())
def test_roundtrip_property(x, fr):
    rec = report.DistRecord("omega", 5, 3, "exact", 1, fr)
    assert _roundtrip([rec], report.DistRecord) == [rec]
    rec2 = report.HqRecord(2, x, 1e-10, x)
    assert _roundtrip([rec2], report.HqRecord) == [rec2]
    row = next(csv.DictReader(io.StringIO(report.to_csv([rec2], report.HqRecord))))
    assert float(row["value"]) == x


def test_serialize_is_deterministic_bytes():
    recs = analysis.ratio_report(2, 100, 8)
    assert report.serialize(recs, analysis.ComparisonRow, "csv") == report.serialize(recs, analysis.ComparisonRow, "csv")
    assert isinstance(report.serialize(recs, analysis.ComparisonRow, "json"), bytes)
    with pytest.raises(ValueError):
        report.serialize(recs, analysis.ComparisonRow, "xml")


def test_json_rejects_nan():
    with pytest.raises(ValueError):
        report.to_json([report.HqRecord(2, float("nan"), 1e-10, 1.0)])
