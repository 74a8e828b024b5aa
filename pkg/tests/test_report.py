import csv
import io
import json
import math

from hypothesis import given
from hypothesis import strategies as st

from intrinsic_volumes.report import dumps, format_float, render, to_csv, to_json_lines

finite = st.floats(allow_nan=False, allow_infinity=False)
values = st.recursive(
    st.none() | st.booleans() | st.integers(-10**12, 10**12) | st.floats(allow_nan=False) | st.text(max_size=8),
    lambda inner: st.lists(inner, max_size=4) | st.dictionaries(st.text(max_size=5), inner, max_size=4),
    max_leaves=12,
)


@given(finite)
def test_floats_round_trip(x):
    assert float(format_float(x)) == x
    assert isinstance(json.loads(format_float(x)), float)


def test_special_floats():
    assert format_float(math.inf) == "Infinity"
    assert format_float(-math.inf) == "-Infinity"
    assert format_float(math.nan) == "NaN"
    assert format_float(2.0) == "2.0"
    assert format_float(1e300) == "1.0000000000000001e+300"
    assert json.loads(dumps({"x": math.inf}))["x"] == math.inf


@given(st.dictionaries(st.text(max_size=5), values, max_size=5))
def test_json_round_trip_is_identity(record):
    text = to_json_lines([record])
    again = to_json_lines([json.loads(text)])
    assert again == text


def test_field_order():
    line = to_json_lines([{"pass": True, "zzz": 1, "experiment": "a", "exact": 0.5}])
    assert line == '{"experiment": "a", "exact": 0.5, "pass": true, "zzz": 1}\n'


def test_csv_flattens_params():
    records = [
        {"experiment": "a", "params": {"n": 2, "k": 1}, "exact": 1.5},
        {"experiment": "b", "params": {"n": 3, "family": "BM"}, "exact": math.inf, "error": "x"},
    ]
    rows = list(csv.reader(io.StringIO(to_csv(records))))
    assert rows[0] == ["experiment", "params.n", "params.k", "exact", "params.family", "error"]
    assert rows[1] == ["a", "2", "1", "1.5", "", ""]
    assert rows[2] == ["b", "3", "", "Infinity", "BM", "x"]
    assert render(records, "csv") == to_csv(records)
