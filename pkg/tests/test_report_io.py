import json

import jsonschema
import numpy as np
import pytest
from hypothesis import given, strategies as st

from holonomy_lab import report_io as rio


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_floats_round_trip_exactly(x):
    assert json.loads(rio.dumps({"x": x}))["x"] == x


def test_integral_floats_stay_floats():
    assert rio.dumps(2.0).strip() == "2.0"
    assert isinstance(json.loads(rio.dumps(2.0)), float)


def test_seventeen_significant_digits():
    assert rio.dumps(0.1).strip() == "0.10000000000000001"


def test_to_plain_numpy_and_complex():
    plain = rio.to_plain({"a": np.arange(3), "b": np.float32(1.5), "c": 1 + 2j, "d": (np.bool_(True),)})
    assert plain == {"a": [0, 1, 2], "b": 1.5, "c": {"re": 1.0, "im": 2.0}, "d": [True]}


def test_nonfinite_become_null():
    assert json.loads(rio.dumps([float("nan"), float("inf")])) == [None, None]


def test_unserialisable_raises():
    with pytest.raises(TypeError):
        rio.dumps({"x": object()})


def test_csv_text():
    text = rio.csv_text(["a", "b"], [[1.0, 0.1], [2, 3]])
    assert text.splitlines() == ["a,b", "1,0.10000000000000001", "2,3"]


def test_write_text_to_file_and_stdout(tmp_path, capsys):
    p = tmp_path / "sub" / "out.json"
    rio.write_text("hello\n", p)
    assert p.read_text() == "hello\n"
    rio.write_text("hi\n", "-")
    assert capsys.readouterr().out == "hi\n"


def test_schema_rejects_incomplete_reports():
    rio.validate_report({"report": "geometry", "version": "0", "config": {}, "quantity": "volume",
                         "value": 1.0, "expected": 1.0, "error": 0.0})
    with pytest.raises(jsonschema.ValidationError):
        rio.validate_report({"report": "geometry", "version": "0", "config": {}})
    with pytest.raises(jsonschema.ValidationError):
        rio.validate_report({"report": "nonsense", "version": "0", "config": {}})
