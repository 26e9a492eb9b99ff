import json
import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from dilastab.serialize import dumps_json, fmt, to_plain


def test_fmt_uses_17_significant_digits():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(1.0) == "1"
    assert fmt(3) == "3"
    assert fmt(np.float64(2.5)) == "2.5"
    assert fmt(True) == "true"
    assert (fmt(math.nan), fmt(math.inf), fmt(-math.inf)) == ("NaN", "Infinity", "-Infinity")


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_roundtrips_exactly(x):
    assert float(fmt(x)) == x


def test_to_plain_handles_numpy_and_tuples():
    obj = {"a": np.arange(3), "b": (np.float32(1.5), np.bool_(True)), 1: np.int64(7)}
    assert to_plain(obj) == {"a": [0, 1, 2], "b": [1.5, True], "1": 7}


def test_dumps_json_is_valid_and_deterministic():
    obj = {"x": [1.0, 0.1], "nested": {"y": [{"z": 1e-300}], "empty": {}, "none": None, "s": "é"}}
    text = dumps_json(obj)
    assert text == dumps_json(obj)
    back = json.loads(text)
    assert back["x"] == [1.0, 0.1] and back["nested"]["y"][0]["z"] == 1e-300
    assert '"x": [1, 0.10000000000000001]' in text


def test_nonfinite_values_parse_with_the_standard_library():
    back = json.loads(dumps_json({"v": [math.nan, math.inf]}))
    assert math.isnan(back["v"][0]) and back["v"][1] == math.inf
