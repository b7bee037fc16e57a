import struct

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stlstego.errors import StlParseError
from stlstego.floatfmt import (
    format_scientific,
    format_standard,
    is_number_token,
    parse_float32,
)

finite_f32 = st.floats(allow_nan=False, allow_infinity=False, width=32)


def test_parse_rounds_to_single_precision():
    assert parse_float32("0.527998") == float(np.float32("0.527998"))
    assert parse_float32("5.906999e0") == parse_float32("5.906999")


@pytest.mark.parametrize("token", ["nan", "inf", "-inf", "1_000", "0x1p3", "", "1e", "--1"])
def test_parse_rejects_non_grammar_tokens(token):
    with pytest.raises(StlParseError):
        parse_float32(token)


def test_parse_rejects_single_precision_overflow():
    with pytest.raises(StlParseError):
        parse_float32("1e39")


def test_format_standard_examples():
    assert format_standard(0.0) == "0"
    assert format_standard(-0.0) == "0"
    assert format_standard(52.0) == "52"
    assert format_standard(float(np.float32("0.527998"))) == "0.527998"
    assert format_standard(float(np.float32("-13.101"))) == "-13.101"


def test_format_scientific_examples():
    assert format_scientific(float(np.float32("0.527998"))) == "5.27998e-1"
    assert format_scientific(52.0) == "5.2e1"
    assert format_scientific(0.0) == "0e0"


@given(finite_f32)
def test_standard_round_trips_exactly(x):
    token = format_standard(x)
    assert "e" not in token and "E" not in token
    assert parse_float32(token) == x or x == 0.0


@given(finite_f32)
def test_scientific_round_trips_exactly(x):
    token = format_scientific(x)
    assert "e" in token
    assert is_number_token(token)
    assert parse_float32(token) == x or x == 0.0


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_standard_round_trips_raw_bit_patterns(bits):
    x = struct.unpack("<f", struct.pack("<I", bits))[0]
    if not np.isfinite(np.float32(x)):
        return
    token = format_standard(x)
    assert np.float32(parse_float32(token)) == np.float32(x) or np.float32(x) == 0
