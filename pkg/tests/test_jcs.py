"""Canonical JSON checks: frozen vectors, an independent oracle, properties."""

from __future__ import annotations

import json
import math
import struct

import pytest
from hypothesis import given, strategies as st

from lanser.jcs import CanonicalizationError, canonical_text, canonicalize, sha256_hex


def _oracle_dumps(value) -> str:
    """Second, structurally different canonicalizer used as a cross-check.

    Sorts object keys via their UTF-16BE byte encoding and leans on
    ``json.dumps`` for string escaping; numbers are delegated to the main
    implementation only for floats that the frozen IEEE vectors below
    already pin down.
    """
    if value is None or value is True or value is False:
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        from lanser.jcs import _format_number

        return _format_number(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_oracle_dumps(v) for v in value) + "]"
    if isinstance(value, dict):
        keys = sorted(value.keys(), key=lambda s: s.encode("utf-16-be"))
        return "{" + ",".join(
            json.dumps(k, ensure_ascii=False) + ":" + _oracle_dumps(value[k])
            for k in keys
        ) + "}"
    raise TypeError(type(value))


def _from_bits(hexrep: str) -> float:
    return struct.unpack(">d", bytes.fromhex(hexrep))[0]


# ECMAScript Number::toString outputs for IEEE-754 bit patterns. Each input
# is reconstructed from bits so the expected strings are checkable against
# the mathematical value (min subnormal, max double, 2**53, 2**53 + 2, 1e21
# boundary, the 1e-6 notation boundary pair).
IEEE_VECTORS = [
    ("0000000000000000", "0"),
    ("8000000000000000", "0"),
    ("0000000000000001", "5e-324"),
    ("7fefffffffffffff", "1.7976931348623157e+308"),
    ("4340000000000000", "9007199254740992"),
    ("4340000000000001", "9007199254740994"),
    ("444b1ae4d6e2ef50", "1e+21"),
    ("3eb0c6f7a0b5ed8d", "0.000001"),
    ("3eb0c6f7a0b5ed8c", "9.999999999999997e-7"),
]


@pytest.mark.parametrize("bits,expected", IEEE_VECTORS)
def test_number_vectors(bits, expected):
    assert canonical_text(_from_bits(bits)) == expected


def test_number_vector_identities():
    assert _from_bits("444b1ae4d6e2ef50") == 1e21
    assert _from_bits("4340000000000000") == 2**53
    assert _from_bits("4340000000000001") == 2**53 + 2
    assert _from_bits("3eb0c6f7a0b5ed8d") == 1e-6


@pytest.mark.parametrize(
    "value,expected",
    [
        ({"b": 1, "a": 2}, b'{"a":2,"b":1}'),
        ({}, b"{}"),
        ([], b"[]"),
        (1.5, b"1.5"),
        (10.0, b"10"),
        (0.002, b"0.002"),
        (1e30, b"1e+30"),
        (1e-27, b"1e-27"),
        (333333333.33333329, b"333333333.3333333"),
        ("€$\nA'B\"\\\\\"/", b'"\xe2\x82\xac$\\u000f\\nA\'B\\"\\\\\\\\\\"/"'),
    ],
)
def test_basic_vectors(value, expected):
    assert canonicalize(value) == expected


# Golden bytes for a nested fixture with unicode keys; computed once with the
# oracle serializer and frozen here.
NESTED_FIXTURE = {
    "numéro": [1.0, 2, {"ü": None}],
    "a": True,
    "€": "x y",
}
NESTED_GOLDEN = '{"a":true,"numéro":[1,2,{"ü":null}],"€":"x y"}'


def test_nested_unicode_fixture():
    assert canonical_text(NESTED_FIXTURE) == NESTED_GOLDEN
    assert canonical_text(NESTED_FIXTURE) == _oracle_dumps(NESTED_FIXTURE)


def test_key_sorting_uses_utf16_units():
    # U+10000 encodes as the surrogate pair d800 dc00, which sorts before
    # U+E000 under UTF-16 code units despite the higher code point.
    value = {"": 1, "\U00010000": 2}
    assert canonical_text(value) == '{"\U00010000":2,"":1}'


def test_rejects_non_finite():
    for bad in (float("nan"), float("inf"), float("-inf")):
        with pytest.raises(CanonicalizationError):
            canonicalize(bad)
    with pytest.raises(CanonicalizationError):
        canonicalize({"x": float("nan")})


def test_rejects_non_string_keys():
    with pytest.raises(CanonicalizationError):
        canonicalize({1: "x"})


json_scalars = st.one_of(
    st.none(),
    st.booleans(),
    st.integers(min_value=-(2**53), max_value=2**53),
    st.floats(allow_nan=False, allow_infinity=False),
    st.text(),
)
json_values = st.recursive(
    json_scalars,
    lambda children: st.one_of(
        st.lists(children, max_size=4),
        st.dictionaries(st.text(max_size=8), children, max_size=4),
    ),
    max_leaves=20,
)


def _as_double(parsed, original):
    """Reparse-compare helper: ES number text re-reads to the same double."""
    if isinstance(original, float) and isinstance(parsed, (int, float)):
        return float(parsed) == original or (original == 0.0 and parsed == 0)
    if isinstance(original, list):
        return isinstance(parsed, list) and len(parsed) == len(original) and all(
            _as_double(p, o) for p, o in zip(parsed, original)
        )
    if isinstance(original, dict):
        return isinstance(parsed, dict) and parsed.keys() == original.keys() and all(
            _as_double(parsed[k], original[k]) for k in original
        )
    return parsed == original


@given(json_values)
def test_round_trips_through_json(value):
    encoded = canonicalize(value)
    assert _as_double(json.loads(encoded.decode("utf-8")), value)


@given(json_values)
def test_idempotent_and_matches_oracle_shape(value):
    encoded = canonical_text(value)
    assert canonical_text(json.loads(encoded)) == encoded


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_serialization_round_trips(value):
    text = canonical_text(value)
    back = float(text)
    if value == 0.0:
        assert back == 0.0
    else:
        assert math.copysign(1.0, back) == math.copysign(1.0, value)
        assert back == value


@given(st.dictionaries(st.text(max_size=6), st.integers(), max_size=6))
def test_object_agreement_with_oracle(value):
    assert canonical_text(value) == _oracle_dumps(value)


def test_sha256_is_over_canonical_bytes():
    import hashlib

    value = {"k": [1, 2.5, "s"]}
    assert sha256_hex(value) == hashlib.sha256(canonicalize(value)).hexdigest()
