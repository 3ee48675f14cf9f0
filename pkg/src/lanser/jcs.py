"""RFC 8785 canonical JSON (JCS) encoding and content hashing.

Canonical bytes are the hashing substrate for bundle ids, cache keys, and
trace frame digests, so this implementation follows RFC 8785 precisely:

- object members sorted by the UTF-16 code units of their names,
- numbers in ECMAScript ``Number::toString`` shortest round-trip form,
- minimal string escaping (two-character escapes where defined, ``\\u00xx``
  with lowercase hex for other control characters),
- UTF-8 output, no insignificant whitespace, NaN/Infinity rejected.

Python ``repr`` already produces shortest round-trip digits; only the
decimal/exponent notation thresholds differ from ECMAScript, which
``_format_number`` reconciles.
"""

from __future__ import annotations

import hashlib
import math
from typing import Any


class CanonicalizationError(ValueError):
    """Value cannot be represented in canonical JSON."""


_TWO_CHAR_ESCAPES = {
    '"': '\\"',
    "\\": "\\\\",
    "\b": "\\b",
    "\f": "\\f",
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
}


def canonicalize(value: Any) -> bytes:
    """Return the canonical UTF-8 byte serialization of *value*."""
    return canonical_text(value).encode("utf-8")


def canonical_text(value: Any) -> str:
    out: list[str] = []
    _write(value, out)
    return "".join(out)


def sha256_hex(value: Any) -> str:
    """Lowercase hex SHA-256 of the canonical bytes of *value*."""
    return hashlib.sha256(canonicalize(value)).hexdigest()


def content_id(value: Any) -> str:
    """Content address in ``sha256:<hex>`` form."""
    return "sha256:" + sha256_hex(value)


def digest_bytes(data: bytes) -> str:
    """``sha256:<hex>`` over raw bytes (not canonicalized)."""
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _write(value: Any, out: list[str]) -> None:
    if value is None:
        out.append("null")
    elif value is True:
        out.append("true")
    elif value is False:
        out.append("false")
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(_format_number(value))
    elif isinstance(value, str):
        _write_string(value, out)
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(",")
            _write(item, out)
        out.append("]")
    elif isinstance(value, dict):
        _write_object(value, out)
    else:
        raise CanonicalizationError(
            f"type {type(value).__name__} is not canonicalizable"
        )


def _write_object(value: dict, out: list[str]) -> None:
    items = []
    for key, member in value.items():
        if not isinstance(key, str):
            raise CanonicalizationError("object keys must be strings")
        items.append((_utf16_units(key), key, member))
    items.sort(key=lambda entry: entry[0])
    out.append("{")
    for i, (_, key, member) in enumerate(items):
        if i:
            out.append(",")
        _write_string(key, out)
        out.append(":")
        _write(member, out)
    out.append("}")


def _write_string(value: str, out: list[str]) -> None:
    out.append('"')
    for ch in value:
        esc = _TWO_CHAR_ESCAPES.get(ch)
        if esc is not None:
            out.append(esc)
        elif ch < " ":
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')


def _utf16_units(text: str) -> tuple[int, ...]:
    units: list[int] = []
    for ch in text:
        cp = ord(ch)
        if cp < 0x10000:
            units.append(cp)
        else:
            cp -= 0x10000
            units.append(0xD800 + (cp >> 10))
            units.append(0xDC00 + (cp & 0x3FF))
    return tuple(units)


def _format_number(value: float) -> str:
    if math.isnan(value) or math.isinf(value):
        raise CanonicalizationError("NaN and Infinity are not canonicalizable")
    if value == 0.0:
        return "0"
    sign = "-" if value < 0 else ""
    digits, point = _shortest_digits(abs(value))
    k = len(digits)
    n = point
    if k <= n <= 21:
        body = digits + "0" * (n - k)
    elif 0 < n <= 21:
        body = digits[:n] + "." + digits[n:]
    elif -6 < n <= 0:
        body = "0." + "0" * (-n) + digits
    else:
        mantissa = digits[0] + ("." + digits[1:] if k > 1 else "")
        exponent = n - 1
        body = f"{mantissa}e{'+' if exponent >= 0 else '-'}{abs(exponent)}"
    return sign + body


def _shortest_digits(value: float) -> tuple[str, int]:
    """Shortest round-trip digits of *value* plus the decimal point position.

    Returns (digits, n) such that value == 0.<digits> * 10**n, with digits
    carrying no leading or trailing zeros.
    """
    text = repr(value)
    mantissa, _, exp_text = text.lower().partition("e")
    exp = int(exp_text) if exp_text else 0
    int_part, _, frac_part = mantissa.partition(".")
    raw = str(int(int_part + frac_part))
    digits = raw.rstrip("0")
    trimmed = len(raw) - len(digits)
    # value == int(raw) * 10**(exp - len(frac_part))
    n = len(digits) + trimmed + exp - len(frac_part)
    return digits, n
