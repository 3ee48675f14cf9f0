"""Selector DSL: parsing, canonical printing, and indexing conversions.

A selector addresses code by intent rather than byte offset. Five forms are
supported, each with a canonical string syntax::

    src/app.py@L42:C7                                  cursor
    src/app.py@R(42,7->44,1)                           range
    py://pkg.mod#Class.method:body                     symbolic
    ast://[module=pkg.mod]/[class=C]/[def=m]/name[1]   AST path
    anchor://src/app.py#"def load_data("?ctx=24        content anchor

``parse_selector`` and ``print_selector`` are exact inverses over valid
specs: printing never emits redundant escapes, omits default fields, and
keeps AST segments in declaration order. ``# ? % "`` and space are
percent-encoded inside anchor snippets and paths; Windows paths
canonicalize to ``file:///C:/...`` with an uppercase drive letter.

``docVersion`` (an opaque document snapshot pin) has no string surface; it
travels only in the structured JSON form. Overload and anchor hash use
``?key=value`` query suffixes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Union

from .errors import BadSelectorSyntax, IndexingMismatch


class IndexingMode(str, Enum):
    UTF16 = "utf-16"
    UTF8 = "utf-8"
    CODEPOINT = "codepoint"


ROLES = ("def", "sig", "body", "doc")
DEFAULT_ANCHOR_CTX = 24

# Characters that must be percent-encoded in canonical paths and snippets.
_MANDATORY_ESCAPES = frozenset('#?%" ')


@dataclass(frozen=True)
class Cursor:
    uri: str
    line: int
    col: int
    indexing: IndexingMode = IndexingMode.CODEPOINT
    doc_version: str | None = None

    def __post_init__(self):
        if not self.uri:
            raise ValueError("cursor uri must be non-empty")
        if self.line < 1 or self.col < 1:
            raise ValueError("cursor line and column are 1-based")


@dataclass(frozen=True)
class RangeSel:
    uri: str
    start: tuple[int, int]
    end: tuple[int, int]
    indexing: IndexingMode = IndexingMode.CODEPOINT
    doc_version: str | None = None

    def __post_init__(self):
        if not self.uri:
            raise ValueError("range uri must be non-empty")
        for line, col in (self.start, self.end):
            if line < 1 or col < 1:
                raise ValueError("range positions are 1-based")
        if tuple(self.start) > tuple(self.end):
            raise ValueError("range start must not exceed end")


@dataclass(frozen=True)
class Symbolic:
    module: str
    qualname: str
    role: str = "def"
    overload: int = 0
    doc_version: str | None = None

    def __post_init__(self):
        if not self.module or not self.qualname:
            raise ValueError("symbolic module and qualname must be non-empty")
        if self.role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}")
        if self.overload < 0:
            raise ValueError("overload index must be non-negative")


@dataclass(frozen=True)
class AstPath:
    path: tuple[tuple[str, str], ...]
    index: int | None = None
    doc_version: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "path", tuple((k, n) for k, n in self.path))
        if not self.path:
            raise ValueError("ast path must have at least one segment")
        for kind, _name in self.path:
            if not kind.isidentifier():
                raise ValueError(f"ast node kind {kind!r} is not an identifier")
        if self.index is not None and self.index < 0:
            raise ValueError("ast positional index must be non-negative")


@dataclass(frozen=True)
class Anchor:
    uri: str
    snippet: str
    ctx: int = DEFAULT_ANCHOR_CTX
    hash: str | None = None
    doc_version: str | None = None

    def __post_init__(self):
        if not self.uri:
            raise ValueError("anchor uri must be non-empty")
        if not self.snippet:
            raise ValueError("anchor snippet must be non-empty")
        if self.ctx < 0:
            raise ValueError("anchor ctx must be non-negative")


PositionSpec = Union[Cursor, RangeSel, Symbolic, AstPath, Anchor]


# ---------------------------------------------------------------------------
# Percent escaping


def _percent_encode(text: str, extra: str = "") -> str:
    escape = _MANDATORY_ESCAPES.union(extra)
    out = []
    for ch in text:
        if ch in escape or ch < " " or ch == "\x7f":
            out.extend(f"%{b:02X}" for b in ch.encode("utf-8"))
        else:
            out.append(ch)
    return "".join(out)


def _percent_decode(text: str, what: str) -> str:
    out = bytearray()
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "%":
            if not re.fullmatch(r"%[0-9A-Fa-f]{2}", text[i : i + 3]):
                raise BadSelectorSyntax(
                    f"invalid percent escape in {what} at offset {i}: {text[i:i+3]!r}"
                )
            out.append(int(text[i + 1 : i + 3], 16))
            i += 3
        else:
            out.extend(ch.encode("utf-8"))
            i += 1
    try:
        return out.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise BadSelectorSyntax(f"percent escapes in {what} are not valid UTF-8") from exc


# ---------------------------------------------------------------------------
# URI handling

_WINDOWS_DRIVE = re.compile(r"^([A-Za-z]):[/\\]")


def _canonical_uri(raw: str, what: str = "path") -> str:
    uri = _percent_decode(raw, what)
    if not uri:
        raise BadSelectorSyntax(f"empty {what}")
    if _WINDOWS_DRIVE.match(uri):
        drive = uri[0].upper()
        rest = uri[2:].replace("\\", "/").lstrip("/")
        return f"file:///{drive}:/{rest}"
    if uri.startswith("file://"):
        rest = uri[len("file://") :]
        body = rest.lstrip("/")
        m = re.match(r"^([A-Za-z]):([/\\].*)?$", body)
        if m:
            tail = (m.group(2) or "/").replace("\\", "/")
            return f"file:///{m.group(1).upper()}:{tail}"
        if not rest.startswith("/"):
            raise BadSelectorSyntax(f"file uri must carry an absolute path: {uri!r}")
        return "file://" + rest
    return uri


def _encode_uri(uri: str) -> str:
    if uri.startswith("file://"):
        return "file://" + _percent_encode(uri[len("file://") :])
    return _percent_encode(uri)


# ---------------------------------------------------------------------------
# Parsing

_CURSOR_TAIL = re.compile(r"^L(\d+):C(\d+)$")
_RANGE_TAIL = re.compile(r"^R\((\d+),(\d+)->(\d+),(\d+)\)$")
_AST_NAMED_SEG = re.compile(
    r"^\[([^\[\]=/]+)=((?:[^\[\]/])*)\](?:\[(\d+)\])?$"
)
_AST_BARE_SEG = re.compile(r"^([^\[\]=/]+)(?:\[(\d+)\])?$")


def parse_selector(
    text: str, *, indexing: IndexingMode = IndexingMode.CODEPOINT
) -> PositionSpec:
    """Parse one selector expression into its structured form.

    ``indexing`` supplies the ambient coordinate interpretation for cursor
    and range selectors, which carry no indexing surface syntax.

    Raises BadSelectorSyntax (exit 2) for anything outside the grammar.
    """
    if not isinstance(text, str) or not text.strip():
        raise BadSelectorSyntax("selector is empty")
    text = text.strip()
    if text.startswith("py://"):
        return _parse_symbolic(text)
    if text.startswith("ast://"):
        return _parse_astpath(text)
    if text.startswith("anchor://"):
        return _parse_anchor(text)
    return _parse_positional(text, indexing)


def _invalid(spec_ctor, text: str, *args, **kwargs):
    try:
        return spec_ctor(*args, **kwargs)
    except ValueError as exc:
        raise BadSelectorSyntax(f"{exc} in {text!r}") from exc


def _parse_positional(text: str, indexing: IndexingMode) -> Cursor | RangeSel:
    # The path itself may contain '@'; take the rightmost split whose tail
    # parses as a position.
    for at in range(len(text) - 1, -1, -1):
        if text[at] != "@":
            continue
        tail = text[at + 1 :]
        m = _CURSOR_TAIL.match(tail)
        if m:
            uri = _canonical_uri(text[:at])
            return _invalid(
                Cursor, text,
                uri=uri, line=int(m.group(1)), col=int(m.group(2)),
                indexing=indexing,
            )
        m = _RANGE_TAIL.match(tail)
        if m:
            uri = _canonical_uri(text[:at])
            return _invalid(
                RangeSel, text,
                uri=uri,
                start=(int(m.group(1)), int(m.group(2))),
                end=(int(m.group(3)), int(m.group(4))),
                indexing=indexing,
            )
    raise BadSelectorSyntax(
        f"expected '@L<line>:C<col>' or '@R(l,c->l,c)' position in {text!r}"
    )


def _split_query(body: str, what: str) -> tuple[str, dict[str, str]]:
    if "?" not in body:
        return body, {}
    head, _, query = body.partition("?")
    params: dict[str, str] = {}
    for part in query.split("&"):
        key, eq, value = part.partition("=")
        if not eq or not key or not value:
            raise BadSelectorSyntax(f"malformed query {part!r} in {what}")
        if key in params:
            raise BadSelectorSyntax(f"duplicate query key {key!r} in {what}")
        params[key] = value
    return head, params


def _take_int(params: dict[str, str], key: str, what: str) -> int | None:
    value = params.pop(key, None)
    if value is None:
        return None
    if not value.isdigit():
        raise BadSelectorSyntax(f"{key} must be a non-negative integer in {what}")
    return int(value)


def _reject_unknown(params: dict[str, str], what: str) -> None:
    if params:
        raise BadSelectorSyntax(
            f"unknown query key(s) {sorted(params)} in {what}"
        )


def _parse_symbolic(text: str) -> Symbolic:
    body = text[len("py://") :]
    module_part, sep, rest = body.partition("#")
    if not sep:
        raise BadSelectorSyntax(f"symbolic selector needs '#<qualname>': {text!r}")
    rest, params = _split_query(rest, text)
    overload = _take_int(params, "overload", text) or 0
    _reject_unknown(params, text)

    role = "def"
    head, colon, last = rest.rpartition(":")
    if colon and last in ROLES:
        rest = head
        role = last

    module_segs = module_part.split(".")
    qual_segs = [seg for seg in re.split(r"[.:]", rest)]
    for seg in module_segs + qual_segs:
        if not seg.isidentifier():
            raise BadSelectorSyntax(
                f"segment {seg!r} is not an identifier in {text!r}"
            )
    return _invalid(
        Symbolic, text,
        module=".".join(module_segs),
        qualname=".".join(qual_segs),
        role=role,
        overload=overload,
    )


def _parse_astpath(text: str) -> AstPath:
    body = text[len("ast://") :]
    if not body:
        raise BadSelectorSyntax(f"ast selector has no segments: {text!r}")
    raw_segments = body.split("/")
    path: list[tuple[str, str]] = []
    index: int | None = None
    for pos, raw in enumerate(raw_segments):
        last = pos == len(raw_segments) - 1
        m = _AST_NAMED_SEG.match(raw)
        if m:
            kind, name, idx = m.group(1), _percent_decode(m.group(2), "ast name"), m.group(3)
        else:
            m = _AST_BARE_SEG.match(raw)
            if not m:
                raise BadSelectorSyntax(f"malformed ast segment {raw!r} in {text!r}")
            kind, name, idx = m.group(1), "", m.group(2)
        if idx is not None:
            if not last:
                raise BadSelectorSyntax(
                    f"positional index only allowed on the final segment: {text!r}"
                )
            index = int(idx)
        path.append((kind, name))
    return _invalid(AstPath, text, path=tuple(path), index=index)


def _parse_anchor(text: str) -> Anchor:
    body = text[len("anchor://") :]
    path_part, sep, rest = body.partition("#")
    if not sep:
        raise BadSelectorSyntax(f"anchor selector needs '#\"<snippet>\"': {text!r}")
    uri = _canonical_uri(path_part)
    if not rest.startswith('"'):
        raise BadSelectorSyntax(f"anchor snippet must be double-quoted: {text!r}")
    chars: list[str] = []
    i = 1
    closed = False
    while i < len(rest):
        ch = rest[i]
        if ch == "\\" and i + 1 < len(rest) and rest[i + 1] in '"/':
            chars.append(rest[i + 1])
            i += 2
        elif ch == '"':
            closed = True
            i += 1
            break
        else:
            chars.append(ch)
            i += 1
    if not closed:
        raise BadSelectorSyntax(f"unterminated anchor snippet in {text!r}")
    snippet = _percent_decode("".join(chars), "anchor snippet")
    tail = rest[i:]
    ctx = DEFAULT_ANCHOR_CTX
    digest = None
    if tail:
        if not tail.startswith("?"):
            raise BadSelectorSyntax(f"unexpected trailing text {tail!r} in {text!r}")
        _, params = _split_query(tail, text)
        ctx_val = _take_int(params, "ctx", text)
        if ctx_val is not None:
            ctx = ctx_val
        digest = params.pop("hash", None)
        if digest is not None and not re.fullmatch(r"[A-Za-z0-9:+/=._-]+", digest):
            raise BadSelectorSyntax(f"malformed hash value in {text!r}")
        _reject_unknown(params, text)
    return _invalid(Anchor, text, uri=uri, snippet=snippet, ctx=ctx, hash=digest)


# ---------------------------------------------------------------------------
# Canonical printing


def print_selector(spec: PositionSpec) -> str:
    """Emit the unique canonical string for a valid spec.

    parse_selector(print_selector(x), indexing=...) reproduces x for every
    valid spec (docVersion has no string surface and is carried only in the
    structured form).
    """
    if isinstance(spec, Cursor):
        return f"{_encode_uri(spec.uri)}@L{spec.line}:C{spec.col}"
    if isinstance(spec, RangeSel):
        (sl, sc), (el, ec) = spec.start, spec.end
        return f"{_encode_uri(spec.uri)}@R({sl},{sc}->{el},{ec})"
    if isinstance(spec, Symbolic):
        text = f"py://{spec.module}#{spec.qualname}"
        if spec.role != "def":
            text += f":{spec.role}"
        if spec.overload:
            text += f"?overload={spec.overload}"
        return text
    if isinstance(spec, AstPath):
        segments = []
        for kind, name in spec.path:
            if name:
                encoded = _percent_encode(name, extra="[]/\\")
                segments.append(f"[{kind}={encoded}]")
            else:
                segments.append(kind)
        if spec.index is not None:
            segments[-1] += f"[{spec.index}]"
        return "ast://" + "/".join(segments)
    if isinstance(spec, Anchor):
        snippet = _percent_encode(spec.snippet, extra="\\")
        text = f'anchor://{_encode_uri(spec.uri)}#"{snippet}"'
        params = []
        if spec.ctx != DEFAULT_ANCHOR_CTX:
            params.append(f"ctx={spec.ctx}")
        if spec.hash is not None:
            params.append(f"hash={spec.hash}")
        if params:
            text += "?" + "&".join(params)
        return text
    raise TypeError(f"not a PositionSpec: {type(spec).__name__}")


# ---------------------------------------------------------------------------
# Structured (JSON) form


def spec_to_json(spec: PositionSpec) -> dict[str, Any]:
    doc: dict[str, Any]
    if isinstance(spec, Cursor):
        doc = {
            "kind": "cursor",
            "uri": spec.uri,
            "line": spec.line,
            "col": spec.col,
            "indexing": spec.indexing.value,
        }
    elif isinstance(spec, RangeSel):
        doc = {
            "kind": "range",
            "uri": spec.uri,
            "start": [spec.start[0], spec.start[1]],
            "end": [spec.end[0], spec.end[1]],
            "indexing": spec.indexing.value,
        }
    elif isinstance(spec, Symbolic):
        doc = {
            "kind": "symbol",
            "module": spec.module,
            "qualname": spec.qualname,
            "role": spec.role,
            "overload": spec.overload,
        }
    elif isinstance(spec, AstPath):
        doc = {"kind": "ast", "path": [[k, n] for k, n in spec.path]}
        if spec.index is not None:
            doc["index"] = spec.index
    elif isinstance(spec, Anchor):
        doc = {
            "kind": "anchor",
            "uri": spec.uri,
            "snippet": spec.snippet,
            "ctx": spec.ctx,
        }
        if spec.hash is not None:
            doc["hash"] = spec.hash
    else:
        raise TypeError(f"not a PositionSpec: {type(spec).__name__}")
    if spec.doc_version is not None:
        doc["docVersion"] = spec.doc_version
    return doc


def spec_from_json(doc: Any) -> PositionSpec:
    if not isinstance(doc, dict):
        raise BadSelectorSyntax("structured selector must be an object")
    kind = doc.get("kind")
    doc_version = doc.get("docVersion")
    if doc_version is not None and not isinstance(doc_version, str):
        raise BadSelectorSyntax("docVersion must be a string")
    try:
        if kind == "cursor":
            return Cursor(
                uri=doc["uri"],
                line=int(doc["line"]),
                col=int(doc["col"]),
                indexing=IndexingMode(doc.get("indexing", "codepoint")),
                doc_version=doc_version,
            )
        if kind == "range":
            return RangeSel(
                uri=doc["uri"],
                start=tuple(int(v) for v in doc["start"]),
                end=tuple(int(v) for v in doc["end"]),
                indexing=IndexingMode(doc.get("indexing", "codepoint")),
                doc_version=doc_version,
            )
        if kind == "symbol":
            return Symbolic(
                module=doc["module"],
                qualname=doc["qualname"],
                role=doc.get("role", "def"),
                overload=int(doc.get("overload", 0)),
                doc_version=doc_version,
            )
        if kind == "ast":
            return AstPath(
                path=tuple((k, n) for k, n in doc["path"]),
                index=doc.get("index"),
                doc_version=doc_version,
            )
        if kind == "anchor":
            return Anchor(
                uri=doc["uri"],
                snippet=doc["snippet"],
                ctx=int(doc.get("ctx", DEFAULT_ANCHOR_CTX)),
                hash=doc.get("hash"),
                doc_version=doc_version,
            )
    except BadSelectorSyntax:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise BadSelectorSyntax(f"invalid structured selector: {exc}") from exc
    raise BadSelectorSyntax(f"unknown selector kind {kind!r}")


# ---------------------------------------------------------------------------
# Indexing conversions


def _unit_width(ch: str, mode: IndexingMode) -> int:
    if mode is IndexingMode.CODEPOINT:
        return 1
    if mode is IndexingMode.UTF16:
        return 2 if ord(ch) >= 0x10000 else 1
    return len(ch.encode("utf-8"))


def chars_for_units(line_text: str, units: int, mode: IndexingMode) -> int:
    """Number of characters covered by a 0-based unit offset into a line.

    Raises IndexingMismatch when the offset lands inside a multi-unit
    character or beyond the end of the line.
    """
    if units < 0:
        raise IndexingMismatch(f"negative column offset {units}")
    seen = 0
    for idx, ch in enumerate(line_text):
        if seen == units:
            return idx
        width = _unit_width(ch, mode)
        if seen + width > units:
            raise IndexingMismatch(
                f"column offset {units} falls inside a multi-unit character"
            )
        seen += width
    if seen != units:
        raise IndexingMismatch(
            f"column offset {units} is beyond the line length ({seen} units)"
        )
    return len(line_text)


def units_for_chars(line_text: str, chars: int, mode: IndexingMode) -> int:
    """Unit count of the first *chars* characters of a line."""
    if chars < 0 or chars > len(line_text):
        raise IndexingMismatch(f"character offset {chars} outside line")
    return sum(_unit_width(ch, mode) for ch in line_text[:chars])


def convert_position(
    pos: tuple[int, int],
    from_mode: IndexingMode,
    to_mode: IndexingMode,
    line_text: str,
) -> tuple[int, int]:
    """Re-express a 1-based (line, col) between indexing modes.

    The line is unchanged; the column is remeasured exactly over the same
    character prefix, so conversions compose and invert without rounding.
    """
    line, col = pos
    if col < 1:
        raise IndexingMismatch(f"column {col} is not 1-based")
    chars = chars_for_units(line_text, col - 1, from_mode)
    return line, units_for_chars(line_text, chars, to_mode) + 1
