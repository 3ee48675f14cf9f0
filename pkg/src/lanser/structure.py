"""Structural index of Python sources for symbolic and AST-path resolution.

Builds a definition tree (module / class / def) with per-node sub-ranges
for the four addressable roles: the whole definition, the signature header
(through its terminating colon), the suite body, and the docstring
literal. Identifier occurrences are collected per definition for
``name``-kind AST path segments.

Only structure is modeled; no evaluation or type semantics. Ranges are
(start_line, start_col, end_line, end_col), 1-based, columns in Unicode
code points, end-exclusive.
"""

from __future__ import annotations

import ast
import bisect
from dataclasses import dataclass, field

Range4 = tuple[int, int, int, int]


@dataclass
class DefNode:
    kind: str  # module | class | def
    name: str
    qualname: str  # dotted member path within the module, "" for the module
    full: Range4
    sig: Range4 | None = None
    body: Range4 | None = None
    doc: Range4 | None = None
    children: list["DefNode"] = field(default_factory=list)
    names: list[tuple[str, Range4]] = field(default_factory=list)

    def role_range(self, role: str) -> Range4 | None:
        return {"def": self.full, "sig": self.sig, "body": self.body, "doc": self.doc}[role]


def module_name_for(relpath: str) -> str:
    """Dotted module name of a workspace-relative .py path."""
    if relpath.endswith("/__init__.py"):
        relpath = relpath[: -len("/__init__.py")]
    elif relpath.endswith(".py"):
        relpath = relpath[: -len(".py")]
    return relpath.replace("/", ".")


def module_file_candidates(module: str) -> tuple[str, str]:
    """Workspace-relative paths that may define a dotted module.

    A package __init__ and a plain module file can coexist; resolution
    treats both as candidates rather than silently preferring one.
    """
    base = module.replace(".", "/")
    return (f"{base}/__init__.py", f"{base}.py")


def line_starts(text: str) -> list[int]:
    starts = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            starts.append(i + 1)
    return starts


def to_offset(starts: list[int], line: int, col: int) -> int:
    """1-based (line, col) to a 0-based character offset."""
    return starts[line - 1] + (col - 1)


def from_offset(starts: list[int], offset: int) -> tuple[int, int]:
    """0-based character offset to 1-based (line, col)."""
    import bisect

    line = bisect.bisect_right(starts, offset)
    return line, offset - starts[line - 1] + 1


class SourceIndex:
    """Parsed view of one Python source file."""

    def __init__(self, text: str):
        self.text = text
        self.starts = line_starts(text)
        self._lines = text.split("\n")
        tree = ast.parse(text)
        end = from_offset(self.starts, len(text))
        self.root = DefNode(kind="module", name="", qualname="", full=(1, 1, *end))
        self.root.doc = self._docstring_range(tree)
        self.root.names = self._collect_names(tree)
        self.root.children = [
            self._build(node, prefix="") for node in tree.body if _is_def(node)
        ]

    # -- construction -------------------------------------------------

    def _build(self, node: ast.AST, prefix: str) -> DefNode:
        kind = "class" if isinstance(node, ast.ClassDef) else "def"
        qualname = f"{prefix}{node.name}" if not prefix else f"{prefix}.{node.name}"
        start = self._node_start(node)
        end = self._node_end(node)
        item = DefNode(kind=kind, name=node.name, qualname=qualname, full=(*start, *end))
        start_off = to_offset(self.starts, *start)
        header_end = self._header_end(start_off)
        if header_end is not None:
            item.sig = (*start, *from_offset(self.starts, header_end))
        body_start = self._node_start(node.body[0]) if node.body else None
        if body_start is not None:
            item.body = (*body_start, *end)
        item.doc = self._docstring_range(node)
        item.names = self._collect_names(node)
        item.children = [
            self._build(child, prefix=qualname)
            for child in node.body
            if _is_def(child)
        ]
        return item

    def _node_start(self, node: ast.AST) -> tuple[int, int]:
        return node.lineno, self._char_col(node.lineno, node.col_offset) + 1

    def _node_end(self, node: ast.AST) -> tuple[int, int]:
        return node.end_lineno, self._char_col(node.end_lineno, node.end_col_offset) + 1

    def _char_col(self, line: int, byte_col: int) -> int:
        # ast column offsets count UTF-8 bytes within the line
        raw = self._lines[line - 1].encode("utf-8")
        return len(raw[:byte_col].decode("utf-8", errors="strict"))

    def _docstring_range(self, node: ast.AST) -> Range4 | None:
        body = getattr(node, "body", None)
        if (
            body
            and isinstance(body[0], ast.Expr)
            and isinstance(body[0].value, ast.Constant)
            and isinstance(body[0].value.value, str)
        ):
            lit = body[0].value
            return (*self._node_start(lit), *self._node_end(lit))
        return None

    def _collect_names(self, node: ast.AST) -> list[tuple[str, Range4]]:
        found: list[tuple[str, Range4]] = []
        for sub in ast.walk(node):
            if isinstance(sub, ast.Name):
                start = self._node_start(sub)
                found.append(
                    (sub.id, (*start, start[0], start[1] + len(sub.id)))
                )
        found.sort(key=lambda entry: entry[1])
        return found

    def _header_end(self, start_off: int) -> int | None:
        """Offset one past the colon that terminates a def/class header."""
        text = self.text
        i = start_off
        depth = 0
        while i < len(text):
            ch = text[i]
            if ch in "([{":
                depth += 1
            elif ch in ")]}":
                depth -= 1
            elif ch == "#":
                while i < len(text) and text[i] != "\n":
                    i += 1
                continue
            elif ch in "'\"":
                i = self._skip_string(i)
                continue
            elif ch == ":" and depth == 0:
                return i + 1
            i += 1
        return None

    def _skip_string(self, i: int) -> int:
        text = self.text
        quote = text[i]
        if text[i : i + 3] in (quote * 3,):
            closer = quote * 3
            j = text.find(closer, i + 3)
            return len(text) if j < 0 else j + 3
        j = i + 1
        while j < len(text):
            if text[j] == "\\":
                j += 2
                continue
            if text[j] == quote or text[j] == "\n":
                return j + 1
            j += 1
        return j

    # -- queries ------------------------------------------------------

    def find_members(self, parent: DefNode, name: str) -> list[DefNode]:
        """Direct children named *name*, in declaration order."""
        return [child for child in parent.children if child.name == name]

    def node_path_at(self, line: int, col: int) -> list[DefNode]:
        """Definition chain (outermost first) enclosing a position."""
        chain: list[DefNode] = []
        node = self.root
        while True:
            chain.append(node)
            inner = next(
                (
                    child
                    for child in node.children
                    if _contains(child.full, line, col)
                ),
                None,
            )
            if inner is None:
                return chain
            node = inner


def _is_def(node: ast.AST) -> bool:
    return isinstance(node, (ast.ClassDef, ast.FunctionDef, ast.AsyncFunctionDef))


def _contains(rng: Range4, line: int, col: int) -> bool:
    sl, sc, el, ec = rng
    return (sl, sc) <= (line, col) < (el, ec)
