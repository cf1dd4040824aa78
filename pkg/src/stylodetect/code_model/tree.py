"""Language-neutral syntax tree."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Tuple

Span = Tuple[int, int, int, int]  # start line, end line, start col, end col (1-based lines)


@dataclass
class TreeNode:
    kind: str
    span: Span
    children: list["TreeNode"] = field(default_factory=list)
    #: Identifier attached to named constructs (function/class name), "" otherwise.
    name: str = ""

    def walk(self) -> Iterator["TreeNode"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def node_count(self) -> int:
        return sum(1 for _ in self.walk())

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"TreeNode({self.kind!r}, span={self.span}, children={len(self.children)})"


def span_contains(outer: Span, inner: Span) -> bool:
    """True when `inner` lies within `outer` in (line, column) order."""
    o_start = (outer[0], outer[2])
    o_end = (outer[1], outer[3])
    i_start = (inner[0], inner[2])
    i_end = (inner[1], inner[3])
    return o_start <= i_start and i_end <= o_end


def widen_to_children(node: TreeNode) -> None:
    """Grow `node.span` so every child's span is contained in it."""
    s_line, e_line, s_col, e_col = node.span
    start = (s_line, s_col)
    end = (e_line, e_col)
    for child in node.children:
        c_start = (child.span[0], child.span[2])
        c_end = (child.span[1], child.span[3])
        start = min(start, c_start)
        end = max(end, c_end)
    node.span = (start[0], end[0], start[1], end[1])
