"""Comment-line detection for all four languages.

Never raises: malformed code still gets a best-effort comment map, since
the comment ratio is defined for every unit that survives ingestion.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass

from stylodetect.code_model.lexer import lex
from stylodetect.code_model.units import Language, SourceUnit


@dataclass
class CommentMap:
    total_lines: int
    comment_lines: int
    per_line: list[bool]


def detect_comment_lines(unit: SourceUnit) -> CommentMap:
    lines = unit.text.splitlines()
    total = len(lines)
    flags = [False] * total

    def mark(start: int, end: int) -> None:
        for ln in range(start, min(end, total) + 1):
            if ln >= 1:
                flags[ln - 1] = True

    if unit.language is Language.PYTHON:
        for start, end in _python_comment_ranges(unit.text):
            mark(start, end)
    else:
        _, comments = lex(unit.text, unit.language, strict=False)
        for start, end in comments:
            mark(start, end)
    return CommentMap(total, sum(flags), flags)


def _python_comment_ranges(text: str) -> list[tuple[int, int]]:
    ranges = _hash_comment_lines(text)
    ranges.extend(_docstring_ranges(text))
    return ranges


def _hash_comment_lines(text: str) -> list[tuple[int, int]]:
    """Lines carrying a '#' comment, via a small string-aware scanner."""
    ranges: list[tuple[int, int]] = []
    i = 0
    line = 1
    n = len(text)
    in_string: str | None = None  # active quote: ', ", ''' or three-double
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if in_string is not None:
            if ch == "\\":
                if i + 1 < n and text[i + 1] == "\n":
                    line += 1
                i += 2
                continue
            if text.startswith(in_string, i):
                i += len(in_string)
                in_string = None
                continue
            i += 1
            continue
        if ch == "#":
            ranges.append((line, line))
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "'\"":
            triple = ch * 3
            if text.startswith(triple, i):
                in_string = triple
                i += 3
            else:
                in_string = ch
                i += 1
            continue
        i += 1
    return ranges


def _docstring_ranges(text: str) -> list[tuple[int, int]]:
    """Docstrings count as comment lines (string-expression statements in
    module, class, or function position)."""
    try:
        module = ast.parse(text)
    except (SyntaxError, ValueError, MemoryError, RecursionError):
        return []
    ranges: list[tuple[int, int]] = []
    for node in ast.walk(module):
        if isinstance(node, (ast.Module, ast.ClassDef, ast.FunctionDef, ast.AsyncFunctionDef)):
            body = node.body
            if (
                body
                and isinstance(body[0], ast.Expr)
                and isinstance(body[0].value, ast.Constant)
                and isinstance(body[0].value.value, str)
            ):
                expr = body[0]
                ranges.append((expr.lineno, expr.end_lineno))
    return ranges
