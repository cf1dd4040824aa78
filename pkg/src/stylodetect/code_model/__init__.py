"""Multi-language code model: parsing, entities, comments, tokens."""

from __future__ import annotations

import re

from stylodetect.code_model.cfamily import parse_cfamily
from stylodetect.code_model.comments import CommentMap, detect_comment_lines
from stylodetect.code_model.entities import BLOCK_KINDS, EntityTables, extract_entities
from stylodetect.code_model.lexer import lex
from stylodetect.code_model.pyparse import parse_python
from stylodetect.code_model.tree import Span, TreeNode, span_contains
from stylodetect.code_model.units import (
    GENERATOR_ORDER,
    LLM_GENERATORS,
    Generator,
    Language,
    SourceUnit,
    load_corpus,
    read_corpus,
    unit_from_dict,
    unit_to_dict,
    save_corpus,
    write_corpus,
)
from stylodetect.errors import ParseError

__all__ = [
    "BLOCK_KINDS",
    "CommentMap",
    "EntityTables",
    "GENERATOR_ORDER",
    "Generator",
    "LLM_GENERATORS",
    "Language",
    "ParseError",
    "SourceUnit",
    "Span",
    "TreeNode",
    "detect_comment_lines",
    "extract_entities",
    "is_parseable",
    "load_corpus",
    "parse",
    "read_corpus",
    "span_contains",
    "tokenize_unit",
    "unit_from_dict",
    "unit_to_dict",
    "save_corpus",
    "write_corpus",
]


def parse(unit: SourceUnit) -> TreeNode:
    """Parse a unit into the language-neutral tree (ParseError on failure)."""
    if unit.language is Language.PYTHON:
        root, _ = parse_python(unit.text)
    else:
        root, _ = parse_cfamily(unit.text, unit.language)
    return root


def is_parseable(unit: SourceUnit) -> bool:
    try:
        parse(unit)
        return True
    except ParseError:
        return False


_FALLBACK_TOKEN_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*|\d[\w.]*|[^\s\w]")


def tokenize_unit(unit: SourceUnit) -> list[str]:
    """Lexer token spellings with comments excluded.

    Used by the token-set and frequency similarity baselines. Tolerant:
    malformed input falls back to a generic regex split.
    """
    if unit.language is Language.PYTHON:
        return _python_tokens(unit.text)
    tokens, _ = lex(unit.text, unit.language, strict=False)
    return [t.value for t in tokens]


def _python_tokens(text: str) -> list[str]:
    import io
    import tokenize as _tokenize

    skip = {
        _tokenize.COMMENT,
        _tokenize.NL,
        _tokenize.NEWLINE,
        _tokenize.INDENT,
        _tokenize.DEDENT,
        _tokenize.ENCODING,
        _tokenize.ENDMARKER,
    }
    out: list[str] = []
    try:
        for tok in _tokenize.generate_tokens(io.StringIO(text).readline):
            if tok.type not in skip and tok.string:
                out.append(tok.string)
        return out
    except (_tokenize.TokenError, IndentationError, SyntaxError, ValueError):
        stripped = re.sub(r"#[^\n]*", "", text)
        return _FALLBACK_TOKEN_RE.findall(stripped)
