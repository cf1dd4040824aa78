"""Lexer for the brace languages (C, C++, Java).

Produces a flat token stream plus the line ranges covered by comments.
Comments and preprocessor directives are tokenized but kept out of the
main stream consumed by the structural parser.
"""

from __future__ import annotations

from dataclasses import dataclass

from stylodetect.code_model.units import Language
from stylodetect.errors import ParseError

# Longest-first so maximal munch works with a simple prefix check.
_OPERATORS = sorted(
    [
        ">>>=", "<<=", ">>=", "...", "->*", "::*",
        "->", "::", "++", "--", "<<", ">>", ">>>", "<=", ">=", "==", "!=",
        "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", ".*",
        "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "&", "|", "^",
        "?", ":", ";", ",", ".", "(", ")", "[", "]", "{", "}",
    ],
    key=len,
    reverse=True,
)

_ID_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_ID_CONT = _ID_START | set("0123456789")
_DIGITS = set("0123456789")


@dataclass(frozen=True)
class Token:
    kind: str  # id | num | str | char | op | pp
    value: str
    line: int  # 1-based
    col: int  # 0-based
    end_line: int
    end_col: int


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.i = 0
        self.line = 1
        self.col = 0

    def eof(self) -> bool:
        return self.i >= len(self.text)

    def peek(self, offset: int = 0) -> str:
        j = self.i + offset
        return self.text[j] if j < len(self.text) else ""

    def advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.i >= len(self.text):
                return
            if self.text[self.i] == "\n":
                self.line += 1
                self.col = 0
            else:
                self.col += 1
            self.i += 1

    def startswith(self, s: str) -> bool:
        return self.text.startswith(s, self.i)


def lex(
    text: str,
    language: Language,
    strict: bool = True,
) -> tuple[list[Token], list[tuple[int, int]]]:
    """Tokenize `text`; return (tokens, comment line ranges).

    In strict mode an unterminated block comment, string, or char literal
    raises ParseError; in tolerant mode the construct runs to EOF (used by
    comment detection, which must never fail).
    """
    sc = _Scanner(text)
    tokens: list[Token] = []
    comments: list[tuple[int, int]] = []
    line_start = True  # only whitespace seen since the last newline

    def fail(msg: str) -> None:
        if strict:
            raise ParseError(f"line {sc.line}: {msg}")

    while not sc.eof():
        ch = sc.peek()

        if ch == "\n":
            sc.advance()
            line_start = True
            continue
        if ch in " \t\r\f\v":
            sc.advance()
            continue

        if sc.startswith("//"):
            start = sc.line
            while not sc.eof() and sc.peek() != "\n":
                sc.advance()
            comments.append((start, start))
            continue

        if sc.startswith("/*"):
            start = sc.line
            sc.advance(2)
            while not sc.eof() and not sc.startswith("*/"):
                sc.advance()
            if sc.eof():
                fail("unterminated block comment")
                comments.append((start, sc.line))
                break
            sc.advance(2)
            comments.append((start, sc.line))
            line_start = False
            continue

        if ch == "#" and line_start and language in (Language.C, Language.CPP):
            tokens.append(_scan_preprocessor(sc))
            line_start = True
            continue

        line_start = False

        if language is Language.JAVA and sc.startswith('"""'):
            tokens.append(_scan_text_block(sc, fail))
            continue

        if language is Language.CPP and _at_raw_string(sc):
            tokens.append(_scan_raw_string(sc, fail))
            continue

        if ch == '"' or ch == "'":
            tokens.append(_scan_quoted(sc, fail))
            continue

        if ch in _DIGITS or (ch == "." and sc.peek(1) in _DIGITS):
            tokens.append(_scan_number(sc))
            continue

        if ch in _ID_START:
            tokens.append(_scan_identifier(sc))
            continue

        tok = _scan_operator(sc)
        tokens.append(tok)

    return tokens, comments


def _scan_preprocessor(sc: _Scanner) -> Token:
    line, col = sc.line, sc.col
    start = sc.i
    while not sc.eof():
        if sc.peek() == "\\" and sc.peek(1) == "\n":
            sc.advance(2)
            continue
        if sc.peek() == "\n":
            break
        if sc.startswith("//") or sc.startswith("/*"):
            break
        sc.advance()
    value = sc.text[start : sc.i]
    return Token("pp", value, line, col, sc.line, sc.col)


def _scan_quoted(sc: _Scanner, fail) -> Token:
    quote = sc.peek()
    line, col = sc.line, sc.col
    start = sc.i
    sc.advance()
    while not sc.eof():
        c = sc.peek()
        if c == "\\":
            sc.advance(2)
            continue
        sc.advance()
        if c == quote:
            value = sc.text[start : sc.i]
            kind = "str" if quote == '"' else "char"
            return Token(kind, value, line, col, sc.line, sc.col)
    fail(f"unterminated {quote} literal")
    value = sc.text[start : sc.i]
    return Token("str" if quote == '"' else "char", value, line, col, sc.line, sc.col)


def _scan_text_block(sc: _Scanner, fail) -> Token:
    line, col = sc.line, sc.col
    start = sc.i
    sc.advance(3)
    while not sc.eof() and not sc.startswith('"""'):
        if sc.peek() == "\\":
            sc.advance(2)
            continue
        sc.advance()
    if sc.eof():
        fail("unterminated text block")
    else:
        sc.advance(3)
    return Token("str", sc.text[start : sc.i], line, col, sc.line, sc.col)


def _at_raw_string(sc: _Scanner) -> bool:
    # C++ raw string literal: R"delim( ... )delim", optionally u8R/uR/UR/LR.
    i = sc.i
    text = sc.text
    for prefix in ("u8R", "uR", "UR", "LR", "R"):
        if text.startswith(prefix + '"', i):
            prev = text[i - 1] if i > 0 else ""
            return prev not in _ID_CONT
    return False


def _scan_raw_string(sc: _Scanner, fail) -> Token:
    line, col = sc.line, sc.col
    start = sc.i
    while sc.peek() != '"':
        sc.advance()
    sc.advance()
    delim_start = sc.i
    while not sc.eof() and sc.peek() not in "(\n":
        sc.advance()
    if sc.peek() != "(":
        fail("malformed raw string delimiter")
        return Token("str", sc.text[start : sc.i], line, col, sc.line, sc.col)
    delim = sc.text[delim_start : sc.i]
    closer = ")" + delim + '"'
    sc.advance()
    while not sc.eof() and not sc.startswith(closer):
        sc.advance()
    if sc.eof():
        fail("unterminated raw string")
    else:
        sc.advance(len(closer))
    return Token("str", sc.text[start : sc.i], line, col, sc.line, sc.col)


def _scan_number(sc: _Scanner) -> Token:
    line, col = sc.line, sc.col
    start = sc.i
    sc.advance()
    while not sc.eof():
        c = sc.peek()
        if c in _ID_CONT or c == ".":
            sc.advance()
        elif c in "+-" and sc.text[sc.i - 1] in "eEpP":
            sc.advance()
        elif c == "'" and sc.peek(1) in _DIGITS:  # C++14 digit separator
            sc.advance()
        else:
            break
    return Token("num", sc.text[start : sc.i], line, col, sc.line, sc.col)


def _scan_identifier(sc: _Scanner) -> Token:
    line, col = sc.line, sc.col
    start = sc.i
    while not sc.eof() and sc.peek() in _ID_CONT:
        sc.advance()
    return Token("id", sc.text[start : sc.i], line, col, sc.line, sc.col)


def _scan_operator(sc: _Scanner) -> Token:
    line, col = sc.line, sc.col
    for op in _OPERATORS:
        if sc.startswith(op):
            sc.advance(len(op))
            return Token("op", op, line, col, sc.line, sc.col)
    ch = sc.peek()
    sc.advance()
    return Token("op", ch, line, col, sc.line, sc.col)
