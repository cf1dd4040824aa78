"""Structural parser for the brace languages (C, C++, Java).

Builds the language-neutral tree from the token stream: classes, function
definitions, control-flow constructs, and statement-level leaves. The
parser is deliberately permissive about expressions (it never inspects
them) but strict about balance: mismatched braces, brackets, or parens
raise ParseError, which is the signal used to exclude a unit from the
corpus.

Entity information (declared names, parameters, constants) is collected
during the same pass and cached, so feature extraction does not re-parse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

from stylodetect.code_model.lexer import Token, lex
from stylodetect.code_model.tree import TreeNode, widen_to_children
from stylodetect.code_model.units import Language
from stylodetect.errors import ParseError

_C_KEYWORDS = {
    "auto", "break", "case", "char", "const", "continue", "default", "do",
    "double", "else", "enum", "extern", "float", "for", "goto", "if",
    "inline", "int", "long", "register", "restrict", "return", "short",
    "signed", "sizeof", "static", "struct", "switch", "typedef", "union",
    "unsigned", "void", "volatile", "while", "_Bool",
}

_CPP_KEYWORDS = _C_KEYWORDS | {
    "alignas", "alignof", "bool", "catch", "class", "constexpr", "consteval",
    "constinit", "decltype", "delete", "dynamic_cast", "explicit", "export",
    "false", "final", "friend", "mutable", "namespace", "new", "noexcept",
    "nullptr", "operator", "override", "private", "protected", "public",
    "reinterpret_cast", "static_assert", "static_cast", "template", "this",
    "throw", "true", "try", "typeid", "typename", "using", "virtual",
    "wchar_t",
}

_JAVA_KEYWORDS = {
    "abstract", "assert", "boolean", "break", "byte", "case", "catch",
    "char", "class", "const", "continue", "default", "do", "double", "else",
    "enum", "extends", "false", "final", "finally", "float", "for", "goto",
    "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "null", "package", "private", "protected", "public",
    "record", "return", "short", "static", "strictfp", "super", "switch",
    "synchronized", "this", "throw", "throws", "transient", "true", "try",
    "var", "void", "volatile", "while",
}

KEYWORDS = {
    Language.C: _C_KEYWORDS,
    Language.CPP: _CPP_KEYWORDS,
    Language.JAVA: _JAVA_KEYWORDS,
}

# Keywords that may legally precede a declared type or class keyword.
_MODIFIERS = {
    "static", "const", "constexpr", "consteval", "constinit", "extern",
    "register", "volatile", "inline", "mutable", "friend", "virtual",
    "explicit", "unsigned", "signed", "public", "private", "protected",
    "final", "abstract", "native", "strictfp", "synchronized", "transient",
    "typedef", "export",
}

# Type-ish keywords allowed to precede a declarator name.
_TYPE_KEYWORDS = {
    "int", "char", "float", "double", "void", "long", "short", "unsigned",
    "signed", "bool", "boolean", "byte", "auto", "var", "const", "_Bool",
    "wchar_t",
}

_CLASS_KEYWORDS = {
    Language.C: {"struct", "union", "enum"},
    Language.CPP: {"class", "struct", "union", "enum"},
    Language.JAVA: {"class", "interface", "enum", "record"},
}

_STMT_KEYWORDS = {"return", "break", "continue", "goto", "throw", "assert", "delete"}

_DEFINE_RE = re.compile(r"^#\s*define\s+([A-Za-z_$][A-Za-z0-9_$]*)(\(?)")


@dataclass
class FunctionInfo:
    name: str
    start_line: int
    end_line: int
    params: list[str]


@dataclass
class ParseInfo:
    """Entity facts gathered during the structural parse."""

    functions: list[FunctionInfo] = field(default_factory=list)
    classes: list[str] = field(default_factory=list)
    variables: list[str] = field(default_factory=list)
    constants: list[str] = field(default_factory=list)


def parse_cfamily(text: str, language: Language) -> tuple[TreeNode, ParseInfo]:
    return _parse_cached(text, language)


@lru_cache(maxsize=128)
def _parse_cached(text: str, language: Language) -> tuple[TreeNode, ParseInfo]:
    tokens, _ = lex(text, language, strict=True)
    parser = _Parser(tokens, language)
    info = ParseInfo()
    children = parser.parse_block(info, context="top")
    if not parser.at_end():
        tok = parser.peek()
        raise ParseError(f"line {tok.line}: unexpected {tok.value!r}")
    lines = text.splitlines()
    span = (1, max(1, len(lines)), 0, len(lines[-1]) if lines else 0)
    root = TreeNode("translation_unit", span, children)
    widen_to_children(root)
    return root, info


def _tok_span(first: Token, last: Token) -> tuple[int, int, int, int]:
    return (first.line, last.end_line, first.col, last.end_col)


class _Parser:
    def __init__(self, tokens: list[Token], language: Language):
        self.toks = tokens
        self.lang = language
        self.kw = KEYWORDS[language]
        self.class_kw = _CLASS_KEYWORDS[language]
        self.i = 0

    def at_end(self) -> bool:
        return self.i >= len(self.toks)

    def peek(self, offset: int = 0) -> Token | None:
        j = self.i + offset
        return self.toks[j] if j < len(self.toks) else None

    def advance(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str) -> ParseError:
        tok = self.peek()
        line = tok.line if tok else (self.toks[-1].end_line if self.toks else 1)
        return ParseError(f"line {line}: {msg}")

    # -- block / statement level ------------------------------------------

    def parse_block(self, info: ParseInfo, context: str) -> list[TreeNode]:
        """Parse statements until a closing '}' (not consumed) or EOF."""
        children: list[TreeNode] = []
        while not self.at_end():
            tok = self.peek()
            if tok.kind == "pp":
                self.advance()
                node = TreeNode("preproc_directive", _tok_span(tok, tok))
                self._record_define(tok, info)
                children.append(node)
                continue
            if tok.kind == "op" and tok.value == "}":
                break
            if tok.kind == "op" and tok.value == ";":
                self.advance()
                continue
            children.append(self.parse_statement(info, context))
        return children

    def parse_braced(self, info: ParseInfo, context: str) -> tuple[list[TreeNode], Token]:
        """Consume '{', parse the body, consume '}'; return (children, close)."""
        open_tok = self.advance()
        assert open_tok.value == "{"
        children = self.parse_block(info, context)
        if self.at_end():
            raise ParseError(f"line {open_tok.line}: unclosed '{{'")
        close = self.advance()
        return children, close

    def parse_statement(self, info: ParseInfo, context: str) -> TreeNode:
        tok = self.peek()
        if tok.kind == "id":
            word = tok.value
            if word in ("if",):
                return self._parse_if(info)
            if word in ("for", "while", "switch"):
                return self._parse_keyword_construct(info, f"{word}_statement")
            if word == "do":
                return self._parse_do(info)
            if word == "try":
                return self._parse_try(info)
            if word == "else":
                return self._parse_else(info)
            if word in ("catch", "finally"):
                # Normally consumed by _parse_try; tolerate stray clauses.
                kind = "catch_clause" if word == "catch" else "finally_clause"
                return self._parse_keyword_construct(info, kind)
            if word == "synchronized" and self.lang is Language.JAVA:
                nxt = self.peek(1)
                if nxt and nxt.value == "(":
                    return self._parse_keyword_construct(info, "synchronized_statement")
            if word == "namespace" and self.lang is Language.CPP:
                return self._parse_namespace(info)
            if word in ("import", "package") and self.lang is Language.JAVA:
                return self._parse_simple_statement(f"{word}_declaration")
            if word == "using" and self.lang is Language.CPP:
                return self._parse_simple_statement("using_directive")
            kw_idx = self._lookahead_class_kw()
            if kw_idx is not None:
                return self._parse_class(info, context)
            if word == "extern":
                nxt = self.peek(1)
                nxt2 = self.peek(2)
                if nxt and nxt.kind == "str" and nxt2 and nxt2.value == "{":
                    return self._parse_extern_block(info)
        if tok.kind == "op" and tok.value == "{":
            children, close = self.parse_braced(info, context)
            node = TreeNode("block", _tok_span(tok, close), children)
            widen_to_children(node)
            return node
        return self._parse_general_statement(info, context)

    # -- control-flow constructs ------------------------------------------

    def _parse_body(self, info: ParseInfo, context: str) -> list[TreeNode]:
        """A construct body: braced block or a single statement."""
        tok = self.peek()
        if tok is None:
            return []
        if tok.kind == "op" and tok.value == "{":
            children, _ = self.parse_braced(info, context)
            return children
        if tok.kind == "op" and tok.value == ";":
            self.advance()
            return []
        return [self.parse_statement(info, context)]

    def _skip_parens(self) -> list[Token]:
        tok = self.peek()
        if tok is None or tok.value != "(":
            return []
        taken: list[Token] = []
        depth = 0
        while not self.at_end():
            t = self.advance()
            taken.append(t)
            if t.kind == "op":
                if t.value == "(":
                    depth += 1
                elif t.value == ")":
                    depth -= 1
                    if depth == 0:
                        return taken
                    if depth < 0:
                        raise self.error("unbalanced ')'")
                elif t.value in "}{":
                    raise self.error(f"unexpected {t.value!r} in parentheses")
        raise ParseError("unclosed '(' at end of file")

    def _parse_keyword_construct(self, info: ParseInfo, kind: str) -> TreeNode:
        first = self.advance()
        head = self._skip_parens()
        if kind == "for_statement" and len(head) > 2:
            self._record_for_init(head[1:-1], info)
        children = self._parse_body(info, context="stmt")
        node = TreeNode(kind, _tok_span(first, first), children)
        widen_to_children(node)
        return node

    def _record_for_init(self, inner: list[Token], info: ParseInfo) -> None:
        """Loop variables from `for (init; ...)` or `for (decl : range)`."""
        init: list[Token] = []
        depth = 0
        colon_form = False
        for tok in inner:
            if tok.kind == "op":
                if tok.value in ("(", "["):
                    depth += 1
                elif tok.value in (")", "]"):
                    depth -= 1
                elif tok.value == ";" and depth == 0:
                    init.append(tok)
                    break
                elif tok.value == ":" and depth == 0:
                    colon_form = True
                    break
            init.append(tok)
        if colon_form:
            # Range/enhanced for: the declarator is the last identifier.
            ids = [t.value for t in init if t.kind == "id" and t.value not in self.kw]
            if len(ids) >= 2:
                info.variables.append(ids[-1])
            return
        if init and not (init[-1].kind == "op" and init[-1].value == ";"):
            last = init[-1]
            init.append(Token("op", ";", last.line, last.col, last.end_line, last.end_col))
        names, _ = _declared_names(init, self.lang)
        info.variables.extend(names)

    def _parse_if(self, info: ParseInfo) -> TreeNode:
        first = self.advance()
        self._skip_parens()
        children = self._parse_body(info, context="stmt")
        nxt = self.peek()
        if nxt is not None and nxt.kind == "id" and nxt.value == "else":
            children.append(self._parse_else(info))
        node = TreeNode("if_statement", _tok_span(first, first), children)
        widen_to_children(node)
        return node

    def _parse_else(self, info: ParseInfo) -> TreeNode:
        first = self.advance()
        nxt = self.peek()
        if nxt is not None and nxt.kind == "id" and nxt.value == "if":
            children = [self._parse_if(info)]
        else:
            children = self._parse_body(info, context="stmt")
        node = TreeNode("else_clause", _tok_span(first, first), children)
        widen_to_children(node)
        return node

    def _parse_do(self, info: ParseInfo) -> TreeNode:
        first = self.advance()
        children = self._parse_body(info, context="stmt")
        nxt = self.peek()
        if nxt is not None and nxt.kind == "id" and nxt.value == "while":
            self.advance()
            self._skip_parens()
            nxt = self.peek()
            if nxt is not None and nxt.value == ";":
                self.advance()
        node = TreeNode("do_statement", _tok_span(first, first), children)
        widen_to_children(node)
        return node

    def _parse_try(self, info: ParseInfo) -> TreeNode:
        first = self.advance()
        nxt = self.peek()
        if nxt is not None and nxt.value == "(":  # Java try-with-resources
            self._skip_parens()
        children = self._parse_body(info, context="stmt")
        while True:
            nxt = self.peek()
            if nxt is None or nxt.kind != "id" or nxt.value not in ("catch", "finally"):
                break
            kw = self.advance()
            if kw.value == "catch":
                self._skip_parens()
                body = self._parse_body(info, context="stmt")
                clause = TreeNode("catch_clause", _tok_span(kw, kw), body)
            else:
                body = self._parse_body(info, context="stmt")
                clause = TreeNode("finally_clause", _tok_span(kw, kw), body)
            widen_to_children(clause)
            children.append(clause)
        node = TreeNode("try_statement", _tok_span(first, first), children)
        widen_to_children(node)
        return node

    def _parse_namespace(self, info: ParseInfo) -> TreeNode:
        first = self.advance()
        while not self.at_end() and self.peek().value not in ("{", ";"):
            self.advance()
        if not self.at_end() and self.peek().value == "{":
            children, _ = self.parse_braced(info, context="top")
        else:
            if not self.at_end():
                self.advance()
            children = []
        node = TreeNode("namespace_definition", _tok_span(first, first), children)
        widen_to_children(node)
        return node

    def _parse_extern_block(self, info: ParseInfo) -> TreeNode:
        first = self.advance()  # extern
        self.advance()  # "C"
        children, _ = self.parse_braced(info, context="top")
        node = TreeNode("linkage_specification", _tok_span(first, first), children)
        widen_to_children(node)
        return node

    # -- class declarations ------------------------------------------------

    def _lookahead_class_kw(self) -> int | None:
        """Offset of a class keyword reachable through modifiers, else None."""
        j = 0
        while True:
            tok = self.peek(j)
            if tok is None or tok.kind != "id":
                if tok is not None and tok.kind == "op" and tok.value == "@":
                    nxt = self.peek(j + 1)
                    if nxt is not None and nxt.kind == "id":
                        j += 2
                        continue
                return None
            if tok.value in self.class_kw:
                # "enum class" (C++) still lands on the first keyword.
                return j
            if tok.value in _MODIFIERS:
                j += 1
                continue
            return None

    def _parse_class(self, info: ParseInfo, context: str) -> TreeNode:
        first = self.peek()
        is_typedef = first.kind == "id" and first.value == "typedef"
        # Consume modifiers and the class keyword.
        while self.peek().kind == "op" or self.peek().value not in self.class_kw:
            self.advance()
        self.advance()  # the class keyword
        nxt = self.peek()
        if nxt is not None and nxt.kind == "id" and nxt.value == "class":
            self.advance()  # enum class
        name = ""
        nxt = self.peek()
        if nxt is not None and nxt.kind == "id" and nxt.value not in self.kw:
            name = nxt.value
            self.advance()
        # Skip base-class list / generics / record header up to '{' or ';'.
        depth = 0
        while not self.at_end():
            tok = self.peek()
            if tok.kind == "op":
                if tok.value in "([":
                    depth += 1
                elif tok.value in ")]":
                    depth -= 1
                elif depth == 0 and tok.value in ("{", ";"):
                    break
                elif tok.value == "}":
                    raise self.error("unexpected '}' in class header")
            self.advance()
        if self.at_end() or self.peek().value == ";":
            if not self.at_end():
                self.advance()
            node = TreeNode("class_declaration", _tok_span(first, first), [], name=name)
            return node
        children, close = self.parse_braced(info, "class")
        if name:
            info.classes.append(name)
        # "struct S { ... } s1, s2;" declares variables after the body;
        # a typedef trailer names a type alias instead.
        trailer: list[Token] = []
        while not self.at_end():
            tok = self.peek()
            if tok.kind == "op" and tok.value == ";":
                self.advance()
                break
            if tok.kind == "op" and tok.value in ("}", "{"):
                break
            if tok.kind == "pp":
                break
            trailer.append(self.advance())
        if not is_typedef:
            for tok in trailer:
                if tok.kind == "id" and tok.value not in self.kw:
                    info.variables.append(tok.value)
        node = TreeNode("class_declaration", _tok_span(first, close), children, name=name)
        widen_to_children(node)
        return node

    # -- general statements and function definitions ----------------------

    def _parse_simple_statement(self, kind: str) -> TreeNode:
        first = self.advance()
        last = first
        while not self.at_end():
            tok = self.peek()
            if tok.kind == "op" and tok.value in ("{", "}"):
                break
            last = self.advance()
            if last.kind == "op" and last.value == ";":
                break
        return TreeNode(kind, _tok_span(first, last))

    def _parse_general_statement(self, info: ParseInfo, context: str) -> TreeNode:
        pend: list[Token] = []
        first = self.peek()
        paren_depth = 0
        bracket_depth = 0
        ternary_depth = 0
        while not self.at_end():
            tok = self.peek()
            if tok.kind == "pp":
                break  # let the enclosing block pick it up
            if tok.kind == "op":
                v = tok.value
                if v == "(":
                    paren_depth += 1
                elif v == ")":
                    paren_depth -= 1
                    if paren_depth < 0:
                        raise self.error("unbalanced ')'")
                elif v == "[":
                    bracket_depth += 1
                elif v == "]":
                    bracket_depth -= 1
                    if bracket_depth < 0:
                        raise self.error("unbalanced ']'")
                elif v == "?":
                    ternary_depth += 1
                elif v == ":" and paren_depth == 0 and bracket_depth == 0:
                    if ternary_depth > 0:
                        ternary_depth -= 1
                    elif self._is_label(pend):
                        colon = self.advance()
                        pend.append(colon)
                        return self._leaf("label", pend)
                elif v == ";" and paren_depth == 0 and bracket_depth == 0:
                    semi = self.advance()
                    pend.append(semi)
                    return self._finish_statement(pend, info, context)
                elif v == "}" and paren_depth == 0 and bracket_depth == 0:
                    if not pend:
                        raise self.error("unexpected '}'")
                    return self._finish_statement(pend, info, context)
                elif v == "}":
                    raise self.error("unexpected '}' inside expression")
                elif v == "{":
                    if paren_depth > 0 or bracket_depth > 0:
                        pend.extend(self._consume_brace_group())
                        continue
                    if self._function_header(pend) is not None:
                        return self._parse_function(pend, info)
                    # Initializer / uniform-init braces: part of the statement.
                    pend.extend(self._consume_brace_group())
                    nxt = self.peek()
                    if nxt is not None and nxt.kind == "op" and nxt.value == ";":
                        pend.append(self.advance())
                        return self._finish_statement(pend, info, context)
                    if nxt is not None and nxt.kind == "op" and nxt.value in (",", "="):
                        continue
                    return self._finish_statement(pend, info, context)
            pend.append(self.advance())
        if paren_depth > 0:
            raise ParseError(f"line {first.line}: unclosed '('")
        if bracket_depth > 0:
            raise ParseError(f"line {first.line}: unclosed '['")
        return self._finish_statement(pend, info, context)

    def _consume_brace_group(self) -> list[Token]:
        taken: list[Token] = []
        depth = 0
        while not self.at_end():
            tok = self.advance()
            taken.append(tok)
            if tok.kind == "op":
                if tok.value == "{":
                    depth += 1
                elif tok.value == "}":
                    depth -= 1
                    if depth == 0:
                        return taken
        raise ParseError(f"line {taken[0].line}: unclosed '{{'")

    def _is_label(self, pend: list[Token]) -> bool:
        if len(pend) == 1 and pend[0].kind == "id":
            word = pend[0].value
            return word not in self.kw or word in ("default", "public", "private", "protected")
        return bool(pend) and pend[0].kind == "id" and pend[0].value in ("case", "default")

    def _leaf(self, kind: str, pend: list[Token]) -> TreeNode:
        return TreeNode(kind, _tok_span(pend[0], pend[-1]))

    def _finish_statement(self, pend: list[Token], info: ParseInfo, context: str) -> TreeNode:
        if not pend:
            raise self.error("empty statement")
        first = pend[0]
        if first.kind == "id" and first.value in _STMT_KEYWORDS:
            kind = {"delete": "expression_statement", "assert": "assert_statement"}.get(
                first.value, f"{first.value}_statement"
            )
            return self._leaf(kind, pend)
        names, is_const = _declared_names(pend, self.lang)
        if names:
            if self._is_constant_context(pend, is_const, context):
                info.constants.extend(names)
            else:
                info.variables.extend(names)
            return self._leaf("declaration", pend)
        if first.kind == "id" and first.value == "typedef":
            return self._leaf("declaration", pend)
        return self._leaf("expression_statement", pend)

    def _is_constant_context(self, pend: list[Token], is_const: bool, context: str) -> bool:
        mods = set()
        for tok in pend:
            if tok.kind == "id" and tok.value in _MODIFIERS:
                mods.add(tok.value)
            else:
                break
        if self.lang is Language.JAVA:
            return context == "class" and "static" in mods and "final" in mods
        # C/C++: const-qualified declarations at file or namespace scope.
        return context == "top" and is_const

    def _record_define(self, tok: Token, info: ParseInfo) -> None:
        m = _DEFINE_RE.match(tok.value)
        if m and m.group(2) != "(":  # object-like macros only
            info.constants.append(m.group(1))

    # -- function definitions ----------------------------------------------

    _TRAILER_OPS = {",", "->", "&", "*", "::", "<", ">", "[", "]", "(", ")"}

    def _function_header(self, pend: list[Token]) -> tuple[str, int] | None:
        """If `pend` looks like `... name ( params ) quals`, return
        (name, index of the matching '('); else None."""
        if not pend:
            return None
        # C++ constructor initializer list: restrict matching to the tokens
        # before the first top-level ':' that follows a ')'.
        depth = 0
        seen_close = False
        for j, tok in enumerate(pend):
            if tok.kind != "op":
                continue
            if tok.value in ("(", "["):
                depth += 1
            elif tok.value in (")", "]"):
                depth -= 1
                if tok.value == ")":
                    seen_close = True
            elif tok.value == ":" and depth == 0 and seen_close:
                return self._function_header(pend[:j])
        allowed_kw = {
            "const", "final", "noexcept", "override", "throws", "try",
        } | _TYPE_KEYWORDS
        close = None
        for j in range(len(pend) - 1, -1, -1):
            tok = pend[j]
            if tok.kind == "op" and tok.value == ")":
                close = j
                break
            if tok.kind == "id":
                if tok.value in self.kw and tok.value not in allowed_kw:
                    return None
                continue
            if tok.kind == "op" and tok.value in self._TRAILER_OPS - {"(", ")"}:
                continue
            return None
        if close is None:
            return None
        depth = 0
        open_idx = None
        for j in range(close, -1, -1):
            tok = pend[j]
            if tok.kind == "op":
                if tok.value == ")":
                    depth += 1
                elif tok.value == "(":
                    depth -= 1
                    if depth == 0:
                        open_idx = j
                        break
        if open_idx is None or open_idx == 0:
            return None
        before = pend[open_idx - 1]
        if before.kind == "id" and before.value not in self.kw:
            prev = pend[open_idx - 2] if open_idx >= 2 else None
            if prev is not None and prev.kind == "id" and prev.value == "new":
                return None
            if "=" in [t.value for t in pend[:open_idx] if t.kind == "op"]:
                return None
            return before.value, open_idx
        # C++ operator overloads: `operator == ( ... )`.
        if before.kind == "op" and open_idx >= 2:
            prev = pend[open_idx - 2]
            if prev.kind == "id" and prev.value == "operator":
                return "operator" + before.value, open_idx
        return None

    def _parse_function(self, pend: list[Token], info: ParseInfo) -> TreeNode:
        header = self._function_header(pend)
        assert header is not None
        name, open_idx = header
        close_idx = _match_paren(pend, open_idx)
        params = _param_names(pend[open_idx + 1 : close_idx], self.lang, self.kw)
        body, close = self.parse_braced(info, context="stmt")
        first = pend[0]
        node = TreeNode(
            "function_definition", _tok_span(first, close), body, name=name
        )
        widen_to_children(node)
        info.functions.append(
            FunctionInfo(name, node.span[0], node.span[1], params)
        )
        info.variables.extend(params)
        return node


def _match_paren(pend: list[Token], open_idx: int) -> int:
    depth = 0
    for j in range(open_idx, len(pend)):
        tok = pend[j]
        if tok.kind == "op":
            if tok.value == "(":
                depth += 1
            elif tok.value == ")":
                depth -= 1
                if depth == 0:
                    return j
    raise ParseError(f"line {pend[open_idx].line}: unbalanced '(' in header")


def _param_names(tokens: list[Token], lang: Language, kw: set[str]) -> list[str]:
    if not tokens:
        return []
    segments: list[list[Token]] = [[]]
    depth = 0
    angle = 0
    for tok in tokens:
        if tok.kind == "op":
            if tok.value in ("(", "["):
                depth += 1
            elif tok.value in (")", "]"):
                depth -= 1
            elif tok.value == "<" and lang in (Language.CPP, Language.JAVA):
                angle += 1
            elif tok.value == ">" and angle > 0:
                angle -= 1
            elif tok.value == ">>" and angle > 1:
                angle -= 2
            elif tok.value == "," and depth == 0 and angle == 0:
                segments.append([])
                continue
        segments[-1].append(tok)
    names = []
    for seg in segments:
        ids = [t.value for t in seg if t.kind == "id" and t.value not in kw]
        if ids:
            names.append(ids[-1])
    return names


def _declared_names(pend: list[Token], lang: Language) -> tuple[list[str], bool]:
    """Heuristic declared-variable extraction from one statement.

    Returns (names, const_qualified). Empty names means the statement is
    not a declaration.
    """
    kw = KEYWORDS[lang]
    toks = [t for t in pend if t.kind != "pp"]
    if not toks:
        return [], False
    if toks[0].kind == "id" and toks[0].value in ("typedef", "using", "import", "package"):
        return [], False
    is_const = any(
        t.kind == "id" and t.value in ("const", "constexpr", "final") for t in toks[:6]
    )
    depth = 0
    first_idx = None
    for j, tok in enumerate(toks[:-1]):
        if tok.kind == "op":
            if tok.value in ("(", "["):
                depth += 1
            elif tok.value in (")", "]"):
                depth -= 1
            continue
        if depth != 0 or tok.kind != "id" or tok.value in kw:
            continue
        nxt = toks[j + 1]
        if nxt.kind != "op" or nxt.value not in ("=", ",", ";", "[", ":"):
            continue
        if j == 0:
            continue  # plain assignment to an existing name
        prev = toks[j - 1]
        prev_ok = (
            prev.kind == "id"
            and (prev.value not in kw or prev.value in _TYPE_KEYWORDS)
        ) or (prev.kind == "op" and prev.value in ("*", "&", ">", "]", ">>"))
        if prev_ok:
            first_idx = j
            break
    if first_idx is None:
        return [], is_const
    names = [toks[first_idx].value]
    # Additional comma-separated declarators: `int x = 1, y, *z;`
    j = first_idx + 1
    depth = 0
    while j < len(toks):
        tok = toks[j]
        if tok.kind == "op":
            if tok.value in ("(", "[", "{"):
                depth += 1
            elif tok.value in (")", "]", "}"):
                depth -= 1
            elif tok.value == "," and depth == 0:
                k = j + 1
                while k < len(toks) and toks[k].kind == "op" and toks[k].value in ("*", "&"):
                    k += 1
                if k < len(toks) and toks[k].kind == "id" and toks[k].value not in kw:
                    names.append(toks[k].value)
                    j = k
            elif tok.value == ";" and depth == 0:
                break
        j += 1
    return names, is_const
