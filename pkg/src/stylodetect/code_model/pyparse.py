"""Python parsing via the standard library `ast` module.

Maps the stdlib AST onto the language-neutral tree with the shared
node-kind vocabulary where a direct counterpart exists; other nodes keep
their lower-cased class name. Spans are widened so every child span lies
within its parent's, which the stdlib does not guarantee (decorators
precede the `def` line, for example).
"""

from __future__ import annotations

import ast
from functools import lru_cache

from stylodetect.code_model.cfamily import FunctionInfo, ParseInfo
from stylodetect.code_model.tree import TreeNode, widen_to_children
from stylodetect.errors import ParseError

_KIND_MAP = {
    "Module": "translation_unit",
    "FunctionDef": "function_definition",
    "AsyncFunctionDef": "function_definition",
    "ClassDef": "class_declaration",
    "If": "if_statement",
    "For": "for_statement",
    "AsyncFor": "for_statement",
    "While": "while_statement",
    "Try": "try_statement",
    "TryStar": "try_statement",
    "ExceptHandler": "catch_clause",
    "With": "with_statement",
    "AsyncWith": "with_statement",
    "Match": "switch_statement",
    "Return": "return_statement",
    "Break": "break_statement",
    "Continue": "continue_statement",
    "Raise": "throw_statement",
    "Assign": "declaration",
    "AnnAssign": "declaration",
    "AugAssign": "declaration",
    "Import": "import_declaration",
    "ImportFrom": "import_declaration",
    "Expr": "expression_statement",
}


def parse_python(text: str) -> tuple[TreeNode, ParseInfo]:
    return _parse_cached(text)


@lru_cache(maxsize=128)
def _parse_cached(text: str) -> tuple[TreeNode, ParseInfo]:
    try:
        module = ast.parse(text)
    except (SyntaxError, ValueError, MemoryError, RecursionError) as exc:
        raise ParseError(str(exc)) from None
    lines = text.splitlines()
    span = (1, max(1, len(lines)), 0, len(lines[-1]) if lines else 0)
    root = TreeNode("translation_unit", span, _map_children(module))
    widen_to_children(root)
    info = ParseInfo()
    _collect_entities(module, info)
    return root, info


def _map_children(node: ast.AST) -> list[TreeNode]:
    # else / finally bodies get their own clause node so the alternative
    # branch is distinguishable from the main body, as in the C-family tree.
    if isinstance(node, (ast.If, ast.While, ast.For, ast.AsyncFor)) and node.orelse:
        children = [
            mapped
            for field, value in ast.iter_fields(node)
            if field != "orelse"
            for mapped in _map_values(value)
        ]
        clause = _wrap_clause("else_clause", node.orelse)
        if clause is not None:
            children.append(clause)
        return children
    if isinstance(node, (ast.Try, getattr(ast, "TryStar", ast.Try))) and getattr(
        node, "finalbody", None
    ):
        children = [
            mapped
            for field, value in ast.iter_fields(node)
            if field != "finalbody"
            for mapped in _map_values(value)
        ]
        clause = _wrap_clause("finally_clause", node.finalbody)
        if clause is not None:
            children.append(clause)
        return children
    children: list[TreeNode] = []
    for child in ast.iter_child_nodes(node):
        children.extend(_map_node(child))
    return children


def _map_values(value) -> list[TreeNode]:
    if isinstance(value, ast.AST):
        return _map_node(value)
    if isinstance(value, list):
        out: list[TreeNode] = []
        for item in value:
            if isinstance(item, ast.AST):
                out.extend(_map_node(item))
        return out
    return []


def _map_node(child: ast.AST) -> list[TreeNode]:
    if isinstance(child, (ast.Load, ast.Store, ast.Del)):
        return []
    if hasattr(child, "lineno") and getattr(child, "end_lineno", None) is not None:
        mapped = TreeNode(
            _KIND_MAP.get(type(child).__name__, type(child).__name__.lower()),
            (child.lineno, child.end_lineno, child.col_offset, child.end_col_offset),
            _map_children(child),
            name=getattr(child, "name", "") or "",
        )
        widen_to_children(mapped)
        return [mapped]
    # Position-less containers (arguments, match cases): splice.
    return _map_children(child)


def _wrap_clause(kind: str, statements: list[ast.stmt]) -> TreeNode | None:
    mapped: list[TreeNode] = []
    for stmt in statements:
        mapped.extend(_map_node(stmt))
    if not mapped:
        return None
    span = (
        min(m.span[0] for m in mapped),
        max(m.span[1] for m in mapped),
        min(m.span[2] for m in mapped),
        max(m.span[3] for m in mapped),
    )
    return TreeNode(kind, span, mapped)


def _collect_entities(module: ast.Module, info: ParseInfo) -> None:
    seen: set[str] = set()
    for node in module.body:
        _walk(node, info, scope="module", seen=seen)


def _walk(node: ast.AST, info: ParseInfo, scope: str, seen: set[str]) -> None:
    # A variable counts once per scope at its first binding; later
    # rebindings are uses, not declarations.
    if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
        params = _param_names(node)
        info.functions.append(
            FunctionInfo(node.name, node.lineno, node.end_lineno, params)
        )
        inner: set[str] = set()
        for name in params:
            if name not in inner:
                inner.add(name)
                info.variables.append(name)
        for child in node.body:
            _walk(child, info, scope="function", seen=inner)
        return
    if isinstance(node, ast.ClassDef):
        info.classes.append(node.name)
        inner = set()
        for child in node.body:
            _walk(child, info, scope="class", seen=inner)
        return
    if isinstance(node, (ast.Assign, ast.AnnAssign)):
        names: list[str] = []
        targets = node.targets if isinstance(node, ast.Assign) else [node.target]
        for target in targets:
            names.extend(_target_names(target))
        constant = scope == "module" and _is_literal(node.value)
        for name in names:
            if name in seen:
                continue
            seen.add(name)
            if constant:
                info.constants.append(name)
            else:
                info.variables.append(name)
        for child in ast.iter_child_nodes(node):
            _walk(child, info, scope, seen)
        return
    if isinstance(node, (ast.For, ast.AsyncFor)):
        _bind(_target_names(node.target), info, seen)
    elif isinstance(node, (ast.With, ast.AsyncWith)):
        for item in node.items:
            if item.optional_vars is not None:
                _bind(_target_names(item.optional_vars), info, seen)
    elif isinstance(node, ast.NamedExpr):
        _bind(_target_names(node.target), info, seen)
    for child in ast.iter_child_nodes(node):
        _walk(child, info, scope, seen)


def _bind(names: list[str], info: ParseInfo, seen: set[str]) -> None:
    for name in names:
        if name not in seen:
            seen.add(name)
            info.variables.append(name)


def _param_names(node: ast.FunctionDef | ast.AsyncFunctionDef) -> list[str]:
    args = node.args
    params = [a.arg for a in args.posonlyargs + args.args + args.kwonlyargs]
    if args.vararg is not None:
        params.append(args.vararg.arg)
    if args.kwarg is not None:
        params.append(args.kwarg.arg)
    return params


def _target_names(target: ast.AST) -> list[str]:
    if isinstance(target, ast.Name):
        return [target.id]
    if isinstance(target, ast.Attribute):
        return [target.attr]
    if isinstance(target, (ast.Tuple, ast.List)):
        names = []
        for elt in target.elts:
            names.extend(_target_names(elt))
        return names
    if isinstance(target, ast.Starred):
        return _target_names(target.value)
    return []


def _is_literal(value: ast.AST | None) -> bool:
    if value is None:
        return False
    if isinstance(value, ast.Constant):
        return True
    if isinstance(value, ast.UnaryOp) and isinstance(value.op, (ast.USub, ast.UAdd)):
        return isinstance(value.operand, ast.Constant)
    if isinstance(value, (ast.Tuple, ast.List, ast.Set)):
        return all(_is_literal(elt) for elt in value.elts)
    if isinstance(value, ast.Dict):
        return all(k is not None and _is_literal(k) for k in value.keys) and all(
            _is_literal(v) for v in value.values
        )
    return False
