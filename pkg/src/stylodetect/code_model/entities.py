"""Named-entity and block-structure tables derived from a parse."""

from __future__ import annotations

from dataclasses import dataclass, field

from stylodetect.code_model.cfamily import ParseInfo, parse_cfamily
from stylodetect.code_model.pyparse import parse_python
from stylodetect.code_model.tree import TreeNode
from stylodetect.code_model.units import Language, SourceUnit

#: Node kinds that open a nesting level: function bodies, loops,
#: conditionals, try/catch, and switch blocks.
BLOCK_KINDS = {
    "function_definition",
    "if_statement",
    "else_clause",
    "for_statement",
    "while_statement",
    "do_statement",
    "switch_statement",
    "try_statement",
    "catch_clause",
    "finally_clause",
}


@dataclass
class EntityTables:
    functions: list[tuple[str, int, int]] = field(default_factory=list)
    variables: list[str] = field(default_factory=list)
    classes: list[str] = field(default_factory=list)
    constants: list[str] = field(default_factory=list)
    block_nodes: list[tuple[str, int]] = field(default_factory=list)


def extract_entities(tree: TreeNode, unit: SourceUnit) -> EntityTables:
    """Entity tables for `unit`; `tree` must come from parse(unit)."""
    if unit.language is Language.PYTHON:
        _, info = parse_python(unit.text)
    else:
        _, info = parse_cfamily(unit.text, unit.language)
    return _assemble(tree, info)


def _assemble(tree: TreeNode, info: ParseInfo) -> EntityTables:
    tables = EntityTables()
    tables.functions = [(f.name, f.start_line, f.end_line) for f in info.functions]
    tables.classes = list(info.classes)
    tables.constants = list(info.constants)
    claimed = {f.name for f in info.functions} | set(info.classes) | set(info.constants)
    tables.variables = [v for v in info.variables if v not in claimed]
    _collect_blocks(tree, 0, tables.block_nodes)
    return tables


#: Alternative clauses sit at the same depth as their parent construct.
_CLAUSE_KINDS = {"else_clause", "catch_clause", "finally_clause"}


def _collect_blocks(node: TreeNode, depth: int, out: list[tuple[str, int]]) -> None:
    if node.kind in _CLAUSE_KINDS:
        out.append((node.kind, max(depth, 1)))
    elif node.kind in BLOCK_KINDS:
        depth += 1
        out.append((node.kind, depth))
    for child in node.children:
        _collect_blocks(child, depth, out)
