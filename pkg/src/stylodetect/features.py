"""The ten coding-style features and per-file / per-pair vectors.

Feature order is a frozen contract shared with the classifier:
the four naming-consistency ratios, then the three structure features,
then the three readability features.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, TextIO

from stylodetect.code_model import (
    EntityTables,
    SourceUnit,
    detect_comment_lines,
    extract_entities,
    parse,
)
from stylodetect.code_model.comments import CommentMap
from stylodetect.errors import DegenerateInput


class NamingPattern(Enum):
    CAMEL_CASE = "camelCase"
    SNAKE_CASE = "snake_case"
    PASCAL_CASE = "PascalCase"
    UPPER_SNAKE_CASE = "UPPER_SNAKE_CASE"
    OTHER = "Other"


FEATURE_NAMES = [
    "function_naming_consistency",
    "variable_naming_consistency",
    "class_naming_consistency",
    "constant_naming_consistency",
    "indentation_consistency",
    "avg_function_length",
    "avg_nesting_depth",
    "comment_ratio",
    "avg_function_name_length",
    "avg_variable_name_length",
]

FEATURE_GROUPS = {
    "naming": FEATURE_NAMES[0:4],
    "structure": FEATURE_NAMES[4:7],
    "readability": FEATURE_NAMES[7:10],
}


@dataclass(frozen=True)
class StyleVector:
    function_naming_consistency: float
    variable_naming_consistency: float
    class_naming_consistency: float
    constant_naming_consistency: float
    indentation_consistency: float
    avg_function_length: float
    avg_nesting_depth: float
    comment_ratio: float
    avg_function_name_length: float
    avg_variable_name_length: float

    def as_list(self) -> list[float]:
        return [getattr(self, name) for name in FEATURE_NAMES]

    def __post_init__(self) -> None:
        values = self.as_list()
        assert all(math.isfinite(v) for v in values), "non-finite style feature"


@dataclass(frozen=True)
class PairVector:
    human_features: StyleVector
    candidate_features: StyleVector

    @property
    def flattened(self) -> list[float]:
        # Human's ten values first, then the candidate's ten.
        return self.human_features.as_list() + self.candidate_features.as_list()


def classify_naming_pattern(name: str) -> NamingPattern:
    """Classify one identifier; the rules are tested in priority order so
    the five patterns partition the identifier space."""
    if not name:
        raise ValueError("identifier must be non-empty")
    if _is_upper_snake(name):
        return NamingPattern.UPPER_SNAKE_CASE
    if _is_pascal(name):
        return NamingPattern.PASCAL_CASE
    if _is_camel(name):
        return NamingPattern.CAMEL_CASE
    if _is_snake(name):
        return NamingPattern.SNAKE_CASE
    return NamingPattern.OTHER


def _is_upper_snake(name: str) -> bool:
    return name[0].isupper() and all(c.isupper() or c.isdigit() or c == "_" for c in name)


def _is_pascal(name: str) -> bool:
    return (
        name[0].isupper()
        and "_" not in name
        and name.isalnum()
        and any(c.islower() for c in name)
    )


def _is_camel(name: str) -> bool:
    return (
        name[0].islower()
        and "_" not in name
        and name.isalnum()
        and any(c.isupper() for c in name)
    )


def _is_snake(name: str) -> bool:
    # A single all-lowercase word counts as snake_case; the underscore
    # is not required.
    return name[0].islower() and all(c.islower() or c.isdigit() or c == "_" for c in name)


def naming_consistency(names: Sequence[str]) -> float:
    """Share of names following the modal pattern; 1.0 for an empty list."""
    if not names:
        return 1.0
    first_seen: dict[NamingPattern, int] = {}
    counts: dict[NamingPattern, int] = {}
    for idx, name in enumerate(names):
        pattern = classify_naming_pattern(name)
        counts[pattern] = counts.get(pattern, 0) + 1
        first_seen.setdefault(pattern, idx)
    # Ties break toward the pattern seen first.
    best = max(counts, key=lambda p: (counts[p], -first_seen[p]))
    return counts[best] / len(names)


def indentation_consistency(text: str) -> float:
    """Share of indented lines using the modal (kind, width) pattern."""
    patterns: list[tuple[str, int]] = []
    for line in text.splitlines():
        stripped = line.lstrip()
        if not stripped:
            continue  # blank lines carry no indentation evidence
        indent = line[: len(line) - len(stripped)]
        if not indent:
            continue
        if all(c == " " for c in indent):
            kind = "space"
        elif all(c == "\t" for c in indent):
            kind = "tab"
        else:
            kind = "mixed"
        patterns.append((kind, len(indent)))
    if not patterns:
        return 1.0
    first_seen: dict[tuple[str, int], int] = {}
    counts: dict[tuple[str, int], int] = {}
    for idx, pat in enumerate(patterns):
        counts[pat] = counts.get(pat, 0) + 1
        first_seen.setdefault(pat, idx)
    best = max(counts, key=lambda p: (counts[p], -first_seen[p]))
    return counts[best] / len(patterns)


def avg_function_length(entities: EntityTables) -> float:
    if not entities.functions:
        return 0.0
    return sum(end - start + 1 for _, start, end in entities.functions) / len(
        entities.functions
    )


def avg_nesting_depth(entities: EntityTables) -> float:
    if not entities.block_nodes:
        return 0.0
    return sum(depth for _, depth in entities.block_nodes) / len(entities.block_nodes)


def comment_ratio(comment_map: CommentMap) -> float:
    if comment_map.total_lines == 0:
        raise DegenerateInput("comment ratio undefined for zero lines")
    return comment_map.comment_lines / comment_map.total_lines


def avg_name_length(names: Sequence[str]) -> float:
    if not names:
        return 0.0
    return sum(len(n) for n in names) / len(names)


def extract_style_vector(unit: SourceUnit) -> StyleVector:
    """The ten-feature vector for one source unit (ParseError propagates)."""
    tree = parse(unit)
    entities = extract_entities(tree, unit)
    comment_map = detect_comment_lines(unit)
    function_names = [name for name, _, _ in entities.functions]
    return StyleVector(
        function_naming_consistency=naming_consistency(function_names),
        variable_naming_consistency=naming_consistency(entities.variables),
        class_naming_consistency=naming_consistency(entities.classes),
        constant_naming_consistency=naming_consistency(entities.constants),
        indentation_consistency=indentation_consistency(unit.text),
        avg_function_length=avg_function_length(entities),
        avg_nesting_depth=avg_nesting_depth(entities),
        comment_ratio=comment_ratio(comment_map),
        avg_function_name_length=avg_name_length(function_names),
        avg_variable_name_length=avg_name_length(entities.variables),
    )


def pair_feature_vector(human: StyleVector, candidate: StyleVector) -> PairVector:
    return PairVector(human, candidate)


def write_feature_csv(
    rows: Iterable[tuple[SourceUnit, StyleVector]], stream: TextIO
) -> None:
    """Feature dump: `id,generator,language,` + the ten feature names."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["id", "generator", "language"] + FEATURE_NAMES)
    for unit, vector in rows:
        writer.writerow(
            [unit.id, unit.generator.value, unit.language.value]
            + [repr(v) for v in vector.as_list()]
        )


def read_feature_csv(stream: TextIO) -> list[dict]:
    """Rows as dicts with feature values converted to float."""
    reader = csv.DictReader(stream)
    out = []
    for row in reader:
        parsed = {"id": row["id"], "generator": row["generator"], "language": row["language"]}
        for name in FEATURE_NAMES:
            parsed[name] = float(row[name])
        out.append(parsed)
    return out
