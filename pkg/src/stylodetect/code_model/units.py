"""Source units and corpus JSONL input/output.

The corpus wire format is JSONL: one object per line with keys
``id``, ``language`` (c|cpp|java|python), ``generator``
(human|chatgpt|gemini_pro|wizardcoder|deepseek_coder), ``origin_id``
and ``text``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, TextIO

from stylodetect.errors import DataError


class Language(str, Enum):
    C = "c"
    CPP = "cpp"
    JAVA = "java"
    PYTHON = "python"


class Generator(str, Enum):
    HUMAN = "human"
    CHATGPT = "chatgpt"
    GEMINI_PRO = "gemini_pro"
    WIZARDCODER = "wizardcoder"
    DEEPSEEK_CODER = "deepseek_coder"


#: Order used for per-generator reports (heatmaps, confusion matrices).
GENERATOR_ORDER = [
    Generator.HUMAN,
    Generator.CHATGPT,
    Generator.GEMINI_PRO,
    Generator.WIZARDCODER,
    Generator.DEEPSEEK_CODER,
]

#: The four paraphrasing models, i.e. every generator except human.
LLM_GENERATORS = [g for g in GENERATOR_ORDER if g is not Generator.HUMAN]


@dataclass(frozen=True)
class SourceUnit:
    """One source file plus its provenance labels."""

    id: str
    language: Language
    generator: Generator
    origin_id: str
    text: str

    def __post_init__(self) -> None:
        if not self.id:
            raise DataError("unit id must be non-empty")
        if not self.text:
            raise DataError(f"unit {self.id!r}: text must be non-empty")
        if self.generator is Generator.HUMAN and self.origin_id:
            raise DataError(f"unit {self.id!r}: human units must have empty origin_id")

    def with_text(self, text: str) -> "SourceUnit":
        return SourceUnit(self.id, self.language, self.generator, self.origin_id, text)


def unit_from_dict(obj: dict, lineno: int | None = None) -> SourceUnit:
    where = f" (line {lineno})" if lineno is not None else ""
    for key in ("id", "language", "generator", "origin_id", "text"):
        if key not in obj:
            raise DataError(f"missing key {key!r}{where}")
    try:
        language = Language(obj["language"])
    except ValueError:
        raise DataError(f"unknown language {obj['language']!r}{where}") from None
    try:
        generator = Generator(obj["generator"])
    except ValueError:
        raise DataError(f"unknown generator {obj['generator']!r}{where}") from None
    text = obj["text"]
    if not isinstance(text, str):
        raise DataError(f"text must be a string{where}")
    return SourceUnit(str(obj["id"]), language, generator, str(obj["origin_id"]), text)


def unit_to_dict(unit: SourceUnit) -> dict:
    return {
        "id": unit.id,
        "language": unit.language.value,
        "generator": unit.generator.value,
        "origin_id": unit.origin_id,
        "text": unit.text,
    }


def read_corpus(stream: TextIO) -> Iterator[SourceUnit]:
    """Yield units from a JSONL stream, raising DataError with line context."""
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"malformed JSON on line {lineno}: {exc}") from None
        if not isinstance(obj, dict):
            raise DataError(f"line {lineno}: expected an object")
        yield unit_from_dict(obj, lineno)


def load_corpus(path: str) -> list[SourceUnit]:
    # Stray bytes in crawled corpora are replaced rather than dropping files.
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        units = list(read_corpus(fh))
    return units


def write_corpus(units: Iterable[SourceUnit], stream: TextIO) -> None:
    for unit in units:
        stream.write(json.dumps(unit_to_dict(unit), ensure_ascii=False) + "\n")


def save_corpus(units: Iterable[SourceUnit], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        write_corpus(units, fh)
