"""Synthetic program generator for the test suite.

Generates parseable programs in all four languages from a shared
structural skeleton, rendered through style "personas": a noisy human
persona (mixed naming, sparse comments, irregular indentation) and one
persona per LLM generator (consistent naming, characteristic comment
density and indentation). A paraphrase re-renders its origin's skeleton
through an LLM persona, so structure survives while surface style
changes — which is exactly the signal the detector is built to find.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from stylodetect.code_model import Generator, Language, SourceUnit

_WORDS = [
    "count", "total", "value", "index", "item", "node", "list", "data",
    "result", "sum", "temp", "size", "limit", "step", "flag", "name",
    "score", "rate", "base", "next", "prev", "key", "entry", "buf",
]


@dataclass
class Persona:
    naming: str  # snake | camel | pascal | mixed
    comment_prob: float
    indent_unit: int | None  # None = irregular per-level widths
    name_words: tuple[int, int]  # (min, max) words per identifier
    naming_noise: float = 0.0  # chance an identifier breaks the house style


PERSONAS: dict[Generator, Persona] = {
    Generator.HUMAN: Persona("mixed", 0.03, None, (1, 2)),
    Generator.CHATGPT: Persona("snake", 0.30, 4, (2, 3), naming_noise=0.10),
    Generator.GEMINI_PRO: Persona("camel", 0.22, 2, (2, 2), naming_noise=0.10),
    Generator.WIZARDCODER: Persona("snake", 0.45, 4, (3, 4), naming_noise=0.10),
    Generator.DEEPSEEK_CODER: Persona("camel", 0.12, 3, (1, 2), naming_noise=0.10),
}


@dataclass
class FunctionSpec:
    n_params: int
    n_assigns: int
    depth: int


@dataclass
class Skeleton:
    functions: list[FunctionSpec]


def make_skeleton(rng: random.Random) -> Skeleton:
    return Skeleton(
        functions=[
            FunctionSpec(
                n_params=rng.randint(1, 3),
                n_assigns=rng.randint(1, 6),
                depth=rng.randint(1, 3),
            )
            for _ in range(rng.randint(1, 5))
        ]
    )


def _identifier(rng: random.Random, persona: Persona, fallback_style: str | None = None) -> str:
    style = persona.naming
    if style == "mixed" or rng.random() < persona.naming_noise:
        style = rng.choice(["snake", "camel", "pascal", "snake"])
    if fallback_style is not None:
        style = fallback_style
    n = rng.randint(*persona.name_words)
    words = [rng.choice(_WORDS) for _ in range(n)]
    if style == "snake":
        return "_".join(words) if n > 1 else words[0]
    if style == "camel":
        return words[0] + "".join(w.capitalize() for w in words[1:])
    return "".join(w.capitalize() for w in words)


class _Renderer:
    """Renders one skeleton through one persona, for one language."""

    def __init__(self, skeleton: Skeleton, persona: Persona, language: Language, rng: random.Random):
        self.skeleton = skeleton
        self.persona = persona
        self.language = language
        self.rng = rng
        self.lines: list[str] = []

    def render(self) -> str:
        if self.language is Language.JAVA:
            class_name = _identifier(self.rng, self.persona, "pascal")
            self.lines.append(f"class {class_name} {{")
            for spec in self.skeleton.functions:
                self._function(spec, level=1, java=True)
            self.lines.append("}")
        else:
            for spec in self.skeleton.functions:
                self._function(spec, level=0, java=False)
                self.lines.append("")
        return "\n".join(self.lines) + "\n"

    def _indent(self, level: int) -> str:
        if self.persona.indent_unit is not None:
            return " " * (self.persona.indent_unit * level)
        # Irregular per-level widths: cumulative random increments,
        # stable per renderer so nested Python blocks stay legal.
        if not hasattr(self, "_widths"):
            self._widths = [0]
        while len(self._widths) <= level:
            self._widths.append(self._widths[-1] + self.rng.randint(2, 5))
        return " " * self._widths[level]

    def _comment(self, level: int) -> None:
        if self.rng.random() < self.persona.comment_prob:
            marker = "#" if self.language is Language.PYTHON else "//"
            note = " ".join(self.rng.choice(_WORDS) for _ in range(self.rng.randint(2, 5)))
            self.lines.append(f"{self._indent(level)}{marker} {note}")

    def _function(self, spec: FunctionSpec, level: int, java: bool) -> None:
        rng = self.rng
        persona = self.persona
        name = _identifier(rng, persona)
        params = [_identifier(rng, persona) for _ in range(spec.n_params)]
        python = self.language is Language.PYTHON
        self._comment(level)
        if python:
            self.lines.append(f"{self._indent(level)}def {name}({', '.join(params)}):")
        elif java:
            sig = ", ".join(f"int {p}" for p in params)
            self.lines.append(f"{self._indent(level)}static int {name}({sig}) {{")
        else:
            sig = ", ".join(f"int {p}" for p in params)
            self.lines.append(f"{self._indent(level)}int {name}({sig}) {{")
        body = level + 1
        acc = _identifier(rng, persona)
        semi = "" if python else ";"
        decl = "" if python else "int "
        self._comment(body)
        self.lines.append(f"{self._indent(body)}{decl}{acc} = {rng.randint(0, 9)}{semi}")
        for _ in range(spec.n_assigns - 1):
            var = _identifier(rng, persona)
            self._comment(body)
            self.lines.append(
                f"{self._indent(body)}{decl}{var} = {acc} + {rng.randint(1, 9)}{semi}"
            )
        # Nested loop/conditional chain of the skeleton's depth.
        loop_var = _identifier(rng, persona)
        inner = body
        for d in range(spec.depth):
            self._comment(inner)
            if python:
                if d % 2 == 0:
                    self.lines.append(
                        f"{self._indent(inner)}for {loop_var} in range({rng.randint(3, 20)}):"
                    )
                else:
                    self.lines.append(
                        f"{self._indent(inner)}if {loop_var} > {rng.randint(0, 5)}:"
                    )
            else:
                if d % 2 == 0:
                    self.lines.append(
                        f"{self._indent(inner)}for ({decl}{loop_var} = 0; "
                        f"{loop_var} < {rng.randint(3, 20)}; {loop_var} = {loop_var} + 1) {{"
                    )
                else:
                    self.lines.append(
                        f"{self._indent(inner)}if ({loop_var} > {rng.randint(0, 5)}) {{"
                    )
            inner += 1
        self.lines.append(f"{self._indent(inner)}{acc} = {acc} + {rng.randint(1, 5)}{semi}")
        if not python:
            for d in range(spec.depth):
                self.lines.append(f"{self._indent(inner - 1 - d)}}}")
        self._comment(body)
        self.lines.append(f"{self._indent(body)}return {acc}{semi}")
        if not python:
            self.lines.append(f"{self._indent(level)}}}")


def render_program(
    skeleton: Skeleton, persona: Persona, language: Language, seed: int
) -> str:
    return _Renderer(skeleton, persona, language, random.Random(seed)).render()


def random_program(rng: random.Random, language: Language, generator: Generator = Generator.HUMAN) -> str:
    seed = rng.randrange(1 << 30)
    return render_program(make_skeleton(rng), PERSONAS[generator], language, seed)


def make_corpus(
    n_humans: int,
    language: Language = Language.PYTHON,
    seed: int = 0,
    generators: tuple[Generator, ...] = (
        Generator.CHATGPT,
        Generator.GEMINI_PRO,
        Generator.WIZARDCODER,
        Generator.DEEPSEEK_CODER,
    ),
) -> list[SourceUnit]:
    """`n_humans` human units plus one paraphrase per (human, generator)."""
    rng = random.Random(seed)
    units: list[SourceUnit] = []
    for h in range(n_humans):
        skeleton = make_skeleton(rng)
        human_id = f"{language.value}-h{h:04d}"
        units.append(
            SourceUnit(
                id=human_id,
                language=language,
                generator=Generator.HUMAN,
                origin_id="",
                text=render_program(
                    skeleton, PERSONAS[Generator.HUMAN], language, rng.randrange(1 << 30)
                ),
            )
        )
        for generator in generators:
            units.append(
                SourceUnit(
                    id=f"{human_id}-{generator.value}",
                    language=language,
                    generator=generator,
                    origin_id=human_id,
                    text=render_program(
                        skeleton, PERSONAS[generator], language, rng.randrange(1 << 30)
                    ),
                )
            )
    return units
