"""Corpus ingestion support: near-duplicate filtering, anonymization,
pair construction for both tasks, and deterministic stratified folds.

All randomness flows from a single integer seed through numpy's PCG64
generator so pair sampling and fold assignment reproduce across
platforms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from stylodetect.code_model import Generator, SourceUnit
from stylodetect.errors import (
    EmptyInput,
    InsufficientNegatives,
    TooFewInstances,
)


class Task1Label(str, Enum):
    PARAPHRASE = "paraphrase"
    UNRELATED = "unrelated"


@dataclass(frozen=True)
class CodePair:
    human_id: str
    candidate_id: str
    language: str
    task1_label: Task1Label
    task2_label: Optional[Generator] = None

    @property
    def pair_id(self) -> str:
        return f"{self.human_id}|{self.candidate_id}"


@dataclass
class FoldSplit:
    k: int
    assignments: dict[str, int]  # pair id -> fold index
    seed: int

    def fold_of(self, pair: CodePair) -> int:
        return self.assignments[pair.pair_id]


# -- near-duplicate filtering -------------------------------------------------


def lcs_similarity(a: SourceUnit, b: SourceUnit) -> float:
    """Line-level LCS length over the longer file's line count."""
    lines_a = [line.rstrip() for line in a.text.splitlines()]
    lines_b = [line.rstrip() for line in b.text.splitlines()]
    longest = max(len(lines_a), len(lines_b))
    if longest == 0:
        return 1.0
    return _lcs_length(lines_a, lines_b) / longest


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    # Intern lines to ints so the inner loop compares integers.
    table: dict[str, int] = {}
    xa = [table.setdefault(s, len(table)) for s in a]
    xb = [table.setdefault(s, len(table)) for s in b]
    prev = [0] * (len(xb) + 1)
    for x in xa:
        curr = [0]
        for j, y in enumerate(xb):
            if x == y:
                curr.append(prev[j] + 1)
            else:
                curr.append(max(prev[j + 1], curr[j]))
        prev = curr
    return prev[-1]


def percentile(values: Sequence[float], q: float) -> float:
    """Linear-interpolation percentile (rank = q/100 * (n-1))."""
    if len(values) == 0:
        raise EmptyInput("percentile of an empty list")
    if not 0 <= q <= 100:
        raise ValueError("percentile must be in [0, 100]")
    return float(np.percentile(np.asarray(values, dtype=float), q, method="linear"))


def filter_near_identical(
    pairs: Sequence[tuple[SourceUnit, SourceUnit]],
    cutoff_percentile: float = 75.0,
) -> list[tuple[SourceUnit, SourceUnit]]:
    """Drop (human, paraphrase) pairs at or above the similarity cutoff.

    The percentile is computed per language over all given pairs of that
    language; pairs exactly at the threshold are removed.
    """
    if not pairs:
        return []
    by_language: dict[str, list[int]] = {}
    sims = []
    for idx, (human, para) in enumerate(pairs):
        sims.append(lcs_similarity(human, para))
        by_language.setdefault(human.language.value, []).append(idx)
    keep: list[tuple[SourceUnit, SourceUnit]] = []
    for indices in by_language.values():
        threshold = percentile([sims[i] for i in indices], cutoff_percentile)
        keep.extend(pairs[i] for i in indices if sims[i] < threshold)
    keep.sort(key=lambda pair: (pair[0].id, pair[1].id))
    return keep


# -- anonymization ------------------------------------------------------------

_URL_RE = re.compile(r"(?:https?|ftp)://[^\s\"'<>`]+|www\.[^\s\"'<>`]+")
_EMAIL_RE = re.compile(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}")
# International, dashed, or parenthesized groups carrying >= 7 digits.
_PHONE_RE = re.compile(r"(?<![\w<])\+?\(?\d[\d\s().-]{5,}\d(?![\w>])")


def _phone_sub(match: re.Match) -> str:
    digits = sum(c.isdigit() for c in match.group())
    return "<PHONE>" if digits >= 7 else match.group()


def anonymize(text: str) -> str:
    """Replace emails, URLs, and phone numbers; idempotent."""
    text = _URL_RE.sub("<URL>", text)
    text = _EMAIL_RE.sub("<EMAIL>", text)
    text = _PHONE_RE.sub(_phone_sub, text)
    return text


# -- pair construction --------------------------------------------------------


def _positives(corpus: Sequence[SourceUnit]) -> list[tuple[SourceUnit, SourceUnit]]:
    humans = {u.id: u for u in corpus if u.generator is Generator.HUMAN}
    out = []
    for unit in corpus:
        if unit.generator is Generator.HUMAN:
            continue
        origin = humans.get(unit.origin_id)
        if origin is not None and origin.language is unit.language:
            out.append((origin, unit))
    out.sort(key=lambda p: (p[0].language.value, p[0].id, p[1].id))
    return out


def build_task1_pairs(corpus: Sequence[SourceUnit], seed: int) -> list[CodePair]:
    """Positive pairs for every (human, paraphrase), plus an equal number
    of seeded uniform negative samples per language."""
    positives = _positives(corpus)
    rng = np.random.default_rng(seed)
    pairs: list[CodePair] = []
    by_language: dict[str, list[tuple[SourceUnit, SourceUnit]]] = {}
    for human, para in positives:
        by_language.setdefault(human.language.value, []).append((human, para))
    for language in sorted(by_language):
        lang_pos = by_language[language]
        humans = sorted(
            {h.id for h, _ in lang_pos}
        )
        candidates = sorted(
            {
                u.id: u
                for u in corpus
                if u.generator is not Generator.HUMAN and u.language.value == language
            }
        )
        origin_of = {
            u.id: u.origin_id
            for u in corpus
            if u.generator is not Generator.HUMAN and u.language.value == language
        }
        positive_keys = {(h.id, p.id) for h, p in lang_pos}
        n_h, n_c = len(humans), len(candidates)
        pool_size = sum(
            1
            for h in humans
            for c in candidates
            if origin_of[c] != h
        )
        needed = len(lang_pos)
        if pool_size < needed:
            raise InsufficientNegatives(
                f"{language}: negative pool {pool_size} < positives {needed}"
            )
        negatives = _sample_negatives(humans, candidates, origin_of, needed, rng)
        gens = {u.id: u.generator for u in corpus}
        for human, para in lang_pos:
            pairs.append(
                CodePair(human.id, para.id, language, Task1Label.PARAPHRASE, gens[para.id])
            )
        for h_id, c_id in negatives:
            pairs.append(CodePair(h_id, c_id, language, Task1Label.UNRELATED, None))
    return pairs


def _sample_negatives(
    humans: list[str],
    candidates: list[str],
    origin_of: dict[str, str],
    needed: int,
    rng: np.random.Generator,
) -> list[tuple[str, str]]:
    n_h, n_c = len(humans), len(candidates)
    total = n_h * n_c
    if total <= 500_000:
        flat = [
            (h, c) for h in humans for c in candidates if origin_of[c] != h
        ]
        idx = rng.choice(len(flat), size=needed, replace=False)
        return [flat[i] for i in sorted(idx)]
    # Large grids: rejection-sample flat indices without materializing the pool.
    chosen: list[int] = []
    seen: set[int] = set()
    while len(chosen) < needed:
        batch = rng.integers(0, total, size=max(1024, 2 * (needed - len(chosen))))
        for flat_idx in batch:
            flat_idx = int(flat_idx)
            if flat_idx in seen:
                continue
            h = humans[flat_idx // n_c]
            c = candidates[flat_idx % n_c]
            if origin_of[c] == h:
                continue
            seen.add(flat_idx)
            chosen.append(flat_idx)
            if len(chosen) == needed:
                break
    return [(humans[i // n_c], candidates[i % n_c]) for i in sorted(chosen)]


def build_task2_instances(corpus: Sequence[SourceUnit]) -> list[CodePair]:
    """One instance per positive pair, labeled with the paraphrasing LLM."""
    gens = {u.id: u.generator for u in corpus}
    return [
        CodePair(
            human.id,
            para.id,
            human.language.value,
            Task1Label.PARAPHRASE,
            gens[para.id],
        )
        for human, para in _positives(corpus)
    ]


# -- fold splitting -----------------------------------------------------------


def task1_stratum_label(pair: CodePair) -> str:
    return pair.task1_label.value


def task2_stratum_label(pair: CodePair) -> str:
    if pair.task2_label is None:
        raise ValueError(f"pair {pair.pair_id} has no task-2 label")
    return pair.task2_label.value


def kfold_split(
    pairs: Sequence[CodePair],
    k: int,
    seed: int,
    label_fn: Callable[[CodePair], str] | None = None,
) -> FoldSplit:
    """Deterministic k folds stratified by (language, task label)."""
    if k < 2:
        raise TooFewInstances("fold count must be >= 2")
    if len(pairs) < k:
        raise TooFewInstances(f"{len(pairs)} pairs < {k} folds")
    if label_fn is None:
        label_fn = task1_stratum_label
    strata: dict[tuple[str, str], list[CodePair]] = {}
    for pair in pairs:
        strata.setdefault((pair.language, label_fn(pair)), []).append(pair)
    rng = np.random.default_rng(seed)
    assignments: dict[str, int] = {}
    for key in sorted(strata):
        members = sorted(strata[key], key=lambda p: p.pair_id)
        order = rng.permutation(len(members))
        for position, idx in enumerate(order):
            assignments[members[idx].pair_id] = position % k
    return FoldSplit(k=k, assignments=assignments, seed=seed)
