"""One-way ANOVA used to validate that style features separate
human-written from LLM-paraphrased code.

The F-distribution upper tail is computed from the regularized
incomplete beta function, evaluated with the modified Lentz continued
fraction; the prefactor is carried in log space so extreme F statistics
stay finite.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from stylodetect.errors import InvalidDegrees, InvalidGroups
from stylodetect.features import FEATURE_NAMES

DEFAULT_ALPHA = 0.05


@dataclass(frozen=True)
class AnovaResult:
    feature: str
    f_statistic: float
    p_value: float
    df_between: int
    df_within: int
    significant: bool
    degenerate: bool = False  # zero within-group variance with group separation


def one_way_anova(
    groups: Sequence[Sequence[float]],
    feature: str = "",
    alpha: float = DEFAULT_ALPHA,
) -> AnovaResult:
    if len(groups) < 2 or any(len(g) == 0 for g in groups):
        raise InvalidGroups("need >= 2 groups, each non-empty")
    n_total = sum(len(g) for g in groups)
    n_groups = len(groups)
    if n_total <= n_groups:
        raise InvalidGroups("need more observations than groups")
    grand_mean = sum(sum(g) for g in groups) / n_total
    ssb = sum(len(g) * (sum(g) / len(g) - grand_mean) ** 2 for g in groups)
    ssw = sum(
        sum((x - sum(g) / len(g)) ** 2 for x in g) for g in groups
    )
    df_between = n_groups - 1
    df_within = n_total - n_groups
    if ssw == 0.0:
        if ssb > 0.0:
            return AnovaResult(
                feature, math.inf, 0.0, df_between, df_within, True, degenerate=True
            )
        # All observations identical: no evidence of any difference.
        return AnovaResult(feature, 0.0, 1.0, df_between, df_within, False, degenerate=True)
    f = (ssb / df_between) / (ssw / df_within)
    p = f_upper_tail(f, df_between, df_within)
    return AnovaResult(feature, f, p, df_between, df_within, p < alpha)


def f_upper_tail(f: float, d1: int, d2: int) -> float:
    """Survival function of the F distribution with (d1, d2) degrees."""
    if d1 < 1 or d2 < 1:
        raise InvalidDegrees(f"degrees of freedom must be >= 1, got ({d1}, {d2})")
    if f < 0:
        raise ValueError("F statistic must be non-negative")
    if f == 0:
        return 1.0
    if math.isinf(f):
        return 0.0
    x = d2 / (d2 + d1 * f)
    return regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, x)


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) via the Lentz continued fraction (NR 'betacf' scheme)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_prefactor = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    # The continued fraction converges fastest for x < (a+1)/(a+b+2).
    if x < (a + 1.0) / (a + b + 2.0):
        cf = _beta_continued_fraction(a, b, x)
        return _exp_clip(log_prefactor + math.log(cf / a))
    cf = _beta_continued_fraction(b, a, 1.0 - x)
    return 1.0 - _exp_clip(log_prefactor + math.log(cf / b))


def _exp_clip(log_value: float) -> float:
    # Values below double-precision underflow are reported as 0.0.
    if log_value < -745.0:
        return 0.0
    return math.exp(log_value)


def _beta_continued_fraction(a: float, b: float, x: float, max_iter: int = 500) -> float:
    tiny = 1e-300
    eps = 1e-16
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        # even step
        numer = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + numer * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numer / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        # odd step
        numer = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + numer * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numer / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    return h  # converged to machine precision in practice


def anova_report(
    feature_rows: Iterable[dict],
    language: str,
    alpha: float = DEFAULT_ALPHA,
) -> list[AnovaResult]:
    """Per-feature ANOVA of human vs pooled-LLM observations within one
    language, sorted by descending F."""
    human: dict[str, list[float]] = {name: [] for name in FEATURE_NAMES}
    llm: dict[str, list[float]] = {name: [] for name in FEATURE_NAMES}
    for row in feature_rows:
        if row["language"] != language:
            continue
        target = human if row["generator"] == "human" else llm
        for name in FEATURE_NAMES:
            target[name].append(row[name])
    results = [
        one_way_anova([human[name], llm[name]], feature=name, alpha=alpha)
        for name in FEATURE_NAMES
    ]
    results.sort(key=lambda r: -r.f_statistic)
    return results


def write_anova_csv(results: Iterable[tuple[str, AnovaResult]], stream: TextIO) -> None:
    """Report rows: language,feature,f_statistic,p_value,significant."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["language", "feature", "f_statistic", "p_value", "significant"])
    for language, result in results:
        writer.writerow(
            [
                language,
                result.feature,
                repr(result.f_statistic),
                repr(result.p_value),
                str(result.significant).lower(),
            ]
        )
