"""Command-line driver tying ingestion, feature extraction, statistics,
the detector, and the similarity baselines into reproducible pipelines.

Every report is JSON with an embedded run manifest; reruns with the
same inputs, flags, and seed are byte-identical apart from the
manifest's timestamp and timing fields.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

import numpy as np

from stylodetect.baselines import (
    SimilarityScore,
    generator_tfidf_heatmap,
    pair_similarity,
    tfidf_pair_classifier,
    threshold_classify,
    write_score_csv,
)
from stylodetect.classifier import (
    EvalReport,
    TrainConfig,
    confusion_matrix,
    cross_validate,
    f1_score,
    feature_group_ablation,
    per_class_metrics,
)
from stylodetect.code_model import (
    GENERATOR_ORDER,
    Generator,
    SourceUnit,
    is_parseable,
    load_corpus,
    save_corpus,
    tokenize_unit,
)
from stylodetect.dataset import (
    CodePair,
    Task1Label,
    anonymize,
    build_task1_pairs,
    build_task2_instances,
    filter_near_identical,
    kfold_split,
    task2_stratum_label,
)
from stylodetect.errors import ParseError, StylodetectError, TreeTooLarge
from stylodetect.features import (
    FEATURE_GROUPS,
    extract_style_vector,
    read_feature_csv,
    write_feature_csv,
)
from stylodetect.manifest import build_manifest, report_json
from stylodetect.stats import anova_report, write_anova_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3

DEFAULT_FOLDS = 5
TASK1_CLASSES = ["unrelated", "paraphrase"]
TASK2_CLASSES = [g.value for g in GENERATOR_ORDER if g is not Generator.HUMAN]
TASK1_METHODS = ("style", "levenshtein", "jaccard", "ted", "tfidf")
TASK2_METHODS = ("style", "tfidf")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.single_thread_timing:
        args.jobs = 1
    try:
        return args.func(args)
    except StylodetectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    common.add_argument(
        "--lang",
        choices=["c", "cpp", "java", "python", "all"],
        default="all",
        help="restrict to one language",
    )
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument(
        "--single-thread-timing",
        action="store_true",
        help="force single-threaded execution for comparable timings",
    )
    parser = argparse.ArgumentParser(
        prog="stylodetect",
        description="Coding-style analysis of LLM-paraphrased source code.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("ingest", parents=[common], help="validate, clean, and filter a corpus")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--drop-log", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("features", parents=[common], help="extract per-unit style vectors")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("anova", parents=[common], help="per-feature human-vs-LLM ANOVA")
    p.add_argument("features_csv")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--csv", help="optional CSV mirror of the report")
    p.set_defaults(func=cmd_anova)

    p = sub.add_parser("pairs", parents=[common], help="build detection pairs and folds")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("task1", parents=[common], help="paraphrase detection experiment")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    p.add_argument(
        "--method",
        choices=list(TASK1_METHODS) + ["all"],
        default="style",
    )
    p.add_argument("--scores-csv", help="optional similarity-score dump")
    p.set_defaults(func=cmd_task1)

    p = sub.add_parser("task2", parents=[common], help="generator attribution experiment")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--method", choices=list(TASK2_METHODS) + ["all"], default="style")
    p.set_defaults(func=cmd_task2)

    p = sub.add_parser("ablate", parents=[common], help="single-feature-group detection run")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--group", choices=sorted(FEATURE_GROUPS), required=True)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("heatmap", parents=[common], help="generator TF-IDF similarity matrix")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--csv", help="optional CSV mirror of the matrix")
    p.set_defaults(func=cmd_heatmap)
    return parser


# -- shared helpers -----------------------------------------------------------


def _load_units(path: str, lang: str) -> list[SourceUnit]:
    units = load_corpus(path)
    if not units:
        raise StylodetectError("empty corpus")
    if lang != "all":
        units = [u for u in units if u.language.value == lang]
        if not units:
            raise StylodetectError(f"empty corpus for language {lang}")
    return units


def _extract_vectors(units: Sequence[SourceUnit], jobs: int):
    """Style vectors per unit; parse failures are skipped with a warning."""
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_try_extract, units, chunksize=16))
    else:
        results = [_try_extract(u) for u in units]
    vectors = {}
    for unit, vector in zip(units, results):
        if vector is None:
            print(f"warning: skipping {unit.id}: parse failed", file=sys.stderr)
        else:
            vectors[unit.id] = vector
    return vectors


def _try_extract(unit: SourceUnit):
    try:
        return extract_style_vector(unit)
    except ParseError:
        return None


def _languages(units: Sequence[SourceUnit]) -> list[str]:
    return sorted({u.language.value for u in units})


def _report_dict(report: EvalReport) -> dict:
    return report.to_dict()


# -- subcommands --------------------------------------------------------------


def cmd_ingest(args) -> int:
    started = time.perf_counter()
    units = _load_units(args.corpus, args.lang)
    dropped: list[dict] = []
    cleaned: list[SourceUnit] = []
    for unit in units:
        unit = SourceUnit(
            id=unit.id,
            language=unit.language,
            generator=unit.generator,
            origin_id=unit.origin_id,
            text=anonymize(unit.text),
        )
        if not is_parseable(unit):
            dropped.append({"id": unit.id, "reason": "parse"})
        else:
            cleaned.append(unit)
    humans = {u.id: u for u in cleaned if u.generator is Generator.HUMAN}
    positive_pairs = [
        (humans[u.origin_id], u)
        for u in cleaned
        if u.generator is not Generator.HUMAN and u.origin_id in humans
    ]
    kept_pairs = filter_near_identical(positive_pairs)
    kept_candidates = {p.id for _, p in kept_pairs}
    final: list[SourceUnit] = []
    for unit in cleaned:
        if unit.generator is not Generator.HUMAN and unit.origin_id in humans:
            if unit.id not in kept_candidates:
                dropped.append({"id": unit.id, "reason": "near-identical"})
                continue
        final.append(unit)
    save_corpus(final, args.output)
    with open(args.drop_log, "w", encoding="utf-8") as fh:
        for entry in dropped:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")
    print(
        f"ingest: kept {len(final)} of {len(units)} units "
        f"({len(dropped)} dropped) in {time.perf_counter() - started:.2f}s"
    )
    return EXIT_OK


def cmd_features(args) -> int:
    units = _load_units(args.corpus, args.lang)
    vectors = _extract_vectors(units, args.jobs)
    rows = [(u, vectors[u.id]) for u in units if u.id in vectors]
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        write_feature_csv(rows, fh)
    print(f"features: wrote {len(rows)} rows to {args.output}")
    return EXIT_OK


def cmd_anova(args) -> int:
    started = time.perf_counter()
    with open(args.features_csv, "r", encoding="utf-8", newline="") as fh:
        rows = read_feature_csv(fh)
    if not rows:
        raise StylodetectError("empty feature table")
    languages = (
        sorted({row["language"] for row in rows}) if args.lang == "all" else [args.lang]
    )
    results = {}
    flat = []
    for language in languages:
        per_lang = anova_report(rows, language)
        results[language] = [
            {
                "feature": r.feature,
                "f_statistic": r.f_statistic if np.isfinite(r.f_statistic) else "inf",
                "p_value": r.p_value,
                "df_between": r.df_between,
                "df_within": r.df_within,
                "significant": r.significant,
                "degenerate": r.degenerate,
            }
            for r in per_lang
        ]
        flat.extend((language, r) for r in per_lang)
    manifest = build_manifest(
        "anova", {"lang": args.lang}, args.seed, [args.features_csv]
    )
    manifest.timing = {"total": time.perf_counter() - started}
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(report_json(manifest, {"anova": results}))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            write_anova_csv(flat, fh)
    print(f"anova: wrote {args.output}")
    return EXIT_OK


def cmd_pairs(args) -> int:
    units = _load_units(args.corpus, args.lang)
    pairs = build_task1_pairs(units, args.seed)
    split = kfold_split(pairs, DEFAULT_FOLDS, args.seed)
    with open(args.output, "w", encoding="utf-8") as fh:
        for pair in pairs:
            fh.write(
                json.dumps(
                    {
                        "human_id": pair.human_id,
                        "candidate_id": pair.candidate_id,
                        "task1_label": pair.task1_label.value,
                        "task2_label": None
                        if pair.task2_label is None
                        else pair.task2_label.value,
                        "fold": split.fold_of(pair),
                    },
                    sort_keys=True,
                )
                + "\n"
            )
    print(f"pairs: wrote {len(pairs)} pairs to {args.output}")
    return EXIT_OK


def _similarity_eval(
    method: str,
    pairs: Sequence[CodePair],
    units_by_id: dict[str, SourceUnit],
    folds: np.ndarray,
    score_sink: Optional[list[SimilarityScore]],
) -> tuple[EvalReport, int]:
    """Per-fold threshold classification on one similarity measure.

    Pairs the measure cannot score (tree-size budget) are excluded from
    evaluation; the count of such pairs is returned alongside.
    """
    scores = np.full(len(pairs), np.nan)
    for i, pair in enumerate(pairs):
        try:
            scores[i] = pair_similarity(
                method, units_by_id[pair.human_id], units_by_id[pair.candidate_id]
            )
        except TreeTooLarge:
            pass
        if score_sink is not None and not np.isnan(scores[i]):
            score_sink.append(SimilarityScore(pairs[i].pair_id, method, float(scores[i])))
    labels = np.array(
        [int(p.task1_label is Task1Label.PARAPHRASE) for p in pairs]
    )
    scored = ~np.isnan(scores)
    unscored = int(len(pairs) - scored.sum())
    fold_f1 = []
    total_confusion = np.zeros((2, 2), dtype=int)
    for fold in sorted(set(folds.tolist())):
        train = scored & (folds != fold)
        test = scored & (folds == fold)
        predicted = threshold_classify(
            scores[train], labels[train], scores[test]
        )
        fold_f1.append(f1_score(labels[test], predicted, 1))
        total_confusion += confusion_matrix(labels[test], predicted, 2)
    report = EvalReport(
        task="task1",
        class_names=TASK1_CLASSES,
        fold_f1=fold_f1,
        mean_f1=float(np.mean(fold_f1)),
        per_class=per_class_metrics(total_confusion),
        confusion=total_confusion.tolist(),
    )
    return report, unscored


def _style_pair_matrix(
    pairs: Sequence[CodePair], vectors: dict
) -> tuple[np.ndarray, list[CodePair]]:
    """20-dim pair vectors; pairs touching an unextractable unit are dropped."""
    rows = []
    kept = []
    for pair in pairs:
        human = vectors.get(pair.human_id)
        candidate = vectors.get(pair.candidate_id)
        if human is None or candidate is None:
            print(f"warning: skipping pair {pair.pair_id}: missing features", file=sys.stderr)
            continue
        rows.append(human.as_list() + candidate.as_list())
        kept.append(pair)
    return np.asarray(rows, dtype=float), kept


def _run_task1_language(
    language: str,
    units: list[SourceUnit],
    methods: Sequence[str],
    args,
    score_sink: Optional[list[SimilarityScore]],
) -> dict:
    pairs = build_task1_pairs(units, args.seed)
    split = kfold_split(pairs, DEFAULT_FOLDS, args.seed)
    folds = np.array([split.fold_of(p) for p in pairs])
    labels = np.array([int(p.task1_label is Task1Label.PARAPHRASE) for p in pairs])
    units_by_id = {u.id: u for u in units}
    config = TrainConfig(seed=args.seed)
    out: dict = {"n_pairs": len(pairs), "methods": {}}
    for method in methods:
        started = time.perf_counter()
        if method == "style":
            vectors = _extract_vectors(units, args.jobs)
            x, kept = _style_pair_matrix(pairs, vectors)
            kept_folds = np.array([split.fold_of(p) for p in kept])
            kept_labels = np.array(
                [int(p.task1_label is Task1Label.PARAPHRASE) for p in kept]
            )
            report = cross_validate(
                x, kept_labels, kept_folds, config, "task1", TASK1_CLASSES, binary_positive=1
            )
            extra = {}
        elif method == "tfidf":
            documents = {u.id: tokenize_unit(u) for u in units}
            report = tfidf_pair_classifier(
                documents,
                [(p.human_id, p.candidate_id) for p in pairs],
                labels,
                folds,
                config,
                "task1",
                TASK1_CLASSES,
                binary_positive=1,
            )
            extra = {}
        else:
            report, unscored = _similarity_eval(
                method, pairs, units_by_id, folds, score_sink
            )
            extra = {"unscored_pairs": unscored}
        entry = _report_dict(report)
        entry.update(extra)
        out["methods"][method] = entry
        out.setdefault("timing", {})[method] = time.perf_counter() - started
    return out


def cmd_task1(args) -> int:
    started = time.perf_counter()
    units = _load_units(args.corpus, args.lang)
    methods = list(TASK1_METHODS) if args.method == "all" else [args.method]
    score_sink: Optional[list[SimilarityScore]] = [] if args.scores_csv else None
    body: dict = {"task": "task1", "languages": {}}
    timing: dict = {}
    for language in _languages(units):
        lang_units = [u for u in units if u.language.value == language]
        result = _run_task1_language(language, lang_units, methods, args, score_sink)
        timing[language] = result.pop("timing", {})
        body["languages"][language] = result
    manifest = build_manifest(
        "task1", {"lang": args.lang, "method": args.method}, args.seed, [args.corpus]
    )
    timing["total"] = time.perf_counter() - started
    manifest.timing = timing
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(report_json(manifest, body))
    if args.scores_csv and score_sink is not None:
        with open(args.scores_csv, "w", encoding="utf-8", newline="") as fh:
            write_score_csv(score_sink, fh)
    print(f"task1: wrote {args.output}")
    return EXIT_OK


def cmd_task2(args) -> int:
    started = time.perf_counter()
    units = _load_units(args.corpus, args.lang)
    methods = list(TASK2_METHODS) if args.method == "all" else [args.method]
    body: dict = {"task": "task2", "languages": {}}
    timing: dict = {}
    config = TrainConfig(seed=args.seed)
    for language in _languages(units):
        lang_units = [u for u in units if u.language.value == language]
        instances = build_task2_instances(lang_units)
        split = kfold_split(
            instances, DEFAULT_FOLDS, args.seed, label_fn=task2_stratum_label
        )
        folds = np.array([split.fold_of(p) for p in instances])
        labels = np.array(
            [TASK2_CLASSES.index(p.task2_label.value) for p in instances]
        )
        lang_out: dict = {"n_instances": len(instances), "methods": {}}
        for method in methods:
            method_started = time.perf_counter()
            if method == "style":
                vectors = _extract_vectors(lang_units, args.jobs)
                x, kept = _style_pair_matrix(instances, vectors)
                kept_folds = np.array([split.fold_of(p) for p in kept])
                kept_labels = np.array(
                    [TASK2_CLASSES.index(p.task2_label.value) for p in kept]
                )
                report = cross_validate(
                    x, kept_labels, kept_folds, config, "task2", TASK2_CLASSES
                )
            else:
                documents = {u.id: tokenize_unit(u) for u in lang_units}
                report = tfidf_pair_classifier(
                    documents,
                    [(p.human_id, p.candidate_id) for p in instances],
                    labels,
                    folds,
                    config,
                    "task2",
                    TASK2_CLASSES,
                )
            lang_out["methods"][method] = _report_dict(report)
            timing.setdefault(language, {})[method] = (
                time.perf_counter() - method_started
            )
        body["languages"][language] = lang_out
    manifest = build_manifest(
        "task2", {"lang": args.lang, "method": args.method}, args.seed, [args.corpus]
    )
    timing["total"] = time.perf_counter() - started
    manifest.timing = timing
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(report_json(manifest, body))
    print(f"task2: wrote {args.output}")
    return EXIT_OK


def cmd_ablate(args) -> int:
    started = time.perf_counter()
    units = _load_units(args.corpus, args.lang)
    group_features = FEATURE_GROUPS[args.group]
    config = TrainConfig(seed=args.seed)
    body: dict = {"task": "task1", "group": args.group, "languages": {}}
    timing: dict = {}
    for language in _languages(units):
        lang_started = time.perf_counter()
        lang_units = [u for u in units if u.language.value == language]
        pairs = build_task1_pairs(lang_units, args.seed)
        split = kfold_split(pairs, DEFAULT_FOLDS, args.seed)
        vectors = _extract_vectors(lang_units, args.jobs)
        x, kept = _style_pair_matrix(pairs, vectors)
        kept_folds = np.array([split.fold_of(p) for p in kept])
        kept_labels = np.array(
            [int(p.task1_label is Task1Label.PARAPHRASE) for p in kept]
        )
        report = feature_group_ablation(
            x,
            kept_labels,
            kept_folds,
            config,
            group_features,
            "task1",
            TASK1_CLASSES,
            binary_positive=1,
        )
        body["languages"][language] = {
            "n_pairs": len(pairs),
            "methods": {"style": _report_dict(report)},
        }
        timing[language] = time.perf_counter() - lang_started
    manifest = build_manifest(
        "ablate", {"lang": args.lang, "group": args.group}, args.seed, [args.corpus]
    )
    timing["total"] = time.perf_counter() - started
    manifest.timing = timing
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(report_json(manifest, body))
    print(f"ablate: wrote {args.output}")
    return EXIT_OK


def cmd_heatmap(args) -> int:
    started = time.perf_counter()
    units = _load_units(args.corpus, args.lang)
    body: dict = {
        "generator_order": [g.value for g in GENERATOR_ORDER],
        "languages": {},
    }
    csv_chunks: list[str] = []
    for language in _languages(units):
        lang_units = [u for u in units if u.language.value == language]
        matrix = generator_tfidf_heatmap(lang_units)
        body["languages"][language] = [
            [round(float(v), 12) for v in row] for row in matrix
        ]
        buf = io.StringIO()
        buf.write(f"# {language}\n")
        buf.write("," + ",".join(g.value for g in GENERATOR_ORDER) + "\n")
        for generator, row in zip(GENERATOR_ORDER, matrix):
            buf.write(generator.value + "," + ",".join(repr(float(v)) for v in row) + "\n")
        csv_chunks.append(buf.getvalue())
    manifest = build_manifest("heatmap", {"lang": args.lang}, args.seed, [args.corpus])
    manifest.timing = {"total": time.perf_counter() - started}
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(report_json(manifest, body))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(csv_chunks))
    print(f"heatmap: wrote {args.output}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
