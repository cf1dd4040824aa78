"""Similarity baselines the style-feature detector is compared against:
character edit distance, token-set Jaccard, ordered tree edit distance,
and TF-IDF cosine, plus threshold classification and the generator
similarity heatmap.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np

from stylodetect.code_model import GENERATOR_ORDER, SourceUnit, parse, tokenize_unit
from stylodetect.code_model.tree import TreeNode
from stylodetect.errors import (
    DegenerateScores,
    EmptyCorpus,
    MissingGenerator,
    TreeTooLarge,
)

#: Hard budget on combined node count for tree edit distance; files
#: beyond it are rejected rather than silently truncated.
TED_NODE_BUDGET = 3000


@dataclass(frozen=True)
class SimilarityScore:
    pair_id: str
    method: str
    score: float


# -- edit distance ------------------------------------------------------------


def levenshtein_distance(a: str, b: str) -> int:
    """Unit-cost edit distance with a two-row table.

    Each row is evaluated with vectorized numpy; the left-neighbor
    dependency is resolved by a min-plus prefix scan (min over i <= j of
    t[i] + (j - i), via minimum.accumulate on t - index).
    """
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    b_codes = np.frombuffer(b.encode("utf-32-le"), dtype=np.uint32)
    n = len(b)
    index = np.arange(n + 1)
    previous = index.copy()
    candidate = np.empty(n + 1, dtype=np.int64)
    for i, ca in enumerate(a, start=1):
        cost = (b_codes != ord(ca)).astype(np.int64)
        candidate[0] = i
        np.minimum(previous[1:] + 1, previous[:-1] + cost, out=candidate[1:])
        previous = np.minimum.accumulate(candidate - index) + index
    return int(previous[-1])


def levenshtein_similarity(a: str, b: str) -> float:
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein_distance(a, b) / longest


# -- token-set Jaccard --------------------------------------------------------


def jaccard_similarity(a: SourceUnit, b: SourceUnit) -> float:
    set_a = set(tokenize_unit(a))
    set_b = set(tokenize_unit(b))
    if not set_a and not set_b:
        return 1.0
    return len(set_a & set_b) / len(set_a | set_b)


# -- tree edit distance -------------------------------------------------------


def tree_edit_distance(a: TreeNode, b: TreeNode) -> int:
    """Zhang-Shasha ordered tree edit distance with unit costs."""
    ta = _OrderedTree(a)
    tb = _OrderedTree(b)
    if ta.size + tb.size > TED_NODE_BUDGET:
        raise TreeTooLarge(
            f"combined tree size {ta.size + tb.size} exceeds budget {TED_NODE_BUDGET}"
        )
    # Intern node labels into a table shared by both trees so label
    # equality reduces to integer comparison.
    table: dict[str, int] = {}
    ta.label_ids = np.asarray(
        [table.setdefault(label, len(table)) for label in ta.labels], dtype=np.int64
    )
    tb.label_ids = np.asarray(
        [table.setdefault(label, len(table)) for label in tb.labels], dtype=np.int64
    )
    treedist = np.zeros((ta.size, tb.size), dtype=np.int64)
    for i in ta.keyroots:
        for j in tb.keyroots:
            _tree_dist(ta, tb, i, j, treedist)
    return int(treedist[ta.size - 1, tb.size - 1])


def tree_similarity(a: TreeNode, b: TreeNode) -> float:
    na = a.node_count()
    nb = b.node_count()
    return 1.0 - tree_edit_distance(a, b) / (na + nb)


class _OrderedTree:
    """Post-order labels, leftmost-leaf descendants, and keyroots."""

    def __init__(self, root: TreeNode) -> None:
        self.labels: list[str] = []
        self.lmld: list[int] = []  # leftmost leaf descendant, post-order index
        self._index(root)
        self.size = len(self.labels)
        self.lmld_arr = np.asarray(self.lmld, dtype=np.int64)
        self.label_ids = np.empty(0, dtype=np.int64)  # interned jointly later
        seen: set[int] = set()
        keyroots: list[int] = []
        for i in range(self.size - 1, -1, -1):
            if self.lmld[i] not in seen:
                seen.add(self.lmld[i])
                keyroots.append(i)
        self.keyroots = sorted(keyroots)

    def _index(self, node: TreeNode) -> int:
        child_ids = [self._index(child) for child in node.children]
        my_id = len(self.labels)
        self.labels.append(node.kind)
        self.lmld.append(self.lmld[child_ids[0]] if child_ids else my_id)
        return my_id


def _tree_dist(
    ta: _OrderedTree, tb: _OrderedTree, i: int, j: int, treedist: np.ndarray
) -> None:
    li, lj = ta.lmld[i], tb.lmld[j]
    m = i - li + 2
    n = j - lj + 2
    forest = np.zeros((m, n), dtype=np.int64)
    forest[1:, 0] = np.arange(1, m)
    forest[0, 1:] = np.arange(1, n)
    # Per-column data for this keyroot pair (node ids are post-order).
    nodes_b = np.arange(lj, j + 1)
    yb = tb.lmld_arr[nodes_b] - lj
    anchored_b = tb.lmld_arr[nodes_b] == lj
    labels_b = tb.label_ids[nodes_b]
    index = np.arange(n)
    row = np.empty(n, dtype=np.int64)
    for x in range(1, m):
        node_a = li + x - 1
        anchored_a = ta.lmld[node_a] == li
        xa = ta.lmld[node_a] - li
        cost = (ta.label_ids[node_a] != labels_b).astype(np.int64)
        # Terms without the left-neighbor dependency:
        # deletion from the previous row, plus either the diagonal
        # (anchored subtrees) or the precomputed subtree distance.
        diag = np.where(
            anchored_a & anchored_b,
            forest[x - 1, :-1] + cost,
            forest[xa, yb] + treedist[node_a, nodes_b],
        )
        row[0] = x
        np.minimum(forest[x - 1, 1:] + 1, diag, out=row[1:])
        # Left-neighbor cascade as a min-plus prefix scan.
        forest[x] = np.minimum.accumulate(row - index) + index
        if anchored_a:
            both = np.flatnonzero(anchored_b)
            treedist[node_a, nodes_b[both]] = forest[x, both + 1]


# -- TF-IDF cosine ------------------------------------------------------------


@dataclass
class TfidfModel:
    vocabulary: dict[str, int]
    idf: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.vocabulary)


def tfidf_fit(documents: Sequence[Sequence[str]]) -> TfidfModel:
    """Smoothed idf = ln((1 + N) / (1 + df)) + 1 over token documents."""
    if not documents:
        raise EmptyCorpus("cannot fit TF-IDF on zero documents")
    vocabulary: dict[str, int] = {}
    df: dict[int, int] = {}
    for doc in documents:
        for token in sorted(set(doc)):
            idx = vocabulary.setdefault(token, len(vocabulary))
            df[idx] = df.get(idx, 0) + 1
    n = len(documents)
    idf = np.array(
        [math.log((1 + n) / (1 + df[i])) + 1.0 for i in range(len(vocabulary))]
    )
    return TfidfModel(vocabulary, idf)


def tfidf_transform(model: TfidfModel, document: Sequence[str]) -> np.ndarray:
    """L2-normalized tf-idf vector; tokens outside the vocabulary are ignored."""
    vector = np.zeros(model.dim)
    for token in document:
        idx = model.vocabulary.get(token)
        if idx is not None:
            vector[idx] += 1.0
    vector *= model.idf
    norm = np.linalg.norm(vector)
    if norm > 0:
        vector /= norm
    return vector


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    denom = np.linalg.norm(a) * np.linalg.norm(b)
    if denom == 0:
        return 0.0
    return float(np.dot(a, b) / denom)


def tfidf_pair_vectors(
    train_docs: dict[str, Sequence[str]],
    pairs: Sequence[tuple[str, str]],
    all_docs: dict[str, Sequence[str]],
) -> np.ndarray:
    """Concatenated [human ; candidate] tf-idf vectors for the given pairs.

    The vocabulary and idf come from `train_docs` only, so held-out
    folds never leak into the fit.
    """
    model = tfidf_fit([train_docs[doc_id] for doc_id in sorted(train_docs)])
    rows = []
    for human_id, candidate_id in pairs:
        rows.append(
            np.concatenate(
                [
                    tfidf_transform(model, all_docs[human_id]),
                    tfidf_transform(model, all_docs[candidate_id]),
                ]
            )
        )
    return np.vstack(rows)


def tfidf_pair_classifier(
    documents: dict[str, Sequence[str]],
    pairs: Sequence[tuple[str, str]],
    labels: Sequence[int],
    folds: Sequence[int],
    config,
    task: str,
    class_names: Sequence[str],
    binary_positive: Optional[int] = None,
):
    """Concatenated [human ; candidate] tf-idf vectors through the same
    network as the style-feature detector, with the vocabulary refit on
    each fold's training documents."""
    import time

    from stylodetect.classifier import (
        EvalReport,
        Standardizer,
        confusion_matrix,
        f1_score,
        macro_f1,
        per_class_metrics,
        predict_batch,
        train_mlp,
    )

    labels = np.asarray(labels, dtype=int)
    folds = np.asarray(folds, dtype=int)
    n_classes = len(class_names)
    fold_f1: list[float] = []
    total_confusion = np.zeros((n_classes, n_classes), dtype=int)
    train_seconds = 0.0
    infer_seconds = 0.0
    for fold in sorted(set(folds.tolist())):
        train_idx = np.flatnonzero(folds != fold)
        test_idx = np.flatnonzero(folds == fold)
        train_doc_ids = {
            doc_id for i in train_idx for doc_id in pairs[i]
        }
        train_docs = {doc_id: documents[doc_id] for doc_id in train_doc_ids}
        started = time.perf_counter()
        x_train = tfidf_pair_vectors(train_docs, [pairs[i] for i in train_idx], documents)
        x_test = tfidf_pair_vectors(train_docs, [pairs[i] for i in test_idx], documents)
        if config.standardize:
            st = Standardizer.fit(x_train)
            x_train = st.apply(x_train)
            x_test = st.apply(x_test)
        model = train_mlp(x_train, labels[train_idx], config, n_classes=n_classes)
        train_seconds += time.perf_counter() - started
        started = time.perf_counter()
        predicted = predict_batch(model, x_test)
        infer_seconds += time.perf_counter() - started
        truth = labels[test_idx]
        if binary_positive is not None:
            fold_f1.append(f1_score(truth, predicted, binary_positive))
        else:
            fold_f1.append(macro_f1(truth, predicted, n_classes))
        total_confusion += confusion_matrix(truth, predicted, n_classes)
    return EvalReport(
        task=task,
        class_names=list(class_names),
        fold_f1=fold_f1,
        mean_f1=float(np.mean(fold_f1)),
        per_class=per_class_metrics(total_confusion),
        confusion=total_confusion.tolist(),
        timing={"training": train_seconds, "inference": infer_seconds},
    )


# -- threshold classification -------------------------------------------------


@dataclass(frozen=True)
class ThresholdRule:
    threshold: float
    positive_above: bool = True

    def classify(self, score: float) -> int:
        if self.positive_above:
            return int(score >= self.threshold)
        return int(score < self.threshold)


def fit_threshold(scores: Sequence[float], labels: Sequence[int]) -> ThresholdRule:
    """Sweep midpoints between sorted distinct scores and keep the cut
    (and direction) maximizing training F1."""
    distinct = sorted(set(scores))
    if len(distinct) < 2:
        raise DegenerateScores("all training scores identical")
    candidates = [
        (lo + hi) / 2.0 for lo, hi in zip(distinct, distinct[1:])
    ]
    best: Optional[ThresholdRule] = None
    best_f1 = -1.0
    for positive_above in (True, False):
        for threshold in candidates:
            rule = ThresholdRule(threshold, positive_above)
            predicted = [rule.classify(s) for s in scores]
            f1 = _binary_f1(labels, predicted)
            if f1 > best_f1:
                best_f1 = f1
                best = rule
    assert best is not None
    return best


def _binary_f1(truth: Sequence[int], predicted: Sequence[int]) -> float:
    tp = sum(1 for t, p in zip(truth, predicted) if t == 1 and p == 1)
    fp = sum(1 for t, p in zip(truth, predicted) if t == 0 and p == 1)
    fn = sum(1 for t, p in zip(truth, predicted) if t == 1 and p == 0)
    if 2 * tp + fp + fn == 0:
        return 0.0
    return 2 * tp / (2 * tp + fp + fn)


def threshold_classify(
    train_scores: Sequence[float],
    train_labels: Sequence[int],
    test_scores: Sequence[float],
) -> list[int]:
    rule = fit_threshold(train_scores, train_labels)
    return [rule.classify(s) for s in test_scores]


# -- similarity scoring dispatch ----------------------------------------------


def pair_similarity(method: str, human: SourceUnit, candidate: SourceUnit) -> float:
    if method == "levenshtein":
        return levenshtein_similarity(human.text, candidate.text)
    if method == "jaccard":
        return jaccard_similarity(human, candidate)
    if method == "ted":
        return tree_similarity(parse(human), parse(candidate))
    raise ValueError(f"unknown similarity method: {method}")


def write_score_csv(scores: Iterable[SimilarityScore], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["pair_id", "method", "score"])
    for s in scores:
        writer.writerow([s.pair_id, s.method, repr(s.score)])


# -- generator heatmap --------------------------------------------------------


def generator_tfidf_heatmap(units: Sequence[SourceUnit]) -> np.ndarray:
    """5x5 cosine-similarity matrix between per-generator tf-idf profiles.

    Each generator's profile is the mean of its documents' normalized
    tf-idf vectors, re-normalized. Row/column order is the fixed
    generator order (human first).
    """
    by_generator: dict[str, list[SourceUnit]] = {g.value: [] for g in GENERATOR_ORDER}
    for unit in units:
        by_generator[unit.generator.value].append(unit)
    missing = [g for g, members in by_generator.items() if not members]
    if missing:
        raise MissingGenerator(f"no units for generator(s): {', '.join(missing)}")
    documents = {unit.id: tokenize_unit(unit) for unit in units}
    model = tfidf_fit([documents[uid] for uid in sorted(documents)])
    profiles = []
    for generator in GENERATOR_ORDER:
        vectors = np.vstack(
            [
                tfidf_transform(model, documents[unit.id])
                for unit in sorted(by_generator[generator.value], key=lambda u: u.id)
            ]
        )
        mean = vectors.mean(axis=0)
        norm = np.linalg.norm(mean)
        profiles.append(mean / norm if norm > 0 else mean)
    profiles = np.vstack(profiles)
    return profiles @ profiles.T
