"""Similarity baselines: edit distances, TF-IDF, thresholds, heatmap."""

import math
import random

import numpy as np
import pytest

from stylodetect.baselines import (
    TED_NODE_BUDGET,
    cosine_similarity,
    fit_threshold,
    generator_tfidf_heatmap,
    jaccard_similarity,
    levenshtein_distance,
    levenshtein_similarity,
    pair_similarity,
    tfidf_fit,
    tfidf_pair_vectors,
    tfidf_transform,
    threshold_classify,
    tree_edit_distance,
    tree_similarity,
)
from stylodetect.code_model import Generator, Language, SourceUnit
from stylodetect.code_model.tree import TreeNode
from stylodetect.errors import DegenerateScores, EmptyCorpus, MissingGenerator, TreeTooLarge
from synth import make_corpus


def _lev_oracle(a, b):
    table = [[i + j if not (i and j) else 0 for j in range(len(b) + 1)] for i in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
            )
    return table[len(a)][len(b)]


def _forest_dist(fa, fb, memo):
    key = (tuple(map(id, fa)), tuple(map(id, fb)))
    if key in memo:
        return memo[key]
    if not fa and not fb:
        result = 0
    elif not fa:
        result = sum(t.node_count() for t in fb)
    elif not fb:
        result = sum(t.node_count() for t in fa)
    else:
        ta, tb = fa[-1], fb[-1]
        result = min(
            _forest_dist(fa[:-1] + list(ta.children), fb, memo) + 1,
            _forest_dist(fa, fb[:-1] + list(tb.children), memo) + 1,
            _forest_dist(fa[:-1], fb[:-1], memo)
            + _forest_dist(list(ta.children), list(tb.children), memo)
            + (ta.kind != tb.kind),
        )
    memo[key] = result
    return result


def _random_tree(rng, n, labels="xyz"):
    root = TreeNode(rng.choice(labels), (1, 1, 1, 1), [])
    nodes = [root]
    for _ in range(n - 1):
        parent = rng.choice(nodes)
        child = TreeNode(rng.choice(labels), (1, 1, 1, 1), [])
        parent.children.append(child)
        nodes.append(child)
    return root


class TestLevenshtein:
    def test_known_values(self):
        assert levenshtein_distance("kitten", "sitting") == 3
        assert levenshtein_distance("", "abc") == 3
        assert levenshtein_distance("abc", "abc") == 0

    def test_empty_pair_similarity(self):
        assert levenshtein_similarity("", "") == 1.0

    def test_against_oracle(self):
        rng = random.Random(0)
        for _ in range(200):
            a = "".join(rng.choice("abcd") for _ in range(rng.randint(0, 30)))
            b = "".join(rng.choice("abcd") for _ in range(rng.randint(0, 30)))
            assert levenshtein_distance(a, b) == _lev_oracle(a, b)

    def test_symmetry_and_bounds(self):
        rng = random.Random(1)
        for _ in range(50):
            a = "".join(rng.choice("ab") for _ in range(rng.randint(0, 20)))
            b = "".join(rng.choice("ab") for _ in range(rng.randint(0, 20)))
            d = levenshtein_distance(a, b)
            assert d == levenshtein_distance(b, a)
            assert abs(len(a) - len(b)) <= d <= max(len(a), len(b))


class TestJaccard:
    def _unit(self, text, uid="u"):
        return SourceUnit(
            id=uid, language=Language.PYTHON, generator=Generator.HUMAN, origin_id="", text=text
        )

    def test_identical(self):
        u = self._unit("x = y + 1\n")
        assert jaccard_similarity(u, u) == 1.0

    def test_disjoint(self):
        assert jaccard_similarity(self._unit("alpha\n"), self._unit("beta\n")) == 0.0

    def test_range(self):
        a = self._unit("x = 1\ny = 2\n")
        b = self._unit("x = 1\nz = 3\n")
        assert 0.0 < jaccard_similarity(a, b) < 1.0


class TestTreeEditDistance:
    def test_against_recursive_oracle(self):
        for trial in range(200):
            rng = random.Random(trial)
            a = _random_tree(rng, rng.randint(1, 6))
            b = _random_tree(rng, rng.randint(1, 6))
            assert tree_edit_distance(a, b) == _forest_dist([a], [b], {})

    def test_identical_tree_zero(self):
        rng = random.Random(42)
        t = _random_tree(rng, 10)
        assert tree_edit_distance(t, t) == 0
        assert tree_similarity(t, t) == 1.0

    def test_budget_enforced(self):
        big = TreeNode("r", (1, 1, 1, 1), [
            TreeNode("x", (1, 1, 1, 1), []) for _ in range(TED_NODE_BUDGET)
        ])
        small = TreeNode("r", (1, 1, 1, 1), [])
        with pytest.raises(TreeTooLarge):
            tree_edit_distance(big, small)


class TestTfidf:
    def test_idf_formula(self):
        model = tfidf_fit([["a", "b"], ["a"], ["a", "c"]])
        # "a" in all 3 docs, "b" and "c" in 1.
        assert model.idf[model.vocabulary["a"]] == pytest.approx(math.log(4 / 4) + 1)
        assert model.idf[model.vocabulary["b"]] == pytest.approx(math.log(4 / 2) + 1)

    def test_transform_l2_normalized(self):
        model = tfidf_fit([["a", "b"], ["b", "c"]])
        v = tfidf_transform(model, ["a", "a", "b"])
        assert np.linalg.norm(v) == pytest.approx(1.0)

    def test_unseen_tokens_ignored(self):
        model = tfidf_fit([["a"]])
        assert np.array_equal(tfidf_transform(model, ["zzz"]), np.zeros(model.dim))

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            tfidf_fit([])

    def test_cosine(self):
        assert cosine_similarity(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0
        assert cosine_similarity(np.array([2.0, 0.0]), np.array([1.0, 0.0])) == 1.0
        assert cosine_similarity(np.zeros(2), np.ones(2)) == 0.0

    def test_pair_vectors_shape(self):
        docs = {"h": ["a", "b"], "c": ["b", "c"], "d": ["a", "c"]}
        x = tfidf_pair_vectors(docs, [("h", "c"), ("h", "d")], docs)
        assert x.shape == (2, 2 * 3)


class TestThreshold:
    def test_separable(self):
        rule = fit_threshold([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1])
        assert 0.2 < rule.threshold < 0.8
        assert rule.positive_above

    def test_inverted_direction(self):
        rule = fit_threshold([0.9, 0.8, 0.1, 0.2], [0, 0, 1, 1])
        assert not rule.positive_above

    def test_degenerate(self):
        with pytest.raises(DegenerateScores):
            fit_threshold([0.5, 0.5], [0, 1])

    def test_classify(self):
        predicted = threshold_classify([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1], [0.0, 1.0])
        assert predicted == [0, 1]


class TestPairSimilarity:
    def test_unknown_method(self):
        corpus = make_corpus(1, Language.PYTHON, seed=0)
        with pytest.raises(ValueError):
            pair_similarity("nope", corpus[0], corpus[1])

    def test_paraphrases_score_higher_for_ted(self):
        corpus = make_corpus(4, Language.PYTHON, seed=1)
        humans = [u for u in corpus if u.generator is Generator.HUMAN]
        paras = {u.origin_id: u for u in corpus if u.generator is Generator.CHATGPT}
        own = pair_similarity("ted", humans[0], paras[humans[0].id])
        other = pair_similarity("ted", humans[0], paras[humans[1].id])
        assert own >= other


class TestHeatmap:
    def test_shape_and_diagonal(self):
        corpus = make_corpus(4, Language.PYTHON, seed=2)
        matrix = generator_tfidf_heatmap(corpus)
        assert matrix.shape == (5, 5)
        assert np.allclose(np.diag(matrix), 1.0)
        assert np.allclose(matrix, matrix.T)
        assert (matrix >= -1e-12).all() and (matrix <= 1 + 1e-12).all()

    def test_missing_generator(self):
        corpus = make_corpus(2, Language.PYTHON, seed=3, generators=(Generator.CHATGPT,))
        with pytest.raises(MissingGenerator):
            generator_tfidf_heatmap(corpus)
