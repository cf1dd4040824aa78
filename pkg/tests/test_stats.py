"""One-way ANOVA and the hand-built F-distribution tail."""

import io
import math

import numpy as np
import pytest
import scipy.stats

from stylodetect.errors import InvalidDegrees, InvalidGroups
from stylodetect.features import FEATURE_NAMES
from stylodetect.stats import (
    anova_report,
    f_upper_tail,
    one_way_anova,
    regularized_incomplete_beta,
    write_anova_csv,
)


class TestOneWayAnova:
    def test_identical_groups(self):
        r = one_way_anova([[1.0, 1.0], [1.0, 1.0]])
        assert r.f_statistic == 0.0
        assert r.p_value == 1.0
        assert not r.significant

    def test_known_f(self):
        r = one_way_anova([[1.0, 2.0], [3.0, 4.0]])
        assert r.f_statistic == pytest.approx(8.0, abs=1e-9)
        assert r.p_value == pytest.approx(0.10557280900008414, abs=1e-10)
        assert r.df_between == 1
        assert r.df_within == 2

    def test_matches_scipy(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            groups = [rng.normal(m, 1.0, size=rng.integers(3, 12)).tolist() for m in (0, 0.5, 1)]
            r = one_way_anova(groups)
            f, p = scipy.stats.f_oneway(*groups)
            assert r.f_statistic == pytest.approx(f, rel=1e-10)
            assert r.p_value == pytest.approx(p, abs=1e-10)

    def test_degenerate_separated(self):
        r = one_way_anova([[1.0, 1.0], [2.0, 2.0]])
        assert math.isinf(r.f_statistic)
        assert r.p_value == 0.0
        assert r.degenerate and r.significant

    def test_invalid_groups(self):
        with pytest.raises(InvalidGroups):
            one_way_anova([[1.0, 2.0]])
        with pytest.raises(InvalidGroups):
            one_way_anova([[1.0], []])
        with pytest.raises(InvalidGroups):
            one_way_anova([[1.0], [2.0]])  # no residual degrees of freedom


class TestFTail:
    def test_edge_values(self):
        assert f_upper_tail(0.0, 3, 10) == 1.0
        assert f_upper_tail(math.inf, 3, 10) == 0.0

    def test_invalid_degrees(self):
        with pytest.raises(InvalidDegrees):
            f_upper_tail(1.0, 0, 5)

    def test_grid_against_scipy(self):
        worst = 0.0
        for f in [0.01, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 200.0, 689.31]:
            for d1 in [1, 2, 3, 9, 40]:
                for d2 in [1, 5, 30, 200, 3000]:
                    got = f_upper_tail(f, d1, d2)
                    want = float(scipy.stats.f.sf(f, d1, d2))
                    worst = max(worst, abs(got - want))
        assert worst < 1e-10

    def test_extreme_tail_stays_finite(self):
        p = f_upper_tail(689.31, 1, 3000)
        assert 0.0 < p < 1e-100
        assert p == pytest.approx(float(scipy.stats.f.sf(689.31, 1, 3000)), rel=1e-9)

    def test_underflow_reports_zero(self):
        assert f_upper_tail(1e6, 10, 5000) == 0.0

    def test_two_group_f_equals_t_squared(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            a = rng.normal(0, 1, size=rng.integers(3, 15)).tolist()
            b = rng.normal(0.3, 1, size=rng.integers(3, 15)).tolist()
            r = one_way_anova([a, b])
            t, p = scipy.stats.ttest_ind(a, b)
            assert r.f_statistic == pytest.approx(t * t, rel=1e-9)
            assert r.p_value == pytest.approx(p, rel=1e-8)


class TestIncompleteBeta:
    def test_bounds(self):
        assert regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
        assert regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0

    def test_against_scipy(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            a = float(rng.uniform(0.1, 50))
            b = float(rng.uniform(0.1, 50))
            x = float(rng.uniform(0.001, 0.999))
            assert regularized_incomplete_beta(a, b, x) == pytest.approx(
                float(scipy.special.betainc(a, b, x)), abs=1e-12
            )


class TestReport:
    def _rows(self):
        rng = np.random.default_rng(3)
        rows = []
        for generator, shift in [("human", 0.0), ("chatgpt", 1.0), ("gemini_pro", 1.0)]:
            for i in range(20):
                row = {"id": f"{generator}{i}", "language": "python", "generator": generator}
                for j, name in enumerate(FEATURE_NAMES):
                    # comment_ratio separates the most.
                    scale = 5.0 if name == "comment_ratio" else 0.5
                    row[name] = float(rng.normal(shift * scale, 1.0))
                rows.append(row)
        return rows

    def test_sorted_by_f(self):
        results = anova_report(self._rows(), "python")
        fs = [r.f_statistic for r in results]
        assert fs == sorted(fs, reverse=True)
        assert results[0].feature == "comment_ratio"

    def test_csv_layout(self):
        results = anova_report(self._rows(), "python")
        buf = io.StringIO()
        write_anova_csv([("python", r) for r in results], buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "language,feature,f_statistic,p_value,significant"
        assert len(lines) == 1 + len(FEATURE_NAMES)
        assert lines[1].startswith("python,comment_ratio,")
