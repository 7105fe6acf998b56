import numpy as np
import pytest

from tglg.metrics import (EvalReport, MetricsError, aggregate, auc,
                          classification_error, pmse, tp_fp)


class TestTpFp:
    def test_exact_recovery(self):
        assert tp_fp([1, 2], [1, 2]) == (2, 0)

    def test_empty_selection(self):
        assert tp_fp([], [1, 2]) == (0, 0)

    def test_partial(self):
        assert tp_fp([1, 3], [1, 2]) == (1, 1)

    def test_sum_is_selection_size(self, rng):
        for _ in range(20):
            sel = rng.choice(30, size=rng.integers(0, 15), replace=False)
            tru = rng.choice(30, size=10, replace=False)
            tp, fp = tp_fp(sel, tru)
            assert tp + fp == len(sel)


class TestAuc:
    def test_perfect_separation(self):
        assert auc([0.9, 0.8, 0.1], [0, 1]) == 1.0

    def test_all_ties_is_half(self):
        assert auc([0.3, 0.3, 0.3, 0.3], [0, 2]) == 0.5

    @pytest.mark.derived_oracle
    def test_matches_pairwise_double_loop(self, rng):
        for _ in range(10):
            scores = rng.random(20)
            scores[rng.random(20) < 0.3] = 0.5   # force some ties
            truth = rng.choice(20, size=6, replace=False)
            is_true = np.zeros(20, dtype=bool)
            is_true[truth] = True
            total = 0.0
            npairs = 0
            for i in np.flatnonzero(is_true):
                for j in np.flatnonzero(~is_true):
                    npairs += 1
                    if scores[i] > scores[j]:
                        total += 1.0
                    elif scores[i] == scores[j]:
                        total += 0.5
            assert auc(scores, truth) == pytest.approx(total / npairs, rel=1e-12)

    def test_invariant_under_increasing_transform(self, rng):
        scores = rng.random(25)
        truth = rng.choice(25, size=8, replace=False)
        base = auc(scores, truth)
        assert auc(np.exp(5 * scores), truth) == pytest.approx(base, rel=1e-12)

    def test_degenerate_truth_errors(self):
        with pytest.raises(MetricsError):
            auc([0.1, 0.2], [])
        with pytest.raises(MetricsError):
            auc([0.1, 0.2], [0, 1])


class TestPmse:
    def test_perfect(self):
        assert pmse([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_unit(self):
        assert pmse([0.0, 2.0], [1.0, 1.0]) == 1.0

    @pytest.mark.derived_oracle
    def test_matches_direct_sum(self, rng):
        y = rng.standard_normal(40)
        yhat = rng.standard_normal(40)
        want = sum((a - b) ** 2 for a, b in zip(y, yhat)) / 40
        assert pmse(y, yhat) == pytest.approx(want, rel=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(MetricsError):
            pmse([1.0], [1.0, 2.0])


class TestClassificationError:
    def test_all_correct(self):
        assert classification_error([1.0, 0.0], [0.9, 0.2]) == 0

    def test_one_wrong(self):
        assert classification_error([1.0], [0.4]) == 1

    def test_half_ties_classify_as_zero(self):
        assert classification_error([0.0, 1.0], [0.5, 0.5]) == 1


class TestAggregate:
    def test_identical_reports_zero_se(self):
        r = EvalReport(tp=3, fp=1, auc=0.9, pmse=2.0)
        agg = aggregate([r, r, r])
        for mean, se in agg.values():
            assert se == 0.0

    def test_two_reports_formula(self):
        a = EvalReport(tp=1, fp=0, auc=0.5, pmse=1.0)
        b = EvalReport(tp=1, fp=0, auc=0.5, pmse=3.0)
        mean, se = aggregate([a, b])["pmse"]
        assert mean == 2.0 and se == pytest.approx(1.0)

    @pytest.mark.derived_oracle
    def test_matches_direct_formula(self, rng):
        reports = [EvalReport(tp=int(rng.integers(0, 10)),
                              fp=int(rng.integers(0, 10)),
                              auc=float(rng.random()),
                              ce=int(rng.integers(0, 50)))
                   for _ in range(50)]
        agg = aggregate(reports)
        vals = np.array([r.auc for r in reports])
        assert agg["auc"][0] == pytest.approx(vals.mean(), rel=1e-12)
        assert agg["auc"][1] == pytest.approx(vals.std(ddof=1) / np.sqrt(50),
                                              rel=1e-12)

    def test_permutation_invariant(self, rng):
        reports = [EvalReport(tp=i, fp=0, auc=0.5 + 0.01 * i, pmse=float(i))
                   for i in range(10)]
        a = aggregate(reports)
        b = aggregate(list(reversed(reports)))
        for k in a:
            assert a[k][0] == pytest.approx(b[k][0], rel=1e-12)
            assert a[k][1] == pytest.approx(b[k][1], rel=1e-12)

    def test_needs_two(self):
        with pytest.raises(MetricsError):
            aggregate([EvalReport(tp=1, fp=1, auc=0.5)])
