"""
Tests para Wilcoxon, kappa de Cohen, chi-cuadrado y la comparación de modelos.
"""

from itertools import product

import numpy as np
import pytest
from scipy.stats import rankdata

from models import Alternative, InvalidInputError, PairedSample, PValueMethod
from stats import (
    DegenerateMarginalsError,
    DegenerateSampleError,
    chi_square_2x2,
    cohen_kappa,
    compare_models,
    exact_counts,
    summarize_auc,
    wilcoxon_signed_rank,
)


def enumerated_p(diffs, alternative):
    """p-valor exacto por enumeración de las 2^n asignaciones de signo."""
    diffs = np.asarray(diffs, dtype=np.float64)
    diffs = diffs[diffs != 0]
    ranks = rankdata(np.abs(diffs))
    w = ranks[diffs > 0].sum()
    greater = less = 0
    for signs in product((0, 1), repeat=ranks.size):
        value = float(np.dot(signs, ranks))
        greater += value >= w - 1e-9
        less += value <= w + 1e-9
    total = 2 ** ranks.size
    if alternative == Alternative.GREATER:
        return greater / total
    if alternative == Alternative.LESS:
        return less / total
    return min(1.0, 2 * min(greater, less) / total)


class TestWilcoxon:
    """Tests para wilcoxon_signed_rank."""

    def test_all_positive_five(self):
        """n = 5 diferencias positivas: W = 15, p unilateral 1/32 y bilateral 1/16."""
        sample = PairedSample(a=[0.9, 0.8, 0.85, 0.7, 0.95], b=[0.8, 0.6, 0.55, 0.3, 0.45])

        greater = wilcoxon_signed_rank(sample, Alternative.GREATER)
        two_sided = wilcoxon_signed_rank(sample)

        assert greater.statistic == 15
        assert greater.p_value == pytest.approx(0.03125)
        assert two_sided.p_value == pytest.approx(0.0625)
        assert two_sided.method == PValueMethod.EXACT

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    @pytest.mark.parametrize("alternative", list(Alternative))
    def test_exact_matches_enumeration(self, seed, alternative):
        """El p-valor exacto coincide con la enumeración, también con empates y ceros."""
        rng = np.random.default_rng(seed)
        a = np.round(rng.random(10), 1)
        b = np.round(rng.random(10), 1)

        result = wilcoxon_signed_rank(PairedSample(a=a.tolist(), b=b.tolist()), alternative)

        assert result.p_value == pytest.approx(enumerated_p(a - b, alternative), abs=1e-12)
        assert result.n + result.n_zero_dropped == 10

    def test_zeros_are_dropped(self):
        sample = PairedSample(a=[0.8, 0.7, 0.9], b=[0.8, 0.6, 0.5])
        result = wilcoxon_signed_rank(sample)

        assert result.n == 2
        assert result.n_zero_dropped == 1

    def test_all_zero_differences(self):
        """Sin ninguna diferencia la prueba no está definida."""
        with pytest.raises(DegenerateSampleError):
            wilcoxon_signed_rank(PairedSample(a=[0.8, 0.7], b=[0.8, 0.7]))

    def test_normal_approximation(self):
        """Con n > 20 se usa la aproximación normal, simétrica al intercambiar las muestras."""
        rng = np.random.default_rng(5)
        a = rng.random(30)
        b = a - rng.normal(0.05, 0.1, 30)

        forward = wilcoxon_signed_rank(PairedSample(a=a.tolist(), b=b.tolist()))
        backward = wilcoxon_signed_rank(PairedSample(a=b.tolist(), b=a.tolist()))

        assert forward.method == PValueMethod.APPROXIMATE
        assert forward.statistic + backward.statistic == pytest.approx(30 * 31 / 2)
        assert forward.p_value == pytest.approx(backward.p_value)
        assert 0.0 < forward.p_value <= 1.0

    def test_exact_counts_total(self):
        """Las asignaciones de signo suman 2^n."""
        counts = exact_counts(np.array([1.0, 2.5, 2.5, 4.0]))
        assert counts.sum() == 16


class TestCohenKappa:
    """Tests para cohen_kappa."""

    def test_reference_table(self):
        result = cohen_kappa([[40, 10], [5, 45]])

        assert result.kappa == pytest.approx(0.70)
        assert result.p_observed == pytest.approx(0.85)
        assert result.p_expected == pytest.approx(0.5)
        assert result.n == 100

    def test_perfect_agreement(self):
        assert cohen_kappa([[30, 0], [0, 20]]).kappa == pytest.approx(1.0)

    def test_independent_raters(self):
        """Una tabla igual al producto de sus marginales tiene kappa 0."""
        table = np.outer([3, 7], [4, 6])
        assert cohen_kappa(table).kappa == pytest.approx(0.0, abs=1e-12)

    def test_category_permutation(self):
        """Kappa no depende del orden de las categorías."""
        table = np.array([[20, 3, 1], [4, 15, 2], [0, 5, 10]])
        perm = [2, 0, 1]

        assert cohen_kappa(table[np.ix_(perm, perm)]).kappa == pytest.approx(cohen_kappa(table).kappa)

    def test_degenerate_marginals(self):
        with pytest.raises(DegenerateMarginalsError):
            cohen_kappa([[10, 0], [0, 0]])

    def test_invalid_tables(self):
        with pytest.raises(InvalidInputError):
            cohen_kappa([[1, 2, 3], [4, 5, 6]])
        with pytest.raises(InvalidInputError):
            cohen_kappa([[1, -2], [3, 4]])
        with pytest.raises(InvalidInputError):
            cohen_kappa([[0, 0], [0, 0]])


class TestChiSquare:
    """Tests para chi_square_2x2."""

    def test_reference_table(self):
        result = chi_square_2x2([[10, 20], [20, 10]])

        assert result.statistic == pytest.approx(6.667, abs=1e-3)
        assert result.p_value == pytest.approx(0.0098, abs=1e-4)
        assert result.dof == 1

    def test_zero_marginal(self):
        with pytest.raises(InvalidInputError):
            chi_square_2x2([[0, 0], [5, 5]])

    def test_not_two_by_two(self):
        with pytest.raises(InvalidInputError):
            chi_square_2x2(np.ones((3, 3)))


class TestComparison:
    """Tests para el resumen de AUC y la comparación por pares."""

    def test_summarize(self):
        mean, std = summarize_auc([0.8, 0.9])
        assert mean == pytest.approx(0.85)
        assert std == pytest.approx(np.sqrt(0.005))
        assert summarize_auc([0.7]) == (0.7, 0.0)

    def test_identical_models_are_skipped(self):
        """Los pares con AUC idénticas en todos los folds se omiten."""
        fold_auc = {
            "dense": [0.8, 0.82, 0.79, 0.85],
            "residual": [0.8, 0.82, 0.79, 0.85],
            "plain": [0.7, 0.75, 0.72, 0.74],
        }

        comparisons = compare_models(fold_auc)

        assert [(c.model_a, c.model_b) for c in comparisons] == [("dense", "plain"), ("residual", "plain")]
        assert comparisons[0].result.statistic == 10
