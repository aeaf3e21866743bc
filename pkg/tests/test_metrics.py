"""
Tests para la confusión, las métricas diagnósticas, las curvas, el bootstrap y el informe de evaluación.
"""

import numpy as np
import pandas as pd
import pytest

from metrics import (
    basic_metrics,
    bootstrap_ci,
    bootstrap_metric_ci,
    confusion,
    evaluate,
    precision_recall,
    prevalence_adjusted,
    prevalence_curve,
    probability_histogram,
    roc_auc,
    threshold_sweep,
    write_curve_csv,
    write_eval_report,
)
from models import ConfusionTable, CurveKind, InvalidInputError


def concordance_auc(probs, labels):
    """Probabilidad de que un positivo puntúe por encima de un negativo; empates cuentan 1/2."""
    positives = [p for p, y in zip(probs, labels) if y == 1]
    negatives = [p for p, y in zip(probs, labels) if y == 0]
    total = 0.0
    for p in positives:
        for q in negatives:
            total += 1.0 if p > q else 0.5 if p == q else 0.0
    return total / (len(positives) * len(negatives))


class TestConfusion:
    """Tests para confusion y basic_metrics."""

    def test_counts_and_accuracy(self):
        """80 positivos con 8 fallos y 80 negativos con 24 falsos positivos."""
        labels = [1] * 80 + [0] * 80
        probs = [0.9] * 72 + [0.1] * 8 + [0.8] * 24 + [0.2] * 56

        table = confusion(probs, labels)

        assert (table.tp, table.fn, table.tn, table.fp) == (72, 8, 56, 24)
        assert basic_metrics(table).accuracy == pytest.approx(0.8)

    def test_threshold_is_inclusive(self):
        """p == umbral cuenta como positivo."""
        table = confusion([0.5, 0.49], [1, 0], threshold=0.5)
        assert (table.tp, table.tn) == (1, 1)

    @pytest.mark.parametrize("tp,fn,tn,fp,expected", [
        (202, 234, 628, 473, dict(sensitivity=0.463, specificity=0.570, npv=0.729, ppv=0.299, accuracy=0.540)),
        (284, 152, 701, 400, dict(sensitivity=0.651, specificity=0.637, npv=0.822, ppv=0.415)),
    ])
    def test_reader_tables(self, tp, fn, tn, fp, expected):
        """Métricas de lectores humanos a partir de su tabla cruzada lector x referencia."""
        table = ConfusionTable.from_reader_crosstab([[tn, fn], [fp, tp]])
        metrics = basic_metrics(table).model_dump()

        for name, value in expected.items():
            assert metrics[name] == pytest.approx(value, abs=1e-3)

    def test_undefined_metrics(self):
        """Sin negativos la especificidad y el npv quedan indefinidos, no a 0 ni a 1."""
        metrics = basic_metrics(ConfusionTable(tp=5, fp=0, tn=0, fn=0))

        assert metrics.specificity is None
        assert metrics.npv is None
        assert metrics.sensitivity == 1.0
        assert metrics.f1 == 1.0

    def test_invalid_inputs(self):
        with pytest.raises(InvalidInputError):
            confusion([0.2, 1.2], [0, 1])
        with pytest.raises(InvalidInputError):
            confusion([0.2, 0.3], [0, 2])
        with pytest.raises(InvalidInputError):
            confusion([0.2], [0, 1])
        with pytest.raises(InvalidInputError):
            confusion([], [])


class TestPrevalence:
    """Tests para los valores predictivos ajustados por prevalencia."""

    def test_reference_point(self):
        """Sensibilidad 0.69 y especificidad 0.904 a prevalencia 1 %."""
        ppv, npv = prevalence_adjusted(0.69, 0.904, 0.01)

        assert ppv == pytest.approx(0.0677, abs=1e-4)
        assert npv == pytest.approx(0.9966, abs=1e-4)

    def test_curve_monotonicity(self):
        """ppv no decrece y npv no crece con la prevalencia."""
        series = prevalence_curve(0.69, 0.904)

        assert series.kind == CurveKind.PPV_NPV_VS_PREVALENCE
        assert len(series.points) == 100
        assert np.all(np.diff([p.y for p in series.points]) >= 0)
        assert np.all(np.diff([p.y2 for p in series.points]) <= 0)

    def test_undefined_ppv(self):
        """Sensibilidad 0 y especificidad 1 no predicen nunca positivo: ppv indefinido."""
        ppv, npv = prevalence_adjusted(0.0, 1.0, 0.1)
        assert ppv is None
        assert npv == pytest.approx(0.9)

    def test_out_of_range(self):
        with pytest.raises(InvalidInputError):
            prevalence_adjusted(0.5, 0.5, 1.5)
        with pytest.raises(InvalidInputError):
            prevalence_curve(0.5, 0.5, prevalence_range=(0.05, 0.01))


class TestCurves:
    """Tests para ROC, PR, barridos de umbral e histograma."""

    def test_auc_example(self):
        """probs [0.1, 0.4, 0.35, 0.8] con etiquetas [0, 0, 1, 1] dan AUC 0.75."""
        area, series = roc_auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1])

        assert area == pytest.approx(0.75)
        assert series.points[0].x == 0.0 and series.points[-1].x == 1.0

    def test_auc_matches_concordance_with_ties(self):
        """La AUC coincide con la concordancia por pares, contando los empates como 1/2."""
        rng = np.random.default_rng(8)
        probs = np.round(rng.random(60), 1)
        labels = rng.integers(0, 2, size=60)
        labels[:2] = [0, 1]

        assert roc_auc(probs, labels)[0] == pytest.approx(concordance_auc(probs, labels))

    def test_auc_requires_both_classes(self):
        with pytest.raises(InvalidInputError):
            roc_auc([0.2, 0.4], [1, 1])

    def test_perfect_precision_recall(self):
        average, series = precision_recall([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1])

        assert average == pytest.approx(1.0)
        assert np.all(np.diff([p.x for p in series.points]) >= 0)

    def test_threshold_sweep(self):
        """La sensibilidad no crece con el umbral y la especificidad no decrece."""
        rng = np.random.default_rng(2)
        probs = rng.random(50)
        labels = (probs + rng.normal(0, 0.3, 50) > 0.5).astype(int)

        sens_spec, f1_recall = threshold_sweep(probs, labels)

        assert len(sens_spec.points) == 101
        assert np.all(np.diff([p.y for p in sens_spec.points]) <= 0)
        assert np.all(np.diff([p.y2 for p in sens_spec.points]) >= 0)
        assert [p.y2 for p in f1_recall.points] == [p.y for p in sens_spec.points]

    def test_threshold_sweep_rejects_unsorted_grid(self):
        with pytest.raises(InvalidInputError):
            threshold_sweep([0.2, 0.8], [0, 1], grid=[0.5, 0.2])

    def test_undefined_points_written_as_marker(self, tmp_path):
        """Los valores indefinidos se escriben como 'undefined' en el CSV."""
        sens_spec, _ = threshold_sweep([0.2, 0.9], [1, 1], grid=[0.0, 0.5, 1.0])

        path = write_curve_csv(sens_spec, tmp_path / "curve.csv")

        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "threshold,sensitivity,specificity"
        assert lines[1].endswith(",undefined")

    def test_histogram(self):
        """Los extremos 0 y 1 caen en el primer y el último intervalo."""
        bins = probability_histogram([0.0, 0.05, 0.95, 1.0], [0, 0, 1, 1])

        assert len(bins) == 10
        assert (bins[0].healthy, bins[0].inflamed) == (2, 0)
        assert (bins[-1].healthy, bins[-1].inflamed) == (0, 2)
        assert sum(b.healthy + b.inflamed for b in bins) == 4


class TestBootstrap:
    """Tests para los intervalos bootstrap."""

    def test_covers_mean_with_normal_width(self):
        """Para 100 valores N(0, 1) el intervalo cubre la media con anchura próxima a 2·1.96·s/√n."""
        values = np.random.default_rng(0).standard_normal(100)

        ci = bootstrap_ci(values, resamples=2000, seed=1)

        expected_width = 2 * 1.96 * values.std(ddof=1) / np.sqrt(values.size)
        assert ci.lo <= values.mean() <= ci.hi
        assert abs((ci.hi - ci.lo) - expected_width) <= 0.2 * expected_width

    def test_constant_values(self):
        ci = bootstrap_ci([0.8, 0.8, 0.8], resamples=100)
        assert ci.lo == ci.hi
        assert ci.mean == pytest.approx(0.8)

    def test_deterministic(self):
        values = [0.7, 0.8, 0.75, 0.9]
        assert bootstrap_ci(values, 500, seed=3) == bootstrap_ci(values, 500, seed=3)

    def test_needs_two_values(self):
        with pytest.raises(InvalidInputError):
            bootstrap_ci([0.8])

    def test_metric_ci_over_cases(self):
        """El intervalo por casos de la AUC contiene la AUC puntual."""
        rng = np.random.default_rng(4)
        labels = np.array([0, 1] * 20)
        probs = np.clip(0.5 + 0.3 * (labels - 0.5) + rng.normal(0, 0.2, 40), 0, 1)

        ci = bootstrap_metric_ci(probs, labels, lambda p, y: roc_auc(p, y)[0], resamples=300, seed=0)

        assert ci.lo <= ci.mean <= ci.hi
        assert ci.mean == pytest.approx(roc_auc(probs, labels)[0])


class TestEvaluate:
    """Tests para el informe de evaluación completo."""

    def test_report_contents_and_files(self, tmp_path):
        probs = [0.1, 0.4, 0.35, 0.8, 0.9, 0.2]
        labels = [0, 0, 1, 1, 1, 0]

        report = evaluate(probs, labels, threshold=0.5, resamples=200, case_ids=list("abcdef"))

        assert report.auc == pytest.approx(concordance_auc(probs, labels))
        assert report.sample_prevalence == pytest.approx(0.5)
        assert report.prevalence_adjusted["prevalence"] == 0.01
        assert set(report.curves) == {kind.value for kind in CurveKind}

        written = write_eval_report(report, tmp_path)

        assert (tmp_path / "eval_report.json") in written
        cases = pd.read_csv(tmp_path / "cases.csv")
        assert cases["case_id"].tolist() == list("abcdef")
        metrics = pd.read_csv(tmp_path / "metrics.csv")
        assert "auc" in metrics["metric"].tolist()
        assert (tmp_path / "roc.csv").read_text(encoding="utf-8").startswith("fpr,tpr\n")
