"""
Tests para los folds por paciente, el entrenamiento de un fold y la validación cruzada.
"""

from collections import Counter

import numpy as np
import pytest
from pydantic import ValidationError

from data import PatchStore
from event_bus import BaseEventHandler, EventBus, EventHandlerRegistry
from harness import (
    CV_REPORT_FILE,
    FOLD_AUC_FILE,
    LeakageError,
    aggregate,
    assert_no_leakage,
    check_normalization,
    evaluate_checkpoint,
    make_folds,
    read_cv_report,
    read_fold_auc,
    read_fold_result,
    run_cv,
    train_fold,
    training_arrays,
    write_cv_report,
)
from models import (
    AugmentPolicy,
    BackboneKind,
    BackboneSpec,
    CaseResult,
    EventType,
    FoldPlan,
    FoldResult,
    InvalidInputError,
    Label,
    Manifest,
    ManifestRow,
    RoiPatch,
    RunConfig,
    Sex,
    Side,
    TrainConfig,
)


PLAIN = BackboneSpec(kind=BackboneKind.PLAIN, input_side=16, stem_channels=2, stages=1, growth_or_width=2)


def make_manifest(n_patients):
    """Izquierda inflamada y derecha sana, para que cada fold tenga ambas clases."""
    rows = []
    for i in range(n_patients):
        pid = f"P{i:04d}"
        sex = Sex.FEMALE if i % 2 else Sex.MALE
        for side, label in ((Side.LEFT, Label.ACTIVE_INFLAMMATION), (Side.RIGHT, Label.HEALTHY)):
            rows.append(ManifestRow(
                image_path=f"images/{pid}_{side.short}.pgm",
                patient_id=pid,
                side=side,
                age_years=30 + i % 50,
                sex=sex,
                label=label,
            ))
    return Manifest(rows=rows)


def make_patches(manifest, side_length=16):
    store = PatchStore()
    for index, row in enumerate(manifest.rows):
        pixels = np.random.default_rng(index).random((side_length, side_length))
        if row.label == Label.ACTIVE_INFLAMMATION:
            pixels = np.clip(pixels + 0.2, 0.0, 1.0)
        store.add(RoiPatch(pixels=pixels, patient_id=row.patient_id, side=row.side, normalized=True))
    return store


class EventCollector(BaseEventHandler):
    """Guarda todos los eventos del entrenamiento."""

    def __init__(self):
        super().__init__("EventCollector")
        self.events = []

    @property
    def supported_events(self):
        return {EventType.FOLD_STARTED, EventType.EPOCH_COMPLETED, EventType.FOLD_COMPLETED}

    def handle(self, event):
        self.events.append(event)


class FailingEpochHandler(BaseEventHandler):
    def __init__(self):
        super().__init__("FailingEpochHandler")

    @property
    def supported_events(self):
        return {EventType.EPOCH_COMPLETED}

    def handle(self, event):
        raise RuntimeError("fallo simulado")


class TestFolds:
    """Tests para make_folds y assert_no_leakage."""

    def test_even_split(self):
        """10 pacientes en 5 folds dejan 2 pacientes de test por fold."""
        manifest = make_manifest(10)
        plan = make_folds(manifest, k=5, seed=0)

        for fold in range(5):
            assert len(plan.test_patients(fold)) == 2
        assert_no_leakage(plan, manifest)

    def test_fold_sizes_differ_by_at_most_one(self):
        """768 pacientes en 10 folds dan tamaños de 76 y 77."""
        manifest = make_manifest(768)
        plan = make_folds(manifest, k=10, seed=1)

        sizes = Counter(len(plan.test_patients(fold)) for fold in range(10))
        assert sizes == Counter({77: 8, 76: 2})

    def test_deterministic(self):
        manifest = make_manifest(12)
        assert make_folds(manifest, 3, seed=4) == make_folds(manifest, 3, seed=4)

    def test_too_many_folds(self):
        """k mayor que el número de pacientes se rechaza."""
        with pytest.raises(InvalidInputError):
            make_folds(make_manifest(3), k=4)

    def test_single_fold(self):
        with pytest.raises(InvalidInputError):
            make_folds(make_manifest(3), k=1)

    def test_unassigned_patient_is_leakage(self):
        """Un paciente del manifiesto sin fold se detecta."""
        manifest = make_manifest(3)
        plan = FoldPlan(k=2, seed=0, assignments={"P0000": 0, "P0001": 1})

        with pytest.raises(LeakageError) as exc_info:
            assert_no_leakage(plan, manifest)
        assert exc_info.value.patients == ["P0002"]


class TestTrainingArrays:
    """Tests para la ampliación del conjunto de entrenamiento."""

    def test_augmented_copies_follow_their_case(self):
        """Cada caso va seguido de sus copias aumentadas con sus mismas etiquetas."""
        manifest = make_manifest(2)
        patches = make_patches(manifest)
        policy = AugmentPolicy(max_translate_px=2.0, copies_per_image=2)
        index = {pid: i for i, pid in enumerate(manifest.patients())}

        x, aux, y = training_arrays(manifest.rows, patches, index, policy, seed=0, fold=0)

        assert x.shape == (12, 1, 16, 16)
        assert aux.shape == (12, 3)
        assert y.tolist() == [1, 1, 1, 0, 0, 0] * 2

    def test_augmentation_is_deterministic(self):
        manifest = make_manifest(2)
        patches = make_patches(manifest)
        policy = AugmentPolicy(max_translate_px=2.0, copies_per_image=1)
        index = {pid: i for i, pid in enumerate(manifest.patients())}

        first, _, _ = training_arrays(manifest.rows, patches, index, policy, seed=5, fold=1)
        second, _, _ = training_arrays(manifest.rows, patches, index, policy, seed=5, fold=1)

        assert np.array_equal(first, second)

    def test_without_policy(self):
        manifest = make_manifest(2)
        x, _, _ = training_arrays(manifest.rows, make_patches(manifest), {}, None, seed=0, fold=0)
        assert x.shape[0] == 4

    def test_normalization_must_match_patches(self):
        """Los parches crudos no se aceptan cuando la configuración pide normalizados, ni al revés."""
        manifest = make_manifest(2)
        raw = make_patches(manifest)
        raw.intensity_normalized = False

        check_normalization(raw, normalize=False)
        with pytest.raises(InvalidInputError):
            check_normalization(raw, normalize=True)
        with pytest.raises(InvalidInputError):
            check_normalization(make_patches(manifest), normalize=False)


class TestTrainFold:
    """Tests para el entrenamiento de un fold."""

    def setup_method(self):
        self.manifest = make_manifest(6)
        self.patches = make_patches(self.manifest)
        self.plan = make_folds(self.manifest, k=2, seed=0)
        self.config = TrainConfig(epochs=2, batch_size=4, augment=None, seed=3)

    def test_result_covers_test_patients(self):
        """El resultado contiene exactamente las articulaciones de test con probabilidades válidas."""
        result = train_fold(self.manifest, self.patches, self.plan, 0, self.config, [PLAIN])

        test_patients = self.plan.test_patients(0)
        assert {case.patient_id for case in result.cases} == test_patients
        assert len(result.cases) == 2 * len(test_patients)
        assert all(0.0 <= case.probability <= 1.0 for case in result.cases)
        assert [record.epoch for record in result.curves["plain"]] == [0, 1]

    def test_deterministic(self):
        """Dos entrenamientos con la misma configuración dan las mismas probabilidades."""
        first = train_fold(self.manifest, self.patches, self.plan, 1, self.config, [PLAIN])
        second = train_fold(self.manifest, self.patches, self.plan, 1, self.config, [PLAIN])

        assert np.array_equal(first.probabilities(), second.probabilities())

    def test_events(self):
        """Se publica el inicio, cada época y el cierre del fold."""
        registry = EventHandlerRegistry()
        collector = EventCollector()
        registry.register_handler(collector)

        train_fold(self.manifest, self.patches, self.plan, 0, self.config, [PLAIN], event_bus=EventBus(registry))

        types = [event.type for event in collector.events]
        assert types == [
            EventType.FOLD_STARTED,
            EventType.EPOCH_COMPLETED,
            EventType.EPOCH_COMPLETED,
            EventType.FOLD_COMPLETED,
        ]
        assert collector.events[-1].auc is not None

    def test_checkpoint_reproduces_predictions(self, tmp_path):
        """El checkpoint del fold reproduce las probabilidades de test."""
        result = train_fold(self.manifest, self.patches, self.plan, 0, self.config, [PLAIN], out_dir=tmp_path)

        assert (tmp_path / "fold_0.json").exists()
        assert read_fold_result(tmp_path / "fold_0.json") == result

        test_manifest = Manifest(rows=self.manifest.rows_for(self.plan.test_patients(0)))
        cases = evaluate_checkpoint(result.checkpoint, test_manifest, self.patches)
        np.testing.assert_allclose([c.probability for c in cases], result.probabilities(), atol=1e-7)

    def test_single_case_tail_batch_still_trains(self):
        """Con 6 casos y lotes de 5 el caso sobrante se une al lote anterior y la pérdida es finita."""
        config = TrainConfig(epochs=2, batch_size=5, augment=None, seed=3)

        result = train_fold(self.manifest, self.patches, self.plan, 0, config, [PLAIN])

        losses = [record.train_loss for record in result.curves["plain"]]
        assert all(np.isfinite(losses))

    def test_batch_size_one_is_rejected(self):
        """batch_norm en entrenamiento necesita al menos dos casos por lote."""
        with pytest.raises(ValidationError):
            TrainConfig(batch_size=1)
        with pytest.raises(ValidationError):
            RunConfig(batch_size=1)

    def test_normalization_mismatch(self):
        """Entrenar sin normalización exige los parches crudos."""
        config = TrainConfig(epochs=1, batch_size=4, augment=None, normalize=False)

        with pytest.raises(InvalidInputError):
            train_fold(self.manifest, self.patches, self.plan, 0, config, [PLAIN])


def case(pid, side, label, probability):
    return CaseResult(
        case_id=f"{pid}:{side.value}",
        patient_id=pid,
        side=side,
        label=label,
        probability=probability,
        member_probabilities={"plain": probability},
    )


class TestAggregate:
    """Tests para la agregación de folds."""

    def setup_method(self):
        self.folds = [
            FoldResult(fold=0, cases=[case("P0", Side.LEFT, 0, 0.2), case("P0", Side.RIGHT, 1, 0.8)]),
            FoldResult(fold=1, cases=[case("P1", Side.LEFT, 0, 0.7), case("P1", Side.RIGHT, 1, 0.3)]),
            FoldResult(fold=2, cases=[case("P2", Side.LEFT, 0, 0.1), case("P2", Side.RIGHT, 0, 0.4)]),
        ]

    def test_single_class_fold_is_excluded(self):
        """Un fold de una sola clase tiene AUC indefinida y queda fuera de la media."""
        report = aggregate(self.folds, ["plain"], threshold=0.5, seed=0, resamples=200)

        assert report.fold_auc == [1.0, 0.0, None]
        assert report.mean_auc == pytest.approx(0.5)
        assert report.auc_ci.lo <= report.mean_auc <= report.auc_ci.hi
        assert report.pooled_confusion.tp + report.pooled_confusion.fn == 2
        assert report.model == "plain"

    def test_needs_two_defined_folds(self):
        with pytest.raises(InvalidInputError):
            aggregate(self.folds[1:], ["plain"], threshold=0.5)

    def test_undefined_auc_is_written_and_refused(self, tmp_path):
        """La AUC indefinida se escribe como 'undefined' y no se acepta como muestra."""
        report = aggregate(self.folds, ["plain"], threshold=0.5, resamples=200)
        write_cv_report(report, tmp_path)

        assert "undefined" in (tmp_path / FOLD_AUC_FILE).read_text(encoding="utf-8")
        assert read_cv_report(tmp_path) == report
        with pytest.raises(InvalidInputError):
            read_fold_auc(tmp_path / FOLD_AUC_FILE)


class TestRunCv:
    """Test de extremo a extremo de la validación cruzada."""

    def test_report_files(self, tmp_path):
        manifest = make_manifest(8)
        patches = make_patches(manifest)
        config = TrainConfig(epochs=1, batch_size=8, augment=None, seed=1)

        report = run_cv(manifest, patches, config, [PLAIN], k=2, out_dir=tmp_path, resamples=100)

        assert len(report.folds) == 2
        assert sorted(c.patient_id for f in report.folds for c in f.cases) == sorted(
            row.patient_id for row in manifest.rows
        )
        assert (tmp_path / CV_REPORT_FILE).exists()
        assert read_fold_auc(tmp_path / FOLD_AUC_FILE, "plain") == pytest.approx(report.fold_auc)
        assert (tmp_path / "checkpoints" / "fold_1.jnt").exists()

    def test_faulty_handler_does_not_stop_training(self, caplog):
        """Un manejador que falla no detiene la validación cruzada y sus errores se informan al final."""
        manifest = make_manifest(8)
        registry = EventHandlerRegistry()
        registry.register_handler(FailingEpochHandler())
        bus = EventBus(registry)
        config = TrainConfig(epochs=1, batch_size=8, augment=None, seed=1)

        report = run_cv(manifest, make_patches(manifest), config, [PLAIN], k=2, event_bus=bus, resamples=100)

        assert len(report.folds) == 2
        assert bus.get_stats() == {"events_published": 6, "handler_errors": 2}
        assert "2 errores en manejadores" in caplog.text

    def test_missing_patch(self):
        """Cada fila del manifiesto necesita su parche."""
        manifest = make_manifest(4)
        patches = make_patches(Manifest(rows=manifest.rows[:-1]))

        with pytest.raises(InvalidInputError):
            run_cv(manifest, patches, TrainConfig(epochs=1, augment=None), [PLAIN], k=2)
