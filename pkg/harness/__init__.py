"""
Harness package: folds por paciente, bucle de entrenamiento, validación cruzada y persistencia de resultados.
"""

from harness.exceptions import HarnessError, TrainingAbortedError, LeakageError
from harness.folds import make_folds, assert_no_leakage
from harness.handlers import CurveRecorder, TrainingProgressLogger
from harness.datasets import case_arrays, check_normalization, training_arrays
from harness.results import (
    CV_REPORT_FILE,
    FOLD_AUC_FILE,
    fold_auc_table,
    read_cv_report,
    read_fold_auc,
    read_fold_result,
    write_cv_report,
    write_fold_result,
)
from harness.trainer import FoldTrainer, fold_auc, member_streams, train_fold
from harness.cross_validation import aggregate, ensemble_name, run_cv
from harness.evaluation import evaluate_checkpoint, predict_cases

__all__ = [
    # Exceptions
    "HarnessError",
    "TrainingAbortedError",
    "LeakageError",
    # Folds
    "make_folds",
    "assert_no_leakage",
    # Event handlers
    "CurveRecorder",
    "TrainingProgressLogger",
    # Datasets
    "case_arrays",
    "training_arrays",
    "check_normalization",
    # Results
    "CV_REPORT_FILE",
    "FOLD_AUC_FILE",
    "fold_auc_table",
    "read_cv_report",
    "read_fold_auc",
    "read_fold_result",
    "write_cv_report",
    "write_fold_result",
    # Training
    "FoldTrainer",
    "fold_auc",
    "member_streams",
    "train_fold",
    # Cross-validation
    "aggregate",
    "ensemble_name",
    "run_cv",
    # Evaluation
    "evaluate_checkpoint",
    "predict_cases",
]
