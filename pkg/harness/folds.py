"""
Particiones de validación cruzada a nivel de paciente: las dos articulaciones de un paciente
quedan siempre en la misma partición.
"""

import logging

import numpy as np

from harness.exceptions import LeakageError
from models import FoldPlan, InvalidInputError, Manifest


logger = logging.getLogger(__name__)


def make_folds(manifest: Manifest, k: int = 10, seed: int = 0) -> FoldPlan:
    """Baraja los pacientes con `seed` y los reparte por turnos en `k` folds."""
    patients = manifest.patients()
    if k < 2:
        raise InvalidInputError("make_folds", f"se requieren al menos 2 folds, recibido k={k}")
    if k > len(patients):
        raise InvalidInputError("make_folds", f"k={k} supera el número de pacientes ({len(patients)})")

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    order = rng.permutation(len(patients))
    assignments = {patients[idx]: position % k for position, idx in enumerate(order)}

    plan = FoldPlan(k=k, seed=seed, assignments=assignments)
    logger.info(f"Plan de {k} folds creado para {len(patients)} pacientes (semilla {seed}).")
    return plan


def assert_no_leakage(plan: FoldPlan, manifest: Manifest) -> None:
    """
    Comprueba que cada paciente del manifiesto tenga fold, que los conjuntos de test sean
    disjuntos y que ningún paciente esté a la vez en train y test.
    """
    patients = set(manifest.patients())
    unassigned = sorted(patients - set(plan.assignments))
    if unassigned:
        raise LeakageError(None, unassigned, "pacientes sin fold asignado")

    covered = set()
    for fold in range(plan.k):
        test = plan.test_patients(fold)
        train = plan.train_patients(fold)
        overlap = sorted(test & train)
        if overlap:
            raise LeakageError(fold, overlap)
        repeated = sorted(test & covered)
        if repeated:
            raise LeakageError(fold, repeated, "pacientes en más de un conjunto de test")
        covered |= test

    missing = sorted(patients - covered)
    if missing:
        raise LeakageError(None, missing, "pacientes sin conjunto de test")
