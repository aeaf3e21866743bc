import logging
from pathlib import Path
from typing import List

import numpy as np

from data import PatchStore
from harness.datasets import case_arrays
from models import CaseResult, Manifest
from nets import EnsembleModel, load_checkpoint, mean_probability


logger = logging.getLogger(__name__)


def predict_cases(model: EnsembleModel, manifest: Manifest, patches: PatchStore) -> List[CaseResult]:
    """Probabilidad del ensamble y de cada miembro para cada fila del manifiesto."""
    patches.require(manifest)
    dtype = model.members[0].dtype
    inputs, aux, labels = case_arrays(manifest.rows, patches, dtype)
    member_probs = model.predict_members(inputs, aux)
    ensemble_probs = mean_probability(np.stack(list(member_probs.values())))
    return [
        CaseResult(
            case_id=row.case_id,
            patient_id=row.patient_id,
            side=row.side,
            label=int(labels[i]),
            probability=float(ensemble_probs[i]),
            member_probabilities={name: float(probs[i]) for name, probs in member_probs.items()},
        )
        for i, row in enumerate(manifest.rows)
    ]


def evaluate_checkpoint(checkpoint: Path, manifest: Manifest, patches: PatchStore) -> List[CaseResult]:
    """Carga un checkpoint y predice todas las articulaciones del manifiesto."""
    model, provenance = load_checkpoint(checkpoint)
    logger.info(f"Evaluando {len(manifest)} casos con el checkpoint {checkpoint} (fold {provenance.get('fold')}).")
    return predict_cases(model, manifest, patches)
