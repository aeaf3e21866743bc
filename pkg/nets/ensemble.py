import logging
from typing import Dict, List, Sequence, Union

import numpy as np

from models import AuxFeatures, BackboneSpec, InvalidInputError, Label, RoiPatch, Threshold
from nets.member import EnsembleMember, build_member, forward_member, stack_patches


logger = logging.getLogger(__name__)


def mean_probability(values: np.ndarray) -> np.ndarray:
    """Media por columna independiente del orden de las filas (se suma en orden ascendente)."""
    ordered = np.sort(values, axis=0)
    total = ordered[0].copy()
    for row in ordered[1:]:
        total = total + row
    return total / ordered.shape[0]


class EnsembleModel:
    """Ensamble que promedia las probabilidades de sus miembros."""

    def __init__(self, members: Sequence[EnsembleMember]) -> None:
        if not members:
            raise InvalidInputError("EnsembleModel", "se requiere al menos un miembro")
        sides = {member.input_side for member in members}
        if len(sides) != 1:
            raise InvalidInputError("EnsembleModel", f"los miembros no comparten input_side: {sorted(sides)}")
        names = [member.name for member in members]
        if len(set(names)) != len(names):
            raise InvalidInputError("EnsembleModel", f"nombres de miembro repetidos: {names}")
        self.members: List[EnsembleMember] = list(members)

    @property
    def input_side(self) -> int:
        return self.members[0].input_side

    @property
    def member_names(self) -> List[str]:
        return [member.name for member in self.members]

    def predict_members(self, inputs: np.ndarray, aux: np.ndarray) -> Dict[str, np.ndarray]:
        return {member.name: member.predict_proba(inputs, aux) for member in self.members}

    def predict_proba(self, inputs: np.ndarray, aux: np.ndarray) -> np.ndarray:
        member_probs = self.predict_members(inputs, aux)
        return mean_probability(np.stack(list(member_probs.values())))


def member_names(specs: Sequence[BackboneSpec]) -> List[str]:
    """Nombre de cada miembro: el tipo de backbone, con sufijo si se repite."""
    kinds = [spec.kind.value for spec in specs]
    return [kind if kinds.count(kind) == 1 else f"{kind}_{i}" for i, kind in enumerate(kinds)]


def build_ensemble(
        specs: Sequence[BackboneSpec],
        streams: Sequence[np.random.SeedSequence],
        dtype=np.float32,
        use_age: bool = True,
        use_sex: bool = True,
) -> EnsembleModel:
    """Un miembro por especificación, cada uno con su flujo de inicialización."""
    if len(specs) != len(streams):
        raise InvalidInputError("build_ensemble", "se requiere un flujo por miembro")
    names = member_names(specs)
    return EnsembleModel([
        build_member(name, spec, stream, dtype=dtype, use_age=use_age, use_sex=use_sex)
        for name, spec, stream in zip(names, specs, streams)
    ])


def ensemble_predict(model: EnsembleModel, patch: RoiPatch, aux: AuxFeatures) -> float:
    """Media aritmética de las probabilidades de los miembros para un parche."""
    values = np.array([forward_member(member, patch, aux) for member in model.members])
    return float(mean_probability(values[:, None])[0])


def resolve_threshold(threshold: Union[Threshold, float, None]) -> float:
    if threshold is None:
        return Threshold().probability
    if isinstance(threshold, Threshold):
        return threshold.probability
    value = float(threshold)
    if not 0.0 < value < 1.0:
        raise InvalidInputError("classify", f"el umbral de probabilidad debe estar en (0, 1), recibido {value}")
    return value


def classify(probability: float, threshold: Union[Threshold, float, None] = None) -> Label:
    """Inflamación activa si probability >= umbral."""
    t = resolve_threshold(threshold)
    return Label.ACTIVE_INFLAMMATION if probability >= t else Label.HEALTHY

