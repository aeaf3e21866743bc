"""
Registros de dominio que circulan entre las etapas: radiografías, parches, manifiesto, folds y resultados.
"""

from typing import Dict, List, Optional, Set, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from models.enums import Label, Sex, Side


array_config = ConfigDict(arbitrary_types_allowed=True)


class Radiograph(BaseModel):
    """Radiografía en escala de grises con los metadatos de una articulación."""
    model_config = array_config

    pixels: np.ndarray
    patient_id: str = Field(..., min_length=1)
    side: Side
    age_years: int = Field(..., ge=5, le=90)
    sex: Sex
    label: Label

    @field_validator("pixels")
    @classmethod
    def validate_pixels(cls, v: np.ndarray) -> np.ndarray:
        """Valida que la rejilla sea 2-D con intensidades en [0, 1]."""
        if v.ndim != 2:
            raise ValueError("La radiografía debe ser una rejilla 2-D.")
        if v.size and (v.min() < 0.0 or v.max() > 1.0):
            raise ValueError("Las intensidades de la radiografía deben estar en [0, 1].")
        return v

    @property
    def case_id(self) -> str:
        return f"{self.patient_id}:{self.side.value}"


class RoiPatch(BaseModel):
    """Parche cuadrado alrededor de la articulación, listo para la red cuando está normalizado."""
    model_config = array_config

    pixels: np.ndarray
    patient_id: str
    side: Side
    normalized: bool = False

    @model_validator(mode="after")
    def validate_patch(self) -> "RoiPatch":
        """Valida que el parche sea cuadrado y, si está normalizado, que esté en [0, 1]."""
        if self.pixels.ndim != 2 or self.pixels.shape[0] != self.pixels.shape[1]:
            raise ValueError(f"El parche debe ser cuadrado, recibido {self.pixels.shape}.")
        if self.normalized and (self.pixels.min() < 0.0 or self.pixels.max() > 1.0):
            raise ValueError("Un parche normalizado debe tener todas sus intensidades en [0, 1].")
        return self

    @property
    def side_length(self) -> int:
        return int(self.pixels.shape[0])

    def with_pixels(self, pixels: np.ndarray, normalized: Optional[bool] = None) -> "RoiPatch":
        """Devuelve un parche nuevo con los mismos metadatos."""
        return RoiPatch(
            pixels=pixels,
            patient_id=self.patient_id,
            side=self.side,
            normalized=self.normalized if normalized is None else normalized,
        )


class MatchLog(BaseModel):
    """Resultado del emparejamiento de plantilla para una radiografía."""
    patient_id: str
    side: Side
    row_offset: int
    col_offset: int
    score: float = Field(..., ge=-1.0, le=1.0)


class AuxFeatures(BaseModel):
    """Variables auxiliares fusionadas antes de la capa de salida: edad normalizada y sexo one-hot."""
    model_config = ConfigDict(frozen=True)

    age_norm: float = Field(..., ge=0.05, le=0.9)
    sex_code: Tuple[float, float]

    @field_validator("sex_code")
    @classmethod
    def validate_one_hot(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        if sorted(v) != [0.0, 1.0]:
            raise ValueError("El código de sexo debe ser one-hot.")
        return v

    @classmethod
    def from_metadata(cls, age_years: int, sex: Sex) -> "AuxFeatures":
        code = (1.0, 0.0) if sex == Sex.FEMALE else (0.0, 1.0)
        return cls(age_norm=age_years / 100.0, sex_code=code)

    def as_array(self, use_age: bool = True, use_sex: bool = True) -> np.ndarray:
        """Vector (edad, mujer, hombre); las variables ablacionadas se fijan a cero."""
        age = self.age_norm if use_age else 0.0
        sex = self.sex_code if use_sex else (0.0, 0.0)
        return np.array([age, sex[0], sex[1]], dtype=np.float64)


class ManifestRow(BaseModel):
    """Fila del manifiesto: una articulación."""
    model_config = ConfigDict(frozen=True)

    image_path: str
    patient_id: str = Field(..., min_length=1)
    side: Side
    age_years: int = Field(..., ge=5, le=90)
    sex: Sex
    label: Label

    @property
    def key(self) -> Tuple[str, Side]:
        return (self.patient_id, self.side)

    @property
    def case_id(self) -> str:
        return f"{self.patient_id}:{self.side.value}"

    @property
    def aux(self) -> AuxFeatures:
        return AuxFeatures.from_metadata(self.age_years, self.sex)


class Manifest(BaseModel):
    """Colección validada de articulaciones."""
    model_config = ConfigDict(frozen=True)

    rows: List[ManifestRow]

    @model_validator(mode="after")
    def validate_unique_joints(self) -> "Manifest":
        """Cada paciente tiene como máximo una articulación izquierda y una derecha."""
        seen: Set[Tuple[str, Side]] = set()
        for row in self.rows:
            if row.key in seen:
                raise ValueError(f"Articulación duplicada: ({row.patient_id}, {row.side.value}).")
            seen.add(row.key)
        return self

    def __len__(self) -> int:
        return len(self.rows)

    def patients(self) -> List[str]:
        """Identificadores de paciente únicos en orden lexicográfico."""
        return sorted({row.patient_id for row in self.rows})

    def rows_for(self, patient_ids: Set[str]) -> List[ManifestRow]:
        return [row for row in self.rows if row.patient_id in patient_ids]

    def labels(self) -> np.ndarray:
        return np.array([int(row.label) for row in self.rows], dtype=np.int64)


class FoldPlan(BaseModel):
    """Asignación de pacientes a folds de validación cruzada."""
    model_config = ConfigDict(frozen=True)

    k: int = Field(..., ge=2)
    seed: int
    assignments: Dict[str, int]

    @model_validator(mode="after")
    def validate_assignments(self) -> "FoldPlan":
        folds = set(self.assignments.values())
        if folds != set(range(self.k)):
            raise ValueError(f"Cada uno de los {self.k} folds debe tener al menos un paciente.")
        return self

    def test_patients(self, fold: int) -> Set[str]:
        return {pid for pid, f in self.assignments.items() if f == fold}

    def train_patients(self, fold: int) -> Set[str]:
        return {pid for pid, f in self.assignments.items() if f != fold}


class EpochRecord(BaseModel):
    """Métricas de una época de entrenamiento."""
    epoch: int
    train_loss: float
    train_accuracy: float
    val_loss: float
    val_accuracy: float


class CaseResult(BaseModel):
    """Probabilidad predicha para un caso de test."""
    case_id: str
    patient_id: str
    side: Side
    label: int = Field(..., ge=0, le=1)
    probability: float = Field(..., ge=0.0, le=1.0)
    member_probabilities: Dict[str, float] = Field(default_factory=dict)


class FoldResult(BaseModel):
    """Resultado de un fold: probabilidades por caso, curvas por época y checkpoint."""
    fold: int
    cases: List[CaseResult]
    curves: Dict[str, List[EpochRecord]] = Field(default_factory=dict)
    checkpoint: Optional[str] = None

    def probabilities(self) -> np.ndarray:
        return np.array([case.probability for case in self.cases], dtype=np.float64)

    def labels(self) -> np.ndarray:
        return np.array([case.label for case in self.cases], dtype=np.int64)

    def member_probabilities(self, member: str) -> np.ndarray:
        return np.array([case.member_probabilities[member] for case in self.cases], dtype=np.float64)
