"""
Módulo para definir los parámetros de cada etapa del pipeline y la configuración de ejecución.
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict, YamlConfigSettingsSource

from models.enums import Alternative, BackboneKind


TOOL_NAME = "jointnet-lab"
TOOL_VERSION = "0.1.0"

DEFAULT_CONFIG_FILE = "config/jointnet_config.yaml"

DENSE_LAYERS_PER_STAGE = 4
DENSE_GROWTH = 12
RESIDUAL_BLOCKS_PER_STAGE = 2


class LogLevel(str, Enum):
    """
    Enum que define los niveles de log soportados.
    """
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


class PhantomSpec(BaseModel):
    """
    Parámetros del generador de radiografías sintéticas.
    """
    model_config = ConfigDict(frozen=True)

    image_height: int = Field(default=96, ge=32, description="Alto de la radiografía en píxeles.")
    image_width: int = Field(default=192, ge=32, description="Ancho de la radiografía en píxeles.")
    n_patients: int = Field(default=400, ge=1)
    prevalence: float = Field(default=0.5, ge=0.0, le=1.0, description="Probabilidad base de inflamación por articulación.")
    inflammation_delta: float = Field(default=0.05, ge=0.0, le=0.2, description="Incremento de intensidad en la banda periarticular.")
    noise_sigma: float = Field(default=0.05, ge=0.0, le=1.0, description="Desviación del ruido como fracción del rango dinámico.")
    aux_coupling: float = Field(default=0.0, ge=0.0, le=1.0, description="Acoplamiento entre la edad y la probabilidad de inflamación.")
    seed: int = Field(default=0, ge=0, lt=2**64)
    age_min: int = Field(default=18, ge=5, le=90)
    age_max: int = Field(default=75, ge=5, le=90)
    template_side: int = Field(default=32, ge=8, description="Lado de la plantilla ROI escrita junto al manifiesto.")

    @model_validator(mode="after")
    def validate_ranges(self) -> "PhantomSpec":
        """Valida las relaciones entre campos."""
        if self.age_min > self.age_max:
            raise ValueError("'age_min' no puede ser mayor que 'age_max'.")
        if self.template_side > min(self.image_height, self.image_width // 2):
            raise ValueError("La plantilla debe caber dentro de media radiografía.")
        return self


class AugmentPolicy(BaseModel):
    """
    Política de aumentación de datos aplicada a los parches de entrenamiento.
    """
    model_config = ConfigDict(frozen=True)

    hflip_prob: float = Field(default=0.5, ge=0.0, le=1.0)
    max_rotation_deg: float = Field(default=10.0, ge=0.0, le=15.0)
    max_translate_px: float = Field(default=4.0, ge=0.0, description="Debe ser como máximo P/8 para parches de lado P.")
    intensity_jitter: float = Field(default=0.05, ge=0.0, le=0.1)
    copies_per_image: int = Field(default=2, ge=1)


class ClaheParams(BaseModel):
    """
    Parámetros de la ecualización adaptativa de histograma con límite de contraste.
    """
    model_config = ConfigDict(frozen=True)

    tiles: Tuple[int, int] = (8, 8)
    clip_limit: float = Field(default=2.0, ge=1.0, description="Factor relativo; math.inf desactiva el recorte.")
    bins: int = Field(default=256, ge=2)

    @field_validator("tiles")
    @classmethod
    def validate_tiles(cls, v: Tuple[int, int]) -> Tuple[int, int]:
        """Valida que la rejilla de teselas sea positiva."""
        if v[0] < 1 or v[1] < 1:
            raise ValueError("La rejilla de teselas debe tener al menos una fila y una columna.")
        return v


def _conv_params(c_in: int, c_out: int, kernel: int) -> int:
    return c_in * c_out * kernel * kernel + c_out


def _bn_params(channels: int) -> int:
    return 2 * channels


class BackboneSpec(BaseModel):
    """
    Descriptor de topología de un backbone convolucional en miniatura.
    """
    model_config = ConfigDict(frozen=True)

    kind: BackboneKind
    input_side: int = Field(default=64, ge=8)
    stem_channels: int = Field(default=16, ge=1)
    stages: int = Field(default=3, ge=1)
    growth_or_width: Optional[int] = Field(default=None, ge=1, description="Crecimiento (dense) o ancho base (residual/plain).")

    @model_validator(mode="after")
    def validate_input_side(self) -> "BackboneSpec":
        """El stem y cada transición reducen a la mitad la resolución."""
        if self.input_side % (2 ** self.stages) != 0:
            raise ValueError(f"'input_side' debe ser divisible por 2^stages = {2 ** self.stages}.")
        return self

    @property
    def growth(self) -> int:
        if self.growth_or_width is not None:
            return self.growth_or_width
        return DENSE_GROWTH if self.kind == BackboneKind.DENSE else self.stem_channels

    def stage_width(self, stage: int) -> int:
        """Ancho de canales de una etapa residual o plana."""
        return self.growth * 2 ** stage

    @property
    def feature_dim(self) -> int:
        """Canales tras el global average pool final."""
        if self.kind == BackboneKind.DENSE:
            return self.stem_channels + self.stages * DENSE_LAYERS_PER_STAGE * self.growth
        return self.stage_width(self.stages - 1)

    def parameter_count(self) -> int:
        """Número de parámetros entrenables calculado a partir del descriptor."""
        stem = self.stem_channels
        total = _conv_params(1, stem, 3) + _bn_params(stem)

        if self.kind == BackboneKind.DENSE:
            channels = stem
            for _ in range(self.stages * DENSE_LAYERS_PER_STAGE):
                total += _bn_params(channels) + _conv_params(channels, self.growth, 3)
                channels += self.growth
            return total + _bn_params(channels)

        c_in = stem
        for stage in range(self.stages):
            c_out = self.stage_width(stage)
            if self.kind == BackboneKind.PLAIN:
                total += _conv_params(c_in, c_out, 3) + _bn_params(c_out)
                c_in = c_out
                continue
            for block in range(RESIDUAL_BLOCKS_PER_STAGE):
                stride = 2 if stage > 0 and block == 0 else 1
                total += _conv_params(c_in, c_out, 3) + _bn_params(c_out)
                total += _conv_params(c_out, c_out, 3) + _bn_params(c_out)
                if stride != 1 or c_in != c_out:
                    total += _conv_params(c_in, c_out, 1)
                c_in = c_out
        return total

    def descriptor(self) -> Dict[str, Any]:
        """Descriptor canónico usado en los checkpoints."""
        return {
            "kind": self.kind.value,
            "input_side": self.input_side,
            "stem_channels": self.stem_channels,
            "stages": self.stages,
            "growth_or_width": self.growth,
        }


class Threshold(BaseModel):
    """
    Umbral de decisión expresado como probabilidad en (0, 1).
    """
    model_config = ConfigDict(frozen=True)

    probability: float = Field(default=0.5, gt=0.0, lt=1.0)

    @classmethod
    def from_score(cls, score: float) -> "Threshold":
        """Convierte un umbral en el rango (-1, 1) a probabilidad: t_p = (t_s + 1) / 2."""
        if not -1.0 < score < 1.0:
            raise ValueError(f"El umbral de puntuación debe estar en (-1, 1), recibido {score}.")
        return cls(probability=(score + 1.0) / 2.0)


class TrainConfig(BaseModel):
    """
    Hiperparámetros del entrenamiento de cada fold.
    """
    model_config = ConfigDict(frozen=True)

    epochs: int = Field(default=20, ge=1)
    lr: float = Field(default=5e-3, gt=0.0)
    batch_size: int = Field(default=16, ge=2)
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    eps: float = Field(default=1e-8, gt=0.0)
    weight_decay: float = Field(default=0.01, ge=0.0)
    threshold: Threshold = Field(default_factory=Threshold)
    augment: Optional[AugmentPolicy] = Field(default_factory=AugmentPolicy)
    normalize: bool = True
    use_age: bool = True
    use_sex: bool = True
    seed: int = Field(default=0, ge=0)
    precision: Literal["float32", "float64"] = "float32"


class RunConfig(BaseSettings):
    """
    Configuración plana de una ejecución. Cada clave corresponde a una opción de la línea de comandos.
    """

    # Opciones globales
    seed: int = Field(default=0, ge=0)
    jobs: int = Field(default=1, ge=1)
    out: str = "runs/latest"
    log_level: LogLevel = LogLevel.INFO
    log_file: Optional[str] = None
    force: bool = False

    # phantom
    patients: int = Field(default=400, ge=1)
    height: int = Field(default=96, ge=32)
    width: int = Field(default=192, ge=32)
    prevalence: float = Field(default=0.5, ge=0.0, le=1.0)
    delta: float = Field(default=0.05, ge=0.0, le=0.2)
    noise: float = Field(default=0.05, ge=0.0, le=1.0)
    aux_coupling: float = Field(default=0.0, ge=0.0, le=1.0)
    age_min: int = Field(default=18, ge=5, le=90)
    age_max: int = Field(default=75, ge=5, le=90)
    template_side: int = Field(default=32, ge=8)

    # prep
    manifest: Optional[str] = None
    template: Optional[str] = None
    patch_size: int = Field(default=64, ge=8)
    tiles_rows: int = Field(default=8, ge=1)
    tiles_cols: int = Field(default=8, ge=1)
    clip_limit: float = Field(default=2.0, ge=1.0)
    bins: int = Field(default=256, ge=2)

    # cv
    patches: Optional[str] = None
    folds: int = Field(default=10, ge=2)
    epochs: int = Field(default=20, ge=1)
    lr: float = Field(default=5e-3, gt=0.0)
    batch_size: int = Field(default=16, ge=2)
    weight_decay: float = Field(default=0.01, ge=0.0)
    backbones: str = "dense,residual"
    no_age: bool = False
    no_sex: bool = False
    no_augment: bool = False
    no_normalize: bool = False
    hflip_prob: float = Field(default=0.5, ge=0.0, le=1.0)
    max_rotation: float = Field(default=10.0, ge=0.0, le=15.0)
    max_translate: float = Field(default=4.0, ge=0.0)
    jitter: float = Field(default=0.05, ge=0.0, le=0.1)
    copies: int = Field(default=2, ge=1)
    precision: Literal["float32", "float64"] = "float32"

    # eval
    checkpoint: Optional[str] = None
    threshold: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    threshold_score: Optional[float] = Field(default=None, gt=-1.0, lt=1.0)
    prevalence_min: float = Field(default=0.0005, gt=0.0, lt=1.0)
    prevalence_max: float = Field(default=0.05, gt=0.0, lt=1.0)
    prevalence_points: int = Field(default=100, ge=2)
    resamples: int = Field(default=2000, ge=10)

    # stats / report
    table: Optional[str] = None
    a: Optional[str] = None
    b: Optional[str] = None
    column_a: Optional[str] = None
    column_b: Optional[str] = None
    alternative: Alternative = Alternative.TWO_SIDED
    runs: Optional[str] = None

    # Configuraciones de pydantic-settings
    model_config = SettingsConfigDict(
        yaml_file=DEFAULT_CONFIG_FILE,
        yaml_file_encoding="utf-8",
        env_prefix="JOINTNET_",
        case_sensitive=False,
        extra="forbid",
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings,
        env_settings,
        dotenv_settings,
        file_secret_settings
    ):
        """Las opciones explícitas tienen prioridad sobre el archivo YAML y éste sobre el entorno."""
        return (
            init_settings,
            YamlConfigSettingsSource(settings_cls),
            env_settings,
        )

    @model_validator(mode="after")
    def validate_cross_fields(self) -> "RunConfig":
        """Valida relaciones entre opciones."""
        if self.age_min > self.age_max:
            raise ValueError("'age_min' no puede ser mayor que 'age_max'.")
        if self.prevalence_min >= self.prevalence_max:
            raise ValueError("'prevalence_min' debe ser menor que 'prevalence_max'.")
        if self.threshold is not None and self.threshold_score is not None:
            raise ValueError("Use 'threshold' o 'threshold_score', no ambos.")
        self.backbone_kinds()
        return self

    def backbone_kinds(self) -> List[BackboneKind]:
        """Lista de backbones del ensamble en el orden indicado."""
        names = [name.strip() for name in self.backbones.split(",") if name.strip()]
        if not names:
            raise ValueError("Se requiere al menos un backbone.")
        try:
            return [BackboneKind(name) for name in names]
        except ValueError:
            raise ValueError(f"Backbone desconocido en '{self.backbones}'. Opciones: dense, residual, plain.")

    def to_phantom_spec(self) -> PhantomSpec:
        return PhantomSpec(
            image_height=self.height,
            image_width=self.width,
            n_patients=self.patients,
            prevalence=self.prevalence,
            inflammation_delta=self.delta,
            noise_sigma=self.noise,
            aux_coupling=self.aux_coupling,
            seed=self.seed,
            age_min=self.age_min,
            age_max=self.age_max,
            template_side=self.template_side,
        )

    def to_clahe_params(self) -> ClaheParams:
        return ClaheParams(tiles=(self.tiles_rows, self.tiles_cols), clip_limit=self.clip_limit, bins=self.bins)

    def to_augment_policy(self) -> Optional[AugmentPolicy]:
        if self.no_augment:
            return None
        return AugmentPolicy(
            hflip_prob=self.hflip_prob,
            max_rotation_deg=self.max_rotation,
            max_translate_px=self.max_translate,
            intensity_jitter=self.jitter,
            copies_per_image=self.copies,
        )

    def resolved_threshold(self) -> Threshold:
        """Umbral de probabilidad efectivo a partir de 'threshold' o 'threshold_score'."""
        if self.threshold_score is not None:
            return Threshold.from_score(self.threshold_score)
        if self.threshold is not None:
            return Threshold(probability=self.threshold)
        return Threshold()

    def to_train_config(self) -> TrainConfig:
        return TrainConfig(
            epochs=self.epochs,
            lr=self.lr,
            batch_size=self.batch_size,
            weight_decay=self.weight_decay,
            threshold=self.resolved_threshold(),
            augment=self.to_augment_policy(),
            normalize=not self.no_normalize,
            use_age=not self.no_age,
            use_sex=not self.no_sex,
            seed=self.seed,
            precision=self.precision,
        )

    def backbone_specs(self) -> List[BackboneSpec]:
        return [BackboneSpec(kind=kind, input_side=self.patch_size) for kind in self.backbone_kinds()]


def load_run_config(config_path: Optional[Path] = None, **overrides: Any) -> RunConfig:
    """
    Carga la configuración desde un archivo YAML plano. Las opciones con valor None se ignoran.
    """
    explicit = {key: value for key, value in overrides.items() if value is not None}

    if config_path is None:
        return RunConfig(**explicit)

    config_path = Path(config_path)
    if not config_path.is_file():
        raise FileNotFoundError(f"No se encontró el archivo de configuración: {config_path}")

    class FileRunConfig(RunConfig):
        model_config = SettingsConfigDict(yaml_file=str(config_path))

    return FileRunConfig(**explicit)
