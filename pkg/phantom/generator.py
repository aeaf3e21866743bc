"""
Generador de radiografías sintéticas de pelvis con una firma de inflamación sutil y localizada.

Cada paciente se renderiza como una sola imagen con dos articulaciones simétricas respecto a la
línea media. Cada lado se dibuja en orientación canónica (izquierda) sobre media imagen y el lado
derecho se refleja en su sitio, de modo que `split_midline` recupera la orientación canónica.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.ndimage import gaussian_filter
from scipy.special import expit, logit

from data import write_manifest, write_pgm
from models import (
    InvalidInputError,
    Label,
    Manifest,
    ManifestRow,
    PhantomSpec,
    Radiograph,
    Sex,
    Side,
)


logger = logging.getLogger(__name__)

BACKGROUND = 0.35
BONE = 0.60
CLEFT = 0.15
SMOOTHING_SIGMA = 1.0
AGE_TILT = 4.0


class JointLayout(BaseModel):
    """Desplazamiento entero de la articulación respecto a su posición nominal."""
    model_config = ConfigDict(frozen=True)

    row_shift: int = 0
    col_shift: int = 0


def patient_id_for(index: int) -> str:
    return f"P{index:04d}"


def patient_stream(spec: PhantomSpec, patient_index: int) -> np.random.SeedSequence:
    """Flujo del paciente: disposición, brillo, ruido, edad y sexo."""
    return np.random.SeedSequence([spec.seed, patient_index])


def joint_stream(stream: np.random.SeedSequence, side: Side) -> np.random.SeedSequence:
    """Flujo de una articulación derivado del flujo del paciente; sólo decide la etiqueta."""
    return np.random.SeedSequence(stream.entropy, spawn_key=tuple(stream.spawn_key) + (side.code,))


def _geometry(spec: PhantomSpec, layout: JointLayout) -> Dict[str, int]:
    height, width = spec.image_height, spec.image_width
    cleft_width = max(1, width // 32)
    band_width = max(1, width // 16)
    cleft_start = 3 * width // 8 + layout.col_shift - cleft_width // 2
    top = height // 2 + layout.row_shift - height // 4
    return {
        "cleft_start": cleft_start,
        "cleft_width": cleft_width,
        "band_width": band_width,
        "top": top,
        "bottom": top + height // 2,
        "center_row": height // 2 + layout.row_shift,
    }


def band_mask(spec: PhantomSpec, layout: JointLayout) -> np.ndarray:
    """
    Máscara periarticular en orientación canónica: elipse de semiejes (H/6, W/40) centrada en la
    banda ósea lateral y recortada a ella.
    """
    height, half_width = spec.image_height, spec.image_width // 2
    geo = _geometry(spec, layout)
    band_lo = geo["cleft_start"] - geo["band_width"]
    band_hi = geo["cleft_start"]

    rows = np.arange(height)[:, None] + 0.5
    cols = np.arange(half_width)[None, :] + 0.5
    center_row = geo["center_row"]
    center_col = (band_lo + band_hi) / 2.0
    semi_rows = spec.image_height / 6.0
    semi_cols = max(spec.image_width / 40.0, 0.5)

    ellipse = ((rows - center_row) / semi_rows) ** 2 + ((cols - center_col) / semi_cols) ** 2 <= 1.0
    in_band = (cols >= band_lo) & (cols < band_hi) & (rows >= geo["top"]) & (rows < geo["bottom"])
    return ellipse & in_band


def render_half(spec: PhantomSpec, layout: JointLayout, inflamed: bool) -> np.ndarray:
    """Renderiza una articulación sin ruido en orientación canónica sobre media imagen."""
    height, half_width = spec.image_height, spec.image_width // 2
    geo = _geometry(spec, layout)
    c0, cw, bw = geo["cleft_start"], geo["cleft_width"], geo["band_width"]
    rows = slice(geo["top"], geo["bottom"])

    half = np.full((height, half_width), BACKGROUND, dtype=np.float64)
    half[rows, c0 - bw:c0] = BONE
    half[rows, c0 + cw:c0 + cw + bw] = BONE
    half[rows, c0:c0 + cw] = CLEFT
    half = gaussian_filter(half, sigma=SMOOTHING_SIGMA, mode="nearest")

    if inflamed:
        half = half + spec.inflammation_delta * band_mask(spec, layout)
    return half


def compose_pelvis(spec: PhantomSpec, left_half: np.ndarray, right_half: np.ndarray) -> np.ndarray:
    """Coloca las dos mitades canónicas; la derecha se refleja. Con W impar la columna central es fondo."""
    height, width = spec.image_height, spec.image_width
    half_width = width // 2
    image = np.full((height, width), BACKGROUND, dtype=np.float64)
    image[:, :half_width] = left_half
    image[:, width - half_width:] = right_half[:, ::-1]
    return image


def label_probability(spec: PhantomSpec, age_years: int) -> float:
    """Probabilidad de inflamación inclinada con la edad cuando aux_coupling > 0."""
    if spec.prevalence in (0.0, 1.0) or spec.aux_coupling == 0.0 or spec.age_max == spec.age_min:
        return spec.prevalence
    mid = (spec.age_min + spec.age_max) / 2.0
    tilt = AGE_TILT * spec.aux_coupling * (age_years - mid) / (spec.age_max - spec.age_min)
    return float(expit(logit(spec.prevalence) + tilt))


def make_template(spec: PhantomSpec) -> np.ndarray:
    """Recorte sin ruido de la articulación nominal, de lado `template_side`, en orientación canónica."""
    half = render_half(spec, JointLayout(), inflamed=False)
    geo = _geometry(spec, JointLayout())
    side = spec.template_side
    center_col = geo["cleft_start"] + geo["cleft_width"] // 2
    top = int(np.clip(geo["center_row"] - side // 2, 0, spec.image_height - side))
    left = int(np.clip(center_col - side // 2, 0, half.shape[1] - side))
    return half[top:top + side, left:left + side].copy()


def generate_patient(
        spec: PhantomSpec,
        patient_index: int,
        stream: Optional[np.random.SeedSequence] = None,
) -> Tuple[Radiograph, Radiograph]:
    """
    Genera las dos articulaciones de un paciente. Ambos registros comparten la radiografía
    de la pelvis y difieren en lado y etiqueta.
    """
    if not 0 <= patient_index < spec.n_patients:
        raise InvalidInputError("generate_patient", f"patient_index {patient_index} fuera de [0, {spec.n_patients})")

    stream = stream if stream is not None else patient_stream(spec, patient_index)
    rng = np.random.default_rng(stream)

    age = int(rng.integers(spec.age_min, spec.age_max + 1))
    sex = Sex.FEMALE if rng.random() < 0.5 else Sex.MALE

    row_jitter = spec.image_height // 16
    col_jitter = spec.image_width // 32
    layouts: Dict[Side, JointLayout] = {}
    for side in (Side.LEFT, Side.RIGHT):
        layouts[side] = JointLayout(
            row_shift=int(rng.integers(-row_jitter, row_jitter + 1)),
            col_shift=int(rng.integers(-col_jitter, col_jitter + 1)),
        )

    p = label_probability(spec, age)
    labels: Dict[Side, Label] = {}
    for side in (Side.LEFT, Side.RIGHT):
        joint_rng = np.random.default_rng(joint_stream(stream, side))
        labels[side] = Label.ACTIVE_INFLAMMATION if joint_rng.random() < p else Label.HEALTHY

    image = compose_pelvis(
        spec,
        render_half(spec, layouts[Side.LEFT], labels[Side.LEFT] == Label.ACTIVE_INFLAMMATION),
        render_half(spec, layouts[Side.RIGHT], labels[Side.RIGHT] == Label.ACTIVE_INFLAMMATION),
    )

    if spec.noise_sigma > 0.0:
        brightness = rng.normal(0.0, spec.noise_sigma)
        noise = rng.normal(0.0, spec.noise_sigma, size=image.shape)
        image = image + brightness + noise
    image = np.clip(image, 0.0, 1.0)

    pid = patient_id_for(patient_index)
    left, right = (
        Radiograph(pixels=image, patient_id=pid, side=side, age_years=age, sex=sex, label=labels[side])
        for side in (Side.LEFT, Side.RIGHT)
    )
    return left, right


def generate_dataset(
        spec: PhantomSpec,
        out_dir: Optional[Union[str, Path]] = None,
) -> Tuple[List[Radiograph], Manifest]:
    """
    Genera 2·n_patients registros y su manifiesto. Con `out_dir` escribe `images/`, `manifest.csv`
    y `template.pgm`.
    """
    records: List[Radiograph] = []
    rows: List[ManifestRow] = []
    out_path = Path(out_dir) if out_dir is not None else None

    for index in range(spec.n_patients):
        for record in generate_patient(spec, index):
            image_path = f"images/{record.patient_id}_{record.side.short}.pgm"
            if out_path is not None:
                write_pgm(out_path / image_path, record.pixels)
            records.append(record)
            rows.append(ManifestRow(
                image_path=image_path,
                patient_id=record.patient_id,
                side=record.side,
                age_years=record.age_years,
                sex=record.sex,
                label=record.label,
            ))

    manifest = Manifest(rows=rows)
    inflamed = int(manifest.labels().sum())
    logger.info(
        f"Dataset sintético generado: {spec.n_patients} pacientes, {len(records)} articulaciones, "
        f"{inflamed} inflamadas ({inflamed / len(records):.3f} vs prevalencia {spec.prevalence})."
    )

    if out_path is not None:
        write_manifest(manifest, out_path / "manifest.csv")
        write_pgm(out_path / "template.pgm", make_template(spec))
        logger.info(f"Imágenes, manifiesto y plantilla escritos en {out_path}.")

    return records, manifest
