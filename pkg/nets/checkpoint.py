"""
Codec binario de checkpoints del ensamble.

Estructura (little-endian):
    b"JNT1" | u32 versión | 3 bloques [u32 longitud + JSON UTF-8] | payload float32

Los bloques JSON son, en orden: topología (especificaciones de los miembros y máscaras
auxiliares), tabla de parámetros (nombre, forma, offset en elementos, tipo) y procedencia
(semilla, hiperparámetros, fold, versión de la herramienta).
"""

import json
import logging
import struct
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from models import BackboneSpec
from models.config import TOOL_NAME, TOOL_VERSION
from nets.ensemble import EnsembleModel
from nets.exceptions import CheckpointError
from nets.member import EnsembleMember, build_member


logger = logging.getLogger(__name__)

MAGIC = b"JNT1"
VERSION = 1
PAYLOAD_DTYPE = np.dtype("<f4")

KIND_PARAM = "param"
KIND_RUNNING_MEAN = "running_mean"
KIND_RUNNING_VAR = "running_var"


def _member_arrays(member: EnsembleMember) -> List[Tuple[str, str, np.ndarray]]:
    """(nombre completo, tipo, array) de un miembro en orden estable."""
    arrays = [
        (f"{member.name}/{name}", KIND_PARAM, param.data)
        for name, param in member.named_parameters().items()
    ]
    for name, stats in member.bn_stats().items():
        arrays.append((f"{member.name}/{name}.running_mean", KIND_RUNNING_MEAN, stats.running_mean))
        arrays.append((f"{member.name}/{name}.running_var", KIND_RUNNING_VAR, stats.running_var))
    return arrays


def topology(model: EnsembleModel) -> Dict[str, Any]:
    return {
        "aggregation": "mean_probability",
        "members": [
            {
                "name": member.name,
                "backbone": member.spec.descriptor(),
                "use_age": member.use_age,
                "use_sex": member.use_sex,
            }
            for member in model.members
        ],
    }


def save_checkpoint(model: EnsembleModel, path: Path, provenance: Optional[Dict[str, Any]] = None) -> Path:
    """Escribe el ensamble (parámetros y estadísticas de batch_norm) en `path`."""
    path = Path(path)
    table = []
    chunks = []
    offset = 0
    for member in model.members:
        for name, kind, array in _member_arrays(member):
            table.append({"name": name, "shape": list(array.shape), "offset": offset, "kind": kind})
            chunks.append(np.asarray(array, dtype=PAYLOAD_DTYPE).ravel())
            offset += array.size

    info = {"tool": f"{TOOL_NAME} {TOOL_VERSION}"}
    info.update(provenance or {})
    blocks = [topology(model), table, info]

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<I", VERSION))
            for block in blocks:
                raw = json.dumps(block, sort_keys=True).encode("utf-8")
                fh.write(struct.pack("<I", len(raw)))
                fh.write(raw)
            payload = np.concatenate(chunks) if chunks else np.zeros(0, dtype=PAYLOAD_DTYPE)
            fh.write(payload.astype(PAYLOAD_DTYPE).tobytes())
    except OSError as e:
        raise CheckpointError(str(path), f"no se pudo escribir: {e}")

    logger.info(f"Checkpoint guardado en {path} ({offset} valores, {len(model.members)} miembros).")
    return path


def _read_block(raw: bytes, pos: int, path: Path) -> Tuple[Any, int]:
    if pos + 4 > len(raw):
        raise CheckpointError(str(path), "archivo truncado en la cabecera")
    (length,) = struct.unpack_from("<I", raw, pos)
    pos += 4
    if pos + length > len(raw):
        raise CheckpointError(str(path), "archivo truncado en un bloque JSON")
    try:
        block = json.loads(raw[pos:pos + length].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointError(str(path), f"bloque JSON ilegible: {e}")
    return block, pos + length


def read_checkpoint(path: Path) -> Tuple[Dict[str, Any], List[Dict[str, Any]], Dict[str, Any], np.ndarray]:
    """Devuelve (topología, tabla de parámetros, procedencia, payload)."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise CheckpointError(str(path), f"no se pudo leer: {e}")

    if raw[:4] != MAGIC:
        raise CheckpointError(str(path), "firma JNT1 ausente")
    if len(raw) < 8:
        raise CheckpointError(str(path), "archivo truncado en la cabecera")
    (version,) = struct.unpack_from("<I", raw, 4)
    if version != VERSION:
        raise CheckpointError(str(path), f"versión {version} no soportada")

    pos = 8
    topo, pos = _read_block(raw, pos, path)
    table, pos = _read_block(raw, pos, path)
    provenance, pos = _read_block(raw, pos, path)

    body = raw[pos:]
    if len(body) % PAYLOAD_DTYPE.itemsize:
        raise CheckpointError(str(path), "payload con longitud no múltiplo de 4 bytes")
    payload = np.frombuffer(body, dtype=PAYLOAD_DTYPE)
    return topo, table, provenance, payload


def load_checkpoint(path: Path, dtype=np.float32) -> Tuple[EnsembleModel, Dict[str, Any]]:
    """Reconstruye el ensamble guardado. Devuelve (modelo, procedencia)."""
    path = Path(path)
    topo, table, provenance, payload = read_checkpoint(path)

    try:
        members = [
            build_member(
                entry["name"],
                BackboneSpec(**entry["backbone"]),
                np.random.SeedSequence(0),
                dtype=dtype,
                use_age=bool(entry["use_age"]),
                use_sex=bool(entry["use_sex"]),
            )
            for entry in topo["members"]
        ]
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(str(path), f"topología inválida: {e}")

    targets: Dict[str, Tuple[str, np.ndarray]] = {}
    for member in members:
        for name, kind, array in _member_arrays(member):
            targets[name] = (kind, array)

    seen = set()
    for entry in table:
        name = entry.get("name")
        if name not in targets:
            raise CheckpointError(str(path), f"parámetro desconocido '{name}'")
        kind, target = targets[name]
        shape = tuple(entry["shape"])
        if shape != target.shape or entry.get("kind") != kind:
            raise CheckpointError(str(path), f"forma o tipo inconsistente en '{name}': {shape}")
        start = int(entry["offset"])
        stop = start + int(np.prod(shape, dtype=np.int64))
        if start < 0 or stop > payload.size:
            raise CheckpointError(str(path), f"'{name}' fuera del payload")
        target[...] = payload[start:stop].reshape(shape)
        seen.add(name)

    missing = sorted(set(targets) - seen)
    if missing:
        raise CheckpointError(str(path), f"faltan parámetros: {missing[:5]}")

    logger.info(f"Checkpoint cargado desde {path} ({len(members)} miembros).")
    return EnsembleModel(members), provenance
