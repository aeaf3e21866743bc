"""
Códec para imágenes PGM binarias de 16 bits (P5, maxval 65535, big-endian).
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np

from data.exceptions import PgmFormatError


logger = logging.getLogger(__name__)

MAXVAL = 65535


def write_pgm(path: Union[str, Path], pixels: np.ndarray) -> None:
    """Escribe una rejilla con intensidades en [0, 1] como PGM de 16 bits."""
    if pixels.ndim != 2:
        raise ValueError(f"Se esperaba una rejilla 2-D, recibido {pixels.shape}.")
    if pixels.size and (np.nanmin(pixels) < 0.0 or np.nanmax(pixels) > 1.0 or np.isnan(pixels).any()):
        raise ValueError("Las intensidades deben estar en [0, 1] para escribir un PGM.")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    height, width = pixels.shape
    samples = np.round(pixels * MAXVAL).astype(">u2")
    header = f"P5\n{width} {height}\n{MAXVAL}\n".encode("ascii")
    with open(path, "wb") as handle:
        handle.write(header)
        handle.write(samples.tobytes())
    logger.debug(f"PGM escrito en {path} ({height}x{width}).")


def _read_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Lee un token de cabecera saltando espacios y comentarios."""
    while pos < len(data):
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif data[pos:pos + 1].isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < len(data) and not data[pos:pos + 1].isspace():
        pos += 1
    return data[start:pos], pos


def read_pgm(path: Union[str, Path]) -> np.ndarray:
    """Lee un PGM binario (8 o 16 bits) y devuelve intensidades float64 en [0, 1]."""
    path = Path(path)
    data = path.read_bytes()

    magic, pos = _read_token(data, 0)
    if magic != b"P5":
        raise PgmFormatError(str(path), f"número mágico '{magic.decode(errors='replace')}' no soportado")

    try:
        width_tok, pos = _read_token(data, pos)
        height_tok, pos = _read_token(data, pos)
        maxval_tok, pos = _read_token(data, pos)
        width, height, maxval = int(width_tok), int(height_tok), int(maxval_tok)
    except ValueError:
        raise PgmFormatError(str(path), "cabecera incompleta o no numérica")

    if width < 1 or height < 1 or not 0 < maxval <= MAXVAL:
        raise PgmFormatError(str(path), f"dimensiones {width}x{height} o maxval {maxval} fuera de rango")

    # Un único byte de espacio separa la cabecera de las muestras
    pos += 1
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    expected = width * height * dtype.itemsize
    payload = data[pos:pos + expected]
    if len(payload) != expected:
        raise PgmFormatError(str(path), f"se esperaban {expected} bytes de muestras, hay {len(payload)}")

    samples = np.frombuffer(payload, dtype=dtype).reshape(height, width)
    return samples.astype(np.float64) / maxval
