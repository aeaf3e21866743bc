import logging
from typing import Iterator, Optional

import numpy as np

from data.i_batch_source import Batch, IBatchSource
from models import InvalidInputError


logger = logging.getLogger(__name__)


class ArrayBatchSource(IBatchSource):
    """
    Fuente de mini-lotes en memoria. Con `seed` definido baraja cada época con el flujo
    SeedSequence([seed, fold, epoch]); sin él recorre los ejemplos en orden.
    """

    def __init__(
            self,
            inputs: np.ndarray,
            aux: np.ndarray,
            labels: np.ndarray,
            batch_size: int,
            seed: Optional[int] = None,
            fold: int = 0,
    ) -> None:
        if inputs.ndim != 4 or inputs.shape[1] != 1:
            raise InvalidInputError("ArrayBatchSource", f"se esperaban entradas N x 1 x P x P, recibido {inputs.shape}")
        if not len(inputs) == len(aux) == len(labels):
            raise InvalidInputError("ArrayBatchSource", "entradas, auxiliares y etiquetas deben tener la misma longitud")
        if batch_size < 2:
            raise InvalidInputError("ArrayBatchSource", "batch_size debe ser >= 2")

        self.inputs = inputs
        self.aux = aux
        self.labels = labels.astype(np.int64)
        self.batch_size = batch_size
        self.seed = seed
        self.fold = fold

    def __len__(self) -> int:
        return int(len(self.labels))

    def order(self, epoch: int) -> np.ndarray:
        """Orden de los ejemplos en una época."""
        if self.seed is None:
            return np.arange(len(self))
        rng = np.random.default_rng(np.random.SeedSequence([self.seed, self.fold, epoch]))
        return rng.permutation(len(self))

    def batches(self, epoch: int = 0) -> Iterator[Batch]:
        """Un último lote de un solo ejemplo se une al anterior: batch_norm necesita al menos dos."""
        order = self.order(epoch)
        starts = list(range(0, len(order), self.batch_size))
        if len(starts) > 1 and len(order) - starts[-1] == 1:
            starts.pop()
        for i, start in enumerate(starts):
            stop = starts[i + 1] if i + 1 < len(starts) else len(order)
            idx = order[start:stop]
            yield self.inputs[idx], self.aux[idx], self.labels[idx]
