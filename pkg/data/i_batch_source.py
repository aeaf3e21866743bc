from abc import ABC, abstractmethod
from typing import Iterator, Tuple

import numpy as np


Batch = Tuple[np.ndarray, np.ndarray, np.ndarray]


class IBatchSource(ABC):
    """
    Clase abstracta para fuentes de mini-lotes (entradas, variables auxiliares, etiquetas).
    """

    @abstractmethod
    def __len__(self) -> int:
        """Número de ejemplos disponibles."""
        raise NotImplementedError("Este método debe ser implementado por la subclase.")

    @abstractmethod
    def batches(self, epoch: int) -> Iterator[Batch]:
        """Itera los mini-lotes de una época."""
        raise NotImplementedError("Este método debe ser implementado por la subclase.")
