from abc import ABC, abstractmethod
from pathlib import Path
from typing import List

from models import Manifest


class IDataLoader(ABC):
    """
    Clase abstracta para cargadores de manifiestos de radiografías.
    """

    def __init__(self, columns: List[str]) -> None:
        self.columns = list(columns)

    @abstractmethod
    def load(self, path: Path) -> Manifest:
        """Carga el manifiesto desde la ruta especificada y lo retorna validado."""
        raise NotImplementedError("Este método debe ser implementado por la subclase.")
