from abc import ABC, abstractmethod
from typing import Dict, List

from autodiff import BatchNormStats, Parameter, Tensor
from models import BackboneSpec


class IBackbone(ABC):
    """
    Interfaz para los backbones convolucionales: imagen N x 1 x P x P -> características N x feature_dim.
    """

    spec: BackboneSpec

    @abstractmethod
    def forward(self, x: Tensor, training: bool) -> Tensor:
        """Calcula las características tras el global average pool."""
        raise NotImplementedError("Este método debe ser implementado por la subclase.")

    @abstractmethod
    def named_parameters(self) -> Dict[str, Parameter]:
        """Parámetros entrenables por nombre, en orden de construcción."""
        raise NotImplementedError("Este método debe ser implementado por la subclase.")

    @abstractmethod
    def bn_stats(self) -> Dict[str, BatchNormStats]:
        """Estadísticas acumuladas de cada batch_norm por nombre."""
        raise NotImplementedError("Este método debe ser implementado por la subclase.")

    def parameters(self) -> List[Parameter]:
        return list(self.named_parameters().values())

    @property
    def feature_dim(self) -> int:
        return self.spec.feature_dim
