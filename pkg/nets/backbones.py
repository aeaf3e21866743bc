"""
Backbones en miniatura: conectividad densa (concatenación), residual (suma) y plana.
Todos empiezan con una convolución 3x3 de stride 2 + batch_norm + relu.
"""

import logging
from typing import Dict, Union

import numpy as np

from autodiff import (
    BatchNormStats,
    Parameter,
    Tensor,
    add,
    avg_pool2d,
    batch_norm,
    concat_channels,
    conv2d,
    global_avg_pool,
    max_pool2d,
    relu,
)
from models import BackboneKind, BackboneSpec
from models.config import DENSE_LAYERS_PER_STAGE, RESIDUAL_BLOCKS_PER_STAGE
from nets.i_backbone import IBackbone


logger = logging.getLogger(__name__)

Stream = Union[np.random.SeedSequence, np.random.Generator, int]


def he_uniform(rng: np.random.Generator, shape: tuple, fan_in: int, dtype) -> np.ndarray:
    """Inicialización He uniforme: U(−√(6/fan_in), √(6/fan_in))."""
    bound = np.sqrt(6.0 / fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(dtype)


class BaseBackbone(IBackbone):
    """Registro de parámetros y estadísticas compartido por todos los backbones."""

    def __init__(self, spec: BackboneSpec, rng: np.random.Generator, dtype=np.float32) -> None:
        self.spec = spec
        self.dtype = np.dtype(dtype)
        self._rng = rng
        self._params: Dict[str, Parameter] = {}
        self._stats: Dict[str, BatchNormStats] = {}

    def named_parameters(self) -> Dict[str, Parameter]:
        return dict(self._params)

    def bn_stats(self) -> Dict[str, BatchNormStats]:
        return dict(self._stats)

    # Registro

    def _add_conv(self, name: str, c_in: int, c_out: int, kernel: int) -> None:
        fan_in = c_in * kernel * kernel
        self._params[f"{name}.weight"] = Parameter(
            he_uniform(self._rng, (c_out, c_in, kernel, kernel), fan_in, self.dtype), f"{name}.weight"
        )
        self._params[f"{name}.bias"] = Parameter(np.zeros(c_out, dtype=self.dtype), f"{name}.bias")

    def _add_bn(self, name: str, channels: int) -> None:
        self._params[f"{name}.gamma"] = Parameter(np.ones(channels, dtype=self.dtype), f"{name}.gamma")
        self._params[f"{name}.beta"] = Parameter(np.zeros(channels, dtype=self.dtype), f"{name}.beta")
        self._stats[name] = BatchNormStats(channels, dtype=self.dtype)

    # Aplicación

    def _conv(self, x: Tensor, name: str, stride: int = 1, padding: int = 1) -> Tensor:
        return conv2d(x, self._params[f"{name}.weight"], self._params[f"{name}.bias"], stride=stride, padding=padding)

    def _bn(self, x: Tensor, name: str, training: bool) -> Tensor:
        return batch_norm(x, self._params[f"{name}.gamma"], self._params[f"{name}.beta"], self._stats[name], training)

    def _build_stem(self) -> None:
        self._add_conv("stem.conv", 1, self.spec.stem_channels, 3)
        self._add_bn("stem.bn", self.spec.stem_channels)

    def _stem(self, x: Tensor, training: bool) -> Tensor:
        return relu(self._bn(self._conv(x, "stem.conv", stride=2, padding=1), "stem.bn", training))


class DenseBackbone(BaseBackbone):
    """Etapas de 4 capas [bn → relu → conv3x3(g)] concatenadas, con avg_pool entre etapas."""

    def __init__(self, spec: BackboneSpec, rng: np.random.Generator, dtype=np.float32) -> None:
        super().__init__(spec, rng, dtype)
        self._build_stem()
        channels = spec.stem_channels
        for stage in range(spec.stages):
            for layer in range(DENSE_LAYERS_PER_STAGE):
                name = f"stage{stage}.layer{layer}"
                self._add_bn(f"{name}.bn", channels)
                self._add_conv(f"{name}.conv", channels, spec.growth, 3)
                channels += spec.growth
        self._add_bn("final.bn", channels)

    def forward(self, x: Tensor, training: bool) -> Tensor:
        out = self._stem(x, training)
        for stage in range(self.spec.stages):
            if stage > 0:
                out = avg_pool2d(out, 2)
            for layer in range(DENSE_LAYERS_PER_STAGE):
                name = f"stage{stage}.layer{layer}"
                new = self._conv(relu(self._bn(out, f"{name}.bn", training)), f"{name}.conv")
                out = concat_channels([out, new])
        return global_avg_pool(relu(self._bn(out, "final.bn", training)))


class ResidualBackbone(BaseBackbone):
    """Etapas de 2 bloques básicos con suma identidad; el ancho se duplica por etapa."""

    def __init__(self, spec: BackboneSpec, rng: np.random.Generator, dtype=np.float32) -> None:
        super().__init__(spec, rng, dtype)
        self._build_stem()
        self._strides: Dict[str, int] = {}
        self._projected: Dict[str, bool] = {}
        c_in = spec.stem_channels
        for stage in range(spec.stages):
            c_out = spec.stage_width(stage)
            for block in range(RESIDUAL_BLOCKS_PER_STAGE):
                name = f"stage{stage}.block{block}"
                stride = 2 if stage > 0 and block == 0 else 1
                self._strides[name] = stride
                self._add_conv(f"{name}.conv1", c_in, c_out, 3)
                self._add_bn(f"{name}.bn1", c_out)
                self._add_conv(f"{name}.conv2", c_out, c_out, 3)
                self._add_bn(f"{name}.bn2", c_out)
                self._projected[name] = stride != 1 or c_in != c_out
                if self._projected[name]:
                    self._add_conv(f"{name}.proj", c_in, c_out, 1)
                c_in = c_out

    def forward(self, x: Tensor, training: bool) -> Tensor:
        out = self._stem(x, training)
        for name, stride in self._strides.items():
            branch = relu(self._bn(self._conv(out, f"{name}.conv1", stride=stride), f"{name}.bn1", training))
            branch = self._bn(self._conv(branch, f"{name}.conv2"), f"{name}.bn2", training)
            skip = self._conv(out, f"{name}.proj", stride=stride, padding=0) if self._projected[name] else out
            out = relu(add(branch, skip))
        return global_avg_pool(out)


class PlainBackbone(BaseBackbone):
    """Convoluciones apiladas conv3x3 → bn → relu con max_pool entre etapas."""

    def __init__(self, spec: BackboneSpec, rng: np.random.Generator, dtype=np.float32) -> None:
        super().__init__(spec, rng, dtype)
        self._build_stem()
        c_in = spec.stem_channels
        for stage in range(spec.stages):
            c_out = spec.stage_width(stage)
            self._add_conv(f"stage{stage}.conv", c_in, c_out, 3)
            self._add_bn(f"stage{stage}.bn", c_out)
            c_in = c_out

    def forward(self, x: Tensor, training: bool) -> Tensor:
        out = self._stem(x, training)
        for stage in range(self.spec.stages):
            out = relu(self._bn(self._conv(out, f"stage{stage}.conv"), f"stage{stage}.bn", training))
            if stage < self.spec.stages - 1:
                out = max_pool2d(out, 2)
        return global_avg_pool(out)


BACKBONES = {
    BackboneKind.DENSE: DenseBackbone,
    BackboneKind.RESIDUAL: ResidualBackbone,
    BackboneKind.PLAIN: PlainBackbone,
}


def build_backbone(spec: BackboneSpec, stream: Stream, dtype=np.float32) -> IBackbone:
    """Construye un backbone con inicialización He uniforme a partir de `stream`."""
    rng = stream if isinstance(stream, np.random.Generator) else np.random.default_rng(stream)
    backbone = BACKBONES[spec.kind](spec, rng, dtype)
    count = sum(p.data.size for p in backbone.parameters())
    logger.debug(f"Backbone '{spec.kind.value}' construido con {count} parámetros (feature_dim={spec.feature_dim}).")
    return backbone
