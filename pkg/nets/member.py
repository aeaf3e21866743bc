import logging
from typing import Dict, List

import numpy as np

from autodiff import BatchNormStats, Parameter, Tensor, concat_channels, linear, softmax
from models import AuxFeatures, BackboneSpec, InvalidInputError, RoiPatch
from nets.backbones import Stream, build_backbone, he_uniform
from nets.i_backbone import IBackbone


logger = logging.getLogger(__name__)

AUX_DIM = 3
NUM_CLASSES = 2
INFERENCE_BATCH = 64


class EnsembleMember:
    """
    Backbone + cabeza lineal. Las características del backbone se concatenan con
    (edad_norm, mujer, hombre) antes de la capa de salida; las variables ablacionadas se anulan.
    """

    def __init__(
            self,
            name: str,
            backbone: IBackbone,
            rng: np.random.Generator,
            use_age: bool = True,
            use_sex: bool = True,
    ) -> None:
        self.name = name
        self.backbone = backbone
        self.use_age = use_age
        self.use_sex = use_sex
        dtype = backbone.parameters()[0].dtype
        fan_in = backbone.feature_dim + AUX_DIM
        self.head_weight = Parameter(he_uniform(rng, (NUM_CLASSES, fan_in), fan_in, dtype), "head.weight")
        self.head_bias = Parameter(np.zeros(NUM_CLASSES, dtype=dtype), "head.bias")

    @property
    def spec(self) -> BackboneSpec:
        return self.backbone.spec

    @property
    def input_side(self) -> int:
        return self.backbone.spec.input_side

    @property
    def dtype(self) -> np.dtype:
        return self.head_weight.dtype

    @property
    def aux_mask(self) -> np.ndarray:
        return np.array([self.use_age, self.use_sex, self.use_sex], dtype=np.float64)

    def named_parameters(self) -> Dict[str, Parameter]:
        params = dict(self.backbone.named_parameters())
        params["head.weight"] = self.head_weight
        params["head.bias"] = self.head_bias
        return params

    def parameters(self) -> List[Parameter]:
        return list(self.named_parameters().values())

    def bn_stats(self) -> Dict[str, BatchNormStats]:
        return self.backbone.bn_stats()

    def logits(self, inputs: np.ndarray, aux: np.ndarray, training: bool) -> Tensor:
        """inputs: N x 1 x P x P; aux: N x 3 -> logits N x 2."""
        if inputs.ndim != 4 or inputs.shape[1:] != (1, self.input_side, self.input_side):
            raise InvalidInputError(
                "forward_member",
                f"se esperaban entradas N x 1 x {self.input_side} x {self.input_side}, recibido {inputs.shape}",
            )
        if aux.shape != (inputs.shape[0], AUX_DIM):
            raise InvalidInputError("forward_member", f"se esperaban auxiliares N x {AUX_DIM}, recibido {aux.shape}")
        features = self.backbone.forward(Tensor(inputs.astype(self.dtype)), training)
        fused = concat_channels([features, Tensor((aux * self.aux_mask).astype(self.dtype))])
        return linear(fused, self.head_weight, self.head_bias)

    def predict_proba(self, inputs: np.ndarray, aux: np.ndarray, batch_size: int = INFERENCE_BATCH) -> np.ndarray:
        """Probabilidad de inflamación activa por caso, en modo evaluación."""
        out = np.empty(inputs.shape[0], dtype=np.float64)
        for start in range(0, inputs.shape[0], batch_size):
            stop = start + batch_size
            logits = self.logits(inputs[start:stop], aux[start:stop], training=False)
            out[start:stop] = softmax(logits.data.astype(np.float64))[:, 1]
        return out


def stack_patches(patches: List[RoiPatch]) -> np.ndarray:
    """Apila parches normalizados como entradas N x 1 x P x P."""
    for patch in patches:
        if not patch.normalized:
            raise InvalidInputError(
                "forward_member",
                f"el parche ({patch.patient_id}, {patch.side.value}) no está normalizado",
            )
    return np.stack([patch.pixels for patch in patches])[:, None, :, :]


def forward_member(member: EnsembleMember, patch: RoiPatch, aux: AuxFeatures) -> float:
    """Probabilidad de inflamación activa de un parche según un miembro."""
    if patch.side_length != member.input_side:
        raise InvalidInputError(
            "forward_member",
            f"el parche mide {patch.side_length}, el miembro espera {member.input_side}",
        )
    inputs = stack_patches([patch])
    return float(member.predict_proba(inputs, aux.as_array()[None, :])[0])


def build_member(
        name: str,
        spec: BackboneSpec,
        stream: Stream,
        dtype=np.float32,
        use_age: bool = True,
        use_sex: bool = True,
) -> EnsembleMember:
    """Construye backbone y cabeza a partir de un único flujo aleatorio."""
    rng = stream if isinstance(stream, np.random.Generator) else np.random.default_rng(stream)
    backbone = build_backbone(spec, rng, dtype)
    return EnsembleMember(name, backbone, rng, use_age=use_age, use_sex=use_sex)
