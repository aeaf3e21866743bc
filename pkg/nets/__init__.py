"""
Nets package: backbones en miniatura, miembros con fusión auxiliar, ensamble y checkpoints.
"""

from nets.exceptions import NetsError, CheckpointError
from nets.i_backbone import IBackbone
from nets.backbones import (
    BACKBONES,
    BaseBackbone,
    DenseBackbone,
    ResidualBackbone,
    PlainBackbone,
    build_backbone,
    he_uniform,
)
from nets.member import EnsembleMember, build_member, forward_member, stack_patches
from nets.ensemble import (
    EnsembleModel,
    build_ensemble,
    classify,
    ensemble_predict,
    mean_probability,
    member_names,
    resolve_threshold,
)
from nets.checkpoint import load_checkpoint, read_checkpoint, save_checkpoint

__all__ = [
    # Exceptions
    "NetsError",
    "CheckpointError",
    # Backbones
    "IBackbone",
    "BACKBONES",
    "BaseBackbone",
    "DenseBackbone",
    "ResidualBackbone",
    "PlainBackbone",
    "build_backbone",
    "he_uniform",
    # Members
    "EnsembleMember",
    "build_member",
    "forward_member",
    "stack_patches",
    # Ensemble
    "EnsembleModel",
    "build_ensemble",
    "classify",
    "ensemble_predict",
    "mean_probability",
    "member_names",
    "resolve_threshold",
    # Checkpoints
    "save_checkpoint",
    "load_checkpoint",
    "read_checkpoint",
]
