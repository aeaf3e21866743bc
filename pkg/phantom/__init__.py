"""
Phantom package: synthetic pelvis radiographs with a controllable inflammation signature.
"""

from phantom.generator import (
    JointLayout,
    band_mask,
    compose_pelvis,
    generate_dataset,
    generate_patient,
    joint_stream,
    label_probability,
    make_template,
    patient_id_for,
    patient_stream,
    render_half,
)

__all__ = [
    "JointLayout",
    "band_mask",
    "compose_pelvis",
    "generate_dataset",
    "generate_patient",
    "joint_stream",
    "label_probability",
    "make_template",
    "patient_id_for",
    "patient_stream",
    "render_half",
]
