"""
Image processing package: midline split, template-matching ROI extraction, CLAHE,
intensity normalization and augmentation.
"""

from imgproc.exceptions import ImgProcError, NoMatchError
from imgproc.geometry import split_midline, extract_roi
from imgproc.template import ncc_map, match_template_ncc
from imgproc.clahe import clahe, equalize, bin_index
from imgproc.intensity import normalize_intensity, rescale_unit
from imgproc.augment import augment, hflip, copy_stream
from imgproc.pipeline import Preprocessor, PreprocessResult

__all__ = [
    # Exceptions
    "ImgProcError",
    "NoMatchError",
    # Geometry
    "split_midline",
    "extract_roi",
    # Template matching
    "ncc_map",
    "match_template_ncc",
    # Contrast
    "clahe",
    "equalize",
    "bin_index",
    "normalize_intensity",
    "rescale_unit",
    # Augmentation
    "augment",
    "hflip",
    "copy_stream",
    # Pipeline
    "Preprocessor",
    "PreprocessResult",
]
