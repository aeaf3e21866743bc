"""
Data package for the joint radiograph pipeline.

This package contains the PGM codec, the manifest loaders and the patch store used by training.
"""

# Exceptions
from data.exceptions import (
    DataError,
    PgmFormatError,
    ManifestParseError,
    DuplicateJointError,
)

# Image codec
from data.pgm import read_pgm, write_pgm

# Batch sources
from data.i_batch_source import IBatchSource, Batch
from data.batch_source import ArrayBatchSource

# Patch store
from data.patch_store import (
    PATCH_INDEX_FILE,
    PatchStore,
    save_patch_stores,
    load_patch_store,
)

# Data Loaders (from subpackage)
from data.loaders import (
    IDataLoader,
    MANIFEST_COLUMNS,
    ManifestCSVLoader,
    load_manifest,
    write_manifest,
    resolve_image_path,
)

__all__ = [
    # Exceptions
    "DataError",
    "PgmFormatError",
    "ManifestParseError",
    "DuplicateJointError",
    # Image codec
    "read_pgm",
    "write_pgm",
    # Batch sources
    "IBatchSource",
    "Batch",
    "ArrayBatchSource",
    # Patch store
    "PATCH_INDEX_FILE",
    "PatchStore",
    "save_patch_stores",
    "load_patch_store",
    # Data Loaders
    "IDataLoader",
    "MANIFEST_COLUMNS",
    "ManifestCSVLoader",
    "load_manifest",
    "write_manifest",
    "resolve_image_path",
]
