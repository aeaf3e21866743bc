"""
Data loaders subpackage.

This subpackage contains the manifest loaders and writers.
"""

from data.loaders.i_data_loader import IDataLoader
from data.loaders.manifest_csv_loader import (
    MANIFEST_COLUMNS,
    ManifestCSVLoader,
    load_manifest,
    write_manifest,
    resolve_image_path,
)

__all__ = [
    "IDataLoader",
    "MANIFEST_COLUMNS",
    "ManifestCSVLoader",
    "load_manifest",
    "write_manifest",
    "resolve_image_path",
]
