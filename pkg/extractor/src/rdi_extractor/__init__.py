"""Penultimate-layer feature extraction for the rdi metric engine."""

from .extract import ExtractionConfig, ExtractionError, extract, load_inputs, resolve_feature_module, run_extraction
from .models import identity_classifier, load_model, mlp_classifier
from .npyio import write_npy

__version__ = "0.1.0"

__all__ = [
    "ExtractionConfig",
    "ExtractionError",
    "extract",
    "identity_classifier",
    "load_inputs",
    "load_model",
    "mlp_classifier",
    "resolve_feature_module",
    "run_extraction",
    "write_npy",
]
