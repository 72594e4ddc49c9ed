"""Hook a classifier's feature layer and write the interchange NPY pair.

Features are the hooked tensor flattened per sample, stored as '<f4'; labels
are the model's own predictions (argmax of the final output, first index on
ties), stored as '<i8'. Ground-truth labels never enter the pair: the point
is to capture the partitioning the model actually learned.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from torch import nn

from .npyio import write_npy


class ExtractionError(ValueError):
    """Configuration or consistency problem detected before files are written."""


@dataclass(frozen=True)
class ExtractionConfig:
    model_source: str
    dataset_source: str
    output_prefix: str
    layer_selector: str = "auto"
    tap: str = "output"
    batch_size: int = 64
    device: str = "cpu"

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ExtractionError("batch_size must be >= 1")
        if self.tap not in ("output", "input"):
            raise ExtractionError(f"tap must be 'output' or 'input', got {self.tap!r}")


def load_inputs(source) -> np.ndarray:
    """Model inputs from an .npy array, or a directory holding inputs.npy."""
    path = Path(source)
    if path.is_dir():
        path = path / "inputs.npy"
    inputs = np.load(path)
    if inputs.ndim < 2 or inputs.shape[0] < 1:
        raise ExtractionError(f"{path}: inputs must be a non-empty (N, ...) array")
    return np.asarray(inputs, dtype=np.float32)


def resolve_feature_module(model: nn.Module, selector: str, tap: str) -> tuple[str, nn.Module, str]:
    """Pick the module to hook and which side of it to record.

    'auto' records the input of the last Linear module, the tensor feeding
    the classification head. A named selector records that module's output
    (or input, with tap='input').
    """
    if selector == "auto":
        linears = [(name, m) for name, m in model.named_modules() if isinstance(m, nn.Linear)]
        if not linears:
            raise ExtractionError("no Linear layer found for 'auto'; name a layer explicitly")
        name, module = linears[-1]
        return name, module, "input"
    named = dict(model.named_modules())
    if selector not in named:
        available = ", ".join(sorted(n for n in named if n)) or "<none>"
        raise ExtractionError(f"layer {selector!r} not found; available: {available}")
    return selector, named[selector], tap


def run_extraction(
    model: nn.Module, inputs: np.ndarray, config: ExtractionConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Run inference and return (features, predicted_labels) without writing."""
    device = torch.device(config.device)
    model = model.to(device)
    model.eval()
    _, module, tap = resolve_feature_module(model, config.layer_selector, config.tap)

    captured: list[torch.Tensor] = []

    def hook(_module, hook_inputs, output):
        captured.append(hook_inputs[0] if tap == "input" else output)

    handle = module.register_forward_hook(hook)
    feature_batches: list[np.ndarray] = []
    label_batches: list[np.ndarray] = []
    width = None
    try:
        with torch.no_grad():
            for start in range(0, inputs.shape[0], config.batch_size):
                batch = torch.from_numpy(inputs[start : start + config.batch_size]).to(device)
                captured.clear()
                logits = model(batch)
                if len(captured) != 1:
                    raise ExtractionError(
                        f"layer resolved to {len(captured)} tensor captures per forward pass, need exactly 1"
                    )
                features = captured[0].detach().reshape(batch.shape[0], -1)
                if width is None:
                    width = features.shape[1]
                elif features.shape[1] != width:
                    raise ExtractionError(
                        f"feature width changed across batches: {width} then {features.shape[1]}"
                    )
                flat_logits = logits.detach().reshape(batch.shape[0], -1).cpu().numpy()
                feature_batches.append(features.to(torch.float32).cpu().numpy())
                label_batches.append(np.argmax(flat_logits, axis=1).astype(np.int64))
    finally:
        handle.remove()

    features = np.concatenate(feature_batches, axis=0)
    labels = np.concatenate(label_batches, axis=0)
    if not np.isfinite(features).all():
        raise ExtractionError("model produced non-finite feature values")
    return features, labels


def extract(config: ExtractionConfig) -> tuple[str, str]:
    """Full extraction: load model and data, infer, write the NPY pair."""
    from .models import load_model

    model = load_model(config.model_source)
    inputs = load_inputs(config.dataset_source)
    features, labels = run_extraction(model, inputs, config)
    features_path = f"{config.output_prefix}.features.npy"
    labels_path = f"{config.output_prefix}.labels.npy"
    write_npy(features_path, features.astype("<f4"))
    write_npy(labels_path, labels.astype("<i8"))
    return features_path, labels_path
