"""Model loading: builtin toy specs, pickled checkpoints, TorchScript."""

from __future__ import annotations

import torch
from torch import nn

from .extract import ExtractionError


def identity_classifier(dim: int) -> nn.Module:
    """Single linear layer with identity weights: logits equal the input."""
    layer = nn.Linear(dim, dim, bias=True)
    with torch.no_grad():
        layer.weight.copy_(torch.eye(dim))
        layer.bias.zero_()
    return nn.Sequential(layer)


def mlp_classifier(in_dim: int, hidden: int, out_dim: int, seed: int = 0) -> nn.Module:
    """Two-layer MLP with seed-determined weights."""
    generator = torch.Generator().manual_seed(seed)
    model = nn.Sequential(nn.Linear(in_dim, hidden), nn.ReLU(), nn.Linear(hidden, out_dim))
    with torch.no_grad():
        for parameter in model.parameters():
            parameter.copy_(torch.randn(parameter.shape, generator=generator) * 0.5)
    return model


def load_model(source: str) -> nn.Module:
    """Resolve a model source: 'identity:D', 'mlp:IN,HIDDEN,OUT[,SEED]', or a
    checkpoint path (torch.save'd module or TorchScript archive)."""
    if source.startswith("identity:"):
        try:
            return identity_classifier(int(source.split(":", 1)[1]))
        except ValueError:
            raise ExtractionError(f"bad identity spec {source!r}, expected identity:D") from None
    if source.startswith("mlp:"):
        try:
            parts = [int(v) for v in source.split(":", 1)[1].split(",")]
            if len(parts) == 3:
                return mlp_classifier(*parts)
            if len(parts) == 4:
                return mlp_classifier(parts[0], parts[1], parts[2], seed=parts[3])
        except ValueError:
            pass
        raise ExtractionError(f"bad mlp spec {source!r}, expected mlp:IN,HIDDEN,OUT[,SEED]")
    try:
        model = torch.load(source, map_location="cpu", weights_only=False)
    except RuntimeError:
        model = torch.jit.load(source, map_location="cpu")
    if not isinstance(model, nn.Module):
        raise ExtractionError(f"{source}: checkpoint does not contain a module")
    return model
