"""CLI: extract penultimate-layer features into the interchange NPY pair.

Exit codes match the metric engine: 0 success, 1 configuration/validation
error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .extract import ExtractionConfig, ExtractionError, extract


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rdi-extract", description=__doc__)
    parser.add_argument("--model", required=True,
                        help="checkpoint path, TorchScript archive, 'identity:D', or 'mlp:IN,HIDDEN,OUT[,SEED]'")
    parser.add_argument("--data", required=True, help=".npy input array or directory with inputs.npy")
    parser.add_argument("--layer", default="auto",
                        help="named module to hook; 'auto' takes the input of the final Linear layer")
    parser.add_argument("--tap", choices=("output", "input"), default="output",
                        help="record the named layer's output (post-activation if the layer is an "
                             "activation module) or its input")
    parser.add_argument("--batch", type=int, default=64)
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--out", required=True, help="output prefix for PREFIX.features.npy / PREFIX.labels.npy")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = ExtractionConfig(
            model_source=args.model,
            dataset_source=args.data,
            output_prefix=args.out,
            layer_selector=args.layer,
            tap=args.tap,
            batch_size=args.batch,
            device=args.device,
        )
        features_path, labels_path = extract(config)
    except (ExtractionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {features_path} and {labels_path}", file=sys.stderr)
    return 0
