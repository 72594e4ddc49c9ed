"""Command-line entry point.

Subcommands: compute (RDI), roby (baseline), synth (write a synthetic
feature/label NPY pair), correlate (fixture correlation), bench (scaling
timings). JSON goes to stdout or --out; human summaries and warnings go to
stderr. Exit codes: 0 success, 1 validation or format error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import evaluate_fixture, load_fixture_csv
from .bench import run_scaling_benchmark
from .errors import FormatError, ValidationError
from .io import SCHEMA, load_feature_set, render_json, report_to_dict, write_npy_labels, write_npy_matrix
from .metrics import compute_rdi, compute_roby
from .synth import MixtureSpec, generate_mixture

_TARGET_BY_FLAG = {"adv_acc": "adv_accuracy_avg", "asr": "asr_avg"}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; our contract reserves 2 for I/O
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def _emit(doc: dict, out: str | None) -> None:
    text = render_json(doc) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _add_pair_flags(sub) -> None:
    sub.add_argument("--features", required=True, help="feature matrix file")
    sub.add_argument("--labels", required=True, help="predicted-label file")
    sub.add_argument("--format", choices=("npy", "csv"), default="npy")
    sub.add_argument("--classes", type=int, default=None, help="override inferred class count")
    sub.add_argument("--out", default=None, help="write the JSON report here instead of stdout")


def _cmd_compute(args) -> int:
    fs = load_feature_set(args.features, args.labels, fmt=args.format, num_classes=args.classes)
    report = compute_rdi(fs)
    _emit(report_to_dict(report), args.out)
    for line in report.warnings:
        print(f"warning: {line}", file=sys.stderr)
    print(
        f"RDI={report.rdi:.6g} IntraD={report.intra_d:.6g} InterD={report.inter_d:.6g} "
        f"classes={report.effective_classes} samples={fs.num_samples}",
        file=sys.stderr,
    )
    return 0


def _cmd_roby(args) -> int:
    fs = load_feature_set(args.features, args.labels, fmt=args.format, num_classes=args.classes)
    report = compute_roby(fs)
    _emit(report_to_dict(report), args.out)
    print(
        f"ROBY={report.roby:.6g} classes={len(report.class_indices)} "
        f"pairs={len(report.pairs)} samples={fs.num_samples}",
        file=sys.stderr,
    )
    return 0


def _cmd_synth(args) -> int:
    spec = MixtureSpec(
        num_classes=args.classes,
        dim=args.dim,
        per_class=args.per_class,
        separation=args.separation,
        spread=args.spread,
        seed=args.seed,
    )
    fs = generate_mixture(spec)
    features_path = f"{args.out_prefix}.features.npy"
    labels_path = f"{args.out_prefix}.labels.npy"
    write_npy_matrix(features_path, fs.vectors)
    write_npy_labels(labels_path, fs.labels)
    _emit(
        {
            "schema": SCHEMA,
            "kind": "synth",
            "classes": spec.num_classes,
            "dim": spec.dim,
            "per_class": spec.per_class,
            "separation": spec.separation,
            "spread": spec.spread,
            "seed": spec.seed,
            "features_path": features_path,
            "labels_path": labels_path,
        },
        None,
    )
    print(
        f"synth: classes={spec.num_classes} dim={spec.dim} per-class={spec.per_class} "
        f"separation={spec.separation:g} spread={spec.spread:g} seed={spec.seed} "
        f"-> {features_path}, {labels_path}",
        file=sys.stderr,
    )
    return 0


def _cmd_correlate(args) -> int:
    records = load_fixture_csv(args.fixture)
    target = _TARGET_BY_FLAG[args.target]
    reports, skipped = evaluate_fixture(records, metric=args.metric, target=target)
    for line in skipped:
        print(f"warning: {line}", file=sys.stderr)
    doc = {
        "schema": SCHEMA,
        "kind": "correlation-set",
        "metric": args.metric,
        "target": target,
        "reports": [report_to_dict(r) for r in reports],
    }
    _emit(doc, args.out)
    print(f"{'dataset':<16} {'n':>3} {'spearman':>9} {'pearson':>9}", file=sys.stderr)
    for r in reports:
        print(f"{r.dataset:<16} {r.n:>3} {r.spearman:>9.4f} {r.pearson:>9.4f}", file=sys.stderr)
    return 0


def _cmd_bench(args) -> int:
    try:
        class_counts = [int(v) for v in args.classes_list.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"cannot parse --classes-list {args.classes_list!r}") from None
    rows = run_scaling_benchmark(
        class_counts=class_counts,
        dim=args.dim,
        per_class=args.per_class,
        seed=args.seed,
        repeats=args.repeats,
    )
    doc = {
        "schema": SCHEMA,
        "kind": "bench",
        "dim": args.dim,
        "repeats": args.repeats,
        "rows": [
            {
                "classes": r.num_classes,
                "per_class": r.per_class,
                "total_samples": r.total_samples,
                "rdi_ms": r.rdi_ms,
                "roby_ms": r.roby_ms,
                "roby_over_rdi": r.roby_over_rdi,
            }
            for r in rows
        ],
    }
    _emit(doc, args.out)
    print(f"{'K':>5} {'samples':>8} {'rdi_ms':>10} {'roby_ms':>10} {'roby/rdi':>9}", file=sys.stderr)
    for r in rows:
        print(
            f"{r.num_classes:>5} {r.total_samples:>8} {r.rdi_ms:>10.2f} "
            f"{r.roby_ms:>10.2f} {r.roby_over_rdi:>9.2f}",
            file=sys.stderr,
        )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rdi", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    compute = sub.add_parser("compute", help="compute the RDI report for a feature/label pair")
    _add_pair_flags(compute)
    compute.set_defaults(func=_cmd_compute)

    roby = sub.add_parser("roby", help="compute the ROBY baseline report")
    _add_pair_flags(roby)
    roby.set_defaults(func=_cmd_roby)

    synth = sub.add_parser("synth", help="generate a synthetic feature/label NPY pair")
    synth.add_argument("--classes", type=int, required=True)
    synth.add_argument("--dim", type=int, required=True)
    synth.add_argument("--per-class", type=int, required=True)
    synth.add_argument("--separation", type=float, default=4.0)
    synth.add_argument("--spread", type=float, default=1.0)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out-prefix", required=True)
    synth.set_defaults(func=_cmd_synth)

    correlate = sub.add_parser("correlate", help="correlate a metric against attack outcomes")
    correlate.add_argument("--fixture", required=True, help="fixture CSV path")
    correlate.add_argument("--metric", choices=("rdi", "roby"), default="rdi")
    correlate.add_argument("--target", choices=tuple(_TARGET_BY_FLAG), default="adv_acc")
    correlate.add_argument("--out", default=None)
    correlate.set_defaults(func=_cmd_correlate)

    bench = sub.add_parser("bench", help="time metric computation across class counts")
    bench.add_argument("--classes-list", default="10,100,200")
    bench.add_argument("--dim", type=int, default=64)
    bench.add_argument("--per-class", type=int, default=100,
                       help="samples per class at the largest K; totals stay equal")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--repeats", type=int, default=3)
    bench.add_argument("--out", default=None)
    bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (ValidationError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
