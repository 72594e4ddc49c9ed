"""Interchange I/O: an NPY subset, CSV feature pairs, and JSON reports.

The NPY support is deliberately narrow: versions 1.0/2.0, little-endian
4/8-byte floats for matrices and signed ints for labels, C order only.
Parsing is done by hand so that malformed files fail with a byte offset
instead of a generic library error.
"""

from __future__ import annotations

import ast
import json
import math
import struct
import warnings
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import FormatError, ValidationError
from .metrics import FeatureSet, RdiReport, RobyReport

__all__ = [
    "load_npy_matrix",
    "load_npy_labels",
    "write_npy_matrix",
    "write_npy_labels",
    "load_csv",
    "load_feature_set",
    "report_to_dict",
    "render_json",
    "write_report_json",
    "SCHEMA",
]

SCHEMA = "rdi-report/1"

_MAGIC = b"\x93NUMPY"
_FLOAT_DESCRS = {"<f4": np.dtype("<f4"), "<f8": np.dtype("<f8")}
_INT_DESCRS = {"<i4": np.dtype("<i4"), "<i8": np.dtype("<i8")}


def _read_npy_payload(path) -> tuple[str, tuple[int, ...], bytes]:
    """Parse the header of an NPY file and return (descr, shape, payload)."""
    data = Path(path).read_bytes()
    if len(data) < 8 or data[:6] != _MAGIC:
        raise FormatError(f"{path}: byte 0: not an NPY file (magic string mismatch)")
    major, minor = data[6], data[7]
    if (major, minor) not in {(1, 0), (2, 0)}:
        raise FormatError(f"{path}: byte 6: unsupported NPY version {major}.{minor}")
    if major == 1:
        if len(data) < 10:
            raise FormatError(f"{path}: byte 8: truncated header length field")
        (header_len,) = struct.unpack_from("<H", data, 8)
        header_start = 10
    else:
        if len(data) < 12:
            raise FormatError(f"{path}: byte 8: truncated header length field")
        (header_len,) = struct.unpack_from("<I", data, 8)
        header_start = 12
    header_end = header_start + header_len
    if len(data) < header_end:
        raise FormatError(f"{path}: byte {len(data)}: truncated header (expected {header_len} bytes)")
    try:
        header = ast.literal_eval(data[header_start:header_end].decode("latin1").strip())
    except (ValueError, SyntaxError) as exc:
        raise FormatError(f"{path}: byte {header_start}: unparseable header dict ({exc})") from exc
    if not isinstance(header, dict) or set(header) != {"descr", "fortran_order", "shape"}:
        raise FormatError(f"{path}: byte {header_start}: malformed header dict keys")
    if header["fortran_order"] is not False:
        raise FormatError(
            f"{path}: byte {header_start}: fortran_order=True (column-major layout unsupported)"
        )
    descr = header["descr"]
    shape = header["shape"]
    if not (isinstance(shape, tuple) and all(isinstance(n, int) and n >= 0 for n in shape)):
        raise FormatError(f"{path}: byte {header_start}: malformed shape {shape!r}")
    return descr, shape, data[header_end:]


def _payload_array(path, payload: bytes, dtype: np.dtype, shape: tuple[int, ...]) -> np.ndarray:
    expected = dtype.itemsize * int(np.prod(shape, dtype=np.int64))
    if len(payload) != expected:
        offset = "end of file" if len(payload) < expected else f"byte {expected} of payload"
        raise FormatError(
            f"{path}: {offset}: payload is {len(payload)} bytes, header shape {shape} needs {expected}"
        )
    return np.frombuffer(payload, dtype=dtype).reshape(shape)


def load_npy_matrix(path) -> np.ndarray:
    """Load an N x D float matrix, widened to float64 and checked finite."""
    descr, shape, payload = _read_npy_payload(path)
    if descr not in _FLOAT_DESCRS:
        raise FormatError(f"{path}: unsupported dtype descr {descr!r} (expected '<f4' or '<f8')")
    if len(shape) != 2:
        raise FormatError(f"{path}: expected a 2-D matrix, header shape is {shape}")
    if shape[0] < 1:
        raise ValidationError(f"{path}: matrix must have at least one row, got shape {shape}")
    if shape[1] < 1:
        raise ValidationError(f"{path}: matrix must have at least one column, got shape {shape}")
    arr = _payload_array(path, payload, _FLOAT_DESCRS[descr], shape).astype(np.float64)
    finite_rows = np.isfinite(arr).all(axis=1)
    if not finite_rows.all():
        row = int(np.flatnonzero(~finite_rows)[0])
        raise ValidationError(f"{path}: non-finite value in row {row}")
    return arr


def load_npy_labels(path) -> np.ndarray:
    """Load a length-N int label vector as int64; labels must be non-negative."""
    descr, shape, payload = _read_npy_payload(path)
    if descr not in _INT_DESCRS:
        raise ValidationError(f"{path}: labels must use an integer dtype, got {descr!r}")
    if len(shape) != 1:
        raise FormatError(f"{path}: expected a 1-D label vector, header shape is {shape}")
    if shape[0] < 1:
        raise ValidationError(f"{path}: label vector must be non-empty")
    arr = _payload_array(path, payload, _INT_DESCRS[descr], shape).astype(np.int64)
    if arr.min() < 0:
        idx = int(np.flatnonzero(arr < 0)[0])
        raise ValidationError(f"{path}: negative label at index {idx}")
    return arr


def _write_npy(path, arr: np.ndarray, descr: str) -> None:
    header = f"{{'descr': '{descr}', 'fortran_order': False, 'shape': {arr.shape}, }}"
    pad = 64 - ((len(_MAGIC) + 4 + len(header) + 1) % 64)
    header = header + " " * pad + "\n"
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(b"\x01\x00")
        fh.write(struct.pack("<H", len(header)))
        fh.write(header.encode("latin1"))
        fh.write(np.ascontiguousarray(arr).tobytes())


def write_npy_matrix(path, matrix: np.ndarray) -> None:
    """Write a float64 matrix as NPY v1.0 ('<f8', C order)."""
    arr = np.asarray(matrix, dtype="<f8")
    if arr.ndim != 2:
        raise ValidationError("matrix must be 2-D")
    _write_npy(path, arr, "<f8")


def write_npy_labels(path, labels: np.ndarray) -> None:
    """Write an int64 label vector as NPY v1.0 ('<i8')."""
    arr = np.asarray(labels, dtype="<i8")
    if arr.ndim != 1:
        raise ValidationError("labels must be 1-D")
    _write_npy(path, arr, "<i8")


def _load_csv_matrix(path) -> np.ndarray:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    rows: list[list[float]] = []
    width = None
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        cells = [c.strip() for c in line.split(",")]
        if lineno == 1:
            try:
                float(cells[0])
            except ValueError:
                continue  # header line
        parsed = []
        for cell in cells:
            try:
                value = float(cell)
            except ValueError:
                raise FormatError(f"{path}: line {lineno}: cannot parse {cell!r} as a number") from None
            if not math.isfinite(value):
                raise ValidationError(f"{path}: line {lineno}: non-finite value {cell!r}")
            parsed.append(value)
        if width is None:
            width = len(parsed)
        elif len(parsed) != width:
            raise FormatError(f"{path}: line {lineno}: expected {width} fields, got {len(parsed)}")
        rows.append(parsed)
    if not rows:
        raise ValidationError(f"{path}: no data rows")
    return np.array(rows, dtype=np.float64)


def _load_csv_labels(path) -> np.ndarray:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    labels = []
    for lineno, line in enumerate(lines, start=1):
        cell = line.strip()
        if not cell:
            continue
        try:
            value = int(cell)
        except ValueError:
            raise FormatError(f"{path}: line {lineno}: cannot parse {cell!r} as an integer") from None
        if value < 0:
            raise ValidationError(f"{path}: line {lineno}: negative label")
        labels.append(value)
    if not labels:
        raise ValidationError(f"{path}: no labels")
    return np.array(labels, dtype=np.int64)


def _build_feature_set(matrix: np.ndarray, labels: np.ndarray, num_classes: int | None) -> FeatureSet:
    if matrix.shape[0] != labels.shape[0]:
        raise ValidationError(
            f"row count mismatch: {matrix.shape[0]} feature rows vs {labels.shape[0]} labels"
        )
    inferred = int(labels.max()) + 1
    if num_classes is None:
        num_classes = inferred
    elif num_classes < inferred:
        raise ValidationError(
            f"declared {num_classes} classes but labels require at least {inferred}"
        )
    fs = FeatureSet(matrix, labels, num_classes)
    missing = sorted(set(range(num_classes)) - set(int(v) for v in np.unique(labels)))
    if missing:
        warnings.warn(f"classes with no samples: {missing}", stacklevel=3)
    return fs


def load_csv(features_path, labels_path, num_classes: int | None = None) -> FeatureSet:
    """Load a feature set from a CSV matrix plus a one-integer-per-line label file."""
    return _build_feature_set(_load_csv_matrix(features_path), _load_csv_labels(labels_path), num_classes)


def load_feature_set(features_path, labels_path, fmt: str = "npy", num_classes: int | None = None) -> FeatureSet:
    """Load a feature/label file pair in the given format ('npy' or 'csv')."""
    if fmt == "npy":
        return _build_feature_set(load_npy_matrix(features_path), load_npy_labels(labels_path), num_classes)
    if fmt == "csv":
        return load_csv(features_path, labels_path, num_classes)
    raise ValidationError(f"unknown format {fmt!r} (expected 'npy' or 'csv')")


def _format_float(value: float) -> str:
    if not math.isfinite(value):
        raise ValidationError(f"cannot serialize non-finite value {value!r}")
    text = format(value, ".17g")
    if not any(c in text for c in ".e"):
        text += ".0"
    return text


def render_json(value, indent: int = 0) -> str:
    """Serialize a report document; floats carry 17 significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [render_json(v, indent + 1) for v in value]
        return "[\n" + ",\n".join(inner + s for s in items) + "\n" + pad + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f'{inner}"{key}": {render_json(v, indent + 1)}' for key, v in value.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise ValidationError(f"cannot serialize {type(value).__name__}")


def report_to_dict(report) -> dict:
    """Stable-ordered dict form of a metric report."""
    if isinstance(report, RdiReport):
        return {
            "schema": SCHEMA,
            "kind": "rdi",
            "rdi": report.rdi,
            "intra_d": report.intra_d,
            "inter_d": report.inter_d,
            "effective_classes": report.effective_classes,
            "num_classes": len(report.per_class),
            "global_center": list(report.global_center),
            "warnings": list(report.warnings),
            "per_class": [
                {
                    "class_index": s.class_index,
                    "count": s.count,
                    "intra_distance": s.intra_distance,
                    "center": None if s.center is None else list(s.center),
                }
                for s in report.per_class
            ],
        }
    if isinstance(report, RobyReport):
        return {
            "schema": SCHEMA,
            "kind": "roby",
            "roby": report.roby,
            "class_indices": list(report.class_indices),
            "fsa": list(report.fsa),
            "pairs": [list(p) for p in report.pairs],
            "fsd": list(report.fsd),
            "pairwise_roby": list(report.pairwise_roby),
        }
    # analysis reports are plain dataclasses; import here to avoid a cycle
    from .analysis import CorrelationReport

    if isinstance(report, CorrelationReport):
        return {
            "schema": SCHEMA,
            "kind": "correlation",
            "dataset": report.dataset,
            "metric": report.metric_name,
            "target": report.target_name,
            "spearman": report.spearman,
            "pearson": report.pearson,
            "n": report.n,
        }
    if isinstance(report, Sequence) and not isinstance(report, (str, bytes)):
        return {
            "schema": SCHEMA,
            "kind": "correlation-set",
            "reports": [report_to_dict(r) for r in report],
        }
    raise ValidationError(f"unknown report type {type(report).__name__}")


def write_report_json(report, path) -> None:
    """Write a report as UTF-8 JSON; reloading reproduces every value exactly."""
    Path(path).write_text(render_json(report_to_dict(report)) + "\n", encoding="utf-8")
