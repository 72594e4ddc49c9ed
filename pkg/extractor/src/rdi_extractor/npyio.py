"""Minimal NPY v1.0 writing for the interchange pair.

Matches the subset the metric engine ingests: little-endian '<f4' matrices
and '<i8' label vectors, C order. Writes go through a temp file and a rename
so a crashed run never leaves a half-written pair behind.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

_MAGIC = b"\x93NUMPY"


def write_npy(path, array: np.ndarray) -> None:
    array = np.ascontiguousarray(array)
    descr = array.dtype.str
    if descr not in ("<f4", "<i8"):
        raise ValueError(f"unsupported interchange dtype {descr!r}")
    header = f"{{'descr': '{descr}', 'fortran_order': False, 'shape': {array.shape}, }}"
    pad = 64 - ((len(_MAGIC) + 4 + len(header) + 1) % 64)
    header = header + " " * pad + "\n"
    tmp = Path(str(path) + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(b"\x01\x00")
        fh.write(struct.pack("<H", len(header)))
        fh.write(header.encode("latin1"))
        fh.write(array.tobytes())
    os.replace(tmp, path)
