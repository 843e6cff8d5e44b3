"""Binary matrix dumps: magic, rows, cols, row-major float32, JSON sidecar.

Layout: 4-byte magic "FMX1", two little-endian uint32 (rows, cols), then
rows*cols little-endian float32 values in row-major order.  Parameters
travel in a sidecar file `<path>.meta.json` so the payload stays a plain
rectangular array.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"FMX1"


class MatrixFormatError(ValueError):
    """Dump is truncated, mis-sized, or has the wrong magic."""


def dump_matrix(path: str | Path, matrix: np.ndarray, params: dict | None = None) -> None:
    path = Path(path)
    matrix = np.asarray(matrix, dtype=np.float32)
    if matrix.ndim != 2:
        raise MatrixFormatError("only 2-D matrices are dumped")
    rows, cols = matrix.shape
    with path.open("wb") as handle:
        handle.write(MAGIC)
        handle.write(struct.pack("<II", rows, cols))
        handle.write(np.ascontiguousarray(matrix, dtype="<f4").tobytes())
    if params is not None:
        sidecar = path.with_name(path.name + ".meta.json")
        sidecar.write_text(json.dumps(params, sort_keys=True), encoding="utf-8")


def load_matrix(path: str | Path) -> tuple[np.ndarray, dict | None]:
    path = Path(path)
    blob = path.read_bytes()
    if blob[:4] != MAGIC:
        raise MatrixFormatError(f"{path}: bad magic {blob[:4]!r}")
    if len(blob) < 12:
        raise MatrixFormatError(f"{path}: truncated header")
    rows, cols = struct.unpack("<II", blob[4:12])
    expected = 12 + rows * cols * 4
    if len(blob) != expected:
        raise MatrixFormatError(f"{path}: expected {expected} bytes, got {len(blob)}")
    matrix = np.frombuffer(blob[12:], dtype="<f4").reshape(rows, cols).copy()
    sidecar = path.with_name(path.name + ".meta.json")
    params = None
    if sidecar.is_file():
        params = json.loads(sidecar.read_text(encoding="utf-8"))
    return matrix, params
