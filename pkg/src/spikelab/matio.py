"""Matrix and ground-truth serialization.

Binary layout: a 16-byte header -- magic ``b"SPKM"``, a uint32 format
version, uint32 row and column counts (all little-endian) -- followed by the
matrix as row-major little-endian float64.  Small matrices can also go
through plain CSV.  Ground truth lives in a JSON sidecar next to the data
file.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np

MAGIC = b"SPKM"
VERSION = 1
_HEADER = struct.Struct("<4sIII")

PathLike = Union[str, Path]


def write_matrix(path: PathLike, matrix: np.ndarray) -> None:
    m = np.ascontiguousarray(matrix, dtype="<f8")
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {matrix.shape}")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, m.shape[0], m.shape[1]))
        fh.write(m.tobytes(order="C"))


def read_matrix(path: PathLike) -> np.ndarray:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        magic, version, rows, cols = _HEADER.unpack(header)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        if version != VERSION:
            raise ValueError(f"{path}: unsupported version {version}")
        payload = fh.read(8 * rows * cols)
    m = np.frombuffer(payload, dtype="<f8").reshape(rows, cols)
    return m.astype(np.float64, copy=True)


def write_matrix_csv(path: PathLike, matrix: np.ndarray) -> None:
    np.savetxt(path, np.asarray(matrix, dtype=np.float64), delimiter=",")


def read_matrix_csv(path: PathLike) -> np.ndarray:
    m = np.loadtxt(path, delimiter=",", ndmin=2)
    return np.asarray(m, dtype=np.float64)


def write_truth(path: PathLike, truth) -> None:
    """Serialize an ScTruth or WigTruth as a JSON sidecar."""
    doc = {
        "d": int(truth.u.d),
        "support": [int(i) for i in truth.u.support],
        "signs": [int(s) for s in truth.u.signs],
    }
    if hasattr(truth, "theta"):
        doc["theta"] = float(truth.theta)
        doc["g"] = [float(v) for v in truth.g]
    else:
        doc["lambda"] = float(truth.lam)
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=None))


def read_truth(path: PathLike) -> dict:
    return json.loads(Path(path).read_text())


def truth_sidecar_path(data_path: PathLike) -> Path:
    p = Path(data_path)
    return p.with_name(p.name + ".truth.json")


def maybe_write_truth(data_path: PathLike, truth: Optional[object]) -> Optional[Path]:
    if truth is None:
        return None
    sidecar = truth_sidecar_path(data_path)
    write_truth(sidecar, truth)
    return sidecar
