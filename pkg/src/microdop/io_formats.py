"""Binary and CSV payload formats plus the batch manifest.

Binary layout (little-endian):
    magic   4s   b"MDSG"
    version u16  currently 1
    dtype   u8   0 = real float32, 1 = complex64 (float32 pairs)
    ndim    u8
    dims    u32 * ndim
    axes    (start f64, step f64) * ndim
    payload row-major
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"MDSG"
VERSION = 1
_DTYPE_REAL = 0
_DTYPE_COMPLEX = 1


def write_binary(path, array: np.ndarray, axes) -> None:
    """Write an array with per-dimension (start, step) axis metadata."""
    array = np.asarray(array)
    if len(axes) != array.ndim:
        raise ValueError("one (start, step) pair per dimension required")
    if np.iscomplexobj(array):
        code, data = _DTYPE_COMPLEX, array.astype(np.complex64)
    else:
        code, data = _DTYPE_REAL, array.astype(np.float32)
    header = struct.pack("<4sHBB", MAGIC, VERSION, code, array.ndim)
    header += struct.pack(f"<{array.ndim}I", *array.shape)
    for start, step in axes:
        header += struct.pack("<dd", float(start), float(step))
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(data).tobytes())


def read_binary(path):
    """Read a payload file; returns (array, axes)."""
    raw = Path(path).read_bytes()
    magic, version, code, ndim = struct.unpack_from("<4sHBB", raw, 0)
    if magic != MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    off = 8
    dims = struct.unpack_from(f"<{ndim}I", raw, off)
    off += 4 * ndim
    axes = []
    for _ in range(ndim):
        axes.append(struct.unpack_from("<dd", raw, off))
        off += 16
    dtype = np.complex64 if code == _DTYPE_COMPLEX else np.float32
    array = np.frombuffer(raw[off:], dtype=dtype).reshape(dims)
    return array, axes


def write_csv(path, array: np.ndarray, axes, axis_names=None) -> None:
    """CSV export: axis coordinate columns followed by the values.

    1-D arrays produce (axis, value) rows; 2-D arrays produce
    (axis0, axis1, value) rows.
    """
    array = np.asarray(array)
    if array.ndim not in (1, 2):
        raise ValueError("CSV export supports 1-D and 2-D arrays")
    if axis_names is None:
        axis_names = [f"axis{i}" for i in range(array.ndim)]
    coords = [start + step * np.arange(dim)
              for (start, step), dim in zip(axes, array.shape)]
    with open(path, "w") as fh:
        if array.ndim == 1:
            fh.write(f"{axis_names[0]},value\n")
            for x, v in zip(coords[0], array):
                fh.write(f"{float(x)!r},{float(v)!r}\n")
        else:
            fh.write(f"{axis_names[0]},{axis_names[1]},value\n")
            for i, x in enumerate(coords[0]):
                for y, v in zip(coords[1], array[i]):
                    fh.write(f"{float(x)!r},{float(y)!r},{float(v)!r}\n")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def write_manifest(path, records: list[dict]) -> None:
    Path(path).write_text(json.dumps({"version": VERSION, "records": records},
                                     indent=2, sort_keys=True) + "\n")


def verify_manifest(path) -> list[str]:
    """Re-hash every file listed in a manifest; returns mismatch messages."""
    manifest = json.loads(Path(path).read_text())
    base = Path(path).parent
    problems = []
    for rec in manifest["records"]:
        for name, entry in rec.get("files", {}).items():
            target = base / entry["path"]
            if not target.exists():
                problems.append(f"missing file: {entry['path']}")
            elif sha256_file(target) != entry["sha256"]:
                problems.append(f"hash mismatch: {entry['path']}")
    return problems
