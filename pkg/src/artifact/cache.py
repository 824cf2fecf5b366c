"""EAF1 feature cache files and CSV export.

Layout (little-endian)::

    b"EAF1"
    u32  header length, then that many bytes of UTF-8 JSON:
         {"config_hash", "record_id", "fs", "n_windows", "dim", "duration_s"}
    f64  start times            (n_windows,)
    i8   labels                 (n_windows,)
    f64  feature rows, row-major (n_windows, dim)
"""

from __future__ import annotations

import csv
import io
import json
import struct
from pathlib import Path

import numpy as np

from .labels import ArtifactClass

MAGIC = b"EAF1"


class CacheError(ValueError):
    pass


def dump_features(config_hash: str, record_id: str, fs: float, starts: np.ndarray,
                  labels: np.ndarray, feats: np.ndarray, duration_s: float | None = None) -> bytes:
    n, dim = feats.shape
    if len(starts) != n or len(labels) != n:
        raise ValueError("starts, labels and features disagree in length")
    header = json.dumps({"config_hash": config_hash, "record_id": record_id, "fs": fs,
                         "n_windows": n, "dim": dim, "duration_s": duration_s},
                        sort_keys=True).encode()
    return b"".join([
        MAGIC,
        struct.pack("<I", len(header)),
        header,
        np.asarray(starts, "<f8").tobytes(),
        np.asarray(labels, "i1").tobytes(),
        np.ascontiguousarray(feats, "<f8").tobytes(),
    ])


def load_features(data: bytes):
    """Inverse of ``dump_features``: (header dict, starts, labels, feats)."""
    if data[:4] != MAGIC:
        raise CacheError("not an EAF1 file")
    (hlen,) = struct.unpack("<I", data[4:8])
    header = json.loads(data[8:8 + hlen])
    n, dim = header["n_windows"], header["dim"]
    pos = 8 + hlen
    need = pos + n * 8 + n + n * dim * 8
    if len(data) != need:
        raise CacheError(f"truncated cache: {len(data)} bytes, expected {need}")
    starts = np.frombuffer(data, "<f8", n, pos).copy()
    pos += 8 * n
    labels = np.frombuffer(data, "i1", n, pos).astype(np.int64)
    pos += n
    feats = np.frombuffer(data, "<f8", n * dim, pos).reshape(n, dim).copy()
    return header, starts, labels, feats


def write_cache(path, *args) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(dump_features(*args))
    tmp.replace(path)
    return path


def read_cache(path):
    return load_features(Path(path).read_bytes())


def features_csv(rows) -> str:
    """CSV text, one row per window.

    ``rows`` yields (patient, session, start_s, label, feature vector).
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header_written = False
    for patient, session, start, label, vec in rows:
        if not header_written:
            w.writerow(["patient", "session", "start_s", "label"] + [f"f{i}" for i in range(len(vec))])
            header_written = True
        w.writerow([patient, session, repr(float(start)), ArtifactClass(int(label)).name]
                   + [repr(float(v)) for v in vec])
    return buf.getvalue()
