"""EAM1 model files.

Layout::

    b"EAM1"  u16 format version
    u32 header length, UTF-8 JSON header:
        family, hyperparams, classes, n_features, seed, estimator class,
        estimator metadata, and one {name, dtype, shape, offset} per array
    concatenated raw array bytes (little-endian)
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .base import Constant, Model, _registry
from .forest import DecisionTree

MAGIC = b"EAM1"
VERSION = 1


def _estimator_classes():
    classes = {c.__name__: c for c in _registry().values()}
    classes.update(Constant=Constant, DecisionTree=DecisionTree)
    return classes


def dumps(model: Model) -> bytes:
    meta, arrays = model.estimator.get_state()
    blobs, table, offset = [], [], 0
    for name in sorted(arrays):
        a = np.asarray(arrays[name])
        a = a.astype(a.dtype.newbyteorder("<")) if a.dtype.byteorder == ">" else a
        raw = np.ascontiguousarray(a).tobytes()
        table.append({"name": name, "dtype": a.dtype.str, "shape": list(a.shape), "offset": offset})
        blobs.append(raw)
        offset += len(raw)
    header = {
        "family": model.family,
        "hyperparams": model.hyperparams,
        "classes": model.classes.tolist(),
        "n_features": model.n_features,
        "seed": model.seed,
        "estimator": type(model.estimator).__name__,
        "params": model.estimator.params,
        "converged": model.estimator.converged,
        "n_iter": model.estimator.n_iter,
        "meta": meta,
        "arrays": table,
    }
    head = json.dumps(header, sort_keys=True).encode()
    return MAGIC + struct.pack("<HI", VERSION, len(head)) + head + b"".join(blobs)


def loads(data: bytes) -> Model:
    if data[:4] != MAGIC:
        raise ValueError("not an EAM1 model file")
    version, hlen = struct.unpack("<HI", data[4:10])
    if version != VERSION:
        raise ValueError(f"unsupported model format version {version}")
    header = json.loads(data[10:10 + hlen])
    body = memoryview(data)[10 + hlen:]
    arrays = {}
    for entry in header["arrays"]:
        dtype = np.dtype(entry["dtype"])
        count = int(np.prod(entry["shape"], dtype=np.int64))
        arrays[entry["name"]] = np.frombuffer(body, dtype, count, entry["offset"]).reshape(entry["shape"]).copy()
    est = _estimator_classes()[header["estimator"]](**header["params"])
    est.set_state(header["meta"], arrays)
    est.converged, est.n_iter = header["converged"], header["n_iter"]
    return Model(header["family"], header["hyperparams"], np.array(header["classes"], dtype=np.int64),
                 header["n_features"], header["seed"], est)


def save(model: Model, path):
    with open(path, "wb") as f:
        f.write(dumps(model))


def load(path) -> Model:
    with open(path, "rb") as f:
        return loads(f.read())
