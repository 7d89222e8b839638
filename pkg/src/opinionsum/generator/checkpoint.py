"""Versioned, checksummed model checkpoints.

Layout: magic bytes, one version byte, a length-prefixed JSON header
(dims, vocabulary, tensor names and shapes), each parameter tensor as
little-endian float32 in header order, then a trailing SHA-256 of all
preceding bytes.
"""

from __future__ import annotations

import hashlib
import json
import struct

import numpy as np

from .model import GeneratorModel, ModelDims
from .vocab import SPECIAL_TOKENS, Vocabulary

MAGIC = b"OSGM"
VERSION = 1


class CheckpointError(ValueError):
    pass


class CheckpointVersionError(CheckpointError):
    pass


class CheckpointCorruptError(CheckpointError):
    pass


def save_model(model: GeneratorModel, path) -> None:
    header = {
        "dims": {
            "layers": model.dims.layers,
            "heads": model.dims.heads,
            "d_model": model.dims.d_model,
            "d_ff": model.dims.d_ff,
            "dropout": model.dims.dropout,
            "tie_output": model.dims.tie_output,
        },
        "vocab": list(model.vocab.token_of),
        "tensors": [[name, list(model.params[name].shape)] for name in model.param_names()],
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    blob = bytearray()
    blob += MAGIC
    blob += struct.pack("<B", VERSION)
    blob += struct.pack("<I", len(header_bytes))
    blob += header_bytes
    for name in model.param_names():
        blob += model.params[name].astype("<f4").tobytes()
    blob += hashlib.sha256(blob).digest()
    with open(path, "wb") as fh:
        fh.write(blob)


def load_model(path) -> GeneratorModel:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(MAGIC) + 1 + 4 + 32 or blob[: len(MAGIC)] != MAGIC:
        raise CheckpointCorruptError(f"{path}: not a generator checkpoint")
    digest = blob[-32:]
    body = blob[:-32]
    if hashlib.sha256(body).digest() != digest:
        raise CheckpointCorruptError(f"{path}: checksum mismatch (truncated or corrupt)")
    version = blob[len(MAGIC)]
    if version != VERSION:
        raise CheckpointVersionError(f"{path}: unsupported version {version} (expected {VERSION})")
    offset = len(MAGIC) + 1
    (header_len,) = struct.unpack_from("<I", body, offset)
    offset += 4
    try:
        header = json.loads(body[offset: offset + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointCorruptError(f"{path}: unreadable header") from exc
    offset += header_len
    tokens = tuple(header["vocab"])
    if tokens[:5] != SPECIAL_TOKENS:
        raise CheckpointCorruptError(f"{path}: vocabulary is missing the reserved specials")
    vocab = Vocabulary(tokens, {t: i for i, t in enumerate(tokens)})
    dims = ModelDims(**header["dims"])
    params: dict[str, np.ndarray] = {}
    for name, shape in header["tensors"]:
        count = int(np.prod(shape)) if shape else 1
        values = np.frombuffer(body, dtype="<f4", count=count, offset=offset)
        offset += count * 4
        params[name] = values.astype(np.float64).reshape(shape)
    if offset != len(body):
        raise CheckpointCorruptError(f"{path}: trailing bytes after tensors")
    return GeneratorModel(dims, vocab, params=params)
