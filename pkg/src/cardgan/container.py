"""Named-tensor archive: the container format for every binary artifact.

One archive = header + UTF-8 JSON manifest + a blob of little-endian
32-bit floats laid out in manifest order.  Checkpoints, latent archives,
PCA bases, feature statistics, and packed datasets all reuse it.

Layout (all integers little-endian):

    bytes 0..3    magic ``NTAR``
    bytes 4..7    container version (uint32, currently 1)
    bytes 8..15   manifest length in bytes (uint64)
    manifest      canonical JSON: ``{"format_version", "kind", "meta",
                  "tensors": [{"name", "dtype", "shape", "offset",
                  "nbytes"}, ...]}``
    payload       tensor data, float32 LE, offsets relative to payload
                  start, contiguous and in manifest order

Writing is bit-deterministic: manifests use sorted keys and tensors are
stored in sorted name order, so identical content yields identical bytes.
"""

from __future__ import annotations

import io
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import InvalidArgument

MAGIC = b"NTAR"
CONTAINER_VERSION = 1
_HEADER = struct.Struct("<4sIQ")


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass
class Container:
    kind: str
    meta: dict[str, Any]
    tensors: dict[str, np.ndarray] = field(default_factory=dict)

    def tensor(self, name: str) -> np.ndarray:
        if name not in self.tensors:
            raise InvalidArgument(f"container has no tensor named {name!r}")
        return self.tensors[name]


def _as_f4(arr: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(arr), dtype="<f4")


def write_container_bytes(kind: str, meta: dict[str, Any], tensors: dict[str, np.ndarray]) -> bytes:
    entries = []
    payload = io.BytesIO()
    offset = 0
    for name in sorted(tensors):
        data = _as_f4(tensors[name])
        raw = data.tobytes()
        entries.append(
            {
                "name": name,
                "dtype": "<f4",
                "shape": list(data.shape),
                "offset": offset,
                "nbytes": len(raw),
            }
        )
        payload.write(raw)
        offset += len(raw)
    manifest = canonical_json(
        {"format_version": CONTAINER_VERSION, "kind": kind, "meta": meta, "tensors": entries}
    ).encode("utf-8")
    out = io.BytesIO()
    out.write(_HEADER.pack(MAGIC, CONTAINER_VERSION, len(manifest)))
    out.write(manifest)
    out.write(payload.getvalue())
    return out.getvalue()


def write_container(path: str | Path, kind: str, meta: dict[str, Any], tensors: dict[str, np.ndarray]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(write_container_bytes(kind, meta, tensors))
    return path


def read_container_bytes(blob: bytes) -> Container:
    if len(blob) < _HEADER.size:
        raise InvalidArgument(
            f"container truncated at offset {len(blob)}: header needs {_HEADER.size} bytes"
        )
    magic, version, manifest_len = _HEADER.unpack_from(blob, 0)
    if magic != MAGIC:
        raise InvalidArgument(f"bad magic at offset 0: {magic!r} (expected {MAGIC!r})")
    if version != CONTAINER_VERSION:
        raise InvalidArgument(f"unsupported container version {version} at offset 4")
    manifest_end = _HEADER.size + manifest_len
    if len(blob) < manifest_end:
        raise InvalidArgument(
            f"container truncated at offset {len(blob)}: manifest ends at {manifest_end}"
        )
    try:
        manifest = json.loads(blob[_HEADER.size:manifest_end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InvalidArgument(f"manifest is not valid JSON (offset {_HEADER.size}): {exc}") from exc
    for key in ("format_version", "kind", "meta", "tensors"):
        if key not in manifest:
            raise InvalidArgument(f"manifest missing required key {key!r}")
    payload = blob[manifest_end:]
    tensors: dict[str, np.ndarray] = {}
    expected = 0
    for entry in manifest["tensors"]:
        name, off, nbytes = entry["name"], entry["offset"], entry["nbytes"]
        if off != expected:
            raise InvalidArgument(
                f"tensor {name!r}: offset {off} not contiguous (expected {expected})"
            )
        if entry["dtype"] != "<f4":
            raise InvalidArgument(f"tensor {name!r}: unsupported dtype {entry['dtype']!r}")
        end = off + nbytes
        if end > len(payload):
            raise InvalidArgument(
                f"payload truncated at offset {manifest_end + len(payload)}: "
                f"tensor {name!r} needs bytes up to {manifest_end + end}"
            )
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        if count * 4 != nbytes:
            raise InvalidArgument(f"tensor {name!r}: shape {shape} inconsistent with {nbytes} bytes")
        tensors[name] = np.frombuffer(payload, dtype="<f4", count=count, offset=off).reshape(shape).copy()
        expected = end
    if expected != len(payload):
        raise InvalidArgument(
            f"payload has {len(payload) - expected} trailing bytes after offset {manifest_end + expected}"
        )
    return Container(kind=manifest["kind"], meta=manifest["meta"], tensors=tensors)


def read_container(path: str | Path, expect_kind: str | None = None) -> Container:
    container = read_container_bytes(Path(path).read_bytes())
    if expect_kind is not None and container.kind != expect_kind:
        raise InvalidArgument(f"expected a {expect_kind!r} container, got {container.kind!r}")
    return container
