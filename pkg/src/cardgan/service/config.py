"""Service configuration: one JSON file plus environment overrides.

Environment variables win over the file; both win over defaults.
Recognized variables: ``CARDGAN_MODEL_DIR``, ``CARDGAN_HOST``,
``CARDGAN_PORT``, ``CARDGAN_ARCHIVE_DIR``, ``CARDGAN_BASIS_CACHE_DIR``,
``CARDGAN_MAX_UPLOAD_BYTES``, ``CARDGAN_PCA_SAMPLES``, ``CARDGAN_WORKERS``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path


@dataclass
class ServiceConfig:
    model_dir: str = "models"
    host: str = "127.0.0.1"
    port: int = 8000
    archive_dir: str = "archives"
    basis_cache_dir: str = "basis-cache"
    max_upload_bytes: int = 8 * 1024 * 1024
    pca_samples: int = 4096
    pca_seed: int = 0
    max_pca_edits: int = 10
    workers: int = 1
    projection_steps_default: int = 400
    projection_steps_max: int = 2000

    _ENV = {
        "model_dir": "CARDGAN_MODEL_DIR",
        "host": "CARDGAN_HOST",
        "port": "CARDGAN_PORT",
        "archive_dir": "CARDGAN_ARCHIVE_DIR",
        "basis_cache_dir": "CARDGAN_BASIS_CACHE_DIR",
        "max_upload_bytes": "CARDGAN_MAX_UPLOAD_BYTES",
        "pca_samples": "CARDGAN_PCA_SAMPLES",
        "workers": "CARDGAN_WORKERS",
    }

    @classmethod
    def load(cls, config_file: str | Path | None = None,
             env: dict[str, str] | None = None) -> "ServiceConfig":
        env = os.environ if env is None else env
        values: dict = {}
        if config_file is not None:
            values.update(json.loads(Path(config_file).read_text()))
        for f in fields(cls):
            var = cls._ENV.get(f.name)
            if var and var in env:
                raw = env[var]
                values[f.name] = int(raw) if f.type == "int" else raw
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unknown service config keys: {sorted(unknown)}")
        return cls(**values)
