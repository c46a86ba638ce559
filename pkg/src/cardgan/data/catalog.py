"""Catalog fetching: card database API client with a local-mirror mode.

``api_base_uri`` is either an HTTP(S) endpoint serving a JSON catalog or a
local directory holding ``catalog.json`` plus the image files (the mirror
layout used by tests and offline runs).  Two catalog shapes are accepted:
the native one, ``{"entries": [{"id", "image", "tags"}]}``, and the
ygoprodeck-style ``{"data": [{"id", "type", "card_images": [...]}]}``.

Fetching is idempotent and resumable: files already present with a
matching content hash are not downloaded again, and per-entry failures
are recorded in the manifest without aborting the run.
"""

from __future__ import annotations

import hashlib
import json
import logging
import shutil
import time
from pathlib import Path

from ..errors import InvalidArgument
from .manifest import DatasetManifest, ManifestEntry

log = logging.getLogger(__name__)

RETRIES = 3
BACKOFF_SECONDS = 1.0


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _normalize_catalog(payload: dict) -> list[dict]:
    if "entries" in payload:
        return [
            {"id": str(e["id"]), "image": e["image"], "tags": list(e.get("tags", []))}
            for e in payload["entries"]
        ]
    if "data" in payload:
        out = []
        for card in payload["data"]:
            images = card.get("card_images") or []
            out.append({
                "id": str(card["id"]),
                "image": images[0]["image_url"] if images else "",
                "tags": [card["type"]] if card.get("type") else [],
            })
        return out
    raise InvalidArgument("catalog JSON has neither 'entries' nor 'data'")


def _http_get(url: str) -> bytes:
    import requests

    last_error: Exception | None = None
    for attempt in range(RETRIES):
        try:
            response = requests.get(url, timeout=30)
            response.raise_for_status()
            return response.content
        except Exception as exc:  # noqa: BLE001 - every failure is retried alike
            last_error = exc
            if attempt + 1 < RETRIES:
                time.sleep(BACKOFF_SECONDS * 2**attempt)
    raise RuntimeError(f"failed after {RETRIES} attempts: {last_error}")


def fetch_catalog(api_base_uri: str, out_dir: str | Path) -> DatasetManifest:
    """Fetch the catalog and every entry's image into ``out_dir/raw``.

    Writes ``out_dir/manifest.json`` and returns the manifest.  Reruns over
    complete data download nothing and leave the manifest byte-identical.
    """
    out_dir = Path(out_dir)
    raw_dir = out_dir / "raw"
    raw_dir.mkdir(parents=True, exist_ok=True)

    mirror = Path(api_base_uri)
    if mirror.is_dir():
        catalog = _normalize_catalog(json.loads((mirror / "catalog.json").read_text()))
        fetch_one = lambda src, dst: shutil.copyfile(mirror / src, dst)  # noqa: E731
        uri_of = lambda src: str(mirror / src)  # noqa: E731
    else:
        base = api_base_uri.rstrip("/")
        catalog = _normalize_catalog(json.loads(_http_get(f"{base}/cardinfo.php")))
        fetch_one = lambda src, dst: dst.write_bytes(_http_get(src))  # noqa: E731
        uri_of = lambda src: src  # noqa: E731

    manifest = DatasetManifest()
    for item in sorted(catalog, key=lambda e: e["id"]):
        suffix = Path(str(item["image"])).suffix or ".png"
        filename = f"{item['id']}{suffix}"
        dest = raw_dir / filename
        entry = ManifestEntry(id=item["id"], source_uri=uri_of(item["image"]),
                              filename=filename, class_tags=item["tags"])
        try:
            if not dest.exists():
                fetch_one(item["image"], dest)
            entry.content_hash = _sha256(dest)
        except Exception as exc:  # noqa: BLE001 - entry isolation by contract
            entry.status = "failed"
            entry.error = str(exc)
            log.warning("entry %s failed: %s", item["id"], exc)
        manifest.add(entry)
    manifest.save(out_dir / "manifest.json")
    return manifest
