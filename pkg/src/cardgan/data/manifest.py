"""Dataset manifest: the single source of truth for a dataset's entries.

Serialized as canonical JSON (sorted keys, fixed separators) so that
reruns over unchanged inputs produce byte-identical files.  Pruning and
failures only ever mark entries; nothing is deleted.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path

from ..container import canonical_json
from ..errors import InvalidArgument

import json


@dataclass
class ManifestEntry:
    id: str
    source_uri: str = ""
    filename: str = ""
    content_hash: str | None = None
    crop_box: tuple[int, int, int, int] | None = None  # left, top, right, bottom
    class_tags: list[str] = field(default_factory=list)
    pruned: bool = False
    prune_reason: str | None = None
    status: str = "ok"          # ok | failed
    error: str | None = None


@dataclass
class DatasetManifest:
    entries: dict[str, ManifestEntry] = field(default_factory=dict)
    resolution: int | None = None

    def add(self, entry: ManifestEntry) -> None:
        if entry.id in self.entries:
            raise InvalidArgument(f"duplicate dataset entry id {entry.id!r}")
        self.entries[entry.id] = entry

    def kept_entries(self) -> list[ManifestEntry]:
        """Entries that survive into the packed output, id-sorted."""
        return [e for _, e in sorted(self.entries.items())
                if not e.pruned and e.status == "ok"]

    def counts_per_tag(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for e in self.kept_entries():
            for tag in e.class_tags:
                counts[tag] = counts.get(tag, 0) + 1
        return counts

    def to_json(self) -> str:
        payload = {
            "resolution": self.resolution,
            "counts_per_tag": self.counts_per_tag(),
            "entries": [asdict(self.entries[k]) for k in sorted(self.entries)],
        }
        return canonical_json(payload)

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json())
        return path

    @classmethod
    def from_json(cls, text: str) -> "DatasetManifest":
        payload = json.loads(text)
        manifest = cls(resolution=payload.get("resolution"))
        for raw in payload["entries"]:
            raw = dict(raw)
            raw.pop("counts_per_tag", None)
            if raw.get("crop_box") is not None:
                raw["crop_box"] = tuple(raw["crop_box"])
            manifest.add(ManifestEntry(**raw))
        return manifest

    @classmethod
    def load(cls, path: str | Path) -> "DatasetManifest":
        return cls.from_json(Path(path).read_text())
