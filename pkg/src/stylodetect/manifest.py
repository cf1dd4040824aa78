"""Run manifests embedded in every emitted report.

Volatile fields (timestamp, timing) live only inside the manifest so
two runs with identical inputs and flags produce reports that are
byte-identical once those fields are masked.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable

from stylodetect import __version__

#: Manifest keys that legitimately differ between identical runs.
VOLATILE_FIELDS = ("timestamp", "timing")


@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int
    corpus_digest: str
    version: str = __version__
    timestamp: str = ""
    timing: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "corpus_digest": self.corpus_digest,
            "version": self.version,
            "timestamp": self.timestamp,
            "timing": self.timing,
        }


def digest_paths(paths: Iterable[str]) -> str:
    """SHA-256 over the concatenated bytes of the inputs, in given order."""
    h = hashlib.sha256()
    for path in paths:
        with open(path, "rb") as fh:
            while True:
                chunk = fh.read(1 << 20)
                if not chunk:
                    break
                h.update(chunk)
    return h.hexdigest()


def build_manifest(command: str, config: dict, seed: int, corpus_paths: list[str]) -> RunManifest:
    return RunManifest(
        command=command,
        config=config,
        seed=seed,
        corpus_digest=digest_paths(corpus_paths),
        timestamp=datetime.now(timezone.utc).isoformat(),
    )


def report_json(manifest: RunManifest, body: dict) -> str:
    """Serialize a report with sorted keys and a trailing newline."""
    payload = {"manifest": manifest.to_dict(), **body}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def comparable_report(report: dict) -> dict:
    """A copy with the manifest's volatile fields removed, for diffing."""
    out = json.loads(json.dumps(report))
    for key in VOLATILE_FIELDS:
        out.get("manifest", {}).pop(key, None)
    return out
