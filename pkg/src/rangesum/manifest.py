"""Run manifests and the JSON envelope shared by every CLI output."""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema

from . import __version__

KINDS = ("verify", "search", "audit", "construct", "directions", "profile", "report")


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class RunManifest:
    def __init__(self, subcommand: str, params: dict, seed: Optional[int] = None,
                 inputs=()):
        self.subcommand = subcommand
        self.params = params
        self.seed = seed
        self.inputs = {str(p): file_digest(p) for p in inputs}
        self.started = _now()
        self.finished: Optional[str] = None

    def close(self) -> None:
        self.finished = _now()

    def as_dict(self) -> dict:
        return {
            "tool": "rangesum",
            "version": __version__,
            "subcommand": self.subcommand,
            "params": self.params,
            "seed": self.seed,
            "started": self.started,
            "finished": self.finished or _now(),
            "input_digests": self.inputs,
        }


def envelope(manifest: RunManifest, result: dict) -> dict:
    return {"kind": manifest.subcommand, "manifest": manifest.as_dict(), "result": result}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_schema(kind: str) -> dict:
    text = resources.files("rangesum.schemas").joinpath(f"{kind}.schema.json").read_text()
    return json.loads(text)


def validate(doc: dict) -> None:
    """Raise jsonschema.ValidationError unless doc matches envelope and kind schemas."""
    jsonschema.validate(doc, load_schema("envelope"))
    jsonschema.validate(doc["result"], load_schema(doc["kind"]))


def load_document(path) -> dict:
    doc = json.loads(Path(path).read_text())
    validate(doc)
    return doc
