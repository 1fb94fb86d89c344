"""Atomic file output, content digests and the per-directory run manifest."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any

from polycell import __version__
from polycell.evolve.nsga2 import GENERATOR

MANIFEST_NAME = "manifest.json"


def digest_bytes(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def digest_file(path: str | Path) -> str:
    return digest_bytes(Path(path).read_bytes())


def atomic_write(path: str | Path, text: str) -> str:
    """Write via a temp file in the same directory and rename; returns the digest."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = text.encode("utf-8")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return digest_bytes(data)


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"


class RunRecorder:
    """Collects the artifacts and step records of one command in an output directory.

    The manifest is merged with any manifest already present in the directory,
    so `sweep`, `train`, `fit` and `optimize` run into one directory produce a
    single manifest listing every artifact.
    """

    def __init__(self, out_dir: str | Path, config_echo: dict, seed: int | None):
        self.out_dir = Path(out_dir)
        self.config_echo = config_echo
        self.seed = seed
        self.artifacts: dict[str, str] = {}

    def write(self, name: str, text: str) -> Path:
        path = self.out_dir / name
        self.artifacts[name] = atomic_write(path, text)
        return path

    def _load_existing(self) -> dict:
        path = self.out_dir / MANIFEST_NAME
        if not path.exists():
            return {}
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError:
            return {}
        return doc if isinstance(doc, dict) else {}

    def finish(self, step: str, record: dict) -> Path:
        doc = self._load_existing()
        doc["toolkit"] = f"polycell {__version__}"
        doc["generator"] = {"algorithm": GENERATOR, "seed": self.seed}
        doc["config"] = self.config_echo
        steps = doc.setdefault("steps", {})
        steps[step] = {**record, "outputs": sorted(self.artifacts)}
        artifacts = doc.setdefault("artifacts", {})
        artifacts.update(self.artifacts)
        # drop entries whose files vanished
        for name in list(artifacts):
            if not (self.out_dir / name).exists():
                del artifacts[name]
        return Path(self._write_manifest(doc))

    def _write_manifest(self, doc: dict) -> Path:
        path = self.out_dir / MANIFEST_NAME
        atomic_write(path, dumps(doc))
        return path


def input_record(path: str | Path) -> dict[str, str]:
    path = Path(path)
    return {"name": path.name, "digest": digest_file(path)}
