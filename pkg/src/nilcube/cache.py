"""Content-addressed result cache.

Entries are keyed by the hash of the canonical JSON of a request plus
the algorithm version; values are JSON documents.  Writes go through a
temporary file and an atomic rename, so concurrent readers never see a
torn entry.  Certificates make stale entries detectable: replaying a
cached decision re-verifies its certificate against a freshly rebuilt
system before it is served.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

#: bump when a change could alter any cached payload
ALGO_VERSION = "1"

ENV_VAR = "NILCUBE_CACHE_DIR"


def cache_dir() -> Path:
    root = os.environ.get(ENV_VAR)
    if root:
        return Path(root)
    return Path.home() / ".cache" / "nilcube"


def request_key(request: dict) -> str:
    payload = json.dumps(
        {"algo": ALGO_VERSION, "request": request},
        sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def get(request: dict) -> dict | None:
    path = cache_dir() / f"{request_key(request)}.json"
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None


def put(request: dict, payload: dict) -> Path:
    root = cache_dir()
    root.mkdir(parents=True, exist_ok=True)
    path = root / f"{request_key(request)}.json"
    fd, tmp = tempfile.mkstemp(dir=root, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path


def write_blob(name: str, payload: dict) -> Path:
    """Store a named JSON artifact (certificates) in the cache tree."""
    root = cache_dir() / "certificates"
    root.mkdir(parents=True, exist_ok=True)
    path = root / f"{name}.json"
    fd, tmp = tempfile.mkstemp(dir=root, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path
