"""On-disk cache of beam tables, keyed by the canonical alpha string.

Entries are written atomically (temporary file, then rename) and carry a
sha256 checksum of their payload, so a hit returns exactly the bytes that
were stored.  Bumping :data:`CODE_VERSION` invalidates every entry.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

CODE_VERSION = "1"


def cache_key(alpha_canonical: str, precision: int, band, kind: str = "beams") -> str:
    ident = json.dumps([kind, alpha_canonical, precision, list(band), CODE_VERSION])
    return hashlib.sha256(ident.encode()).hexdigest()


class BeamCache:
    def __init__(self, directory):
        self.dir = Path(directory)

    def _path(self, key: str) -> Path:
        return self.dir / f"{key}.json"

    def get(self, key: str):
        path = self._path(key)
        try:
            entry = json.loads(path.read_text())
        except (OSError, ValueError):
            return None
        payload = entry.get("payload")
        if entry.get("version") != CODE_VERSION or not isinstance(payload, str):
            return None
        if hashlib.sha256(payload.encode()).hexdigest() != entry.get("checksum"):
            return None
        return payload

    def put(self, key: str, payload: str) -> Path:
        self.dir.mkdir(parents=True, exist_ok=True)
        entry = {"version": CODE_VERSION, "key": key, "checksum": hashlib.sha256(payload.encode()).hexdigest(),
                 "payload": payload}
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return self._path(key)

    def get_or_compute(self, key: str, compute):
        hit = self.get(key)
        if hit is not None:
            return hit, True
        payload = compute()
        self.put(key, payload)
        return payload, False
