"""On-disk memoization of class groups and cubic-field enumerations.

One JSON-lines file per object kind; every line carries the key, the value
and a SHA-256 of the canonical value encoding.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from filelock import FileLock

__all__ = ["CorruptCacheEntry", "Cache", "canonical_json"]


class CorruptCacheEntry(ValueError):
    pass


def canonical_json(value):
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


def _digest(text):
    return hashlib.sha256(text.encode()).hexdigest()


def _umask():
    mask = os.umask(0)
    os.umask(mask)
    return mask


class Cache:
    def __init__(self, directory):
        self.directory = Path(directory)
        self._loaded = {}

    def _path(self, kind):
        return self.directory / f"{kind}.jsonl"

    def _load(self, kind):
        if kind in self._loaded:
            return self._loaded[kind]
        entries = {}
        path = self._path(kind)
        if path.exists():
            with open(path) as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        rec = json.loads(line)
                        entries[rec["key"]] = rec
        self._loaded[kind] = entries
        return entries

    def get(self, kind, key):
        """Stored value for ``(kind, key)``, or ``None`` on a miss.

        Raises :class:`CorruptCacheEntry` when the stored checksum does not
        match the stored value.
        """
        rec = self._load(kind).get(key)
        if rec is None:
            return None
        text = canonical_json(rec["value"])
        if _digest(text) != rec.get("sha256"):
            raise CorruptCacheEntry(f"checksum mismatch for {kind}:{key}")
        return rec["value"]

    def put(self, kind, key, value):
        self.put_many(kind, [(key, value)])

    def put_many(self, kind, items):
        items = list(items)
        if not items:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self._path(kind)
        with FileLock(str(path) + ".lock"):
            # re-read under the lock so concurrent writers do not drop entries
            self._loaded.pop(kind, None)
            entries = self._load(kind)
            for key, value in items:
                text = canonical_json(value)
                entries[key] = {"key": key, "value": json.loads(text), "sha256": _digest(text)}
            fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=f".{kind}.", suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                for key in sorted(entries):
                    fh.write(canonical_json(entries[key]) + "\n")
            os.chmod(tmp, 0o666 & ~_umask())
            os.replace(tmp, path)

    def memo(self, kind, key, compute):
        """``get`` falling back to ``compute()``; corrupt entries are recomputed and rewritten."""
        try:
            value = self.get(kind, key)
        except CorruptCacheEntry:
            value = None
        if value is None:
            value = compute()
            self.put(kind, key, value)
        return value
