"""Append-only log of computed lengths.

Each line is ``<hash> <json>`` where ``<hash>`` is the first 16 hex digits of
the SHA-256 of the JSON text.  Records are keyed by (ring, ideal, q, engine);
lengths for the same (ring, ideal, q) must agree across engines.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from typing import Callable

from .. import __version__

log = logging.getLogger(__name__)


class CrossEngineDisagreement(RuntimeError):
    pass


class CacheMiss(KeyError):
    pass


@dataclass
class CorruptRecord:
    offset: int
    reason: str


@dataclass
class CacheStats:
    hits: int = 0
    computed: int = 0
    corrupt: list[CorruptRecord] = field(default_factory=list)


def _digest(body: str) -> str:
    return hashlib.sha256(body.encode()).hexdigest()[:16]


def encode_record(rec: dict) -> bytes:
    body = json.dumps(rec, sort_keys=True, separators=(",", ":"))
    return f"{_digest(body)} {body}\n".encode()


class LengthCache:
    """Thread-safe cache; one lock serializes index updates and file appends.

    ``path=None`` keeps everything in memory.  With ``replay=True`` a miss
    raises CacheMiss instead of computing.
    """

    def __init__(self, path: str | os.PathLike | None = None, replay: bool = False, version: str = __version__):
        self.path = os.fspath(path) if path is not None else None
        self.replay = replay
        self.version = version
        self.stats = CacheStats()
        self._lock = threading.Lock()
        self._exact: dict[tuple, int] = {}
        self._by_q: dict[tuple, dict[str, int]] = {}
        self.records: list[dict] = []
        if self.path and os.path.exists(self.path):
            self._load()

    # -- loading -----------------------------------------------------------
    def _load(self):
        with open(self.path, "rb") as fh:
            data = fh.read()
        offset = 0
        for raw in data.splitlines(keepends=True):
            start = offset
            offset += len(raw)
            if not raw.endswith(b"\n"):
                self._corrupt(start, "truncated record")
                break
            line = raw.rstrip(b"\n")
            if not line.strip():
                continue
            try:
                text = line.decode()
                digest, body = text.split(" ", 1)
                if _digest(body) != digest:
                    raise ValueError("hash mismatch")
                rec = json.loads(body)
                key = (rec["ring"], rec["ideal"], int(rec["q"]), rec["engine"])
                length = int(rec["length"])
            except (ValueError, KeyError, TypeError, UnicodeDecodeError) as exc:
                self._corrupt(start, str(exc) or exc.__class__.__name__)
                continue
            self._insert(key, length)
            self.records.append(rec)

    def _corrupt(self, offset: int, reason: str):
        log.warning("cache %s: corrupt record at byte %d (%s); it will be recomputed", self.path, offset, reason)
        self.stats.corrupt.append(CorruptRecord(offset, reason))

    def _insert(self, key: tuple, length: int):
        ring, ideal, q, engine = key
        others = self._by_q.setdefault((ring, ideal, q), {})
        for eng, val in others.items():
            if val != length:
                raise CrossEngineDisagreement(
                    f"ring {ring} ideal {ideal} q={q}: engine {eng} gave {val}, engine {engine} gave {length}")
        others[engine] = length
        self._exact[key] = length

    # -- access ------------------------------------------------------------
    def get(self, key: tuple) -> int | None:
        with self._lock:
            return self._exact.get(tuple(key))

    def lengths_for(self, ring: str, ideal: str, q: int) -> dict[str, int]:
        with self._lock:
            return dict(self._by_q.get((ring, ideal, q), {}))

    def get_or_compute(self, key: tuple, thunk: Callable[[], int]) -> int:
        key = (str(key[0]), str(key[1]), int(key[2]), str(key[3]))
        with self._lock:
            if key in self._exact:
                self.stats.hits += 1
                return self._exact[key]
        if self.replay:
            raise CacheMiss(key)
        value = int(thunk())
        self.put(key, value)
        return value

    def put(self, key: tuple, value: int):
        ring, ideal, q, engine = key
        with self._lock:
            if key in self._exact:
                if self._exact[key] != value:
                    raise CrossEngineDisagreement(f"{key}: cached {self._exact[key]}, recomputed {value}")
                return
            self._insert(key, value)
            self.stats.computed += 1
            rec = {"ring": ring, "ideal": ideal, "q": q, "engine": engine, "length": value,
                   "version": self.version, "timestamp": round(time.time(), 3)}
            self.records.append(rec)
            if self.path:
                with open(self.path, "ab") as fh:
                    fh.write(encode_record(rec))
                    fh.flush()
