"""Content-addressed on-disk cache for ξ/ζ values.

Readers never lock. Writers take an exclusive lock file next to the entry and
publish with an atomic rename, so concurrent readers see either nothing or a
complete entry.
"""
import contextlib
import hashlib
import json
import os
import tempfile
import time
from typing import Optional

import mpmath
import singer

from zeta_laplace_lab.hpvalue import HPComplexValue

LOGGER = singer.get_logger()

CACHE_DIR_ENV = "ZETA_LAB_CACHE_DIR"
LOCK_TIMEOUT = 30.0


def serialize_argument(value) -> str:
    """Exact text form of an argument: mpmath's repr keeps every bit."""
    if isinstance(value, (int, str)):
        return str(value)
    if isinstance(value, mpmath.mpc):
        return f"{mpmath.mpf(value.real)!r}|{mpmath.mpf(value.imag)!r}"
    return repr(mpmath.mpf(value))


class ValueCache:
    def __init__(self, cache_dir: str) -> None:
        self.cache_dir = cache_dir
        os.makedirs(cache_dir, exist_ok=True)
        self.hits = 0
        self.misses = 0
        self.writes = 0

    @classmethod
    def from_environment(cls, cache_dir: Optional[str] = None) -> Optional["ValueCache"]:
        cache_dir = os.environ.get(CACHE_DIR_ENV) or cache_dir
        if not cache_dir:
            return None
        return cls(cache_dir)

    def build_key(self, function: str, argument, digits: int) -> str:
        key = {"function": function, "argument": serialize_argument(argument), "digits": digits}
        return hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()

    def _path(self, key: str) -> str:
        return os.path.join(self.cache_dir, key[:2], f"{key}.json")

    def get(self, function: str, argument, digits: int) -> Optional[HPComplexValue]:
        key = self.build_key(function, argument, digits)
        path = self._path(key)
        if not os.path.exists(path):
            self.misses += 1
            return None
        try:
            with open(path) as f:
                entry = json.load(f)
            if entry["digits"] != digits or entry["function"] != function:
                raise ValueError("entry does not match its key")
            with mpmath.workdps(digits + 10):
                value = mpmath.mpc(mpmath.mpf(entry["real"]), mpmath.mpf(entry["imag"]))
                result = HPComplexValue(value, mpmath.mpf(entry["err"]), digits)
        except (OSError, ValueError, KeyError, TypeError) as e:
            LOGGER.warning(f"Corrupt cache entry {path} ({e}); recomputing")
            self.misses += 1
            return None
        self.hits += 1
        return result

    def put(self, function: str, argument, digits: int, value: HPComplexValue) -> None:
        key = self.build_key(function, argument, digits)
        path = self._path(key)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with mpmath.workdps(digits + 10):
            entry = {
                "function": function,
                "argument": serialize_argument(argument),
                "digits": digits,
                "real": mpmath.nstr(mpmath.re(value.value), digits + 10),
                "imag": mpmath.nstr(mpmath.im(value.value), digits + 10),
                "err": mpmath.nstr(value.err, 10),
            }
        with self._lock(path):
            handle, temporary = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
            with os.fdopen(handle, "w") as f:
                json.dump(entry, f)
            os.replace(temporary, path)
        self.writes += 1

    def _lock(self, path: str):
        return _LockFile(f"{path}.lock")

    def stats(self) -> dict:
        return {"hits": self.hits, "misses": self.misses, "writes": self.writes}

    def clear(self) -> int:
        removed = 0
        for root, _, files in os.walk(self.cache_dir):
            for name in files:
                if name.endswith(".json"):
                    os.remove(os.path.join(root, name))
                    removed += 1
        return removed


class _LockFile:
    def __init__(self, path: str) -> None:
        self.path = path

    def __enter__(self):
        deadline = time.monotonic() + LOCK_TIMEOUT
        while True:
            try:
                self.handle = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
                return self
            except FileExistsError:
                if time.monotonic() > deadline:
                    LOGGER.warning(f"Stale cache lock {self.path}; breaking it")
                    with contextlib.suppress(FileNotFoundError):
                        os.remove(self.path)
                    continue
                time.sleep(0.01)

    def __exit__(self, *exc_info) -> None:
        os.close(self.handle)
        os.remove(self.path)
