"""On-disk cache of echelon forms.

Each entry is a binary echelon file plus a small JSON record holding its
sha256.  A record whose checksum does not match is treated as a miss and
the entry is recomputed.  Writers serialize through an advisory lock file.
"""

from __future__ import annotations

import contextlib
import fcntl
import hashlib
import json
import os
from dataclasses import asdict, dataclass
from pathlib import Path

from .gf2 import CacheFormatError, EchelonForm

__all__ = ["CacheKey", "Cache", "default_cache_dir", "active_cache", "set_cache", "CACHE_VERSION"]

CACHE_VERSION = 1


@dataclass(frozen=True)
class CacheKey:
    k: int
    degree: int
    order_id: int
    policy_id: int
    variant: str = "full"

    def stem(self) -> str:
        return f"echelon_k{self.k}_n{self.degree}_o{self.order_id}_p{self.policy_id}_{self.variant}"


def default_cache_dir() -> Path:
    env = os.environ.get("HITLAB_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "hitlab"


class Cache:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    def _paths(self, key: CacheKey) -> tuple[Path, Path]:
        return self.root / f"{key.stem()}.bin", self.root / f"{key.stem()}.json"

    @contextlib.contextmanager
    def _lock(self):
        self.root.mkdir(parents=True, exist_ok=True)
        with open(self.root / ".lock", "w") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                yield
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def load_echelon(self, key: CacheKey) -> EchelonForm | None:
        data_path, rec_path = self._paths(key)
        try:
            rec = json.loads(rec_path.read_text())
            data = data_path.read_bytes()
        except (OSError, ValueError):
            return None
        if rec.get("version") != CACHE_VERSION or rec.get("key") != asdict(key):
            return None
        if hashlib.sha256(data).hexdigest() != rec.get("sha256"):
            return None
        try:
            ef, meta = EchelonForm.from_bytes(data)
        except CacheFormatError:
            return None
        if (meta["k"], meta["degree"], meta["order_id"], meta["policy_id"]) != (
            key.k, key.degree, key.order_id, key.policy_id
        ):
            return None
        ef.fully_reduced = True
        return ef

    def save_echelon(self, key: CacheKey, ef: EchelonForm) -> Path:
        data = ef.to_bytes(key.k, key.degree, key.order_id, key.policy_id)
        data_path, rec_path = self._paths(key)
        rec = {
            "version": CACHE_VERSION,
            "kind": "echelon",
            "key": asdict(key),
            "width": ef.width,
            "rank": ef.rank,
            "sha256": hashlib.sha256(data).hexdigest(),
        }
        with self._lock():
            tmp = data_path.with_suffix(".tmp")
            tmp.write_bytes(data)
            os.replace(tmp, data_path)
            rec_path.write_text(json.dumps(rec, indent=1, sort_keys=True))
        return data_path

    def entries(self) -> list[dict]:
        out = []
        if not self.root.is_dir():
            return out
        for rec_path in sorted(self.root.glob("echelon_*.json")):
            try:
                rec = json.loads(rec_path.read_text())
            except ValueError:
                rec = {"key": rec_path.stem, "corrupt": True}
            data_path = rec_path.with_suffix(".bin")
            rec["bytes"] = data_path.stat().st_size if data_path.exists() else 0
            rec["file"] = data_path.name
            out.append(rec)
        return out

    def evict(self, k: int | None = None, degree: int | None = None) -> int:
        removed = 0
        with self._lock():
            for rec_path in self.root.glob("echelon_*.json"):
                try:
                    key = json.loads(rec_path.read_text())["key"]
                except (ValueError, KeyError):
                    key = {}
                if k is not None and key.get("k") != k:
                    continue
                if degree is not None and key.get("degree") != degree:
                    continue
                rec_path.with_suffix(".bin").unlink(missing_ok=True)
                rec_path.unlink()
                removed += 1
        return removed


_active: Cache | None = Cache(os.environ["HITLAB_CACHE"]) if os.environ.get("HITLAB_CACHE") else None


def active_cache() -> Cache | None:
    return _active


def set_cache(root: str | os.PathLike | None) -> Cache | None:
    """Enable the disk cache at ``root`` (``None`` disables it)."""
    global _active
    _active = Cache(root) if root is not None else None
    return _active
