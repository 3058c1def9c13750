"""
Probe Cache
===========
Persistent memoization of probe points using diskcache.

Keys are the SHA-256 of the canonical JSON of (probe, config, point), so a
cached run and a fresh run produce identical reports.

BigO:
- Get: O(1) hash lookup
- Set: O(1) hash insert
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import diskcache as dc

from core.config import get_settings
from core.logger import get_logger


def canonical_key(probe: str, config: Dict[str, Any], point: Any) -> str:
    """Stable key for one probe point."""
    payload = {"probe": probe, "config": config, "point": point}
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return f"{probe}:{hashlib.sha256(text.encode()).hexdigest()}"


class ProbeCache:
    """
    Disk-backed cache of probe measurements.

    Values are plain dicts of floats; anything else is rejected on write.
    """

    def __init__(self, cache_dir: Optional[str] = None, size_limit_mb: Optional[int] = None):
        settings = get_settings()
        self.cache_dir = Path(cache_dir or settings.CACHE_DIR)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        limit = (size_limit_mb or settings.CACHE_SIZE_LIMIT_MB) * 1024 * 1024
        self.cache = dc.Cache(str(self.cache_dir), size_limit=limit)
        self.logger = get_logger()
        self.hits = 0
        self.misses = 0

    def get(self, key: str) -> Optional[Dict[str, float]]:
        try:
            return self.cache.get(key, default=None)
        except Exception as e:
            self.logger.warning("Probe cache read failed", context={"key": key, "error": str(e)})
            return None

    def set(self, key: str, value: Dict[str, float]) -> bool:
        if not isinstance(value, dict):
            raise TypeError(f"probe cache stores dicts, got {type(value).__name__}")
        try:
            self.cache.set(key, {str(k): float(v) for k, v in value.items()})
            return True
        except Exception as e:
            self.logger.warning("Probe cache write failed", context={"key": key, "error": str(e)})
            return False

    def get_or_compute(
        self,
        probe: str,
        config: Dict[str, Any],
        point: Any,
        factory: Callable[[], Dict[str, float]],
    ) -> Dict[str, float]:
        """Cached measurements of one point, computed by factory on a miss."""
        key = canonical_key(probe, config, point)
        value = self.get(key)
        if value is not None:
            self.hits += 1
            return value
        self.misses += 1
        value = factory()
        self.set(key, value)
        return value

    def clear(self) -> int:
        count = len(self.cache)
        self.cache.clear()
        return count

    def stats(self) -> Dict[str, Any]:
        return {
            "entries": len(self.cache),
            "volume_bytes": self.cache.volume(),
            "hits": self.hits,
            "misses": self.misses,
            "directory": str(self.cache_dir),
        }

    def close(self) -> None:
        self.cache.close()


def get_probe_cache() -> Optional[ProbeCache]:
    """A cache when CACHE_ENABLED is set, else None."""
    settings = get_settings()
    if not settings.CACHE_ENABLED:
        return None
    return ProbeCache(settings.CACHE_DIR, settings.CACHE_SIZE_LIMIT_MB)
