"""
Cache for canonicalized building balls.

Backends:
- Redis when REDIS_URL is configured
- JSON files under CACHE_DIR otherwise
Both fail open: a broken cache never breaks an experiment.
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Optional
from app.core.config import settings

logger = logging.getLogger(__name__)

# Redis client (sync)
redis_client = None

# Flag to track if Redis is available
_redis_available = False

KEY_PREFIX = "abels:ball:"


def _get_redis_client():
    """
    Internal: Get or create Redis client.
    Lazy initialization pattern.
    """
    global redis_client, _redis_available

    if not settings.REDIS_URL:
        return None

    if redis_client is None:
        try:
            import redis
            redis_client = redis.from_url(
                settings.REDIS_URL,
                encoding="utf-8",
                decode_responses=True
            )
            _redis_available = True
        except Exception as e:
            logger.error(f"Failed to connect to Redis: {e}")
            _redis_available = False
            return None

    return redis_client


def cache_key(*parts: Any) -> str:
    """Stable key from JSON-able parts (order matters)."""
    raw = json.dumps(parts, sort_keys=True, separators=(",", ":"), default=str)
    return KEY_PREFIX + hashlib.sha256(raw.encode("utf-8")).hexdigest()


def _cache_path(key: str) -> Optional[Path]:
    if not settings.CACHE_DIR:
        return None
    return Path(settings.CACHE_DIR) / f"{key.replace(':', '_')}.json"


def get_cache(key: str) -> Optional[Any]:
    """
    Get cached value.

    Args:
        key: Cache key from cache_key()

    Returns:
        Cached value (JSON deserialized) or None
    """
    try:
        client = _get_redis_client()
        if client is not None:
            value = client.get(key)
            return json.loads(value) if value else None

        path = _cache_path(key)
        if path is None or not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))
    except Exception as e:
        logger.warning(f"Cache read failed for {key}, recomputing: {e}")
        return None


def set_cache(key: str, value: Any, ttl_seconds: Optional[int] = None) -> None:
    """
    Set cache value.

    Args:
        key: Cache key from cache_key()
        value: Value to cache (will be JSON serialized)
        ttl_seconds: Redis expiry; ignored by the file backend
    """
    try:
        serialized = json.dumps(value, sort_keys=True)
        client = _get_redis_client()
        if client is not None:
            if ttl_seconds:
                client.setex(key, ttl_seconds, serialized)
            else:
                client.set(key, serialized)
            return

        path = _cache_path(key)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(serialized, encoding="utf-8")
    except Exception as e:
        logger.warning(f"Cache write failed for {key}: {e}")
