"""
Persistent cache of expensive character computations.

Records are newline-delimited JSON objects
{schema_version, lie_type, op, key, value}. Records with another schema
version, or lines that fail to parse, are skipped with a warning and never
trusted. In-memory memoisation lives with the computing functions; this layer
only survives between runs.
"""

import json
import logging
import os
from collections import Counter
from typing import Any, Callable, Dict, Optional, Tuple

from dotenv import load_dotenv
from pydantic import ValidationError

from .errors import CacheCorruptionError
from .models import CacheRecord, CacheStats

logger = logging.getLogger(__name__)

load_dotenv()

CACHE_SCHEMA_VERSION = 1
CACHE_FILE_NAME = "gradedproj.jsonl"
DEFAULT_CACHE_DIR = os.getenv("GRADEDPROJ_CACHE_DIR", os.path.join(os.getcwd(), ".cache"))


def _parse_record(line: str) -> CacheRecord:
    try:
        record = CacheRecord.model_validate(json.loads(line))
    except (json.JSONDecodeError, ValidationError) as e:
        raise CacheCorruptionError(f"unreadable cache record: {e}") from e
    if record.schema_version != CACHE_SCHEMA_VERSION:
        raise CacheCorruptionError(
            f"cache record has schema_version {record.schema_version}, expected {CACHE_SCHEMA_VERSION}"
        )
    return record


class CharacterCache:
    """JSONL-backed key/value store keyed by (lie_type, op, key)."""

    def __init__(self, cache_dir: str = DEFAULT_CACHE_DIR, read_only: bool = False):
        self.cache_dir = cache_dir
        self.path = os.path.join(cache_dir, CACHE_FILE_NAME)
        self.read_only = read_only
        self._records: Dict[Tuple[str, str, str], Any] = {}
        self._skipped = 0
        self._loaded = False

    def _ensure_cache_dir_exists(self) -> None:
        if not os.path.exists(self.cache_dir):
            os.makedirs(self.cache_dir)
            logger.info(f"Created cache directory at: {self.cache_dir}")

    def load(self) -> None:
        self._records.clear()
        self._skipped = 0
        self._loaded = True
        if not os.path.exists(self.path):
            return
        try:
            with open(self.path, "r", encoding="utf-8") as f:
                for lineno, line in enumerate(f, start=1):
                    if not line.strip():
                        continue
                    try:
                        record = _parse_record(line)
                    except CacheCorruptionError as e:
                        self._skipped += 1
                        logger.warning(f"Skipping cache line {lineno} of {self.path}: {e}")
                        continue
                    self._records[(record.lie_type, record.op, record.key)] = record.value
        except IOError as e:
            logger.error(f"Error reading cache file {self.path}: {e}")
        logger.info(f"Loaded {len(self._records)} cache records from {self.path} ({self._skipped} skipped)")

    def get(self, lie_type: str, op: str, key: str) -> Optional[Any]:
        if not self._loaded:
            self.load()
        return self._records.get((lie_type, op, key))

    def put(self, lie_type: str, op: str, key: str, value: Any) -> None:
        if not self._loaded:
            self.load()
        self._records[(lie_type, op, key)] = value
        if self.read_only:
            return
        record = CacheRecord(schema_version=CACHE_SCHEMA_VERSION, lie_type=lie_type, op=op, key=key, value=value)
        try:
            self._ensure_cache_dir_exists()
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(record.model_dump_json() + "\n")
        except IOError as e:
            logger.error(f"Failed to append cache record to {self.path}: {e}")

    def stats(self) -> CacheStats:
        if not self._loaded:
            self.load()
        ops = Counter(op for (_, op, _) in self._records)
        return CacheStats(path=self.path, records=len(self._records), skipped=self._skipped, ops=dict(sorted(ops.items())))

    def clear(self) -> None:
        self._records.clear()
        self._skipped = 0
        if os.path.exists(self.path):
            try:
                os.remove(self.path)
                logger.info(f"Removed cache file {self.path}")
            except IOError as e:
                logger.error(f"Failed to remove cache file {self.path}: {e}")


_active_cache: Optional[CharacterCache] = None


def configure_cache(cache_dir: Optional[str] = None, enabled: bool = True, read_only: bool = False) -> Optional[CharacterCache]:
    """Install (or with enabled=False remove) the process-wide persistent cache."""
    global _active_cache
    _active_cache = CharacterCache(cache_dir or DEFAULT_CACHE_DIR, read_only=read_only) if enabled else None
    return _active_cache


def get_cache() -> Optional[CharacterCache]:
    return _active_cache


def cached(lie_type: str, op: str, key: str, compute: Callable[[], Any],
           encode: Callable[[Any], Any] = lambda v: v,
           decode: Callable[[Any], Any] = lambda v: v) -> Any:
    """Look a value up in the active cache, computing and storing it on a miss."""
    cache = _active_cache
    if cache is not None:
        hit = cache.get(lie_type, op, key)
        if hit is not None:
            try:
                return decode(hit)
            except (TypeError, ValueError, KeyError) as e:
                logger.warning(f"Ignoring undecodable cache value for {lie_type}/{op}/{key}: {e}")
    value = compute()
    if cache is not None:
        cache.put(lie_type, op, key, encode(value))
    return value
