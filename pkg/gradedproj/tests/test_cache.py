import json
import os

from gradedproj.cache import CACHE_FILE_NAME, CACHE_SCHEMA_VERSION, CharacterCache, cached, configure_cache, get_cache
from gradedproj.gammaposet import psi_node
from gradedproj.liealgebra import c_terms, psi_module


def _record(op, key, value, version=CACHE_SCHEMA_VERSION):
    return json.dumps({"schema_version": version, "lie_type": "B3", "op": op, "key": key, "value": value})


def test_put_and_reload(cache_dir):
    cache = CharacterCache(cache_dir)
    cache.put("B3", "c", "k1", 2)
    cache.put("B3", "d", "k2", [[1, 0, 0], 1])
    again = CharacterCache(cache_dir)
    assert again.get("B3", "c", "k1") == 2
    assert again.get("B3", "d", "k2") == [[1, 0, 0], 1]
    assert again.get("B3", "c", "other") is None
    stats = again.stats()
    assert stats.records == 2
    assert stats.ops == {"c": 1, "d": 1}


def test_corrupt_and_foreign_lines_are_skipped(cache_dir):
    os.makedirs(cache_dir)
    lines = [
        _record("c", "good", 1),
        "{not json",
        _record("c", "old", 5, version=CACHE_SCHEMA_VERSION + 1),
        json.dumps({"schema_version": CACHE_SCHEMA_VERSION, "op": "c"}),
        "",
        _record("d", "good", 3),
    ]
    with open(os.path.join(cache_dir, CACHE_FILE_NAME), "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    cache = CharacterCache(cache_dir)
    assert cache.get("B3", "c", "good") == 1
    assert cache.get("B3", "c", "old") is None
    assert cache.get("B3", "d", "good") == 3
    stats = cache.stats()
    assert (stats.records, stats.skipped) == (2, 3)


def test_read_only_cache_does_not_write(cache_dir):
    cache = CharacterCache(cache_dir, read_only=True)
    cache.put("B3", "c", "k", 1)
    assert cache.get("B3", "c", "k") == 1
    assert not os.path.exists(cache.path)


def test_clear(cache_dir):
    cache = CharacterCache(cache_dir)
    cache.put("B3", "c", "k", 1)
    cache.clear()
    assert not os.path.exists(cache.path)
    assert cache.stats().records == 0


def test_cached_computes_once(cache_dir):
    configure_cache(cache_dir)
    calls = []

    def compute():
        calls.append(1)
        return 7

    assert cached("B3", "c", "x", compute) == 7
    assert cached("B3", "c", "x", compute) == 7
    assert len(calls) == 1
    assert get_cache().stats().records == 1


def test_undecodable_values_are_recomputed(cache_dir):
    configure_cache(cache_dir)
    get_cache().put("B3", "c", "x", "not a number")
    assert cached("B3", "c", "x", lambda: 4, decode=int) == 4


def test_results_do_not_depend_on_the_cache(cache_dir, b4):
    lam = (1, 1, 1, 0)
    module = psi_module(psi_node(3, b4), b4)
    configure_cache(enabled=False)
    uncached = c_terms(lam, module, b4)

    configure_cache(cache_dir)
    first = c_terms(lam, module, b4)
    assert get_cache().stats().ops.get("c", 0) > 0
    configure_cache(cache_dir)
    second = c_terms(lam, module, b4)
    assert uncached == first == second
