import os

import mpmath

from zeta_laplace_lab.cache import CACHE_DIR_ENV, ValueCache
from zeta_laplace_lab.client import ZetaClient
from zeta_laplace_lab.hpvalue import HPComplexValue


def test_put_then_get(tmp_path):
    cache = ValueCache(str(tmp_path))
    with mpmath.workdps(40):
        value = HPComplexValue(mpmath.mpc(+mpmath.pi, 1), mpmath.mpf("1e-30"), 30)
    cache.put("xi", mpmath.mpf("0.5"), 30, value)
    cached = cache.get("xi", mpmath.mpf("0.5"), 30)
    assert cached is not None
    assert abs(cached.value - value.value) < mpmath.mpf("1e-30")
    assert cache.stats() == {"hits": 1, "misses": 0, "writes": 1}


def test_key_depends_on_digits_and_function(tmp_path):
    cache = ValueCache(str(tmp_path))
    keys = {
        cache.build_key("xi", mpmath.mpf(2), 30),
        cache.build_key("xi", mpmath.mpf(2), 31),
        cache.build_key("zeta", mpmath.mpf(2), 30),
    }
    assert len(keys) == 3
    assert cache.build_key("xi", mpmath.mpf(2), 30) == cache.build_key("xi", mpmath.mpf(2), 30)
    assert cache.get("xi", mpmath.mpf(2), 30) is None


def test_corrupt_entry_is_a_miss(tmp_path):
    cache = ValueCache(str(tmp_path))
    key = cache.build_key("zeta", mpmath.mpf(3), 20)
    path = cache._path(key)
    os.makedirs(os.path.dirname(path))
    with open(path, "w") as f:
        f.write("{not json")
    assert cache.get("zeta", mpmath.mpf(3), 20) is None
    assert cache.misses == 1


def test_clear(tmp_path):
    cache = ValueCache(str(tmp_path))
    value = HPComplexValue(mpmath.mpc(1), mpmath.mpf(0), 20)
    cache.put("zeta", 1, 20, value)
    cache.put("zeta", 2, 20, value)
    assert cache.clear() == 2
    assert cache.get("zeta", 1, 20) is None


def test_environment_overrides_config(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_DIR_ENV, str(tmp_path / "env"))
    cache = ValueCache.from_environment(str(tmp_path / "config"))
    assert cache.cache_dir == str(tmp_path / "env")


def test_no_directory_means_no_cache():
    assert ValueCache.from_environment(None) is None


def test_client_serves_repeats_from_cache(tmp_path):
    client = ZetaClient.from_config({"cache_dir": str(tmp_path)})
    first = client.zeta(3, 20)
    second = client.zeta(3, 20)
    assert client.evaluations == 1
    assert abs(first.value - second.value) <= first.err
    assert client.stats()["hits"] == 1


def test_client_without_cache():
    client = ZetaClient.from_config({"cache_enabled": False, "cache_dir": "/nonexistent"})
    assert client.cache is None
    client.zeta(3, 20)
    client.zeta(3, 20)
    assert client.evaluations == 2
