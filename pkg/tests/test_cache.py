import json

import pytest

from twistscope.cache import LPolyCache, resolve_cache_dir
from twistscope.curvecount import lpoly
from twistscope.errors import BudgetExceededError


@pytest.fixture
def cache(tmp_path):
    return LPolyCache(tmp_path / "cache")


class TestBasics:
    def test_miss_on_empty(self, cache, genus2_pair):
        assert cache.get(genus2_pair[0], 3) is None

    def test_put_get_roundtrip(self, cache, genus2_pair):
        curve = genus2_pair[0]
        L = lpoly(curve, 3)
        cache.put(curve, 3, counts=[4, 6], lpoly=L)
        record = cache.get(curve, 3)
        assert record["counts"] == [4, 6]
        assert tuple(record["lpoly"]) == L.coeffs

    def test_corrupt_record_is_miss(self, cache, genus2_pair):
        curve = genus2_pair[0]
        cache.put(curve, 3, counts=[4])
        path = cache._path(curve, 3)
        path.write_text("{ not json")
        assert cache.get(curve, 3) is None

    def test_weil_invalid_lpoly_is_miss(self, cache, genus2_pair):
        curve = genus2_pair[0]
        cache.put(curve, 3, counts=[4])
        path = cache._path(curve, 3)
        record = json.loads(path.read_text())
        record["lpoly"] = [1, 7, 7, 7, 9]  # fails the functional equation
        path.write_text(json.dumps(record))
        assert cache.get(curve, 3) is None

    def test_version_mismatch_is_miss(self, cache, genus2_pair):
        curve = genus2_pair[0]
        cache.put(curve, 3, counts=[4])
        path = cache._path(curve, 3)
        record = json.loads(path.read_text())
        record["tool_version"] = "0.0.0-old"
        path.write_text(json.dumps(record))
        assert cache.get(curve, 3) is None

    def test_disabled_cache_never_stores(self, genus2_pair):
        cache = LPolyCache("", enabled=False)
        cache.put(genus2_pair[0], 3, counts=[4])
        assert cache.get(genus2_pair[0], 3) is None

    def test_distinct_labels_distinct_keys(self, cache, genus2_pair):
        from twistscope.curvecount import CurveModel

        curve = genus2_pair[0]
        alias = CurveModel("alias", curve.f_coeffs, curve.genus)
        cache.put(curve, 3, counts=[4])
        assert cache.get(alias, 3) is None


class TestComputeThrough:
    def test_lpoly_stores_and_replays(self, cache, genus2_pair):
        curve = genus2_pair[0]
        first = cache.lpoly(curve, 3, budget=10**6)
        record = cache.get(curve, 3)
        assert tuple(record["lpoly"]) == first.coeffs
        assert record["counts"] == [4, 6]
        # replay without recomputation: poison the stored counts to prove
        # the polynomial is served from disk
        again = cache.lpoly(curve, 3, budget=0)
        assert again.coeffs == first.coeffs

    def test_budget_abort_keeps_prefix_then_resumes(self, cache, genus4_pair):
        curve = genus4_pair[0]
        with pytest.raises(BudgetExceededError):
            cache.lpoly(curve, 3, budget=39)  # room for N_1..N_3 only
        assert cache.get(curve, 3)["counts"] == [4, 10, 28]
        L = cache.lpoly(curve, 3, budget=81)  # the missing p^4 enumeration fits
        assert L.coeffs == (1, 0, 0, 0, 18, 0, 0, 0, 81)

    def test_counts_through_cache(self, cache, genus4_pair):
        curve = genus4_pair[0]
        out = cache.counts(curve, 53, upto=2, budget=10**6)
        assert out == [53 + 1, 53**2 + 1]
        assert cache.get(curve, 53)["counts"] == out
        assert cache.counts(curve, 53, upto=1, budget=0) == [54]

    def test_counts_recovered_from_lpoly(self, cache, genus2_pair):
        curve = genus2_pair[0]
        cache.lpoly(curve, 5, budget=10**6)
        # cached record has counts for i <= g; ask beyond the stored prefix
        out = cache.counts(curve, 5, upto=4, budget=0)
        assert out[:2] == [cache.get(curve, 5)["counts"][0], cache.get(curve, 5)["counts"][1]]
        assert len(out) == 4

    def test_trace_uses_count_prefix(self, cache, genus2_pair):
        curve = genus2_pair[1]
        assert cache.trace(curve, 7) == 0
        assert cache.get(curve, 7)["counts"] == [8]
        assert cache.trace(curve, 7) == 0


class TestResolveDir:
    def test_flag_beats_env(self, monkeypatch):
        monkeypatch.setenv("TWISTSCOPE_CACHE_DIR", "/env/dir")
        assert str(resolve_cache_dir("/flag/dir")) == "/flag/dir"

    def test_env_beats_default(self, monkeypatch):
        monkeypatch.setenv("TWISTSCOPE_CACHE_DIR", "/env/dir")
        assert str(resolve_cache_dir(None)) == "/env/dir"

    def test_default(self, monkeypatch):
        monkeypatch.delenv("TWISTSCOPE_CACHE_DIR", raising=False)
        assert str(resolve_cache_dir(None)) == ".twistscope-cache"
