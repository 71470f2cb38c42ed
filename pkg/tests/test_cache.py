import pytest

from hitlab import cache as hcache
from hitlab.cache import Cache, CacheKey
from hitlab.hit import ORDER_ID, _positive_block, positive_block
from hitlab.steenrod import POLICY_ALL, POLICY_POW2


@pytest.fixture
def store(tmp_path):
    prev = hcache.active_cache()
    c = hcache.set_cache(tmp_path / "cache")
    _positive_block.cache_clear()
    yield c
    hcache._active = prev
    _positive_block.cache_clear()


def _key(k, n, policy=0):
    return CacheKey(k, n, ORDER_ID, policy, "full")


def test_warm_then_reload(store):
    blk = positive_block(4, 15, singer=False)
    data_path = store.root / f"{_key(4, 15).stem()}.bin"
    first = data_path.read_bytes()
    _positive_block.cache_clear()
    again = positive_block(4, 15, singer=False)
    assert (again.admissible() == blk.admissible()).all()
    assert data_path.read_bytes() == first
    ef = store.load_echelon(_key(4, 15))
    assert ef is not None and ef.rank == blk.echelon.rank


def test_entries_and_evict(store):
    positive_block(3, 9, singer=False)
    positive_block(3, 10, singer=False)
    assert len(store.entries()) == 2
    assert store.evict(degree=9) == 1
    assert [e["key"]["degree"] for e in store.entries()] == [10]
    assert store.evict() == 1 and store.entries() == []


def test_policy_is_part_of_the_key(store):
    positive_block(3, 9, singer=False)
    assert store.load_echelon(_key(3, 9, 0)) is not None
    assert store.load_echelon(_key(3, 9, 1)) is None
    a = positive_block(3, 9, POLICY_ALL, singer=False).admissible()
    b = positive_block(3, 9, POLICY_POW2, singer=False).admissible()
    assert (a == b).all()


@pytest.mark.parametrize("damage", ["flip", "truncate", "record"])
def test_corrupt_entry_is_recomputed(store, damage):
    good = positive_block(4, 11, singer=False).admissible()
    key = _key(4, 11)
    data_path = store.root / f"{key.stem()}.bin"
    rec_path = store.root / f"{key.stem()}.json"
    if damage == "flip":
        b = bytearray(data_path.read_bytes())
        b[-1] ^= 0xFF
        data_path.write_bytes(bytes(b))
    elif damage == "truncate":
        data_path.write_bytes(data_path.read_bytes()[:20])
    else:
        rec_path.write_text("{not json")
    assert store.load_echelon(key) is None
    _positive_block.cache_clear()
    assert (positive_block(4, 11, singer=False).admissible() == good).all()
    assert store.load_echelon(key) is not None


def test_missing_directory_lists_nothing(tmp_path):
    assert Cache(tmp_path / "none").entries() == []
