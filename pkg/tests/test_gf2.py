import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hitlab import _jit
from hitlab.gf2 import CacheFormatError, EchelonForm, pack_columns, rows_from_csr, unpack_columns

from oracles import BitSpan


def rand_rows(rnd, n, width, density=0.3):
    return [[c for c in range(width) if rnd.random() < density] for _ in range(n)]


def as_int(cols):
    v = 0
    for c in cols:
        v ^= 1 << int(c)
    return v


def test_absorb_basics():
    ef = EchelonForm(10)
    assert not ef.absorb(pack_columns([], 10))
    assert ef.absorb(pack_columns([1], 10))
    assert not ef.absorb(pack_columns([1], 10))
    assert ef.rank == 1
    with pytest.raises(ValueError):
        ef.absorb(pack_columns([1], 70))


def test_reduce_basics():
    ef = EchelonForm.from_rows(8, [pack_columns([0, 3], 8), pack_columns([3, 5], 8)])
    for r in ef.rows:
        assert not ef.reduce(r).any()
    r = pack_columns([2, 6], 8)
    assert (EchelonForm(8).reduce(r) == r).all()
    res = ef.reduce(pack_columns([0, 1], 8))
    assert not any(ef.is_pivot(int(c)) for c in unpack_columns(res))


@settings(max_examples=60)
@given(st.integers(1, 200), st.integers(0, 40), st.randoms())
def test_rank_and_residual_against_bitset_oracle(width, nrows, rnd):
    rows = rand_rows(rnd, nrows, width)
    ef = EchelonForm(width)
    if rows:
        ef.absorb_many(np.array([pack_columns(r, width) for r in rows]))
    ef.rref()
    span = BitSpan()
    for r in rows:
        span.add(as_int(r))
    assert ef.rank == len(span) <= min(nrows, width)
    x = rand_rows(rnd, 1, width)[0]
    res = unpack_columns(ef.reduce(pack_columns(x, width)))
    assert span.reduce(as_int(x) ^ as_int(res)) == 0  # x + residual lies in the row space
    # fully reduced: no row has a bit at another row's pivot
    piv = set(int(c) for c in ef.pivots)
    for row, c in zip(ef.rows, ef.pivots):
        assert set(int(b) for b in unpack_columns(row)) & piv == {int(c)}
        assert int(unpack_columns(row)[0]) == c


@settings(max_examples=40)
@given(st.integers(1, 150), st.integers(1, 30), st.randoms())
def test_order_independence(width, nrows, rnd):
    rows = [pack_columns(r, width) for r in rand_rows(rnd, nrows, width)]
    a = EchelonForm.from_rows(width, rows)
    rnd.shuffle(rows)
    b = EchelonForm(width)
    for r in rows:
        b.absorb(r)
    b.rref()
    assert (a.pivots == b.pivots).all()
    assert (a.rows == b.rows).all()


@settings(max_examples=60)
@given(st.integers(1, 64), st.randoms())
def test_intersection_rank_identity(width, rnd):
    A = EchelonForm.from_rows(width, [pack_columns(r, width) for r in rand_rows(rnd, rnd.randint(0, 12), width)])
    B = EchelonForm.from_rows(width, [pack_columns(r, width) for r in rand_rows(rnd, rnd.randint(0, 12), width)])
    S = EchelonForm.from_rows(width, list(A.rows) + list(B.rows)) if A.rank + B.rank else EchelonForm(width)
    I = A.intersect(B)
    assert I.rank == A.rank + B.rank - S.rank
    for r in I.rows:
        assert A.contains(r) and B.contains(r)


def test_intersect_trivial_cases():
    V = EchelonForm.from_rows(20, [pack_columns([1, 2], 20), pack_columns([5], 20)])
    assert V.intersect(V).rank == V.rank
    assert V.intersect(EchelonForm(20)).rank == 0
    with pytest.raises(ValueError):
        V.intersect(EchelonForm(21))


def test_bytes_roundtrip():
    rnd = random.Random(7)
    ef = EchelonForm.from_rows(300, [pack_columns(r, 300) for r in rand_rows(rnd, 50, 300, 0.1)])
    data = ef.to_bytes(5, 15, 1, 0, (3, 2, 2))
    back, meta = EchelonForm.from_bytes(data)
    assert meta["k"] == 5 and meta["degree"] == 15 and tuple(meta["weight"]) == (3, 2, 2)
    assert (back.rows == ef.rows).all() and (back.pivots == ef.pivots).all()
    assert back.to_bytes(5, 15, 1, 0, (3, 2, 2)) == data
    with pytest.raises(CacheFormatError):
        EchelonForm.from_bytes(data[:-3])
    with pytest.raises(CacheFormatError):
        EchelonForm.from_bytes(b"XXXX" + data[4:])


def test_rows_from_csr_xor_accumulates():
    R = rows_from_csr(np.array([0, 3, 3, 5]), np.array([1, 1, 70, 2, 4]), 80)
    assert list(unpack_columns(R[0])) == [70]
    assert not R[1].any()
    assert list(unpack_columns(R[2])) == [2, 4]


@pytest.mark.parametrize("seed", range(4))
def test_jit_and_numpy_paths_agree(seed):
    rnd = random.Random(seed)
    width = rnd.randint(60, 400)
    rows = np.array([pack_columns(r, width) for r in rand_rows(rnd, 120, width, 0.05)])
    probe = np.array([pack_columns(r, width) for r in rand_rows(rnd, 20, width, 0.2)])
    prev = _jit.use_jit()
    out = {}
    try:
        for flag in (True, False):
            _jit.set_jit(flag)
            ef = EchelonForm(width)
            ef.absorb_many(rows[:60])
            ef.absorb_many(rows[60:])
            ef.rref()
            p = probe.copy()
            ef.reduce_many(p)
            out[flag] = (ef.rows.copy(), ef.pivots.copy(), p)
    finally:
        _jit.set_jit(prev)
    for a, b in zip(out[True], out[False]):
        assert (a == b).all()
