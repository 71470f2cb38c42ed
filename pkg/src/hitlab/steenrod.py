"""Steenrod squares on P_k and the spanning rows of the hit subspace."""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

import numpy as np

from ._jit import njit, use_jit
from .monomial import Monomial, monomial_index, poly_add

__all__ = [
    "POLICY_POW2",
    "POLICY_ALL",
    "binom_odd",
    "sq_on_monomial",
    "sq",
    "generator_indices",
    "hit_generator_stream",
    "sq_images",
    "sq_preimages",
]

POLICY_POW2 = "pow2"
POLICY_ALL = "all"


def binom_odd(a: int, i: int) -> bool:
    """C(a, i) mod 2 by Lucas: every bit of i is a bit of a."""
    return 0 <= i <= a and (i & ~a) == 0


def _submasks(a: int, cap: int) -> list[int]:
    out = []
    s = a
    while True:
        if s <= cap:
            out.append(s)
        if s == 0:
            return out
        s = (s - 1) & a


def _splits(m: Sequence[int], i: int) -> Iterator[tuple[int, ...]]:
    # all (i_1..i_k) with i_j a bit-submask of m_j and sum i
    k = len(m)
    suffix = [0] * (k + 1)
    for j in range(k - 1, -1, -1):
        suffix[j] = suffix[j + 1] + m[j]
    parts = [0] * k

    def rec(j: int, rem: int) -> Iterator[tuple[int, ...]]:
        if j == k:
            if rem == 0:
                yield tuple(parts)
            return
        if rem > suffix[j]:
            return
        for s in _submasks(m[j], rem):
            parts[j] = s
            yield from rec(j + 1, rem - s)

    yield from rec(0, i)


def sq_on_monomial(i: int, m: Sequence[int]) -> frozenset:
    """Sq^i(m) by the one-variable rule and the Cartan formula."""
    if i < 0:
        raise ValueError(f"Sq^{i} is undefined")
    return frozenset(tuple(a + s for a, s in zip(m, parts)) for parts in _splits(tuple(m), i))


def sq(i: int, p: Iterable[Monomial]) -> frozenset:
    return poly_add(*(sq_on_monomial(i, m) for m in p))


def generator_indices(n: int, policy: str = POLICY_POW2) -> list[int]:
    """The squares whose images span the hit part of degree n.

    With the 2-power policy these are Sq^(2^j), 2^(j+1) <= n.  The ``all``
    policy keeps every Sq^i with 2i <= n (instability kills larger i).
    """
    if policy == POLICY_POW2:
        out = []
        t = 1
        while 2 * t <= n:
            out.append(t)
            t *= 2
        return out
    if policy == POLICY_ALL:
        return list(range(1, n // 2 + 1))
    raise ValueError(f"unknown generator policy {policy!r}")


def hit_generator_stream(k: int, n: int, policy: str = POLICY_POW2) -> Iterator[frozenset]:
    """Yield Sq^i(m) for each spanning square i and each monomial m of degree n - i."""
    for i in generator_indices(n, policy):
        for row in monomial_index(k, n - i).exps:
            img = sq_on_monomial(i, tuple(int(a) for a in row))
            if img:
                yield img


# batched kernel: images of many monomials under one square

@njit(cache=True)
def _sq_images_jit(src, i):
    M, k = src.shape
    cap = 4 * M + 16
    out = np.empty((cap, k), dtype=np.int64)
    indptr = np.zeros(M + 1, dtype=np.int64)
    cur = np.zeros(k, dtype=np.int64)
    rem = np.zeros(k + 1, dtype=np.int64)
    suf = np.zeros(k + 1, dtype=np.int64)
    cnt = 0
    for r in range(M):
        a = src[r]
        suf[k] = 0
        for j in range(k - 1, -1, -1):
            suf[j] = suf[j + 1] + a[j]
        if suf[0] >= i:
            lvl = 0
            rem[0] = i
            cur[0] = a[0]
            while lvl >= 0:
                s = cur[lvl]
                if s < 0:
                    lvl -= 1
                    if lvl >= 0:
                        cur[lvl] = -1 if cur[lvl] == 0 else (cur[lvl] - 1) & a[lvl]
                    continue
                if s <= rem[lvl] and rem[lvl] - s <= suf[lvl + 1]:
                    if lvl == k - 1:
                        if cnt == out.shape[0]:
                            grown = np.empty((2 * out.shape[0], k), dtype=np.int64)
                            grown[:cnt] = out[:cnt]
                            out = grown
                        for j in range(k - 1):
                            out[cnt, j] = a[j] + cur[j]
                        out[cnt, k - 1] = a[k - 1] + s
                        cnt += 1
                    else:
                        rem[lvl + 1] = rem[lvl] - s
                        lvl += 1
                        cur[lvl] = a[lvl]
                        continue
                cur[lvl] = -1 if s == 0 else (s - 1) & a[lvl]
        indptr[r + 1] = cnt
    return indptr, out[:cnt]


def _sq_images_numpy(src: np.ndarray, i: int) -> tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(len(src) + 1, dtype=np.int64)
    terms: list[tuple[int, ...]] = []
    for r, row in enumerate(src):
        m = tuple(int(a) for a in row)
        terms.extend(tuple(a + s for a, s in zip(m, parts)) for parts in _splits(m, i))
        indptr[r + 1] = len(terms)
    out = np.array(terms, dtype=np.int64).reshape(-1, src.shape[1])
    return indptr, out


def sq_images(src: np.ndarray, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Images of the exponent rows ``src`` under Sq^i in CSR form.

    Returns ``(indptr, terms)``: the terms of Sq^i(src[r]) are
    ``terms[indptr[r]:indptr[r + 1]]``.
    """
    src = np.ascontiguousarray(src, dtype=np.int64)
    if src.ndim != 2:
        raise ValueError("src must be a 2-d exponent array")
    if use_jit():
        return _sq_images_jit(src, int(i))
    return _sq_images_numpy(src, int(i))


@njit(cache=True)
def _sq_preimages_jit(targets, i):
    M, k = targets.shape
    out = np.empty((4 * M + 16, k), dtype=np.int64)
    owner = np.empty(4 * M + 16, dtype=np.int64)
    cur = np.zeros(k, dtype=np.int64)
    rem = np.zeros(k + 1, dtype=np.int64)
    suf = np.zeros(k + 1, dtype=np.int64)
    cnt = 0
    for r in range(M):
        t = targets[r]
        suf[k] = 0
        for j in range(k - 1, -1, -1):
            suf[j] = suf[j + 1] + t[j] // 2
        if suf[0] < i:
            continue
        lvl = 0
        rem[0] = i
        cur[0] = min(i, t[0] // 2)
        while lvl >= 0:
            s = cur[lvl]
            if s < 0:
                lvl -= 1
                if lvl >= 0:
                    cur[lvl] -= 1
                continue
            if (s & ~(t[lvl] - s)) == 0 and rem[lvl] - s <= suf[lvl + 1]:
                if lvl == k - 1:
                    if s == rem[lvl]:
                        if cnt == out.shape[0]:
                            grown = np.empty((2 * out.shape[0], k), dtype=np.int64)
                            grown[:cnt] = out[:cnt]
                            out = grown
                            grown_owner = np.empty(2 * owner.shape[0], dtype=np.int64)
                            grown_owner[:cnt] = owner[:cnt]
                            owner = grown_owner
                        for j in range(k):
                            out[cnt, j] = t[j] - cur[j]
                        owner[cnt] = r
                        cnt += 1
                else:
                    rem[lvl + 1] = rem[lvl] - s
                    lvl += 1
                    cur[lvl] = min(rem[lvl], t[lvl] // 2)
                    continue
            cur[lvl] -= 1
    return out[:cnt], owner[:cnt]


def _sq_preimages_numpy(targets: np.ndarray, i: int) -> tuple[np.ndarray, np.ndarray]:
    found, owner = [], []
    for r, row in enumerate(targets):
        t = tuple(int(a) for a in row)
        options = [[p for p in range(min(i, a // 2) + 1) if p & ~(a - p) == 0] for a in t]
        for parts in itertools.product(*options):
            if sum(parts) == i:
                found.append(tuple(a - p for a, p in zip(t, parts)))
                owner.append(r)
    return np.array(found, dtype=np.int64).reshape(-1, targets.shape[1]), np.array(owner, dtype=np.int64)


def sq_preimages(targets: np.ndarray, i: int) -> tuple[np.ndarray, np.ndarray]:
    """All pairs (m, r) such that ``targets[r]`` is a term of Sq^i(m).

    Returns the exponent rows m and the matching target indices r.
    """
    targets = np.ascontiguousarray(targets, dtype=np.int64)
    if use_jit():
        return _sq_preimages_jit(targets, int(i))
    return _sq_preimages_numpy(targets, int(i))
