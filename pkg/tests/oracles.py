"""Slow reference implementations used to cross-check the library.

None of these share code with ``hitlab``: squares come from the total
square x -> x + x^2 expanded by repeated multiplication, spans from
python-integer bitsets, and mu from a breadth-first search.
"""

from __future__ import annotations

import itertools
from functools import lru_cache


def _mul1(p: dict[int, int], q: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for a in p:
        for b in q:
            out[a + b] = out.get(a + b, 0) ^ 1
    return {e: 1 for e, c in out.items() if c}


@lru_cache(maxsize=None)
def total_square_power(a: int) -> tuple[int, ...]:
    """Exponents e with x^e in (x + x^2)^a over F_2."""
    p = {0: 1}
    for _ in range(a):
        p = _mul1(p, {1: 1, 2: 1})
    return tuple(sorted(p))


def sq_total(i: int, m: tuple[int, ...]) -> frozenset:
    """Sq^i(m) as the degree (deg m + i) part of the total square of m."""
    target = sum(m) + i
    acc: dict[tuple[int, ...], int] = {(): 1}
    for a in m:
        nxt: dict[tuple[int, ...], int] = {}
        for pre in acc:
            for e in total_square_power(a):
                key = pre + (e,)
                nxt[key] = nxt.get(key, 0) ^ 1
        acc = {k: 1 for k, c in nxt.items() if c}
    return frozenset(t for t in acc if sum(t) == target)


def mu_search(n: int) -> int:
    """Least number of summands 2^u - 1 (u >= 1) adding up to n, by search."""
    if n == 0:
        return 0
    parts = [(1 << u) - 1 for u in range(1, n.bit_length() + 1) if (1 << u) - 1 <= n]
    frontier, seen, r = {0}, {0}, 0
    while True:
        r += 1
        frontier = {s + p for s in frontier for p in parts if s + p <= n} - seen
        if n in frontier:
            return r
        seen |= frontier


class BitSpan:
    """GF(2) span over python ints, one bit per column."""

    def __init__(self):
        self.basis: dict[int, int] = {}  # top bit -> vector

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            if top not in self.basis:
                return v
            v ^= self.basis[top]
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if v:
            self.basis[v.bit_length() - 1] = v
            return True
        return False

    def __len__(self) -> int:
        return len(self.basis)


def compositions(k: int, n: int):
    for bars in itertools.combinations(range(n + k - 1), k - 1):
        prev, out = -1, []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(n + k - 2 - prev)
        yield tuple(out)


def weights(m) -> tuple[int, ...]:
    top = max(m, default=0).bit_length()
    return tuple(sum((a >> t) & 1 for a in m) for t in range(top))


def sort_key(m, length: int = 16) -> tuple:
    w = weights(m)
    return tuple(w) + (0,) * (length - len(w)) + tuple(m)


def admissible_bruteforce(k: int, n: int) -> list[tuple[int, ...]]:
    """Admissible monomials straight from the definition: m is inadmissible
    iff m lies in span(hit elements, monomials smaller than m)."""
    mons = sorted(compositions(k, n), key=sort_key)
    bit = {m: i for i, m in enumerate(mons)}
    span = BitSpan()
    for i in range(1, n // 2 + 1):
        for src in compositions(k, n - i):
            v = 0
            for t in sq_total(i, src):
                v ^= 1 << bit[t]
            span.add(v)
    out = []
    for m in mons:  # ascending: everything already added is smaller than m
        if span.reduce(1 << bit[m]):
            out.append(m)
        span.add(1 << bit[m])
    return out
