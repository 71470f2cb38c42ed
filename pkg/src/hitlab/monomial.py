"""Monomials and polynomials over F2, weight vectors and the monomial order.

A monomial in ``P_k = F2[x1, ..., xk]`` is an exponent tuple of length k.
A polynomial is a ``frozenset`` of such tuples (coefficients are implicit 1s).
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

Monomial = tuple[int, ...]
Polynomial = frozenset

__all__ = [
    "Monomial",
    "Polynomial",
    "NoSpikeError",
    "weight_vector",
    "weight_degree",
    "compare_weights",
    "compare_monomials",
    "order_key",
    "is_spike",
    "minimal_spike",
    "enumerate_monomials",
    "enumerate_monomials_up_to_weight",
    "count_monomials",
    "x_complement",
    "support",
    "format_monomial",
    "parse_monomial",
    "format_tuple",
    "parse_tuple",
    "format_polynomial",
    "parse_polynomial",
    "poly",
    "poly_add",
    "poly_mul",
    "poly_degree",
    "MonomialIndex",
    "monomial_index",
]


class NoSpikeError(ValueError):
    """Raised when no spike of the requested degree exists in P_k."""


def weight_vector(m: Sequence[int]) -> tuple[int, ...]:
    """Return ``omega(m)``: entry i counts exponents with bit i-1 set."""
    top = max(m, default=0).bit_length()
    return tuple(sum((a >> i) & 1 for a in m) for i in range(top))


def weight_degree(w: Sequence[int]) -> int:
    return sum(c << i for i, c in enumerate(w))


def _padded(u: Sequence[int], length: int) -> tuple[int, ...]:
    return tuple(u) + (0,) * (length - len(u))


def compare_weights(u: Sequence[int], v: Sequence[int]) -> int:
    """Left-lexicographic comparison after zero-padding to a common length."""
    n = max(len(u), len(v))
    pu, pv = _padded(u, n), _padded(v, n)
    return (pu > pv) - (pu < pv)


def order_key(m: Sequence[int], length: int | None = None) -> tuple[int, ...]:
    """Sort key realising the monomial order among monomials of one degree.

    ``length`` pads the weight vector; it must be at least the bit length of
    the degree when keys of different monomials are compared.
    """
    w = weight_vector(m)
    if length is None:
        length = max(sum(m), 1).bit_length()
    return _padded(w, length) + tuple(m)


def compare_monomials(a: Sequence[int], b: Sequence[int]) -> int:
    """Return -1, 0 or 1 as ``a`` is smaller, equal or larger than ``b``."""
    if len(a) != len(b):
        raise ValueError(f"variable counts differ: {len(a)} != {len(b)}")
    if sum(a) != sum(b):
        raise ValueError(f"degrees differ: {sum(a)} != {sum(b)}")
    c = compare_weights(weight_vector(a), weight_vector(b))
    if c:
        return c
    ta, tb = tuple(a), tuple(b)
    return (ta > tb) - (ta < tb)


def is_spike(m: Sequence[int]) -> bool:
    return all((a & (a + 1)) == 0 for a in m)


def minimal_spike(n: int, k: int) -> Monomial:
    """The spike of degree n with exponents 2^t1-1, ..., 2^tr-1, t1 > ... > t(r-1) >= tr.

    Built greedily: keep taking the largest 2^t - 1 that leaves a remainder
    expressible with the variables still available.
    """
    from .arith import mu, mu_decomposition

    if n == 0:
        return (0,) * k
    if mu(n) > k:
        raise NoSpikeError(f"no spike of degree {n} in P_{k}")
    parts = mu_decomposition(n)
    return tuple((1 << v) - 1 for v in parts) + (0,) * (k - len(parts))


def count_monomials(k: int, n: int) -> int:
    from math import comb

    return comb(n + k - 1, k - 1)


def _compositions(k: int, n: int) -> Iterable[Monomial]:
    # stars and bars
    for bars in itertools.combinations(range(n + k - 1), k - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(n + k - 2 - prev)
        yield tuple(out)


def enumerate_monomials(k: int, n: int) -> list[Monomial]:
    """All degree-n monomials of P_k, largest first."""
    return [tuple(int(a) for a in row) for row in monomial_index(k, n).exps]


def enumerate_monomials_up_to_weight(
    k: int, n: int, w: Sequence[int], strict: bool = False
) -> list[Monomial]:
    """Degree-n monomials with ``omega <= w`` (``omega < w`` when strict), largest first."""
    if weight_degree(w) != n:
        raise ValueError(f"deg {tuple(w)} = {weight_degree(w)} != {n}")
    out = []
    for m in enumerate_monomials(k, n):
        c = compare_weights(weight_vector(m), w)
        if c < 0 or (c == 0 and not strict):
            out.append(m)
    return out


def x_complement(J: Iterable[int], k: int) -> Monomial:
    """Product of x_j over j (1-based) outside J."""
    Js = set(J)
    if any(j < 1 or j > k for j in Js):
        raise ValueError(f"index set {sorted(Js)} not inside 1..{k}")
    return tuple(0 if j + 1 in Js else 1 for j in range(k))


def support(m: Sequence[int]) -> tuple[int, ...]:
    """0-based positions of the variables occurring in m."""
    return tuple(j for j, a in enumerate(m) if a)


# text forms

_FACTOR = re.compile(r"x(\d+)(?:\^\{?(\d+)\}?)?")


def format_monomial(m: Sequence[int]) -> str:
    parts = []
    for j, a in enumerate(m, start=1):
        if a == 1:
            parts.append(f"x{j}")
        elif a:
            parts.append(f"x{j}^{a}")
    return " ".join(parts) if parts else "1"


def parse_monomial(text: str, k: int | None = None) -> Monomial:
    """Parse ``"x1^3 x2 x4^2"`` or ``"(3,1,0,2)"``.

    ``k`` is required for the factor form unless the highest variable index
    is the intended k.
    """
    s = text.strip()
    if s.startswith("("):
        m = parse_tuple(s)
        if k is not None and len(m) != k:
            raise ValueError(f"{text!r} has {len(m)} exponents, expected {k}")
        return m
    exps: dict[int, int] = {}
    rest = s
    if s not in ("", "1"):
        rest = _FACTOR.sub(lambda mt: _take(mt, exps), s).replace("*", "")
    if rest.strip() not in ("", "1"):
        raise ValueError(f"cannot parse monomial {text!r}")
    top = max(exps, default=0)
    if k is None:
        k = max(top, 1)
    if top > k:
        raise ValueError(f"{text!r} uses x{top} but k = {k}")
    return tuple(exps.get(j, 0) for j in range(1, k + 1))


def _take(mt: re.Match, exps: dict[int, int]) -> str:
    j = int(mt.group(1))
    if j < 1:
        raise ValueError("variables are numbered from 1")
    exps[j] = exps.get(j, 0) + int(mt.group(2) or 1)
    return ""


def format_tuple(m: Sequence[int]) -> str:
    return "(" + ",".join(str(a) for a in m) + ")"


def parse_tuple(text: str) -> Monomial:
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"not a tuple form: {text!r}")
    body = s[1:-1].strip()
    if not body:
        raise ValueError("empty exponent tuple")
    return tuple(int(t) for t in body.split(","))


def format_polynomial(p: Iterable[Sequence[int]]) -> str:
    ms = sorted(p, key=lambda m: order_key(m, 64), reverse=True)
    return " + ".join(format_monomial(m) for m in ms) if ms else "0"


def parse_polynomial(text: str, k: int | None = None) -> frozenset:
    s = text.strip()
    if s == "0":
        return frozenset()
    terms = [t for t in s.split("+")]
    if k is None:
        k = max((max((int(j) for j in re.findall(r"x(\d+)", t)), default=1) for t in terms), default=1)
    return poly(parse_monomial(t, k) for t in terms)


# polynomial arithmetic

def poly(monomials: Iterable[Sequence[int]]) -> frozenset:
    """Polynomial from a monomial list, cancelling repeated terms in pairs."""
    acc: set = set()
    for m in monomials:
        acc ^= {tuple(m)}
    return frozenset(acc)


def poly_add(*ps: Iterable[Monomial]) -> frozenset:
    acc: set = set()
    for p in ps:
        acc.symmetric_difference_update(p)
    return frozenset(acc)


def poly_mul(p: Iterable[Monomial], q: Iterable[Monomial]) -> frozenset:
    return poly(tuple(a + b for a, b in zip(x, y)) for x in p for y in q)


def poly_degree(p: Iterable[Monomial]) -> int:
    degs = {sum(m) for m in p}
    if len(degs) > 1:
        raise ValueError(f"polynomial is not homogeneous: degrees {sorted(degs)}")
    return degs.pop() if degs else 0


# column indexing

@lru_cache(maxsize=None)
def _binomials(top: int, width: int) -> np.ndarray:
    from math import comb

    table = np.zeros((top + 1, width + 1), dtype=np.int64)
    for a in range(top + 1):
        for b in range(width + 1):
            table[a, b] = comb(a, b)
    return table


class MonomialIndex:
    """Degree-n monomials of P_k laid out as linear-algebra columns.

    Column 0 is the largest monomial.  ``exps`` holds the exponent rows in
    column order.  Every monomial also has a combinatorial rank (the colex
    rank of its stars-and-bars bar positions); ``col_of_rank`` maps that
    rank to the column, which lets compiled kernels locate columns without
    hashing.
    """

    def __init__(self, k: int, n: int):
        self.k = k
        self.n = n
        self.bits = max(n, 1).bit_length()
        self.binom = _binomials(n + k, k)
        raw = np.array(list(_compositions(k, n)), dtype=np.int64).reshape(-1, k)
        w = np.stack([((raw >> t) & 1).sum(axis=1) for t in range(self.bits)], axis=1)
        keys = [raw[:, j] for j in reversed(range(k))] + [w[:, t] for t in reversed(range(self.bits))]
        order = np.lexsort(keys)[::-1]
        self.exps = np.ascontiguousarray(raw[order])
        self.weights = np.ascontiguousarray(w[order])
        ranks = self.rank_array(self.exps)
        self.col_of_rank = np.empty(len(ranks), dtype=np.int64)
        self.col_of_rank[ranks] = np.arange(len(ranks), dtype=np.int64)

    def __len__(self) -> int:
        return len(self.exps)

    def rank_array(self, exps: np.ndarray) -> np.ndarray:
        """Colex ranks of exponent rows (all of degree n)."""
        exps = np.asarray(exps, dtype=np.int64).reshape(-1, self.k)
        pos = np.cumsum(exps[:, :-1], axis=1) + np.arange(self.k - 1)
        r = np.zeros(len(exps), dtype=np.int64)
        for j in range(self.k - 1):
            r += self.binom[pos[:, j], j + 1]
        return r

    def columns(self, monomials: Iterable[Sequence[int]]) -> np.ndarray:
        arr = np.array([tuple(m) for m in monomials], dtype=np.int64).reshape(-1, self.k)
        if len(arr) and (arr.sum(axis=1) != self.n).any():
            raise ValueError(f"monomial of wrong degree for index (k={self.k}, n={self.n})")
        return self.col_of_rank[self.rank_array(arr)]

    def column(self, m: Sequence[int]) -> int:
        return int(self.columns([m])[0])

    def monomial(self, col: int) -> Monomial:
        return tuple(int(a) for a in self.exps[col])

    def weight(self, col: int) -> tuple[int, ...]:
        w = tuple(int(c) for c in self.weights[col])
        while w and w[-1] == 0:
            w = w[:-1]
        return w

    def positive_mask(self) -> np.ndarray:
        return (self.exps > 0).all(axis=1)


@lru_cache(maxsize=32)
def monomial_index(k: int, n: int) -> MonomialIndex:
    if k < 1 or n < 0:
        raise ValueError(f"need k >= 1 and n >= 0, got k={k}, n={n}")
    return MonomialIndex(k, n)
