"""Hit subspaces, admissible bases and the maps between P_(k-1) and P_k.

Steenrod squares never change which variables occur in a monomial, so the
hit subspace splits along supports.  The monomials with a fixed support S of
size j form a copy of the positive part of P_j, and the order restricted to
them agrees with the order on P_j after deleting the absent variables.  We
therefore eliminate only positive parts (:class:`PositiveBlock`) and assemble
everything else by relabelling.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import cache as _cache
from .arith import mu
from .gf2 import EchelonForm, pack_columns, rows_from_csr, unpack_columns
from .monomial import (
    Monomial,
    compare_weights,
    minimal_spike,
    monomial_index,
    order_key,
    poly_degree,
    weight_vector,
)
from .steenrod import POLICY_ALL, POLICY_POW2, generator_indices, sq_images, sq_preimages

__all__ = [
    "ORDER_ID",
    "NotApplicableError",
    "AdmissibleBasis",
    "StrictInadmissibilityCertificate",
    "PositiveBlock",
    "HitSpace",
    "positive_block",
    "hit_space_of",
    "hit_space",
    "admissible_basis",
    "admissible_basis_weighted",
    "split_zero_positive",
    "is_hit",
    "normal_form",
    "normal_form_weighted",
    "singer_prefilter",
    "wood_vanishing",
    "is_strictly_inadmissible",
    "extend_monomial",
    "f_embed",
    "p_contract",
    "weighted_quotient_dim",
]

ORDER_ID = 1  # weight vector first, then exponents, both left-lexicographic

# positive blocks larger than this are prefiltered when singer=None
AUTO_SINGER_THRESHOLD = 20000


class NotApplicableError(ValueError):
    """Raised when a criterion's hypothesis fails (no spike in that degree)."""


@dataclass(frozen=True)
class AdmissibleBasis:
    k: int
    degree: int
    monomials: tuple[Monomial, ...]
    weight: tuple[int, ...] | None = None
    provenance: tuple[int, str] = (ORDER_ID, POLICY_POW2)

    def __len__(self) -> int:
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __contains__(self, m) -> bool:
        return tuple(m) in set(self.monomials)

    def index(self, m) -> int:
        return self.monomials.index(tuple(m))


@dataclass(frozen=True)
class StrictInadmissibilityCertificate:
    monomial: Monomial
    s: int
    verdict: bool

    def __bool__(self) -> bool:
        return self.verdict


def _spike_weight_mask(weights: np.ndarray, target: Sequence[int]) -> np.ndarray:
    """Rows of ``weights`` (zero padded) that are lexicographically below ``target``."""
    L = weights.shape[1]
    tw = list(target)[:L] + [0] * max(0, L - len(target))
    below = np.zeros(len(weights), dtype=bool)
    decided = np.zeros(len(weights), dtype=bool)
    for t in range(L):
        c = weights[:, t]
        below |= ~decided & (c < tw[t])
        decided |= c != tw[t]
    return below


class PositiveBlock:
    """Hit subspace of the positive part of P_k in degree n.

    Columns are the positive monomials of degree n in descending order.  With
    ``singer=True`` monomials whose weight lies below that of the minimal
    spike are dropped up front: they are hit, so the block then describes the
    hit space modulo their span, which has the same admissible monomials and
    normal forms.
    """

    def __init__(self, k: int, n: int, policy: str = POLICY_POW2, singer: bool = False,
                 max_square: int | None = None, echelon: EchelonForm | None = None):
        self.k, self.n, self.policy = k, n, policy
        self.max_square = max_square
        self.index = monomial_index(k, n)
        keep = self.index.positive_mask()
        self.singer = bool(singer and n > 0 and mu(n) <= k)
        if self.singer:
            keep &= ~_spike_weight_mask(self.index.weights, weight_vector(minimal_spike(n, k)))
        self.cols = np.flatnonzero(keep)
        self.local_of = np.full(len(self.index), -1, dtype=np.int64)
        self.local_of[self.cols] = np.arange(len(self.cols))
        self.width = len(self.cols)
        self.echelon = echelon if echelon is not None else self._eliminate()

    def squares(self) -> list[int]:
        sq = generator_indices(self.n, self.policy)
        if self.max_square is not None:
            sq = [i for i in sq if i <= self.max_square]
        return sq

    def generator_rows(self, i: int) -> np.ndarray:
        """Packed rows Sq^i(m) for positive m of degree n - i, restricted to kept columns."""
        if self.width * 4 < int(self.index.positive_mask().sum()):
            # few kept columns: read the rows off the (source, target) incidences
            src, target = sq_preimages(self.index.exps[self.cols], i)
            if len(src) == 0:
                return np.zeros((0, self.echelon_words()), dtype=np.uint64)
            _, owner = np.unique(src, axis=0, return_inverse=True)
            owner = owner.reshape(-1)
            order = np.argsort(owner, kind="stable")
            indptr = np.concatenate([[0], np.cumsum(np.bincount(owner))])
            rows = rows_from_csr(indptr, target[order], self.width)
        else:
            src = monomial_index(self.k, self.n - i).exps
            src = src[(src > 0).all(axis=1)]
            indptr, terms = sq_images(src, i)
            cols = self.local_of[self.index.col_of_rank[self.index.rank_array(terms)]]
            good = cols >= 0
            csum = np.concatenate([[0], np.cumsum(good)])
            rows = rows_from_csr(csum[indptr], cols[good], self.width)
        return rows[rows.any(axis=1)]

    def echelon_words(self) -> int:
        return (self.width + 63) // 64

    def _eliminate(self, chunk: int = 8192) -> EchelonForm:
        ef = EchelonForm(self.width)
        for i in self.squares():
            rows = self.generator_rows(i)
            for s in range(0, len(rows), chunk):
                ef.absorb_many(rows[s:s + chunk])
                if ef.rank == self.width:
                    break
        return ef.rref()

    def admissible_local(self) -> np.ndarray:
        return np.flatnonzero(~self.echelon.pivot_mask())

    def admissible(self) -> np.ndarray:
        """Exponent rows of the admissible positive monomials, largest first."""
        return self.index.exps[self.cols[self.admissible_local()]]

    def local_columns(self, monomials: np.ndarray) -> np.ndarray:
        """Kept-column index of each positive exponent row, -1 for dropped (hit) ones."""
        return self.local_of[self.index.col_of_rank[self.index.rank_array(monomials)]]


def _policy_id(policy: str) -> int:
    return {POLICY_POW2: 0, POLICY_ALL: 1}[policy]


def resolve_singer(k: int, n: int, singer: bool | None) -> bool:
    """``None`` means prefilter only blocks with more than AUTO_SINGER_THRESHOLD columns."""
    if singer is None:
        from math import comb

        return n >= k and comb(n - 1, k - 1) > AUTO_SINGER_THRESHOLD
    return bool(singer)


def positive_block(k: int, n: int, policy: str = POLICY_POW2, singer: bool | None = None,
                   max_square: int | None = None) -> PositiveBlock:
    return _positive_block(k, n, policy, resolve_singer(k, n, singer), max_square)


@lru_cache(maxsize=16)
def _positive_block(k: int, n: int, policy: str, singer: bool, max_square: int | None) -> PositiveBlock:
    store = _cache.active_cache()
    key = None
    if store is not None and max_square is None:
        key = _cache.CacheKey(k, n, ORDER_ID, _policy_id(policy), "singer" if singer else "full")
        ef = store.load_echelon(key)
        if ef is not None:
            blk = PositiveBlock(k, n, policy, singer, echelon=ef)
            if ef.width == blk.width:
                return blk
    blk = PositiveBlock(k, n, policy, singer, max_square)
    if key is not None:
        store.save_echelon(key, blk.echelon)
    return blk


class HitSpace:
    """The hit subspace of P_k in degree n, assembled from positive blocks."""

    def __init__(self, k: int, n: int, policy: str = POLICY_POW2, singer: bool | None = None):
        if k < 1 or n < 0:
            raise ValueError(f"need k >= 1 and n >= 0, got k={k}, n={n}")
        self.k, self.n, self.policy = k, n, policy
        self.blocks = {j: positive_block(j, n, policy, singer) for j in range(1, min(k, n) + 1)}
        self.singer = any(blk.singer for blk in self.blocks.values())

    def admissible(self) -> list[Monomial]:
        """All admissible monomials, ascending."""
        if self.n == 0:
            return [(0,) * self.k]
        out: list[Monomial] = []
        for j, blk in self.blocks.items():
            local = [tuple(int(a) for a in row) for row in blk.admissible()]
            for S in itertools.combinations(range(self.k), j):
                for m in local:
                    e = [0] * self.k
                    for pos, a in zip(S, m):
                        e[pos] = a
                    out.append(tuple(e))
        L = max(self.n, 1).bit_length()
        out.sort(key=lambda m: order_key(m, L))
        return out

    def dimension(self) -> int:
        if self.n == 0:
            return 1
        from math import comb

        return sum(comb(self.k, j) * (blk.width - blk.echelon.rank) for j, blk in self.blocks.items())

    def normal_forms(self, polys: Sequence[Iterable[Monomial]]) -> list[frozenset]:
        """Reduce each polynomial to its sum of admissible monomials."""
        groups: dict[tuple[int, ...], tuple[list[int], list[Monomial]]] = {}
        for pi, p in enumerate(polys):
            for m in p:
                if len(m) != self.k:
                    raise ValueError(f"monomial {m} is not in P_{self.k}")
                if sum(m) != self.n:
                    raise ValueError(f"monomial {m} has degree {sum(m)}, expected {self.n}")
                S = tuple(j for j, a in enumerate(m) if a)
                g = groups.setdefault(S, ([], []))
                g[0].append(pi)
                g[1].append(tuple(m[j] for j in S))
        out: list[set] = [set() for _ in polys]
        for S, (owners, local) in groups.items():
            if not S:
                for pi in owners:
                    out[pi] ^= {(0,) * self.k}
                continue
            blk = self.blocks[len(S)]
            cols = blk.local_columns(np.array(local, dtype=np.int64))
            rows_of = sorted(set(owners))
            pos = {pi: r for r, pi in enumerate(rows_of)}
            keep = cols >= 0
            r_idx = np.array([pos[pi] for pi in owners], dtype=np.int64)[keep]
            c_idx = cols[keep]
            order = np.argsort(r_idx, kind="stable")
            counts = np.bincount(r_idx, minlength=len(rows_of))
            indptr = np.concatenate([[0], np.cumsum(counts)])
            block = rows_from_csr(indptr, c_idx[order], blk.width)
            blk.echelon.reduce_many(block)
            for r, pi in enumerate(rows_of):
                for c in unpack_columns(block[r]):
                    e = [0] * self.k
                    for p_, a in zip(S, blk.index.exps[blk.cols[c]]):
                        e[p_] = int(a)
                    out[pi] ^= {tuple(e)}
        return [frozenset(s) for s in out]

    def normal_form(self, p: Iterable[Monomial]) -> frozenset:
        return self.normal_forms([list(p)])[0]

    def is_hit(self, p: Iterable[Monomial]) -> bool:
        return not self.normal_form(p)

    def echelon(self) -> EchelonForm:
        """The hit space as one fully reduced echelon form over all degree-n monomials."""
        if self.singer:
            raise ValueError("a prefiltered hit space has no global echelon form")
        idx = monomial_index(self.k, self.n)
        ef = EchelonForm(len(idx))
        rows = []
        for j, blk in self.blocks.items():
            local_rows = [blk.index.exps[blk.cols[unpack_columns(r)]] for r in blk.echelon.rows]
            for S in itertools.combinations(range(self.k), j):
                for lr in local_rows:
                    e = np.zeros((len(lr), self.k), dtype=np.int64)
                    e[:, list(S)] = lr
                    rows.append(pack_columns(idx.columns(e), len(idx)))
        if rows:
            ef.absorb_many(np.array(rows))
        return ef.rref()


@lru_cache(maxsize=16)
def hit_space_of(k: int, n: int, policy: str = POLICY_POW2, singer: bool | None = None) -> HitSpace:
    return HitSpace(k, n, policy, singer)


def hit_space(k: int, n: int, policy: str = POLICY_POW2) -> EchelonForm:
    """(A+ P_k)_n as an echelon form; column 0 is the largest monomial."""
    return hit_space_of(k, n, policy, False).echelon()


def admissible_basis(k: int, n: int, policy: str = POLICY_POW2, singer: bool | None = None) -> AdmissibleBasis:
    hs = hit_space_of(k, n, policy, singer)
    return AdmissibleBasis(k, n, tuple(hs.admissible()), None, (ORDER_ID, policy))


def admissible_basis_weighted(k: int, w: Sequence[int], singer: bool | None = None) -> AdmissibleBasis:
    """Admissible monomials of weight exactly w; their count is dim QP_k(w)."""
    w = tuple(w)
    while w and w[-1] == 0:
        w = w[:-1]
    n = sum(c << i for i, c in enumerate(w))
    full = admissible_basis(k, n, singer=singer)
    return AdmissibleBasis(k, n, tuple(m for m in full if weight_vector(m) == w), w, full.provenance)


def split_zero_positive(basis: AdmissibleBasis) -> tuple[AdmissibleBasis, AdmissibleBasis]:
    zero = tuple(m for m in basis if 0 in m)
    pos = tuple(m for m in basis if 0 not in m)
    return (AdmissibleBasis(basis.k, basis.degree, zero, basis.weight, basis.provenance),
            AdmissibleBasis(basis.k, basis.degree, pos, basis.weight, basis.provenance))


def _as_poly(p) -> list[Monomial]:
    if p and isinstance(next(iter(p)), int):
        return [tuple(p)]
    return [tuple(m) for m in p]


def normal_form(p, k: int | None = None) -> frozenset:
    """Sum of admissible monomials congruent to p modulo hit elements."""
    terms = _as_poly(p)
    if not terms:
        return frozenset()
    n = poly_degree(terms)
    k = k or len(terms[0])
    return hit_space_of(k, n).normal_form(terms)


def is_hit(p, k: int | None = None) -> bool:
    return not normal_form(p, k)


def normal_form_weighted(p, w: Sequence[int], k: int | None = None) -> frozenset:
    """Normal form modulo hit elements plus monomials of weight below w."""
    nf = normal_form(p, k)
    return frozenset(m for m in nf if compare_weights(weight_vector(m), w) >= 0)


def singer_prefilter(m: Sequence[int]) -> bool:
    """True when the weight of m lies below that of the minimal spike (so m is hit)."""
    n, k = sum(m), len(m)
    if n == 0:
        return False
    if mu(n) > k:
        raise NotApplicableError(f"mu({n}) = {mu(n)} > {k}: no spike in this degree")
    return compare_weights(weight_vector(m), weight_vector(minimal_spike(n, k))) < 0


def wood_vanishing(k: int, n: int) -> bool:
    return mu(n) > k


def is_strictly_inadmissible(m: Sequence[int]) -> StrictInadmissibilityCertificate:
    """Decide whether m = (smaller monomials) + sum of Sq^u(q_u), 1 <= u < 2^s."""
    m = tuple(m)
    n = sum(m)
    s = len(weight_vector(m))
    if n == 0:
        return StrictInadmissibilityCertificate(m, 0, False)
    S = tuple(j for j, a in enumerate(m) if a)
    blk = positive_block(len(S), n, POLICY_ALL, False, (1 << s) - 1)
    col = blk.local_columns(np.array([[m[j] for j in S]], dtype=np.int64))[0]
    return StrictInadmissibilityCertificate(m, s, bool(blk.echelon.is_pivot(int(col))))


def extend_monomial(w: Sequence[int], y: Sequence[int]) -> Monomial:
    """w * y^(2^s) with s the length of the weight vector of w."""
    if len(w) != len(y):
        raise ValueError("w and y must live in the same P_k")
    s = len(weight_vector(w))
    return tuple(a + (b << s) for a, b in zip(w, y))


def f_embed(i: int, p, k: int | None = None) -> frozenset:
    """f_i: P_(k-1) -> P_k, skipping the variable x_i."""
    terms = _as_poly(p)
    km1 = (k - 1) if k is not None else (len(terms[0]) if terms else 0)
    if not 1 <= i <= km1 + 1:
        raise ValueError(f"f_{i} undefined for k = {km1 + 1}")
    return frozenset(m[: i - 1] + (0,) + m[i - 1:] for m in terms)


def p_contract(i: int, j: int, p, k: int | None = None) -> frozenset:
    """p_(i;j): P_k -> P_(k-1), sending x_i to x_(j-1) and closing the gap."""
    terms = _as_poly(p)
    k = k or (len(terms[0]) if terms else 0)
    if not 1 <= i < j <= k:
        raise ValueError(f"p_({i};{j}) undefined for k = {k}")
    acc: set = set()
    for m in terms:
        rest = list(m[: i - 1] + m[i:])
        rest[j - 2] += m[i - 1]
        acc ^= {tuple(rest)}
    return frozenset(acc)


def weighted_quotient_dim(k: int, w: Sequence[int]) -> int:
    """dim of P_k(w) / ((A+P_k n P_k(w)) + P_k^-(w)) via an explicit intersection.

    Independent of the admissible filter; meant for small instances.
    """
    n = sum(c << i for i, c in enumerate(w))
    idx = monomial_index(k, n)
    cmp = np.array([compare_weights(idx.weight(c), w) for c in range(len(idx))])
    upto = np.flatnonzero(cmp <= 0)
    below = np.flatnonzero(cmp < 0)
    hit = hit_space(k, n)
    sub = EchelonForm(len(idx))
    for c in upto:
        sub.absorb(pack_columns([c], len(idx)))
    inter = hit.intersect(sub)
    modulus = inter.copy()
    for c in below:
        modulus.absorb(pack_columns([c], len(idx)))
    return len(upto) - modulus.rank
