"""The symmetric and general linear group actions on P_k and invariant classes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .hit import AdmissibleBasis, admissible_basis, hit_space_of
from .kameko import kameko_matrix, kernel_basis, psi
from .monomial import Monomial, weight_vector

__all__ = [
    "GroupGenerator",
    "generators",
    "apply_generator",
    "InvariantReport",
    "action_matrix",
    "invariants",
    "invariants_stratified_assembly",
    "SIGMA",
    "GL",
]

SIGMA = "sigma"
GL = "gl"


@dataclass(frozen=True)
class GroupGenerator:
    """``transposition`` i swaps x_i and x_(i+1); ``transvection`` sends x1 to x1 + x2."""

    kind: str
    i: int = 0

    def __str__(self) -> str:
        return f"g{self.i}" if self.kind == "transposition" else "g_transvection"


def generators(k: int, group: str) -> list[GroupGenerator]:
    gens = [GroupGenerator("transposition", i) for i in range(1, k)]
    if group == GL:
        gens.append(GroupGenerator("transvection"))
    elif group != SIGMA:
        raise ValueError(f"unknown group {group!r} (expected 'sigma' or 'gl')")
    return gens


def _submasks(a: int) -> Iterable[int]:
    s = a
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & a


def _apply_monomial(g: GroupGenerator, m: Monomial) -> list[Monomial]:
    if g.kind == "transposition":
        j = g.i - 1
        if not 0 <= j < len(m) - 1:
            raise ValueError(f"transposition {g.i} undefined for k = {len(m)}")
        e = list(m)
        e[j], e[j + 1] = e[j + 1], e[j]
        return [tuple(e)]
    if g.kind == "transvection":
        if len(m) < 2:
            raise ValueError("the transvection needs k >= 2")
        a = m[0]
        # (x1 + x2)^a = sum over bit-submasks c of a of x1^c x2^(a - c)
        return [(c, m[1] + a - c) + tuple(m[2:]) for c in _submasks(a)]
    raise ValueError(f"unknown generator kind {g.kind!r}")


def apply_generator(g: GroupGenerator, p) -> frozenset:
    """Image of a monomial or polynomial under the algebra map induced by g."""
    if p and isinstance(next(iter(p)), int):
        p = [tuple(p)]
    acc: set = set()
    for m in p:
        for t in _apply_monomial(g, tuple(m)):
            acc ^= {t}
    return frozenset(acc)


@dataclass
class InvariantReport:
    k: int
    degree: int
    group: str
    dimension: int
    basis: list[frozenset]
    weight: tuple[int, ...] | None = None
    domain_size: int = 0
    strata: dict | None = None

    def to_json(self) -> dict:
        out = {
            "k": self.k,
            "degree": self.degree,
            "group": self.group,
            "dimension": self.dimension,
            "domain_size": self.domain_size,
            "invariants": [sorted(list(m) for m in p) for p in self.basis],
        }
        if self.weight is not None:
            out["weight"] = list(self.weight)
        if self.strata is not None:
            out["strata"] = {",".join(map(str, w)): d for w, d in self.strata.items()}
        return out


def _coords(nfs: Sequence[frozenset], basis: AdmissibleBasis, weight) -> np.ndarray:
    col = {m: i for i, m in enumerate(basis.monomials)}
    mat = np.zeros((len(nfs), len(basis)), dtype=np.uint8)
    for r, nf in enumerate(nfs):
        for m in nf:
            if weight is not None and weight_vector(m) != weight:
                continue
            mat[r, col[m]] ^= 1
    return mat


def action_matrix(g: GroupGenerator, k: int, n: int, weight=None) -> tuple[np.ndarray, AdmissibleBasis]:
    """Matrix of g on QP_k (or on QP_k(weight)) in admissible coordinates.

    Row i holds the coordinates of the class of g(b_i).
    """
    basis = _basis(k, n, weight)
    hs = hit_space_of(k, n)
    nfs = hs.normal_forms([apply_generator(g, b) for b in basis])
    return _coords(nfs, basis, weight), basis


def _basis(k: int, n: int, weight) -> AdmissibleBasis:
    full = admissible_basis(k, n)
    if weight is None:
        return full
    mons = tuple(m for m in full if weight_vector(m) == weight)
    return AdmissibleBasis(k, n, mons, weight, full.provenance)


def _solve(k: int, n: int, group: str, candidates: list[frozenset], weight=None) -> list[frozenset]:
    """Classes in span(candidates) fixed by every generator; returns a basis of representatives."""
    basis = _basis(k, n, weight)
    hs = hit_space_of(k, n)
    gens = generators(k, group)
    polys = []
    for f in candidates:
        for g in gens:
            polys.append(apply_generator(g, f) ^ f)
    nfs = hs.normal_forms(polys)
    width = len(basis) * len(gens)
    rows = np.zeros((len(candidates), width), dtype=np.uint8)
    for c in range(len(candidates)):
        blocks = _coords(nfs[c * len(gens):(c + 1) * len(gens)], basis, weight)
        rows[c] = blocks.reshape(-1)
    out = []
    for v in kernel_basis(rows, width):
        acc: set = set()
        for i in v:
            acc ^= set(candidates[i])
        out.append(frozenset(acc))
    return out


def invariants(k: int, n: int, group: str = GL, weight: Sequence[int] | None = None) -> InvariantReport:
    """Invariant classes of QP_k in degree n, or of QP_k(weight) modulo lower weights."""
    if weight is not None:
        weight = tuple(weight)
        while weight and weight[-1] == 0:
            weight = weight[:-1]
        wd = sum(c << i for i, c in enumerate(weight))
        if wd != n:
            raise ValueError(f"weight {weight} has degree {wd}, not {n}")
    basis = _basis(k, n, weight)
    cands = [frozenset([m]) for m in basis]
    found = _solve(k, n, group, cands, weight)
    return InvariantReport(k, n, group, len(found), found, weight, len(basis))


def invariants_stratified_assembly(k: int, n: int, strata: Sequence[Sequence[int]],
                                   group: str = GL) -> InvariantReport:
    """Invariants in degree n = 2d + k built from the Kameko kernel and lifted invariants.

    Every invariant f maps under Kameko's operation to an invariant q of
    degree d, and f - psi(q) lies in the kernel.  So the invariants live in
    span(kernel) + psi(invariants of degree d) and are solved for there.  The
    per-stratum invariant dimensions (taken modulo lower weights) are
    reported alongside.
    """
    if (n - k) % 2 or n < k:
        raise ValueError(f"degree {n} is not of the form 2d + {k}")
    d = (n - k) // 2
    weights = {weight_vector(m) for m in admissible_basis(k, n)}
    strata = [tuple(w) for w in strata]
    for w in strata:
        if w not in weights:
            raise ValueError(f"weight {w} is not realized by admissible monomials of degree {n}")
    per = {w: invariants(k, n, group, w).dimension for w in strata}
    km = kameko_matrix(k, d)
    cands = list(km.kernel())
    low = invariants(k, d, group)
    for q in low.basis:
        cands.append(frozenset(hit_space_of(k, n).normal_form([psi(m) for m in q])))
    found = _solve(k, n, group, cands)
    # normalise representatives to admissible sums
    hs = hit_space_of(k, n)
    found = [hs.normal_form(f) for f in found]
    return InvariantReport(k, n, group, len(found), found, None, len(cands), per)
