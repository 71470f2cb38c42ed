"""Kameko's squaring operation on the quotients QP_k and its stabilization."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .arith import t_threshold
from .gf2 import EchelonForm, pack_columns, unpack_columns
from .hit import AdmissibleBasis, admissible_basis, hit_space_of
from .monomial import Monomial

__all__ = [
    "phi",
    "psi",
    "phi_poly",
    "KamekoMatrix",
    "kameko_matrix",
    "StabilizationReport",
    "check_stabilization",
    "kernel_basis",
]


def phi(m: Sequence[int]) -> Monomial | None:
    """y when m = x1...xk * y^2, otherwise None (the zero polynomial)."""
    if all(a & 1 for a in m):
        return tuple((a - 1) >> 1 for a in m)
    return None


def psi(m: Sequence[int]) -> Monomial:
    return tuple(2 * a + 1 for a in m)


def phi_poly(p: Iterable[Monomial]) -> frozenset:
    acc: set = set()
    for m in p:
        y = phi(m)
        if y is not None:
            acc ^= {y}
    return frozenset(acc)


def kernel_basis(rows: np.ndarray, width: int) -> list[np.ndarray]:
    """Left kernel of a 0/1 matrix given as a list of coordinate rows.

    Row i of ``rows`` is the image of unknown i; returns the indicator
    vectors (as index arrays) of a basis of {x : x @ rows = 0}.
    """
    m = len(rows)
    aug = EchelonForm(width + m)
    block = []
    for i, r in enumerate(rows):
        cols = list(np.flatnonzero(r)) + [width + i]
        block.append(pack_columns(cols, width + m))
    if block:
        aug.absorb_many(np.array(block))
    aug.rref()
    out = []
    for row, c in zip(aug.rows, aug.pivots):
        if c >= width:
            out.append(unpack_columns(row) - width)
    return out


@dataclass
class KamekoMatrix:
    k: int
    d: int
    domain: AdmissibleBasis
    codomain: AdmissibleBasis
    matrix: np.ndarray  # uint8, rows = domain members, columns = codomain members
    rank: int = field(init=False)

    def __post_init__(self):
        self.rank = _rank(self.matrix)

    @property
    def kernel_dim(self) -> int:
        return len(self.domain) - self.rank

    @property
    def surjective(self) -> bool:
        return self.rank == len(self.codomain)

    @property
    def injective(self) -> bool:
        return self.rank == len(self.domain)

    @property
    def bijective(self) -> bool:
        return self.surjective and self.injective

    def kernel(self) -> list[frozenset]:
        """Kernel vectors as sums of domain admissible monomials."""
        return [frozenset(self.domain.monomials[i] for i in v)
                for v in kernel_basis(self.matrix, len(self.codomain))]


def _rank(mat: np.ndarray) -> int:
    if mat.size == 0:
        return 0
    width = mat.shape[1]
    rows = np.array([pack_columns(np.flatnonzero(r), width) for r in mat])
    ef = EchelonForm(width)
    ef.absorb_many(rows)
    return ef.rank


def kameko_matrix(k: int, d: int) -> KamekoMatrix:
    """Matrix of QP_k in degree 2d+k -> QP_k in degree d, [x] -> [phi(x)]."""
    n = 2 * d + k
    dom = admissible_basis(k, n)
    cod = admissible_basis(k, d)
    col = {m: i for i, m in enumerate(cod.monomials)}
    mat = np.zeros((len(dom), len(cod)), dtype=np.uint8)
    hs = hit_space_of(k, d)
    images = [phi(a) for a in dom]
    live = [i for i, y in enumerate(images) if y is not None]
    nfs = hs.normal_forms([[images[i]] for i in live])
    for i, nf in zip(live, nfs):
        for m in nf:
            mat[i, col[m]] ^= 1
    return KamekoMatrix(k, d, dom, cod, mat)


@dataclass
class StabilizationReport:
    k: int
    d: int
    s_max: int
    degrees: list[int]
    dims: list[int]
    bijective_steps: list[bool]  # entry s-1: the map from degree index s to s-1
    least_t: int
    expected_t: int

    @property
    def agrees(self) -> bool:
        return self.least_t == self.expected_t


def check_stabilization(k: int, d: int, s_max: int) -> StabilizationReport:
    """Find the least t such that every Kameko step into degree index >= t is bijective.

    Degree index s means degree k(2^s - 1) + 2^s d.  The step s maps index
    s onto index s - 1.  When mu(d) > k every quotient vanishes and t = 0.
    """
    degrees = [k * ((1 << s) - 1) + (d << s) for s in range(s_max + 1)]
    dims: list[int] = []
    steps: list[bool] = []
    for s in range(1, s_max + 1):
        km = kameko_matrix(k, degrees[s - 1])
        if not dims:
            dims.append(len(km.codomain))
        dims.append(len(km.domain))
        steps.append(km.bijective)
    least = s_max
    while least > 0 and steps[least - 1]:
        least -= 1
    return StabilizationReport(k, d, s_max, degrees, dims, steps, least, t_threshold(k, d))
