"""Dimension tables for QP_k over a range of degrees."""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from math import comb
from typing import Iterable

from .hit import admissible_basis, split_zero_positive
from .monomial import weight_vector

__all__ = ["DimensionRow", "report_dimensions", "rows_to_csv"]


@dataclass
class DimensionRow:
    k: int
    degree: int
    monomials: int
    rank: int
    dim: int
    dim_zero: int
    dim_positive: int
    by_weight: dict[tuple[int, ...], int]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "degree": self.degree,
            "monomials": self.monomials,
            "rank": self.rank,
            "dim": self.dim,
            "dim_zero": self.dim_zero,
            "dim_positive": self.dim_positive,
            "by_weight": [{"weight": list(w), "dim": d} for w, d in self.by_weight.items()],
        }


def report_dimensions(k: int, degrees: Iterable[int]) -> list[DimensionRow]:
    """One row per degree: #monomials, rank of the hit space, dim QP and its splittings."""
    out = []
    for n in degrees:
        basis = admissible_basis(k, n)
        zero, pos = split_zero_positive(basis)
        total = comb(n + k - 1, k - 1)
        counts = Counter(weight_vector(m) for m in basis)
        by_weight = dict(sorted(counts.items()))
        out.append(DimensionRow(k, n, total, total - len(basis), len(basis), len(zero), len(pos), by_weight))
    return out


def rows_to_csv(rows: list[DimensionRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "degree", "monomials", "rank", "dim", "dim_zero", "dim_positive", "by_weight"])
    for r in rows:
        bw = ";".join(f"({','.join(map(str, wt))}):{d}" for wt, d in r.by_weight.items())
        w.writerow([r.k, r.degree, r.monomials, r.rank, r.dim, r.dim_zero, r.dim_positive, bw])
    return buf.getvalue()
