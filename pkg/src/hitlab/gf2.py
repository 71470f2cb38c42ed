"""Packed GF(2) row spaces with lowest-column pivots.

Column c lives in bit ``c % 64`` of word ``c // 64``.  A row's pivot is its
lowest set column, which in the hit-problem layout is its largest monomial.
"""

from __future__ import annotations

import struct
from typing import Iterable, Sequence

import numpy as np

from ._jit import njit, use_jit

__all__ = [
    "n_words",
    "pack_columns",
    "unpack_columns",
    "rows_from_csr",
    "lowest_column",
    "EchelonForm",
    "CacheFormatError",
]

_ONE = np.uint64(1)
_DEBRUIJN = np.uint64(0x03F79D71B4CB0A89)
_CTZ_TABLE = np.zeros(64, dtype=np.int64)
for _b in range(64):
    _CTZ_TABLE[((1 << _b) * 0x03F79D71B4CB0A89 % (1 << 64)) >> 58] = _b


def n_words(width: int) -> int:
    return (width + 63) // 64


def pack_columns(cols: Iterable[int], width: int) -> np.ndarray:
    """Bit row with the given columns set (repeated columns cancel)."""
    row = np.zeros(n_words(width), dtype=np.uint64)
    for c in cols:
        c = int(c)
        if not 0 <= c < width:
            raise IndexError(f"column {c} outside width {width}")
        row[c >> 6] ^= _ONE << np.uint64(c & 63)
    return row


def unpack_columns(row: np.ndarray) -> np.ndarray:
    bits = np.unpackbits(np.ascontiguousarray(row, dtype="<u8").view(np.uint8), bitorder="little")
    return np.flatnonzero(bits)


def lowest_column(row: np.ndarray) -> int:
    nz = np.flatnonzero(row)
    if len(nz) == 0:
        return -1
    w = int(nz[0])
    x = int(row[w])
    return w * 64 + ((x & -x).bit_length() - 1)


# compiled kernels

@njit(cache=True)
def _ctz(x, table):
    low = x & (~x + np.uint64(1))
    return table[(low * np.uint64(0x03F79D71B4CB0A89)) >> np.uint64(58)]


@njit(cache=True)
def _reduce_inplace(row, P, col_row, table):
    W = row.shape[0]
    one = np.uint64(1)
    for w in range(W):
        x = row[w]
        while x != 0:
            b = _ctz(x, table)
            c = w * 64 + b
            r = col_row[c] if c < col_row.shape[0] else -1
            if r >= 0:
                for t in range(w, W):
                    row[t] ^= P[r, t]
            bit = one << np.uint64(b)
            x = row[w] & ~(bit | (bit - one))


@njit(cache=True)
def _first_set(row, table):
    for w in range(row.shape[0]):
        if row[w] != 0:
            return w * 64 + _ctz(row[w], table)
    return -1


@njit(cache=True)
def _absorb_jit(B, P, piv, col_row, rank, table):
    for i in range(B.shape[0]):
        row = B[i]
        _reduce_inplace(row, P, col_row, table)
        c = _first_set(row, table)
        if c >= 0:
            P[rank, :] = row
            piv[rank] = c
            col_row[c] = rank
            rank += 1
    return rank


@njit(cache=True)
def _reduce_many_jit(B, P, col_row, table):
    for i in range(B.shape[0]):
        _reduce_inplace(B[i], P, col_row, table)


@njit(cache=True)
def _rref_jit(P, piv, rank):
    order = np.argsort(piv[:rank])[::-1]
    W = P.shape[1]
    one = np.uint64(1)
    for idx in range(rank):
        r = order[idx]
        c = piv[r]
        w = c >> 6
        bit = one << np.uint64(c & 63)
        for q in range(rank):
            if q != r and piv[q] < c and (P[q, w] & bit) != 0:
                for t in range(w, W):
                    P[q, t] ^= P[r, t]


@njit(cache=True)
def _rows_from_csr_jit(indptr, cols, nwords):
    R = np.zeros((indptr.shape[0] - 1, nwords), dtype=np.uint64)
    one = np.uint64(1)
    for r in range(indptr.shape[0] - 1):
        for t in range(indptr[r], indptr[r + 1]):
            c = cols[t]
            R[r, c >> 6] ^= one << np.uint64(c & 63)
    return R


# numpy counterparts

def _bit_of(block: np.ndarray, c: int) -> np.ndarray:
    return ((block[:, c >> 6] >> np.uint64(c & 63)) & _ONE).astype(bool)


def _absorb_numpy(B, P, piv, col_row, rank):
    B = B.copy()
    # eliminate existing pivots from the whole batch, lowest column first
    for r in np.argsort(piv[:rank]):
        c = int(piv[r])
        sel = _bit_of(B, c)
        if sel.any():
            w = c >> 6
            B[sel, w:] ^= P[r, w:]
    for i in range(len(B)):
        c = lowest_column(B[i])
        if c < 0:
            continue
        P[rank] = B[i]
        piv[rank] = c
        col_row[c] = rank
        rank += 1
        rest = B[i + 1:]
        sel = _bit_of(rest, c)
        if sel.any():
            w = c >> 6
            rest[sel, w:] ^= B[i, w:]
    return rank


def _reduce_many_numpy(B, P, piv, rank):
    for r in np.argsort(piv[:rank]):
        c = int(piv[r])
        sel = _bit_of(B, c)
        if sel.any():
            w = c >> 6
            B[sel, w:] ^= P[r, w:]


def _rref_numpy(P, piv, rank):
    rows = P[:rank]
    for r in np.argsort(piv[:rank])[::-1]:
        c = int(piv[r])
        sel = _bit_of(rows, c)
        sel[r] = False
        if sel.any():
            w = c >> 6
            rows[sel, w:] ^= rows[r, w:]


def rows_from_csr(indptr: np.ndarray, cols: np.ndarray, width: int) -> np.ndarray:
    """Packed rows; row r has the columns ``cols[indptr[r]:indptr[r+1]]`` (XOR-accumulated)."""
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cols = np.ascontiguousarray(cols, dtype=np.int64)
    if len(cols) and (cols.min() < 0 or cols.max() >= width):
        raise IndexError("column outside row width")
    if use_jit():
        return _rows_from_csr_jit(indptr, cols, n_words(width))
    R = np.zeros((len(indptr) - 1, n_words(width)), dtype=np.uint64)
    rows = np.repeat(np.arange(len(indptr) - 1), np.diff(indptr))
    bits = (cols & 63).astype(np.uint64)
    np.bitwise_xor.at(R, (rows, cols >> 6), _ONE << bits)
    return R


class CacheFormatError(ValueError):
    """Raised when serialized echelon data is malformed."""


_MAGIC = b"HLEF"
_VERSION = 1


class EchelonForm:
    """A GF(2) row space in echelon form over a fixed number of columns.

    Rows are kept in insertion order with ``pivots[i]`` the lowest set column
    of row i.  After :meth:`rref` no row has a bit at another row's pivot.
    """

    def __init__(self, width: int):
        if width < 0:
            raise ValueError("width must be non-negative")
        self.width = width
        self.nwords = n_words(width)
        self._rows = np.zeros((min(64, max(width, 1)), self.nwords), dtype=np.uint64)
        self._piv = np.full(len(self._rows), -1, dtype=np.int64)
        self._col_row = np.full(width, -1, dtype=np.int64)
        self.rank = 0
        self.fully_reduced = True

    # storage

    @property
    def rows(self) -> np.ndarray:
        return self._rows[: self.rank]

    @property
    def pivots(self) -> np.ndarray:
        return self._piv[: self.rank]

    def nbytes(self) -> int:
        return self._rows.nbytes + self._piv.nbytes + self._col_row.nbytes

    def _reserve(self, extra: int) -> None:
        need = min(self.rank + extra, max(self.width, 1))
        if need <= len(self._rows):
            return
        cap = min(max(need, 2 * len(self._rows)), max(self.width, 1))
        rows = np.zeros((cap, self.nwords), dtype=np.uint64)
        rows[: self.rank] = self._rows[: self.rank]
        piv = np.full(cap, -1, dtype=np.int64)
        piv[: self.rank] = self._piv[: self.rank]
        self._rows, self._piv = rows, piv

    def _check(self, row: np.ndarray) -> np.ndarray:
        row = np.asarray(row)
        if row.dtype != np.uint64 or row.shape[-1] != self.nwords:
            raise ValueError(f"row width mismatch: expected {self.nwords} uint64 words")
        return row

    # mutation

    def absorb(self, row: np.ndarray) -> bool:
        """Add one row; keeps the form fully reduced.  Returns whether the rank grew."""
        r = self.reduce(self._check(row))
        c = lowest_column(r)
        if c < 0:
            return False
        if self.fully_reduced and self.rank:
            sel = _bit_of(self.rows, c)
            if sel.any():
                w = c >> 6
                self._rows[: self.rank][sel, w:] ^= r[w:]
        self._reserve(1)
        self._rows[self.rank] = r
        self._piv[self.rank] = c
        self._col_row[c] = self.rank
        self.rank += 1
        return True

    def absorb_many(self, block: np.ndarray) -> int:
        """Add a batch of rows; returns the number of new pivots.

        Leaves the form semi-reduced; call :meth:`rref` for the canonical form.
        """
        block = np.ascontiguousarray(self._check(block)).reshape(-1, self.nwords)
        if len(block) == 0 or self.width == 0:
            return 0
        before = self.rank
        self._reserve(len(block))
        if use_jit():
            self.rank = int(_absorb_jit(block.copy(), self._rows, self._piv, self._col_row, self.rank, _CTZ_TABLE))
        else:
            self.rank = _absorb_numpy(block, self._rows, self._piv, self._col_row, self.rank)
        if self.rank > before:
            self.fully_reduced = False
        return self.rank - before

    def rref(self) -> "EchelonForm":
        """Fully reduce in place and order rows by pivot column."""
        if not self.fully_reduced:
            if use_jit():
                _rref_jit(self._rows, self._piv, self.rank)
            else:
                _rref_numpy(self._rows, self._piv, self.rank)
            self.fully_reduced = True
        order = np.argsort(self.pivots, kind="stable")
        self._rows[: self.rank] = self._rows[: self.rank][order]
        self._piv[: self.rank] = self._piv[: self.rank][order]
        self._col_row[:] = -1
        self._col_row[self.pivots] = np.arange(self.rank)
        return self

    # queries

    def reduce(self, row: np.ndarray) -> np.ndarray:
        """Residual of ``row``: zero at every pivot column, equal to row modulo the row space."""
        out = self._check(row).astype(np.uint64, copy=True)
        if out.ndim == 1:
            self.reduce_many(out[None, :])
            return out
        self.reduce_many(out)
        return out

    def reduce_many(self, block: np.ndarray) -> None:
        """Reduce a 2-d block of rows in place."""
        if self.rank == 0 or len(block) == 0:
            return
        if use_jit():
            _reduce_many_jit(block, self._rows, self._col_row, _CTZ_TABLE)
        else:
            _reduce_many_numpy(block, self._rows, self._piv, self.rank)

    def contains(self, row: np.ndarray) -> bool:
        return not self.reduce(row).any()

    def pivot_columns(self) -> set[int]:
        return set(int(c) for c in self.pivots)

    def is_pivot(self, col: int) -> bool:
        return self._col_row[col] >= 0

    def pivot_mask(self) -> np.ndarray:
        return self._col_row >= 0

    def copy(self) -> "EchelonForm":
        ef = EchelonForm(self.width)
        ef._rows = self._rows.copy()
        ef._piv = self._piv.copy()
        ef._col_row = self._col_row.copy()
        ef.rank = self.rank
        ef.fully_reduced = self.fully_reduced
        return ef

    def intersect(self, other: "EchelonForm") -> "EchelonForm":
        """Echelon form of the intersection of two row spaces (Zassenhaus)."""
        if other.width != self.width:
            raise ValueError(f"width mismatch: {self.width} != {other.width}")
        w = self.width
        big = EchelonForm(2 * w)
        stacked = []
        for row in self.rows:
            cols = unpack_columns(row)
            stacked.append(pack_columns(np.concatenate([cols, cols + w]), 2 * w))
        for row in other.rows:
            stacked.append(pack_columns(unpack_columns(row), 2 * w))
        if stacked:
            big.absorb_many(np.array(stacked))
        out = EchelonForm(w)
        for row, c in zip(big.rows, big.pivots):
            if c >= w:
                out.absorb(pack_columns(unpack_columns(row) - w, w))
        return out.rref()

    @classmethod
    def from_rows(cls, width: int, rows: Sequence[np.ndarray] | np.ndarray) -> "EchelonForm":
        ef = cls(width)
        rows = np.asarray(rows, dtype=np.uint64).reshape(-1, ef.nwords)
        ef.absorb_many(rows)
        return ef.rref()

    # binary format

    def to_bytes(self, k: int = 0, degree: int = 0, order_id: int = 1, policy_id: int = 0,
                 weight: Sequence[int] = ()) -> bytes:
        """Serialize the fully reduced form; rows are little-endian 64-bit words."""
        self.rref()
        head = struct.pack("<4sHHIHHH", _MAGIC, _VERSION, k, degree, order_id, policy_id, len(weight))
        head += struct.pack(f"<{len(weight)}H", *weight)
        head += struct.pack("<QQ", self.width, self.rank)
        return head + self.rows.astype("<u8").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> tuple["EchelonForm", dict]:
        try:
            magic, version, k, degree, order_id, policy_id, wlen = struct.unpack_from("<4sHHIHHH", data, 0)
        except struct.error as exc:
            raise CacheFormatError("truncated header") from exc
        if magic != _MAGIC or version != _VERSION:
            raise CacheFormatError(f"bad magic/version {magic!r}/{version}")
        off = struct.calcsize("<4sHHIHHH")
        try:
            weight = struct.unpack_from(f"<{wlen}H", data, off)
            off += 2 * wlen
            width, rank = struct.unpack_from("<QQ", data, off)
        except struct.error as exc:
            raise CacheFormatError("truncated header") from exc
        off += 16
        nw = n_words(width)
        if off + 8 * rank * nw != len(data):
            raise CacheFormatError("row data length does not match header")
        body = np.frombuffer(data, dtype="<u8", count=rank * nw, offset=off)
        ef = cls(width)
        ef._reserve(rank)
        rows = body.reshape(rank, nw).astype(np.uint64)
        ef._rows[:rank] = rows
        for i in range(rank):
            c = lowest_column(rows[i])
            if c < 0:
                raise CacheFormatError("zero row in stored echelon form")
            ef._piv[i] = c
            ef._col_row[c] = i
        ef.rank = rank
        meta = {"k": k, "degree": degree, "order_id": order_id, "policy_id": policy_id, "weight": tuple(weight)}
        return ef, meta
