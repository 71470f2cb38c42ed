"""Transcribed tables of admissible monomials and a verifier that diffs them against computation.

Printed lists are stored in their printed order.  Full bases of P_5 in
degrees 7, 15, 16 and 35 are printed as a union of blocks, some of them images
of smaller lists (the embeddings f_i of B_4(n), or psi of a lower basis), so
those are assembled here as composite entries and compared as sets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .hit import admissible_basis, f_embed
from .kameko import psi
from .monomial import Monomial, format_monomial, order_key, weight_vector

__all__ = [
    "CorpusError",
    "CorpusEntry",
    "CorpusPolynomial",
    "Corpus",
    "EntryDiff",
    "CorpusReport",
    "load_corpus",
    "verify_corpus",
    "EXTENDED_DEGREE",
]

CORPUS_VERSION = 1
EXTENDED_DEGREE = 35  # entries at this degree only run in the extended tier

PARTS = ("all", "zero", "positive")


class CorpusError(ValueError):
    """Raised for a missing or inconsistent corpus file."""


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    k: int
    degree: int
    part: str
    weight: tuple[int, ...] | None
    expected_count: int
    monomials: tuple[Monomial, ...]
    first_label: int = 1
    ordered: bool = True  # False for composites whose order is only blockwise

    def selects(self, m: Monomial) -> bool:
        if self.part == "zero" and 0 not in m:
            return False
        if self.part == "positive" and 0 in m:
            return False
        return self.weight is None or weight_vector(m) == self.weight

    def descents(self) -> list[int]:
        """Printed labels i where entry i is not below entry i + 1."""
        L = max(self.degree, 1).bit_length()
        keys = [order_key(m, L) for m in self.monomials]
        return [self.first_label + j for j in range(len(keys) - 1) if keys[j] >= keys[j + 1]]


@dataclass(frozen=True)
class CorpusPolynomial:
    id: str
    k: int
    degree: int
    group: str
    weight: tuple[int, ...] | None
    terms: frozenset


@dataclass
class Corpus:
    version: int
    entries: dict[str, CorpusEntry]
    polynomials: dict[str, CorpusPolynomial]

    def select(self, pattern: str | None = None) -> list[CorpusEntry]:
        from fnmatch import fnmatchcase

        return [e for i, e in self.entries.items() if pattern is None or fnmatchcase(i, pattern)]


def _check(eid: str, k: int, degree: int, monos: Sequence[Monomial]) -> None:
    for m in monos:
        if len(m) != k or sum(m) != degree:
            raise CorpusError(f"{eid}: {format_monomial(m)} is not a degree {degree} monomial of P_{k}")
    if len(set(monos)) != len(monos):
        raise CorpusError(f"{eid}: duplicate monomials")


def _f_image(entry: CorpusEntry) -> list[Monomial]:
    out: dict[Monomial, None] = {}
    for i in range(1, entry.k + 2):
        for m in sorted(f_embed(i, entry.monomials, entry.k + 1), key=lambda m: order_key(m, 8)):
            out.setdefault(m, None)
    return list(out)


def _composite(eid: str, k: int, degree: int, blocks: Iterable[Iterable[Monomial]]) -> CorpusEntry:
    monos: list[Monomial] = []
    for b in blocks:
        monos.extend(b)
    _check(eid, k, degree, monos)
    return CorpusEntry(eid, k, degree, "all", None, len(monos), tuple(monos), ordered=False)


def _add_composites(entries: dict[str, CorpusEntry]) -> None:
    e = entries
    need = ["B4_deg7", "B4_deg15", "B4_deg16", "B5_deg5", "B5zero_deg35"]
    if not all(n in e for n in need):
        return
    strata = lambda deg: [x.monomials for i, x in sorted(e.items())
                          if i.startswith("B5plus_") and x.degree == deg]
    e["B5_deg7"] = _composite("B5_deg7", 5, 7, [_f_image(e["B4_deg7"])] + strata(7))
    b15 = _composite("B5_deg15", 5, 15, [_f_image(e["B4_deg15"])] + strata(15)
                     + [[psi(m) for m in e["B5_deg5"].monomials]])
    e["B5_deg15"] = b15
    e["B5_deg16"] = _composite("B5_deg16", 5, 16, [_f_image(e["B4_deg16"])] + strata(16))
    e["B5_deg35"] = _composite("B5_deg35", 5, 35, [e["B5zero_deg35"].monomials] + strata(35)
                               + [[psi(m) for m in b15.monomials]])


def load_corpus(path: str | Path | None = None) -> Corpus:
    """Read a corpus file (the bundled one by default) and add composite entries."""
    try:
        if path is None:
            raw = resources.files("hitlab").joinpath("data/corpus.json").read_text()
        else:
            raw = Path(path).read_text()
    except (FileNotFoundError, OSError) as exc:
        raise CorpusError(f"corpus file not found: {exc}") from exc
    doc = json.loads(raw)
    if doc.get("version") != CORPUS_VERSION:
        raise CorpusError(f"unsupported corpus version {doc.get('version')!r}")
    entries: dict[str, CorpusEntry] = {}
    for d in doc["entries"]:
        monos = tuple(tuple(m) for m in d["monomials"])
        _check(d["id"], d["k"], d["degree"], monos)
        if d["part"] not in PARTS:
            raise CorpusError(f"{d['id']}: unknown part {d['part']!r}")
        w = tuple(d["weight"]) if d.get("weight") is not None else None
        entries[d["id"]] = CorpusEntry(d["id"], d["k"], d["degree"], d["part"], w,
                                       d["expected_count"], monos, d.get("first_label", 1))
    polys: dict[str, CorpusPolynomial] = {}
    for d in doc.get("polynomials", []):
        terms = tuple(tuple(m) for m in d["terms"])
        _check(d["id"], d["k"], d["degree"], terms)
        w = tuple(d["weight"]) if d.get("weight") is not None else None
        polys[d["id"]] = CorpusPolynomial(d["id"], d["k"], d["degree"], d["group"], w, frozenset(terms))
    _add_composites(entries)
    return Corpus(doc["version"], entries, polys)


@lru_cache(maxsize=1)
def bundled_corpus() -> Corpus:
    return load_corpus()


@dataclass
class EntryDiff:
    id: str
    k: int
    degree: int
    expected: int
    computed: int
    missing: list[Monomial] = field(default_factory=list)  # computed but not printed
    extra: list[Monomial] = field(default_factory=list)  # printed but not computed
    order_agrees: bool | None = None
    descents: list[int] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.missing and not self.extra and self.expected == self.computed

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "k": self.k,
            "degree": self.degree,
            "expected": self.expected,
            "computed": self.computed,
            "match": self.ok,
            "missing": [list(m) for m in self.missing],
            "extra": [list(m) for m in self.extra],
            "order_agrees": self.order_agrees,
            "warnings": self.warnings,
        }


@dataclass
class CorpusReport:
    diffs: list[EntryDiff]
    skipped: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(d.ok for d in self.diffs)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_json(self) -> dict:
        return {"ok": self.ok, "entries": [d.to_json() for d in self.diffs], "skipped": self.skipped}


def _diff(entry: CorpusEntry) -> EntryDiff:
    basis = admissible_basis(entry.k, entry.degree)
    computed = [m for m in basis if entry.selects(m)]
    printed = list(entry.monomials)
    cs, ps = set(computed), set(printed)
    d = EntryDiff(entry.id, entry.k, entry.degree, entry.expected_count, len(computed),
                  [m for m in computed if m not in ps], [m for m in printed if m not in cs])
    if len(printed) != entry.expected_count:
        d.warnings.append(f"corpus lists {len(printed)} monomials but states {entry.expected_count}")
    if entry.ordered:
        d.order_agrees = computed == printed
        d.descents = entry.descents()
        if d.descents:
            d.warnings.append("printed list not ascending after label(s) "
                              + ", ".join(map(str, d.descents)))
    return d


def verify_corpus(pattern: str | None = None, extended: bool = False, corpus: Corpus | None = None,
                  progress: Callable[[str], None] | None = None) -> CorpusReport:
    """Recompute every selected entry and diff it against the transcription.

    ``pattern`` is a shell-style glob over entry ids.  Entries of degree 35
    are skipped unless ``extended`` is set.
    """
    corpus = corpus or bundled_corpus()
    report = CorpusReport([])
    for entry in corpus.select(pattern):
        if entry.degree >= EXTENDED_DEGREE and not extended:
            report.skipped.append(entry.id)
            continue
        if progress:
            progress(entry.id)
        report.diffs.append(_diff(entry))
    return report
