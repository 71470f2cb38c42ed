"""Acceptance gate: one PASS/FAIL line per criterion, printed uncaptured."""

import resource
import time

import pytest

from hitlab.arith import alpha, mu, t_threshold
from hitlab.corpus import bundled_corpus, verify_corpus
from hitlab.group import GL, invariants
from hitlab.hit import (
    admissible_basis,
    admissible_basis_weighted,
    split_zero_positive,
)
from hitlab.kameko import check_stabilization, kameko_matrix, psi
from hitlab.monomial import weight_vector


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def cold():
    """Drop in-memory caches so timings include the elimination."""
    import hitlab.hit as hh

    for obj in vars(hh).values():
        if hasattr(obj, "cache_clear"):
            obj.cache_clear()


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def test_criterion_1_dimensions(report):
    got, slow, times = {}, [], []
    for n in (5, 7, 15, 16):
        cold()
        b, dt = timed(admissible_basis, 5, n)
        got[n] = len(b)
        times.append(dt)
        if dt >= 10:
            slow.append(n)
    ok = got == {5: 46, 7: 110, 15: 432, 16: 443} and not slow
    report(1, ok, f"dims {got}, slowest {max(times):.1f}s" + (f", over 10 s at {slow}" if slow else ""))


def test_criterion_2_degree_16(report):
    cold()
    t0 = time.perf_counter()
    zero, _ = split_zero_positive(admissible_basis(5, 16))
    sizes = {w: len([m for m in admissible_basis_weighted(5, w) if 0 not in m])
             for w in [(2, 1, 1, 1), (2, 1, 3), (2, 3, 2), (4, 2, 2), (4, 4, 1)]}
    dt = time.perf_counter() - t0
    ok = len(zero) == 255 and list(sizes.values()) == [4, 5, 20, 110, 49] and dt < 10
    report(2, ok, f"zero part {len(zero)}, strata {list(sizes.values())}, {dt:.1f}s")


def test_criterion_3_four_variables(report):
    corpus = bundled_corpus()
    cold()
    t0 = time.perf_counter()
    res = {}
    for n, eid in ((15, "B4_deg15"), (7, "B4_deg7")):
        res[eid] = list(admissible_basis(4, n).monomials) == list(corpus.entries[eid].monomials)
    dt = time.perf_counter() - t0
    report(3, all(res.values()) and dt < 5, f"exact ordered match {res}, {dt:.1f}s")


def test_criterion_4_corpus_diff(report):
    corpus = bundled_corpus()
    ids = ["B5_deg5", "B5_deg7", "B5_deg15", "B5_deg16"]
    rep = verify_corpus("B5_deg*", extended=False, corpus=corpus)
    diffs = {d.id: d for d in rep.diffs if d.id in ids}
    sets_ok = all(diffs[i].ok for i in ids)
    in_order = {i: list(admissible_basis(5, corpus.entries[i].degree).monomials)
                == list(corpus.entries[i].monomials) for i in ids}
    detail = (f"sets: {sum(len(d.missing) + len(d.extra) for d in diffs.values())} diffs; "
              f"printed order equals ascending order: {in_order}; "
              f"descents in B5_deg5 after label(s) {corpus.entries['B5_deg5'].descents()}")
    report(4, sets_ok and all(in_order.values()), detail)


@pytest.mark.extended
def test_criterion_5_degree_35(report):
    cold()
    t0 = time.perf_counter()
    basis = admissible_basis(5, 35)
    zero, pos = split_zero_positive(basis)
    strata = {}
    for name, w in [("w1", (3, 2, 1, 1, 1)), ("w2", (3, 2, 1, 3)), ("w3", (3, 2, 3, 2)),
                    ("w4", (3, 4, 2, 2)), ("w5", (3, 4, 4, 1))]:
        strata[name] = sum(1 for m in pos if weight_vector(m) == w)
    psi_block = {psi(m) for m in admissible_basis(5, 15)}
    top = {m for m in pos if weight_vector(m)[0] == 5}
    dt = time.perf_counter() - t0
    rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 2**20
    parts = [len(zero)] + list(strata.values()) + [len(top)]
    ok = (len(basis) == 1117 and parts == [460, 160, 0, 0, 50, 15, 432] and psi_block == top
          and rss < 4 and dt < 1800)
    report(5, ok, f"total {len(basis)} = {' + '.join(map(str, parts))}, psi block exact {psi_block == top}, "
                  f"{dt:.1f}s, peak rss {rss:.2f} GiB")


def test_criterion_6_gl_invariants(report):
    got = {}
    t23 = 0.0
    for n in (5, 15, 9, 23):
        cold()
        r, dt = timed(invariants, 5, n, GL)
        got[n] = r.dimension
        if n == 23:
            t23 = dt
    ok = got == {5: 0, 15: 2, 9: 0, 23: 0} and t23 < 300
    report(6, ok, f"dims {got}, degree 23 in {t23:.1f}s")


@pytest.mark.extended
def test_criterion_6_extended_degree_35(report):
    r, dt = timed(invariants, 5, 35, GL)
    report("6x", r.dimension == 1, f"GL invariants at degree 35: {r.dimension}, {dt:.1f}s")


def test_criterion_7_arithmetic(report):
    ts = [t_threshold(5, 0), t_threshold(5, 2)] + [t_threshold(k, (1 << k) - k + 1) for k in range(4, 9)]
    mus = [mu(n) for n in range(2 * 4096 + 20)]
    ident = all((mus[n] > k) == (alpha(n + k) > k) for n in range(4097) for k in range(1, 9))
    ident &= all(mu(2 * n + mus[n]) == mus[n] for n in range(4097))
    ok = ts == [3, 2, 2, 3, 4, 5, 6] and ident
    report(7, ok, f"t values {ts}, identities up to 4096: {ident}")


def test_criterion_8_kameko(report):
    km = kameko_matrix(5, 15)
    bij = [(k, d) for k in (2, 3, 4) for d in range(40) if mu(2 * d + k) == k and 2 * d + k < 40][:10]
    non = [(k, d) for k in (3, 4, 5) for d in range(40) if mu(2 * d + k) < k and 2 * d + k < 24][:10]
    bij_ok = len(bij) == 10 and all(kameko_matrix(k, d).bijective for k, d in bij)
    non_ok = len(non) == 10 and all(not kameko_matrix(k, d).injective for k, d in non)
    bad = [(k, d) for k in range(1, 4) for d in range(7) if not check_stabilization(k, d, 6).agrees]
    ok = km.rank == 432 and km.surjective and bij_ok and non_ok and not bad
    report(8, ok, f"rank {km.rank} surjective {km.surjective}; bijective {bij_ok}; "
                  f"non-injective {non_ok}; stabilization disagreements {bad}")


def test_criterion_9_property_suites(report):
    import subprocess
    import sys
    from pathlib import Path

    here = Path(__file__).parent
    selected = [
        "test_steenrod.py::test_cartan", "test_steenrod.py::test_instability",
        "test_steenrod.py::test_phi_commutes_with_squares", "test_hit.py::test_spikes_and_admissibles_survive",
        "test_hit.py::test_wood_vanishing", "test_hit.py::test_singer_prefilter_sound",
        "test_hit.py::test_section_identity", "test_group.py::test_generators_do_not_raise_weight",
        "test_hit.py::test_contraction_lowers_weight",
    ]
    r = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                        *[str(here / s) for s in selected]], capture_output=True, text=True, cwd=here.parent)
    tail = r.stdout.strip().splitlines()[-1] if r.stdout.strip() else r.stderr[-200:]
    report(9, r.returncode == 0, tail)
