import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hitlab.arith import mu, t_threshold
from hitlab.hit import normal_form
from hitlab.kameko import check_stabilization, kameko_matrix, kernel_basis, phi, phi_poly, psi
from hitlab.monomial import enumerate_monomials
from hitlab.steenrod import sq_on_monomial


def test_phi_psi_examples():
    assert phi((3, 3, 3, 1, 1)) == (1, 1, 1, 0, 0)
    assert phi((2, 1, 1, 1, 1)) is None
    assert psi((0, 0, 0)) == (1, 1, 1)


@given(st.integers(1, 6).flatmap(lambda k: st.tuples(*[st.integers(0, 50)] * k)))
def test_phi_inverts_psi(y):
    assert phi(psi(y)) == tuple(y)
    assert sum(psi(y)) == 2 * sum(y) + len(y)


def test_kernel_basis():
    rows = np.array([[1, 0, 1], [0, 1, 1], [1, 1, 0]], dtype=np.uint8)
    ker = kernel_basis(rows, 3)
    assert len(ker) == 1 and sorted(ker[0]) == [0, 1, 2]


def test_degree_fifteen_surjective():
    km = kameko_matrix(5, 5)
    assert not km.injective
    km = kameko_matrix(5, 15)
    assert (km.rank, km.surjective, km.kernel_dim, len(km.domain)) == (432, True, 685, 1117)


def _pairs(pred, ks, count):
    out = []
    for k in ks:
        for d in range(1, 200):
            if pred(k, d) and len([p for p in out if p[0] == k]) < count:
                out.append((k, d))
    return out


def test_bijective_when_mu_equals_k():
    pairs = _pairs(lambda k, d: mu(2 * d + k) == k and 2 * d + k < 40, (2, 3, 4), 4)[:10]
    assert len(pairs) == 10
    for k, d in pairs:
        assert kameko_matrix(k, d).bijective, (k, d)


def test_not_injective_when_mu_below_k():
    pairs = _pairs(lambda k, d: mu(2 * d + k) < k and 2 * d + k < 40, (3, 4, 5), 4)[:10]
    assert len(pairs) == 10
    for k, d in pairs:
        assert not kameko_matrix(k, d).injective, (k, d)


@pytest.mark.parametrize("k,d,smax", [(3, 1, 5), (4, 2, 4)])
def test_stabilization_examples(k, d, smax):
    rep = check_stabilization(k, d, smax)
    assert rep.agrees and rep.least_t == t_threshold(k, d)


def test_two_variables_stable_at_once():
    for d in range(9):
        assert check_stabilization(2, d, 4).least_t == 0


@pytest.mark.parametrize("k,d", [(3, 2), (3, 4), (4, 3)])
def test_phi_maps_hit_to_hit(k, d):
    rnd = random.Random(k * 100 + d)
    n = 2 * d + k
    for _ in range(15):
        i = rnd.randint(1, n // 2)
        srcs = enumerate_monomials(k, n - i)
        h: set = set()
        for _ in range(3):
            h ^= set(sq_on_monomial(i, rnd.choice(srcs)))
        image = phi_poly(h)
        assert not image or not normal_form(image)


@pytest.mark.parametrize("k,d", [(3, dd) for dd in range(7)] + [(4, dd) for dd in range(6)])
def test_psi_is_a_section_on_classes(k, d):
    km = kameko_matrix(k, d)
    col = {m: i for i, m in enumerate(km.domain)}
    for j, y in enumerate(km.codomain):
        nf = normal_form(psi(y))
        v = np.zeros(len(km.codomain), dtype=np.uint8)
        for m in nf:
            v ^= km.matrix[col[m]]
        e = np.zeros_like(v)
        e[j] = 1
        assert (v == e).all()


def test_vanishing_range():
    for k in (2, 3):
        for d in range(12):
            if mu(d) > k:
                km = kameko_matrix(k, d)
                assert len(km.domain) == 0 and len(km.codomain) == 0
