import itertools

import pytest
from hypothesis import given, strategies as st

from freefield.coeffring import F, ONE, V, kappa
from freefield.currents import apply_vertex_mode
from freefield.fock import (AElement, FockVector, Weight, a_rep_apply, fock_basis, is_A_vector,
                            ket_monomial, vacuum)
from freefield.screenings import (ScreeningError, apply_S_A, build_op, c_coeff, c_coeff_direct,
                                  cosingular_representative, kappa_closed, kappa_sm, resonance_scalar,
                                  s_mn_formula, singular_vector, structure_probe, t_element)


def basis_kets(m: int, n: int, top: int):
    w = Weight.special(m, n)
    for L in range(top + 1):
        for key in fock_basis(L):
            yield FockVector("ket", w, {key: ONE})


# ---------------------------------------------------------------------------
# composite operators


@pytest.mark.parametrize("m,n", [(2, 1), (1, 1), (0, 2), (3, 0)])
def test_sigma_is_a_single_mode(m, n):
    sig = build_op("Sigma", m, n)
    assert sig.level_shift == m - n + 1 and sig.target == (m, n - 2)
    v = ket_monomial((2, 1), (1,), Weight.special(m, n))
    assert sig.apply(v) == apply_vertex_mode("S", m - n + 1, v)


@pytest.mark.parametrize("m,n", [(0, 2), (1, 2), (1, 3)])
def test_sigma_squared_and_sigma_w(m, n):
    s1, w1 = build_op("Sigma", m, n), build_op("W", m, n)
    s2, w2, s4 = build_op("Sigma", m, n - 2), build_op("W", m, n - 2), build_op("Sigma", m, n - 4)
    for v in basis_kets(m, n, 4):
        assert s2.apply(s1.apply(v)).is_zero()
        assert w2.apply(s1.apply(v)) == s4.apply(w1.apply(v))


def test_build_op_errors():
    with pytest.raises(ScreeningError):
        build_op("Q", 1, 2, 1)  # parity of s and n differ
    with pytest.raises(ScreeningError):
        build_op("X", 1, 1)


@pytest.mark.parametrize("k", range(-2, 4))
def test_S_on_A_matches_fock(k):
    # the A-side action reproduces the Fock action on barpi(h)|1>
    w = Weight.generic()
    h = AElement.c(1, 2) + AElement.c(3)
    lhs = a_rep_apply("barpi", apply_S_A(k, h), vacuum("ket", w.shift(1)))
    assert lhs == apply_vertex_mode("S", k, a_rep_apply("barpi", h, vacuum("ket", w)))


# ---------------------------------------------------------------------------
# singular vectors


def test_singular_small_cases():
    sv = singular_vector(1, 1, 1)
    assert sv.level == 1 and sv.a_element == AElement.c(1) * (V + V ** -1)
    sv = singular_vector(2, 1, 1)
    assert sv.level == 2 and set(sv.a_element.terms) == {(2,), (1, 1)}


@pytest.mark.parametrize("m,n,s", [(1, 1, 1), (2, 1, 1), (0, 0, 2), (2, 2, 2), (1, -1, 1), (3, 1, 1)])
def test_singular_routes_agree(m, n, s):
    a = singular_vector(m, n, s, route="dp")
    b = singular_vector(m, n, s, route="fock")
    assert a.a_element == b.a_element
    assert is_A_vector(a.vector)


@pytest.mark.parametrize("m,n,s", [(1, 3, 1), (0, 4, 2), (1, 2, 1), (1, 2, 0)])
def test_singular_range_errors(m, n, s):
    with pytest.raises(ScreeningError):
        singular_vector(m, n, s)


@pytest.mark.parametrize("m,n,s", [(1, 1, 1), (2, 1, 1), (0, 0, 2), (2, 2, 2)])
def test_singular_class_depends_on_difference(m, n, s):
    assert singular_vector(m, n, s).a_element == singular_vector(m + 2, n + 2, s).a_element


# ---------------------------------------------------------------------------
# cosingular representatives


@pytest.mark.parametrize("m,n,s", [(2, 2, 2), (2, 0, 2)])
def test_cosingular_images(m, n, s):
    Q = build_op("Q", m, n, s)
    lev = s * (m - n + s)
    nu = (m - n + s) // 2
    for t, kv in [(m - n + s, ()), (0, (2 * s,) * nu)]:
        M = cosingular_representative(m, n, s, t, kv)
        assert M.levels() == {lev}
        img = Q.apply(M)
        assert img == vacuum("ket", Weight.special(m, n - 2 * s)) * resonance_scalar(m, n, s, t, kv)


def test_level1_cosingular_kappa():
    # Q^(1) barpi(c_-L)|1>_{mn} = kappa_L |1>_{m,n-2}
    for m, n in [(2, 1), (4, 3), (3, 1)]:
        L = m - n + 1
        v = a_rep_apply("barpi", AElement.c(L), vacuum("ket", Weight.special(m, n)))
        img = build_op("Q", m, n, 1).apply(v)
        assert img == vacuum("ket", Weight.special(m, n - 2)) * kappa(L)


# ---------------------------------------------------------------------------
# constants


def test_kappa_examples():
    for m in range(4):
        assert kappa_sm(1, m) == ONE
        assert kappa_sm(2, m) == F(m, 1)
        assert kappa_sm(3, m) == -F(m + 1, 2)


@pytest.mark.parametrize("s,m", [(s, m) for s in range(1, 7) for m in range(3)])
def test_kappa_closed(s, m):
    assert kappa_sm(s, m) == kappa_closed(s, m)


def test_c_coeff_examples():
    assert c_coeff(0, ()) == 1
    assert c_coeff(3, (0, 0, 0)) == 1
    assert c_coeff(2, (1, -1)) == 0
    for k1, k2 in itertools.product(range(-4, 5), repeat=2):
        c = c_coeff(2, (k1, k2))
        assert (c == 1) == (k1 + k2 == 0 and k2 == 0)


@given(st.integers(1, 3).flatmap(lambda nu: st.tuples(*[st.integers(-4, 4)] * nu)))
def test_c_coeff_matches_permutation_rule(kv):
    assert c_coeff(len(kv), kv) == c_coeff_direct(kv)


def test_c_coeff_length_error():
    with pytest.raises(ScreeningError):
        c_coeff(2, (0,))


def test_t_elements():
    assert t_element(1) == AElement.c(1) * (V + V ** -1)
    B2 = (V ** 2 - V ** -2) / 2
    assert t_element(2) == AElement.c(2) * B2 + AElement.c(1, 1) * ((V + V ** -1) ** 2 / 2)


@pytest.mark.parametrize("m,n,expected", [(2, 0, 2), (3, 1, 1), (0, 2, 4), (1, 3, 3), (0, 0, 2), (1, 1, 1)])
def test_s_mn(m, n, expected):
    assert s_mn_formula(m, n) == expected


# ---------------------------------------------------------------------------
# structure probe


def test_probe_small_module():
    rep = structure_probe(1, 1, max_level=2, samples=2, commutator_level=2)
    assert rep["samples_agree"]
    full2 = rep["levels"][2]["full"]
    assert full2["cohomology"] > 0
    assert all(r["full"]["W_maximal"] and r["A"]["W_maximal"] for r in rep["levels"])
    assert rep["Qt_commutator"]["vanishes_at_point"]
    assert not rep["Qt_commutator"]["vanishes_off_point"]


def test_probe_is_deterministic():
    a = structure_probe(2, 0, max_level=2, samples=2, seed=7)
    b = structure_probe(2, 0, max_level=2, samples=2, seed=7)
    assert a == b
