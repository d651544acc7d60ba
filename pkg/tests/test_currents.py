import random

import pytest
from hypothesis import given, settings, strategies as st

from freefield.coeffring import B1, GaussRational, I, ONE, U, V
from freefield.currents import (RELATIONS, apply_t_mode, apply_vertex_mode, matrix_element, series_oracle,
                                vacuum_ket_element, verify_relation, vertex, wick_matrix_element,
                                wick_series, xi_eta_vector)
from freefield.fock import AElement, Weight, a_rep_apply, apply_mode, fock_basis, is_A_vector, vacuum
from freefield.symalg import SymRat, partitions

W = Weight.generic()
VAC = vacuum("ket", W)
ONE_A = AElement.one()


def random_aelement(rng: random.Random, max_level: int) -> AElement:
    L = rng.randint(0, max_level)
    return AElement({tuple(lam): ONE * rng.randint(1, 3) for lam in partitions(L) if rng.random() < 0.6}
                    or {(): ONE})


# ---------------------------------------------------------------------------
# vertex modes


def test_t_has_two_branches():
    assert len(vertex("t")) == 2


def test_screening_modes_on_vacuum():
    assert apply_vertex_mode("S", 1, VAC).is_zero()
    assert apply_vertex_mode("S", 0, VAC) == vacuum("ket", W.shift(1))
    expect = a_rep_apply("barpi", AElement.c(1), vacuum("ket", W.shift(1))) * B1
    assert apply_vertex_mode("S", -1, VAC) == expect


def test_t_zero_mode():
    assert apply_t_mode(0, VAC) == VAC * (U + U ** -1)


# ---------------------------------------------------------------------------
# Wick engine


def test_wick_examples():
    assert wick_matrix_element(ONE_A, ONE_A, W, 0) == SymRat.const((), 1)
    assert wick_matrix_element(ONE_A, ONE_A, W, 1) == SymRat.const(("x1",), U + U ** -1)
    # u^2 + u^-2 + f(x1/x2) + f(x2/x1), and f(z) + f(1/z) = 2
    assert wick_matrix_element(ONE_A, ONE_A, W, 2) == SymRat.const(("x1", "x2"), U ** 2 + 2 + U ** -2)


def test_eqmotion_seed_value():
    J = wick_matrix_element(AElement.c(1), AElement.c(1), W, 1)
    assert J == SymRat.const(("x1",), U + U ** -1)
    assert J.d_u().subs_u(GaussRational(0, 1), 0, 0) == SymRat.const(("x1",), 2 * I)


def test_ss_vacuum_element():
    ys = ("y1", "y2")
    y1, y2 = SymRat.var(ys, "y1"), SymRat.var(ys, "y2")
    expect = (y1 ** 4 - y1 ** 2 * y2 ** 2 * (V ** 4 + V ** -4) + y2 ** 4) / (y1 ** 2 - y2 ** 2) ** 2
    assert wick_matrix_element(ONE_A, ONE_A, W, 0, 2) == expect


@pytest.mark.parametrize("n_t,n_s", [(1, 0), (2, 0), (0, 1), (1, 1), (2, 1), (0, 2)])
def test_general_engine_agrees_on_A_states(n_t, n_s):
    h, hp = AElement.c(1), AElement.c(2) + AElement.c(1, 1)
    bra = a_rep_apply("pi", h, vacuum("bra", W))
    ket = a_rep_apply("barpi", hp, VAC)
    assert matrix_element(bra, ket, n_t, n_s) == wick_matrix_element(h, hp, W, n_t, n_s)


def test_vacuum_ket_element_matches_wick():
    ket = a_rep_apply("barpi", AElement.c(1), VAC)
    assert vacuum_ket_element(ket, 2) == wick_matrix_element(ONE_A, AElement.c(1), W, 2)


def test_negative_counts_rejected():
    with pytest.raises(ValueError):
        wick_matrix_element(ONE_A, ONE_A, W, -1)


# ---------------------------------------------------------------------------
# series oracle


@pytest.mark.parametrize("M", [0, 3, 12])
def test_oracle_single_t(M):
    o = series_oracle(ONE_A, ONE_A, W, 1, M)
    assert o == wick_series(wick_matrix_element(ONE_A, ONE_A, W, 1), M, 1)


def test_oracle_c2_two_currents():
    h = AElement.c(2)
    assert series_oracle(h, ONE_A, W, 2, 10) == wick_series(wick_matrix_element(h, ONE_A, W, 2), 10, 2)


@settings(max_examples=6)
@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_oracle_random(seed, n_t):
    rng = random.Random(seed)
    h, hp = random_aelement(rng, 2), random_aelement(rng, 2)
    J = wick_matrix_element(h, hp, W, n_t)
    assert series_oracle(h, hp, W, n_t, 6) == wick_series(J, 6, n_t)


# ---------------------------------------------------------------------------
# xi-eta vectors


def test_xi_eta_examples():
    assert xi_eta_vector((1, -1), (), 0).vector == VAC * (U + U ** -1) ** 2
    good = xi_eta_vector((1, -1), (), 1)
    assert good.condition_holds and is_A_vector(good.vector)
    bad = xi_eta_vector((1,), (), 1)
    assert not bad.condition_holds and not is_A_vector(bad.vector)


# ---------------------------------------------------------------------------
# algebra relations


@pytest.mark.parametrize("rel", [r for r in RELATIONS if r not in ("Sk-commut", "SigmaW-t")])
def test_relations_low_cutoff(rel):
    rep = verify_relation(rel, 1)
    assert rep["ok"], rep["failures"][:3]
    assert rep["checked"] > 0


def test_relation_errors():
    with pytest.raises(ValueError):
        verify_relation("nope", 1)
    with pytest.raises(ValueError):
        verify_relation("fqt", 9)


def test_fock_basis_pairs_nontrivially():
    # sanity for the general engine: a level-1 ket pairs with a level-1 bra through t
    ket = apply_mode("-", -1, VAC)
    assert not matrix_element(vacuum("bra", W), ket, 1).is_zero()
    assert len(fock_basis(1)) == 2
