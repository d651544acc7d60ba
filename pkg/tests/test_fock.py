import random

import pytest
from hypothesis import given, strategies as st

from freefield._parse import ParseError
from freefield.coeffring import A, ONE, RingElem, V
from freefield.fock import (AElement, FockError, FockVector, Weight, a_rep_apply, a_subspace_dim, apply_D,
                            apply_mode, fock_basis, is_A_vector, ket_monomial, pairing, parse_aelement,
                            solve_A_representation, transpose, vacuum)
from freefield.symalg import partition_count, partitions

W = Weight.generic()
VAC = vacuum("ket", W)
BRA = vacuum("bra", W)


def random_aelement(rng: random.Random, level: int) -> AElement:
    terms = {}
    for lam in partitions(level):
        if rng.random() < 0.7:
            terms[tuple(lam)] = RingElem(rng.randint(-3, 3)) + rng.randint(0, 2) * V
    return AElement(terms)


levels = st.integers(0, 4)
seeds = st.integers(0, 10 ** 6)


# ---------------------------------------------------------------------------
# modes


def test_annihilator_kills_vacuum():
    assert apply_mode("+", 1, VAC).is_zero()
    assert apply_mode("-", 3, VAC).is_zero()


def test_single_commutator():
    v = apply_mode("-", -1, VAC)
    assert apply_mode("+", 1, v) == VAC * A(1, 1)


def test_double_creation_contraction():
    x = apply_mode("+", -2, apply_mode("+", -2, VAC))
    assert apply_mode("-", 2, x) == apply_mode("+", -2, VAC) * (2 * 2 * A(-1, 2))


def test_same_sign_modes_commute():
    x = apply_mode("-", -1, VAC)
    assert apply_mode("-", 1, x).is_zero()


def test_zero_mode_rejected():
    with pytest.raises(FockError):
        apply_mode("+", 0, VAC)


def test_fock_basis_size():
    # two bosons: sum over splittings of the level
    for L in range(6):
        expect = sum(partition_count(a) * partition_count(L - a) for a in range(L + 1))
        assert len(fock_basis(L)) == expect


# ---------------------------------------------------------------------------
# A-representations and pairings


def test_barpi_c1():
    v = a_rep_apply("barpi", AElement.c(1), VAC)
    expect = (apply_mode("-", -1, VAC) - apply_mode("+", -1, VAC)) * (ONE / A(1, 1))
    assert v == expect


def test_pi_commutator_on_vacuum():
    b = a_rep_apply("pi", AElement.c(2), BRA)
    k = a_rep_apply("barpi", AElement.c(2), VAC)
    assert pairing(b, k) == -4 / A(1, 2)


def test_barpi_annihilated_from_the_bra_side():
    # <1| barpi(c_-k) = 0: the bra vacuum pairs to zero with any non-vacuum ket
    for k in range(1, 4):
        assert pairing(BRA, a_rep_apply("barpi", AElement.c(k), VAC)).is_zero()


def test_pairing_examples():
    assert pairing(BRA, VAC) == ONE
    b = apply_mode("+", 1, BRA)
    assert pairing(b, apply_mode("-", -1, VAC)) == A(1, 1)
    assert pairing(b, ket_monomial((1,), (1,))).is_zero()


def test_is_A_vector_examples():
    assert is_A_vector(a_rep_apply("barpi", AElement.c(2), VAC))
    assert not is_A_vector(apply_mode("-", -1, VAC))
    w11 = vacuum("ket", Weight.special(1, 1))
    weak = apply_mode("-", -1, w11) + apply_mode("+", -1, w11)
    assert not is_A_vector(weak)
    assert is_A_vector(weak, (1, 1, 1))


def test_solve_examples():
    v = apply_mode("-", -1, VAC) - apply_mode("+", -1, VAC)
    assert solve_A_representation(v) == AElement.c(1) * A(1, 1)
    assert solve_A_representation(VAC) == AElement.one()


@given(levels, seeds)
def test_solve_roundtrip(level, seed):
    h = random_aelement(random.Random(seed), level)
    assert solve_A_representation(a_rep_apply("barpi", h, VAC)) == h


@given(levels, seeds)
def test_A_states_are_annihilated_by_D(level, seed):
    v = a_rep_apply("barpi", random_aelement(random.Random(seed), level), VAC)
    assert all(apply_D(k, v).is_zero() for k in range(1, level + 1))


def test_solve_rejects_non_A_vector():
    with pytest.raises(FockError):
        solve_A_representation(apply_mode("-", -1, VAC))


@pytest.mark.parametrize("L,dim", [(0, 1), (1, 1), (2, 2), (3, 3), (4, 5), (5, 7), (6, 11)])
def test_a_subspace_dim(L, dim):
    assert a_subspace_dim(L) == dim


# ---------------------------------------------------------------------------
# transpose and parsing


def test_transpose_examples():
    assert transpose(VAC) == vacuum("bra", W.neg())
    assert transpose(apply_mode("-", -2, VAC)) == apply_mode("+", 2, vacuum("bra", W.neg())) * -1


@given(seeds)
def test_transpose_involution(seed):
    rng = random.Random(seed)
    terms = {key: RingElem(rng.randint(-2, 2)) for key in fock_basis(3) if rng.random() < 0.5}
    v = FockVector("ket", W, terms)
    assert transpose(transpose(v)) == v


def test_parse_aelement():
    h = parse_aelement("c1^2*c2 + 3*c4")
    assert h == AElement.c(1, 1, 2) + AElement.c(4) * 3
    assert parse_aelement("(v - v^-1) c2") == AElement.c(2) * (V - V ** -1)


@pytest.mark.parametrize("bad", ["c0", "c1 +", "x3", "c1^"])
def test_parse_aelement_errors(bad):
    with pytest.raises(ParseError):
        parse_aelement(bad)


@given(levels, seeds)
def test_aelement_str_roundtrip(level, seed):
    h = random_aelement(random.Random(seed), level)
    assert parse_aelement(str(h)) == h


def test_weight_shift_and_specialize():
    w = Weight.special(2, 1)
    assert w.shift(1) == Weight.special(2, -1)
    assert Weight.generic().shift(2).neg() == Weight.generic(-1, -2)
    assert Weight.special(1, 1).u_eff() == Weight.special(1, 1).specialize(Weight.generic().u_eff())
