import pytest
from hypothesis import given, strategies as st

from freefield.coeffring import ONE, V
from freefield.fock import AElement
from freefield.macdonald import (MacdonaldError, MacdonaldParams, bracket_map, eigenvalue, h_realization_check,
                                 integral_rep_poly, macdonald_apply, macdonald_poly, power_sum_apply,
                                 rect_eigenvalue, verify_singular_macdonald)
from freefield.screenings import singular_vector
from freefield.symalg import Partition, SymPoly, basis_convert, partitions

Q = V ** 2
T = -Q


def ratio(R: SymPoly, P: SymPoly):
    R, P = basis_convert(R, "powersum"), basis_convert(P, "powersum")
    key, c = P.terms[0]
    r = R.coefficient(key) / c
    return r if not r.is_zero() and R == P.scale(r) else None


def test_constant_eigenvalue():
    one = SymPoly.make(2, "monomial", {(): ONE})
    assert macdonald_apply(one, MacdonaldParams(2)) == one.scale(T + 1)
    assert eigenvalue(Partition(()), 2) == T + 1


def test_p1_at_two_variables():
    # eps_(1) = t q + 1 at N = 2
    assert macdonald_apply(SymPoly.m(2, 1), MacdonaldParams(2)) == SymPoly.m(2, 1).scale(T * Q + 1)


@given(st.integers(1, 4).flatmap(lambda n: st.sampled_from(partitions(n))))
def test_operator_preserves_degree(lam):
    N = lam.weight
    out = macdonald_apply(SymPoly.m(N, *lam), MacdonaldParams(N))
    assert out.degree_set() <= {N}


@pytest.mark.parametrize("lam", [lam for L in range(1, 5) for lam in partitions(L)])
def test_power_sum_route_agrees(lam):
    P = macdonald_poly(lam)
    N = lam.weight
    assert power_sum_apply(P, MacdonaldParams(N)) == macdonald_apply(P, MacdonaldParams(N))


def test_small_polynomials():
    assert macdonald_poly((1,)) == SymPoly.m(1, 1)
    assert basis_convert(macdonald_poly((1, 1)), "powersum") == basis_convert(SymPoly.m(2, 1, 1), "powersum")
    P2 = macdonald_poly((2,))
    assert P2 == SymPoly.m(2, 2) + SymPoly.m(2, 1, 1).scale((1 + Q) ** 2 / (1 + Q ** 2))


@pytest.mark.parametrize("lam", [(2, 1), (3,), (2, 2), (3, 1), (2, 1, 1)])
def test_eigen_equation(lam):
    P = macdonald_poly(lam)
    N = sum(lam)
    assert macdonald_apply(P, MacdonaldParams(N)) == P.scale(eigenvalue(lam, N))


@pytest.mark.parametrize("s,sp", [(1, 1), (1, 3), (2, 2), (3, 1), (2, 3)])
def test_rect_eigenvalue(s, sp):
    assert rect_eigenvalue(s, sp) == eigenvalue((sp,) * s)


def test_bracket_map():
    assert bracket_map(SymPoly.p(1, 1)) == AElement.c(1) * (1 - V ** -2)
    assert bracket_map(SymPoly.p(3, 2, 1)) == AElement.c(1, 2) * ((1 - V ** -2) * (1 - V ** -4))
    assert bracket_map(SymPoly.make(1, "powersum", {(): ONE})) == AElement.one()


@pytest.mark.parametrize("m,n,s", [(1, 1, 1), (2, 2, 2), (1, -1, 1), (2, 1, 1), (0, 0, 2)])
def test_singular_vectors_are_macdonald(m, n, s):
    C = verify_singular_macdonald(m, n, s)
    h = bracket_map(macdonald_poly((m - n + s,) * s))
    assert singular_vector(m, n, s).a_element == h * C


def test_theorem_constant_small():
    assert verify_singular_macdonald(1, 1, 1) == (V + V ** -1) / (1 - V ** -2)


@pytest.mark.parametrize("args", [(1, 3, 1), (1, 2, 1)])
def test_theorem_range_errors(args):
    with pytest.raises(MacdonaldError):
        verify_singular_macdonald(*args)


@pytest.mark.parametrize("s,sp", [(1, 1), (1, 2), (2, 1), (2, 2), (1, 4), (4, 1), (2, 3), (3, 2)])
def test_integral_representation(s, sp):
    assert ratio(integral_rep_poly(s, sp), macdonald_poly((sp,) * s)) is not None


def test_integral_rep_errors():
    with pytest.raises(MacdonaldError):
        integral_rep_poly(0, 2)


def test_h_realization():
    rep = h_realization_check(3)
    assert rep["ok"]
    assert all(r["H_matches"] and r["aux_identity"] for r in rep["rows"])
    first = rep["singular"][0]
    assert (first["m"], first["n"], first["s"]) == (1, 1, 1) and first["eigen_ok"]
