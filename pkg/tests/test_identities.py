import json

import pytest

from freefield.coeffring import V
from freefield.fock import AElement, solve_A_representation
from freefield.identities import (CHECKS, CheckResult, IdentityError, _h2_parts, _J, admissible_triples,
                                  check_c2_refl11, check_dimensions, check_eq_motion, check_h2, check_oracle,
                                  check_resonance, check_symmetry, check_vanishing, check_vanishing_dressed,
                                  conserved_currents, null_bra_element, run_check, tk_elements,
                                  weak_chain_value)
from freefield.screenings import singular_vector


def test_check_result_serialization():
    r = CheckResult("x", {"a": 1}, "fail", "1", "2", note="n")
    d = r.to_json()
    assert d == {"name": "x", "params": {"a": 1}, "status": "fail", "note": "n", "lhs": "1", "rhs": "2"}
    assert json.loads(json.dumps(d)) == d
    assert not r.ok and r.line().startswith("FAIL x(a=1)")
    assert "lhs" not in CheckResult("x", {}, "pass").to_json()


# ---------------------------------------------------------------------------
# symmetries


@pytest.mark.parametrize("kind,n_t,n_s", [
    ("periodicity", 1, 0), ("periodicity", 2, 1), ("conjugation", 2, 0),
    ("reflection_ts", 2, 1), ("reflection_ts", 3, 0), ("even_derivative", 2, 0),
])
def test_symmetry_examples(kind, n_t, n_s):
    assert check_symmetry(kind, n_t, n_s).ok


def test_symmetry_with_descendants():
    h, hp = AElement.c(1), AElement.c(2)
    assert check_symmetry("periodicity", 2, 0, h, hp).ok
    assert check_symmetry("conjugation", 2, 0, h, hp).ok


@pytest.mark.parametrize("args", [("conjugation", 1, 1), ("even_derivative", 1, 0), ("mirror", 1, 0)])
def test_symmetry_errors(args):
    with pytest.raises(IdentityError):
        check_symmetry(*args)


def test_reflection_has_teeth():
    # a descendant matrix element is not reflection invariant by itself
    J = _J(AElement.c(2), None, None, 2)
    assert J.subs_u(1, 0, -1) != J


# ---------------------------------------------------------------------------
# h^(2)


@pytest.mark.parametrize("n_t", [2, 3])
def test_h2_reflection(n_t):
    assert check_h2("reflection", n_t).ok
    num, den = _h2_parts()
    assert not _J(num * den.inverse(), None, None, n_t).is_zero()


@pytest.mark.parametrize("n_t", [2, 3])
def test_h2_degenerate(n_t):
    assert check_h2("degenerate_vanishing", n_t).ok


# ---------------------------------------------------------------------------
# singular bras and resonances


@pytest.mark.parametrize("m,n,s", [(1, 1, 1), (2, 1, 1), (0, 0, 2), (1, -1, 1)])
def test_null_bra_is_the_singular_element(m, n, s):
    assert solve_A_representation(null_bra_element(m, n, s)) == singular_vector(m, n, s).a_element


@pytest.mark.parametrize("n_t", [1, 2, 3])
def test_level1_resonance(n_t):
    r = check_resonance("level1", 2, 1, 1, n_t)
    assert r.ok and "L=2" in r.note


def test_level1_odd_branch():
    r = check_resonance("level1", 3, 1, 1, 2)
    assert r.ok and "odd" in r.note


@pytest.mark.parametrize("args", [("level1", 1, 2, 1, 1), ("level1", 2, 2, 1, 1), ("even", 2, 1, 2, 1),
                                  ("other", 2, 1, 1, 1)])
def test_resonance_errors(args):
    with pytest.raises(IdentityError):
        check_resonance(*args)


def test_even_resonance_small():
    assert check_resonance("even", 2, 2, 2, 1).ok


def test_weak_chain():
    ok, value = weak_chain_value()
    assert ok
    assert value == -2 * (V ** 2 - V ** -2) / (V - V ** -1)


# ---------------------------------------------------------------------------
# equation of motion and conserved currents


@pytest.mark.parametrize("n_t", [1, 3])
def test_eq_motion(n_t):
    assert check_eq_motion(n_t).ok


def test_eq_motion_needs_odd():
    with pytest.raises(IdentityError):
        check_eq_motion(2)


def test_tk_list():
    ok, ts = tk_elements(4)
    assert ok and len(ts) == 5
    assert ts[1] == AElement.c(1) * (V + V ** -1)


@pytest.mark.parametrize("k", [0, 1])
def test_conserved(k):
    assert conserved_currents(k, 1).ok


def test_conserved_range():
    with pytest.raises(IdentityError):
        conserved_currents(-1)


def test_c2_refl11():
    assert check_c2_refl11(1).ok


# ---------------------------------------------------------------------------
# vanishing, oracle, dimensions


def test_admissible_triples():
    ts = admissible_triples(2, m_values=(1, 2))
    assert (1, 1, 1) in ts and (2, 1, 1) in ts
    assert all(s * (m - n + s) <= 2 and (s - n) % 2 == 0 for m, n, s in ts)


@pytest.mark.parametrize("m,n,s", [(1, 1, 1), (2, 1, 1), (0, 0, 2)])
def test_vanishing(m, n, s):
    assert check_vanishing(m, n, s, 2).ok
    assert check_vanishing(m, n, s, 1, bra=True).ok


def test_vanishing_dressed():
    assert check_vanishing_dressed(2, 1, 1, AElement.c(1), 2).ok


def test_oracle_small():
    res = check_oracle(seed=1, instances=2, M=6, max_level=2)
    assert len(res) == 2 and all(r.ok for r in res)


def test_dimensions():
    assert all(r.ok for r in check_dimensions(5))


def test_registry():
    assert {"eqmotion", "resonance.even", "macdonald.theorem", "relations"} <= set(CHECKS)
    with pytest.raises(IdentityError):
        run_check("nope")
    res = run_check("kappa", quick=True)
    assert res and all(r.ok for r in res)
