"""Exact checks of matrix-element identities: symmetries, resonances, equation of motion,
conserved currents and vanishing of singular-vector matrix elements.

Derivative identities are stated in D-scaled form, D = u d/du = (1/(i pi)) d/da,
so every check stays inside Q(i)(v, u).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .coeffring import B, GaussRational, I, ONE, RingElem, V, ZERO, A, kappa
from .currents import series_oracle, verify_relation, wick_matrix_element, wick_series
from .fock import (AElement, FockVector, Weight, _pair_norm, a_rep_apply, a_subspace_dim,
                   apply_mode, fock_basis, is_A_vector, solve_A_representation, vacuum)
from .screenings import (build_op, cosingular_representative, resonance_scalar,
                         singular_vector, t_element)
from .symalg import Partition, SymRat, partitions

__all__ = [
    "CheckResult", "IdentityError", "check_symmetry", "check_h2", "check_resonance",
    "check_eq_motion", "conserved_currents", "check_c2_refl11", "null_bra_element",
    "check_vanishing", "check_vanishing_dressed", "check_oracle", "check_dimensions",
    "tk_elements", "CHECKS", "run_check",
]


class IdentityError(ValueError):
    """Parameters outside the documented range of a check."""


@dataclass
class CheckResult:
    name: str
    params: dict
    status: str
    lhs: str | None = None
    rhs: str | None = None
    note: str = ""
    elapsed: float = field(default=0.0, compare=False)

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        d = {"name": self.name, "params": self.params, "status": self.status}
        if self.note:
            d["note"] = self.note
        if not self.ok:
            d["lhs"], d["rhs"] = self.lhs, self.rhs
        return d

    def line(self) -> str:
        ps = ", ".join(f"{k}={v}" for k, v in self.params.items())
        tail = f"  [{self.note}]" if self.note else ""
        return f"{self.status.upper():4s} {self.name}({ps}){tail}"


def _compare(name: str, params: dict, lhs, rhs, note: str = "") -> CheckResult:
    ok = lhs == rhs
    return CheckResult(name, params, "pass" if ok else "fail",
                       None if ok else str(lhs), None if ok else str(rhs), note)


def _flag(name: str, params: dict, ok: bool, detail: str = "", note: str = "") -> CheckResult:
    return CheckResult(name, params, "pass" if ok else "fail",
                       None if ok else detail, None, note)


def _J(h, hp, w: Weight | None = None, n_t: int = 0, n_s: int = 0) -> SymRat:
    h = AElement.one() if h is None else h
    hp = AElement.one() if hp is None else hp
    return wick_matrix_element(h, hp, w or Weight.generic(), n_t, n_s)


def _at_i(J: SymRat) -> SymRat:
    return J.subs_u(GaussRational(0, 1), 0, 0)


# ---------------------------------------------------------------------------
# symmetries


def check_symmetry(kind: str, n_t: int = 1, n_s: int = 0, h: AElement | None = None,
                   hp: AElement | None = None) -> CheckResult:
    params = {"kind": kind, "n_t": n_t, "n_s": n_s, "h": str(h or "1"), "h'": str(hp or "1")}
    name = f"symmetry.{kind}"
    if kind == "periodicity":
        J = _J(h, hp, None, n_t, n_s)
        return _compare(name, params, J.subs_u(-1, 0, 1), J * ((-1) ** (n_t % 2)))
    if kind == "conjugation":
        if n_s:
            raise IdentityError("conjugation is stated for t-strings only")
        lhs = _J(h, hp, None, n_t)
        rhs = _J(hp, h, None, n_t).subs_u(1, 0, -1).invert_args()
        return _compare(name, params, lhs, rhs)
    if kind == "reflection_ts":
        if h is not None or hp is not None:
            raise IdentityError("reflection_ts uses h = h' = 1")
        J = _J(None, None, None, n_t, n_s)
        return _compare(name, params, J.subs_u(1, 0, -1), J)
    if kind == "even_derivative":
        if n_t % 2:
            raise IdentityError("even_derivative needs even n_t")
        J = _J(h, hp, None, n_t, n_s)
        return _compare(name, params, _at_i(J.d_u()), SymRat.zero(J.vars),
                        note="D = u d/du at u = i")
    raise IdentityError(f"unknown symmetry kind {kind!r}")


# ---------------------------------------------------------------------------
# h^(2) reflection

def _h2_parts() -> tuple[AElement, RingElem]:
    """Numerator c_2 - i tan(pi a) c_1^2 and denominator sin(pi r) + sin(2 pi a)."""
    from .coeffring import U
    itan = (U - U ** -1) / (U + U ** -1)
    num = AElement.c(2) - AElement.c(1, 1) * itan
    den = (V ** -2 - V ** 2 + U ** 2 - U ** -2) / (2 * I)
    return num, den


def check_h2(case: str, n_t: int = 2) -> CheckResult:
    params = {"case": case, "n_t": n_t}
    num, den = _h2_parts()
    if case == "reflection":
        J = _J(num * den.inverse(), None, None, n_t)
        return _compare("h2.reflection", params, J.subs_u(1, 0, -1), J)
    if case == "degenerate_vanishing":
        J = _J(num, None, None, n_t)
        # a = 1 - r/2 is u = -v; a = (1 + r)/2 is u = i v^-1
        pts = (("u=-v", (-1, 1, 0)), ("u=i/v", (GaussRational(0, 1), -1, 0)))
        bad = []
        for label, (c, vp, up) in pts:
            if not den.subs_u(c, vp, up).is_zero():
                bad.append(f"denominator nonzero at {label}")
            val = J.subs_u(c, vp, up)
            if not val.is_zero():
                bad.append(f"{label}: {val}")
        return _flag("h2.degenerate_vanishing", params, not bad, "; ".join(bad),
                     note="both points")
    raise IdentityError(f"unknown h2 case {case!r}")


# ---------------------------------------------------------------------------
# singular bras


def null_bra_element(m: int, n: int, s: int, h: AElement | None = None) -> FockVector:
    """<1|_{m,n-2s} pi(h) Q^(s) as a bra of the module (m, n), from the functional v -> <h|Q v>."""
    op = build_op("Q", m, n, s)
    w = Weight.special(m, n)
    wt = Weight.special(m, n - 2 * s)
    hb = a_rep_apply("pi", h or AElement.one(), vacuum("bra", wt))
    out: dict = {}
    for lb in sorted(hb.levels()):
        L = lb + op.level_shift
        if L < 0:
            continue
        part = hb.homogeneous(lb)
        for key in fock_basis(L):
            img = op.apply(FockVector("ket", w, {key: ONE}))
            c = ZERO
            for (bm, bp), cb in part.terms.items():
                ck = img.terms.get((bp, bm))
                if ck is not None:
                    c = c + cb * ck * _pair_norm(bm, bp)
            if not c.is_zero():
                bk = (key[1], key[0])
                out[bk] = out.get(bk, ZERO) + c / _pair_norm(*bk)
    return FockVector("bra", w, out)


# ---------------------------------------------------------------------------
# resonances


def check_resonance(kind: str, m: int, n: int, s: int = 1, n_t: int = 2) -> CheckResult:
    params = {"kind": kind, "m": m, "n": n, "s": s, "n_t": n_t}
    if kind == "level1":
        if s != 1 or n % 2 == 0:
            raise IdentityError("level-1 resonance needs s = 1 and odd n")
        L = m - n + 1
        if L < 1:
            raise IdentityError(f"level L = m - n + 1 = {L} must be positive")
        N = solve_A_representation(null_bra_element(m, n, 1))
        w = Weight.special(m, n)
        lhs = _J(N, AElement.c(L), w, n_t)
        if L % 2 == 0:
            rhs = _J(None, None, Weight.special(m, n - 2), n_t) * kappa(L)
            return _compare("resonance.level1", params, lhs, rhs, note=f"L={L}, kappa_L={kappa(L)}")
        # odd L: vanishing, and Sigma kills the whole A-subspace of level L
        sig = build_op("Sigma", m, n)
        alive = [lam for lam in partitions(L)
                 if not sig.apply(a_rep_apply("barpi", AElement({lam: ONE}), vacuum("ket", w))).is_zero()]
        ok = lhs.is_zero() and not alive
        return _flag("resonance.level1", params, ok,
                     f"J={lhs}; not annihilated: {alive}", note=f"L={L} odd")
    if kind == "even":
        if (s - n) % 2:
            raise IdentityError("even resonance needs s = n mod 2")
        lev = s * (m - n + s)
        if lev % 2 or lev <= 0:
            raise IdentityError(f"level s(m-n+s) = {lev} must be even and positive")
        N = solve_A_representation(null_bra_element(m, n, s))
        t = m - n + s
        Mvec = cosingular_representative(m, n, s, t, ()) * resonance_scalar(m, n, s, t, ()).inverse()
        M = solve_A_representation(Mvec)
        # the simplest representative S_{-2s}^nu Qbar^(0)|1>
        nu = (m - n + s) // 2
        alt = None
        if (m - n + s) % 2 == 0:
            kv = (2 * s,) * nu
            Avec = cosingular_representative(m, n, s, 0, kv) * resonance_scalar(m, n, s, 0, kv).inverse()
            alt = solve_A_representation(Avec)
        w = Weight.special(m, n)
        rhs = _J(None, None, Weight.special(m, n - 2 * s), n_t)
        res = _compare("resonance.even", params, _J(N, M, w, n_t), rhs, note="M from Qbar^(m-n+s)")
        if res.ok and alt is not None:
            res = _compare("resonance.even", params, _J(N, alt, w, n_t), rhs,
                           note="M from Qbar^(m-n+s) and S_{-2s}^nu")
        return res
    raise IdentityError(f"unknown resonance kind {kind!r}")


# ---------------------------------------------------------------------------
# equation of motion


def weak_chain_value() -> tuple[bool, RingElem]:
    """Q^(1)(d^-_{-1} + d^+_{-1})|1>_{11} = -2 A^+_1/(v - v^-1) |1>_{1,-1}; also a weak A-vector."""
    w = Weight.special(1, 1)
    vec = apply_mode(-1, -1, vacuum("ket", w)) + apply_mode(1, -1, vacuum("ket", w))
    img = build_op("Q", 1, 1, 1).apply(vec)
    expect = A(1, 1) * (-2) / (V - V ** -1)
    ok = (img == vacuum("ket", Weight.special(1, -1)) * expect
          and is_A_vector(vec, weak_s=(1, 1, 1)) and not is_A_vector(vec))
    return ok, img.terms.get(((), ()), ZERO)


def check_eq_motion(n_t: int = 1) -> CheckResult:
    """D(J^{c_1, c_1})|_{u=i} = 2/(v^2 - v^-2) J_{1,-1}: the a-derivative form divided by i pi."""
    if n_t % 2 == 0 or n_t < 1:
        raise IdentityError("equation of motion needs odd n_t")
    params = {"n_t": n_t}
    c1 = AElement.c(1)
    lhs = _at_i(_J(c1, c1, None, n_t).d_u())
    rhs = _J(None, None, Weight.special(1, -1), n_t) * (RingElem(2) / (V ** 2 - V ** -2))
    res = _compare("eqmotion", params, lhs, rhs, note="D-scaled; (d/da) = i pi D")
    if res.ok and n_t == 1:
        ok = lhs == SymRat.const(lhs.vars, 2 * I)
        chain, _ = weak_chain_value()
        res = _flag("eqmotion", params, ok and chain, f"LHS={lhs}",
                    note="D-scaled; LHS = 2i; weak A-vector chain")
    return res


# ---------------------------------------------------------------------------
# conserved currents


_TK_LIST = {
    0: lambda: AElement.one(),
    1: lambda: AElement.c(1) * B(1),
    2: lambda: AElement.c(2) * B(2) + AElement.c(1, 1) * (B(1) ** 2 / 2),
    3: lambda: (AElement.c(3) * B(3) + AElement.c(2, 1) * (B(2) * B(1))
                + AElement.c(1, 1, 1) * (B(1) ** 3 / 6)),
    4: lambda: (AElement.c(4) * B(4) + AElement.c(3, 1) * (B(3) * B(1))
                + AElement.c(2, 2) * (B(2) ** 2 / 2) + AElement.c(2, 1, 1) * (B(2) * B(1) ** 2 / 2)
                + AElement.c(1, 1, 1, 1) * (B(1) ** 4 / 24)),
}


def tk_elements(top: int) -> tuple[bool, list[AElement]]:
    """t_{-j} for j <= top from the exponential generating function, cross-checked
    against the explicit list (j <= 4) and against S_{-j}|1> on the Fock space."""
    ok = True
    out = []
    for j in range(top + 1):
        t = t_element(j)
        if j in _TK_LIST and _TK_LIST[j]() != t:
            ok = False
        w = Weight.generic()
        img = apply_vertex("S", -j, vacuum("ket", w))
        if img != a_rep_apply("barpi", t, vacuum("ket", w.shift(1))):
            ok = False
        out.append(t)
    return ok, out


def apply_vertex(name: str, j: int, v: FockVector) -> FockVector:
    from .currents import apply_vertex_mode
    return apply_vertex_mode(name, j, v)


def conserved_currents(k: int, n_t: int = 1) -> CheckResult:
    """<t_{-2k-2}|t(X)|c_1>_{11} = -<c_1 t_{-2k}|t(X)|1>_{13}, and the negative-spin twin."""
    if k < 0 or k > 3:
        raise IdentityError("k must be between 0 and 3")
    params = {"k": k, "n_t": n_t}
    ok_t, ts = tk_elements(2 * k + 2)
    c1 = AElement.c(1)
    w11, w13, w1m1 = Weight.special(1, 1), Weight.special(1, 3), Weight.special(1, -1)
    lhs = _J(ts[2 * k + 2], c1, w11, n_t)
    rhs = -_J(c1 * ts[2 * k], None, w13, n_t)
    res = _compare("conserved", params, lhs, rhs, note="positive spin")
    if not res.ok:
        return res
    lhs = _J(c1, ts[2 * k + 2], w11, n_t)
    rhs = -_J(None, ts[2 * k] * c1, w1m1, n_t)
    res = _compare("conserved", params, lhs, rhs, note="both spins")
    if res.ok and not ok_t:
        return _flag("conserved", params, False, "t-elements disagree with S_{-j}|1> or the explicit list")
    if res.ok:
        res.note = "both spins; t-elements match the generating function, list and S-modes"
    return res


def check_c2_refl11(n_t: int = 1) -> CheckResult:
    """J^{1,c_2} at u = -i equals J^{1,c_2} + 2 D J^{1,c_1^2} at u = i (odd n_t)."""
    if n_t % 2 == 0:
        raise IdentityError("the D-scaled c_2 reflection at a = 1/2 is stated for odd n_t")
    params = {"n_t": n_t}
    J2 = _J(None, AElement.c(2), None, n_t)
    J11 = _J(None, AElement.c(1, 1), None, n_t)
    lhs = J2.subs_u(GaussRational(0, -1), 0, 0)
    rhs = _at_i(J2) + _at_i(J11.d_u()) * 2
    return _compare("c2refl11", params, lhs, rhs, note="D-scaled; 2i/pi d/da = -2 D")


# ---------------------------------------------------------------------------
# vanishing


def admissible_triples(max_level: int, m_values=(-1, 0, 1, 2)) -> list[tuple[int, int, int]]:
    """(m, n, s) with s = n mod 2, n < m + s and level s(m - n + s) <= max_level."""
    out = []
    for s in range(1, max_level + 1):
        for sp in range(1, max_level // s + 1):
            d = sp - s
            for m in m_values:
                n = m - d
                if (s - n) % 2 == 0:
                    out.append((m, n, s))
    return out


def check_vanishing(m: int, n: int, s: int, n_t: int, bra: bool = False) -> CheckResult:
    """<1|t(X)|N^(s)>_{-m,-n} = 0; with bra=True also <N^(s)|t(X)|1>_{mn} = 0 from the bra itself."""
    params = {"m": m, "n": n, "s": s, "n_t": n_t}
    sv = singular_vector(m, n, s)
    J = _J(None, sv.a_element, Weight.special(-m, -n), n_t)
    ok, detail = J.is_zero(), f"ket form: {J}"
    if ok and bra:
        Nb = solve_A_representation(null_bra_element(m, n, s))
        Jb = _J(Nb, None, Weight.special(m, n), n_t)
        ok = Jb.is_zero() and Nb == sv.a_element
        detail = f"bra form: {Jb}"
    return _flag("vanishing", params, ok, detail, note=f"level {sv.level}" + (", bra and ket" if bra else ""))


def check_vanishing_dressed(m: int, n: int, s: int, h: AElement, n_t: int) -> CheckResult:
    """<1|_{m,n-2s} pi(h) Q^(s) t(X)|1>_{mn} = 0 for a general dressing h."""
    from .currents import matrix_element
    params = {"m": m, "n": n, "s": s, "h": str(h), "n_t": n_t}
    bra = null_bra_element(m, n, s, h)
    J = matrix_element(bra, vacuum("ket", Weight.special(m, n)), n_t)
    return _flag("vanishing.dressed", params, J.is_zero() and not bra.is_zero(),
                 f"J={J}, bra zero: {bra.is_zero()}")


# ---------------------------------------------------------------------------
# oracle, dimensions


def _random_aelement(rng: random.Random, max_level: int) -> AElement:
    h = AElement()
    for _ in range(rng.randint(1, 3)):
        L = rng.randint(0, max_level)
        lam = rng.choice(partitions(L)) if L else Partition()
        h = h + AElement({lam: RingElem(Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 3)))})
    return h if not h.is_zero() else AElement.one()


def check_oracle(seed: int = 2024, instances: int = 10, M: int = 12, max_level: int = 3) -> list[CheckResult]:
    """Wick engine against the truncated mode-expansion series, random h, h' and n_t <= 3."""
    rng = random.Random(seed)
    out = []
    for idx in range(instances):
        h, hp = _random_aelement(rng, max_level), _random_aelement(rng, max_level)
        n_t = rng.randint(1, 3)
        w = Weight.generic()
        J = wick_matrix_element(h, hp, w, n_t)
        params = {"instance": idx, "h": str(h), "h'": str(hp), "n_t": n_t, "M": M}
        out.append(_compare("oracle", params, wick_series(J, M, n_t), series_oracle(h, hp, w, n_t, M)))
    return out


def check_dimensions(max_level: int = 8) -> list[CheckResult]:
    out = []
    for L in range(max_level + 1):
        d = a_subspace_dim(L)
        out.append(_compare("dims", {"level": L}, d, len(partitions(L)), note="rank of (D_1..D_L)"))
    return out


# ---------------------------------------------------------------------------
# registry for the command line


def _quick_levels(quick: bool) -> tuple[int, int]:
    return (3, 3) if quick else (4, 3)


def _all_symmetry(quick: bool) -> list[CheckResult]:
    out = []
    hs = [None, AElement.c(1), AElement.c(2), AElement.c(1, 1)]
    for n_t in range(1, 4):
        for h in hs:
            out.append(check_symmetry("periodicity", n_t, 0, h, AElement.c(2)))
            out.append(check_symmetry("conjugation", n_t, 0, h, AElement.c(2, 1)))
    for n_t in range(0, 4):
        for n_s in range(0, 3):
            if n_t + n_s:
                out.append(check_symmetry("reflection_ts", n_t, n_s))
    for n_t in (2,) if quick else (2, 4):
        out.append(check_symmetry("even_derivative", n_t))
    return out


def _all_h2(quick: bool) -> list[CheckResult]:
    return [check_h2(c, n) for c in ("reflection", "degenerate_vanishing") for n in (1, 2, 3)]


def _all_level1(quick: bool) -> list[CheckResult]:
    cases = [(2, 1), (4, 3), (2, -1), (3, 1), (1, -1)] + ([] if quick else [(4, 1)])
    return [check_resonance("level1", m, n, 1, n_t) for m, n in cases for n_t in (1, 2, 3)]


def _all_even(quick: bool) -> list[CheckResult]:
    return [check_resonance("even", m, n, 2, n_t) for m, n in ((2, 2), (2, 0)) for n_t in (1, 2, 3)]


def _all_eqmotion(quick: bool) -> list[CheckResult]:
    return [check_eq_motion(n) for n in (1, 3)]


def _all_conserved(quick: bool) -> list[CheckResult]:
    return [conserved_currents(k, n) for k in (0, 1, 2) for n in (1, 3)]


def _all_c2refl(quick: bool) -> list[CheckResult]:
    return [check_c2_refl11(n) for n in (1, 3)]


def _all_vanishing(quick: bool) -> list[CheckResult]:
    top = 4 if quick else 8
    out = []
    for m, n, s in admissible_triples(top):
        for n_t in (1, 2, 3):
            lev = s * (m - n + s)
            out.append(check_vanishing(m, n, s, n_t, bra=lev <= 4 and n_t == 1))
    return out


def _all_dressed(quick: bool) -> list[CheckResult]:
    hs = [AElement.c(1), AElement.c(2), AElement.c(1, 1)]
    cases = [(1, 1, 1), (2, 1, 1), (0, 0, 2)] if quick else [(1, 1, 1), (2, 1, 1), (0, 0, 2), (1, -1, 1), (2, 2, 2)]
    return [check_vanishing_dressed(m, n, s, h, n_t) for m, n, s in cases for h in hs for n_t in (1, 2)]


def _all_relations(quick: bool) -> list[CheckResult]:
    cutoff = 2 if quick else 3
    out = []
    for rel, rep in verify_relation("all", cutoff).items():
        detail = "; ".join(map(str, rep["failures"][:3]))
        out.append(_flag(f"relation.{rel}", {"cutoff": cutoff}, rep["ok"], detail,
                         note=f"{rep['checked']} instances"))
    return out


def _all_oracle(quick: bool) -> list[CheckResult]:
    return check_oracle(instances=4 if quick else 10)


def _all_dims(quick: bool) -> list[CheckResult]:
    return check_dimensions(6 if quick else 8)


def _all_kappa(quick: bool) -> list[CheckResult]:
    from .screenings import kappa_closed, kappa_sm
    top = 6 if quick else 9
    return [_compare("kappa", {"s": s, "m": m}, kappa_sm(s, m), kappa_closed(s, m))
            for s in range(1, top + 1) for m in range(4)]


def _all_ccoeff(quick: bool) -> list[CheckResult]:
    from .screenings import c_coeff
    import itertools
    out = []
    top = 8 if quick else 12
    for nu in range(1, 5):
        bad = []
        count = 0
        for kv in itertools.product(range(top + 1), repeat=nu):
            if sum(kv) > top:
                continue
            count += 1
            c = c_coeff(nu, kv)
            if c not in (0, 1, -1):
                bad.append((kv, c))
            elif c and (any(k % 2 for k in kv)
                        or any(not 0 <= sum(kv[i - 1:]) <= 2 * (i - 1) * (nu - i + 1) for i in range(1, nu + 1))):
                bad.append((kv, c))
        out.append(_flag("ccoeff", {"nu": nu, "max_sum": top}, not bad, str(bad[:5]),
                         note=f"{count} vectors"))
    return out


def _all_theorem(quick: bool) -> list[CheckResult]:
    from .macdonald import verify_singular_macdonald
    top = 6 if quick else 10
    out = []
    for s in range(1, top + 1):
        for sp in range(1, top // s + 1):
            # one module per class (m - n, n mod 2); the element depends on nothing else
            n = s % 2
            m = n + sp - s
            try:
                C = verify_singular_macdonald(m, n, s)
                out.append(_flag("macdonald.theorem", {"m": m, "n": n, "s": s}, True,
                                 note=f"C={C}"))
            except Exception as exc:  # reported, not raised
                out.append(_flag("macdonald.theorem", {"m": m, "n": n, "s": s}, False, str(exc)))
    return out


def _all_eigen(quick: bool) -> list[CheckResult]:
    from .macdonald import MacdonaldParams, eigenvalue, macdonald_apply, macdonald_poly
    top = 4 if quick else 6
    out = []
    for L in range(1, top + 1):
        for lam in partitions(L):
            P = macdonald_poly(lam)
            out.append(_compare("macdonald.eigen", {"lambda": list(lam)},
                                macdonald_apply(P, MacdonaldParams(L)), P * eigenvalue(lam, L)))
    return out


def _ratio(R, P) -> RingElem | None:
    """Nonzero c with R = c P in the power-sum basis, or None."""
    from .symalg import basis_convert
    R, P = basis_convert(R, "powersum"), basis_convert(P, "powersum")
    if P.is_zero() or R.is_zero():
        return None
    key, c = P.terms[0]
    ratio = R.coefficient(key) / c
    return ratio if not ratio.is_zero() and R == P.scale(ratio) else None


def _all_intrep(quick: bool) -> list[CheckResult]:
    from .macdonald import integral_rep_poly, macdonald_poly
    top = 6 if quick else 8
    out = []
    for s in range(1, top + 1):
        for sp in range(1, top // s + 1):
            P = macdonald_poly((sp,) * s)
            R = integral_rep_poly(s, sp)
            ratio = _ratio(R, P)
            out.append(_flag("intrep", {"s": s, "sp": sp}, ratio is not None,
                             "not proportional", note=f"ratio={ratio}"))
    return out


def _all_hreal(quick: bool) -> list[CheckResult]:
    from .macdonald import h_realization_check
    rep = h_realization_check(3 if quick else 4)
    return [_flag("hrealization", {"max_level": 3 if quick else 4}, rep["ok"], str(rep)[:400])]


CHECKS: dict[str, Callable[[bool], list[CheckResult]]] = {
    "symmetry": _all_symmetry,
    "h2": _all_h2,
    "resonance.level1": _all_level1,
    "resonance.even": _all_even,
    "eqmotion": _all_eqmotion,
    "conserved": _all_conserved,
    "c2refl11": _all_c2refl,
    "vanishing": _all_vanishing,
    "vanishing.dressed": _all_dressed,
    "relations": _all_relations,
    "oracle": _all_oracle,
    "dims": _all_dims,
    "kappa": _all_kappa,
    "ccoeff": _all_ccoeff,
    "macdonald.theorem": _all_theorem,
    "macdonald.eigen": _all_eigen,
    "intrep": _all_intrep,
    "hrealization": _all_hreal,
}


def run_check(check_id: str, quick: bool = False) -> list[CheckResult]:
    """Run a registered battery; 'all' runs every one in registry order."""
    if check_id == "all":
        out = []
        for cid in CHECKS:
            out.extend(run_check(cid, quick))
        return out
    if check_id not in CHECKS:
        raise IdentityError(f"unknown check id {check_id!r}; choose from all, {', '.join(CHECKS)}")
    t0 = time.perf_counter()
    res = CHECKS[check_id](quick)
    dt = time.perf_counter() - t0
    for r in res:
        r.elapsed = dt / max(len(res), 1)
    return res
