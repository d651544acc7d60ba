"""Currents t, s, sigma, S as vertex operators: mode action, Wick matrix elements, series oracle.

A vertex operator is V(z) = c * u_eff^p * :exp sum_{k != 0} (alpha_k d^-_k + beta_k d^+_k) z^-k:
possibly followed by a delta-shift of the weight. On kets the annihilating half
shifts the creation variables and the creating half multiplies by a series.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Sequence

import flint

from .coeffring import (CTX, ONE, ZERO, C0, RingElem, A, V, U, B1)
from .fock import (AElement, FockVector, Weight, _add_into, _insert, a_rep_apply,
                   is_A_vector, pairing, vacuum)
from .symalg import Partition, SymRat

__all__ = [
    "VertexSpec", "SPECS", "vertex", "apply_vertex_mode", "apply_t_mode",
    "wick_matrix_element", "series_oracle", "wick_series", "xi_eta_vector",
    "XiEtaResult", "contraction_f", "kappa_prime", "matrix_element", "vacuum_ket_element",
    "RELATIONS", "verify_relation",
]


# ---------------------------------------------------------------------------
# vertex operator specifications


@dataclass(frozen=True)
class VertexSpec:
    """One exponential branch; coeff(nu, k) is the coefficient of d^nu_k z^-k."""

    name: str
    coeff: Callable[[int, int], RingElem] = field(compare=False)
    zero_power: int = 0
    delta_shift: int = 0
    only_modes: frozenset | None = None

    def c(self, nu: int, k: int) -> RingElem:
        if self.only_modes is not None and abs(k) not in self.only_modes:
            return ZERO
        return self.coeff(nu, k)

    def restricted(self, k: int) -> "VertexSpec":
        """The same operator keeping only the modes +-k (per-mode factorization)."""
        return VertexSpec(f"{self.name}|{k}", self.coeff, self.zero_power, self.delta_shift, frozenset([k]))


def _vk(k: int) -> RingElem:
    return V ** k


@lru_cache(maxsize=None)
def _lam_minus(nu: int, k: int) -> RingElem:
    return RingElem(Fraction(1, k)) if nu < 0 else ZERO


@lru_cache(maxsize=None)
def _lam_plus(nu: int, k: int) -> RingElem:
    return RingElem(Fraction(1, k)) if nu > 0 else ZERO


@lru_cache(maxsize=None)
def _s(nu: int, k: int) -> RingElem:
    return RingElem(Fraction(1, k)) if nu < 0 else RingElem(Fraction((-1) ** (k % 2), k))


@lru_cache(maxsize=None)
def _S(nu: int, k: int) -> RingElem:
    base = (k * (_vk(k) - _vk(-k))).inverse()
    return base if nu < 0 else -base


@lru_cache(maxsize=None)
def _sigma(nu: int, k: int) -> RingElem:
    base = (k * (_vk(k) - _vk(-k))).inverse()
    return _vk(k) * base if nu < 0 else -_vk(-k) * base


@lru_cache(maxsize=None)
def _psibar(nu: int, k: int) -> RingElem:
    return RingElem(Fraction(-1, k)) if (nu < 0 and k < 0) else ZERO


@lru_cache(maxsize=None)
def _psi(nu: int, k: int) -> RingElem:
    return RingElem(Fraction(-1, k)) if (nu > 0 and k > 0) else ZERO


SPECS: dict[str, VertexSpec] = {
    "lambda-": VertexSpec("lambda-", _lam_minus),
    "lambda+": VertexSpec("lambda+", _lam_plus),
    "t-": VertexSpec("t-", _lam_minus, zero_power=1),
    "t+": VertexSpec("t+", _lam_plus, zero_power=-1),
    "s": VertexSpec("s", _s),
    "S": VertexSpec("S", _S, delta_shift=1),
    "sigma": VertexSpec("sigma", _sigma, delta_shift=1),
    "Psibar": VertexSpec("Psibar", _psibar, zero_power=1),
    "Psi": VertexSpec("Psi", _psi, zero_power=-1),
}


def vertex(name: str) -> list[VertexSpec]:
    """Branches of a named current; t(z) = u lambda_-(z) + u^-1 lambda_+(z)."""
    if name == "t":
        return [SPECS["t-"], SPECS["t+"]]
    return [SPECS[name]]


# ---------------------------------------------------------------------------
# mode action on kets


def _creation_series(spec: VertexSpec, p: int) -> dict:
    """G_p: coefficient of z^p in exp(sum_{k>0} (alpha_{-k} x^-_k + beta_{-k} x^+_k) z^k)."""
    return _creation_series_cached(spec, p)


@lru_cache(maxsize=None)
def _creation_series_cached(spec: VertexSpec, p: int) -> dict:
    if p == 0:
        return {(Partition(), Partition()): ONE}
    out: dict = {}
    for k in range(1, p + 1):
        a = spec.c(-1, -k)
        b = spec.c(1, -k)
        if a.is_zero() and b.is_zero():
            continue
        prev = _creation_series_cached(spec, p - k)
        for (m, pl), c in prev.items():
            if not a.is_zero():
                _add_into(out, (_insert(m, k), pl), c * a * k)
            if not b.is_zero():
                _add_into(out, (m, _insert(pl, k)), c * b * k)
    inv = RingElem(Fraction(1, p))
    return {key: c * inv for key, c in out.items()}


def _annihilation_expand(spec: VertexSpec, key) -> list[tuple[int, tuple, RingElem]]:
    """Shift x^-_k -> x^-_k + beta_k k A^+_k z^-k, x^+_k -> x^+_k + alpha_k k A^-_k z^-k.

    Returns (p, remaining key, coefficient) with p the lowered level."""
    mm, mp = key
    factors = []
    for part, nu in ((mm, -1), (mp, 1)):
        for k, e in part.multiplicities().items():
            shift = spec.c(1, k) * k * A(1, k) if nu < 0 else spec.c(-1, k) * k * A(-1, k)
            opts = []
            for r in range(e + 1):
                if r and shift.is_zero():
                    break
                opts.append((nu, k, r, comb(e, r) * shift ** r if r else ONE))
            factors.append((e, opts))
    out = []
    for choice in itertools.product(*(opts for _, opts in factors)):
        p = 0
        coef = ONE
        rm = list(mm)
        rp = list(mp)
        for nu, k, r, c in choice:
            p += k * r
            coef = coef * c
            lst = rm if nu < 0 else rp
            for _ in range(r):
                lst.remove(k)
        out.append((p, (Partition(rm), Partition(rp)), coef))
    return out


@lru_cache(maxsize=200000)
def _vertex_on_key(br: VertexSpec, j: int, key) -> dict:
    out: dict = {}
    for p, rest, coef in _annihilation_expand(br, key):
        q = p - j
        if q < 0:
            continue
        for gk, gc in _creation_series(br, q).items():
            nk = (Partition.sorted(rest[0] + gk[0]), Partition.sorted(rest[1] + gk[1]))
            _add_into(out, nk, coef * gc)
    return out


def apply_vertex_mode(spec: VertexSpec | str, j: int, v: FockVector) -> FockVector:
    """Mode V_j = [z^-j] V(z) on a ket; lowers the level by j."""
    if v.side != "ket":
        raise ValueError("apply_vertex_mode acts on kets; transpose bras first")
    branches = vertex(spec) if isinstance(spec, str) else [spec]
    total = None
    for br in branches:
        w_out = v.weight.shift(br.delta_shift) if br.delta_shift else v.weight
        pref = v.weight.u_eff() ** br.zero_power if br.zero_power else ONE
        out: dict = {}
        for key, c in v.terms.items():
            base = c * pref
            for nk, x in _vertex_on_key(br, j, key).items():
                _add_into(out, nk, base * x)
        vec = FockVector._raw("ket", w_out, out)
        total = vec if total is None else total + vec
    return total


def apply_t_mode(j: int, v: FockVector) -> FockVector:
    return apply_vertex_mode("t", j, v)


# ---------------------------------------------------------------------------
# Wick engine

_WICK_CTX_CACHE: dict[int, flint.fmpq_mpoly_ctx] = {}


def _wick_ctx(nz: int) -> flint.fmpq_mpoly_ctx:
    if nz not in _WICK_CTX_CACHE:
        names = ("v", "u") + tuple(f"z{i}" for i in range(nz))
        _WICK_CTX_CACHE[nz] = flint.fmpq_mpoly_ctx.get(names, "lex")
    return _WICK_CTX_CACHE[nz]


def contraction_f(ctx, wm, wp):
    """Numerator of f(w-/w+) * q (w-^2 - w+^2) = (w- + q w+)(q w- - w+)."""
    v = ctx.gens()[0]
    q = v * v
    return (wm + q * wp) * (q * wm - wp)


def kappa_prime(k: int) -> RingElem:
    """Contraction of c_{-k} from the bra with c_{-k} from the ket: -(1+(-1)^k) k / A^+_k."""
    if k % 2:
        return ZERO
    return RingElem(-2 * k) / A(1, k)


def _ring_to_ctx(x: RingElem, ctx, nz: int):
    """RingElem (real) -> (numerator poly, denominator poly) in the Wick context."""
    if not x.is_real():
        raise ValueError("Wick engine coefficients must be real")

    def conv(p):
        return ctx.from_dict({tuple(k) + (0,) * nz: c for k, c in p.to_dict().items()})

    return conv(x.re), conv(x.den)


def _eps_term(ctx, eps: tuple[int, ...], n_s: int):
    """Zero modes and pair contractions for one branch assignment, times u^n_t q^P prod pair dens."""
    n_t = len(eps)
    gens = ctx.gens()
    v, u = gens[0], gens[1]
    z = gens[2:]
    q = v * v
    term = ctx.constant(1)
    # zero modes: u^{-eps_i}, shifted by u^{n_t}
    term = term * u ** sum(1 - e for e in eps)
    # pair contractions among t's
    for a, b in itertools.combinations(range(n_t), 2):
        if eps[a] == eps[b]:
            term = term * q * (z[a] ** 2 - z[b] ** 2)
        elif eps[a] < 0:
            term = term * contraction_f(ctx, z[a], z[b])
        else:
            term = term * (-contraction_f(ctx, z[b], z[a]))
    # t - s pairs: exactly one cross-sign pairing
    for a in range(n_t):
        for b in range(n_s):
            y = z[n_t + b]
            if eps[a] > 0:
                # lambda+(x) with lambda-(y): f(y/x), den q(y^2 - x^2) -> q(x^2 - y^2) with sign
                term = term * (-contraction_f(ctx, y, z[a]))
            else:
                # lambda-(x) with lambda+(-y): f(x/(-y)), den q(x^2 - y^2)
                term = term * contraction_f(ctx, z[a], -y)
    # s - s pairs: lambda-(y_a) with lambda+(-y_b) and lambda+(-y_a) with lambda-(y_b)
    for a, b in itertools.combinations(range(n_s), 2):
        ya, yb = z[n_t + a], z[n_t + b]
        term = term * (-contraction_f(ctx, ya, -yb) * contraction_f(ctx, yb, -ya))
    return term


def _wick_monomial_pair(lam: Partition, mu: Partition, n_t: int, n_s: int, level_shift: int):
    """Unreduced numerator over Q[v, u, z] for h = c_lam, h' = c_mu.

    Returns (num, scalar_den) with the convention that the full answer is
    num / (scalar_den * q^P * prod pair dens * prod z_i^level_shift * u^n_t)."""
    nz = n_t + n_s
    ctx = _wick_ctx(nz)
    gens = ctx.gens()
    v = gens[0]
    z = gens[2:]
    one = ctx.constant(1)
    # elementary factors: (sign, argument poly, owner index, square-arg index)
    ma = lam.multiplicities()
    mb = mu.multiplicities()
    ks = sorted(set(ma) | set(mb))
    # scalar denominators from kappa'
    kp_num = {}
    scal_den = one
    for k in ks:
        j = min(ma.get(k, 0), mb.get(k, 0))
        if j and k % 2 == 0:
            # kappa'_k = -2k v^{2k} / (v^{2k} - 1)^2
            kp_num[k] = (ctx.constant(-2 * k) * v ** (2 * k), (v ** (2 * k) - 1) ** 2)
            scal_den = scal_den * kp_num[k][1] ** j
    total = ctx.from_dict({})
    for eps in itertools.product((-1, 1), repeat=n_t):
        term = _eps_term(ctx, eps, n_s)
        # h insertions; the ket side is multiplied by prod_i z_i^k per generator
        ins = one
        for k in ks:
            a_k, b_k = ma.get(k, 0), mb.get(k, 0)
            P = ctx.from_dict({})
            Pt = ctx.from_dict({})
            for i in range(n_t):
                P = P + ((-eps[i]) ** (k + 1)) * z[i] ** k
                mono = one
                for i2 in range(n_t):
                    if i2 != i:
                        mono = mono * z[i2] ** k
                Pt = Pt + (eps[i] ** (k + 1)) * mono
            zk = one
            for i in range(n_t):
                zk = zk * z[i] ** k
            jmax = min(a_k, b_k)
            fac = ctx.from_dict({})
            for jj in range(jmax + 1):
                if jj and k % 2:
                    break
                t = ctx.constant(factorial(jj) * comb(a_k, jj) * comb(b_k, jj))
                if k in kp_num:
                    kn, kd = kp_num[k]
                    t = t * kn ** jj * kd ** (jmax - jj)
                t = t * P ** (a_k - jj) * Pt ** (b_k - jj) * zk ** jj
                fac = fac + t
            ins = ins * fac
        total = total + term * ins
    return total, scal_den


def _wick_to_symrat(num, scal_den, vars, n_t, n_s, level_shift):
    """Reduce pair factors in flint and convert to a canonical SymRat."""
    nz = n_t + n_s
    ctx = _wick_ctx(nz)
    gens = ctx.gens()
    z = gens[2:]
    # denominator pair factors: tt: (z_a^2 - z_b^2)^1, ts: ^1, ss: ^2
    den: dict = {}
    npairs = 0
    for a, b in itertools.combinations(range(nz), 2):
        e = 2 if (a >= n_t and b >= n_t) else 1
        den[(a, b, 1)] = e
        den[(a, b, -1)] = e
        npairs += e
    if num.is_zero():
        return SymRat.zero(vars)
    for (a, b, s), e in list(den.items()):
        fac = z[a] + s * z[b]
        while den[(a, b, s)] > 0:
            try:
                qt = num / fac
            except Exception:
                break
            num = qt
            den[(a, b, s)] -= 1
    # group by z-exponents
    groups: dict = {}
    for k, c in num.to_dict().items():
        vu = (k[0], k[1])
        zk = tuple(k[2:])
        groups.setdefault(zk, {})[vu] = c
    # overall scalar: 1/(scal_den * q^npairs * u^n_t); z shift: level_shift per t-variable
    sd_dict = {(kk[0], kk[1]): c for kk, c in scal_den.to_dict().items()}
    scal = RingElem.from_polys(CTX.constant(1), CTX.from_dict({}), CTX.from_dict(sd_dict))
    scal = scal * V ** (-2 * npairs) * U ** (-n_t)
    numd = {}
    for zk, d in groups.items():
        coef = RingElem.from_polys(CTX.from_dict(d), CTX.from_dict({}), CTX.constant(1)) * scal
        key = tuple(zk[i] - (level_shift if i < n_t else 0) for i in range(nz))
        numd[key] = coef
    dd = {k: e for k, e in den.items() if e}
    return SymRat(vars, numd, dd, reduce=False)


def wick_matrix_element(h: AElement, hp: AElement, w: Weight | None = None,
                        n_t: int = 0, n_s: int = 0) -> SymRat:
    """<1|pi(h) t(x_1)...t(x_N) s(y_1)...s(y_M) barpi(h')|1>_a as a canonical SymRat."""
    if n_t < 0 or n_s < 0:
        raise ValueError("n_t and n_s must be nonnegative")
    w = w or Weight.generic()
    vars = tuple(f"x{i + 1}" for i in range(n_t)) + tuple(f"y{j + 1}" for j in range(n_s))
    if not vars:
        # no currents: <h|h'> pairing
        val = pairing(a_rep_apply("pi", h, vacuum("bra", w)), a_rep_apply("barpi", hp, vacuum("ket", w)))
        return SymRat((), {(): val}) if not val.is_zero() else SymRat.zero(())
    total = SymRat.zero(vars)
    for lam, c1 in h.terms.items():
        for mu, c2 in hp.terms.items():
            total = total + _wick_pair_cached(lam, mu, n_t, n_s) * (c1 * c2)
    if w != Weight.generic():
        total = total.map_coeffs(w.specialize)
    return total


@lru_cache(maxsize=None)
def _wick_pair_cached(lam: Partition, mu: Partition, n_t: int, n_s: int) -> SymRat:
    vars = tuple(f"x{i + 1}" for i in range(n_t)) + tuple(f"y{j + 1}" for j in range(n_s))
    shift = sum(mu)
    num, sd = _wick_monomial_pair(lam, mu, n_t, n_s, shift)
    return _wick_to_symrat(num, sd, vars, n_t, n_s, shift)


# ---------------------------------------------------------------------------
# series oracle: per-mode brute force in the region |x_1| > |x_2| > ...


def _series_mul(a: dict, b: dict, cap: int) -> dict:
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            if max(k, default=0) > cap:
                continue
            _add_into(out, k, ca * cb)
    return out


@lru_cache(maxsize=None)
def _mode_matrix_element(k: int, a_k: int, b_k: int, eps: tuple[int, ...], cap: int, weight: Weight) -> dict:
    """<1|pi(c_{-k})^a V_1(x_1)...V_N(x_N) barpi(c_{-k})^b|1> restricted to mode k.

    Returned as a series {w-exponents: coeff}, x_1 = 1, x_{i+1} = x_i w_i. Mode
    sums are truncated so that every intermediate level stays <= level0 + cap."""
    n = len(eps)
    specs = [(SPECS["lambda-"] if e < 0 else SPECS["lambda+"]).restricted(k) for e in eps]
    ket0 = a_rep_apply("barpi", AElement({(k,) * b_k: ONE}), vacuum("ket", weight))
    bra = a_rep_apply("pi", AElement({(k,) * a_k: ONE}), vacuum("bra", weight))
    l0 = k * b_k
    lbra = k * a_k
    lmax = l0 + cap
    # states: (x-exponents of the factors applied so far, level, homogeneous vector)
    states = [((), l0, ket0)]
    for idx in range(n - 1, -1, -1):
        new = []
        for expo, lev, vec in states:
            if idx == 0:
                js = [lev - lbra]
            else:
                js = range(lev - lmax, lev + 1)
            for j in js:
                if j % k:
                    continue
                out = apply_vertex_mode(specs[idx], j, vec)
                if out.is_zero():
                    continue
                new.append(((-j,) + expo, lev - j, out))
        states = new
    res: dict = {}
    for expo, lev, vec in states:
        val = pairing(bra, vec)
        if val.is_zero():
            continue
        # power of w_t = sum_{i>t} (x_i exponent)
        wexp = tuple(sum(expo[i] for i in range(t + 1, n)) for t in range(n - 1))
        _add_into(res, wexp, val)
    return res


class _FSeries:
    """Truncated Laurent series in w with coefficients in Q(v): poly * v^sv w^sw / den(v)."""

    def __init__(self, ctx, poly, shift, den):
        self.ctx, self.poly, self.shift, self.den = ctx, poly, shift, den

    @staticmethod
    def from_dict(ctx, d: dict, nw: int) -> "_FSeries":
        if not d:
            return _FSeries(ctx, ctx.from_dict({}), (0,) * (nw + 1), ctx.constant(1))
        den = CTX.constant(1)
        for c in d.values():
            den = den * (c.den / den.gcd(c.den))
        sv = 0
        sw = [0] * nw
        terms: dict = {}
        for wk, c in d.items():
            if not c.is_real():
                raise ValueError("oracle expects real coefficients")
            mult = c.re * (den / c.den)
            for (ev, eu), x in mult.to_dict().items():
                if eu:
                    raise ValueError("oracle mode factors must be free of u")
                terms[(ev,) + tuple(wk)] = x
        sv = -min(0, min(k[0] for k in terms))
        sw = [-min(0, min(k[1 + t] for k in terms)) for t in range(nw)]
        shifted = {(k[0] + sv,) + tuple(k[1 + t] + sw[t] for t in range(nw)): x for k, x in terms.items()}
        dpoly = ctx.from_dict({(ev,) + (0,) * nw: x for (ev, eu), x in den.to_dict().items()})
        return _FSeries(ctx, ctx.from_dict(shifted), (sv,) + tuple(sw), dpoly)

    def mul(self, o: "_FSeries", cap: int) -> "_FSeries":
        poly = self.poly * o.poly
        shift = tuple(a + b for a, b in zip(self.shift, o.shift))
        keep = {k: x for k, x in poly.to_dict().items()
                if all(k[1 + t] - shift[1 + t] <= cap for t in range(len(shift) - 1))}
        return _FSeries(self.ctx, self.ctx.from_dict(keep), shift, self.den * o.den)

    def to_dict(self) -> dict:
        nw = len(self.shift) - 1
        groups: dict = {}
        for k, x in self.poly.to_dict().items():
            wk = tuple(k[1 + t] - self.shift[1 + t] for t in range(nw))
            groups.setdefault(wk, {})[(k[0], 0)] = x
        den = CTX.from_dict({(k[0], 0): x for k, x in self.den.to_dict().items()})
        out = {}
        for wk, d in groups.items():
            c = RingElem.from_polys(CTX.from_dict(d), CTX.from_dict({}), den) * V ** (-self.shift[0])
            if not c.is_zero():
                out[wk] = c
        return out


def series_oracle(h: AElement, hp: AElement, w: Weight | None, n_t: int, M: int) -> dict:
    """Brute-force mode expansion of <h|t(x_1)...t(x_N)|h'> with x_1 = 1, x_{i+1} = x_i w_i.

    Each sign branch of the t's factorizes over the Heisenberg modes; every mode
    factor is computed by explicit mode action on Fock vectors. Exact for all
    w-exponents <= M. Returns {w-exponents: RingElem}."""
    w = w or Weight.generic()
    u = w.u_eff()
    nw = max(n_t - 1, 0)
    ctx = flint.fmpq_mpoly_ctx.get(("v",) + tuple(f"w{t}" for t in range(nw)), "lex")
    total: dict = {}
    lvl = max((sum(mu) for mu in hp.terms), default=0) + max((sum(l) for l in h.terms), default=0)
    cap = M + lvl
    for lam, c1 in h.terms.items():
        for mu, c2 in hp.terms.items():
            ma, mb = lam.multiplicities(), mu.multiplicities()
            for eps in itertools.product((-1, 1), repeat=n_t):
                zero = ONE
                for e in eps:
                    zero = zero * (u if e < 0 else u.inverse())
                ser = _FSeries.from_dict(ctx, {(0,) * nw: ONE}, nw)
                for k in range(1, cap + 1):
                    fac = _mode_matrix_element(k, ma.get(k, 0), mb.get(k, 0), eps, cap, Weight.generic())
                    ser = ser.mul(_FSeries.from_dict(ctx, fac, nw), cap)
                    if ser.poly.is_zero():
                        break
                for key, c in ser.to_dict().items():
                    _add_into(total, key, c * zero * c1 * c2)
    return {k: c for k, c in total.items() if max(k, default=0) <= M}


def wick_series(J: SymRat, M: int, n_t: int) -> dict:
    """Expansion of a t-only SymRat at x_1 = 1, x_{i+1} = x_i w_i, all w-exponents <= M."""
    n = n_t
    if n <= 1:
        out = {}
        for k, c in J.num.items():
            _add_into(out, (), c)
        return out

    def wmono(xexp):
        return tuple(sum(xexp[i] for i in range(t + 1, n)) for t in range(n - 1))

    lo_num = min((min(wmono(k)) for k in J.num), default=0)
    cap = M - min(lo_num, 0) + sum(J.den.values())
    ser: dict = {}
    for k, c in J.num.items():
        _add_into(ser, wmono(k), c)
    for (a, b, s), e in J.den.items():
        # (x_a + s x_b) = x_a (1 + s w_a ... w_{b-1})
        shift = [0] * (n - 1)
        for t in range(a):
            shift[t] -= 1  # 1/x_a = 1/(w_1 ... w_{a-1})
        inv: dict = {}
        mono = tuple(1 if a <= t < b else 0 for t in range(n - 1))
        for r in range(cap + 1):
            key = tuple(x * r for x in mono)
            inv[key] = RingElem((-s) ** r)
        geo = inv
        for _ in range(e):
            ser = _series_mul(ser, geo, cap)
            ser = {tuple(x + y for x, y in zip(kk, shift)): c for kk, c in ser.items()}
    return {k: c for k, c in ser.items() if max(k) <= M}


# ---------------------------------------------------------------------------
# xi/eta vectors


@dataclass
class XiEtaResult:
    vector: FockVector
    condition_holds: bool
    normal_ordered: bool
    is_A: bool


def xi_eta_vector(xi: Sequence, eta: Sequence, k: int, w: Weight | None = None) -> XiEtaResult:
    """z^k coefficient of t(z xi_1)...t(z xi_r) s(z eta_1)...s(z eta_s)|1>_a.

    When a contraction constant f(xi_a/xi_b) is singular the normal-ordered
    product is returned instead (flag normal_ordered)."""
    w = w or Weight.generic()
    xi = [RingElem.coerce(x) if not isinstance(x, RingElem) else x for x in xi]
    eta = [RingElem.coerce(x) if not isinstance(x, RingElem) else x for x in eta]
    q = V * V

    def f(zz: RingElem) -> RingElem | None:
        d = zz * zz - 1
        if d.is_zero():
            return None
        return (zz + q) * (zz - q.inverse()) / d

    # elementary lambda factors: (sign, scale)
    cond = all(
        (sum((x ** j for x in xi), ZERO) + (1 + (-1) ** (j % 2)) * sum((y ** j for y in eta), ZERO)).is_zero()
        for j in range(1, k + 1)
    )
    normal = False
    total = None
    u = w.u_eff()
    for eps in itertools.product((-1, 1), repeat=len(xi)):
        lams = [(e, x) for e, x in zip(eps, xi)]
        owners = list(range(len(xi)))
        for j, y in enumerate(eta):
            lams += [(-1, y), (1, -y)]
            owners += [len(xi) + j] * 2
        coef = ONE
        for e in eps:
            coef = coef * (u if e < 0 else u.inverse())
        sing = False
        for (i1, (e1, a1)), (i2, (e2, a2)) in itertools.combinations(enumerate(lams), 2):
            if owners[i1] == owners[i2] or e1 == e2:
                continue
            wm, wp = (a1, a2) if e1 < 0 else (a2, a1)
            val = f(wm / wp)
            if val is None:
                sing = True
                break
            coef = coef * val
        if sing:
            normal = True
        # creation part: exp(sum_p (x^-_p (-1/p) sum_{minus} a^p + x^+_p (-1/p) sum_{plus} a^p) z^p)
        vec = _coherent_coefficient(lams, k)
        vec = {kk: c * coef for kk, c in vec.items()}
        fv = FockVector._raw("ket", w, vec)
        total = fv if total is None else total + fv
    if normal:
        # recompute without contraction constants
        total = None
        for eps in itertools.product((-1, 1), repeat=len(xi)):
            lams = [(e, x) for e, x in zip(eps, xi)]
            for y in eta:
                lams += [(-1, y), (1, -y)]
            coef = ONE
            for e in eps:
                coef = coef * (u if e < 0 else u.inverse())
            vec = _coherent_coefficient(lams, k)
            fv = FockVector._raw("ket", w, {kk: c * coef for kk, c in vec.items()})
            total = fv if total is None else total + fv
    total = total if total is not None else FockVector._raw("ket", w, {})
    return XiEtaResult(total, cond, normal, is_A_vector(total))


def _coherent_coefficient(lams, k: int) -> dict:
    """z^k coefficient of prod exp(sum_{p>0} d^nu_{-p} (z a)^p / p) |1>."""
    # c_p = sum over factors of coefficient of x^nu_p: alpha_{-p} a^p = (1/(-p)) a^p
    cm = {}
    cp = {}
    for p in range(1, k + 1):
        cm[p] = sum((a ** p for e, a in lams if e < 0), ZERO) * Fraction(-1, p)
        cp[p] = sum((a ** p for e, a in lams if e > 0), ZERO) * Fraction(-1, p)
    G = [{(Partition(), Partition()): ONE}]
    for n in range(1, k + 1):
        out: dict = {}
        for p in range(1, n + 1):
            for (m, pl), c in G[n - p].items():
                if not cm[p].is_zero():
                    _add_into(out, (_insert(m, p), pl), c * cm[p] * p)
                if not cp[p].is_zero():
                    _add_into(out, (m, _insert(pl, p)), c * cp[p] * p)
        G.append({kk: c * Fraction(1, n) for kk, c in out.items()})
    return G[k]


# ---------------------------------------------------------------------------
# matrix elements between arbitrary Fock states


def _string_specs(eps: tuple[int, ...], n_s: int) -> list[tuple[VertexSpec, int]]:
    """(spec, argument index) for t-branches then s-factors."""
    out = [(SPECS["t-"] if e < 0 else SPECS["t+"], i) for i, e in enumerate(eps)]
    return out + [(SPECS["s"], len(eps) + j) for j in range(n_s)]


def _op_sum(vars, specs, nu: int, k: int, side: str) -> SymRat:
    """Sum over vertices of the contraction of one external mode with V_i(z_i)."""
    n = len(vars)
    num: dict = {}
    for spec, i in specs:
        if side == "ket":
            # ket d^nu_{-k} meets the annihilator d^{-nu}_k of the vertex
            c = spec.c(-nu, k) * k * A(-nu, k)
            p = -k
        else:
            # bra d^nu_k meets the creator d^{-nu}_{-k} of the vertex
            c = spec.c(-nu, -k) * k * A(nu, k)
            p = k
        if c.is_zero():
            continue
        mono = [0] * n
        mono[i] = p
        _add_into(num, tuple(mono), c)
    return SymRat(vars, num)


@lru_cache(maxsize=None)
def _eps_vacuum(eps: tuple[int, ...], n_s: int) -> SymRat:
    n_t = len(eps)
    vars = tuple(f"x{i + 1}" for i in range(n_t)) + tuple(f"y{j + 1}" for j in range(n_s))
    ctx = _wick_ctx(n_t + n_s)
    return _wick_to_symrat(_eps_term(ctx, eps, n_s), ctx.constant(1), vars, n_t, n_s, 0)


def _external_factor(vars, specs, bkey, kkey) -> SymRat:
    """Contractions of bra modes and ket modes with the string and with each other."""
    bm, bp = bkey
    km, kp = kkey
    res = SymRat.const(vars, ONE)
    # bra d^-_k pairs with ket d^+_{-k}; bra d^+_k with ket d^-_{-k}
    for nu, bpart, kpart in ((-1, bm, kp), (1, bp, km)):
        mb, mk = bpart.multiplicities(), kpart.multiplicities()
        for k in sorted(set(mb) | set(mk)):
            b, c = mb.get(k, 0), mk.get(k, 0)
            sb = _op_sum(vars, specs, nu, k, "bra") if b else None
            sk = _op_sum(vars, specs, -nu, k, "ket") if c else None
            fac = SymRat.zero(vars)
            for j in range(min(b, c) + 1):
                t = SymRat.const(vars, RingElem(factorial(j) * comb(b, j) * comb(c, j)) * (k * A(nu, k)) ** j)
                if b - j:
                    t = t * sb ** (b - j)
                if c - j:
                    t = t * sk ** (c - j)
                fac = fac + t
            res = res * fac
    return res


def matrix_element(bra: FockVector, ket: FockVector, n_t: int = 0, n_s: int = 0) -> SymRat:
    """<bra| t(x_1)...t(x_N) s(y_1)...s(y_M) |ket> for arbitrary Fock vectors of equal weight."""
    if bra.side != "bra" or ket.side != "ket":
        raise ValueError("matrix_element needs (bra, ket)")
    if bra.weight != ket.weight:
        raise ValueError(f"weight mismatch: {bra.weight} vs {ket.weight}")
    w = ket.weight
    vars = tuple(f"x{i + 1}" for i in range(n_t)) + tuple(f"y{j + 1}" for j in range(n_s))
    total = SymRat.zero(vars)
    for eps in itertools.product((-1, 1), repeat=n_t):
        specs = _string_specs(eps, n_s)
        vac = _eps_vacuum(eps, n_s).map_coeffs(w.specialize)
        ext = SymRat.zero(vars)
        for bk, cb in bra.terms.items():
            for kk, ck in ket.terms.items():
                ext = ext + _external_factor(vars, specs, bk, kk) * (cb * ck)
        total = total + vac * ext
    return total


def vacuum_ket_element(v: FockVector, n_t: int) -> SymRat:
    """<1| t(x_1)...t(x_N) |v> for an arbitrary ket."""
    return matrix_element(vacuum("bra", v.weight), v, n_t)


# ---------------------------------------------------------------------------
# exact fractions with substitution, for residues and zeros


class _Frac:
    """num / den over Q[v, u, args]; real coefficients only."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx, num, den):
        if not den.is_zero() and not num.is_zero():
            g = num.gcd(den)
            if not g.is_one():
                num, den = num / g, den / g
        self.ctx, self.num, self.den = ctx, num, den

    @staticmethod
    def ctx_for(vars) -> flint.fmpq_mpoly_ctx:
        return flint.fmpq_mpoly_ctx.get(("v", "u") + tuple(vars), "lex")

    @classmethod
    def from_symrat(cls, J: SymRat, ctx=None) -> "_Frac":
        ctx = ctx or cls.ctx_for(J.vars)
        n = len(J.vars)
        g = ctx.gens()
        z = g[2:]
        one = ctx.constant(1)
        if not J.num:
            return cls(ctx, ctx.from_dict({}), one)
        low = [min(k[i] for k in J.num) for i in range(n)]
        den = one
        for i in range(n):
            if low[i] < 0:
                den = den * z[i] ** (-low[i])
        # common scalar denominator
        sden = one
        parts = []
        for k, c in J.num.items():
            if not c.is_real():
                raise ValueError("exact fractions need real coefficients")
            re = ctx.from_dict({tuple(e) + (0,) * n: x for e, x in c.re.to_dict().items()})
            dd = ctx.from_dict({tuple(e) + (0,) * n: x for e, x in c.den.to_dict().items()})
            mono = one
            for i in range(n):
                mono = mono * z[i] ** (k[i] - min(low[i], 0))
            parts.append((re * mono, dd))
            sden = sden * dd // sden.gcd(dd)
        num = ctx.from_dict({})
        for p, dd in parts:
            num = num + p * (sden / dd)
        den = den * sden
        for (i, j, s), e in J.den.items():
            den = den * (z[i] + s * z[j]) ** e
        return cls(ctx, num, den)

    def subs(self, images: dict) -> "_Frac":
        """Polynomial substitution of arguments: images maps name -> poly in ctx."""
        names = self.ctx.names()
        gens = self.ctx.gens()
        args = [images.get(nm, g) for nm, g in zip(names, gens)]
        return _Frac(self.ctx, self.num.compose(*args), self.den.compose(*args))

    def __mul__(self, o: "_Frac") -> "_Frac":
        if not isinstance(o, _Frac):
            return _Frac(self.ctx, self.num * o, self.den)
        return _Frac(self.ctx, self.num * o.num, self.den * o.den)

    def __add__(self, o: "_Frac") -> "_Frac":
        return _Frac(self.ctx, self.num * o.den + o.num * self.den, self.den * o.den)

    def __neg__(self):
        return _Frac(self.ctx, -self.num, self.den)

    def __sub__(self, o):
        return self + (-o)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_finite(self) -> bool:
        return not self.den.is_zero()

    def equals(self, o: "_Frac") -> bool:
        return (self.num * o.den - o.num * self.den).is_zero()


# ---------------------------------------------------------------------------
# algebra relations

RELATIONS = ("fqt", "tt-pole", "ts-zero", "ss-zero", "Sk-commut", "SigmaW-t", "Qt",
             "Slambda", "ResSlambda", "sigma-def", "Ss", "SS", "Ssigma")


def _basis_vectors(side: str, cutoff: int, w: Weight) -> list[FockVector]:
    from .fock import fock_basis
    return [FockVector(side, w, {key: ONE}) for lev in range(cutoff + 1) for key in fock_basis(lev)]


def _check_fqt() -> tuple[int, list]:
    # f_qt at t = -q, p = q/t = -1, against f; both as fractions in (v, z)
    ctx = flint.fmpq_mpoly_ctx.get(("v", "z"), "lex")
    v, z = ctx.gens()
    q = v * v
    t, p_inv = -q, ctx.constant(-1)
    # (z - 1/q)(z - t) / ((z - 1)(z - 1/p)), cleared by q
    lhs_n, lhs_d = (q * z - 1) * (z - t), q * (z - 1) * (z - p_inv)
    rhs_n, rhs_d = (z + q) * (q * z - 1), q * (z * z - 1)
    ok = (lhs_n * rhs_d - rhs_n * lhs_d).is_zero()
    return 1, [] if ok else ["f_{q,-q} != f"]


def _check_tt_pole(cutoff: int) -> tuple[int, list]:
    w = Weight.generic()
    bras, kets = _basis_vectors("bra", cutoff, w), _basis_vectors("ket", cutoff, w)
    ctx = _Frac.ctx_for(("x1", "x2"))
    ctx_s = _Frac.ctx_for(("y1",))
    c0 = C0
    fails, n = [], 0
    x1, x2 = ctx.gens()[2:]
    for b in bras:
        for k in kets:
            n += 1
            Jtt = _Frac.from_symrat(matrix_element(b, k, 2), ctx)
            res = (Jtt * (x1 + x2)).subs({"x1": -x2})
            Js = _Frac.from_symrat(matrix_element(b, k, 0, 1), ctx_s)
            y = ctx_s.gens()[2]
            diff = Js - Js.subs({"y1": -y})
            c0n, c0d = _ring_to_ctx(c0, ctx_s, 1)
            rhs = _Frac(ctx_s, diff.num * c0n * y, diff.den * c0d)
            # move the residue to the y1 context: x2 -> y1
            g = ctx_s.gens()
            res_s = _Frac(ctx_s, res.num.compose(g[0], g[1], g[2], g[2], ctx=ctx_s),
                          res.den.compose(g[0], g[1], g[2], g[2], ctx=ctx_s))
            # symmetric under exchange as rational functions
            swapped = _Frac.from_symrat(matrix_element(b, k, 2).swap(0, 1), ctx)
            if not (res_s.is_finite() and res_s.equals(rhs) and Jtt.equals(swapped)):
                fails.append((str(b), str(k)))
    return n, fails


def _zero_check(cutoff: int, n_t: int, n_s: int, points) -> tuple[int, list]:
    w = Weight.generic()
    bras, kets = _basis_vectors("bra", cutoff, w), _basis_vectors("ket", cutoff, w)
    vars = tuple(f"x{i + 1}" for i in range(n_t)) + tuple(f"y{j + 1}" for j in range(n_s))
    ctx = _Frac.ctx_for(vars)
    fails, n = [], 0
    for b in bras:
        for k in kets:
            J = _Frac.from_symrat(matrix_element(b, k, n_t, n_s), ctx)
            for name, img in points(ctx):
                n += 1
                Js = J.subs({name: img})
                if not (Js.is_finite() and Js.is_zero()):
                    fails.append((str(b), str(k), name, str(img)))
    return n, fails


def _ts_points(ctx):
    v, y = ctx.gens()[0], ctx.gens()[3]
    return [("x1", v * v * y)]


def _ts_points_neg(ctx):
    # x1 = -q^-1 y1 is y1 = -q x1
    v, x = ctx.gens()[0], ctx.gens()[2]
    return [("y1", -v * v * x)]


def _ss_points(ctx):
    v, y1, y2 = ctx.gens()[0], ctx.gens()[2], ctx.gens()[3]
    q = v * v
    return [("y1", q * y2), ("y1", -q * y2), ("y2", q * y1), ("y2", -q * y1)]


def _check_ts_zero(cutoff: int) -> tuple[int, list]:
    n1, f1 = _zero_check(cutoff, 1, 1, _ts_points)
    n2, f2 = _zero_check(cutoff, 1, 1, _ts_points_neg)
    return n1 + n2, f1 + f2


def _gamma(k: int, w: Weight) -> RingElem:
    """gamma_k(a) = 2 B_1 cos(pi a - pi r (k-1)/2) = B_1 (u v^(k-1) + u^-1 v^(1-k))."""
    u = w.u_eff()
    return B1 * (u * V ** (k - 1) + u.inverse() * V ** (1 - k))


def _check_sk_commut(cutoff: int) -> tuple[int, list]:
    w = Weight.generic()
    fails, n = [], 0
    rng = range(-2, 4)
    for v in _basis_vectors("ket", cutoff, w):
        for k in rng:
            Sv = apply_vertex_mode("S", k, v)
            for j in rng:
                n += 4
                tv = apply_t_mode(j, v)
                lhs = apply_vertex_mode("S", k, tv) - apply_t_mode(j, Sv)
                rhs = apply_vertex_mode("sigma", j + k, v) * _gamma(k, w)
                if lhs != rhs:
                    fails.append(("[S_k,t_j]", k, j, str(v)))
                ss = apply_vertex_mode("S", k, apply_vertex_mode("S", j, v))
                ss2 = apply_vertex_mode("S", j + 2, apply_vertex_mode("S", k - 2, v))
                if ss != -ss2:
                    fails.append(("S_k S_k'", k, j, str(v)))
                sc = apply_vertex_mode("S", k, apply_vertex_mode("s", j, v)) - apply_vertex_mode("s", j, Sv)
                if not sc.is_zero():
                    fails.append(("[S_k,s_j]", k, j, str(v)))
                sg = apply_vertex_mode("S", k, apply_vertex_mode("sigma", j, v))
                sg2 = apply_vertex_mode("sigma", j + 2, apply_vertex_mode("S", k - 2, v))
                if sg != sg2:
                    fails.append(("S_k sigma_j", k, j, str(v)))
    return n, fails


_SIGMAW_MODULES = ((1, 1), (2, 1), (2, 2), (3, 1), (1, 0), (0, 2))


def _check_sigmaw_t(cutoff: int) -> tuple[int, list]:
    from .coeffring import I
    from .screenings import build_op
    fails, n = [], 0
    for m, nn in _SIGMAW_MODULES:
        w = Weight.special(m, nn)
        sig, W = build_op("Sigma", m, nn), build_op("W", m, nn)
        sig2 = build_op("Sigma", m, nn - 2)
        pre = I ** nn * B1
        for v in _basis_vectors("ket", cutoff, w):
            sv, Wv = sig.apply(v), W.apply(v)
            for j in range(-1, cutoff + 2):
                n += 2
                tv = apply_t_mode(j, v)
                sig_v = apply_vertex_mode("sigma", j + m - nn + 1, v)
                lhs = sig.apply(tv) - apply_t_mode(j, sv)
                rhs = sig_v * (pre * (1 + (-1) ** (nn % 2)))
                if lhs != rhs:
                    fails.append(("Sigma", m, nn, j, str(v)))
                lhs = W.apply(tv) - apply_t_mode(j, Wv)
                rhs = sig2.apply(sig_v) * (pre * (1 - (-1) ** (nn % 2)))
                if lhs != rhs:
                    fails.append(("W", m, nn, j, str(v)))
    return n, fails


def _check_qt(cutoff: int) -> tuple[int, list]:
    from .screenings import _commutator_Qt, build_op
    fails, n = [], 0
    for m, nn, s in ((1, 1, 1), (2, 2, 2), (2, 0, 2), (3, 1, 1), (3, 3, 1), (1, -1, 1)):
        n += 1
        if not _commutator_Qt(build_op("Q", m, nn, s), Weight.special(m, nn), cutoff):
            fails.append((m, nn, s))
    return n, fails


# contraction series of two vertices: <V1(z') V2(z)> = exp sum_k c_k (z/z')^k


def _contraction_log(s1: VertexSpec, s2: VertexSpec, M: int) -> list[RingElem]:
    out = [ZERO]
    for k in range(1, M + 1):
        c = ZERO
        for nu in (-1, 1):
            c = c + s1.c(nu, k) * s2.c(-nu, -k) * k * A(nu, k)
        out.append(c)
    return out


def _exp_series(log: list[RingElem], M: int) -> list[RingElem]:
    e = [ONE]
    for n in range(1, M + 1):
        acc = ZERO
        for k in range(1, n + 1):
            acc = acc + log[k] * e[n - k] * k
        e.append(acc / n)
    return e


def _rational_series(num: list[RingElem], den: list[RingElem], M: int) -> list[RingElem]:
    """Taylor coefficients of num(w)/den(w) with den(0) != 0."""
    out = []
    inv0 = den[0].inverse()
    for n in range(M + 1):
        acc = num[n] if n < len(num) else ZERO
        for k in range(1, min(n, len(den) - 1) + 1):
            acc = acc - den[k] * out[n - k]
        out.append(acc * inv0)
    return out


def _series_eq(s1: VertexSpec, s2: VertexSpec, num, den, M: int) -> bool:
    return _exp_series(_contraction_log(s1, s2, M), M) == _rational_series(num, den, M)


def _check_products(rel: str, M: int) -> tuple[int, list]:
    S, sig, s = SPECS["S"], SPECS["sigma"], SPECS["s"]
    lm, lp = SPECS["lambda-"], SPECS["lambda+"]
    q = V * V
    checks = []
    if rel == "Slambda":
        for lam, e in ((lm, -1), (lp, 1)):
            # S(z') lambda(z): (1 + v^e w)/(1 - v^-e w); reversed, in w' = z'/z:
            # -q^-e (v^e + w')/(w' - v^-e)
            checks.append((S, lam, [ONE, V ** e], [ONE, -(V ** -e)]))
            checks.append((lam, S, [-(q ** -e) * V ** e, -(q ** -e)], [-(V ** -e), ONE]))
    elif rel == "SS":
        checks.append((S, S, [ONE, ZERO, -ONE], [ONE]))
        # -(z/z')^2 S(z) S(z'): reversed contraction is again 1 - w'^2
        checks.append((S, S, [ONE, ZERO, -ONE], [ONE]))
    elif rel == "Ssigma":
        checks.append((S, sig, [ONE, V + V ** -1, ONE], [ONE]))
        checks.append((sig, S, [ONE, V + V ** -1, ONE], [ONE]))
    elif rel == "Ss":
        checks.append((S, s, [ONE], [ONE]))
        checks.append((s, S, [ONE], [ONE]))
    fails = [(a.name, b.name) for a, b, nm, dn in checks if not _series_eq(a, b, nm, dn, M)]
    return len(checks), fails


def _check_sigma_def(M: int) -> tuple[int, list]:
    """sigma = :S(q^{-+1/2} z) lambda_+-(z): coefficientwise, and the residue scalar B_1."""
    S, sig = SPECS["S"], SPECS["sigma"]
    fails, n = [], 0
    for lam, e in ((SPECS["lambda-"], -1), (SPECS["lambda+"], 1)):
        # S(q^{-e/2} z): coefficient of d z^-k scales by v^{e k}
        for k in [k for k in range(-M, M + 1) if k]:
            for nu in (-1, 1):
                n += 1
                if S.c(nu, k) * V ** (e * k) + lam.c(nu, k) != sig.c(nu, k):
                    fails.append((lam.name, nu, k))
        # residue of (z + v^e x)/(z - v^-e x) at z = v^-e x is (v^-e + v^e) x = B_1 x
        n += 1
        if V ** -e + V ** e != B1:
            fails.append((lam.name, "B1"))
    return n, fails


def verify_relation(rel: str, cutoff: int = 2) -> dict:
    """Check one algebra relation on all basis states of level <= cutoff (failures reported)."""
    if rel == "all":
        return {r: verify_relation(r, cutoff) for r in RELATIONS}
    if rel not in RELATIONS:
        raise ValueError(f"unknown relation {rel!r}; choose from {', '.join(RELATIONS)}")
    if cutoff < 0 or cutoff > 4:
        raise ValueError("cutoff must be between 0 and 4")
    M = 4 * max(cutoff, 2)
    if rel == "fqt":
        n, fails = _check_fqt()
    elif rel == "tt-pole":
        n, fails = _check_tt_pole(cutoff)
    elif rel == "ts-zero":
        n, fails = _check_ts_zero(cutoff)
    elif rel == "ss-zero":
        n, fails = _zero_check(cutoff, 0, 2, _ss_points)
    elif rel == "Sk-commut":
        n, fails = _check_sk_commut(cutoff)
    elif rel == "SigmaW-t":
        n, fails = _check_sigmaw_t(cutoff)
    elif rel == "Qt":
        n, fails = _check_qt(cutoff)
    elif rel == "sigma-def" or rel == "ResSlambda":
        n, fails = _check_sigma_def(M)
    else:
        n, fails = _check_products(rel, M)
    return {"relation": rel, "cutoff": cutoff, "checked": n, "ok": not fails,
            "failures": [list(map(str, f)) for f in fails[:10]]}
