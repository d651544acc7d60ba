"""Screening modes S_k and the composite operators Sigma, W, Q^(s).

Conventions (kets, barred modules):
    Sigma on (m, n)  = S_{d+1},                     d = m - n
    W on (m, n)      = sum_{k>=1} F^n_k S_{d+3-k} S_{d+1+k}
    Q^(s)            = W^{s/2} or Sigma W^{(s-1)/2}; each factor acts on the module
                       reached so far, so d grows by 4 per W.

Three evaluation routes are available:
    * Fock modes  (apply):   currents.apply_vertex_mode on FockVectors;
    * A-engine    (apply_A): S(z) h = E(z) h(c_k + kappa_k z^-k) on A = Q(v)[c_1, c_2, ...];
    * vacuum DP   (vacuum_image): the vacuum product of screening currents is
      prod_{i<j} (1 - z_j^2/z_i^2) prod_i E(z_i), expanded as a signed permutation
      sum and summed with a bitmask DP over the used columns.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Sequence

import flint

from .coeffring import ONE, ZERO, RingElem, B, F, kappa
from .currents import apply_vertex_mode, apply_t_mode
from .fock import (AElement, FockError, FockVector, Weight, a_rep_apply, fock_basis,
                   solve_A_representation, vacuum, _add_into, _insert)
from .symalg import Partition, partitions

__all__ = [
    "ScreeningError", "ScreeningOp", "build_op", "t_element", "apply_S_A",
    "SingularVectorResult", "singular_vector", "cosingular_representative",
    "resonance_scalar", "kappa_sm", "kappa_closed", "c_coeff", "c_coeff_direct",
    "structure_probe", "s_mn_formula",
]


class ScreeningError(ValueError):
    """Parameter-range or parity violation for screening constructions."""


# ---------------------------------------------------------------------------
# the A-engine


@lru_cache(maxsize=None)
def t_element(n: int) -> AElement:
    """t_{-n} = [z^n] exp(sum_{k>=1} B_k c_{-k} z^k); t_0 = 1, zero for n < 0."""
    if n < 0:
        return AElement()
    if n == 0:
        return AElement.one()
    # n t_n = sum_k k B_k c_k t_{n-k}
    acc = AElement()
    for k in range(1, n + 1):
        acc = acc + AElement.c(k) * t_element(n - k) * (B(k) * k)
    return acc * RingElem(Fraction(1, n))


def apply_S_A(j: int, h: AElement) -> AElement:
    """S_j on barpi(h)|1>, in A-coordinates: [z^-j] E(z) h(c_k + kappa_k z^-k)."""
    out = AElement()
    for lam, c in h.terms.items():
        # even parts may be swallowed by the shift; odd kappa vanish
        choices = [[(k, r, comb(e, r) * kappa(k) ** r) for r in range(e + 1)]
                   for k, e in lam.multiplicities().items() if k % 2 == 0]
        partial = {(0, ()): c}
        for opts in choices:
            nxt: dict = {}
            for (p, rem), cc in partial.items():
                for k, r, w in opts:
                    key = (p + k * r, rem + ((k, r),) if r else rem)
                    _add_into(nxt, key, cc * w)
            partial = nxt
        for (p, rem), cc in partial.items():
            q = p - j
            if q < 0:
                continue
            rest = list(lam)
            for k, r in rem:
                for _ in range(r):
                    rest.remove(k)
            out = out + t_element(q) * AElement({Partition.sorted(rest): cc})
    return out


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class _Stage:
    kind: str   # "S" or "W"
    d: int      # m - n of the module the stage acts on
    n: int      # n of that module (parity selects F^n)

    @property
    def lowering(self) -> int:
        return self.d + 1 if self.kind == "S" else 2 * self.d + 4


@dataclass(frozen=True)
class ScreeningOp:
    """Sigma, W, Q^(s) or the parity-unchecked Qbar^(s) with source module (m, n)."""

    kind: str
    m: int
    n: int
    s: int
    stages: tuple[_Stage, ...] = field(repr=False)

    @property
    def target(self) -> tuple[int, int]:
        return (self.m, self.n - 2 * self.s)

    @property
    def level_shift(self) -> int:
        """Amount by which the ket level is lowered."""
        return sum(st.lowering for st in self.stages)

    def __str__(self):
        name = self.kind if self.kind in ("Sigma", "W") else f"{self.kind}^({self.s})"
        return f"{name} on ({self.m},{self.n})"

    # -- Fock modes --------------------------------------------------------
    def apply(self, v: FockVector, check_module: bool = True) -> FockVector:
        if v.side != "ket":
            raise FockError("screening operators act on kets; transpose bras first")
        w = v.weight
        if check_module and w.is_special and (w.m, w.n) != (self.m, self.n):
            raise ScreeningError(f"{self} applied to a vector in module {w}")
        for st in self.stages:
            v = _apply_stage(st, v)
        return v

    # -- A-engine ----------------------------------------------------------
    def apply_A(self, h: AElement) -> AElement:
        for st in self.stages:
            h = _apply_stage_A(st, h)
        return h

    # -- vacuum DP ---------------------------------------------------------
    def vacuum_image(self) -> AElement:
        """h with (this operator)|1>_{mn} = barpi(h)|1>_{target}."""
        return _word_vacuum_image(_word(self.stages))


def _apply_stage(st: _Stage, v: FockVector) -> FockVector:
    if v.is_zero():
        return v.with_weight(v.weight.shift(2 if st.kind == "W" else 1))
    d = st.d
    if st.kind == "S":
        return apply_vertex_mode("S", d + 1, v)
    top = max(v.levels())
    total = FockVector._raw("ket", v.weight.shift(2), {})
    for k in range(1, top - d):
        inner = apply_vertex_mode("S", d + 1 + k, v)
        if inner.is_zero():
            continue
        total = total + apply_vertex_mode("S", d + 3 - k, inner) * F(st.n, k)
    return total


def _apply_stage_A(st: _Stage, h: AElement) -> AElement:
    d = st.d
    if st.kind == "S":
        return apply_S_A(d + 1, h)
    if h.is_zero():
        return h
    top = max(h.levels())
    total = AElement()
    for k in range(1, top - d):
        inner = apply_S_A(d + 1 + k, h)
        if inner.is_zero():
            continue
        total = total + apply_S_A(d + 3 - k, inner) * F(st.n, k)
    return total


def build_op(kind: str, m: int, n: int, s: int | None = None) -> ScreeningOp:
    """Sigma, W, Q (needs s = n mod 2) or Qbar (no parity check) on the ket module (m, n)."""
    d = m - n
    if kind == "Sigma":
        return ScreeningOp("Sigma", m, n, 1, (_Stage("S", d, n),))
    if kind == "W":
        return ScreeningOp("W", m, n, 2, (_Stage("W", d, n),))
    if kind not in ("Q", "Qbar"):
        raise ScreeningError(f"unknown operator kind {kind!r}")
    if s is None or s < 1:
        raise ScreeningError(f"{kind} needs s >= 1")
    if kind == "Q" and (s - n) % 2:
        raise ScreeningError(f"Q^({s}) on ({m},{n}) needs s = n mod 2; use Qbar to bypass")
    p = s // 2
    stages = [_Stage("W", d + 4 * i, n - 4 * i) for i in range(p)]
    if s % 2:
        stages.append(_Stage("S", d + 4 * p, n - 4 * p))
    return ScreeningOp(kind, m, n, s, tuple(stages))


# ---------------------------------------------------------------------------
# vacuum DP


def _word(stages: Sequence[_Stage]) -> list[tuple]:
    """Groups from left to right: ('S', mu) or ('W', mu_a, mu_b, n)."""
    out = []
    for st in reversed(stages):
        if st.kind == "S":
            out.append(("S", st.d + 1))
        else:
            out.append(("W", st.d + 3, st.d + 1, st.n))
    return out


class _PolyDP:
    """Exact DP arithmetic in Q[v, c_1..c_L]. t_{-j} is stored as v^j t_{-j}; a value
    is (numerator, Counter of denominator factors (k, par) = v^2k + (-1)^par)."""

    def __init__(self, level: int):
        self.L = max(level, 1)
        names = ["v"] + [f"c{k}" for k in range(1, self.L + 1)]
        self.ctx = flint.fmpq_mpoly_ctx.get(names, "lex")
        self.gens = self.ctx.gens()
        self.one = self.ctx.from_dict({tuple([0] * (self.L + 1)): 1})
        self._t: dict[int, object] = {}
        self._pair: dict[tuple, tuple] = {}

    def vpoly(self, x: RingElem, shift: int):
        """v^shift * x for a real element of Q[v, v^-1]."""
        out = self.ctx.from_dict({})
        for (a, b), c in x.numerator_terms().items():
            exps = [a + shift] + [0] * self.L
            out += self.ctx.from_dict({tuple(exps): flint.fmpq(c.re.numerator, c.re.denominator)})
        return out

    def t(self, j: int):
        if j not in self._t:
            acc = self.ctx.from_dict({})
            for lam, c in t_element(j).terms.items():
                mono = self.one
                for k in lam:
                    mono = mono * self.gens[k]
                acc += self.vpoly(c, j) * mono
            self._t[j] = acc
        return self._t[j]

    def factor(self, k: int, par: int):
        return self.gens[0] ** (2 * k) + (-1) ** (par % 2)

    def pair(self, ja: int, jb: int, par: int) -> tuple:
        key = (ja, jb, par)
        if key not in self._pair:
            ks = range(max(1, -ja), jb + 1)
            den = Counter({(k, par): 1 for k in ks})
            acc = self.ctx.from_dict({})
            v = self.gens[0]
            for k in ks:
                num = (-1) ** ((k - 1) % 2) * (v ** (2 * k) - (-1) ** (par % 2))
                rest = self.one
                for k2 in ks:
                    if k2 != k:
                        rest = rest * self.factor(k2, par)
                acc += self.t(ja + k) * self.t(jb - k) * num * rest
            self._pair[key] = (acc, den)
        return self._pair[key]

    def add(self, x: tuple, y: tuple) -> tuple:
        (a, da), (b, db) = x, y
        if da == db:
            return (a + b, da)
        lcm = da | db
        for key, e in (lcm - da).items():
            a = a * self.factor(*key) ** e
        for key, e in (lcm - db).items():
            b = b * self.factor(*key) ** e
        return (a + b, lcm)

    def to_aelement(self, x: tuple, vshift: int) -> AElement:
        """numerator / (v^vshift * denominator) read back as an A-element."""
        poly, dc = x
        den = self.one
        for key, e in dc.items():
            den = den * self.factor(*key) ** e
        den_r = _to_ring(den, vshift)
        terms: dict[Partition, dict] = {}
        for exps, c in poly.to_dict().items():
            lam = Partition.sorted(k for k in range(1, self.L + 1) for _ in range(exps[k]))
            terms.setdefault(lam, {})[(exps[0], 0)] = Fraction(int(c.p), int(c.q))
        return AElement({lam: RingElem.from_laurent(vt) / den_r for lam, vt in terms.items()})


def _to_ring(poly, vshift: int) -> RingElem:
    """poly(v) * v^vshift as a RingElem."""
    return RingElem.from_laurent({(exps[0] + vshift, 0): Fraction(int(c.p), int(c.q))
                                  for exps, c in poly.to_dict().items()})


def _word_vacuum_image(groups: list[tuple]) -> AElement:
    npos = sum(1 if g[0] == "S" else 2 for g in groups)
    # total level: sum of -mu over the base modes
    level = -sum(g[1] if g[0] == "S" else g[1] + g[2] for g in groups)
    if level < 0:
        return AElement()
    dp = _PolyDP(level)
    states: dict[int, tuple] = {0: (dp.one, Counter())}
    pos = 0

    def sign_after(mask: int, c: int) -> int:
        # inversions with the columns already used to the left of this position
        return -1 if bin(mask >> c).count("1") % 2 else 1

    for g in groups:
        nxt: dict[int, object] = {}
        if g[0] == "S":
            i = pos + 1
            for mask, val in states.items():
                for c in range(1, npos + 1):
                    bit = 1 << (c - 1)
                    if mask & bit:
                        continue
                    j = -g[1] - 2 * (i - c)
                    if j < 0 or j > level:
                        continue
                    term = (val[0] * dp.t(j) * sign_after(mask, c), val[1])
                    key = mask | bit
                    nxt[key] = dp.add(nxt[key], term) if key in nxt else term
            pos += 1
        else:
            _, mua, mub, n_st = g
            ia, ib = pos + 1, pos + 2
            for mask, val in states.items():
                for ca in range(1, npos + 1):
                    ba = 1 << (ca - 1)
                    if mask & ba:
                        continue
                    ja = -mua - 2 * (ia - ca)
                    m1 = mask | ba
                    for cb in range(1, npos + 1):
                        bb = 1 << (cb - 1)
                        if m1 & bb:
                            continue
                        jb = -mub - 2 * (ib - cb)
                        if jb < 1 or ja + jb < 0 or ja + jb > level:
                            continue
                        ps, pden = dp.pair(ja, jb, n_st % 2)
                        if ps == 0:
                            continue
                        term = (val[0] * ps * (sign_after(mask, ca) * sign_after(m1, cb)), val[1] + pden)
                        key = m1 | bb
                        nxt[key] = dp.add(nxt[key], term) if key in nxt else term
            pos += 2
        states = {k: x for k, x in nxt.items() if x[0] != 0}
    final = states.get((1 << npos) - 1)
    if final is None:
        return AElement()
    return dp.to_aelement(final, level)


# ---------------------------------------------------------------------------
# singular and cosingular vectors


@dataclass(frozen=True)
class SingularVectorResult:
    vector: FockVector
    a_element: AElement
    level: int


def _check_singular_range(m: int, n: int, s: int) -> None:
    if s < 1:
        raise ScreeningError("s must be >= 1")
    if (s - n) % 2:
        raise ScreeningError(f"s = {s} and n = {n} must have the same parity")
    if n > m + s:
        raise ScreeningError(f"Q^({s})|1> vanishes for n > m + s ({n} > {m + s})")
    if n == m + s:
        raise ScreeningError("n = m + s gives a level-0 vector, not a singular vector")


def singular_vector(m: int, n: int, s: int, route: str = "dp") -> SingularVectorResult:
    """|N^(s)>_{-m,-n} = Q^(s)|1>_{-m,-n+2s}; its A-element is N^(s)_{mn}.

    route='dp' uses the vacuum DP (any level); route='fock' applies Fock modes."""
    _check_singular_range(m, n, s)
    op = build_op("Q", -m, -n + 2 * s, s)
    level = s * (m - n + s)
    target = Weight.special(-m, -n)
    if route == "fock":
        vec = op.apply(vacuum("ket", Weight.special(-m, -n + 2 * s)))
    elif route == "dp":
        vec = a_rep_apply("barpi", op.vacuum_image(), vacuum("ket", target))
    else:
        raise ScreeningError(f"unknown route {route!r}")
    if vec.is_zero():
        raise ScreeningError(f"singular vector ({m},{n},{s}) vanished")
    h = solve_A_representation(vec)
    return SingularVectorResult(vec, h, level)


def _cosingular_element(m: int, n: int, s: int, t: int, kvec: Sequence[int]) -> AElement:
    nu2 = m - n + s - t
    if nu2 < 0 or nu2 % 2:
        raise ScreeningError(f"(m - n + s - t)/2 = {nu2}/2 must be a nonnegative integer")
    nu = nu2 // 2
    if len(kvec) != nu:
        raise ScreeningError(f"kvec must have length nu = {nu}")
    if sum(kvec) != s * nu2:
        raise ScreeningError(f"kvec must sum to s(m-n+s-t) = {s * nu2}")
    if t < 0:
        raise ScreeningError("t must be >= 0")
    h = build_op("Qbar", m, m + s + t, t).vacuum_image() if t else AElement.one()
    for k in reversed(kvec):
        h = apply_S_A(-k, h)
    return h


def cosingular_representative(m: int, n: int, s: int, t: int, kvec: Sequence[int]) -> FockVector:
    """S_{-kvec} Qbar^(t)|1>_{m,m+s+t}, a ket in the module (m, n)."""
    h = _cosingular_element(m, n, s, t, kvec)
    return a_rep_apply("barpi", h, vacuum("ket", Weight.special(m, n)))


def resonance_scalar(m: int, n: int, s: int, t: int, kvec: Sequence[int]) -> RingElem:
    """Predicted value of Q^(s) S_{-kvec} Qbar^(t)|1>: (-)^{nu s} kappa^(s+t)_m C_{kvec - 2s}."""
    nu = (m - n + s - t) // 2
    c = c_coeff(nu, [k - 2 * s for k in kvec])
    sign = -1 if (nu * s) % 2 else 1
    return kappa_sm(s + t, m) * (sign * c)


# ---------------------------------------------------------------------------
# constant terms


def _ct_vandermonde(npos: int, targets: Sequence[int], series: dict[int, Callable]) -> RingElem:
    """CT of prod_t w_t^-targets[t] * prod_{1<=i<=j<npos} (1 - prod_{t=i}^j w_t^2) * prod series[t](w_t).

    With w_t = Z_{t+1}/Z_t the product is the Vandermonde ratio
    prod_{p<q} (1 - Z_q^2/Z_p^2) = sum_sigma sgn(sigma) prod_p Z_p^{2(p - sigma(p))};
    the w_t exponent of a term is the suffix sum over p > t. A bitmask DP runs from
    the right, so each suffix sum is fixed by the set of used columns."""
    states: dict[int, RingElem] = {0: ONE}
    for p in range(npos, 0, -1):
        nxt: dict[int, RingElem] = {}
        for mask, val in states.items():
            for c in range(1, npos + 1):
                bit = 1 << (c - 1)
                if mask & bit:
                    continue
                inv = bin(mask & (bit - 1)).count("1")
                nm = mask | bit
                x = -val if inv % 2 else val
                t = p - 1
                if t >= 1:
                    used = [q for q in range(1, npos + 1) if nm >> (q - 1) & 1]
                    a = 2 * (sum(range(p, npos + 1)) - sum(used))
                    e = targets[t - 1]
                    if t in series:
                        if e - a < 1:
                            continue
                        x = x * series[t](e - a)
                    elif a != e:
                        continue
                _add_into(nxt, nm, x)
        states = nxt
    return states.get((1 << npos) - 1, ZERO)


@lru_cache(maxsize=None)
def kappa_sm(s: int, m: int) -> RingElem:
    """kappa^(s)_m from its (s-1)-fold constant-term formula."""
    if s < 1:
        raise ScreeningError("kappa^(s)_m needs s >= 1")
    n_par = (m + s) % 2
    series = {2 * i - 1: (lambda k, n_par=n_par: F(n_par, k)) for i in range(1, s // 2 + 1)}
    targets = [t * (s - t) for t in range(1, s)]
    return _ct_vandermonde(s, targets, series)


def kappa_closed(s: int, m: int) -> RingElem:
    """k! prod F^m_{2i-1} (s = 2k) or (-)^k k! prod F^{m+1}_{2i} (s = 2k+1)."""
    k = s // 2
    r = RingElem(factorial(k))
    if s % 2 == 0:
        for i in range(1, k + 1):
            r = r * F(m, 2 * i - 1)
        return r
    for i in range(1, k + 1):
        r = r * F(m + 1, 2 * i)
    return -r if k % 2 else r


def c_coeff(nu: int, kvec: Sequence[int]) -> int:
    """C^(nu)_kvec: the level-0 coefficient of S_{-k_1}...S_{-k_nu}|1>, by constant terms.

    Uses the pair product over 1 <= i <= j < nu and the w-exponents
    sum_{t>i} k_t; vanishes unless sum(kvec) = 0."""
    if nu < 0 or len(kvec) != nu:
        raise ScreeningError("kvec must have length nu")
    if nu == 0:
        return 1
    if sum(kvec) != 0:
        return 0
    targets = [sum(kvec[t:]) for t in range(1, nu)]
    val = _ct_vandermonde(nu, targets, {})
    return int(val.constant_value().re)


def c_coeff_direct(kvec: Sequence[int]) -> int:
    """Independent evaluation: k_p = 2(p - sigma(p)) must define a permutation; value sgn(sigma)."""
    nu = len(kvec)
    sigma = []
    for p, k in enumerate(kvec, start=1):
        if k % 2:
            return 0
        sigma.append(p - k // 2)
    if sorted(sigma) != list(range(1, nu + 1)):
        return 0
    inv = sum(1 for i in range(nu) for j in range(i + 1, nu) if sigma[i] > sigma[j])
    return -1 if inv % 2 else 1


# ---------------------------------------------------------------------------
# structure probes at rational v


class _NumEngine:
    """S-mode and Sigma/W matrices with v replaced by a rational number."""

    def __init__(self, v0: Fraction):
        self.v0 = flint.fmpq(v0.numerator, v0.denominator)
        self._gcache: dict[int, dict] = {}

    def vp(self, k: int):
        return self.v0 ** k

    def alpha(self, k: int):
        # coefficient of d^-_k in S; d^+_k carries -alpha
        return 1 / (k * (self.vp(k) - self.vp(-k)))

    def A(self, sign: int, k: int):
        s = (-1) ** (k % 2)
        base = (self.vp(k) - self.vp(-k)) * (self.vp(k) - s * self.vp(-k))
        return base if sign > 0 else s * base

    def F(self, n: int, k: int):
        s = (-1) ** (n % 2)
        return (-1) ** ((k - 1) % 2) * (self.vp(k) - s * self.vp(-k)) / (self.vp(k) + s * self.vp(-k))

    def kappa(self, k: int):
        return flint.fmpq(0) if k % 2 else -2 / (self.vp(k) - self.vp(-k))

    def B(self, k: int):
        return (self.vp(k) - (-1) ** (k % 2) * self.vp(-k)) / k

    # creation half on kets: G_p with c_k = alpha_{-k} x^-_k - alpha_{-k} x^+_k
    def G(self, p: int) -> dict:
        if p in self._gcache:
            return self._gcache[p]
        if p == 0:
            out = {(Partition(), Partition()): flint.fmpq(1)}
        else:
            out: dict = {}
            for k in range(1, p + 1):
                a = self.alpha(-k)
                for (mm, mp), c in self.G(p - k).items():
                    for key, w in (((_insert(mm, k), mp), a * k), ((mm, _insert(mp, k)), -a * k)):
                        out[key] = out.get(key, 0) + c * w
            out = {key: c / p for key, c in out.items() if c != 0}
        self._gcache[p] = out
        return out

    def S(self, j: int, vec: dict) -> dict:
        out: dict = {}
        for (mm, mp), c in vec.items():
            opts_all = []
            for part, nu in ((mm, -1), (mp, 1)):
                for k, e in part.multiplicities().items():
                    # x^- shifted by beta_k k A^+_k, x^+ by alpha_k k A^-_k; beta = -alpha
                    shift = (-self.alpha(k) * k * self.A(1, k)) if nu < 0 else (self.alpha(k) * k * self.A(-1, k))
                    opts_all.append([(nu, k, r, comb(e, r) * shift ** r) for r in range(e + 1)])
            combos = [(0, list(mm), list(mp), flint.fmpq(1))]
            for opts in opts_all:
                nxt = []
                for p, rm, rp, cc in combos:
                    for nu, k, r, w in opts:
                        rm2, rp2 = list(rm), list(rp)
                        lst = rm2 if nu < 0 else rp2
                        for _ in range(r):
                            lst.remove(k)
                        nxt.append((p + k * r, rm2, rp2, cc * w))
                combos = nxt
            for p, rm, rp, cc in combos:
                q = p - j
                if q < 0:
                    continue
                for (gm, gp), gc in self.G(q).items():
                    key = (Partition.sorted(rm + list(gm)), Partition.sorted(rp + list(gp)))
                    out[key] = out.get(key, 0) + c * cc * gc
        return {k: x for k, x in out.items() if x != 0}

    # A-engine
    def t_el(self, n: int) -> dict:
        key = ("t", n)
        if key in self._gcache:
            return self._gcache[key]
        if n < 0:
            out = {}
        elif n == 0:
            out = {Partition(): flint.fmpq(1)}
        else:
            out: dict = {}
            for k in range(1, n + 1):
                w = self.B(k) * k
                for lam, c in self.t_el(n - k).items():
                    nk = _insert(lam, k)
                    out[nk] = out.get(nk, 0) + c * w
            out = {k: c / n for k, c in out.items() if c != 0}
        self._gcache[key] = out
        return out

    def S_A(self, j: int, h: dict) -> dict:
        out: dict = {}
        for lam, c in h.items():
            combos = [(0, list(lam), c)]
            for k, e in lam.multiplicities().items():
                if k % 2:
                    continue
                nxt = []
                for p, rest, cc in combos:
                    for r in range(e + 1):
                        rest2 = list(rest)
                        for _ in range(r):
                            rest2.remove(k)
                        nxt.append((p + k * r, rest2, cc * comb(e, r) * self.kappa(k) ** r))
                combos = nxt
            for p, rest, cc in combos:
                for tl, tc in self.t_el(p - j).items():
                    key = Partition.sorted(rest + list(tl))
                    out[key] = out.get(key, 0) + cc * tc
        return {k: x for k, x in out.items() if x != 0}

    def stage(self, st: _Stage, vec: dict, level: int, on_A: bool) -> dict:
        S = self.S_A if on_A else self.S
        if st.kind == "S":
            return S(st.d + 1, vec)
        out: dict = {}
        for k in range(1, level - st.d):
            inner = S(st.d + 1 + k, vec)
            if not inner:
                continue
            f = self.F(st.n, k)
            for key, c in S(st.d + 3 - k, inner).items():
                out[key] = out.get(key, 0) + c * f
        return {k: x for k, x in out.items() if x != 0}

    def rank(self, op: ScreeningOp, level: int, on_A: bool) -> tuple[int, int, int]:
        """(rank, dim source, dim target) of op between level subspaces."""
        tgt = level - op.level_shift
        src_basis = list(partitions(level)) if on_A else list(fock_basis(level))
        if tgt < 0 or level < 0:
            return 0, max(len(src_basis), 0) if level >= 0 else 0, 0
        tgt_basis = list(partitions(tgt)) if on_A else list(fock_basis(tgt))
        index = {b: i for i, b in enumerate(tgt_basis)}
        rows = []
        for b in src_basis:
            vec = {b: flint.fmpq(1)}
            lev = level
            for st in op.stages:
                vec = self.stage(st, vec, lev, on_A)
                lev -= st.lowering
            row = [flint.fmpq(0)] * len(tgt_basis)
            for key, c in vec.items():
                row[index[key]] = c
            rows.append(row)
        if not rows or not tgt_basis:
            return 0, len(src_basis), len(tgt_basis)
        return flint.fmpq_mat(rows).rank(), len(src_basis), len(tgt_basis)


def s_mn_formula(m: int, n: int) -> int:
    """Least s with a proper N^(s)_{mn} (right-action labels)."""
    if n <= m:
        return 2 if n % 2 == 0 else 1
    return n - m + 2 if m % 2 == 0 else n - m + 1


def _sample_points(k: int, seed: int) -> list[Fraction]:
    rng = random.Random(seed)
    out: list[Fraction] = []
    while len(out) < k:
        x = Fraction(rng.randint(2, 97), rng.randint(101, 199))
        if x not in out:
            out.append(x)
    return out


def _commutator_Qt(op: ScreeningOp, weight: Weight, max_level: int) -> bool:
    """True iff Q t_j - t_j Q vanishes on every basis ket of level <= max_level."""
    for level in range(max_level + 1):
        for key in fock_basis(level):
            v = FockVector("ket", weight, {key: ONE})
            qv = op.apply(v, check_module=False)
            for j in range(-1, level + 1):
                lhs = op.apply(apply_t_mode(j, v), check_module=False)
                rhs = apply_t_mode(j, qv)
                if not (lhs - rhs).is_zero():
                    return False
    return True


def structure_probe(m: int, n: int, max_level: int = 6, samples: int = 3, seed: int = 2024,
                    commutator_level: int = 2) -> dict:
    """Ranks of W, Sigma-cohomology and s_mn on the ket module (m, n) at random rational v.

    Left action on the barred module (m, n) is the transpose of right action on
    the module (-m, -n); conjecture expectations are quoted in those labels."""
    pts = _sample_points(samples, seed)
    engines = [_NumEngine(p) for p in pts]
    W_op = build_op("W", m, n)
    sig_out = build_op("Sigma", m, n)
    sig_in = build_op("Sigma", m, n + 2)
    rows = []
    agree = True
    for level in range(max_level + 1):
        row: dict = {"level": level}
        for space, on_A in (("full", False), ("A", True)):
            res = []
            for eng in engines:
                rw, ds, dt = eng.rank(W_op, level, on_A)
                ro, _, _ = eng.rank(sig_out, level, on_A)
                ri, _, _ = eng.rank(sig_in, level + sig_in.level_shift, on_A)
                res.append((rw, ds, dt, ro, ri))
            if len(set(res)) != 1:
                agree = False
            rw, ds, dt, ro, ri = res[0]
            row[space] = {
                "dim": ds, "dim_W_target": dt, "rank_W": rw, "W_maximal": rw == min(ds, dt),
                "ker_Sigma": ds - ro, "im_Sigma": ri, "cohomology": ds - ro - ri,
            }
        rows.append(row)
    # realized s_mn on the module (m, n) itself: N^(s) = Q^(s) (module (m, n+2s))
    realized = None
    for s in range(1, abs(m - n) + 4):
        if (s - n) % 2:
            continue
        op = build_op("Q", m, n + 2 * s, s)
        proper = False
        for level in range(max_level + 1):
            src = level + op.level_shift
            dim = len(fock_basis(level))
            rk = engines[0].rank(op, src, False)[0] if src >= 0 else 0
            if rk < dim:
                proper = True
                break
        if proper:
            realized = s
            break
    report = {
        "module": [m, n],
        "samples": [str(p) for p in pts],
        "samples_agree": agree,
        "levels": rows,
        "s_mn_realized": realized,
        "s_mn_expected": s_mn_formula(-m, -n),
    }
    if commutator_level >= 0:
        s_q = 1 if n % 2 else 2
        q = build_op("Q", m, n, s_q)
        report["Qt_commutator"] = {
            "s": s_q,
            "vanishes_at_point": _commutator_Qt(q, Weight.special(m, n), commutator_level),
            "vanishes_off_point": _commutator_Qt(q, Weight.generic(), min(commutator_level, 1)),
        }
    return report
