"""Macdonald polynomials at t = -q, the bracket map into A and the rectangular singular vectors.

The difference operator acts on symmetric polynomials in N variables,

    H P = sum_i prod_{j != i} (t x_i - x_j)/(x_i - x_j) P(.., q x_i, ..),   t = -q = -v^2.

macdonald_apply clears the Vandermonde and divides exactly. The eigen-solver
uses the equivalent power-sum form obtained by summing residues,

    (t - 1) H f = t^N CT_z[exp(sum (1 - t^-k) p_k z^-k / k) f(p_k + (q^k - 1) z^k)] - f,

which needs no expansion in the x variables and is cross-checked against the direct
operator in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import flint

from .coeffring import ONE, ZERO, RingElem, F, V
from .fock import AElement, FockVector, Weight, a_rep_apply, vacuum
from .symalg import (Partition, SymAlgError, SymPoly, basis_convert, dominates, m_to_p_matrix,
                     p_to_m_matrix, partitions, _distinct_perms)

__all__ = [
    "MacdonaldError", "MacdonaldParams", "macdonald_apply", "macdonald_poly", "eigenvalue",
    "rect_eigenvalue", "bracket_map", "verify_singular_macdonald", "integral_rep_poly",
    "h_realization_check", "power_sum_apply",
]


class MacdonaldError(ValueError):
    pass


@dataclass(frozen=True)
class MacdonaldParams:
    """Variable count N; t is fixed to -q = -v^2."""

    N: int

    def __post_init__(self):
        if self.N < 1:
            raise MacdonaldError("N must be positive")


Q = V ** 2
T = -Q


def eigenvalue(lam, N: int | None = None) -> RingElem:
    """eps_lambda = sum_i t^(N-i) q^lambda_i."""
    lam = Partition.sorted(lam)
    N = lam.weight if N is None else N
    if len(lam) > N:
        raise MacdonaldError(f"partition {lam} has more than N={N} parts")
    parts = tuple(lam) + (0,) * (N - len(lam))
    r = ZERO
    for i, p in enumerate(parts, start=1):
        r = r + T ** (N - i) * Q ** p
    return r


def rect_eigenvalue(s: int, sp: int, N: int | None = None) -> RingElem:
    """Closed form for the s x s' rectangle: -((-q)^N/(q+1)) ((-q)^-s + q^s' - q^s' (-q)^-s - (-q)^-N)."""
    N = s * sp if N is None else N
    mq = -Q
    return -(mq ** N / (Q + 1)) * (mq ** -s + Q ** sp - Q ** sp * mq ** -s - mq ** -N)


# ---------------------------------------------------------------------------
# the direct difference operator

_XCTX: dict[int, flint.fmpq_mpoly_ctx] = {}


def _xctx(N: int) -> flint.fmpq_mpoly_ctx:
    if N not in _XCTX:
        _XCTX[N] = flint.fmpq_mpoly_ctx.get(("v",) + tuple(f"x{i}" for i in range(1, N + 1)), "lex")
    return _XCTX[N]


@lru_cache(maxsize=None)
def _apply_on_monomial(mu: Partition, N: int) -> dict[Partition, RingElem]:
    """H m_mu in N variables, in the monomial basis; coefficients are polynomials in v."""
    ctx = _xctx(N)
    gens = ctx.gens()
    v, xs = gens[0], gens[1:]
    t = -v ** 2
    m = ctx.from_dict({(0,) + e: 1 for e in _distinct_perms(tuple(mu), N)})
    vander = ctx.constant(1)
    for a in range(N):
        for b in range(a + 1, N):
            vander *= xs[a] - xs[b]
    num = ctx.from_dict({})
    for i in range(N):
        # 1/prod_{j != i}(x_i - x_j) = (-1)^i V_i / V with V_i the Vandermonde without x_i
        vi = ctx.constant(1)
        for a in range(N):
            for b in range(a + 1, N):
                if i not in (a, b):
                    vi *= xs[a] - xs[b]
        fac = ctx.constant(1)
        for j in range(N):
            if j != i:
                fac *= t * xs[i] - xs[j]
        shifted = ctx.from_dict(dict(_shift_terms(m, i, N)))
        term = fac * vi * shifted
        num += -term if i % 2 else term
    quo, rem = divmod(num, vander)
    if not rem.is_zero():
        raise MacdonaldError("Vandermonde division is not exact")
    out: dict[Partition, RingElem] = {}
    for k, c in quo.terms():
        e = tuple(int(x) for x in k[1:])
        if list(e) != sorted(e, reverse=True):
            continue
        lam = Partition.sorted(e)
        out[lam] = out.get(lam, ZERO) + RingElem.from_laurent({(int(k[0]), 0): _frac(c)})
    return {k: c for k, c in out.items() if not c.is_zero()}


def _shift_terms(m, i: int, N: int):
    """Terms of m(.., q x_i, ..) with q = v^2."""
    for k, c in m.terms():
        k = tuple(int(x) for x in k)
        e = k[1 + i]
        yield (k[0] + 2 * e,) + k[1:], c


def _frac(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def macdonald_apply(P: SymPoly, params: MacdonaldParams | None = None) -> SymPoly:
    """Exact image H P in N variables (monomial basis)."""
    N = P.nvars if params is None else params.N
    try:
        m = basis_convert(P, "monomial")
    except SymAlgError as e:
        raise MacdonaldError(f"input is not symmetric: {e}") from e
    d: dict[Partition, RingElem] = {}
    for mu, c in m.terms:
        if len(mu) > N:
            continue
        for lam, x in _apply_on_monomial(Partition(mu), N).items():
            d[lam] = d.get(lam, ZERO) + c * x
    return SymPoly.make(N, "monomial", d)


# ---------------------------------------------------------------------------
# power-sum form and the eigen-solver
#
# Scaled operator K = q^L (t - 1) H on degree-L power sums; entries are polynomials
# in q, handled as fmpq_poly.

_QX = flint.fmpq_poly([0, 1])


@lru_cache(maxsize=None)
def _G(j: int) -> dict[Partition, flint.fmpq_poly]:
    """q^j [z^-j] exp(sum_k (1 - t^-k) p_k z^-k / k), keyed by partitions of j."""
    if j == 0:
        return {Partition(): flint.fmpq_poly([1])}
    out: dict[Partition, flint.fmpq_poly] = {}
    for k in range(1, j + 1):
        # q^k (1 - t^-k) = q^k - (-1)^k
        a = _QX ** k - (-1) ** (k % 2)
        for lam, c in _G(j - k).items():
            key = Partition.sorted(lam + (k,))
            out[key] = out.get(key, flint.fmpq_poly([])) + a * c
    inv = flint.fmpq(1, j)
    return {k: c * inv for k, c in out.items() if not c.is_zero()}


@lru_cache(maxsize=None)
def _K_on_power(mu: Partition, N: int) -> dict[Partition, flint.fmpq_poly]:
    """q^L (t - 1) H p_mu in the power-sum basis, L = |mu|."""
    L = mu.weight
    tN = (-_QX) ** N
    mult = sorted(mu.multiplicities().items())
    out: dict[Partition, flint.fmpq_poly] = {}

    def rec(idx: int, removed: int, coef: flint.fmpq_poly, rest: tuple[int, ...]):
        if idx == len(mult):
            for lam, g in _G(removed).items():
                key = Partition.sorted(rest + tuple(lam))
                # q^(L - removed) comes with the kept parts
                val = tN * coef * g * _QX ** (L - removed)
                out[key] = out.get(key, flint.fmpq_poly([])) + val
            return
        k, e = mult[idx]
        b = _QX ** k - 1
        for r in range(e + 1):
            rec(idx + 1, removed + k * r, coef * comb(e, r) * b ** r, rest + (k,) * (e - r))

    rec(0, 0, flint.fmpq_poly([1]), ())
    out[mu] = out.get(mu, flint.fmpq_poly([])) - _QX ** L
    return {k: c for k, c in out.items() if not c.is_zero()}


def _qpoly_to_ring(p: flint.fmpq_poly, shift: int = 0) -> RingElem:
    coeffs = p.coeffs()
    return RingElem.from_laurent({(2 * (e - shift), 0): _frac(c)
                                  for e, c in enumerate(coeffs) if c != 0})


def power_sum_apply(P: SymPoly, params: MacdonaldParams | None = None) -> SymPoly:
    """H P through the power-sum form; needs N >= deg P for the result to be exact."""
    N = P.nvars if params is None else params.N
    p = basis_convert(P, "powersum")
    d: dict[Partition, RingElem] = {}
    scale = {}
    for mu, c in p.terms:
        L = Partition(mu).weight
        if L not in scale:
            scale[L] = (_qpoly_to_ring(flint.fmpq_poly([0] * L + [1])) * (T - 1)).inverse()
        for lam, x in _K_on_power(Partition(mu), N).items():
            d[lam] = d.get(lam, ZERO) + c * _qpoly_to_ring(x) * scale[L]
    return SymPoly.make(N, "powersum", d)


@lru_cache(maxsize=None)
def _K_monomial(L: int, N: int) -> dict[Partition, dict[Partition, flint.fmpq_poly]]:
    """K m_mu = sum_nu K[mu][nu] m_nu for |mu| = L."""
    m2p = m_to_p_matrix(L)
    p2m = p_to_m_matrix(L)
    Kp = {lam: _K_on_power(lam, N) for lam in partitions(L)}
    out = {}
    for mu in partitions(L):
        acc: dict[Partition, flint.fmpq_poly] = {}
        for lam, x in m2p[mu].items():
            xq = flint.fmpq(x.numerator, x.denominator)
            for kap, y in Kp[lam].items():
                for nu, z in p2m[kap].items():
                    acc[nu] = acc.get(nu, flint.fmpq_poly([])) + y * (xq * z)
        out[mu] = {k: c for k, c in acc.items() if not c.is_zero()}
    return out


@lru_cache(maxsize=None)
def macdonald_poly(lam) -> SymPoly:
    """P_lambda at t = -q with N = |lambda|, monic in m_lambda (monomial basis)."""
    lam = Partition.sorted(lam)
    L = lam.weight
    if L == 0:
        return SymPoly.make(1, "monomial", {(): ONE})
    N = L
    K = _K_monomial(L, N)
    below = [mu for mu in partitions(L) if mu != lam and dominates(lam, mu)]
    # dominance-compatible order: partitions(L) is reverse lexicographic
    eig = {mu: _scaled_eigen(mu, N) for mu in [lam] + below}
    coef: dict[Partition, RingElem] = {lam: ONE}
    for mu in below:
        rhs = ZERO
        for nu, c in coef.items():
            x = K[nu].get(mu)
            if x is not None:
                rhs = rhs + c * _qpoly_to_ring(x)
        gap = eig[lam] - eig[mu]
        if gap.is_zero():
            raise MacdonaldError(f"eigenvalue collision between {lam} and {mu}")
        if not rhs.is_zero():
            coef[mu] = rhs / gap
    return SymPoly.make(N, "monomial", coef)


def _scaled_eigen(mu: Partition, N: int) -> RingElem:
    L = mu.weight
    return eigenvalue(mu, N) * (T - 1) * Q ** L


# ---------------------------------------------------------------------------
# bracket map


def bracket_map(P: SymPoly) -> AElement:
    """Ring map p_k -> c_{-k} (1 - v^-2k)."""
    p = basis_convert(P, "powersum")
    d = {}
    for lam, c in p.terms:
        x = c
        for k in lam:
            x = x * (1 - V ** (-2 * k))
        d[tuple(lam)] = x
    return AElement(d)


def inverse_bracket_map(h: AElement, nvars: int) -> SymPoly:
    d = {}
    for lam, c in h.terms.items():
        x = c
        for k in lam:
            x = x / (1 - V ** (-2 * k))
        d[lam] = x
    return SymPoly.make(nvars, "powersum", d)


def verify_singular_macdonald(m: int, n: int, s: int, route: str = "dp") -> RingElem:
    """C_{s, m-n+s}: the singular vector's A-element over [P_{s x (m-n+s)}]."""
    from .screenings import singular_vector

    sp = m - n + s
    if sp < 1:
        raise MacdonaldError(f"need s > n - m, got (m, n, s) = ({m}, {n}, {s})")
    if (s - n) % 2:
        raise MacdonaldError(f"need s = n mod 2, got (m, n, s) = ({m}, {n}, {s})")
    sv = singular_vector(m, n, s, route=route)
    h = bracket_map(macdonald_poly((sp,) * s))
    c = sv.a_element.ratio_to(h)
    if c is None or c.is_zero():
        raise MacdonaldError(f"not proportional: screening {sv.a_element} vs bracket {h}")
    return c


# ---------------------------------------------------------------------------
# integral representation


@lru_cache(maxsize=None)
def _e_series(j: int) -> AElement:
    """[y^j] exp(sum_k g_k q^(k/2) p_k y^k) with keys as p-partitions,
    g_k q^(k/2) = (q^k - (-1)^k) / (k (q^(k/2) - q^(-k/2)))."""
    if j == 0:
        return AElement.one()
    acc = AElement()
    for k in range(1, j + 1):
        a = (V ** (2 * k) - (-1) ** (k % 2)) / (V ** k - V ** -k)
        acc = acc + _e_series(j - k) * AElement.c(k) * a
    return acc / j


def integral_rep_poly(s: int, sp: int) -> SymPoly:
    """Nested constant-term evaluation of the rectangular integral formula (power-sum basis).

    With Z_p = w_1 ... w_{p-1} the z-exponential factorizes into prod_p E(z Z_p), so the
    residue in z picks degrees j_p summing to s s'. The w_t exponent collects the
    Vandermonde suffix, the suffix sum of j and, for odd t < 2 floor(s/2), one F^s term."""
    if s < 1 or sp < 1:
        raise MacdonaldError("s and s' must be positive")
    L = s * sp
    odd = {2 * i - 1 for i in range(1, s // 2 + 1)}
    # state: (mask of used columns, suffix sum of j) -> p-polynomial
    states: dict[tuple[int, int], AElement] = {(0, 0): AElement.one()}
    for p in range(s, 0, -1):
        nxt: dict[tuple[int, int], AElement] = {}
        for (mask, J), val in states.items():
            for c in range(1, s + 1):
                bit = 1 << (c - 1)
                if mask & bit:
                    continue
                inv = bin(mask & (bit - 1)).count("1")
                nm = mask | bit
                used = sum(q for q in range(1, s + 1) if nm >> (q - 1) & 1)
                a = 2 * (sum(range(p, s + 1)) - used)
                for j in range(0, L - J + 1):
                    if p == 1 and J + j != L:
                        continue
                    nJ = J + j
                    x = ONE if inv % 2 == 0 else -ONE
                    t = p - 1
                    if t >= 1:
                        need = (s - t) * (sp + t) - a - nJ
                        if t in odd:
                            if need < 1:
                                continue
                            x = x * F(s, need)
                        elif need != 0:
                            continue
                    term = val * _e_series(j) * x
                    key = (nm, nJ)
                    nxt[key] = nxt[key] + term if key in nxt else term
        states = {k: v for k, v in nxt.items() if not v.is_zero()}
    total = AElement()
    for v in states.values():
        total = total + v
    return SymPoly.make(L, "powersum", dict(total.terms))


# ---------------------------------------------------------------------------
# the H operator on kets


def _hbar_apply(vec: FockVector, N: int) -> FockVector:
    """Hbar = -((-q)^N/(q+1)) ((Psibar t)_0 - e^{2 pi i a} - (-q)^-N) on a finite-level ket."""
    from .currents import apply_vertex_mode, apply_t_mode

    top = max(vec.levels()) if not vec.is_zero() else 0
    acc = vec * ZERO
    for l in range(0, top + 1):
        w = apply_t_mode(l, vec)
        if w.is_zero():
            continue
        acc = acc + apply_vertex_mode("Psibar", -l, w)
    u2 = vec.weight.u_eff() ** 2
    mq = -Q
    inner = acc - vec * u2 - vec * mq ** -N
    return inner * (-(mq ** N) / (Q + 1))


def _psibar_lambda(k: int, vec: FockVector) -> FockVector:
    """(Psibar lambda_-)_k = sum_{l >= 0} Psibar_{-l} lambda^-_{l+k}."""
    from .currents import apply_vertex_mode

    top = max(vec.levels()) if not vec.is_zero() else 0
    acc = vec * ZERO
    for l in range(0, top - k + 1):
        w = apply_vertex_mode("lambda-", l + k, vec)
        if not w.is_zero():
            acc = acc + apply_vertex_mode("Psibar", -l, w)
    return acc


def h_realization_check(max_level: int = 4, weight: Weight | None = None,
                        singular: tuple = ((1, 1, 1), (1, -1, 1), (2, 2, 2))) -> dict:
    """Checks Hbar |[P]> = |[H P]> on A-vectors, the rectangular eigenvalues and the
    auxiliary identity (Psibar lambda_-)_k |h> = delta_k0 e^{i pi a} |h> for k <= 0.

    On kets the index runs the other way: moving barpi(c_{-l}) to the right lowers
    the subscript by l, so the identity holds for k <= 0 rather than k >= 0."""
    if max_level > 6:
        raise MacdonaldError("max_level must be at most 6")
    w = weight or Weight.generic()
    vac = vacuum("ket", w)
    rows = []
    ok = True
    for L in range(0, max_level + 1):
        N = max(L, 1)
        for lam in partitions(L):
            P = SymPoly.make(N, "powersum", {lam: ONE})
            ket = a_rep_apply("barpi", bracket_map(P), vac)
            lhs = _hbar_apply(ket, N)
            HP = macdonald_apply(P, MacdonaldParams(N))
            rhs = a_rep_apply("barpi", bracket_map(HP), vac)
            good = lhs == rhs
            aux = all(_psibar_lambda(k, ket) == (ket * w.u_eff() if k == 0 else ket * ZERO)
                      for k in range(-L - 1, 1))
            ok = ok and good and aux
            rows.append({"level": L, "p": list(lam), "H_matches": good, "aux_identity": aux})
    sing = []
    from .screenings import singular_vector
    for (m, n, s) in singular:
        sv = singular_vector(m, n, s)
        sp = m - n + s
        N = s * sp
        img = _hbar_apply(sv.vector, N)
        eps = rect_eigenvalue(s, sp)
        good = img == sv.vector * eps and eps == eigenvalue((sp,) * s)
        ok = ok and good
        sing.append({"m": m, "n": n, "s": s, "eigenvalue": str(eps), "eigen_ok": good})
    return {"ok": ok, "weight": str(w), "rows": rows, "singular": sing}
