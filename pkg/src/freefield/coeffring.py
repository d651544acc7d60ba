"""Exact arithmetic in Q(i)(v, u) with v = q^(1/2) and u = e^(i pi a).

A RingElem is stored as (re + i*im)/den with re, im, den polynomials in
(v, u) over Q and den real. The canonical form has gcd(re, im, den) = 1 and
the lex-leading coefficient of den equal to 1, so equality is structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import flint

from ._parse import parse_expression

__all__ = [
    "GaussRational", "RingElem", "RingError", "SpecializationError", "ArithError",
    "V", "U", "I", "ZERO", "ONE", "CTX",
    "ring_arith", "struct_const", "specialize_a", "d_a", "u_mn",
    "A_plus", "A_minus", "A", "B1", "B", "F", "gamma", "kappa", "C0", "SIN_PI_R",
    "parse_ring",
]

CTX = flint.fmpq_mpoly_ctx.get(("v", "u"), "lex")
_PZERO = CTX.from_dict({})
_PONE = CTX.constant(1)


class RingError(ArithmeticError):
    """Raised on undefined ring operations (division by zero, bad indices)."""


class SpecializationError(RingError):
    """A denominator vanishes identically under a substitution."""


# ---------------------------------------------------------------------------
# Gaussian rationals


@dataclass(frozen=True)
class GaussRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def coerce(x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRational(Fraction(x))
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        return NotImplemented

    def __add__(self, o):
        o = GaussRational.coerce(o)
        if o is NotImplemented:
            return o
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, o):
        o = GaussRational.coerce(o)
        if o is NotImplemented:
            return o
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = GaussRational.coerce(o)
        if o is NotImplemented:
            return o
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("GaussRational division by zero")
        return GaussRational(self.re / n, -self.im / n)

    def __truediv__(self, o):
        o = GaussRational.coerce(o)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, o):
        return GaussRational.coerce(o) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = GaussRational(1)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        o2 = GaussRational.coerce(o)
        if o2 is NotImplemented:
            return NotImplemented
        return self.re == o2.re and self.im == o2.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        re_, im_ = self.re, self.im
        if im_ == 0:
            return str(re_)
        if im_ == 1:
            ims = "i"
        elif im_ == -1:
            ims = "-i"
        else:
            ims = f"{im_}*i"
        if re_ == 0:
            return ims
        sep = "" if ims.startswith("-") else "+"
        return f"({re_}{sep}{ims})"

    def __repr__(self):
        return f"GaussRational({self})"


# ---------------------------------------------------------------------------
# helpers on flint polynomials


def _fq(x: Fraction) -> flint.fmpq:
    return flint.fmpq(x.numerator, x.denominator)


def _fr(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def _mono(a: int, b: int) -> flint.fmpq_mpoly:
    return CTX.from_dict({(a, b): 1})


def _normalize(re, im, den):
    if den.is_zero():
        raise RingError("division by zero")
    if re.is_zero() and im.is_zero():
        return _PZERO, _PZERO, _PONE
    if den != _PONE:
        g = den
        if not re.is_zero():
            g = g.gcd(re)
        if not im.is_zero():
            g = g.gcd(im)
        if g.total_degree() > 0:
            re = re / g
            im = im / g
            den = den / g
        lc = den.leading_coefficient()
        if lc != 1:
            inv = 1 / lc
            re, im, den = re * inv, im * inv, den * inv
    return re, im, den


def _laurent_to_parts(terms: dict[tuple[int, int], GaussRational]):
    """Laurent dict -> (re, im, monomial shift) with nonnegative exponents."""
    terms = {k: c for k, c in terms.items() if c}
    if not terms:
        return _PZERO, _PZERO, (0, 0)
    a0 = min(k[0] for k in terms)
    b0 = min(k[1] for k in terms)
    sa, sb = max(0, -a0), max(0, -b0)
    re = {(a + sa, b + sb): _fq(c.re) for (a, b), c in terms.items() if c.re}
    im = {(a + sa, b + sb): _fq(c.im) for (a, b), c in terms.items() if c.im}
    return CTX.from_dict(re), CTX.from_dict(im), (sa, sb)


def _poly_terms(p) -> dict[tuple[int, int], Fraction]:
    return {tuple(int(e) for e in k): _fr(c) for k, c in p.terms()}


# ---------------------------------------------------------------------------
# RingElem

Coercible = Union["RingElem", GaussRational, int, Fraction]


class RingElem:
    """Immutable element of Q(i)(v, u)."""

    __slots__ = ("re", "im", "den", "_hash", "_str")

    def __init__(self, value: Coercible = 0):
        if isinstance(value, RingElem):
            self.re, self.im, self.den = value.re, value.im, value.den
        else:
            g = GaussRational.coerce(value)
            if g is NotImplemented:
                raise TypeError(f"cannot convert {type(value).__name__} to RingElem")
            self.re = CTX.constant(_fq(g.re))
            self.im = CTX.constant(_fq(g.im))
            self.den = _PONE
        self._hash = None
        self._str = None

    @classmethod
    def _make(cls, re, im, den, normalize: bool = True) -> "RingElem":
        if normalize:
            re, im, den = _normalize(re, im, den)
        obj = cls.__new__(cls)
        obj.re, obj.im, obj.den = re, im, den
        obj._hash = None
        obj._str = None
        return obj

    @classmethod
    def from_laurent(cls, terms: dict[tuple[int, int], Coercible]) -> "RingElem":
        """Build from {(v_exp, u_exp): coefficient} with arbitrary integer exponents."""
        g = {k: GaussRational.coerce(c) for k, c in terms.items()}
        re, im, (sa, sb) = _laurent_to_parts(g)
        return cls._make(re, im, _mono(sa, sb))

    @classmethod
    def from_polys(cls, re, im, den) -> "RingElem":
        """Build from raw flint polynomials (den real, nonzero)."""
        return cls._make(re, im, den)

    @staticmethod
    def coerce(x) -> "RingElem":
        if isinstance(x, RingElem):
            return x
        if isinstance(x, (int, Fraction, GaussRational)):
            return RingElem(x)
        return NotImplemented

    # -- predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_real(self) -> bool:
        return self.im.is_zero()

    def has_u(self) -> bool:
        return any(p.degrees()[1] > 0 for p in (self.re, self.im, self.den) if not p.is_zero())

    def is_constant(self) -> bool:
        return all(p.total_degree() <= 0 for p in (self.re, self.im, self.den))

    def constant_value(self) -> GaussRational:
        if not self.is_constant():
            raise RingError(f"{self} is not a constant")
        d = _fr(self.den.leading_coefficient())
        re = _fr(self.re.leading_coefficient()) if not self.re.is_zero() else Fraction(0)
        im = _fr(self.im.leading_coefficient()) if not self.im.is_zero() else Fraction(0)
        return GaussRational(re / d, im / d)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, o):
        o = RingElem.coerce(o)
        if o is NotImplemented:
            return o
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self.den == o.den:
            return RingElem._make(self.re + o.re, self.im + o.im, self.den)
        g = self.den.gcd(o.den)
        a = o.den / g
        b = self.den / g
        return RingElem._make(self.re * a + o.re * b, self.im * a + o.im * b, self.den * a)

    __radd__ = __add__

    def __neg__(self):
        return RingElem._make(-self.re, -self.im, self.den, normalize=False)

    def __sub__(self, o):
        o = RingElem.coerce(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = RingElem.coerce(o)
        if o is NotImplemented:
            return o
        if self.is_zero() or o.is_zero():
            return ZERO
        re = self.re * o.re - self.im * o.im
        im = self.re * o.im + self.im * o.re
        return RingElem._make(re, im, self.den * o.den)

    __rmul__ = __mul__

    def conj_i(self) -> "RingElem":
        """Complex conjugation of the Gaussian coefficients (v, u untouched)."""
        return RingElem._make(self.re, -self.im, self.den, normalize=False)

    def inverse(self) -> "RingElem":
        if self.is_zero():
            raise RingError("division by zero")
        if self.im.is_zero():
            return RingElem._make(self.den, _PZERO, self.re)
        if self.re.is_zero():
            return RingElem._make(_PZERO, -self.den, self.im)
        n = self.re * self.re + self.im * self.im
        return RingElem._make(self.den * self.re, -self.den * self.im, n)

    def __truediv__(self, o):
        o = RingElem.coerce(o)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, o):
        return RingElem.coerce(o) * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        r = ONE
        b = self
        while e:
            if e & 1:
                r = r * b
            e >>= 1
            if e:
                b = b * b
        return r

    def __eq__(self, o):
        o = RingElem.coerce(o)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(str(self))
        return self._hash

    # -- calculus and substitution ----------------------------------------
    def d_u(self) -> "RingElem":
        """Scaled derivative D = u d/du."""
        u = CTX.gens()[1]

        def D(p):
            return u * p.derivative("u") if not p.is_zero() else p

        dd = D(self.den)
        re = D(self.re) * self.den - self.re * dd
        im = D(self.im) * self.den - self.im * dd
        return RingElem._make(re, im, self.den * self.den)

    def subs_u(self, coef: Coercible, vpow: int, upow: int) -> "RingElem":
        """Substitute u -> coef * v^vpow * u^upow."""
        c = GaussRational.coerce(coef)
        if not c:
            raise SpecializationError("substitution u -> 0 is not allowed")
        dre, dim, dsh = _laurent_to_parts(_subst_poly(self.den, c, vpow, upow))
        if dre.is_zero() and dim.is_zero():
            raise SpecializationError(
                f"denominator vanishes under u -> {_subst_str(c, vpow, upow)}; "
                f"offending factor: {_offending_factor(self.den, c, vpow, upow)}"
            )
        num = _subst_poly(self.re, c, vpow, upow)
        for k, x in _subst_poly(self.im, c, vpow, upow).items():
            num[k] = num.get(k, GaussRational(0)) + x * GaussRational(0, 1)
        nre, nim, nsh = _laurent_to_parts(num)
        numel = RingElem._make(nre, nim, _mono(*nsh))
        denel = RingElem._make(dre, dim, _mono(*dsh))
        return numel / denel

    def eval_v(self, value: Fraction) -> GaussRational:
        """Evaluate an element free of u at a rational v."""
        if self.has_u():
            raise RingError("eval_v requires an element free of u")
        x = flint.fmpq(Fraction(value).numerator, Fraction(value).denominator)

        def ev(p):
            return p.subs({"v": x}).leading_coefficient() if not p.subs({"v": x}).is_zero() else flint.fmpq(0)

        d = ev(self.den)
        if d == 0:
            raise SpecializationError(f"denominator vanishes at v = {value}")
        return GaussRational(_fr(ev(self.re) / d), _fr(ev(self.im) / d))

    # -- display -----------------------------------------------------------
    def numerator_terms(self) -> dict[tuple[int, int], GaussRational]:
        """Laurent numerator after pulling the monomial content out of den."""
        (a0, b0), _ = self._den_shift()
        out: dict[tuple[int, int], GaussRational] = {}
        for (a, b), x in _poly_terms(self.re).items():
            out[(a - a0, b - b0)] = GaussRational(x)
        for (a, b), x in _poly_terms(self.im).items():
            k = (a - a0, b - b0)
            out[k] = out.get(k, GaussRational(0)) + GaussRational(0, x)
        return out

    def _den_shift(self):
        terms = _poly_terms(self.den)
        a0 = min(k[0] for k in terms)
        b0 = min(k[1] for k in terms)
        return (a0, b0), {(a - a0, b - b0): GaussRational(x) for (a, b), x in terms.items()}

    def __str__(self):
        if self._str is None:
            _, den = self._den_shift()
            num = _fmt_laurent(self.numerator_terms())
            if den == {(0, 0): GaussRational(1)}:
                self._str = num
            else:
                self._str = f"({num})/({_fmt_laurent(den)})"
        return self._str

    def __repr__(self):
        return f"RingElem({self})"

    def to_json(self) -> str:
        return str(self)


def _fmt_mono(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("v" if a == 1 else f"v^{a}")
    if b:
        parts.append("u" if b == 1 else f"u^{b}")
    return "*".join(parts)


def _fmt_laurent(terms: dict[tuple[int, int], GaussRational]) -> str:
    items = sorted(((k, c) for k, c in terms.items() if c), key=lambda kc: kc[0], reverse=True)
    if not items:
        return "0"
    out = []
    for (a, b), c in items:
        mono = _fmt_mono(a, b)
        cs = str(c)
        if not mono:
            t = cs
        elif c == 1:
            t = mono
        elif c == -1:
            t = "-" + mono
        else:
            t = f"{cs}*{mono}"
        if out and not t.startswith("-"):
            t = "+" + t
        out.append(t)
    return "".join(out)


def _subst_str(c: GaussRational, vpow: int, upow: int) -> str:
    mono = _fmt_mono(vpow, upow)
    if not mono:
        return str(c)
    return mono if c == 1 else f"{c}*{mono}"


def _subst_poly(p, c: GaussRational, vpow: int, upow: int) -> dict[tuple[int, int], GaussRational]:
    out: dict[tuple[int, int], GaussRational] = {}
    for (a, b), x in _poly_terms(p).items():
        key = (a + vpow * b, upow * b)
        out[key] = out.get(key, GaussRational(0)) + (c ** b) * x
    return {k: x for k, x in out.items() if x}


def _offending_factor(den, c, vpow, upow) -> str:
    _, factors = den.factor()
    for f, _e in factors:
        if not _subst_poly(f, c, vpow, upow):
            return str(RingElem._make(f, _PZERO, _PONE))
    return str(RingElem._make(den, _PZERO, _PONE))


ZERO = RingElem(0)
ONE = RingElem(1)
I = RingElem(GaussRational(0, 1))
V = RingElem._make(CTX.gens()[0], _PZERO, _PONE)
U = RingElem._make(CTX.gens()[1], _PZERO, _PONE)


def _ring_atom(name: str) -> RingElem:
    if name == "v":
        return V
    if name == "u":
        return U
    if name == "i":
        return I
    if name == "q":
        return V * V
    raise KeyError(name)


def parse_ring(text: str) -> RingElem:
    """Parse the canonical text encoding (or any expression in v, u, i, q)."""
    return parse_expression(text, _ring_atom, RingElem)


# ---------------------------------------------------------------------------
# public operations


@dataclass(frozen=True)
class ArithError:
    """Error value returned by ring_arith instead of raising."""

    message: str

    def __bool__(self):
        return False


def ring_arith(op: str, x: Coercible, y: Coercible) -> RingElem | ArithError:
    x = RingElem.coerce(x)
    if op == "pow":
        if not isinstance(y, int):
            return ArithError("exponent must be an integer")
        try:
            return x ** y
        except RingError as e:
            return ArithError(str(e))
    y = RingElem.coerce(y)
    try:
        if op == "add":
            return x + y
        if op == "sub":
            return x - y
        if op == "mul":
            return x * y
        if op == "div":
            return x / y
    except RingError as e:
        return ArithError(str(e))
    return ArithError(f"unknown operation {op!r}")


def u_mn(m: int, n: int) -> tuple[GaussRational, int]:
    """e^(i pi a_mn) = i^n v^(n-m), returned as (coefficient, v power)."""
    return GaussRational(0, 1) ** n, n - m


def specialize_a(x: RingElem, m: int, n: int) -> RingElem:
    """Substitute u -> i^n v^(n-m)."""
    c, p = u_mn(m, n)
    return x.subs_u(c, p, 0)


def d_a(x: RingElem) -> RingElem:
    """Scaled derivative D = u d/du; d/da = i pi D."""
    return x.d_u()


def _vp(k: int) -> RingElem:
    return V ** k


@lru_cache(maxsize=None)
def A(sign: int, k: int) -> RingElem:
    """A^{+-}_k for sign = +1 / -1 (any nonzero k)."""
    if k == 0:
        raise RingError("A_k needs k != 0")
    s = (-1) ** (k % 2)
    base = (_vp(k) - _vp(-k)) * (_vp(k) - s * _vp(-k))
    return base if sign > 0 else s * base


def A_plus(k: int) -> RingElem:
    return A(1, k)


def A_minus(k: int) -> RingElem:
    return A(-1, k)


B1 = V + V ** -1


@lru_cache(maxsize=None)
def B(k: int) -> RingElem:
    """B_k = (v^k - (-1)^k v^-k)/k, B_0 = 1."""
    if k == 0:
        return ONE
    return (_vp(k) - (-1) ** (k % 2) * _vp(-k)) / k


@lru_cache(maxsize=None)
def F(n: int, k: int) -> RingElem:
    s = (-1) ** (n % 2)
    return (-1) ** ((k - 1) % 2) * (_vp(k) - s * _vp(-k)) / (_vp(k) + s * _vp(-k))


@lru_cache(maxsize=None)
def gamma(k: int) -> RingElem:
    """gamma_k(a) = B1 (u v^(k-1) + u^-1 v^-(k-1)); valid for every integer k."""
    return B1 * (U * _vp(k - 1) + U ** -1 * _vp(1 - k))


@lru_cache(maxsize=None)
def kappa(k: int) -> RingElem:
    if k % 2:
        return ZERO
    return RingElem(-2) / (_vp(k) - _vp(-k))


C0 = (V ** -2 - V ** 2) / 2
SIN_PI_R = (V ** -2 - V ** 2) / (2 * I)


def struct_const(name: str, *idx: int) -> RingElem:
    """Structure constants: Apm(sign, k), B1(), Bk(k), Fnk(n, k), gamma(k), kappa(k)."""

    def need_k(k: int) -> int:
        if not isinstance(k, int) or k <= 0:
            raise RingError(f"{name}: index k must be a positive integer, got {k!r}")
        return k

    if name == "Apm":
        sign, k = idx
        if sign not in (1, -1, "+", "-"):
            raise RingError("Apm: sign must be +1 or -1")
        return A(1 if sign in (1, "+") else -1, need_k(k))
    if name == "B1":
        return B1
    if name == "Bk":
        return B(need_k(idx[0]))
    if name == "Fnk":
        n, k = idx
        return F(n, need_k(k))
    if name == "gamma":
        return gamma(need_k(idx[0]))
    if name == "kappa":
        return kappa(need_k(idx[0]))
    raise RingError(f"unknown structure constant {name!r}")
