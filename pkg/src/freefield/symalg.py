"""Symmetric rational functions with RingElem coefficients and symmetric polynomial bases.

SymRat: N(z)/prod (z_i + s z_j)^e with N a Laurent polynomial in the formal
arguments z and the product running over pairs of arguments. The canonical
form keeps the exponents minimal, which makes it unique.

SymPoly: symmetric polynomials in the monomial (m), power-sum (p) or
expanded basis.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .coeffring import ONE, ZERO, GaussRational, RingElem, parse_ring
from ._parse import parse_expression

__all__ = [
    "Partition", "partitions", "partition_count", "dominates",
    "SymRat", "SymAlgError", "sym_arith", "pair_factor",
    "SymPoly", "basis_convert", "p_to_m_matrix", "m_to_p_matrix",
]


class SymAlgError(ValueError):
    pass


# ---------------------------------------------------------------------------
# partitions


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise SymAlgError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise SymAlgError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def sorted(cls, parts: Iterable[int]) -> "Partition":
        return cls(sorted((p for p in parts if p), reverse=True))

    @property
    def weight(self) -> int:
        return sum(self)

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self:
            out[p] = out.get(p, 0) + 1
        return out

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > i) for i in range(self[0]))

    def __repr__(self):
        return f"Partition({list(self)})"

    def __str__(self):
        return ",".join(map(str, self)) if self else "()"


@lru_cache(maxsize=None)
def partitions(n: int, max_part: int | None = None) -> tuple[Partition, ...]:
    """Partitions of n in reverse lexicographic order (largest first)."""
    if max_part is None:
        max_part = n
    if n == 0:
        return (Partition(),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            out.append(Partition((first,) + tuple(rest)))
    return tuple(out)


def partition_count(n: int) -> int:
    return len(partitions(n))


def dominates(lam: Partition, mu: Partition) -> bool:
    """lam >= mu in dominance order (same weight)."""
    if sum(lam) != sum(mu):
        return False
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a < b:
            return False
    return True


# ---------------------------------------------------------------------------
# SymRat

# A pair factor is stored as (i, j, s) with i < j, s = +1 or -1, meaning (z_i + s z_j).
PairKey = tuple[int, int, int]
Mono = tuple[int, ...]


def pair_factor(i: int, j: int, s: int) -> PairKey:
    if i == j or s not in (1, -1):
        raise SymAlgError(f"invalid pair factor {(i, j, s)}")
    if i > j:
        # z_i + s z_j = s (z_j + s z_i)
        return (j, i, s)
    return (i, j, s)


def _pair_sign(i: int, j: int, s: int) -> int:
    """Scalar c with (z_i + s z_j) = c * stored factor."""
    return 1 if i < j else s


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        x = out.get(k)
        x = c if x is None else x + c
        if x.is_zero():
            out.pop(k, None)
        else:
            out[k] = x
    return out


def _pmul_factor(num: dict, i: int, j: int, s: int) -> dict:
    """num * (z_i + s z_j)."""
    out: dict = {}
    for k, c in num.items():
        for idx, cc in ((i, c), (j, c if s == 1 else -c)):
            kk = list(k)
            kk[idx] += 1
            kk = tuple(kk)
            x = out.get(kk)
            x = cc if x is None else x + cc
            if x.is_zero():
                out.pop(kk, None)
            else:
                out[kk] = x
    return out


def _pdiv_factor(num: dict, i: int, j: int, s: int):
    """Exact division of num by (z_i + s z_j); None if not divisible."""
    if not num:
        return {}
    # group by all exponents except z_i, z_j total degree is homogeneous in (i,j) pairs
    groups: dict[tuple, dict[int, RingElem]] = {}
    for k, c in num.items():
        rest = k[:i] + (0,) + k[i + 1:j] + (0,) + k[j + 1:]
        key = rest + (k[i] + k[j],)
        groups.setdefault(key, {})[k[i]] = c
    out: dict = {}
    for key, poly in groups.items():
        deg = key[-1]
        rest = list(key[:-1])
        # poly in z_i with z_j^(deg - a); divide by (z_i + s z_j) as a polynomial in t = z_i/z_j
        hi = max(poly)
        lo = min(poly)
        rem = dict(poly)
        quot: dict[int, RingElem] = {}
        a = hi
        while a > lo:
            c = rem.pop(a, None)
            if c is not None and not c.is_zero():
                quot[a - 1] = c
                prev = rem.get(a - 1, ZERO)
                rem[a - 1] = prev - (c if s == 1 else -c)
            a -= 1
        last = rem.get(lo)
        if last is not None and not last.is_zero():
            return None
        for a, c in quot.items():
            k = list(rest)
            k[i] = a
            k[j] = deg - 1 - a
            out[tuple(k)] = c
    return out


class SymRat:
    """Rational function N(z) / prod(z_i + s z_j)^e in named formal arguments."""

    __slots__ = ("vars", "num", "den")

    def __init__(self, vars: Iterable[str], num: Mapping[Mono, RingElem] | None = None,
                 den: Mapping[PairKey, int] | None = None, reduce: bool = True):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean: dict[Mono, RingElem] = {}
        for k, c in (num or {}).items():
            if len(k) != n:
                raise SymAlgError("monomial length does not match variable count")
            c = RingElem.coerce(c)
            if not c.is_zero():
                clean[tuple(k)] = c
        self.num = clean
        d: dict[PairKey, int] = {}
        for k, e in (den or {}).items():
            if e < 0:
                raise SymAlgError("negative pair-factor exponent")
            if e:
                i, j, s = k
                d[pair_factor(i, j, s)] = d.get(pair_factor(i, j, s), 0) + e
                if i > j and s == -1 and e % 2:
                    self.num = {kk: -c for kk, c in self.num.items()}
        self.den = d
        if reduce:
            self._reduce()

    # -- construction -------------------------------------------------------
    @classmethod
    def const(cls, vars: Iterable[str], c) -> "SymRat":
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): RingElem.coerce(c)})

    @classmethod
    def var(cls, vars: Iterable[str], name: str, power: int = 1) -> "SymRat":
        vars = tuple(vars)
        k = [0] * len(vars)
        k[vars.index(name)] = power
        return cls(vars, {tuple(k): ONE})

    @classmethod
    def zero(cls, vars: Iterable[str]) -> "SymRat":
        return cls(vars, {})

    def _reduce(self) -> None:
        if not self.num:
            self.den = {}
            return
        for key in list(self.den):
            while self.den.get(key, 0) > 0:
                q = _pdiv_factor(self.num, *key)
                if q is None:
                    break
                self.num = q
                self.den[key] -= 1
                if not self.den[key]:
                    del self.den[key]

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return not self.den

    def __eq__(self, o):
        if not isinstance(o, SymRat):
            try:
                o = SymRat.const(self.vars, o)
            except TypeError:
                return NotImplemented
        return self.vars == o.vars and self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash(str(self))

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, o) -> "SymRat":
        if isinstance(o, SymRat):
            if o.vars != self.vars:
                raise SymAlgError(f"variable mismatch: {self.vars} vs {o.vars}")
            return o
        return SymRat.const(self.vars, RingElem.coerce(o))

    def _lift(self, target: dict[PairKey, int]) -> dict:
        num = self.num
        for key, e in target.items():
            for _ in range(e - self.den.get(key, 0)):
                num = _pmul_factor(num, *key)
        return num

    def __add__(self, o):
        o = self._coerce(o)
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self.den == o.den:
            return SymRat(self.vars, _padd(self.num, o.num), self.den)
        target = {k: max(self.den.get(k, 0), o.den.get(k, 0)) for k in set(self.den) | set(o.den)}
        return SymRat(self.vars, _padd(self._lift(target), o._lift(target)), target)

    __radd__ = __add__

    def __neg__(self):
        return SymRat(self.vars, {k: -c for k, c in self.num.items()}, self.den, reduce=False)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, (RingElem, int, Fraction, GaussRational)):
            c = RingElem.coerce(o)
            if c.is_zero():
                return SymRat.zero(self.vars)
            return SymRat(self.vars, {k: x * c for k, x in self.num.items()}, self.den, reduce=False)
        o = self._coerce(o)
        num: dict = {}
        for k1, c1 in self.num.items():
            for k2, c2 in o.num.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                x = num.get(k)
                num[k] = c1 * c2 if x is None else x + c1 * c2
        den = dict(self.den)
        for k, e in o.den.items():
            den[k] = den.get(k, 0) + e
        return SymRat(self.vars, num, den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        """Division by a RingElem, or by c * monomial * product of pair factors."""
        if isinstance(o, (RingElem, int, Fraction, GaussRational)):
            return self * RingElem.coerce(o).inverse()
        return self * self._coerce(o).reciprocal()

    def reciprocal(self) -> "SymRat":
        fac = _factor_pairs(self)
        if fac is None:
            raise SymAlgError("division is only defined by monomials and (z_i + s z_j) products")
        (mono, c), pairs = fac
        inv = SymRat(self.vars, {tuple(-a for a in mono): c.inverse()}, pairs, reduce=False)
        num = inv.num
        for key, e in self.den.items():
            for _ in range(e):
                num = _pmul_factor(num, *key)
        return SymRat(self.vars, num, inv.den)

    def __pow__(self, e: int):
        if e < 0:
            return self.reciprocal() ** (-e)
        r = SymRat.const(self.vars, ONE)
        b = self
        while e:
            if e & 1:
                r = r * b
            e >>= 1
            if e:
                b = b * b
        return r

    # -- transformations ----------------------------------------------------
    def map_coeffs(self, fn) -> "SymRat":
        return SymRat(self.vars, {k: fn(c) for k, c in self.num.items()}, self.den)

    def subs_u(self, coef, vpow: int, upow: int) -> "SymRat":
        return self.map_coeffs(lambda c: c.subs_u(coef, vpow, upow))

    def d_u(self) -> "SymRat":
        return SymRat(self.vars, {k: c.d_u() for k, c in self.num.items()}, self.den)

    def permute(self, perm: Mapping[int, int]) -> "SymRat":
        """Rename argument i to perm[i] (indices into vars)."""
        n = len(self.vars)
        full = [perm.get(i, i) for i in range(n)]
        num = {}
        for k, c in self.num.items():
            kk = [0] * n
            for i, a in enumerate(k):
                kk[full[i]] = a
            num[tuple(kk)] = c
        sign = 1
        den: dict[PairKey, int] = {}
        for (i, j, s), e in self.den.items():
            a, b = full[i], full[j]
            if a > b and s == -1 and e % 2:
                sign = -sign
            key = pair_factor(a, b, s)
            den[key] = den.get(key, 0) + e
        if sign < 0:
            num = {k: -c for k, c in num.items()}
        return SymRat(self.vars, num, den, reduce=False)

    def swap(self, i: int, j: int) -> "SymRat":
        return self.permute({i: j, j: i})

    def invert_args(self, which: Iterable[int] | None = None) -> "SymRat":
        """Substitute z -> 1/z for the listed arguments (all by default)."""
        n = len(self.vars)
        which = set(range(n) if which is None else which)
        num = {}
        for k, c in self.num.items():
            num[tuple(-a if i in which else a for i, a in enumerate(k))] = c
        res = SymRat(self.vars, num, {})
        for (i, j, s), e in self.den.items():
            # 1/(1/z_i + s/z_j) = z_i z_j / (z_j + s z_i) for both inverted
            if i in which and j in which:
                mono = [0] * n
                mono[i] = mono[j] = e
                res = res * SymRat(self.vars, {tuple(mono): ONE}, {pair_factor(j, i, s): e})
                if s == -1 and e % 2:
                    res = -res
            elif i not in which and j not in which:
                res = res * SymRat(self.vars, {(0,) * n: ONE}, {(i, j, s): e})
            else:
                raise SymAlgError("partial inversion of a pair factor is not supported")
        return res

    def is_symmetric(self, groups: Iterable[Iterable[int]] | None = None) -> bool:
        """Invariance under adjacent transpositions within each group of argument indices."""
        if groups is None:
            groups = [range(len(self.vars))]
        for g in groups:
            g = list(g)
            for a, b in zip(g, g[1:]):
                if self.swap(a, b) != self:
                    return False
        return True

    def max_den_exponent(self) -> int:
        return max(self.den.values(), default=0)

    def numerator_poly_degree(self) -> int:
        return max((sum(k) for k in self.num), default=0)

    # -- display ------------------------------------------------------------
    def numerator_str(self) -> str:
        if not self.num:
            return "0"
        out = []
        for k in sorted(self.num, reverse=True):
            c = self.num[k]
            mono = "*".join(
                (v if a == 1 else f"{v}^{a}") for v, a in zip(self.vars, k) if a
            )
            cs = str(c)
            if not mono:
                t = f"({cs})" if not _atomic(cs) else cs
            elif c == ONE:
                t = mono
            elif c == -ONE:
                t = "-" + mono
            else:
                t = f"({cs})*{mono}"
            if out and not t.startswith("-"):
                t = "+" + t
            out.append(t)
        return "".join(out)

    def den_list(self) -> list[tuple[int, int, int]]:
        """[(i, j, e)] with 1-based indices; j is negated for (z_i - z_j)."""
        return [(i + 1, (j + 1) * s, e) for (i, j, s), e in sorted(self.den.items())]

    def __str__(self):
        return f"[{self.numerator_str()}] / {self.den_list()}"

    def __repr__(self):
        return f"SymRat(vars={self.vars}, {self})"

    def to_json(self) -> dict:
        return {"vars": list(self.vars), "num": self.numerator_str(),
                "den": [list(t) for t in self.den_list()]}

    @classmethod
    def from_json(cls, obj: dict) -> "SymRat":
        vars = tuple(obj["vars"])
        num = parse_symrat_numerator(obj["num"], vars)
        den = {}
        for i, j, e in obj["den"]:
            den[pair_factor(i - 1, abs(j) - 1, 1 if j > 0 else -1)] = e
        return SymRat(vars, num.num, den)


def _atomic(s: str) -> bool:
    return re.fullmatch(r"-?[0-9/]+|i|-i|[0-9/]+\*i", s) is not None


def _factor_pairs(o: SymRat):
    """Try to write o = c * mono * prod pairs (only used for division)."""
    num = o.num
    pairs: dict[PairKey, int] = {}
    n = len(o.vars)
    changed = True
    while len(num) > 1 and changed:
        changed = False
        for i, j in itertools.combinations(range(n), 2):
            for s in (1, -1):
                q = _pdiv_factor(num, i, j, s)
                if q is not None:
                    num = q
                    pairs[(i, j, s)] = pairs.get((i, j, s), 0) + 1
                    changed = True
                    break
            if changed:
                break
    if len(num) != 1:
        return None
    return next(iter(num.items())), pairs


def parse_symrat_numerator(text: str, vars: tuple[str, ...]) -> SymRat:
    names = {v: i for i, v in enumerate(vars)}

    def atom(name: str):
        if name in names:
            return SymRat.var(vars, name)
        if name in ("v", "u", "i", "q"):
            return SymRat.const(vars, parse_ring(name))
        raise KeyError(name)

    return parse_expression(text, atom, lambda k: SymRat.const(vars, k))


def sym_arith(op: str, f: SymRat, g) -> SymRat:
    if isinstance(g, SymRat) and f.vars != g.vars:
        raise SymAlgError(f"mismatched variables: {f.vars} vs {g.vars}")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "div":
        return f / g
    raise SymAlgError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# symmetric polynomials


def _count_assignments(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    """Number of maps parts(lam) -> rows(mu) with row sums equal to mu."""

    @lru_cache(maxsize=None)
    def go(i: int, rem: tuple[int, ...]) -> int:
        if i == len(lam):
            return 1 if not any(rem) else 0
        total = 0
        for r, x in enumerate(rem):
            if x >= lam[i]:
                nr = rem[:r] + (x - lam[i],) + rem[r + 1:]
                total += go(i + 1, nr)
        return total

    return go(0, tuple(mu))


@lru_cache(maxsize=None)
def p_to_m_matrix(n: int) -> dict[Partition, dict[Partition, int]]:
    """p_lam = sum_mu R[lam][mu] m_mu for |lam| = n."""
    out = {}
    for lam in partitions(n):
        row = {}
        for mu in partitions(n):
            c = _count_assignments(tuple(lam), tuple(mu))
            if c:
                row[mu] = c
        out[lam] = row
    return out


@lru_cache(maxsize=None)
def m_to_p_matrix(n: int) -> dict[Partition, dict[Partition, Fraction]]:
    """m_mu = sum_lam Rinv[mu][lam] p_lam; the p->m matrix is triangular under dominance."""
    parts = partitions(n)  # reverse lex refines dominance: p_lam only hits mu >= lam
    R = p_to_m_matrix(n)
    inv: dict[Partition, dict[Partition, Fraction]] = {}
    # m_mu = (p_mu - sum_{nu > mu} R[mu][nu] m_nu) / R[mu][mu]; process mu from the top
    for mu in parts:
        row: dict[Partition, Fraction] = {mu: Fraction(1, R[mu][mu])}
        for nu, c in R[mu].items():
            if nu == mu:
                continue
            for lam, x in inv[nu].items():
                row[lam] = row.get(lam, Fraction(0)) - Fraction(c, R[mu][mu]) * x
        inv[mu] = {k: x for k, x in row.items() if x}
    return inv


def _distinct_perms(parts: tuple[int, ...], n: int) -> Iterable[tuple[int, ...]]:
    padded = tuple(parts) + (0,) * (n - len(parts))
    return set(itertools.permutations(padded))


@dataclass(frozen=True)
class SymPoly:
    """Symmetric polynomial; basis in {'monomial', 'powersum', 'expanded'}."""

    nvars: int
    basis: str
    terms: tuple  # sorted tuple of (key, RingElem)

    @staticmethod
    def make(nvars: int, basis: str, terms: Mapping) -> "SymPoly":
        if basis not in ("monomial", "powersum", "expanded"):
            raise SymAlgError(f"unknown basis {basis!r}")
        clean = {}
        for k, c in terms.items():
            c = RingElem.coerce(c)
            if c.is_zero():
                continue
            k = Partition.sorted(k) if basis != "expanded" else tuple(k)
            if basis == "expanded" and len(k) != nvars:
                raise SymAlgError("expanded monomial length mismatch")
            if basis == "monomial" and len(k) > nvars:
                continue
            prev = clean.get(k)
            c = c if prev is None else prev + c
            if c.is_zero():
                clean.pop(k, None)
            else:
                clean[k] = c
        return SymPoly(nvars, basis, tuple(sorted(clean.items(), key=lambda kc: (sum(kc[0]), kc[0]), reverse=True)))

    @property
    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree_set(self) -> set[int]:
        return {sum(k) for k, _ in self.terms}

    def __add__(self, o: "SymPoly") -> "SymPoly":
        o = basis_convert(o, self.basis) if o.basis != self.basis else o
        d = self.as_dict
        for k, c in o.terms:
            d[k] = d.get(k, ZERO) + c
        return SymPoly.make(self.nvars, self.basis, d)

    def __neg__(self):
        return SymPoly(self.nvars, self.basis, tuple((k, -c) for k, c in self.terms))

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c) -> "SymPoly":
        c = RingElem.coerce(c)
        return SymPoly.make(self.nvars, self.basis, {k: x * c for k, x in self.terms})

    def __mul__(self, o):
        if not isinstance(o, SymPoly):
            return self.scale(o)
        a = basis_convert(self, "powersum")
        b = basis_convert(o, "powersum")
        d: dict = {}
        for k1, c1 in a.terms:
            for k2, c2 in b.terms:
                k = Partition.sorted(k1 + k2)
                d[k] = d.get(k, ZERO) + c1 * c2
        return basis_convert(SymPoly.make(self.nvars, "powersum", d), self.basis)

    __rmul__ = scale

    def __eq__(self, o):
        if not isinstance(o, SymPoly):
            return NotImplemented
        if self.basis == o.basis and self.nvars == o.nvars:
            return self.terms == o.terms
        return basis_convert(self, "expanded").terms == basis_convert(o, "expanded").terms

    def __hash__(self):
        return hash((self.nvars, self.basis, str(self)))

    def coefficient(self, key) -> RingElem:
        key = Partition.sorted(key) if self.basis != "expanded" else tuple(key)
        return self.as_dict.get(key, ZERO)

    def __str__(self):
        sym = {"monomial": "m", "powersum": "p", "expanded": "x"}[self.basis]
        if not self.terms:
            return "0"
        out = []
        for k, c in self.terms:
            if self.basis == "expanded":
                mono = "*".join(f"x{i + 1}" + (f"^{a}" if a != 1 else "") for i, a in enumerate(k) if a) or "1"
            else:
                mono = sym + "[" + ",".join(map(str, k)) + "]"
            out.append(f"({c})*{mono}")
        return " + ".join(out)

    def to_json(self) -> dict:
        return {"nvars": self.nvars, "basis": self.basis,
                "terms": [{"key": list(k), "coeff": str(c)} for k, c in self.terms]}

    # -- constructors --------------------------------------------------------
    @staticmethod
    def p(nvars: int, *parts: int) -> "SymPoly":
        return SymPoly.make(nvars, "powersum", {Partition.sorted(parts): ONE})

    @staticmethod
    def m(nvars: int, *parts: int) -> "SymPoly":
        return SymPoly.make(nvars, "monomial", {Partition.sorted(parts): ONE})


def basis_convert(P: SymPoly, target: str) -> SymPoly:
    if target == P.basis:
        return P
    if P.basis == "expanded":
        # read off m-coefficients from sorted exponent vectors
        d = {}
        for k, c in P.terms:
            if list(k) == sorted(k, reverse=True):
                d[Partition.sorted(k)] = c
        m = SymPoly.make(P.nvars, "monomial", d)
        if basis_convert(m, "expanded").terms != P.terms:
            raise SymAlgError("expanded polynomial is not symmetric")
        return basis_convert(m, target)
    if target == "expanded":
        m = basis_convert(P, "monomial")
        d: dict = {}
        for k, c in m.terms:
            for e in _distinct_perms(tuple(k), P.nvars):
                d[e] = d.get(e, ZERO) + c
        return SymPoly.make(P.nvars, "expanded", d)
    if P.basis == "powersum" and target == "monomial":
        d = {}
        for lam, c in P.terms:
            for mu, x in p_to_m_matrix(sum(lam))[lam].items():
                d[mu] = d.get(mu, ZERO) + c * x
        return SymPoly.make(P.nvars, "monomial", d)
    if P.basis == "monomial" and target == "powersum":
        d = {}
        for mu, c in P.terms:
            for lam, x in m_to_p_matrix(sum(mu))[mu].items():
                d[lam] = d.get(lam, ZERO) + c * x
        return SymPoly.make(P.nvars, "powersum", d)
    raise SymAlgError(f"cannot convert {P.basis} -> {target}")
