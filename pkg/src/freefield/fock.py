"""Fock modules of the Heisenberg algebra d^+-_k, the algebra A and its representations.

Kets are polynomials in the creation operators x^-_k = d^-_{-k}, x^+_k = d^+_{-k}
acting on |1>_a; the annihilators act as derivations,

    d^-_k = k A^-_k d/dx^+_k,    d^+_k = k A^+_k d/dx^-_k    (k > 0).

Bras are treated the same way with the roles of the signs of k exchanged.
A monomial key is a pair of partitions (mu_minus, mu_plus).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import flint
from typing import Callable, Iterable, Mapping

from .coeffring import (ONE, ZERO, GaussRational, RingElem, U, V, A,
                        parse_ring, u_mn)
from .symalg import Partition, partitions
from ._parse import parse_expression

__all__ = [
    "Weight", "FockVector", "AElement", "FockError", "Key",
    "apply_mode", "apply_D", "a_rep_apply", "pairing", "is_A_vector",
    "solve_A_representation", "a_subspace_dim", "transpose", "vacuum", "fock_basis", "ket_monomial",
    "parse_aelement",
]


class FockError(ValueError):
    pass


Key = tuple[Partition, Partition]
_EMPTY = Partition()


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class Weight:
    """Vacuum weight. Generic: u_eff = u^s (-v^-2)^j. Special (m, n): u_eff = i^n v^(n-m)."""

    kind: str = "generic"
    s: int = 1
    j: int = 0
    m: int = 0
    n: int = 0

    @staticmethod
    def generic(s: int = 1, j: int = 0) -> "Weight":
        if s not in (1, -1):
            raise FockError("generic weight sign must be +1 or -1")
        return Weight("generic", s, j)

    @staticmethod
    def special(m: int, n: int) -> "Weight":
        return Weight("special", 1, 0, m, n)

    @property
    def is_special(self) -> bool:
        return self.kind == "special"

    def u_eff(self) -> RingElem:
        if self.is_special:
            c, p = u_mn(self.m, self.n)
            return RingElem(c) * V ** p
        return U ** self.s * (-(V ** -2)) ** self.j

    def shift(self, j: int = 1) -> "Weight":
        """Apply j delta-shifts: a -> a + j (r - 1)."""
        if self.is_special:
            return Weight.special(self.m, self.n - 2 * j)
        return Weight.generic(self.s, self.j + j)

    def neg(self) -> "Weight":
        """a -> -a."""
        if self.is_special:
            return Weight.special(-self.m, -self.n)
        return Weight.generic(-self.s, -self.j)

    def specialize(self, x: RingElem) -> RingElem:
        """Rewrite a generic-u coefficient at this weight (u -> u_eff for generic labels)."""
        if self.is_special:
            c, p = u_mn(self.m, self.n)
            return x.subs_u(c, p, 0)
        return x.subs_u(GaussRational((-1) ** (self.j % 2)), -2 * self.j, self.s)

    def __str__(self):
        if self.is_special:
            return f"({self.m},{self.n})"
        base = "a" if self.s == 1 else "-a"
        return base if not self.j else f"{base}{self.j:+d}(r-1)"


# ---------------------------------------------------------------------------
# A-elements


def _add_into(d: dict, k, c: RingElem) -> None:
    x = d.get(k)
    x = c if x is None else x + c
    if x.is_zero():
        d.pop(k, None)
    else:
        d[k] = x


class AElement:
    """Polynomial in c_{-1}, c_{-2}, ... ; keys are partitions lambda for c_{-lambda}."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Iterable[int], RingElem] | None = None):
        d: dict[Partition, RingElem] = {}
        for k, c in (terms or {}).items():
            _add_into(d, Partition.sorted(k), RingElem.coerce(c))
        self.terms = d

    @staticmethod
    def one() -> "AElement":
        return AElement({(): ONE})

    @staticmethod
    def c(*ks: int) -> "AElement":
        return AElement({tuple(ks): ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def levels(self) -> set[int]:
        return {sum(k) for k in self.terms}

    def homogeneous(self, level: int) -> "AElement":
        return AElement({k: c for k, c in self.terms.items() if sum(k) == level})

    def _coerce(self, o) -> "AElement":
        if isinstance(o, AElement):
            return o
        return AElement({(): RingElem.coerce(o)})

    def __add__(self, o):
        o = self._coerce(o)
        d = dict(self.terms)
        for k, c in o.terms.items():
            _add_into(d, k, c)
        return AElement(d)

    __radd__ = __add__

    def __neg__(self):
        return AElement({k: -c for k, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, AElement):
            c = RingElem.coerce(o)
            if c is NotImplemented:
                return NotImplemented
            return AElement({k: x * c for k, x in self.terms.items()})
        d: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in o.terms.items():
                _add_into(d, Partition.sorted(k1 + k2), c1 * c2)
        return AElement(d)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, AElement):
            if set(o.terms) != {_EMPTY}:
                raise FockError("division only by constants")
            o = o.terms[_EMPTY]
        return self * RingElem.coerce(o).inverse()

    def __pow__(self, e: int):
        if e < 0:
            if set(self.terms) != {_EMPTY}:
                raise FockError("negative powers are defined only for constants")
            return AElement({_EMPTY: self.terms[_EMPTY] ** e})
        r = AElement.one()
        for _ in range(e):
            r = r * self
        return r

    def __eq__(self, o):
        if not isinstance(o, AElement):
            o = self._coerce(o)
        return self.terms == o.terms

    def __hash__(self):
        return hash(str(self))

    def map_coeffs(self, fn: Callable[[RingElem], RingElem]) -> "AElement":
        return AElement({k: fn(c) for k, c in self.terms.items()})

    def ratio_to(self, other: "AElement") -> RingElem | None:
        """Scalar c with self = c * other, or None."""
        if other.is_zero():
            return None if not self.is_zero() else ZERO
        if set(self.terms) != set(other.terms):
            return None
        it = iter(other.terms)
        k0 = next(it)
        c = self.terms[k0] / other.terms[k0]
        for k in other.terms:
            if self.terms[k] != c * other.terms[k]:
                return None
        return c

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for k in sorted(self.terms, key=lambda p: (sum(p), p), reverse=True):
            c = self.terms[k]
            mono = "*".join(f"c{p}" + (f"^{e}" if e > 1 else "") for p, e in sorted(k.multiplicities().items()))
            cs = str(c)
            if not mono:
                t = f"({cs})"
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

    def __repr__(self):
        return f"AElement({self})"

    def to_json(self) -> str:
        return str(self)


def parse_aelement(text: str) -> AElement:
    """Parse ``c1^2*c2 + 3*c4`` (cK means c_{-K}); coefficients may use v, u, i, q."""

    def atom(name: str):
        if len(name) > 1 and name[0] == "c" and name[1:].isdigit():
            k = int(name[1:])
            if k <= 0:
                raise KeyError(name)
            return AElement.c(k)
        if name in ("v", "u", "i", "q"):
            return AElement({(): parse_ring(name)})
        raise KeyError(name)

    return parse_expression(text, atom, lambda k: AElement({(): RingElem(k)}))


# ---------------------------------------------------------------------------
# Fock vectors


def _remove_one(p: Partition, k: int) -> Partition:
    lst = list(p)
    lst.remove(k)
    return Partition(lst)


def _insert(p: Partition, k: int) -> Partition:
    return Partition.sorted(tuple(p) + (k,))


class FockVector:
    """Finite combination of monomials over a weight-tagged vacuum."""

    __slots__ = ("side", "weight", "terms")

    def __init__(self, side: str, weight: Weight, terms: Mapping[Key, RingElem] | None = None):
        if side not in ("ket", "bra"):
            raise FockError(f"side must be 'ket' or 'bra', got {side!r}")
        self.side = side
        self.weight = weight
        d: dict[Key, RingElem] = {}
        for (a, b), c in (terms or {}).items():
            _add_into(d, (Partition.sorted(a), Partition.sorted(b)), RingElem.coerce(c))
        self.terms = d

    @staticmethod
    def _raw(side: str, weight: Weight, terms: dict) -> "FockVector":
        v = FockVector.__new__(FockVector)
        v.side, v.weight, v.terms = side, weight, terms
        return v

    def is_zero(self) -> bool:
        return not self.terms

    def levels(self) -> set[int]:
        return {sum(a) + sum(b) for a, b in self.terms}

    def level(self) -> int:
        ls = self.levels()
        if len(ls) > 1:
            raise FockError(f"vector is not homogeneous: levels {sorted(ls)}")
        return ls.pop() if ls else 0

    def homogeneous(self, level: int) -> "FockVector":
        return FockVector._raw(self.side, self.weight,
                               {k: c for k, c in self.terms.items() if sum(k[0]) + sum(k[1]) == level})

    def _check(self, o: "FockVector") -> None:
        if o.side != self.side or o.weight != self.weight:
            raise FockError(f"incompatible vectors: {self.side}@{self.weight} vs {o.side}@{o.weight}")

    def __add__(self, o: "FockVector"):
        if o.side != self.side:
            raise FockError("cannot add a bra and a ket")
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        self._check(o)
        d = dict(self.terms)
        for k, c in o.terms.items():
            _add_into(d, k, c)
        return FockVector._raw(self.side, self.weight, d)

    def __neg__(self):
        return FockVector._raw(self.side, self.weight, {k: -c for k, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, c):
        c = RingElem.coerce(c)
        if c is NotImplemented:
            return NotImplemented
        if c.is_zero():
            return FockVector._raw(self.side, self.weight, {})
        return FockVector._raw(self.side, self.weight, {k: x * c for k, x in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, o):
        if not isinstance(o, FockVector):
            return NotImplemented
        if self.is_zero() and o.is_zero():
            return self.side == o.side
        return self.side == o.side and self.weight == o.weight and self.terms == o.terms

    def __hash__(self):
        return hash((self.side, self.weight, str(self)))

    def map_coeffs(self, fn: Callable[[RingElem], RingElem]) -> "FockVector":
        d: dict = {}
        for k, c in self.terms.items():
            x = fn(c)
            if not x.is_zero():
                d[k] = x
        return FockVector._raw(self.side, self.weight, d)

    def with_weight(self, w: Weight) -> "FockVector":
        return FockVector._raw(self.side, w, dict(self.terms))

    def specialize(self) -> "FockVector":
        """Substitute the weight's u_eff into coefficients (generic labels -> u-form)."""
        return self.map_coeffs(self.weight.specialize)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), key=lambda kc: (sum(kc[0][0]) + sum(kc[0][1]), kc[0]), reverse=True):
            if self.side == "ket":
                ops = "".join(f"d-[{-k}]" for k in a) + "".join(f"d+[{-k}]" for k in b)
                parts.append(f"({c})*{ops or ''}|{self.weight}>")
            else:
                ops = "".join(f"d-[{k}]" for k in a) + "".join(f"d+[{k}]" for k in b)
                parts.append(f"({c})*<{self.weight}|{ops}")
        return " + ".join(parts)

    def __repr__(self):
        return f"FockVector({self})"

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "weight": str(self.weight),
            "terms": [
                {"mu_minus": list(a), "mu_plus": list(b), "coeff": str(c)}
                for (a, b), c in sorted(self.terms.items(), key=lambda kc: (sum(kc[0][0]) + sum(kc[0][1]), kc[0]), reverse=True)
            ],
        }


def vacuum(side: str = "ket", weight: Weight | None = None) -> FockVector:
    return FockVector(side, weight or Weight.generic(), {(_EMPTY, _EMPTY): ONE})


def ket_monomial(mu_minus: Iterable[int], mu_plus: Iterable[int], weight: Weight | None = None,
                 side: str = "ket") -> FockVector:
    return FockVector(side, weight or Weight.generic(), {(tuple(mu_minus), tuple(mu_plus)): ONE})


@lru_cache(maxsize=None)
def fock_basis(level: int) -> tuple[Key, ...]:
    """All monomial keys (mu_minus, mu_plus) of the given level."""
    out = []
    for a in range(level, -1, -1):
        for pm in partitions(a):
            for pp in partitions(level - a):
                out.append((pm, pp))
    return tuple(out)


# ---------------------------------------------------------------------------
# mode actions


def _create(terms: dict, nu: int, k: int) -> dict:
    """Multiply by the creation variable of sign nu and positive index k."""
    out: dict = {}
    for (a, b), c in terms.items():
        key = (_insert(a, k), b) if nu < 0 else (a, _insert(b, k))
        _add_into(out, key, c)
    return out


def _derive(terms: dict, nu: int, k: int, scale: RingElem) -> dict:
    """scale * d/dx^nu_k."""
    out: dict = {}
    for (a, b), c in terms.items():
        p = a if nu < 0 else b
        mult = p.count(k)
        if not mult:
            continue
        key = (_remove_one(a, k), b) if nu < 0 else (a, _remove_one(b, k))
        _add_into(out, key, c * scale * mult)
    return out


def _nu(nu) -> int:
    if nu in ("-", -1):
        return -1
    if nu in ("+", 1):
        return 1
    raise FockError(f"mode sign must be '-' or '+', got {nu!r}")


def apply_mode(nu, k: int, v: FockVector) -> FockVector:
    """d^nu_k acting on a ket (from the left) or a bra (from the right)."""
    nu = _nu(nu)
    if k == 0:
        raise FockError("zero mode is the weight operator, not a Heisenberg mode")
    if v.side == "ket":
        if k < 0:
            return FockVector._raw("ket", v.weight, _create(v.terms, nu, -k))
        # d^-_k = k A^-_k d/dx^+_k ; d^+_k = k A^+_k d/dx^-_k
        return FockVector._raw("ket", v.weight, _derive(v.terms, -nu, k, k * A(nu, k)))
    if k > 0:
        return FockVector._raw("bra", v.weight, _create(v.terms, nu, k))
    kk = -k
    # <..| d^-_{-k}: removes d^+_k with [d^+_k, d^-_{-k}] = k A^+_k
    return FockVector._raw("bra", v.weight, _derive(v.terms, -nu, kk, kk * A(-nu, kk)))


def apply_D(k: int, v: FockVector) -> FockVector:
    """D_k = d^-_k + (-1)^k d^+_k."""
    return apply_mode(-1, k, v) + apply_mode(1, k, v) * ((-1) ** (k % 2))


def _pi_gen(side: str, k: int, v: FockVector) -> FockVector:
    """pi(c_{-k}) = (d^-_k - d^+_k)/A^+_k, barpi(c_{-k}) = (d^-_{-k} - d^+_{-k})/A^+_k."""
    kk = k if side == "pi" else -k
    return (apply_mode(-1, kk, v) - apply_mode(1, kk, v)) * A(1, k).inverse()


def a_rep_apply(side: str, h: AElement, v: FockVector) -> FockVector:
    """pi(h) (bras, right action) or barpi(h) (kets, left action); generators commute."""
    if side not in ("pi", "barpi"):
        raise FockError("side must be 'pi' or 'barpi'")
    total = FockVector._raw(v.side, v.weight, {})
    for lam, c in h.terms.items():
        w = v
        for k in lam:
            w = _pi_gen(side, k, w)
        total = total + w * c
    return total


def pairing(b: FockVector, k: FockVector) -> RingElem:
    """<b|k> with <1|1> = 1; the weights must agree."""
    if b.side != "bra" or k.side != "ket":
        raise FockError("pairing needs (bra, ket)")
    if b.weight != k.weight and not (b.is_zero() or k.is_zero()):
        raise FockError(f"weight mismatch: bra at {b.weight}, ket at {k.weight}")
    total = ZERO
    for (bm, bp), cb in b.terms.items():
        ck = k.terms.get((bp, bm))
        if ck is None:
            continue
        total = total + cb * ck * _pair_norm(bm, bp)
    return total


@lru_cache(maxsize=None)
def _pair_norm(bm: Partition, bp: Partition) -> RingElem:
    """<1| prod d^-_{bm} prod d^+_{bp} prod d^-_{-bp} prod d^+_{-bm} |1>."""
    r = ONE
    for p, sgn in ((bm, -1), (bp, 1)):
        for k, e in p.multiplicities().items():
            r = r * (k * A(sgn, k)) ** e * factorial(e)
    return r


def transpose(v: FockVector) -> FockVector:
    """(d^+-_k)^T = -d^-+_{-k}; bra <-> ket and a -> -a."""
    d = {}
    for (a, b), c in v.terms.items():
        sign = -1 if (len(a) + len(b)) % 2 else 1
        d[(b, a)] = c if sign == 1 else -c
    return FockVector._raw("bra" if v.side == "ket" else "ket", v.weight.neg(), d)


def is_A_vector(v: FockVector, weak_s: tuple[int, int, int] | None = None) -> bool:
    """True iff D_k v = 0 (kets) or <v|D_{-k} = 0 (bras) for 0 < k <= level(v).

    With weak_s = (m, n, s) the test is Q^(s) D_k v = 0 on the module (m, n)."""
    if v.is_zero():
        return True
    top = max(v.levels())
    for k in range(1, top + 1):
        w = apply_D(k, v) if v.side == "ket" else apply_D(-k, v)
        if weak_s is not None:
            from .screenings import build_op
            m, n, s = weak_s
            w = build_op("Qbar", m, n, s).apply(w if v.side == "ket" else transpose(w))
        if not w.is_zero():
            return False
    return True


def solve_A_representation(v: FockVector) -> AElement:
    """h with barpi(h)|1> = v (kets) or <1|pi(h) = v (bras)."""
    if v.side == "bra":
        return solve_A_representation(transpose(v))
    h: dict[Partition, RingElem] = {}
    for (a, b), c in v.terms.items():
        if not b:
            r = c
            for k in a:
                r = r * A(1, k)
            h[a] = r
    res = AElement(h)
    check = a_rep_apply("barpi", res, vacuum("ket", v.weight))
    if check != v:
        raise FockError("vector is not in the A-subspace")
    return res


def a_subspace_dim(level: int, v0: Fraction = Fraction(3, 7)) -> int:
    """dim of the A-subspace at a level: the common kernel of D_1..D_level on kets.

    The rank is taken at a rational v0, which can only lower it, so the kernel there
    bounds the generic one from above; the p(level) independent vectors barpi(c_lam)|1>
    bound it from below, hence equality with p(level) settles the generic value."""
    cols = fock_basis(level)
    rows: list[tuple[int, Key]] = [(k, key) for k in range(1, level + 1) for key in fock_basis(level - k)]
    if not cols:
        return 0
    if not rows:
        return len(cols)
    index = {r: i for i, r in enumerate(rows)}
    M = flint.fmpq_mat(len(rows), len(cols))
    for j, key in enumerate(cols):
        e = FockVector("ket", Weight.generic(), {key: ONE})
        for k in range(1, level + 1):
            for k2, c in apply_D(k, e).terms.items():
                x = c.eval_v(v0)
                M[index[(k, k2)], j] = flint.fmpq(x.re.numerator, x.re.denominator)
    return len(cols) - M.rank()
