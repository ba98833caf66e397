"""Exact arithmetic in the universal Novikov field over Q.

Elements are finite sums ``sum a(rho) q**rho`` with rational coefficients
and rational exponents.  An element may carry an energy *cutoff* ``E``:
every term with exponent ``>= E`` is unknown and has been discarded, so
the element is only meaningful below ``E``.

Values are immutable and hashable.  Internally each term is stored as a
quadruple of integers ``(exp_num, exp_den, coeff_num, coeff_den)`` in
lowest terms with positive denominators; the public ``terms`` view
returns ``Fraction`` pairs.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

Rational = Union[int, Fraction]
INF = math.inf

__all__ = [
    "NovikovElement",
    "q",
    "nv_add",
    "nv_mul",
    "nv_invert_truncated",
    "nv_valuation",
]

_gcd = math.gcd


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("Novikov arithmetic is exact; got a float")
    return Fraction(x)


def _min_cutoff(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _qadd(n1, d1, n2, d2):
    """Sum of two reduced fractions, reduced."""
    g = _gcd(d1, d2)
    if g == 1:
        return n1 * d2 + n2 * d1, d1 * d2
    s = d1 // g
    t = n1 * (d2 // g) + n2 * s
    g2 = _gcd(t, g)
    return t // g2, s * (d2 // g2)


def _qmul(n1, d1, n2, d2):
    g1, g2 = _gcd(n1, d2), _gcd(n2, d1)
    return (n1 // g1) * (n2 // g2), (d1 // g2) * (d2 // g1)


def _below(en, ed, cutoff: Optional[Fraction]) -> bool:
    return cutoff is None or en * cutoff.denominator < cutoff.numerator * ed


def _sorted_terms(acc: dict, cutoff: Optional[Fraction] = None) -> tuple:
    """Terms ``{(en, ed): (an, ad)}`` as a sorted tuple, dropping zeros and exponents >= cutoff."""
    if not acc:
        return ()
    # exact integer sort key over the common denominator
    L = math.lcm(*(d for _, d in acc))
    keyed = sorted(
        (n * (L // d), n, d, c)
        for (n, d), c in acc.items()
        if c[0] and _below(n, d, cutoff)
    )
    return tuple((n, d, c[0], c[1]) for _, n, d, c in keyed)


class NovikovElement:
    """A finite Novikov series, optionally truncated at an energy cutoff."""

    __slots__ = ("_t", "_cutoff")

    def __init__(
        self,
        terms: Union[Mapping, Iterable, None] = None,
        cutoff: Optional[Rational] = None,
    ):
        c = None if cutoff is None else _frac(cutoff)
        acc: dict = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for exp, coeff in items:
                e, a = _frac(exp), _frac(coeff)
                key = (e.numerator, e.denominator)
                hit = acc.get(key)
                acc[key] = (a.numerator, a.denominator) if hit is None else _qadd(
                    hit[0], hit[1], a.numerator, a.denominator
                )
        self._t = _sorted_terms(acc, c)
        self._cutoff = c

    @classmethod
    def _raw(cls, t: tuple, cutoff: Optional[Fraction]) -> "NovikovElement":
        """Wrap integer terms already reduced, sorted, nonzero and below ``cutoff``."""
        obj = cls.__new__(cls)
        obj._t = t
        obj._cutoff = cutoff
        return obj

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls) -> "NovikovElement":
        return cls()

    @classmethod
    def one(cls) -> "NovikovElement":
        return cls({0: 1})

    @classmethod
    def monomial(cls, exponent: Rational, coeff: Rational = 1, cutoff=None):
        return cls({exponent: coeff}, cutoff)

    # -- accessors --------------------------------------------------------------

    @property
    def terms(self) -> tuple:
        """Pairs ``(exponent, coefficient)`` in strictly increasing exponent order."""
        return tuple((Fraction(en, ed), Fraction(an, ad)) for en, ed, an, ad in self._t)

    @property
    def cutoff(self) -> Optional[Fraction]:
        return self._cutoff

    def is_zero(self) -> bool:
        return not self._t

    def coefficient(self, exponent: Rational) -> Fraction:
        e = _frac(exponent)
        for en, ed, an, ad in self._t:
            if en == e.numerator and ed == e.denominator:
                return Fraction(an, ad)
        return Fraction(0)

    def valuation(self):
        return nv_valuation(self)

    def truncate(self, cutoff: Rational) -> "NovikovElement":
        c = _min_cutoff(self._cutoff, _frac(cutoff))
        return NovikovElement._raw(tuple(t for t in self._t if _below(t[0], t[1], c)), c)

    def without_cutoff(self) -> "NovikovElement":
        return NovikovElement._raw(self._t, None)

    def agrees_below(self, other: "NovikovElement", bound: Rational) -> bool:
        """True iff both elements have the same terms with exponent < ``bound``."""
        b = _frac(bound)
        return [t for t in self._t if _below(t[0], t[1], b)] == [
            t for t in other._t if _below(t[0], t[1], b)
        ]

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, NovikovElement):
            other = NovikovElement({0: other})
        return nv_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return NovikovElement._raw(tuple((en, ed, -an, ad) for en, ed, an, ad in self._t), self._cutoff)

    def __sub__(self, other):
        if not isinstance(other, NovikovElement):
            other = NovikovElement({0: other})
        return nv_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, NovikovElement):
            c = _frac(other)
            if c == 0:
                return NovikovElement._raw((), self._cutoff)
            out = []
            for en, ed, an, ad in self._t:
                pn, pd = _qmul(an, ad, c.numerator, c.denominator)
                out.append((en, ed, pn, pd))
            return NovikovElement._raw(tuple(out), self._cutoff)
        return nv_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, NovikovElement):
            if isinstance(other, (int, Fraction)):
                other = NovikovElement({0: other})
            else:
                return NotImplemented
        return self._t == other._t and self._cutoff == other._cutoff

    def __hash__(self):
        return hash((self._t, self._cutoff))

    def __bool__(self):
        return bool(self._t)

    def __repr__(self):
        return f"NovikovElement({self!s})"

    def __str__(self):
        if not self._t:
            body = "0"
        else:
            parts = []
            for e, a in self.terms:
                if e == 0:
                    parts.append(str(a))
                elif a == 1:
                    parts.append(f"q^{e}")
                else:
                    parts.append(f"{a}*q^{e}")
            body = " + ".join(parts)
        if self._cutoff is not None:
            body += f" (mod q^{self._cutoff})"
        return body

    # -- serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "terms": [list(t) for t in self._t],
            "cutoff": None
            if self._cutoff is None
            else [self._cutoff.numerator, self._cutoff.denominator],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "NovikovElement":
        raw = data.get("terms", [])
        exps = [Fraction(t[0], t[1]) for t in raw]
        if any(b <= a for a, b in zip(exps, exps[1:])):
            raise ValueError("exponents must be strictly increasing")
        if any(t[2] == 0 for t in raw):
            raise ValueError("stored coefficients must be nonzero")
        cut = data.get("cutoff")
        cutoff = None if cut is None else Fraction(cut[0], cut[1])
        if cutoff is not None and exps and exps[-1] >= cutoff:
            raise ValueError("stored exponent at or above the cutoff")
        return cls(((e, Fraction(t[2], t[3])) for e, t in zip(exps, raw)), cutoff)


def q(exponent: Rational = 1, coeff: Rational = 1) -> NovikovElement:
    """The monomial ``coeff * q**exponent``."""
    return NovikovElement({exponent: coeff})


def nv_valuation(x: NovikovElement):
    """Minimum exponent of ``x``; ``math.inf`` for zero."""
    if not x._t:
        return INF
    return Fraction(x._t[0][0], x._t[0][1])


def nv_add(x: NovikovElement, y: NovikovElement) -> NovikovElement:
    cutoff = _min_cutoff(x.cutoff, y.cutoff)
    a, b = x._t, y._t
    out = []
    i = j = 0
    # merge of two sorted term lists; exponents compared by cross-multiplying
    while i < len(a) and j < len(b):
        ta, tb = a[i], b[j]
        lhs, rhs = ta[0] * tb[1], tb[0] * ta[1]
        if lhs < rhs:
            out.append(ta)
            i += 1
        elif rhs < lhs:
            out.append(tb)
            j += 1
        else:
            cn, cd = _qadd(ta[2], ta[3], tb[2], tb[3])
            if cn:
                out.append((ta[0], ta[1], cn, cd))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    if cutoff is not None:
        out = [t for t in out if _below(t[0], t[1], cutoff)]
    return NovikovElement._raw(tuple(out), cutoff)


def nv_mul(x: NovikovElement, y: NovikovElement) -> NovikovElement:
    cutoff = None
    vx, vy = nv_valuation(x), nv_valuation(y)
    if x.cutoff is not None and vy != INF:
        cutoff = x.cutoff + vy
    if y.cutoff is not None and vx != INF:
        cutoff = _min_cutoff(cutoff, y.cutoff + vx)
    if x.cutoff is not None and y.cutoff is not None:
        # product of the two unknown tails; only binding when a known part is zero
        cutoff = _min_cutoff(cutoff, x.cutoff + y.cutoff)
    acc: dict = {}
    for en1, ed1, an1, ad1 in x._t:
        for en2, ed2, an2, ad2 in y._t:
            en, ed = _qadd(en1, ed1, en2, ed2)
            if not _below(en, ed, cutoff):
                continue
            pn, pd = _qmul(an1, ad1, an2, ad2)
            key = (en, ed)
            hit = acc.get(key)
            acc[key] = (pn, pd) if hit is None else _qadd(hit[0], hit[1], pn, pd)
    return NovikovElement._raw(_sorted_terms(acc), cutoff)


def nv_invert_truncated(x: NovikovElement, E: Rational) -> NovikovElement:
    """Inverse of ``x`` accurate to relative precision ``E``.

    With ``x = a q^v (1 + h)`` the result is ``a^-1 q^-v sum (-h)^k`` with
    the geometric series cut at relative exponent ``E``.  The returned
    cutoff is ``E - v`` (tightened by any cutoff already on ``x``), so that
    ``x * inverse`` equals ``1`` below the propagated cutoff.
    """
    if x.is_zero():
        raise ZeroDivisionError("zero has no inverse")
    E = _frac(E)
    terms = x.terms
    v, a = terms[0]
    rel = E if x.cutoff is None else min(E, x.cutoff - v)
    if rel <= 0:
        raise ValueError("cutoff leaves no known terms of the inverse")
    h = [(e - v, c / a) for e, c in terms[1:] if e - v < rel]
    series: dict[Fraction, Fraction] = {Fraction(0): Fraction(1)}
    power: dict[Fraction, Fraction] = {Fraction(0): Fraction(1)}
    while power:
        nxt: dict[Fraction, Fraction] = {}
        for e1, c1 in power.items():
            for e2, c2 in h:
                e = e1 + e2
                if e < rel:
                    nxt[e] = nxt.get(e, Fraction(0)) - c1 * c2
        power = {e: c for e, c in nxt.items() if c != 0}
        for e, c in power.items():
            series[e] = series.get(e, Fraction(0)) + c
    inv_a = 1 / a
    return NovikovElement(((e - v, c * inv_a) for e, c in series.items()), rel - v)
