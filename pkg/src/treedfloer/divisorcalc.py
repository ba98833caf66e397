"""Exact arithmetic for stabilizing divisors.

Covers the degree multipliers ``k'``, ``k''`` and ``k_m``, the weak
stabilization constant, area/intersection identities and the
sufficient-degree inequalities.  The irrational unit ``e`` is kept
symbolic; the ceiling ``ceil(t0*k*e)`` is resolved only when a rational
isolating interval for ``e`` is supplied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional


def _lcm_all(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


@dataclass(frozen=True)
class LatticePresentation:
    """Free part rank ``N``, torsion order ``t0``, boundary basis multiples ``n``.

    ``areas[i] = (p, m)`` stands for ``p + m*e``.  ``alpha`` lists the
    values of the connection form class on ``e_1 .. e_N``.
    """

    N: int
    t0: int
    n: tuple
    areas: tuple
    m0: int = 1
    alpha: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(x) for x in self.n))
        object.__setattr__(
            self, "areas", tuple((Fraction(p), Fraction(m)) for p, m in self.areas)
        )
        alpha = tuple(Fraction(a) for a in self.alpha) or (Fraction(0),) * self.N
        object.__setattr__(self, "alpha", alpha)
        if self.t0 < 1 or self.m0 < 1:
            raise ValueError("t0 and m0 must be positive")
        if any(x < 1 for x in self.n):
            raise ValueError("boundary multiples n_i must be >= 1")
        if len(self.areas) != len(self.n):
            raise ValueError("one area per boundary basis element")
        if len(self.n) > self.N:
            raise ValueError("boundary basis longer than the free rank N")
        if len(self.alpha) != self.N:
            raise ValueError("alpha must have N entries")

    @property
    def M(self) -> int:
        return len(self.n)

    @property
    def rational(self) -> bool:
        return all(m == 0 for _, m in self.areas)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "t0": self.t0,
            "n": list(self.n),
            "areas": [[str(p), str(m)] for p, m in self.areas],
            "m0": self.m0,
            "alpha": [str(a) for a in self.alpha],
        }

    @classmethod
    def from_json(cls, d: dict) -> "LatticePresentation":
        areas = []
        for a in d["areas"]:
            if isinstance(a, (list, tuple)):
                areas.append((Fraction(str(a[0])), Fraction(str(a[1]))))
            else:
                areas.append((Fraction(str(a)), Fraction(0)))
        return cls(
            int(d["N"]),
            int(d.get("t0", 1)),
            tuple(d["n"]),
            tuple(areas),
            int(d.get("m0", 1)),
            tuple(Fraction(str(a)) for a in d.get("alpha", [])),
        )


@dataclass(frozen=True)
class RationalMultipliers:
    k_prime: int
    residues: tuple
    k_double_prime: int
    k_m: int
    adjusted_alpha: tuple

    def to_json(self) -> dict:
        return {
            "k_prime": self.k_prime,
            "residues": [str(r) for r in self.residues],
            "k_double_prime": self.k_double_prime,
            "k_m": self.k_m,
            "adjusted_alpha": [str(a) for a in self.adjusted_alpha],
        }


def km_rational(p: LatticePresentation, k: int = 1) -> RationalMultipliers:
    """Degree multipliers for rational areas.

    ``k'`` is the least positive integer with ``t0*k*k'*w_i`` integral for
    all ``i``; the residues are ``r_i = (t0*k*k'/n_i) w_i mod 1``; ``k''``
    is the least positive integer with every ``k''*r_i`` integral and
    ``k_m = k' k''``.  The adjusted alpha is alpha plus the integral class
    that zeroes its values on ``e_1 .. e_M``.
    """
    if not p.rational:
        raise ValueError("non-rational area in rational mode")
    if k < 1:
        raise ValueError("k must be positive")
    ws = [a for a, _ in p.areas]
    k1 = _lcm_all((p.t0 * k * w).denominator for w in ws)
    residues = tuple((Fraction(p.t0 * k * k1, ni) * w) % 1 for ni, w in zip(p.n, ws))
    k2 = _lcm_all(r.denominator for r in residues)
    adjusted = []
    for i, a in enumerate(p.alpha):
        if i < p.M:
            if a.denominator != 1:
                raise ValueError(
                    f"alpha(e_{i + 1}) = {a} is not integral; it cannot be removed by an integral class"
                )
            adjusted.append(Fraction(0))
        else:
            adjusted.append(a)
    return RationalMultipliers(k1, residues, k2, k1 * k2, tuple(adjusted))


@dataclass(frozen=True)
class IrrationalMultipliers:
    k_m: int
    l: tuple
    ceiling: Optional[int]
    f: str
    intersections: tuple

    def to_json(self) -> dict:
        return {
            "k_m": self.k_m,
            "l": list(self.l),
            "ceiling": self.ceiling,
            "f": self.f,
            "intersections": list(self.intersections),
        }


def resolve_ceiling(t0k: int, interval: tuple) -> int:
    """``ceil(t0k * e)`` from a rational interval ``(lo, hi)`` with ``lo < e < hi``."""
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    if not lo < hi:
        raise ValueError("interval must satisfy lo < hi")
    a, b = t0k * lo, t0k * hi
    c = math.floor(a) + 1
    if c < b:
        raise ValueError("interval does not isolate ceil(t0*k*e); refine it")
    return c


def km_irrational(
    p: LatticePresentation, k: int = 1, e_interval: Optional[tuple] = None
) -> IrrationalMultipliers:
    """Degree multiplier for areas ``m_i * e`` with ``e`` irrational.

    ``k_m = lcm(n_i / gcd(n_i, m_i))`` makes ``l_i = k_m m_i / n_i``
    integral.  The intersection of ``n_i e_i`` with the divisor is
    ``m_i * k_m * C`` where ``C = ceil(t0*k*e)``; ``C`` stays symbolic
    unless ``e_interval`` pins it down.
    """
    ms = []
    for pp, m in p.areas:
        if pp != 0:
            raise ValueError("irrational mode expects areas of the form m*e")
        if m <= 0:
            raise ValueError("areas must be positive")
        if m.denominator != 1:
            raise ValueError("areas must be integer multiples of e after scaling")
        ms.append(int(m))
    km = _lcm_all(ni // math.gcd(ni, mi) for ni, mi in zip(p.n, ms))
    ls = tuple(km * mi // ni for ni, mi in zip(p.n, ms))
    t0k = p.t0 * k
    C = resolve_ceiling(t0k, e_interval) if e_interval is not None else None
    f = f"{t0k}*e - {C}" if C is not None else f"{t0k}*e - C"
    if C is not None:
        inters = tuple(str(mi * km * C) for mi in ms)
    else:
        inters = tuple(f"{mi * km}*C" for mi in ms)
    return IrrationalMultipliers(km, ls, C, f, inters)


@dataclass(frozen=True)
class WeakBound:
    C_beta: Fraction
    threshold: int
    holds: bool

    def to_json(self) -> dict:
        return {"C_beta": str(self.C_beta), "threshold": self.threshold, "holds": self.holds}


def weak_bound(t0, k, C_alpha, norm, theta, beta_norms) -> WeakBound:
    """``C = (1+theta)/(1-theta) max|beta_j|``; holds iff ``t0*k > C_alpha*norm*C``."""
    theta = Fraction(theta)
    C_alpha, norm = Fraction(C_alpha), Fraction(norm)
    if theta >= 1:
        raise ValueError("theta' must be < 1")
    if theta < 0 or C_alpha < 0 or norm < 0 or any(Fraction(b) < 0 for b in beta_norms):
        raise ValueError("inputs must be non-negative")
    bmax = max((Fraction(b) for b in beta_norms), default=Fraction(0))
    C_beta = (1 + theta) / (1 - theta) * bmax
    product = C_alpha * norm * C_beta
    # least integer k >= 1 with t0*k > product
    threshold = max(1, math.floor(product / t0) + 1)
    return WeakBound(C_beta, threshold, t0 * k > product)


def intersection_from_area(mode: str, area, *, m0=None, t0k=None, alpha_boundary=None) -> Fraction:
    area = Fraction(area)
    if mode == "exact":
        if m0 is None:
            raise ValueError("exact mode needs m0")
        return Fraction(m0) * area
    if mode == "twisted":
        if t0k is None or alpha_boundary is None:
            raise ValueError("twisted mode needs t0k and the boundary alpha value")
        return Fraction(t0k) * area - Fraction(alpha_boundary)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class ClassPairing:
    kind: str  # sphere | disk
    c1: int
    D: int
    omega: Fraction = Fraction(0)
    dim: int = 2
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("sphere", "disk"):
            raise ValueError("class kind is 'sphere' or 'disk'")
        if self.dim < 2 or self.dim % 2:
            raise ValueError("dim X must be an even integer >= 2")
        object.__setattr__(self, "omega", Fraction(self.omega))

    @classmethod
    def from_json(cls, d: dict) -> "ClassPairing":
        return cls(
            d["kind"], int(d["c1"]), int(d["D"]), Fraction(str(d.get("omega", 0))),
            int(d.get("dim", 2)), str(d.get("name", "")),
        )


def degree_ok(c: ClassPairing) -> bool:
    if c.kind == "sphere":
        return c.D >= 2 * c.c1 + c.dim + 1
    return c.D >= 1


def sufficient_degree(classes) -> list:
    """Classes failing the degree inequalities (empty list means ok)."""
    return [c for c in classes if not degree_ok(c)]


def divisor_sphere_dim(c: ClassPairing) -> int:
    """Expected dimension of spheres in the divisor: ``dim + 2 c1 - 2 D - 5``."""
    return c.dim + 2 * c.c1 - 2 * c.D - 5


def max_tangency(c: ClassPairing) -> int:
    return c.dim // 2 - 2 + c.c1


def three_point_conclusion(c: ClassPairing) -> bool:
    """Sufficient degree forces ``D > 2*mu``: at least three divisor intersection points."""
    return degree_ok(c) and c.D > 2 * max_tangency(c)


def maslov_cover_check(N: int, min_chern: int) -> bool:
    if N < 1:
        raise ValueError("N must be >= 1")
    return (2 * min_chern) % N == 0
