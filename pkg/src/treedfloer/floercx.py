"""Floer cochain complex over the Novikov field and the cell-level proof of d^2 = 0.

The coboundary is assembled from index-one trajectory records.  Index-two
data is given as a one-dimensional cell complex whose zero-cells are
boundary configurations: strip breakings, disk bubbles at infinity and
fake (length-zero) boundary points.  Verification runs two independent
routes and compares them:

* algebraic: ``d o d`` computed in the Novikov field must vanish;
* geometric: the boundary of the weighted fundamental class, after fake
  pairs and involution pairs cancel, must be exactly the set of broken
  trajectories ``u1 # u2`` with the expected coefficients.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from treedfloer.adapted import LabeledType, index as type_index
from treedfloer.novikov import NovikovElement

ZERO_CELL_KINDS = ("true_strip", "true_bubble", "fake_plus", "fake_minus")


def sigma(marks) -> Fraction:
    """``1 / prod(m!)`` over the marking counts."""
    d = 1
    for m in marks:
        d *= math.factorial(m)
    return Fraction(1, d)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


@dataclass(frozen=True)
class IntersectionPoint:
    id: str
    degree: int = 0


@dataclass(frozen=True)
class TrajectoryRecord:
    id: str
    x_plus: str
    x_minus: str
    energy: Fraction
    sign: int
    marks: tuple = (0, 0, 0)
    index: int = 1
    type: Optional[LabeledType] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "energy", _frac(self.energy))
        object.__setattr__(self, "marks", tuple(int(m) for m in self.marks))
        if self.sign not in (1, -1):
            raise ValueError(f"record {self.id}: sign must be +1 or -1")
        if self.energy < 0:
            raise ValueError(f"record {self.id}: energy must be non-negative")
        if any(m < 0 for m in self.marks):
            raise ValueError(f"record {self.id}: marking counts must be non-negative")
        if self.type is not None:
            if type_index(self.type) != self.index:
                raise ValueError(f"record {self.id}: type index differs from record index")
            if self.type.energy != self.energy:
                raise ValueError(f"record {self.id}: energy differs from the type's total energy")

    @property
    def sigma(self) -> Fraction:
        return sigma(self.marks)

    def weight(self, cutoff=None) -> NovikovElement:
        return NovikovElement({self.energy: self.sign * self.sigma}, cutoff)

    def to_json(self) -> dict:
        d = {
            "id": self.id,
            "x_plus": self.x_plus,
            "x_minus": self.x_minus,
            "energy": str(self.energy),
            "sign": self.sign,
            "marks": list(self.marks),
            "index": self.index,
        }
        if self.type is not None:
            d["type"] = self.type.to_json()
        return d

    @classmethod
    def from_json(cls, d: dict) -> "TrajectoryRecord":
        typ = LabeledType.from_json(d["type"]) if d.get("type") else None
        return cls(
            d["id"], d["x_plus"], d["x_minus"], _frac(d["energy"]), int(d["sign"]),
            tuple(d.get("marks", (0, 0, 0))), int(d.get("index", 1)), typ,
        )


# ---------------------------------------------------------------------------
# coboundary


@dataclass(frozen=True)
class Coboundary:
    """Sparse matrix ``(x_minus, x_plus) -> NovikovElement``, every entry cut at ``cutoff``."""

    points: tuple
    entries: dict
    cutoff: Fraction

    def entry(self, x_minus: str, x_plus: str) -> NovikovElement:
        return self.entries.get((x_minus, x_plus), NovikovElement(cutoff=self.cutoff))

    def nonzero(self) -> list:
        return sorted((k, v) for k, v in self.entries.items() if not v.is_zero())

    def __add__(self, other: "Coboundary") -> "Coboundary":
        keys = set(self.entries) | set(other.entries)
        ent = {k: self.entry(*k) + other.entry(*k) for k in keys}
        return Coboundary(self.points, ent, min(self.cutoff, other.cutoff))

    def equals(self, other: "Coboundary") -> bool:
        keys = set(self.entries) | set(other.entries)
        return all(self.entry(*k) == other.entry(*k) for k in keys)

    def compose(self, other: "Coboundary") -> "Coboundary":
        """``self o other``: apply ``other`` first."""
        cols = defaultdict(list)
        for (xm, xp), v in other.entries.items():
            if not v.is_zero():
                cols[xp].append((xm, v))
        rows = defaultdict(list)
        for (xm, xp), v in self.entries.items():
            if not v.is_zero():
                rows[xp].append((xm, v))
        cutoff = min(self.cutoff, other.cutoff)
        out: dict = {}
        for xp, mids in cols.items():
            for y, v1 in mids:
                for z, v2 in rows.get(y, ()):
                    key = (z, xp)
                    prod = v2 * v1
                    out[key] = out[key] + prod if key in out else prod
        return Coboundary(self.points, {k: v.truncate(cutoff) for k, v in out.items()}, cutoff)

    def to_json(self) -> dict:
        return {
            "cutoff": str(self.cutoff),
            "entries": [
                {"x_minus": k[0], "x_plus": k[1], "value": v.to_json()}
                for k, v in self.nonzero()
            ],
        }


def coboundary(points, data, E_cut) -> Coboundary:
    """Matrix of ``d`` with entry ``(x-, x+) = sum eps * sigma * q^E`` over records."""
    E_cut = _frac(E_cut)
    ids = {p.id for p in points}
    acc: dict = {}
    for r in data:
        if r.index != 1:
            raise ValueError(f"record {r.id} has index {r.index}; the coboundary uses index 1")
        for x in (r.x_plus, r.x_minus):
            if x not in ids:
                raise ValueError(f"record {r.id}: unknown intersection point {x}")
        key = (r.x_minus, r.x_plus)
        w = r.weight(E_cut)
        acc[key] = acc[key] + w if key in acc else w
    return Coboundary(tuple(points), acc, E_cut)


def degree_check(d: Coboundary, points, N: int, shift: int = 1) -> list:
    """Entries violating ``|x-| = |x+| + shift (mod N)``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    deg = {p.id: p.degree for p in points}
    out = []
    for (xm, xp), v in d.nonzero():
        if (deg[xm] - deg[xp] - shift) % N:
            out.append(f"entry ({xm}, {xp}): degree {deg[xm]} != {deg[xp]} + {shift} mod {N}")
    return out


def concatenation_multiplicity(m1, m2) -> int:
    out = 1
    for a, b in zip(m1, m2):
        out *= math.comb(a + b, a)
    return out


def concatenate(u1: TrajectoryRecord, u2: TrajectoryRecord):
    """Glue ``u1`` (from x+ to y) with ``u2`` (from y to x-); returns ``(record, multiplicity)``."""
    if u1.x_minus != u2.x_plus:
        raise ValueError(
            f"cannot concatenate {u1.id} and {u2.id}: {u1.x_minus} != {u2.x_plus}"
        )
    if len(u1.marks) != len(u2.marks):
        raise ValueError("marking slots differ")
    glued = TrajectoryRecord(
        f"{u1.id}#{u2.id}",
        u1.x_plus,
        u2.x_minus,
        u1.energy + u2.energy,
        u1.sign * u2.sign,
        tuple(a + b for a, b in zip(u1.marks, u2.marks)),
        u1.index + u2.index,
    )
    return glued, concatenation_multiplicity(u1.marks, u2.marks)


# ---------------------------------------------------------------------------
# cell complexes


@dataclass(frozen=True)
class ZeroCell:
    id: str
    kind: str
    x_plus: str = ""
    x_minus: str = ""
    energy: Fraction = Fraction(0)
    marks: tuple = ()
    u1: Optional[str] = None
    u2: Optional[str] = None
    order: int = 0
    side: Optional[int] = None
    partner: Optional[str] = None
    fiber: int = 1
    isolated: bool = False

    def __post_init__(self):
        if self.kind not in ZERO_CELL_KINDS:
            raise ValueError(f"zero-cell {self.id}: unknown kind {self.kind!r}")
        object.__setattr__(self, "energy", _frac(self.energy))
        object.__setattr__(self, "marks", tuple(self.marks))

    def to_json(self) -> dict:
        d = {"id": self.id, "kind": self.kind, "x_plus": self.x_plus, "x_minus": self.x_minus,
             "energy": str(self.energy), "marks": list(self.marks)}
        for k in ("u1", "u2", "side", "partner"):
            if getattr(self, k) is not None:
                d[k] = getattr(self, k)
        if self.kind == "true_strip":
            d["order"] = self.order
        if self.kind == "fake_plus":
            d["fiber"] = self.fiber
        if self.isolated:
            d["isolated"] = True
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ZeroCell":
        return cls(
            d["id"], d["kind"], d.get("x_plus", ""), d.get("x_minus", ""),
            _frac(d.get("energy", 0)), tuple(d.get("marks", ())), d.get("u1"), d.get("u2"),
            int(d.get("order", 0)), d.get("side"), d.get("partner"), int(d.get("fiber", 1)),
            bool(d.get("isolated", False)),
        )


@dataclass(frozen=True)
class OneCell:
    """Oriented 1-cell from ``start`` (sign -1) to ``end`` (sign +1); both None for a circle."""

    id: str
    start: Optional[str]
    end: Optional[str]
    marks: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "marks", tuple(int(m) for m in self.marks))
        if (self.start is None) != (self.end is None):
            raise ValueError(f"1-cell {self.id}: an arc needs two endpoints")

    @property
    def weight(self) -> Fraction:
        return sigma(self.marks)

    def to_json(self) -> dict:
        return {"id": self.id, "start": self.start, "end": self.end, "marks": list(self.marks)}

    @classmethod
    def from_json(cls, d: dict) -> "OneCell":
        return cls(d["id"], d.get("start"), d.get("end"), tuple(d.get("marks", ())))


@dataclass(frozen=True)
class CellComplex1D:
    zero_cells: tuple = ()
    one_cells: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "zero_cells", tuple(self.zero_cells))
        object.__setattr__(self, "one_cells", tuple(self.one_cells))

    def cell_map(self) -> dict:
        return {c.id: c for c in self.zero_cells}

    def validate(self) -> list:
        out = []
        cells = self.cell_map()
        if len(cells) != len(self.zero_cells):
            out.append("duplicate zero-cell ids")
        used = set()
        for oc in self.one_cells:
            for x in (oc.start, oc.end):
                if x is None:
                    continue
                if x not in cells:
                    out.append(f"1-cell {oc.id}: unknown endpoint {x}")
                used.add(x)
        for c in self.zero_cells:
            if c.id not in used and not c.isolated:
                out.append(f"zero-cell {c.id} is not an endpoint and not flagged isolated")
        return out

    def to_json(self) -> dict:
        return {
            "zero_cells": [c.to_json() for c in self.zero_cells],
            "one_cells": [c.to_json() for c in self.one_cells],
        }

    @classmethod
    def from_json(cls, d: dict) -> "CellComplex1D":
        return cls(
            [ZeroCell.from_json(c) for c in d.get("zero_cells", [])],
            [OneCell.from_json(c) for c in d.get("one_cells", [])],
        )


@dataclass(frozen=True)
class Issue:
    kind: str
    message: str
    ids: tuple = ()

    def to_json(self) -> dict:
        return {"kind": self.kind, "message": self.message, "ids": list(self.ids)}


@dataclass(frozen=True)
class SignedChain:
    """Rational 0-chain on the zero-cells of a complex, plus any residues found so far."""

    coeffs: dict
    cells: dict
    issues: tuple = ()

    def support(self) -> list:
        return sorted(k for k, v in self.coeffs.items() if v != 0)

    def __getitem__(self, key) -> Fraction:
        return self.coeffs.get(key, Fraction(0))

    def to_json(self) -> dict:
        return {
            "coefficients": {k: str(self.coeffs[k]) for k in self.support()},
            "issues": [i.to_json() for i in self.issues],
        }


def fundamental_class(cc: CellComplex1D) -> SignedChain:
    """Boundary of the weighted fundamental class: ``sum weight * (end - start)``."""
    cells = cc.cell_map()
    coeffs: dict = defaultdict(Fraction)
    for oc in cc.one_cells:
        if oc.start is None:
            continue
        w = oc.weight
        coeffs[oc.end] += w
        coeffs[oc.start] -= w
    return SignedChain({k: v for k, v in coeffs.items() if v != 0}, cells)


def cancel_fake(chain: SignedChain) -> SignedChain:
    """Cancel each fake point against its forgetful partner.

    A ``fake_plus`` cell stands for one of ``fiber`` equivalent points over
    its ``fake_minus`` partner; the pair cancels when
    ``fiber * c(plus) + c(minus) == 0``.  Nonzero residues are reported.
    """
    coeffs = dict(chain.coeffs)
    issues = list(chain.issues)
    cells = chain.cells
    matched = set()
    for cid in sorted(cells):
        c = cells[cid]
        if c.kind != "fake_plus":
            continue
        p = cells.get(c.partner) if c.partner is not None else None
        if p is None or p.kind != "fake_minus":
            raise ValueError(f"fake boundary has no forgetful partner ({cid})")
        residue = c.fiber * coeffs.get(cid, Fraction(0)) + coeffs.get(p.id, Fraction(0))
        if residue != 0:
            issues.append(
                Issue("fake_residue", f"fake pair ({cid}, {p.id}) leaves residue {residue}", (cid, p.id))
            )
        coeffs.pop(cid, None)
        matched.add(p.id)
    for cid in sorted(cells):
        c = cells[cid]
        if c.kind == "fake_minus":
            if cid not in matched:
                raise ValueError(f"fake boundary has no forgetful partner ({cid})")
            coeffs.pop(cid, None)
    return SignedChain(coeffs, cells, tuple(issues))


def involution_cancel(chain: SignedChain) -> SignedChain:
    """Cancel disk bubbles at infinity in pairs ``(c, iota c)``.

    Each pair must carry opposite coefficients and equal energies; a cell
    paired with itself is rejected.
    """
    coeffs = dict(chain.coeffs)
    issues = list(chain.issues)
    cells = chain.cells
    done = set()
    for cid in sorted(cells):
        c = cells[cid]
        if c.kind != "true_bubble" or cid in done:
            continue
        if c.partner == cid:
            raise ValueError("involution must be fixed-point free on adapted configurations")
        p = cells.get(c.partner) if c.partner is not None else None
        if p is None or p.partner != cid:
            issues.append(Issue("bubble_unpaired", f"bubble {cid} has no involution partner", (cid,)))
            coeffs.pop(cid, None)
            done.add(cid)
            continue
        a, b = coeffs.get(cid, Fraction(0)), coeffs.get(p.id, Fraction(0))
        if a + b != 0 or a == 0:
            issues.append(
                Issue("bubble_residue", f"bubble pair ({cid}, {p.id}) has coefficients {a}, {b}", (cid, p.id))
            )
        if c.energy != p.energy or c.side != p.side:
            issues.append(
                Issue("bubble_mismatch", f"bubble pair ({cid}, {p.id}) differs in energy or side", (cid, p.id))
            )
        coeffs.pop(cid, None)
        coeffs.pop(p.id, None)
        done |= {cid, p.id}
    return SignedChain(coeffs, cells, tuple(issues))


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class Report:
    d2_zero: bool
    cell_boundary_zero: bool
    bijection_ok: bool
    issues: tuple
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.d2_zero and self.cell_boundary_zero and self.bijection_ok and not self.issues

    def ids(self) -> set:
        out = set()
        for i in self.issues:
            out |= set(i.ids)
        return out

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "d2_zero": self.d2_zero,
            "cell_boundary_zero": self.cell_boundary_zero,
            "bijection_ok": self.bijection_ok,
            "issues": [i.to_json() for i in sorted(self.issues, key=lambda i: (i.kind, i.ids, i.message))],
            "stats": dict(sorted(self.stats.items())),
        }


def verify_d_squared(points, data_index1, cells_index2: CellComplex1D, cutoff=None) -> Report:
    """Check ``d^2 = 0`` algebraically and through the cell complex.

    ``cutoff`` defaults to one more than twice the largest record energy so
    that every concatenation is visible.
    """
    records = list(data_index1)
    if cutoff is None:
        top = max((r.energy for r in records), default=Fraction(0))
        cutoff = 2 * top + 1
    cutoff = _frac(cutoff)
    issues: list = []

    # algebraic route
    d = coboundary(points, records, cutoff)
    d2 = d.compose(d)
    bad = d2.nonzero()
    for (z, x), v in bad:
        issues.append(Issue("d2_nonzero", f"d^2 entry ({z}, {x}) = {v}", (z, x)))
    d2_zero = not bad

    # geometric route
    issues += [Issue("cell_structure", msg) for msg in cells_index2.validate()]
    chain = involution_cancel(cancel_fake(fundamental_class(cells_index2)))
    issues += list(chain.issues)
    cells = chain.cells
    rec = {r.id: r for r in records}

    group_sum: dict = defaultdict(Fraction)
    by_pair: dict = defaultdict(list)
    for cid in chain.support():
        c = cells[cid]
        if c.kind != "true_strip":
            issues.append(Issue("unexpected_cell", f"{cid} of kind {c.kind} survives cancellation", (cid,)))
            continue
        group_sum[(c.x_plus, c.x_minus, c.energy)] += chain[cid]
    for cid, c in sorted(cells.items()):
        if c.kind == "true_strip":
            by_pair[(c.u1, c.u2)].append(c)
    cell_boundary_zero = True
    for key in sorted(group_sum):
        if group_sum[key] != 0:
            cell_boundary_zero = False
            issues.append(
                Issue("group_nonzero", f"broken configurations {key[0]} -> {key[1]} at energy {key[2]} sum to {group_sum[key]}", (key[0], key[1]))
            )

    bijection_ok = True
    expected = set()
    by_target = defaultdict(list)
    for r in records:
        by_target[r.x_plus].append(r)
    for u1 in sorted(records, key=lambda r: r.id):
        for u2 in sorted(by_target.get(u1.x_minus, ()), key=lambda r: r.id):
            glued, mult = concatenate(u1, u2)
            if glued.energy >= cutoff:
                continue
            expected.add((u1.id, u2.id))
            found = by_pair.get((u1.id, u2.id), [])
            if not found:
                bijection_ok = False
                issues.append(Issue("missing_concatenation", f"no broken configuration for {glued.id}", (u1.id, u2.id)))
                continue
            if len(found) != mult:
                bijection_ok = False
                issues.append(
                    Issue("multiplicity", f"{glued.id}: {len(found)} broken cells, expected {mult}", (u1.id, u2.id) + tuple(c.id for c in found))
                )
            want = glued.sign * glued.sigma
            for c in found:
                ids = (c.id, u1.id, u2.id)
                if (c.x_plus, c.x_minus) != (glued.x_plus, glued.x_minus) or c.energy != glued.energy:
                    bijection_ok = False
                    issues.append(Issue("weight_discrepancy", f"{c.id}: endpoints or energy differ from {glued.id}", ids))
                    continue
                if c.marks != glued.marks:
                    bijection_ok = False
                    issues.append(Issue("weight_discrepancy", f"{c.id}: markings differ from {glued.id}", ids))
                    continue
                got = chain[c.id]
                if got == -want:
                    bijection_ok = False
                    issues.append(Issue("sign_discrepancy", f"{c.id}: coefficient {got}, expected {want}", ids))
                elif got != want:
                    bijection_ok = False
                    issues.append(Issue("weight_discrepancy", f"{c.id}: coefficient {got}, expected {want}", ids))
    for pair, found in sorted(by_pair.items()):
        if pair in expected:
            continue
        bijection_ok = False
        unknown = [x for x in pair if x not in rec]
        kind = "unknown_record" if unknown else "orphan_cell"
        issues.append(
            Issue(kind, f"broken cells {[c.id for c in found]} match no concatenation of records {pair}", tuple(pair) + tuple(c.id for c in found))
        )
    stats = {
        "points": len(points),
        "records": len(records),
        "zero_cells": len(cells_index2.zero_cells),
        "one_cells": len(cells_index2.one_cells),
        "concatenations": len(expected),
    }
    return Report(d2_zero, cell_boundary_zero, bijection_ok, tuple(issues), stats)


# ---------------------------------------------------------------------------
# open disk counts


@dataclass(frozen=True)
class DiskCount:
    class_id: tuple
    n_beta: int
    count: int
    boundary_nonzero: bool = True

    @classmethod
    def from_json(cls, d: dict) -> "DiskCount":
        return cls(tuple(d["class_id"]), int(d["n_beta"]), int(d["count"]), bool(d.get("boundary_nonzero", True)))


def open_gw_count(beta, data) -> Fraction:
    """``(1 / n(beta)!) * sum of signed counts`` over rigid disk types in class ``beta``."""
    beta = tuple(beta)
    data = list(data)
    if not data:
        return Fraction(0)
    if any(tuple(d.class_id) != beta for d in data):
        raise ValueError("mixed beta values in disk count data")
    if not all(d.boundary_nonzero for d in data):
        raise ValueError("the boundary class of beta must be nonzero")
    ns = {d.n_beta for d in data}
    if len(ns) != 1:
        raise ValueError("inconsistent n(beta) across records")
    return Fraction(sum(d.count for d in data), math.factorial(ns.pop()))


# ---------------------------------------------------------------------------
# datasets


@dataclass(frozen=True)
class Dataset:
    points: tuple
    records: tuple
    cells: CellComplex1D = CellComplex1D()
    N: int = 2

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "points": [{"id": p.id, "degree": p.degree} for p in self.points],
            "records": [r.to_json() for r in self.records],
            "cells": self.cells.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "Dataset":
        return cls(
            tuple(IntersectionPoint(p["id"], int(p.get("degree", 0))) for p in d.get("points", [])),
            tuple(TrajectoryRecord.from_json(r) for r in d.get("records", [])),
            CellComplex1D.from_json(d.get("cells", {})),
            int(d.get("N", 2)),
        )

    def with_records(self, records) -> "Dataset":
        return replace(self, records=tuple(records))

    def with_cells(self, zero=None, one=None) -> "Dataset":
        return replace(
            self,
            cells=CellComplex1D(
                self.cells.zero_cells if zero is None else zero,
                self.cells.one_cells if one is None else one,
            ),
        )
