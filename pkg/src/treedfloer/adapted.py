"""Labeled combinatorial types: classes, energies, indices and divisor contacts.

Homotopy classes are modeled as integer vectors in a free abelian group.
Index contributions are supplied per vertex and added up; no index formula
is computed from geometry.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Union

from treedfloer import bmorph
from treedfloer.treegraph import (
    CombType,
    TypeError_,
    is_stable,
    length_class,
    type_from_json,
    type_to_json,
    validate,
)

Contact = Union[int, tuple]


@dataclass(frozen=True)
class VertexLabel:
    class_id: tuple = ()
    energy: Fraction = Fraction(0)
    index_contrib: int = 0
    in_divisor: bool = False

    def __post_init__(self):
        object.__setattr__(self, "class_id", tuple(int(c) for c in self.class_id))
        object.__setattr__(self, "energy", Fraction(self.energy))
        if self.energy < 0:
            raise ValueError("energy must be non-negative")

    @property
    def is_ghost(self) -> bool:
        return self.energy == 0

    def __add__(self, other: "VertexLabel") -> "VertexLabel":
        return VertexLabel(
            _add_classes(self.class_id, other.class_id),
            self.energy + other.energy,
            self.index_contrib + other.index_contrib,
            self.in_divisor or other.in_divisor,
        )

    def to_json(self) -> dict:
        return {
            "class_id": list(self.class_id),
            "energy": str(self.energy),
            "index_contrib": self.index_contrib,
            "in_divisor": self.in_divisor,
        }

    @classmethod
    def from_json(cls, d: dict) -> "VertexLabel":
        return cls(
            tuple(d.get("class_id", ())),
            Fraction(d.get("energy", 0)),
            int(d.get("index_contrib", 0)),
            bool(d.get("in_divisor", False)),
        )


def _add_classes(a: tuple, b: tuple) -> tuple:
    n = max(len(a), len(b))
    a = a + (0,) * (n - len(a))
    b = b + (0,) * (n - len(b))
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True, eq=False)
class LabeledType:
    base: CombType
    labels: dict = field(default_factory=dict)
    contacts: dict = field(default_factory=dict)
    endpoints: Optional[tuple] = None

    def label(self, vid: str) -> VertexLabel:
        return self.labels.get(vid, VertexLabel())

    @property
    def energy(self) -> Fraction:
        return sum((self.label(v.id).energy for v in self.base.vertices), Fraction(0))

    @property
    def class_id(self) -> tuple:
        out: tuple = ()
        for v in self.base.vertices:
            out = _add_classes(out, self.label(v.id).class_id)
        return out

    def to_json(self) -> dict:
        return {
            "base": type_to_json(self.base),
            "labels": {k: self.labels[k].to_json() for k in sorted(self.labels)},
            "contacts": {
                k: (list(c) if isinstance(c, tuple) else c)
                for k, c in sorted(self.contacts.items())
            },
            "endpoints": None if self.endpoints is None else list(self.endpoints),
        }

    @classmethod
    def from_json(cls, d: dict) -> "LabeledType":
        base = type_from_json(d["base"])
        labels = {k: VertexLabel.from_json(v) for k, v in d.get("labels", {}).items()}
        contacts = {
            k: (tuple(c) if isinstance(c, list) else int(c))
            for k, c in d.get("contacts", {}).items()
        }
        ep = d.get("endpoints")
        return cls(base, labels, contacts, None if ep is None else tuple(ep))


def label_violations(t: LabeledType) -> list:
    """Structural checks on the labels themselves."""
    out = list(validate(t.base))
    vids = {v.id for v in t.base.vertices}
    for vid in sorted(t.labels):
        if vid not in vids:
            out.append(f"label for unknown vertex {vid}")
        lab = t.labels[vid]
        if lab.is_ghost and any(lab.class_id):
            out.append(f"ghost vertex {vid} must carry the zero class")
    for key, c in sorted(t.contacts.items()):
        degs = c if isinstance(c, tuple) else (c,)
        if any(d < 1 for d in degs):
            out.append(f"contact degree of {key} must be positive")
    return out


def index(t: LabeledType) -> int:
    """Sum of the index contributions over all vertices."""
    return sum(t.label(v.id).index_contrib for v in t.base.vertices)


def _ghost_clusters(t: LabeledType) -> list:
    ghosts = {v.id for v in t.base.vertices if t.label(v.id).is_ghost}
    seen: set = set()
    clusters = []
    for g in sorted(ghosts):
        if g in seen:
            continue
        stack, comp = [g], []
        seen.add(g)
        while stack:
            w = stack.pop()
            comp.append(w)
            for e in t.base.incident(w):
                x = e.other(w)
                if x in ghosts and x not in seen:
                    seen.add(x)
                    stack.append(x)
        clusters.append(comp)
    return clusters


def is_uncrowded(t: LabeledType) -> bool:
    """Every maximal connected ghost subforest carries at most one interior marking."""
    for comp in _ghost_clusters(t):
        n = sum(
            1 for v in comp for m in t.base.markings_at(v) if m.kind == "interior"
        )
        if n > 1:
            return False
    return True


def is_adapted(t: LabeledType) -> list:
    """Violations of the adaptedness conditions; empty means adapted."""
    errs = validate(t.base)
    if errs:
        return errs
    out = []
    if not is_stable(t.base):
        out.append("unstable domain")
    for v in t.base.vertices:
        lab = t.label(v.id)
        if v.kind == "sphere" and lab.in_divisor and lab.energy > 0:
            out.append(f"non-constant sphere in divisor ({v.id})")
    for m in t.base.interior_marks("mark"):
        if m.tag == "none":
            out.append(f"interior marking {m.id} carries no divisor tag")
        if m.id not in t.contacts:
            out.append(f"interior marking {m.id} has no contact degree")
    for v in t.base.vertices:
        if t.label(v.id).in_divisor:
            hits = [
                m
                for m in t.base.markings_at(v.id)
                if m.kind == "interior" and m.id in t.contacts
            ]
            if not hits:
                out.append(f"vertex {v.id} meets the divisor without a contact marking")
    return out


def _parts(t: CombType) -> list:
    """Vertex sets left after removing boundary nodes of positive length."""
    cut = {e.id for e in t.edges if e.node == "boundary" and length_class(e.length) != "zero"}
    parent = {v.id: v.id for v in t.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in t.edges:
        if e.id not in cut:
            parent[find(e.u)] = find(e.v)
    groups: dict = {}
    for v in t.vertices:
        groups.setdefault(find(v.id), []).append(v.id)
    return list(groups.values())


def energy_quota_check(t: LabeledType, k: int, C: tuple) -> list:
    """Each part ``P`` must satisfy ``energy(P) <= n(P) / C(k)`` with ``C(k) = a*k + b``."""
    a, b = (Fraction(x) for x in C)
    ck = a * k + b
    if ck <= 0:
        raise ValueError("C(k) must be positive")
    out = []
    for j, part in enumerate(_parts(t.base)):
        energy = sum((t.label(v).energy for v in part), Fraction(0))
        n = sum(
            1
            for v in part
            for m in t.base.markings_at(v)
            if m.kind == "interior" and m.role == "mark"
        )
        if energy > n / ck:
            out.append(
                f"part {j} ({','.join(sorted(part))}): energy {energy} exceeds n/C(k) = {n / ck}"
            )
    return out


@dataclass(frozen=True)
class Classification:
    kind: str  # true | fake | not_boundary
    subtype: Optional[str] = None  # strip_breaking | disk_bubble
    side: Optional[int] = None
    edge: Optional[str] = None

    def to_json(self) -> dict:
        return {"kind": self.kind, "subtype": self.subtype, "side": self.side, "edge": self.edge}


def classify_index2_boundary(t: LabeledType) -> Classification:
    """Sort an index-two type into true boundary, fake boundary or interior stratum."""
    if index(t) != 2:
        raise ValueError(f"classification needs index 2 (got {index(t)})")
    base = t.base
    for e in base.edges:
        if e.node == "boundary" and length_class(e.length) == "zero":
            return Classification("fake", edge=e.id)
    for e in base.edges:
        if e.node != "boundary" or e.length_class != "inf":
            continue
        if base.kind_of(e.u) == "strip" and base.kind_of(e.v) == "strip":
            return Classification("true", "strip_breaking", edge=e.id)
    for e in base.edges:
        if e.node != "boundary" or e.length_class != "inf":
            continue
        disk = e.u if base.kind_of(e.u) == "disk" else e.v
        side = e.side if e.side is not None else base.side_of(disk)
        return Classification("true", "disk_bubble", side, e.id)
    return Classification("not_boundary")


# ---------------------------------------------------------------------------
# labeled morphisms


def labeled_collapse(t: LabeledType, edge_id: str) -> LabeledType:
    """Collapse a zero-length node; labels of the merged vertices add."""
    e = t.base.edge(edge_id)
    new = bmorph.collapse_edge(t.base, edge_id)
    kept = {v.id for v in new.vertices}
    keep, gone = (e.u, e.v) if e.u in kept else (e.v, e.u)
    labels = {k: v for k, v in t.labels.items() if k != gone}
    labels[keep] = t.label(keep) + t.label(gone)
    return LabeledType(new, labels, dict(t.contacts), t.endpoints)


def labeled_cut(t: LabeledType, edge_id: str) -> LabeledType:
    new = bmorph.cut_edge(t.base, edge_id)
    return LabeledType(new, dict(t.labels), dict(t.contacts), t.endpoints)


def labeled_make_finite(t: LabeledType, edge_id: str) -> LabeledType:
    return LabeledType(bmorph.make_finite(t.base, edge_id), dict(t.labels), dict(t.contacts), t.endpoints)


def labeled_make_nonzero(t: LabeledType, edge_id: str) -> LabeledType:
    return LabeledType(bmorph.make_nonzero(t.base, edge_id), dict(t.labels), dict(t.contacts), t.endpoints)


def component_types(t: LabeledType) -> list:
    """Split a labeled forest into one labeled type per connected component."""
    out = []
    for comp in t.base.components():
        cs = set(comp)
        marks = [m for m in t.base.markings if m.vertex in cs]
        # labels are renumbered 1..k per tag, preserving their order
        by_tag: dict = {}
        for m in marks:
            if m.kind == "interior" and m.role == "mark":
                by_tag.setdefault(m.tag, []).append(m.label)
        renum = {tag: {old: i + 1 for i, old in enumerate(sorted(ls))} for tag, ls in by_tag.items()}
        marks = [
            replace(m, label=renum[m.tag][m.label])
            if m.kind == "interior" and m.role == "mark"
            else m
            for m in marks
        ]
        base = CombType(
            [v for v in t.base.vertices if v.id in cs],
            [e for e in t.base.edges if e.u in cs],
            marks,
            [s for s in t.base.strip_chain if s in cs],
        )
        mids = {m.id for m in base.markings}
        out.append(
            LabeledType(
                base,
                {k: v for k, v in t.labels.items() if k in cs},
                {k: c for k, c in t.contacts.items() if k in mids},
                t.endpoints,
            )
        )
    return out


def uniform_labels(t: CombType, energy=1, index_contrib=0, class_dim=1) -> LabeledType:
    """Label every vertex alike, tagging each interior marking with ``D`` and degree 1."""
    labels = {
        v.id: VertexLabel((1,) * class_dim if energy else (0,) * class_dim, Fraction(energy), index_contrib)
        for v in t.vertices
    }
    return LabeledType(t, labels, {m.id: 1 for m in t.interior_marks("mark")})


__all__ = [
    "VertexLabel",
    "LabeledType",
    "Classification",
    "TypeError_",
    "index",
    "is_uncrowded",
    "is_adapted",
    "energy_quota_check",
    "classify_index2_boundary",
    "labeled_collapse",
    "labeled_cut",
    "component_types",
    "label_violations",
]
