"""Combinatorial types of stable treed strips and treed disks.

A combinatorial type is a labeled metric forest.  Vertices are components
(``strip``, ``disk`` or ``sphere``), finite edges are nodes and markings are
semi-infinite edges.  Boundary nodes carry a length in ``[0, inf]``; interior
nodes carry none.  A boundary node joining a strip to a disk also records the
boundary side ``0`` or ``1`` of the strip it sits on.

The strip components of each connected piece form a path, the *strip chain*,
running from the incoming marking ``z-`` to the outgoing marking ``z+``.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Union

INF = math.inf
Length = Union[Fraction, float]

VERTEX_KINDS = ("strip", "disk", "sphere")
NODE_KINDS = ("boundary", "interior")
DIVISOR_TAGS = ("D", "D0", "D1", "none")
INTERIOR_ROLES = ("mark", "tail")
BOUNDARY_ROLES = ("in", "out", "x", "tail")

# representatives of the three length classes used by the census
CLASS_LENGTHS = {"zero": Fraction(0), "finite": Fraction(1), "inf": INF}


class TypeError_(ValueError):
    """Raised when an operation receives a type it cannot act on."""


class InvalidTypeError(TypeError_):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid combinatorial type: " + "; ".join(self.violations))


def make_length(value) -> Length:
    if value is None:
        raise ValueError("boundary node needs a length")
    if isinstance(value, str):
        if value in ("inf", "oo", "infinity"):
            return INF
        return Fraction(value)
    if isinstance(value, float):
        if value == INF:
            return INF
        raise ValueError("lengths must be exact rationals or inf")
    return Fraction(value)


def length_class(length: Optional[Length]) -> Optional[str]:
    """``'zero'``, ``'finite'`` (the open interval) or ``'inf'``; None for no metric."""
    if length is None:
        return None
    if length == INF:
        return "inf"
    return "zero" if length == 0 else "finite"


def _length_str(length: Optional[Length]) -> str:
    if length is None:
        return "-"
    if length == INF:
        return "inf"
    return f"{length.numerator}/{length.denominator}"


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    node: str
    length: Optional[Length] = None
    side: Optional[int] = None

    def other(self, w: str) -> str:
        return self.v if w == self.u else self.u

    @property
    def length_class(self) -> Optional[str]:
        return length_class(self.length)


@dataclass(frozen=True)
class Marking:
    id: str
    vertex: str
    kind: str
    label: Optional[int] = None
    tag: str = "none"
    role: str = "mark"
    side: Optional[int] = None


@dataclass(frozen=True)
class CombType:
    vertices: tuple = ()
    edges: tuple = ()
    markings: tuple = ()
    strip_chain: tuple = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "markings", tuple(self.markings))
        object.__setattr__(self, "strip_chain", tuple(self.strip_chain))

    # -- lookup -----------------------------------------------------------------

    def _idx(self):
        if self._index is None:
            idx = {
                "v": {v.id: v for v in self.vertices},
                "e": {e.id: e for e in self.edges},
                "m": {m.id: m for m in self.markings},
                "inc": defaultdict(list),
                "marks_at": defaultdict(list),
            }
            for e in self.edges:
                idx["inc"][e.u].append(e)
                if e.v != e.u:
                    idx["inc"][e.v].append(e)
            for m in self.markings:
                idx["marks_at"][m.vertex].append(m)
            object.__setattr__(self, "_index", idx)
        return self._index

    def vertex(self, vid: str) -> Vertex:
        return self._idx()["v"][vid]

    def edge(self, eid: str) -> Edge:
        return self._idx()["e"][eid]

    def marking(self, mid: str) -> Marking:
        return self._idx()["m"][mid]

    def has_edge(self, eid: str) -> bool:
        return eid in self._idx()["e"]

    def has_marking(self, mid: str) -> bool:
        return mid in self._idx()["m"]

    def incident(self, vid: str) -> list:
        return list(self._idx()["inc"].get(vid, ()))

    def markings_at(self, vid: str) -> list:
        return list(self._idx()["marks_at"].get(vid, ()))

    def kind_of(self, vid: str) -> str:
        return self.vertex(vid).kind

    def interior_marks(self, role: str = "mark") -> list:
        return [m for m in self.markings if m.kind == "interior" and m.role == role]

    def special_counts(self, vid: str) -> tuple:
        """``(boundary, interior)`` special point counts of a vertex."""
        b = i = 0
        for e in self.incident(vid):
            if e.node == "boundary":
                b += 1
            else:
                i += 1
        for m in self.markings_at(vid):
            if m.kind == "boundary":
                b += 1
            else:
                i += 1
        return b, i

    def chain_end_count(self, vid: str) -> int:
        """Number of strip-end attachments (z-, z+ or strip-strip nodes) at a strip vertex."""
        n = sum(1 for m in self.markings_at(vid) if m.role in ("in", "out"))
        n += sum(
            1
            for e in self.incident(vid)
            if e.node == "boundary" and self.kind_of(e.other(vid)) == "strip"
        )
        return n

    def components(self) -> list:
        """Vertex id lists of the connected components, in vertex order."""
        parent = {v.id: v.id for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            if e.u in parent and e.v in parent:
                parent[find(e.u)] = find(e.v)
        groups: dict = {}
        for v in self.vertices:
            groups.setdefault(find(v.id), []).append(v.id)
        return list(groups.values())

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def side_of(self, vid: str) -> Optional[int]:
        """Boundary side of the strip that a disk or sphere vertex hangs off, if any."""
        if self.kind_of(vid) == "strip":
            return None
        seen = {vid}
        frontier = [(vid, None)]
        while frontier:
            w, side = frontier.pop()
            for e in self.incident(w):
                x = e.other(w)
                if x in seen:
                    continue
                seen.add(x)
                if self.kind_of(x) == "strip":
                    if e.side is not None:
                        return e.side
                    return side
                frontier.append((x, side))
        return None

    # -- functional updates ---------------------------------------------------------

    def replace_edge(self, eid: str, **changes) -> "CombType":
        edges = tuple(replace(e, **changes) if e.id == eid else e for e in self.edges)
        return replace(self, edges=edges)

    def relabel(self, mapping: dict) -> "CombType":
        """Rename vertex, edge and marking ids (missing keys stay unchanged)."""
        g = lambda x: mapping.get(x, x)  # noqa: E731
        return CombType(
            vertices=[Vertex(g(v.id), v.kind) for v in self.vertices],
            edges=[replace(e, id=g(e.id), u=g(e.u), v=g(e.v)) for e in self.edges],
            markings=[replace(m, id=g(m.id), vertex=g(m.vertex)) for m in self.markings],
            strip_chain=[g(s) for s in self.strip_chain],
        )

    def to_json(self) -> dict:
        return type_to_json(self)


# ---------------------------------------------------------------------------
# construction helpers


def strip_type(
    n: int = 0, *, chain_length: int = 1, tag: str = "none", lengths=None
) -> CombType:
    """A chain of strips with all interior markings on the first strip."""
    chain = [f"s{i}" for i in range(chain_length)]
    lengths = lengths or [Fraction(0)] * (chain_length - 1)
    verts = [Vertex(s, "strip") for s in chain]
    edges = [
        Edge(f"w{i + 1}", chain[i], chain[i + 1], "boundary", make_length(lengths[i]))
        for i in range(chain_length - 1)
    ]
    marks = [
        Marking("z-", chain[0], "boundary", role="in"),
        Marking("z+", chain[-1], "boundary", role="out"),
    ]
    marks += [
        Marking(f"z{i}", chain[0], "interior", label=i, tag=tag) for i in range(1, n + 1)
    ]
    return CombType(verts, edges, marks, chain)


# ---------------------------------------------------------------------------
# validation


def validate(t: CombType) -> list:
    """Return the list of violated invariants (empty when ``t`` is valid)."""
    out: list = []
    vids = [v.id for v in t.vertices]
    if len(set(vids)) != len(vids):
        out.append("duplicate vertex ids")
    tail_ids = [e.id for e in t.edges] + [m.id for m in t.markings]
    if len(set(tail_ids)) != len(tail_ids):
        out.append("duplicate edge or marking ids")
    vset = set(vids)
    for v in t.vertices:
        if v.kind not in VERTEX_KINDS:
            out.append(f"vertex {v.id}: unknown kind {v.kind!r}")
    if out:
        return out
    kind = {v.id: v.kind for v in t.vertices}

    for e in t.edges:
        if e.u not in vset or e.v not in vset:
            out.append(f"edge {e.id}: endpoint is not a vertex")
            continue
        if e.u == e.v:
            out.append(f"edge {e.id}: self-loop")
            continue
        if e.node not in NODE_KINDS:
            out.append(f"edge {e.id}: unknown node kind {e.node!r}")
            continue
        ku, kv = kind[e.u], kind[e.v]
        if e.node == "boundary":
            if e.length is None:
                out.append(f"edge {e.id}: boundary node without length")
            elif e.length != INF and e.length < 0:
                out.append(f"edge {e.id}: negative length")
            if "sphere" in (ku, kv):
                out.append(f"edge {e.id}: boundary node at a sphere component")
            elif "strip" in (ku, kv) and "disk" in (ku, kv):
                if e.side not in (0, 1):
                    out.append(f"edge {e.id}: strip-disk node needs boundary side 0 or 1")
            elif e.side is not None:
                out.append(f"edge {e.id}: side is only recorded on strip-disk nodes")
        else:
            if e.length is not None:
                out.append(f"edge {e.id}: interior node carries no metric")
            if e.side is not None:
                out.append(f"edge {e.id}: interior node carries no side")
            if ku == "strip" and kv == "strip":
                out.append(
                    "strip chain must use boundary-type connecting structure "
                    f"at intermediate nodes w_i (edge {e.id})"
                )
            elif "sphere" not in (ku, kv):
                out.append(f"edge {e.id}: interior node must involve a sphere component")

    for m in t.markings:
        if m.vertex not in vset:
            out.append(f"marking {m.id}: attached to unknown vertex")
            continue
        k = kind[m.vertex]
        if m.kind == "interior":
            if m.role not in INTERIOR_ROLES:
                out.append(f"marking {m.id}: bad interior role {m.role!r}")
            if m.tag not in DIVISOR_TAGS:
                out.append(f"marking {m.id}: unknown divisor tag {m.tag!r}")
            if m.role == "mark" and (not isinstance(m.label, int) or m.label < 1):
                out.append(f"marking {m.id}: interior marking needs a label >= 1")
        elif m.kind == "boundary":
            if k == "sphere":
                out.append(f"marking {m.id}: sphere components carry no boundary markings")
            if m.role not in BOUNDARY_ROLES:
                out.append(f"marking {m.id}: bad boundary role {m.role!r}")
            if m.role in ("in", "out") and k != "strip":
                out.append(f"marking {m.id}: strip ends must sit on strip components")
            if m.role == "x" and k != "disk":
                out.append(f"marking {m.id}: ordered boundary markings sit on disks")
            if m.role == "tail" and k == "strip" and m.side not in (0, 1):
                out.append(f"marking {m.id}: boundary tail on a strip needs a side")
        else:
            out.append(f"marking {m.id}: unknown kind {m.kind!r}")
    if out:
        return out

    # forest check
    parent = {v: v for v in vids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in t.edges:
        a, b = find(e.u), find(e.v)
        if a == b:
            out.append("not a forest")
            return out
        parent[a] = b

    comps = t.components()
    chain = list(t.strip_chain)
    if len(set(chain)) != len(chain):
        out.append("strip chain repeats a vertex")
    strips = [v for v in vids if kind[v] == "strip"]
    if set(chain) != set(strips):
        out.append("strip chain must list exactly the strip components")
        return out
    pos = {s: i for i, s in enumerate(chain)}
    for comp in comps:
        cstrips = [v for v in comp if kind[v] == "strip"]
        inm = [m for v in comp for m in t.markings_at(v) if m.role == "in"]
        outm = [m for v in comp for m in t.markings_at(v) if m.role == "out"]
        if not cstrips:
            if inm or outm:
                out.append("strip ends on a component without strips")
            continue
        idxs = sorted(pos[s] for s in cstrips)
        if idxs != list(range(idxs[0], idxs[0] + len(idxs))):
            out.append("strip chain is not contiguous on a component")
            continue
        ordered = chain[idxs[0] : idxs[-1] + 1]
        for a, b in zip(ordered, ordered[1:]):
            if not any(
                e.other(a) == b and e.node == "boundary" for e in t.incident(a)
            ):
                out.append(f"strip chain: {a} and {b} are not joined by a node")
        ss = [
            e
            for e in t.edges
            if kind[e.u] == "strip" and kind[e.v] == "strip" and e.u in comp
        ]
        if len(ss) != len(ordered) - 1:
            out.append("strip components must form a single path")
        if len(inm) != 1 or len(outm) != 1:
            out.append("a strip component needs exactly one z- and one z+")
        else:
            if inm[0].vertex != ordered[0]:
                out.append("z- must sit on the first strip of the chain")
            if outm[0].vertex != ordered[-1]:
                out.append("z+ must sit on the last strip of the chain")

    # every sphere tree hangs off at most one disk or strip component
    sphere_seen: set = set()
    for v in vids:
        if kind[v] != "sphere" or v in sphere_seen:
            continue
        stack, tree, anchors = [v], set(), 0
        while stack:
            w = stack.pop()
            if w in tree:
                continue
            tree.add(w)
            for e in t.incident(w):
                x = e.other(w)
                if kind[x] == "sphere":
                    stack.append(x)
                else:
                    anchors += 1
        sphere_seen |= tree
        if anchors > 1:
            out.append("sphere tree attached to more than one disk or strip component")

    groups: dict = defaultdict(list)
    for m in t.interior_marks("mark"):
        groups[m.tag].append(m.label)
    for tag, labels in sorted(groups.items()):
        if sorted(labels) != list(range(1, len(labels) + 1)):
            out.append(f"interior labels with tag {tag} must be 1..{len(labels)}")
    return out


def check_valid(t: CombType) -> None:
    errs = validate(t)
    if errs:
        raise InvalidTypeError(errs)


def vertex_is_stable(t: CombType, vid: str) -> bool:
    b, i = t.special_counts(vid)
    if t.kind_of(vid) == "sphere":
        return b + i >= 3
    return b + 2 * i >= 3


def is_stable(t: CombType) -> bool:
    """Every component has trivial automorphism group.

    Spheres need three special points.  Disks and strips use the doubled
    count ``boundary + 2 * interior >= 3``, where the two strip ends of a
    strip count as boundary special points.
    """
    check_valid(t)
    return all(vertex_is_stable(t, v.id) for v in t.vertices)


def is_bare_strip(t: CombType) -> bool:
    return (
        len(t.vertices) == 1
        and t.vertices[0].kind == "strip"
        and not t.edges
        and sorted(m.role for m in t.markings) == ["in", "out"]
    )


# ---------------------------------------------------------------------------
# canonical form


def _mark_key(m: Marking) -> str:
    return f"{m.kind}|{m.role}|{m.label}|{m.tag}|{m.side}"


def _rooted_code(t: CombType, v: str, via: Optional[str]) -> str:
    marks = sorted(_mark_key(m) for m in t.markings_at(v))
    kids = []
    for e in t.incident(v):
        if e.id == via:
            continue
        w = e.other(v)
        kids.append(f"<{e.node}|{_length_str(e.length)}|{e.side}>{_rooted_code(t, w, e.id)}")
    kids.sort()
    return "(" + t.kind_of(v) + "[" + ",".join(marks) + "]" + "".join(kids) + ")"


def canonical_form(t: CombType) -> bytes:
    """Isomorphism-invariant byte string of a labeled metric forest."""
    check_valid(t)
    codes = []
    for comp in t.components():
        codes.append(min(_rooted_code(t, v, None) for v in comp))
    codes.sort()
    return json.dumps(codes, separators=(",", ":")).encode()


def abstract_lengths(t: CombType) -> CombType:
    """Replace every boundary length by the representative of its class."""
    edges = [
        replace(e, length=CLASS_LENGTHS[e.length_class]) if e.node == "boundary" else e
        for e in t.edges
    ]
    return replace(t, edges=tuple(edges))


def stratum_key(t: CombType) -> bytes:
    """Canonical form up to the three length classes."""
    return canonical_form(abstract_lengths(t))


# ---------------------------------------------------------------------------
# forgetting tails


class _Work:
    """Mutable scratch copy of a type used by the collapsing procedures."""

    def __init__(self, t: CombType):
        self.kind = {v.id: v.kind for v in t.vertices}
        self.order = [v.id for v in t.vertices]
        self.edges = {e.id: e for e in t.edges}
        self.marks = {m.id: m for m in t.markings}
        self.chain = list(t.strip_chain)

    def incident(self, v):
        return [e for e in self.edges.values() if v in (e.u, e.v)]

    def marks_at(self, v):
        return [m for m in self.marks.values() if m.vertex == v]

    def counts(self, v):
        b = i = 0
        for e in self.incident(v):
            if e.node == "boundary":
                b += 1
            else:
                i += 1
        for m in self.marks_at(v):
            if m.kind == "boundary":
                b += 1
            else:
                i += 1
        return b, i

    def stable(self, v):
        b, i = self.counts(v)
        return b + i >= 3 if self.kind[v] == "sphere" else b + 2 * i >= 3

    def remove_vertex(self, v):
        del self.kind[v]
        self.order.remove(v)
        if v in self.chain:
            self.chain.remove(v)

    def move_marking(self, m: Marking, target: str, side=None):
        if m.kind == "boundary" and self.kind[target] == "strip" and m.role == "tail":
            m = replace(m, vertex=target, side=side if side is not None else m.side)
        elif m.kind == "boundary" and self.kind[target] != "strip":
            m = replace(m, vertex=target, side=None)
        else:
            m = replace(m, vertex=target)
        self.marks[m.id] = m

    def build(self) -> CombType:
        return CombType(
            [Vertex(v, self.kind[v]) for v in self.order],
            [self.edges[k] for k in sorted(self.edges, key=_edge_sort_key(self.edges))],
            sorted(self.marks.values(), key=lambda m: m.id),
            self.chain,
        )


def _edge_sort_key(edges):
    ids = list(edges)
    pos = {k: i for i, k in enumerate(ids)}
    return lambda k: pos[k]


def _join_side(work: _Work, a: str, b: str, *sides) -> Optional[int]:
    ka, kb = work.kind[a], work.kind[b]
    if {ka, kb} == {"strip", "disk"}:
        for s in sides:
            if s is not None:
                return s
        raise TypeError_("cannot determine the boundary side of a merged node")
    return None


def _collapse_unstable(work: _Work, v: str) -> list:
    """Collapse one unstable vertex; return the vertices whose counts changed."""
    kind = work.kind[v]
    inc = work.incident(v)
    marks = work.marks_at(v)
    if kind == "sphere":
        if len(inc) == 2 and not marks:
            e1, e2 = inc
            a, b = e1.other(v), e2.other(v)
            del work.edges[e2.id]
            work.edges[e1.id] = Edge(e1.id, a, b, "interior")
            work.remove_vertex(v)
            return []
        if len(inc) == 1 and len(marks) == 1:
            a = inc[0].other(v)
            del work.edges[inc[0].id]
            work.move_marking(marks[0], a)
            work.remove_vertex(v)
            return []
        raise TypeError_("unstable sphere component cannot be collapsed")

    b, i = work.counts(v)
    if i:
        raise TypeError_("the result cannot be stabilized")
    bedges = [e for e in inc if e.node == "boundary"]
    bmarks = [m for m in marks if m.kind == "boundary"]
    if b == 2 and len(bedges) == 2:
        e1, e2 = bedges
        a, c = e1.other(v), e2.other(v)
        side = _join_side(work, a, c, e1.side, e2.side)
        del work.edges[e2.id]
        # two metrics are identified into one: lengths add
        work.edges[e1.id] = Edge(e1.id, a, c, "boundary", e1.length + e2.length, side)
        work.remove_vertex(v)
        return []
    if b == 2 and len(bedges) == 1:
        e1 = bedges[0]
        a = e1.other(v)
        del work.edges[e1.id]
        work.move_marking(bmarks[0], a, side=e1.side)
        work.remove_vertex(v)
        return [a]
    if b == 1 and len(bedges) == 1:
        e1 = bedges[0]
        a = e1.other(v)
        del work.edges[e1.id]
        work.remove_vertex(v)
        return [a]
    if b == 2 and kind == "strip" and {m.role for m in bmarks} == {"in", "out"}:
        raise _BareStrip()
    raise TypeError_("the result cannot be stabilized")


class _BareStrip(Exception):
    pass


def forget_tail(t: CombType, marking_id: str) -> CombType:
    """Forget a marking and collapse the components that become unstable.

    Unstable spheres are collapsed by identifying their two remaining special
    points.  Unstable disks and strips are collapsed iteratively starting
    from the component that carried the marking: a lone metric node is
    forgotten together with the component, two metric nodes are identified
    and their lengths summed.  Interior labels of the forgotten marking's tag
    are renumbered preserving order.

    Forgetting the only marking of a strip type returns the bare strip.
    """
    check_valid(t)
    m = t.marking(marking_id)
    if m.role in ("in", "out"):
        raise TypeError_("strip ends may not be forgotten")
    work = _Work(t)
    del work.marks[marking_id]
    queue = [m.vertex]
    bare = False
    while True:
        pending = [v for v in queue if v in work.kind and not work.stable(v)]
        if not pending:
            pending = [v for v in work.order if not work.stable(v)]
            if not pending:
                break
        v = pending[0]
        try:
            touched = _collapse_unstable(work, v)
        except _BareStrip:
            bare = True
            break
        queue = touched + [x for x in queue if x != v]
    if m.kind == "interior" and m.role == "mark":
        for k, mk in list(work.marks.items()):
            if (
                mk.kind == "interior"
                and mk.role == "mark"
                and mk.tag == m.tag
                and mk.label > m.label
            ):
                work.marks[k] = replace(mk, label=mk.label - 1)
    if m.kind == "boundary" and m.role == "x":
        for k, mk in list(work.marks.items()):
            if mk.role == "x" and mk.label is not None and mk.label > (m.label or 0):
                work.marks[k] = replace(mk, label=mk.label - 1)
    out = work.build()
    check_valid(out)
    if not bare and not is_stable(out):
        raise TypeError_("forgetting produced an unstable type")
    return out


# ---------------------------------------------------------------------------
# enumeration


def _attach_options(parent_kind: str, child_kind: str):
    """Edge attribute choices for attaching a non-chain vertex to its parent."""
    if child_kind == "sphere":
        return [("interior", None, None)]
    if parent_kind == "sphere":
        return []
    sides = (0, 1) if parent_kind == "strip" else (None,)
    return [
        ("boundary", CLASS_LENGTHS[c], s) for c in ("zero", "finite", "inf") for s in sides
    ]


def enumerate_types(
    n: int, max_vertices: int, kind: str = "strip", k: int = 0
) -> list:
    """All connected stable types up to isomorphism with at most ``max_vertices`` vertices.

    Lengths are abstracted to the classes ``0``, ``(0, inf)`` and ``inf``.
    Interior markings are labeled ``1..n`` with tag ``none``; disk types
    carry ``k`` ordered boundary markings.
    """
    if kind not in ("strip", "disk"):
        raise ValueError("kind must be 'strip' or 'disk'")
    if n < 0 or max_vertices < 1:
        raise ValueError("need n >= 0 and max_vertices >= 1")
    found: dict = {}
    for total in range(1, max_vertices + 1):
        chain_lengths = range(1, total + 1) if kind == "strip" else [0]
        for m in chain_lengths:
            for t in _types_with_shape(n, total, m, kind, k):
                if validate(t) or not is_stable(t):
                    continue
                found.setdefault(canonical_form(t), t)
    return [found[key] for key in sorted(found)]


def _types_with_shape(n, total, m, kind, k):
    r = total - m
    chain = [f"s{i}" for i in range(m)]
    base_kinds = ["strip"] * m
    roots = chain if kind == "strip" else []
    if kind == "disk":
        if total < 1:
            return
        base_kinds = ["disk"]
        r = total - 1
    extra_ids = [f"v{i}" for i in range(r)]
    head = chain if kind == "strip" else ["v_root"]
    for extra_kinds in itertools.product(("disk", "sphere"), repeat=r):
        all_ids = head + extra_ids
        all_kinds = base_kinds + list(extra_kinds)
        parent_ranges = [range(len(head) + j) for j in range(r)]
        for parents in itertools.product(*parent_ranges):
            option_lists = []
            ok = True
            for j, p in enumerate(parents):
                opts = _attach_options(all_kinds[p], extra_kinds[j])
                if not opts:
                    ok = False
                    break
                option_lists.append(opts)
            if not ok:
                continue
            chain_opts = [CLASS_LENGTHS[c] for c in ("zero", "finite", "inf")]
            for chain_lengths in itertools.product(chain_opts, repeat=max(m - 1, 0)):
                for attach in itertools.product(*option_lists):
                    verts = [Vertex(v, kd) for v, kd in zip(all_ids, all_kinds)]
                    edges = [
                        Edge(f"w{i + 1}", chain[i], chain[i + 1], "boundary", chain_lengths[i])
                        for i in range(m - 1)
                    ]
                    for j, (p, (node, ln, side)) in enumerate(zip(parents, attach)):
                        edges.append(Edge(f"e{j}", all_ids[p], extra_ids[j], node, ln, side))
                    disk_ids = [v for v, kd in zip(all_ids, all_kinds) if kd == "disk"]
                    bchoices = itertools.product(disk_ids, repeat=k) if kind == "disk" else [()]
                    for bplace in bchoices:
                        for place in itertools.product(all_ids, repeat=n):
                            marks = [
                                Marking(f"z{i + 1}", place[i], "interior", label=i + 1)
                                for i in range(n)
                            ]
                            if kind == "strip":
                                marks.append(Marking("z-", chain[0], "boundary", role="in"))
                                marks.append(Marking("z+", chain[-1], "boundary", role="out"))
                            for i, v in enumerate(bplace):
                                marks.append(
                                    Marking(f"x{i + 1}", v, "boundary", label=i + 1, role="x")
                                )
                            yield CombType(verts, edges, marks, chain)


# ---------------------------------------------------------------------------
# JSON


def _length_to_json(length):
    if length is None:
        return None
    if length == INF:
        return "inf"
    return [length.numerator, length.denominator]


def _length_from_json(raw):
    if raw is None:
        return None
    if raw == "inf":
        return INF
    if isinstance(raw, list):
        return Fraction(raw[0], raw[1])
    return make_length(raw)


def type_to_json(t: CombType) -> dict:
    return {
        "vertices": [{"id": v.id, "kind": v.kind} for v in t.vertices],
        "edges": [
            {
                "id": e.id,
                "endpoints": [e.u, e.v],
                "node": e.node,
                "length": _length_to_json(e.length),
                "side": e.side,
            }
            for e in t.edges
        ],
        "markings": [
            {
                "id": m.id,
                "vertex": m.vertex,
                "kind": m.kind,
                "label": m.label,
                "tag": m.tag,
                "role": m.role,
                "side": m.side,
            }
            for m in t.markings
        ],
        "strip_chain": list(t.strip_chain),
    }


def type_from_json(data: dict) -> CombType:
    verts = [Vertex(v["id"], v["kind"]) for v in data.get("vertices", [])]
    edges = [
        Edge(
            e["id"],
            e["endpoints"][0],
            e["endpoints"][1],
            e.get("node", "boundary"),
            _length_from_json(e.get("length")),
            e.get("side"),
        )
        for e in data.get("edges", [])
    ]
    marks = []
    for m in data.get("markings", []):
        kind = m.get("kind", "interior")
        marks.append(
            Marking(
                m["id"],
                m["vertex"],
                kind,
                m.get("label"),
                m.get("tag", "none"),
                m.get("role", "mark" if kind == "interior" else "x"),
                m.get("side"),
            )
        )
    return CombType(verts, edges, marks, data.get("strip_chain", []))


def iter_census(n_max: int, max_vertices: int, kind: str = "strip") -> Iterable:
    for n in range(n_max + 1):
        yield from enumerate_types(n, max_vertices, kind)
