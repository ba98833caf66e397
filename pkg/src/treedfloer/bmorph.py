"""Elementary morphisms between combinatorial types, strata order, dimensions and signs.

Each elementary operation ``op(source, witness)`` returns a new type.  For
``collapse_edge``, ``make_finite`` and ``make_nonzero`` the source is the
more degenerate stratum: its dimension is one less than the target's.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from treedfloer.treegraph import (
    INF,
    CombType,
    Edge,
    Marking,
    TypeError_,
    Vertex,
    canonical_form,
    check_valid,
    forget_tail,
    is_stable,
    length_class,
    stratum_key,
    type_from_json,
    type_to_json,
)

MORPHISM_KINDS = ("cut_edge", "collapse_edge", "make_finite", "make_nonzero", "forget_tail")
FINITE = Fraction(1)


def _chain_for(t: CombType) -> list:
    """Recompute the strip chain by walking each component from its ``z-``."""
    old = {s: i for i, s in enumerate(t.strip_chain)}
    pieces = []
    for m in t.markings:
        if m.role != "in":
            continue
        walk, prev, cur = [], None, m.vertex
        while cur is not None:
            walk.append(cur)
            nxt = None
            for e in t.incident(cur):
                w = e.other(cur)
                if e.node == "boundary" and t.kind_of(w) == "strip" and w != prev:
                    nxt = w
            prev, cur = cur, nxt
        pieces.append(walk)
    pieces.sort(key=lambda p: min(old.get(s, len(old)) for s in p))
    return [s for p in pieces for s in p]


def _fresh(prefix: str, taken) -> str:
    if prefix not in taken:
        return prefix
    for i in itertools.count(1):
        cand = f"{prefix}{i}"
        if cand not in taken:
            return cand


# ---------------------------------------------------------------------------
# elementary morphisms


def _other_component_min_label(t: CombType, start: str, blocked: str) -> Optional[int]:
    seen, stack, labels = {start}, [start], []
    while stack:
        w = stack.pop()
        labels += [
            m.label for m in t.markings_at(w) if m.kind == "interior" and m.role == "mark"
        ]
        for e in t.incident(w):
            if e.id == blocked:
                continue
            x = e.other(w)
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return min(labels) if labels else None


def cut_edge(t: CombType, edge_id: str) -> CombType:
    """Replace a node by two semi-infinite tails.

    Allowed on interior nodes and on boundary nodes of infinite length.  A
    cut interior tail is labeled by the lowest interior label on the other
    side (None when there is none).
    """
    check_valid(t)
    e = t.edge(edge_id)
    if e.node == "boundary" and e.length != INF:
        raise TypeError_(
            f"cut_edge requires an interior node or a boundary node of length class inf "
            f"(edge {edge_id} has class {length_class(e.length)})"
        )
    ku, kv = t.kind_of(e.u), t.kind_of(e.v)
    tails = []
    if e.node == "interior":
        for a, b in ((e.u, e.v), (e.v, e.u)):
            label = _other_component_min_label(t, b, e.id)
            tails.append(Marking(f"{e.id}.{a}", a, "interior", label=label, role="tail"))
    elif ku == "strip" and kv == "strip":
        pos = {s: i for i, s in enumerate(t.strip_chain)}
        first, second = (e.u, e.v) if pos[e.u] < pos[e.v] else (e.v, e.u)
        tails.append(Marking(f"{e.id}.{first}", first, "boundary", role="out"))
        tails.append(Marking(f"{e.id}.{second}", second, "boundary", role="in"))
    else:
        for a in (e.u, e.v):
            side = e.side if t.kind_of(a) == "strip" else None
            tails.append(Marking(f"{e.id}.{a}", a, "boundary", role="tail", side=side))
    out = CombType(
        t.vertices,
        [x for x in t.edges if x.id != edge_id],
        list(t.markings) + tails,
        t.strip_chain,
    )
    check_valid(out)
    return out


def glue_tails(t: CombType, a: str, b: str, edge_id: Optional[str] = None) -> CombType:
    """Inverse of :func:`cut_edge`: join two tails on different components by a node."""
    check_valid(t)
    ma, mb = t.marking(a), t.marking(b)
    comps = t.components()
    ca = next(c for c in comps if ma.vertex in c)
    if mb.vertex in ca:
        raise TypeError_("gluing two tails of one component would create a cycle")
    if ma.kind != mb.kind:
        raise TypeError_("can only glue tails of the same kind")
    if edge_id is None:
        pa, pb = a.split(".")[0], b.split(".")[0]
        edge_id = pa if pa == pb else f"{a}~{b}"
    if ma.kind == "interior":
        edge = Edge(edge_id, ma.vertex, mb.vertex, "interior")
    else:
        roles = {ma.role, mb.role}
        if roles == {"in", "out"}:
            edge = Edge(edge_id, ma.vertex, mb.vertex, "boundary", INF)
        elif roles == {"tail"}:
            side = ma.side if ma.side is not None else mb.side
            if t.kind_of(ma.vertex) != "strip" and t.kind_of(mb.vertex) != "strip":
                side = None
            edge = Edge(edge_id, ma.vertex, mb.vertex, "boundary", INF, side)
        else:
            raise TypeError_("boundary tails must be an out/in pair or two plain tails")
    out = CombType(
        t.vertices,
        list(t.edges) + [edge],
        [m for m in t.markings if m.id not in (a, b)],
        t.strip_chain,
    )
    out = replace(out, strip_chain=tuple(_chain_for(out)))
    check_valid(out)
    return out


def _require_class(t: CombType, edge_id: str, cls: str, op: str) -> Edge:
    check_valid(t)
    e = t.edge(edge_id)
    if e.node != "boundary":
        raise TypeError_(
            f"{op} requires a boundary node of length class {cls}; interior nodes carry no metric"
        )
    if length_class(e.length) != cls:
        raise TypeError_(
            f"{op} requires length class {cls} (edge {edge_id} has class {length_class(e.length)})"
        )
    return e


def collapse_edge(t: CombType, edge_id: str) -> CombType:
    """Merge the endpoints of a boundary node of length zero."""
    e = _require_class(t, edge_id, "zero", "collapse_edge")
    ku, kv = t.kind_of(e.u), t.kind_of(e.v)
    if ku == "strip" and kv == "strip":
        pos = {s: i for i, s in enumerate(t.strip_chain)}
        keep, gone = (e.u, e.v) if pos[e.u] < pos[e.v] else (e.v, e.u)
    elif kv == "strip":
        keep, gone = e.v, e.u
    else:
        keep, gone = e.u, e.v
    onto_strip = t.kind_of(keep) == "strip" and t.kind_of(gone) == "disk"
    edges = []
    for x in t.edges:
        if x.id == edge_id:
            continue
        if gone in (x.u, x.v):
            u = keep if x.u == gone else x.u
            v = keep if x.v == gone else x.v
            side = x.side
            if onto_strip and x.node == "boundary":
                side = e.side
            x = replace(x, u=u, v=v, side=side)
        edges.append(x)
    marks = []
    for m in t.markings:
        if m.vertex == gone:
            if onto_strip and m.kind == "boundary":
                if m.role != "tail":
                    raise TypeError_("ordered boundary markings cannot move onto a strip")
                m = replace(m, vertex=keep, side=e.side)
            else:
                m = replace(m, vertex=keep)
        marks.append(m)
    out = CombType(
        [v for v in t.vertices if v.id != gone],
        edges,
        marks,
        [s for s in t.strip_chain if s != gone],
    )
    check_valid(out)
    return out


def make_finite(t: CombType, edge_id: str, length=FINITE) -> CombType:
    """Give an infinite boundary node a finite positive length."""
    _require_class(t, edge_id, "inf", "make_finite")
    length = Fraction(length)
    if length <= 0:
        raise ValueError("new length must be positive")
    return t.replace_edge(edge_id, length=length)


def make_nonzero(t: CombType, edge_id: str, length=FINITE) -> CombType:
    """Give a zero-length boundary node a finite positive length."""
    _require_class(t, edge_id, "zero", "make_nonzero")
    length = Fraction(length)
    if length <= 0:
        raise ValueError("new length must be positive")
    return t.replace_edge(edge_id, length=length)


_OPS = {
    "cut_edge": cut_edge,
    "collapse_edge": collapse_edge,
    "make_finite": make_finite,
    "make_nonzero": make_nonzero,
    "forget_tail": forget_tail,
}


@dataclass(frozen=True)
class BMorphism:
    kind: str
    source: CombType
    target: CombType
    witness: str

    def __post_init__(self):
        if self.kind not in MORPHISM_KINDS:
            raise ValueError(f"unknown morphism kind {self.kind!r}")

    def check(self) -> bool:
        """Re-apply the operation to ``source`` and compare with ``target`` up to isomorphism."""
        got = _OPS[self.kind](self.source, self.witness)
        if self.kind in ("make_finite", "make_nonzero"):
            return stratum_key(got) == stratum_key(self.target)
        return canonical_form(got) == canonical_form(self.target)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "witness": self.witness,
            "source": type_to_json(self.source),
            "target": type_to_json(self.target),
        }

    @classmethod
    def from_json(cls, data: dict) -> "BMorphism":
        return cls(
            data["kind"],
            type_from_json(data["source"]),
            type_from_json(data["target"]),
            data["witness"],
        )


def apply(kind: str, t: CombType, witness: str) -> BMorphism:
    return BMorphism(kind, t, _OPS[kind](t, witness), witness)


# ---------------------------------------------------------------------------
# stratification


def _elementary_images(t: CombType):
    """Types reached from ``t`` by one collapse_edge, make_finite or make_nonzero."""
    for e in t.edges:
        if e.node != "boundary":
            continue
        cls = length_class(e.length)
        if cls == "zero":
            yield collapse_edge(t, e.id)
            yield make_nonzero(t, e.id)
        elif cls == "inf":
            yield make_finite(t, e.id)


_REACH_CACHE: dict = {}


def reachable_strata(b: CombType) -> frozenset:
    """Stratum keys of every type reachable from ``b`` (including ``b``)."""
    start = stratum_key(b)
    hit = _REACH_CACHE.get(start)
    if hit is not None:
        return hit
    seen = {start}
    queue = deque([b])
    while queue:
        cur = queue.popleft()
        for nxt in _elementary_images(cur):
            key = stratum_key(nxt)
            if key not in seen:
                seen.add(key)
                queue.append(nxt)
    out = frozenset(seen)
    if len(_REACH_CACHE) < 4096:
        _REACH_CACHE[start] = out
    return out


def stratum_leq(a: CombType, b: CombType) -> bool:
    """True iff some sequence of collapse_edge / make_finite / make_nonzero maps ``b`` to ``a``.

    Types are compared up to isomorphism with lengths reduced to their
    class.  The relation is reflexive.
    """
    return stratum_key(a) in reachable_strata(b)


def dim_stratum(t: CombType) -> int:
    """Dimension of the stratum of a stable type.

    Local dimensions: strip ``b + 2i - 1`` (``b`` excludes the two chain
    ends), disk ``b + 2i - 3``, sphere ``2s - 6``.  Every boundary node of
    length class ``(0, inf)`` adds one.
    """
    if not is_stable(t):
        raise TypeError_("dim_stratum needs a stable type")
    total = 0
    for v in t.vertices:
        b, i = t.special_counts(v.id)
        if v.kind == "strip":
            total += b - t.chain_end_count(v.id) + 2 * i - 1
        elif v.kind == "disk":
            total += b + 2 * i - 3
        else:
            total += 2 * (b + i) - 6
    total += sum(1 for e in t.edges if length_class(e.length) == "finite")
    return total


def gluing_dim(t: CombType) -> int:
    check_valid(t)
    return sum(1 if e.node == "boundary" else 2 for e in t.edges)


def collapse_sign(t: CombType, edge_id: str) -> int:
    """Orientation sign of a chain-adjacent degeneration.

    Strip breaking and disk bubbles on boundary side 0 give ``+1``; disk
    bubbles on side 1 give ``-1``.
    """
    check_valid(t)
    e = t.edge(edge_id)
    kinds = {t.kind_of(e.u), t.kind_of(e.v)}
    if e.node != "boundary" or "strip" not in kinds or "sphere" in kinds:
        raise TypeError_("sign convention defined only for chain-adjacent degenerations")
    if length_class(e.length) not in ("zero", "inf"):
        raise TypeError_("collapse_sign needs a node of length class 0 or inf")
    if kinds == {"strip"}:
        return 1
    return 1 if e.side == 0 else -1


# ---------------------------------------------------------------------------
# codimension-one degenerations


@dataclass(frozen=True)
class Degeneration:
    morphism: BMorphism
    sign: Optional[int]

    def to_json(self) -> dict:
        d = self.morphism.to_json()
        d["sign"] = self.sign
        return d


def _attachments(t: CombType, v: str):
    """Non-chain attachments of a vertex: ('e', edge) and ('m', marking)."""
    out = []
    for e in t.incident(v):
        if not (t.kind_of(v) == "strip" and t.kind_of(e.other(v)) == "strip"):
            out.append(("e", e))
    for m in t.markings_at(v):
        if m.role not in ("in", "out"):
            out.append(("m", m))
    return out


def _att_bi(items):
    b = sum(1 for k, x in items if (x.node if k == "e" else x.kind) == "boundary")
    return b, len(items) - b


def _split(t: CombType, v: str, new_kind: str, moved, node_side, chain_back=None):
    """Split ``v`` moving attachments ``moved`` (and optionally the chain back end) to a new vertex."""
    vids = {x.id for x in t.vertices}
    ids = {x.id for x in t.edges} | {m.id for m in t.markings}
    nv = _fresh(f"{v}'", vids)
    ne = _fresh(f"n_{v}", ids)
    moved_e = {x.id for k, x in moved if k == "e"}
    moved_m = {x.id for k, x in moved if k == "m"}
    if chain_back is not None:
        moved_e |= {x.id for x in chain_back if isinstance(x, Edge)}
        moved_m |= {x.id for x in chain_back if isinstance(x, Marking)}
    edges = []
    for x in t.edges:
        if x.id in moved_e:
            u = nv if x.u == v else x.u
            w = nv if x.v == v else x.v
            side = x.side
            if new_kind == "disk" and t.kind_of(v) == "strip" and x.node == "boundary":
                side = None
            x = replace(x, u=u, v=w, side=side)
        edges.append(x)
    edges.append(Edge(ne, v, nv, "boundary", Fraction(0), node_side))
    marks = []
    for m in t.markings:
        if m.id in moved_m:
            side = m.side if new_kind == "strip" else None
            m = replace(m, vertex=nv, side=side)
        marks.append(m)
    verts = list(t.vertices) + [Vertex(nv, new_kind)]
    chain = list(t.strip_chain)
    if new_kind == "strip":
        chain.insert(chain.index(v) + 1, nv)
    src = CombType(verts, edges, marks, chain)
    return src, ne


def _inverse_collapses(t: CombType):
    for vx in t.vertices:
        v = vx.id
        if vx.kind == "sphere":
            continue
        atts = _attachments(t, v)
        idx = range(len(atts))
        if vx.kind == "strip":
            # disk bubble on side s carrying a subset of same-side attachments
            for s in (0, 1):
                movable = [
                    j
                    for j in idx
                    if atts[j][0] == "m" and atts[j][1].kind == "interior"
                    or atts[j][0] == "e" and atts[j][1].node == "interior"
                    or atts[j][0] == "e" and atts[j][1].side == s
                    or atts[j][0] == "m" and atts[j][1].role == "tail" and atts[j][1].side == s
                ]
                for r in range(1, len(movable) + 1):
                    for sub in itertools.combinations(movable, r):
                        yield _split(t, v, "disk", [atts[j] for j in sub], s)
            # strip breaking with a length-zero node
            back = [
                e
                for e in t.incident(v)
                if t.kind_of(e.other(v)) == "strip"
                and t.strip_chain.index(e.other(v)) > t.strip_chain.index(v)
            ] + [m for m in t.markings_at(v) if m.role == "out"]
            for r in range(0, len(atts) + 1):
                for sub in itertools.combinations(idx, r):
                    yield _split(t, v, "strip", [atts[j] for j in sub], None, back)
        else:
            for r in range(1, len(atts)):
                for sub in itertools.combinations(idx, r):
                    if 0 in sub:
                        continue
                    yield _split(t, v, "disk", [atts[j] for j in sub], None)


def boundary_degenerations(t: CombType) -> list:
    """All codimension-one degenerations of ``t`` with their orientation signs.

    Each entry is a morphism ``source -> t`` whose source is the degenerate
    stratum.  Signs are given for chain-adjacent nodes and None otherwise.
    """
    if not is_stable(t):
        raise TypeError_("boundary listing needs a stable type")
    found: dict = {}

    def record(kind, src, witness):
        if not is_stable(src):
            return
        key = (kind, stratum_key(src), stratum_key(t))
        if key in found:
            return
        try:
            sign = collapse_sign(src, witness)
        except TypeError_:
            sign = None
        found[key] = Degeneration(BMorphism(kind, src, t, witness), sign)

    for e in t.edges:
        if length_class(e.length) == "finite":
            record("make_nonzero", t.replace_edge(e.id, length=Fraction(0)), e.id)
            record("make_finite", t.replace_edge(e.id, length=INF), e.id)
    for src, witness in _inverse_collapses(t):
        if not check_valid_quiet(src):
            continue
        record("collapse_edge", src, witness)
    return [found[k] for k in sorted(found)]


def check_valid_quiet(t: CombType) -> bool:
    try:
        check_valid(t)
    except TypeError_:
        return False
    return True

