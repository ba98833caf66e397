"""Brute-force reference implementations used to cross-check the package.

Nothing here calls the enumerator or the canonical form under test.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from treedfloer.treegraph import INF, CombType, Edge, Marking, Vertex, validate

LENGTHS = (Fraction(0), Fraction(1), INF)


def _cls(length):
    if length is None:
        return None
    if length == INF:
        return "inf"
    return "zero" if length == 0 else "finite"


def stable_by_hand(t: CombType) -> bool:
    for v in t.vertices:
        b = i = 0
        for e in t.edges:
            if v.id in (e.u, e.v):
                if e.node == "boundary":
                    b += 1
                else:
                    i += 1
        for m in t.markings:
            if m.vertex == v.id:
                if m.kind == "boundary":
                    b += 1
                else:
                    i += 1
        need = b + i if v.kind == "sphere" else b + 2 * i
        if need < 3:
            return False
    return True


def _spanning_trees(nv):
    pairs = list(itertools.combinations(range(nv), 2))
    for es in itertools.combinations(pairs, nv - 1):
        parent = list(range(nv))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ok = True
        for a, b in es:
            ra, rb = find(a), find(b)
            if ra == rb:
                ok = False
                break
            parent[ra] = rb
        if ok:
            yield es


def _edge_options(ka, kb):
    opts = []
    if "sphere" in (ka, kb):
        opts.append(("interior", None, None))
    else:
        sides = (0, 1) if {ka, kb} == {"strip", "disk"} else (None,)
        for ln in LENGTHS:
            for s in sides:
                opts.append(("boundary", ln, s))
    return opts


def _chain(verts, edges, zminus):
    kinds = dict(verts)
    walk, prev, cur = [], None, zminus
    while cur is not None:
        walk.append(cur)
        nxt = None
        for e in edges:
            if cur in (e.u, e.v):
                w = e.v if e.u == cur else e.u
                if kinds[w] == "strip" and w != prev and e.node == "boundary":
                    nxt = w
        prev, cur = cur, nxt
        if len(walk) > len(verts):
            break
    rest = [v for v, k in verts if k == "strip" and v not in walk]
    return walk + rest


def all_labeled_strip_types(n: int, nv: int):
    """Every connected labeled strip type on ``nv`` vertices passing the validator."""
    ids = [f"u{i}" for i in range(nv)]
    for kinds in itertools.product(("strip", "disk", "sphere"), repeat=nv):
        if "strip" not in kinds:
            continue
        strips = [ids[i] for i in range(nv) if kinds[i] == "strip"]
        verts = list(zip(ids, kinds))
        for tree in _spanning_trees(nv):
            opt_lists = [_edge_options(kinds[a], kinds[b]) for a, b in tree]
            for attrs in itertools.product(*opt_lists):
                edges = [
                    Edge(f"g{j}", ids[a], ids[b], node, ln, side)
                    for j, ((a, b), (node, ln, side)) in enumerate(zip(tree, attrs))
                ]
                for zm, zp in itertools.product(strips, repeat=2):
                    chain = _chain(verts, edges, zm)
                    for place in itertools.product(ids, repeat=n):
                        marks = [Marking("zm", zm, "boundary", role="in"),
                                 Marking("zp", zp, "boundary", role="out")]
                        marks += [Marking(f"i{j + 1}", place[j], "interior", label=j + 1) for j in range(n)]
                        t = CombType([Vertex(v, k) for v, k in verts], edges, marks, chain)
                        if not validate(t):
                            yield t


def _vertex_signature(t, v):
    return (
        t.kind_of(v),
        tuple(sorted((m.kind, m.role, m.label or 0, m.tag, m.side if m.side is not None else -1)
                     for m in t.markings if m.vertex == v)),
    )


def _edge_signature(e):
    return (e.node, _cls(e.length), e.side)


def invariant(t: CombType):
    return (
        tuple(sorted(_vertex_signature(t, v.id) for v in t.vertices)),
        tuple(sorted((_edge_signature(e) for e in t.edges), key=repr)),
    )


def isomorphic(a: CombType, b: CombType, exact_lengths: bool = False) -> bool:
    """Search all vertex bijections for one preserving every label."""
    if len(a.vertices) != len(b.vertices) or len(a.edges) != len(b.edges):
        return False
    av = [v.id for v in a.vertices]
    bv = [v.id for v in b.vertices]
    sa = {v: _vertex_signature(a, v) for v in av}
    sb = {v: _vertex_signature(b, v) for v in bv}

    def ekey(e, f):
        base = (tuple(sorted((f(e.u), f(e.v)))),)
        ln = e.length if exact_lengths else _cls(e.length)
        return base + (e.node, ln, e.side)

    bedges = sorted(repr(ekey(e, lambda x: x)) for e in b.edges)
    for perm in itertools.permutations(bv):
        f = dict(zip(av, perm))
        if any(sa[v] != sb[f[v]] for v in av):
            continue
        if sorted(repr(ekey(e, lambda x: f[x])) for e in a.edges) == bedges:
            return True
    return False


def quotient(types, exact_lengths=False):
    """Isomorphism classes by explicit search, bucketed by a cheap invariant."""
    buckets: dict = {}
    reps = []
    for t in types:
        key = invariant(t)
        bucket = buckets.setdefault(key, [])
        if any(isomorphic(t, r, exact_lengths) for r in bucket):
            continue
        bucket.append(t)
        reps.append(t)
    return reps


def brute_census(n: int, max_vertices: int):
    out = []
    for nv in range(1, max_vertices + 1):
        out += [t for t in all_labeled_strip_types(n, nv) if stable_by_hand(t)]
    return quotient(out)


# ---------------------------------------------------------------------------
# divisor arithmetic


def least_k_prime(t0, k, omegas, bound=10**4):
    for kp in range(1, bound + 1):
        if all((t0 * k * kp * w).denominator == 1 for w in omegas):
            return kp
    return None


def least_k_double_prime(residues, bound=10**4):
    for kpp in range(1, bound + 1):
        if all((kpp * r).denominator == 1 for r in residues):
            return kpp
    return None


def least_km_total(t0, k, ns, omegas, bound=10**4):
    """Least K with every holonomy ``t0*k*K*w_i/n_i`` integral."""
    for K in range(1, bound + 1):
        if all((Fraction(t0 * k * K, n) * w).denominator == 1 for n, w in zip(ns, omegas)):
            return K
    return None


def least_km_irrational(ns, ms, bound=10**4):
    for K in range(1, bound + 1):
        if all((K * m) % n == 0 for n, m in zip(ns, ms)):
            return K
    return None


def sigma_by_hand(marks):
    return Fraction(1, math.prod(math.factorial(m) for m in marks))


# ---------------------------------------------------------------------------
# random types


def random_stable_type(rng, n_max=4, v_max=4, tries=500):
    """A random valid stable strip type with concrete lengths."""
    from treedfloer.treegraph import is_stable

    lengths = [Fraction(0), Fraction(1, 2), Fraction(2), Fraction(3), INF]
    for _ in range(tries):
        nv = rng.randint(1, v_max)
        m = rng.randint(1, nv)
        ids = [f"s{i}" for i in range(m)] + [f"v{i}" for i in range(nv - m)]
        kinds = ["strip"] * m + [rng.choice(("disk", "sphere")) for _ in range(nv - m)]
        edges = [Edge(f"w{i}", ids[i], ids[i + 1], "boundary", rng.choice(lengths)) for i in range(m - 1)]
        for j in range(m, nv):
            p = rng.randrange(j)
            if kinds[j] == "sphere":
                edges.append(Edge(f"e{j}", ids[p], ids[j], "interior"))
            else:
                side = rng.randint(0, 1) if kinds[p] == "strip" else None
                edges.append(Edge(f"e{j}", ids[p], ids[j], "boundary", rng.choice(lengths), side))
        n = rng.randint(0, n_max)
        marks = [Marking("z-", ids[0], "boundary", role="in"),
                 Marking("z+", ids[m - 1], "boundary", role="out")]
        marks += [Marking(f"z{i}", rng.choice(ids), "interior", label=i) for i in range(1, n + 1)]
        t = CombType([Vertex(i, k) for i, k in zip(ids, kinds)], edges, marks, ids[:m])
        if not validate(t) and is_stable(t):
            return t
    raise RuntimeError("no stable type found")
