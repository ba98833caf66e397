"""Synthetic Floer datasets satisfying d^2 = 0, and single-point corruptions.

The complex is a tensor product of ``k`` two-term complexes ``a_i -> b_i``.
Each factor differential is a sum of a few records ``eps * sigma * q^E``;
product records carry the Koszul sign.  Every anticommuting square yields
1-cells joining its two broken configurations, one per reordering of the
combined markings.  Some 1-cells are subdivided through a pair of disk
bubbles exchanged by the involution, or through fake boundary points.
"""

from __future__ import annotations

import math
import random
from dataclasses import replace
from fractions import Fraction

from treedfloer.floercx import (
    CellComplex1D,
    Dataset,
    IntersectionPoint,
    OneCell,
    TrajectoryRecord,
    ZeroCell,
    concatenate,
)

CORRUPTIONS = (
    "record_sign",
    "record_delete",
    "record_energy",
    "record_marks",
    "cell_delete",
    "cell_flip",
    "fake_fiber",
    "bubble_flip",
)


def _bits(x: int, k: int) -> str:
    return "".join("1" if x >> i & 1 else "0" for i in range(k))


def generate_dataset(
    k: int = 6,
    terms: int = 3,
    seed: int = 0,
    bubble_rate: float = 0.15,
    fake_rate: float = 0.15,
    N: int = 2,
) -> Dataset:
    """Build a consistent dataset with ``2**k`` points and ``k * 2**(k-1) * terms`` records."""
    rng = random.Random(seed)
    factors = []
    for i in range(k):
        energies = sorted(rng.sample(range(1, 40), terms))
        factors.append(
            [
                (Fraction(e, 4), rng.choice((1, -1)), tuple(rng.randint(0, 1) for _ in range(3)))
                for e in energies
            ]
        )
    points = [IntersectionPoint("x" + _bits(x, k), bin(x).count("1") % N) for x in range(2**k)]
    records = {}
    for x in range(2**k):
        for i in range(k):
            if x >> i & 1:
                continue
            koszul = (-1) ** bin(x & ((1 << i) - 1)).count("1")
            y = x | (1 << i)
            for t, (E, eps, marks) in enumerate(factors[i]):
                rid = f"r{_bits(x, k)}.{i}.{t}"
                records[(x, i, t)] = TrajectoryRecord(
                    rid, "x" + _bits(x, k), "x" + _bits(y, k), E, eps * koszul, marks
                )

    zero, one = [], []
    counter = [0]

    def fresh(prefix):
        counter[0] += 1
        return f"{prefix}{counter[0]}"

    def strip_cell(u1, u2, order):
        glued, _ = concatenate(u1, u2)
        cid = f"c[{u1.id}#{u2.id}:{order}]"
        zero.append(
            ZeroCell(cid, "true_strip", glued.x_plus, glued.x_minus, glued.energy, glued.marks,
                     u1.id, u2.id, order)
        )
        return cid, glued

    for x in range(2**k):
        free = [i for i in range(k) if not x >> i & 1]
        for a_pos, i in enumerate(free):
            for j in free[a_pos + 1 :]:
                for ti in range(terms):
                    for tj in range(terms):
                        u1 = records[(x, i, ti)]
                        u2 = records[(x | 1 << i, j, tj)]
                        v1 = records[(x, j, tj)]
                        v2 = records[(x | 1 << j, i, ti)]
                        _, mult = concatenate(u1, u2)
                        for o in range(mult):
                            ca, ga = strip_cell(u1, u2, o)
                            cb, gb = strip_cell(v1, v2, o)
                            assert ga.sign == -gb.sign
                            start, end = (ca, cb) if ga.sign < 0 else (cb, ca)
                            _place_arc(rng, zero, one, fresh, start, end, ga, bubble_rate, fake_rate)
    return Dataset(
        tuple(points),
        tuple(sorted(records.values(), key=lambda r: r.id)),
        CellComplex1D(sorted(zero, key=lambda c: c.id), sorted(one, key=lambda c: c.id)),
        N,
    )


def _place_arc(rng, zero, one, fresh, start, end, glued, bubble_rate, fake_rate):
    marks = glued.marks
    roll = rng.random()
    common = dict(x_plus=glued.x_plus, x_minus=glued.x_minus, energy=glued.energy, marks=marks)
    if roll < bubble_rate:
        # arc passes through a disk bubble at infinity and its involution image
        side = rng.randint(0, 1)
        b1, b2 = fresh("b"), fresh("b")
        zero.append(ZeroCell(b1, "true_bubble", side=side, partner=b2, **common))
        zero.append(ZeroCell(b2, "true_bubble", side=side, partner=b1, **common))
        one.append(OneCell(fresh("a"), start, b1, marks))
        one.append(OneCell(fresh("a"), b2, end, marks))
    elif roll < bubble_rate + fake_rate:
        # arc crosses into a type with n_b extra bubble markings and back
        nb = rng.randint(1, 4)
        fiber = math.factorial(nb)
        fm1, fm2, fp1, fp2 = fresh("f"), fresh("f"), fresh("f"), fresh("f")
        plus_marks = marks + (nb,)
        zero.append(ZeroCell(fm1, "fake_minus", **common))
        zero.append(ZeroCell(fm2, "fake_minus", **common))
        zero.append(ZeroCell(fp1, "fake_plus", partner=fm1, fiber=fiber, **{**common, "marks": plus_marks}))
        zero.append(ZeroCell(fp2, "fake_plus", partner=fm2, fiber=fiber, **{**common, "marks": plus_marks}))
        one.append(OneCell(fresh("a"), start, fm1, marks))
        one.append(OneCell(fresh("a"), fp1, fp2, plus_marks))
        one.append(OneCell(fresh("a"), fm2, end, marks))
    else:
        one.append(OneCell(fresh("a"), start, end, marks))


def corrupt(ds: Dataset, kind: str, rng: random.Random):
    """Apply one corruption; return ``(dataset, ids)`` where ``ids`` locate the damage."""
    recs = list(ds.records)
    zero = list(ds.cells.zero_cells)
    one = list(ds.cells.one_cells)
    if kind.startswith("record_"):
        j = rng.randrange(len(recs))
        r = recs[j]
        if kind == "record_sign":
            recs[j] = replace(r, sign=-r.sign)
        elif kind == "record_delete":
            del recs[j]
        elif kind == "record_energy":
            recs[j] = replace(r, energy=r.energy + Fraction(1, 7))
        elif kind == "record_marks":
            recs[j] = replace(r, marks=(r.marks[0] + 1,) + r.marks[1:])
        return ds.with_records(recs), {r.id}
    if kind in ("cell_delete", "cell_flip"):
        j = rng.randrange(len(one))
        oc = one[j]
        if kind == "cell_delete":
            del one[j]
        else:
            one[j] = replace(oc, start=oc.end, end=oc.start)
        return ds.with_cells(one=one), {oc.start, oc.end}
    if kind == "fake_fiber":
        idx = [i for i, c in enumerate(zero) if c.kind == "fake_plus"]
        j = rng.choice(idx)
        c = zero[j]
        zero[j] = replace(c, fiber=c.fiber + 1)
        return ds.with_cells(zero=zero), {c.id}
    if kind == "bubble_flip":
        ids = {c.id for c in zero if c.kind == "true_bubble"}
        arcs = [i for i, oc in enumerate(one) if oc.end in ids or oc.start in ids]
        j = rng.choice(arcs)
        oc = one[j]
        one[j] = replace(oc, start=oc.end, end=oc.start)
        return ds.with_cells(one=one), {oc.start, oc.end}
    raise ValueError(f"unknown corruption {kind!r}")
