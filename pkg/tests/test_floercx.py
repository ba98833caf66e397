from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import sigma_by_hand
from treedfloer.floercx import (
    CellComplex1D,
    Coboundary,
    Dataset,
    DiskCount,
    IntersectionPoint,
    OneCell,
    SignedChain,
    TrajectoryRecord,
    ZeroCell,
    cancel_fake,
    coboundary,
    concatenate,
    degree_check,
    fundamental_class,
    involution_cancel,
    open_gw_count,
    sigma,
    verify_d_squared,
)
from treedfloer.floergen import CORRUPTIONS, corrupt, generate_dataset
from treedfloer.novikov import NovikovElement, q

PTS = [IntersectionPoint("x", 0), IntersectionPoint("y", 1), IntersectionPoint("z", 0)]


def rec(rid, xp, xm, E=1, s=1, marks=(0, 0, 0), index=1):
    return TrajectoryRecord(rid, xp, xm, Fraction(E), s, marks, index)


# ---------------------------------------------------------------------------
# coboundary


def test_empty_coboundary():
    d = coboundary(PTS, [], 5)
    assert d.nonzero() == []
    assert degree_check(d, PTS, 2) == []


def test_single_record_entry():
    d = coboundary(PTS, [rec("u", "x", "y", 1, 1, (1, 0, 0))], 5)
    assert d.entry("y", "x") == q(1).truncate(5)
    assert d.entry("y", "x").cutoff == 5


def test_opposite_records_cancel():
    d = coboundary(PTS, [rec("u", "x", "y", 2, 1), rec("v", "x", "y", 2, -1)], 5)
    assert d.entry("y", "x").is_zero()


def test_sigma_weights():
    d = coboundary(PTS, [rec("u", "x", "y", 1, -1, (2, 1, 3))], 5)
    assert d.entry("y", "x").coefficient(1) == -Fraction(1, 2 * 1 * 6)
    for marks in [(0, 0, 0), (3, 2, 1), (5, 0, 4)]:
        assert sigma(marks) == sigma_by_hand(marks)


def test_coboundary_errors():
    with pytest.raises(ValueError, match="index"):
        coboundary(PTS, [rec("u", "x", "y", index=2)], 5)
    with pytest.raises(ValueError, match="unknown"):
        coboundary(PTS, [rec("u", "x", "w")], 5)


def test_degree_check():
    d = coboundary(PTS, [rec("u", "x", "y")], 5)
    assert degree_check(d, PTS, 2, 1) == []
    d = coboundary(PTS, [rec("u", "x", "z")], 5)
    assert len(degree_check(d, PTS, 2, 1)) == 1
    assert degree_check(d, PTS, 2, 0) == []


records_st = st.lists(
    st.tuples(
        st.sampled_from(["x", "y", "z"]),
        st.sampled_from(["x", "y", "z"]),
        st.integers(0, 8),
        st.sampled_from([1, -1]),
        st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
    ),
    max_size=12,
)


@settings(max_examples=60)
@given(records_st, records_st)
def test_coboundary_is_linear(a, b):
    ra = [rec(f"a{i}", *r[:2], Fraction(r[2], 2), r[3], r[4]) for i, r in enumerate(a)]
    rb = [rec(f"b{i}", *r[:2], Fraction(r[2], 2), r[3], r[4]) for i, r in enumerate(b)]
    whole = coboundary(PTS, ra + rb, 5)
    assert whole.equals(coboundary(PTS, ra, 5) + coboundary(PTS, rb, 5))


# ---------------------------------------------------------------------------
# concatenation


def test_concatenate_examples():
    u1 = rec("u1", "x", "y", 1, 1, (1, 0, 0))
    u2 = rec("u2", "y", "z", 2, -1, (1, 0, 0))
    g, mult = concatenate(u1, u2)
    assert mult == 2
    assert g.energy == 3 and g.sign == -1 and g.marks == (2, 0, 0)
    _, mult = concatenate(rec("a", "x", "y"), rec("b", "y", "z"))
    assert mult == 1
    with pytest.raises(ValueError):
        concatenate(u2, u1)


@given(st.tuples(*[st.integers(0, 4)] * 3), st.tuples(*[st.integers(0, 4)] * 3))
def test_multiplicity_matches_sigma_ratio(m1, m2):
    g, mult = concatenate(rec("a", "x", "y", marks=m1), rec("b", "y", "z", marks=m2))
    assert mult == sigma(m1) * sigma(m2) / g.sigma


# ---------------------------------------------------------------------------
# fundamental class and cancellations


def zc(cid, kind="true_strip", **kw):
    return ZeroCell(cid, kind, **kw)


def test_fundamental_class_examples():
    cc = CellComplex1D([zc("a"), zc("b")], [OneCell("e", "b", "a")])
    fc = fundamental_class(cc)
    assert fc["a"] == 1 and fc["b"] == -1
    circle = CellComplex1D([], [OneCell("o", None, None, (1,))])
    assert fundamental_class(circle).support() == []
    cc = CellComplex1D([zc("a"), zc("v"), zc("b")], [OneCell("e1", "a", "v"), OneCell("e2", "v", "b")])
    fc = fundamental_class(cc)
    assert fc["v"] == 0 and fc.support() == ["a", "b"]


def fake_complex(n, nb, fiber=None):
    """start -> minus1 ... plus1 -> plus2 ... minus2 -> end."""
    fiber = sigma((nb,)) ** -1 if fiber is None else fiber
    zero = [
        zc("s"), zc("t"),
        zc("m1", "fake_minus", marks=(n,)), zc("m2", "fake_minus", marks=(n,)),
        zc("p1", "fake_plus", marks=(n, nb), partner="m1", fiber=int(fiber)),
        zc("p2", "fake_plus", marks=(n, nb), partner="m2", fiber=int(fiber)),
    ]
    one = [OneCell("a", "s", "m1", (n,)), OneCell("b", "p1", "p2", (n, nb)), OneCell("c", "m2", "t", (n,))]
    return CellComplex1D(zero, one)


@pytest.mark.parametrize("n,nb", [(n, nb) for n in range(4) for nb in range(5)])
def test_fake_cancellation_identity(n, nb):
    out = cancel_fake(fundamental_class(fake_complex(n, nb)))
    assert out.issues == ()
    assert out.support() == ["s", "t"]
    assert out["t"] == sigma((n,)) == -out["s"]


def test_fake_corrupted_fiber_reports_residue():
    out = cancel_fake(fundamental_class(fake_complex(2, 3, fiber=7)))
    assert [i.kind for i in out.issues] == ["fake_residue", "fake_residue"]


def test_fake_without_partner_raises():
    cc = CellComplex1D([zc("s"), zc("p", "fake_plus", fiber=2)], [OneCell("a", "s", "p")])
    with pytest.raises(ValueError, match="fake boundary has no forgetful partner"):
        cancel_fake(fundamental_class(cc))
    cc = CellComplex1D([zc("s"), zc("m", "fake_minus")], [OneCell("a", "s", "m")])
    with pytest.raises(ValueError, match="fake boundary has no forgetful partner"):
        cancel_fake(fundamental_class(cc))


def test_no_fake_cells_is_identity():
    cc = CellComplex1D([zc("a"), zc("b")], [OneCell("e", "a", "b", (1, 1))])
    ch = fundamental_class(cc)
    assert cancel_fake(ch).coeffs == ch.coeffs


def bubble_chain(a, b, partner_b="c1"):
    cells = {
        "c1": zc("c1", "true_bubble", partner="c2", side=0),
        "c2": zc("c2", "true_bubble", partner=partner_b, side=0),
    }
    return SignedChain({"c1": Fraction(a), "c2": Fraction(b)}, cells)


def test_involution_cancel_examples():
    out = involution_cancel(bubble_chain(Fraction(1, 2), Fraction(-1, 2)))
    assert out.support() == [] and out.issues == ()
    out = involution_cancel(bubble_chain(Fraction(1, 2), Fraction(1, 2)))
    assert [i.kind for i in out.issues] == ["bubble_residue"]
    empty = involution_cancel(SignedChain({}, {}))
    assert empty.support() == [] and empty.issues == ()


def test_involution_fixed_point_rejected():
    cells = {"c": zc("c", "true_bubble", partner="c")}
    with pytest.raises(ValueError, match="fixed-point free"):
        involution_cancel(SignedChain({"c": Fraction(1)}, cells))


def test_cancellations_idempotent_and_commute():
    ds = generate_dataset(k=3, terms=2, seed=5, bubble_rate=0.4, fake_rate=0.4)
    fc = fundamental_class(ds.cells)
    a = involution_cancel(cancel_fake(fc))
    b = cancel_fake(involution_cancel(fc))
    assert a.coeffs == b.coeffs
    assert cancel_fake(a).coeffs == a.coeffs
    assert involution_cancel(a).coeffs == a.coeffs
    assert all(ds.cells.cell_map()[c].kind == "true_strip" for c in a.support())


# ---------------------------------------------------------------------------
# d^2 end-to-end


def test_d_squared_on_hand_built_square():
    # x -> y1 -> z and x -> y2 -> z with anticommuting signs
    pts = [IntersectionPoint(i) for i in ("x", "y1", "y2", "z")]
    recs = [rec("a", "x", "y1", 1, 1), rec("b", "y1", "z", 2, 1), rec("c", "x", "y2", 2, 1), rec("d", "y2", "z", 1, -1)]
    cells = CellComplex1D(
        [zc("ab", x_plus="x", x_minus="z", energy=3, marks=(0, 0, 0), u1="a", u2="b"),
         zc("cd", x_plus="x", x_minus="z", energy=3, marks=(0, 0, 0), u1="c", u2="d")],
        [OneCell("arc", "cd", "ab", (0, 0, 0))],
    )
    rep = verify_d_squared(pts, recs, cells)
    assert rep.ok, rep.to_json()
    assert rep.stats["concatenations"] == 2


def test_d_squared_empty():
    assert verify_d_squared([], [], CellComplex1D()).ok


def test_generated_dataset_passes():
    ds = generate_dataset(k=4, terms=2, seed=1)
    rep = verify_d_squared(ds.points, ds.records, ds.cells)
    assert rep.ok, rep.issues[:3]


def test_deleted_cell_is_named():
    ds = generate_dataset(k=3, terms=2, seed=2, bubble_rate=0, fake_rate=0)
    victim = ds.cells.one_cells[0]
    bad = ds.with_cells(one=ds.cells.one_cells[1:])
    rep = verify_d_squared(bad.points, bad.records, bad.cells)
    assert not rep.ok
    assert {victim.start, victim.end} <= rep.ids()


@pytest.mark.parametrize("kind", CORRUPTIONS)
def test_each_corruption_detected_and_localized(kind):
    ds = generate_dataset(k=3, terms=2, seed=3, bubble_rate=0.3, fake_rate=0.3)
    rng = random.Random(kind)
    for _ in range(3):
        bad, ids = corrupt(ds, kind, rng)
        rep = verify_d_squared(bad.points, bad.records, bad.cells)
        assert not rep.ok
        assert ids & rep.ids(), (kind, ids, rep.issues[:3])


def test_d2_entries_are_exact_zero_elements():
    ds = generate_dataset(k=3, terms=2, seed=4)
    d = coboundary(ds.points, ds.records, 100)
    d2 = d.compose(d)
    assert all(v == NovikovElement(cutoff=100) for v in d2.entries.values())


def test_dataset_json_round_trip():
    ds = generate_dataset(k=2, terms=2, seed=0)
    back = Dataset.from_json(ds.to_json())
    assert back.to_json() == ds.to_json()


# ---------------------------------------------------------------------------
# open disk counts


def test_open_gw_examples():
    assert open_gw_count((1, 0), [DiskCount((1, 0), 2, 6)]) == 3
    assert open_gw_count((1, 0), []) == 0
    assert open_gw_count((1, 0), [DiskCount((1, 0), 1, 1), DiskCount((1, 0), 1, -1)]) == 0
    with pytest.raises(ValueError, match="mixed"):
        open_gw_count((1, 0), [DiskCount((1, 0), 1, 1), DiskCount((0, 1), 1, 1)])
    with pytest.raises(ValueError, match="boundary"):
        open_gw_count((1, 0), [DiskCount((1, 0), 1, 1, boundary_nonzero=False)])
