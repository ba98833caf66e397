"""Command-line entry point: JSON in, canonically sorted JSON out.

Exit codes: 0 success, 1 a check failed (report printed), 2 bad usage or input.
Set ``TREEDFLOER_LOG`` (e.g. ``DEBUG``) for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from treedfloer import SCHEMA_VERSION, adapted, bmorph, divisorcalc, floercx, floergen, treegraph
from treedfloer.novikov import NovikovElement, nv_invert_truncated, nv_valuation

log = logging.getLogger("treedfloer")


class InputError(Exception):
    pass


def _load(path_or_json: str):
    p = Path(path_or_json)
    try:
        if p.exists():
            return json.loads(p.read_text())
        return json.loads(path_or_json)
    except json.JSONDecodeError as exc:
        raise InputError(f"cannot parse JSON from {path_or_json}: {exc}") from exc


def _emit(payload: dict, out, fmt: str = "json") -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    if fmt == "table":
        # one line per top-level key; nested values as compact JSON
        for key in sorted(payload):
            v = payload[key]
            if not isinstance(v, str):
                v = json.dumps(v, sort_keys=True, separators=(",", ":"))
            out.write(f"{key}\t{v}\n")
        return
    out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _frac(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {s}") from exc


# ---------------------------------------------------------------------------
# handlers return (payload, ok)


def cmd_enumerate(args):
    types = treegraph.enumerate_types(args.n, args.max_vertices, args.kind, args.k)
    return {
        "command": "enumerate",
        "count": len(types),
        "types": [
            {
                "key": treegraph.canonical_form(t).decode(),
                "dim": bmorph.dim_stratum(t),
                "type": treegraph.type_to_json(t),
            }
            for t in types
        ],
    }, True


def _load_type(path):
    t = treegraph.type_from_json(_load(path))
    errs = treegraph.validate(t)
    return t, errs


def cmd_dim(args):
    t, errs = _load_type(args.type)
    if errs:
        return {"command": "dim", "violations": errs}, False
    stable = treegraph.is_stable(t)
    payload = {"command": "dim", "stable": stable, "gluing_dim": bmorph.gluing_dim(t)}
    if stable:
        payload["dim"] = bmorph.dim_stratum(t)
    return payload, stable


def cmd_boundary(args):
    t, errs = _load_type(args.type)
    if errs:
        return {"command": "boundary", "violations": errs}, False
    if not treegraph.is_stable(t):
        return {"command": "boundary", "violations": ["type is not stable"]}, False
    degs = bmorph.boundary_degenerations(t)
    return {
        "command": "boundary",
        "dim": bmorph.dim_stratum(t),
        "degenerations": [
            {
                "kind": d.morphism.kind,
                "witness": d.morphism.witness,
                "sign": d.sign,
                "source_dim": bmorph.dim_stratum(d.morphism.source),
                "source_key": treegraph.canonical_form(d.morphism.source).decode(),
                "source": treegraph.type_to_json(d.morphism.source),
            }
            for d in degs
        ],
    }, True


def cmd_classify(args):
    lt = adapted.LabeledType.from_json(_load(args.type))
    errs = adapted.label_violations(lt)
    if errs:
        return {"command": "classify", "violations": errs}, False
    payload = {
        "command": "classify",
        "index": adapted.index(lt),
        "energy": str(lt.energy),
        "uncrowded": adapted.is_uncrowded(lt),
        "adapted_violations": adapted.is_adapted(lt),
    }
    if adapted.index(lt) == 2:
        payload["classification"] = adapted.classify_index2_boundary(lt).to_json()
    return payload, True


def cmd_divisor_km(args):
    preset = _load(args.preset)
    pres = divisorcalc.LatticePresentation.from_json(preset["presentation"])
    k = int(preset.get("k", args.k))
    if pres.rational:
        res = divisorcalc.km_rational(pres, k)
        mode = "rational"
    else:
        interval = preset.get("e_interval")
        if interval is not None:
            interval = tuple(Fraction(str(x)) for x in interval)
        res = divisorcalc.km_irrational(pres, k, interval)
        mode = "irrational"
    return {"command": "divisor km", "mode": mode, "result": res.to_json()}, True


def cmd_divisor_degree(args):
    data = _load(args.classes)
    classes = [divisorcalc.ClassPairing.from_json(c) for c in data["classes"]]
    rows = []
    for c in classes:
        ok = divisorcalc.degree_ok(c)
        row = {"name": c.name, "kind": c.kind, "sufficient": ok}
        if c.kind == "sphere":
            row["expdim"] = divisorcalc.divisor_sphere_dim(c)
            row["max_tangency"] = divisorcalc.max_tangency(c)
            row["three_points"] = divisorcalc.three_point_conclusion(c)
        rows.append(row)
    failing = [r["name"] for r in rows if not r["sufficient"]]
    return {"command": "divisor degree", "classes": rows, "failing": failing}, not failing


def _dataset(path):
    return floercx.Dataset.from_json(_load(path))


def cmd_floer_d(args):
    ds = _dataset(args.dataset)
    d = floercx.coboundary(ds.points, ds.records, _frac(args.cutoff))
    N = args.N if args.N is not None else ds.N
    viol = floercx.degree_check(d, ds.points, N, args.shift)
    return {"command": "floer d", "matrix": d.to_json(), "degree_violations": viol}, not viol


def cmd_floer_d2(args):
    ds = _dataset(args.dataset)
    cutoff = _frac(args.cutoff) if args.cutoff is not None else None
    rep = floercx.verify_d_squared(ds.points, ds.records, ds.cells, cutoff)
    return {"command": "floer d2", "report": rep.to_json()}, rep.ok


def cmd_floer_ogw(args):
    data = _load(args.dataset)
    beta = tuple(int(x) for x in args.beta.split(",") if x.strip())
    disks = [floercx.DiskCount.from_json(d) for d in data.get("disks", [])]
    disks = [d for d in disks if tuple(d.class_id) == beta] if args.select else disks
    value = floercx.open_gw_count(beta, disks)
    return {"command": "floer ogw", "beta": list(beta), "value": str(value)}, True


def cmd_floer_generate(args):
    ds = floergen.generate_dataset(args.k, args.terms, args.seed, N=args.N or 2)
    log.info("generated dataset with seed %d", args.seed)
    return {"command": "floer generate", "seed": args.seed, "dataset": ds.to_json()}, True


def cmd_novikov(args):
    x = NovikovElement.from_json(_load(args.x))
    op = args.op
    if op == "valuation":
        v = nv_valuation(x)
        return {"command": "novikov", "op": op, "value": "inf" if v == float("inf") else str(v)}, True
    if op == "invert":
        if args.E is None:
            raise InputError("invert needs --E")
        res = nv_invert_truncated(x, _frac(args.E))
    else:
        if args.y is None:
            raise InputError(f"{op} needs --y")
        y = NovikovElement.from_json(_load(args.y))
        res = x + y if op == "add" else x * y
    return {"command": "novikov", "op": op, "value": res.to_json(), "text": str(res)}, True


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treedfloer", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("json", "table"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", help="census of stable combinatorial types")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--max-vertices", type=int, required=True)
    e.add_argument("--kind", choices=("strip", "disk"), default="strip")
    e.add_argument("--k", type=int, default=0, help="ordered boundary markings (disk kind)")
    e.set_defaults(func=cmd_enumerate)

    d = sub.add_parser("dim", help="stratum and gluing dimension of a type")
    d.add_argument("--type", required=True)
    d.set_defaults(func=cmd_dim)

    b = sub.add_parser("boundary", help="codimension-one degenerations with signs")
    b.add_argument("--type", required=True)
    b.set_defaults(func=cmd_boundary)

    c = sub.add_parser("classify", help="index, adaptedness and boundary class of a labeled type")
    c.add_argument("--type", required=True)
    c.set_defaults(func=cmd_classify)

    dv = sub.add_parser("divisor", help="divisor arithmetic")
    dsub = dv.add_subparsers(dest="divisor_command", required=True)
    km = dsub.add_parser("km")
    km.add_argument("--preset", required=True)
    km.add_argument("--k", type=int, default=1)
    km.set_defaults(func=cmd_divisor_km)
    dg = dsub.add_parser("degree")
    dg.add_argument("--classes", required=True)
    dg.set_defaults(func=cmd_divisor_degree)

    fl = sub.add_parser("floer", help="Floer complex checks")
    fsub = fl.add_subparsers(dest="floer_command", required=True)
    fd = fsub.add_parser("d")
    fd.add_argument("--dataset", required=True)
    fd.add_argument("--cutoff", required=True)
    fd.add_argument("--N", type=int, default=None)
    fd.add_argument("--shift", type=int, default=1)
    fd.set_defaults(func=cmd_floer_d)
    f2 = fsub.add_parser("d2")
    f2.add_argument("--dataset", required=True)
    f2.add_argument("--cutoff", default=None)
    f2.set_defaults(func=cmd_floer_d2)
    fo = fsub.add_parser("ogw")
    fo.add_argument("--dataset", required=True)
    fo.add_argument("--beta", required=True, help="comma separated class vector")
    fo.add_argument("--select", action="store_true", help="ignore disks of other classes")
    fo.set_defaults(func=cmd_floer_ogw)
    fg = fsub.add_parser("generate")
    fg.add_argument("--k", type=int, default=6)
    fg.add_argument("--terms", type=int, default=3)
    fg.add_argument("--seed", type=int, default=0)
    fg.add_argument("--N", type=int, default=None)
    fg.set_defaults(func=cmd_floer_generate)

    nv = sub.add_parser("novikov", help="Novikov field arithmetic")
    nv.add_argument("op", choices=("add", "mul", "invert", "valuation"))
    nv.add_argument("--x", required=True, help="JSON element or path")
    nv.add_argument("--y", default=None)
    nv.add_argument("--E", default=None)
    nv.set_defaults(func=cmd_novikov)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    level = os.environ.get("TREEDFLOER_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload, ok = args.func(args)
    except (InputError, KeyError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, treegraph.TypeError_, ZeroDivisionError) as exc:
        _emit({"command": args.command, "ok": False, "error": str(exc)}, out, args.format)
        return 1
    payload["ok"] = ok
    _emit(payload, out, args.format)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())
