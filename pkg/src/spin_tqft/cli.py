"""Command line front end.

Subcommands:

  validate       load an algebra (or constructor spec), run the axiom checks
                 and optionally the crossing axioms; exit 0 only if every
                 required flag passes
  partition      evaluate a partition function at one genus (optionally for a
                 spin structure parity), comparing against the closed form
                 when one is known for the constructor
  table          tabulate partition values over a genus range
  solve          enumerate the crossings of a small commutative algebra
  pachner-check  verify triangulation invariance under random local moves

Results print as deterministic text on stdout; ``--json FILE`` additionally
writes a machine-readable report (including wall time, which is kept out of
stdout so runs stay byte-stable).  Exit codes: 0 success, 1 a numeric or
axiom check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import constructors as co
from . import crossings as cx
from . import evaluator as ev
from . import formulas as fm
from . import solver as sv
from . import surfaces as su
from .algebra import (
    DEFAULT_TOL, algebra_from_json_dict, frobenius_form, validate,
)
from .errors import SpinTqftError

CORE_FLAGS = ("nondegenerate_B", "nondegenerate_C", "compatible", "associative", "special")
ALL_FLAGS = CORE_FLAGS + ("symmetric", "spherical", "separable_witness_ok")


def _fmt_complex(z, digits=12) -> str:
    z = complex(z)
    if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)):
        return f"{z.real:.{digits}g}"
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}j"


def _load_spec(path):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return data


class LoadedModel:
    """Algebra plus optional grading/bicharacters and closed-form metadata."""

    def __init__(self, alg, grading=None, bichars=None, meta=None):
        self.alg = alg
        self.grading = grading
        self.bichars = bichars or []
        self.meta = meta or {}


def build_from_spec(data) -> LoadedModel:
    if "kind" not in data:
        return LoadedModel(algebra_from_json_dict(data))
    kind = data["kind"]
    R = data.get("R", 1.0)
    if isinstance(R, list):
        R = complex(R[0], R[1])
    if kind == "matrix":
        n, ring = int(data["n"]), data["ring"]
        x = data.get("x")
        if x is not None:
            x = np.asarray(x, dtype=np.complex128)
        alg = co.matrix_algebra(n, ring, x=x, R=R)
        meta = {"blocks": [(ring, n)]} if x is None else {}
        return LoadedModel(alg, meta=meta)
    if kind == "group_cyclic":
        m = int(data["m"])
        alg, grading = co.group_algebra_cyclic(m, R=R)
        return LoadedModel(alg, grading, meta={"cyclic_m": m, "blocks": [("C", 1)] * m})
    if kind == "direct_sum":
        parts = [build_from_spec(p) for p in data["parts"]]
        alg = co.direct_sum([p.alg for p in parts])
        blocks = []
        for p in parts:
            blocks.extend(p.meta.get("blocks", []))
        meta = {"blocks": blocks} if all("blocks" in p.meta for p in parts) else {}
        return LoadedModel(alg, meta=meta)
    if kind in ("z2_matrix", "z2_complex", "klein_quaternionic", "gamma_n"):
        params = {k: int(data[k]) for k in ("n", "p", "q") if k in data}
        alg, grading, bichars = co.standard_gradings(kind, R=R, **params)
        meta = {"graded_kind": kind, **params}
        if kind == "z2_complex":
            meta["blocks"] = [("C_R", params["n"])]
        if kind == "klein_quaternionic":
            meta["blocks"] = [("H_R", params["n"])]
        return LoadedModel(alg, grading, bichars, meta)
    raise ValueError(f"unknown constructor kind {kind!r}")


def resolve_crossing(model: LoadedModel, spec: str) -> cx.CrossingMap:
    if spec == "canonical":
        return cx.canonical_crossing(model.alg.dim)
    if spec.startswith("bichar:"):
        name = spec.split(":", 1)[1]
        if model.grading is None:
            raise ValueError("algebra carries no grading; cannot build a graded crossing")
        for b in model.bichars:
            if b.name == name:
                return cx.crossing_from_bicharacter(model.grading, b)
        if name == "trivial":
            return cx.crossing_from_bicharacter(
                model.grading, co.trivial_bicharacter(model.grading.group))
        if name == "sign" and model.grading.group == (2,):
            return cx.crossing_from_bicharacter(model.grading, co.z2_sign_bicharacter())
        if name == "sign" and len(model.grading.group) == 1:
            # cyclic group: parity bicharacter exists for even order
            mlist = sv.enumerate_bicharacters(model.grading.group)
            for b in mlist:
                if abs(b.table[1, 1] + 1) < 1e-12:
                    return cx.crossing_from_bicharacter(model.grading, b)
        if name.startswith("klein"):
            parts = name.split(":", 1)[1].split(",")
            a, bb, g = (int(v) for v in parts)
            return cx.crossing_from_bicharacter(model.grading, co.klein_bicharacter(a, bb, g))
        if name == "gamma":
            nn = int(round(len(model.grading.block_of_basis) ** 0.5))
            return cx.crossing_from_bicharacter(model.grading, co.gamma_bicharacter(nn))
        raise ValueError(f"unknown bicharacter name {name!r}")
    with open(spec, "r", encoding="utf-8") as fh:
        return cx.crossing_from_json_dict(json.load(fh))


def closed_form(model: LoadedModel, g: int, parity, crossing_spec: str):
    """Reference value for known constructor/crossing combinations, or None."""
    meta = model.meta
    R = model.alg.R
    par = {1: 1, -1: -1}.get(parity, 1 if parity in (None, "even") else -1)
    if crossing_spec in (None, "canonical"):
        if "blocks" in meta:
            return fm.fhk_genus_value(meta["blocks"], R, g)
        return None
    if not crossing_spec.startswith("bichar:"):
        return None
    name = crossing_spec.split(":", 1)[1]
    kind = meta.get("graded_kind")
    if kind == "z2_complex":
        if name == "sign":
            return fm.sign_graded_complex_value(meta["n"], R, g, par)
        if name == "trivial":
            return fm.fhk_genus_value(meta["blocks"], R, g)
    if kind == "z2_matrix" and name == "sign":
        return fm.block_signature_value(meta["p"], meta["q"], R, g)
    if kind == "klein_quaternionic" and name.startswith("klein:"):
        a, b, gg = (int(v) for v in name.split(":", 1)[1].split(","))
        return fm.quaternionic_graded_value(meta["n"], R, g, par, a, b, gg)
    if kind == "gamma_n" and name == "gamma":
        return fm.clock_shift_value(meta["n"], R, g)
    return None


def _report_skeleton(args, inputs: dict) -> dict:
    blob = json.dumps(inputs, sort_keys=True, default=str).encode()
    return {
        "command": " ".join(sys.argv[1:]) if sys.argv[0] else "",
        "inputs_hash": hashlib.sha256(blob).hexdigest(),
        "results": {},
        "residuals": {},
    }


def _emit(report, json_path, t0):
    if json_path:
        report["wall_time_ms"] = round(1000.0 * (time.time() - t0), 3)
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True, default=str)


def cmd_validate(args) -> int:
    t0 = time.time()
    data = _load_spec(args.path)
    model = build_from_spec(data)
    rep = validate(model.alg, args.tol)
    report = _report_skeleton(args, {"path": args.path, "data": data, "tol": args.tol})
    flags = {k: bool(getattr(rep, k)) for k in ALL_FLAGS}
    report["results"]["flags"] = flags
    report["residuals"] = {k: float(v) for k, v in rep.residuals.items()}
    for name, val in sorted(flags.items()):
        print(f"{name}: {'pass' if val else 'FAIL'}")
    crossing_ok = True
    if args.crossing:
        cr = resolve_crossing(model, args.crossing)
        axr = cx.check_axioms(model.alg, cr, args.tol)
        ax_flags = {k: bool(getattr(axr, k)) for k in
                    ("compat_B", "compat_C", "rII", "rIII", "ribbon", "rI", "phi_squared_id")}
        report["results"]["crossing_flags"] = ax_flags
        report["residuals"].update({f"crossing_{k}": float(v)
                                    for k, v in axr.residuals.items()})
        for name, val in sorted(ax_flags.items()):
            print(f"crossing {name}: {'pass' if val else 'FAIL'}")
        crossing_ok = axr.spin_axioms()
    required = args.require.split(",") if args.require else list(CORE_FLAGS)
    ok = all(flags.get(k, False) for k in required if k) and crossing_ok
    report["results"]["ok"] = bool(ok)
    print(f"max residual: {rep.max_residual:.3e}")
    _emit(report, args.json, t0)
    return 0 if ok else 1


def cmd_partition(args) -> int:
    t0 = time.time()
    data = _load_spec(args.path)
    model = build_from_spec(data)
    g = args.genus
    report = _report_skeleton(args, {"path": args.path, "data": data, "genus": g,
                                     "spin": args.spin, "crossing": args.crossing,
                                     "tol": args.tol})
    if args.spin:
        if not args.crossing:
            raise ValueError("--spin requires --crossing")
        cr = resolve_crossing(model, args.crossing)
        z = ev.spin_partition(model.alg, cr, g, args.spin, args.tol)
    elif args.crossing:
        cr = resolve_crossing(model, args.crossing)
        z = ev.spin_partition(model.alg, cr, g, "even", args.tol)
    else:
        z = ev.fhk_partition(model.alg, g, args.tol) if g > 0 else ev.sphere_partition(model.alg)
    print(f"Z(genus={g}{', ' + args.spin if args.spin else ''}) = {_fmt_complex(z)}")
    report["results"]["Z"] = [z.real, z.imag]
    report["results"]["genus"] = g
    report["results"]["parity"] = {"even": 1, "odd": -1}.get(args.spin, 1)

    ref = closed_form(model, g, args.spin or "even", args.crossing)
    ok = True
    if ref is not None:
        diff = abs(z - ref) / max(1.0, abs(ref))
        print(f"closed form = {_fmt_complex(ref)}   |diff| = {diff:.3e}")
        report["results"]["closed_form"] = [complex(ref).real, complex(ref).imag]
        report["residuals"]["closed_form"] = float(diff)
        ok = diff <= args.tol
    _emit(report, args.json, t0)
    return 0 if ok else 1


def cmd_table(args) -> int:
    t0 = time.time()
    data = _load_spec(args.constructor)
    model = build_from_spec(data)
    lo, hi = (int(v) for v in args.genus_range.split(".."))
    report = _report_skeleton(args, {"constructor": args.constructor, "data": data,
                                     "range": [lo, hi], "crossing": args.crossing,
                                     "tol": args.tol})
    rows = []
    ok = True
    cr = resolve_crossing(model, args.crossing) if args.crossing else None
    for g in range(lo, hi + 1):
        if cr is None:
            z_even = ev.fhk_partition(model.alg, g) if g > 0 else ev.sphere_partition(model.alg)
            z_odd = None
        else:
            z_even = ev.spin_partition(model.alg, cr, g, "even", args.tol)
            z_odd = (ev.spin_partition(model.alg, cr, g, "odd", args.tol)
                     if g > 0 else None)
        row = {"genus": g, "Z_even": [z_even.real, z_even.imag]}
        line = f"g={g}  Z_even={_fmt_complex(z_even)}"
        if z_odd is not None:
            row["Z_odd"] = [z_odd.real, z_odd.imag]
            line += f"  Z_odd={_fmt_complex(z_odd)}"
        for par, z in (("even", z_even), ("odd", z_odd)):
            if z is None:
                continue
            ref = closed_form(model, g, par, args.crossing)
            if ref is not None:
                diff = abs(z - ref) / max(1.0, abs(ref))
                row[f"closed_{par}"] = [complex(ref).real, complex(ref).imag]
                ok = ok and diff <= args.tol
        rows.append(row)
        print(line)
    report["results"]["table"] = rows
    report["results"]["ok"] = bool(ok)
    _emit(report, args.json, t0)
    return 0 if ok else 1


def cmd_solve(args) -> int:
    t0 = time.time()
    data = _load_spec(args.path)
    model = build_from_spec(data)
    opts = sv.SolveOptions(tol=args.tol, starts=args.starts,
                           max_solutions=args.max_solutions)
    threads = int(os.environ.get("SPIN_TQFT_THREADS", "1") or "1")
    result = sv.solve_crossings(model.alg, opts, seed=args.seed, threads=threads)
    families = []
    for cr in result.solutions:
        c = sv.classify_solution(model.alg, cr)
        families.append(c.family)
    print(f"count: {result.count}")
    print(f"complete: {result.complete}")
    for fam in families:
        print(f"family: {fam}")
    report = _report_skeleton(args, {"path": args.path, "data": data,
                                     "starts": args.starts, "seed": args.seed,
                                     "tol": args.tol})
    report["results"] = {
        "count": result.count,
        "complete": result.complete,
        "seed": result.seed,
        "families": families,
        "solutions": [cx.crossing_to_json_dict(cr) for cr in result.solutions],
    }
    _emit(report, args.json, t0)
    return 0


def cmd_pachner_check(args) -> int:
    t0 = time.time()
    data = _load_spec(args.path)
    model = build_from_spec(data)
    tri0 = su.torus_two_triangle() if args.genus == 1 else su.polygon_triangulation(args.genus)
    z0 = ev.naive_partition(model.alg, tri0)
    rng = np.random.default_rng(args.seed)
    tri = su.random_pachner_moves(tri0, args.moves, rng)
    z1 = ev.naive_partition(model.alg, tri)
    diff = abs(z1 - z0) / max(1.0, abs(z0))
    print(f"Z before = {_fmt_complex(z0)}")
    print(f"Z after {args.moves} moves = {_fmt_complex(z1)}")
    print(f"relative difference = {diff:.3e}")
    report = _report_skeleton(args, {"path": args.path, "data": data,
                                     "genus": args.genus, "moves": args.moves,
                                     "seed": args.seed, "tol": args.tol})
    report["results"] = {"Z_before": [z0.real, z0.imag], "Z_after": [z1.real, z1.imag],
                         "triangles": tri.n_triangles}
    report["residuals"]["invariance"] = float(diff)
    _emit(report, args.json, t0)
    return 0 if diff <= args.tol else 1


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spin-tqft",
                                 description="two-dimensional state sum models")
    ap.add_argument("--tol", type=float, default=DEFAULT_TOL)
    ap.add_argument("--seed", type=int, default=12345)
    ap.add_argument("--json", metavar="FILE", default=None,
                    help="also write a JSON report to FILE")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the algebra axioms")
    p.add_argument("path")
    p.add_argument("--require", default=None,
                   help="comma separated flags that must pass (default: core axioms)")
    p.add_argument("--crossing", default=None)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("partition", help="partition function at one genus")
    p.add_argument("path")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--spin", choices=["even", "odd"], default=None)
    p.add_argument("--crossing", default=None,
                   help="canonical | bichar:NAME | path to a crossing JSON")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("table", help="tabulate over a genus range")
    p.add_argument("--constructor", required=True)
    p.add_argument("--genus-range", required=True, metavar="A..B")
    p.add_argument("--crossing", default=None)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("solve", help="enumerate crossings of a small algebra")
    p.add_argument("path")
    p.add_argument("--starts", type=int, default=400)
    p.add_argument("--max-solutions", type=int, default=64)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("pachner-check", help="triangulation invariance check")
    p.add_argument("path")
    p.add_argument("--genus", type=int, default=1)
    p.add_argument("--moves", type=int, default=10)
    p.set_defaults(func=cmd_pachner_check)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (json.JSONDecodeError, FileNotFoundError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (SpinTqftError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
