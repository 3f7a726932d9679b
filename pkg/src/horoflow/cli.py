"""Command-line front end: batch jobs emitting JSON lines or CSV."""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction

from . import bcz, checks, periodic
from .errors import HoroflowError
from .exact import format_rational
from .horocycle import Region, WPoint, nu_measure, return_time, step
from .reparam import acc_step

EXIT_USAGE = 2
EXIT_CHECK = 3


class UsageError(Exception):
    pass


def parse_number(text: str, mode: str = "exact"):
    """Exact mode accepts integers and "p/q" only; float mode accepts any real."""
    text = text.strip()
    if mode == "float":
        if "/" in text:
            return float(Fraction(text))
        return float(text)
    if any(ch in text.lower() for ch in ".e") or text.lower() in ("inf", "nan"):
        raise UsageError(f"exact mode needs an integer or p/q, got {text!r}")
    try:
        return Fraction(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def fmt(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, float):
        return x  # json/csv write the shortest round-trip repr
    return x


def parse_region(text: str) -> Region:
    """"g0,g1,r0,r1,eps" where eps lists sheets joined by "|", e.g. "0,1,1,2,+1|0"."""
    parts = text.split(",")
    if len(parts) != 5:
        raise UsageError(f"region needs 5 comma-separated fields, got {text!r}")
    g0, g1, r0, r1 = (parse_number(p) for p in parts[:4])
    try:
        eps = frozenset(int(e) for e in parts[4].split("|"))
    except ValueError:
        raise UsageError(f"bad sheet list {parts[4]!r}") from None
    if not eps <= {-1, 0, 1}:
        raise UsageError(f"bad sheet list {parts[4]!r}")
    return Region(g0, g1, r0, r1, eps)


class Writer:
    def __init__(self, fh, fmt_name: str, fields: list[str]):
        self.fh, self.fmt, self.fields = fh, fmt_name, fields
        if fmt_name == "csv":
            self.csv = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n",
                                      extrasaction="ignore")
            self.csv.writeheader()

    def write(self, rec: dict):
        rec = {k: fmt(v) for k, v in rec.items()}
        if self.fmt == "csv":
            self.csv.writerow({k: json.dumps(v) if isinstance(v, list) else v
                               for k, v in rec.items()})
        else:
            self.fh.write(json.dumps(rec) + "\n")


ORBIT_FIELDS = ["step_index", "gamma", "r", "eps", "branch", "matrix", "s_h"]


def orbit_record(i: int, p: WPoint) -> dict:
    st = step(p)
    return {"step_index": i, "gamma": p.gamma, "r": p.r, "eps": p.eps,
            "branch": st.branch.value, "matrix": list(st.matrix), "s_h": return_time(p)}


def cmd_orbit(a, out):
    p = WPoint(parse_number(a.gamma, a.mode), parse_number(a.r, a.mode), int(a.eps))
    w = Writer(out, a.format, ORBIT_FIELDS + (["tau", "snapped"] if a.accelerated else []))
    start = p
    for i in range(a.steps if not a.until_return else 10**9):
        if a.accelerated:
            res = acc_step(p)
            w.write({"step_index": i, "gamma": p.gamma, "r": p.r, "eps": p.eps,
                     "branch": "accelerated", "matrix": None, "s_h": None,
                     "tau": res.tau, "snapped": res.snapped})
            p = res.image
        else:
            w.write(orbit_record(i, p))
            p = step(p).image
        if a.until_return and p == start:
            break


def cmd_periodic(a, out):
    r = parse_number(a.r)
    orb = periodic.iterate_orbit(periodic.orbit_start(r))
    w = Writer(out, a.format, ["index", "gamma", "r", "eps"])
    for i, p in enumerate(orb.points):
        w.write({"index": i, "gamma": p.gamma, "r": p.r, "eps": p.eps})


def cmd_walk(a, out):
    r = parse_number(a.r, a.mode)
    w = Writer(out, a.format, ["index", "gamma", "eps"])
    for i, (g, e) in enumerate(periodic.dynamical_walk(r)):
        w.write({"index": i, "gamma": g, "eps": e})


def cmd_period_table(a, out):
    rmax, st = parse_number(a.rmax), parse_number(a.step)
    if st <= 0:
        raise UsageError("step must be positive")
    w = Writer(out, a.format, ["R", "per", "per_farey", "ratio"])
    R = st
    while R <= rmax:
        if R >= 1:
            per = periodic.period_formula(R)
            ratio = per * math.pi**2 / (12 * R * math.log(R)) if R > 1 else None
            w.write({"R": R, "per": per, "per_farey": periodic.period_via_farey_pairs(R),
                     "ratio": float(ratio) if ratio is not None else None})
        R += st


def cmd_equidist(a, out):
    regions = [parse_region(t) for t in a.region]
    Rs = [parse_number(t) for t in a.R]
    w = Writer(out, a.format, ["R", "region_id", "count", "predicted", "residual"])
    for R in Rs:
        stats = periodic.count_statistics(R, regions)
        for i, s in enumerate(stats):
            w.write({"R": R, "region_id": i, "count": s.count,
                     "predicted": s.predicted, "residual": s.residual})
        if a.format == "jsonl" and len(stats) == 2 and stats[1].count:
            w.write({"R": R, "ratio": stats[0].count / stats[1].count,
                     "target": nu_measure(regions[0]) / nu_measure(regions[1])})


def cmd_bcz(a, out):
    out.write(bcz.bcz_json(a.Q) + "\n")


def _volume_check(name, value, expected, tol):
    rel = abs(value - expected) / expected
    return {"check": name, "value": value, "expected": expected, "rel_error": rel, "ok": rel <= tol}


def cmd_measure_check(a, out):
    import numpy as np

    which = a.which
    results = []
    if which in ("horocycle-volume", "all"):
        results.append(_volume_check("horocycle-volume", checks.horocycle_suspension_volume(),
                                     checks.STATED_HOROCYCLE_VOLUME, a.tolerance))
    if which in ("geodesic-volume", "all"):
        results.append(_volume_check("geodesic-volume", checks.geodesic_suspension_volume(),
                                     checks.GEODESIC_VOLUME, a.tolerance))
    rng = np.random.default_rng(a.seed)
    for kind, regions, mc in (
            ("horocycle-invariance", checks.random_horocycle_regions, checks.horocycle_invariance_mc),
            ("geodesic-invariance", checks.random_geodesic_regions, checks.geodesic_invariance_mc)):
        if which not in (kind, "all"):
            continue
        zs = [mc(A, a.samples, rng).z for A in regions(a.rects, rng)]
        results.append({"check": kind, "max_abs_z": max(abs(z) for z in zs),
                        "z": [float(z) for z in zs], "ok": all(abs(z) < 3 for z in zs)})
    for rec in results:
        out.write(json.dumps(rec) + "\n")
    return 0 if all(r["ok"] for r in results) else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="horoflow", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
        p.add_argument("--out", help="output path (default: stdout)")
        return p

    p = add("orbit", cmd_orbit, "Iterate the horocycle section map from (gamma, r, eps); "
            "one record per step with branch, matrix and return time.")
    p.add_argument("--gamma", required=True)
    p.add_argument("--r", required=True)
    p.add_argument("--eps", default="1", choices=["-1", "0", "1", "+1"])
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--until-return", action="store_true", help="stop when the start point recurs")
    p.add_argument("--mode", choices=["exact", "float"], default="exact")
    p.add_argument("--accelerated", action="store_true",
                   help="iterate the accelerated map on gamma >= 1, r >= 1 instead")

    p = add("periodic", cmd_periodic, "Periodic orbit of (1, r, -1) in dynamical order.")
    p.add_argument("--r", required=True)

    p = add("walk", cmd_walk, "Dynamical order of the orbit of (1, r, -1) read off the permuted "
            "Stern-Brocot tree; float r drops the eps=0 points.")
    p.add_argument("--r", required=True)
    p.add_argument("--mode", choices=["exact", "float"], default="exact")

    p = add("period-table", cmd_period_table, "per(R) by coprime pairs and by Farey pairs, "
            "for R = step, 2 step, ... <= rmax, with the ratio to 12/pi^2 R log R.")
    p.add_argument("--rmax", required=True)
    p.add_argument("--step", default="1")

    p = add("equidist", cmd_equidist, "Orbit-point counts of the closed horocycle of parameter R "
            "in regions \"g0,g1,r0,r1,eps\" (eps may list sheets joined by |), against "
            "3/pi^2 R nu(region).")
    p.add_argument("--R", action="append", required=True)
    p.add_argument("--region", action="append", required=True)

    p = add("bcz", cmd_bcz, "Orbit of (1/Q, 1) under the BCZ map as JSON.")
    p.add_argument("--Q", type=int, required=True)

    p = add("measure-check", cmd_measure_check, "Suspension volumes by quadrature and Monte "
            "Carlo invariance of the section measures; exit 3 outside tolerance.")
    p.add_argument("--which", default="all", choices=["horocycle-volume", "geodesic-volume",
                                                      "horocycle-invariance",
                                                      "geodesic-invariance", "all"])
    p.add_argument("--tolerance", type=float, default=0.01)
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--rects", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        code = args.func(args, out)
    except (UsageError, HoroflowError, ValueError, ZeroDivisionError) as exc:
        print(f"horoflow {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if args.out:
            out.close()
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
