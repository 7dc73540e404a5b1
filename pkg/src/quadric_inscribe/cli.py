"""Command-line front end.

Subcommands: check, realize, angles, survey, export.  Reports are JSON with
a schema_version field; tabular results also land in CSV, and the report
path renders a matplotlib figure next to each output.  Exit codes: 0 pass,
1 malformed input or budget error, 2 failed check / infeasible / outside
the cone, 3 continuation breakdown.
"""

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import ads, catalog, conditions, figures, hp, jsonio
from .config import RunConfig, thread_cap
from .inscribe import InscribeError, export as export_mesh, import_mesh
from .inscribe import inscribe as build_mesh, verify_inscribed

SCHEMA_VERSION = 1


def _fail(msg, code=1):
    print(f"error: {msg}", file=sys.stderr)
    return code


def _load_json(path):
    try:
        return jsonio.read_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"{path}: {exc}") from exc


def _outpath(cfg, name):
    os.makedirs(cfg.outdir, exist_ok=True)
    return os.path.join(cfg.outdir, name)


def _report(cfg, name, doc):
    doc = {"schema_version": SCHEMA_VERSION, **doc}
    path = _outpath(cfg, name)
    jsonio.write_json(path, doc)
    return path


def _pmap(fn, items):
    cap = thread_cap()
    if cap <= 1 or len(items) <= 1:
        return [fn(t) for t in items]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------

def cmd_check(args, cfg):
    try:
        g = jsonio.graph_in(_load_json(args.graph))
    except (ValueError, conditions.GraphError) as exc:
        return _fail(f"{args.graph}: {exc}")
    if args.angles:
        try:
            theta = jsonio.angles_in(_load_json(args.angles))
        except ValueError as exc:
            return _fail(str(exc))
        missing = set(g.sorted_edges()) - set(theta)
        if missing:
            return _fail(f"{args.angles}: missing angles for edges {sorted(missing)}")
        checker = (conditions.check_rivin_conditions if args.system == "rivin"
                   else conditions.check_ads_conditions)
        try:
            rep = checker(g, theta, tol=cfg.tolerance, budget=cfg.circuit_budget)
        except conditions.TooLarge as exc:
            return _fail(str(exc))
        _report(cfg, "check_report.json",
                {"command": "check", "graph": args.graph, "report": rep.as_dict()})
        print(f"{args.system} conditions: {'pass' if rep.ok else 'FAIL'} "
              f"({rep.n_circuits} circuits checked)")
        return 0 if rep.ok else 2
    try:
        cert = conditions.feasibility(g, args.system, budget=cfg.circuit_budget)
    except conditions.TooLarge as exc:
        return _fail(str(exc))
    _report(cfg, "feasibility.json",
            {"command": "check", "graph": args.graph,
             "certificate": cert.as_dict(),
             "replay_ok": None if cert.witness is None else cert.replay(g).ok})
    verdict = "feasible" if cert.feasible else "infeasible"
    print(f"{args.system} system: {verdict} (margin {cert.margin})")
    return 0 if cert.feasible else 2


def cmd_realize(args, cfg):
    try:
        g = jsonio.graph_in(_load_json(args.graph))
        theta = jsonio.angles_in(_load_json(args.angles))
    except (ValueError, conditions.GraphError) as exc:
        return _fail(str(exc))
    theta = {e: float(v) for e, v in theta.items()}
    rng = np.random.default_rng(cfg.seed if cfg.seed is not None else 0)
    try:
        if args.geometry == "hp":
            poly = hp.hp_from_angles(g, theta, rng=rng, tol=cfg.tolerance)
            measured = hp.hp_angles(poly, g).theta
            extra = {"polyhedron": jsonio.hp_out(poly)}
        else:
            poly = ads.ads_from_angles(g, theta, rng=rng, tol=cfg.tolerance,
                                       step_floor=cfg.step_floor)
            m = ads.measure(poly, g)
            measured = m.theta
            extra = {"polyhedron": jsonio.ads_out(poly),
                     "relation_residual": m.relation_residual}
    except conditions.NotInCone as exc:
        print(f"angles rejected: {exc}", file=sys.stderr)
        return 2
    except (ads.StepCollapse, ads.CombinatoricsChanged) as exc:
        print(f"continuation failed at t = {exc.t_reached}: {exc}", file=sys.stderr)
        return 3
    except (hp.HPError, ads.AdSError) as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return 3
    mesh = build_mesh(poly, g, provenance={"source": args.angles,
                                           "geometry": args.geometry})
    rep = verify_inscribed(mesh, tol=cfg.tolerance)
    out = args.out or _outpath(cfg, "mesh.obj")
    if os.path.dirname(out):
        os.makedirs(os.path.dirname(out), exist_ok=True)
    with open(out, "wb") as fh:
        fh.write(export_mesh(mesh, "obj"))
    residual = max(abs(measured[e] - theta[e]) for e in theta)
    _report(cfg, os.path.basename(out) + ".report.json",
            {"command": "realize", "geometry": args.geometry,
             "measured_angles": jsonio.angles_out(measured),
             "angle_residual": residual,
             "verification": rep.as_dict(), **extra})
    if cfg.figures:
        figures.save_mesh_figure(out + ".png", mesh)
    print(f"mesh written to {out}; angle residual {residual:.3e}; "
          f"verification {'pass' if rep.ok else 'FAIL'}")
    return 0 if rep.ok else 3


def cmd_angles(args, cfg):
    try:
        doc = _load_json(args.polygons)
        p_left = jsonio.polygon_in(doc["p_L"])
        p_right = jsonio.polygon_in(doc["p_R"])
    except (ValueError, KeyError) as exc:
        return _fail(f"{args.polygons}: {exc}")
    try:
        p_left = p_left.normalize()
        p_right = p_right.normalize()
    except Exception as exc:
        print(f"invalid polygons: {exc}", file=sys.stderr)
        return 2
    P = ads.AdSPolyhedron.from_pair(p_left, p_right)
    if ads.is_degenerate(P):
        print("degenerate input: the two polygons coincide, laminations vanish",
              file=sys.stderr)
        return 2
    if not ads.validate(P):
        print("projections are not in matching cyclic order", file=sys.stderr)
        return 2
    m = ads.measure(P, tol=cfg.tolerance)
    plus, minus, _deg = ads.laminations_from_pair(p_left, p_right, tol=cfg.tolerance)
    _report(cfg, "angles.json",
            {"command": "angles",
             "theta": jsonio.angles_out(m.theta),
             "theta_plus": jsonio.angles_out(plus),
             "theta_minus": jsonio.angles_out(minus),
             "shears": {"s": jsonio.weights_out(m.s),
                        "s_left": jsonio.weights_out(m.s_left),
                        "s_right": jsonio.weights_out(m.s_right)},
             "relation_residual": m.relation_residual})
    with open(_outpath(cfg, "angles.csv"), "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["edge", "side", "theta", "s", "s_left", "s_right"])
        sides = m.combinatorics.edge_sides()
        for e in sorted(m.theta):
            tri_key = (e[0], e[1], sides[e])
            wr.writerow([f"{e[0]}-{e[1]}", sides[e], m.theta[e],
                         m.s[tri_key], m.s_left[tri_key], m.s_right[tri_key]])
    if cfg.figures:
        figures.save_polygons_figure(_outpath(cfg, "polygons.png"),
                                     p_left, p_right, plus, minus)
    print(f"angles written; earthquake relation residual {m.relation_residual:.3e}")
    return 0


def cmd_survey(args, cfg):
    n = args.n
    if n > 8:
        return _fail("the exhaustive catalog is built for n <= 8")
    graphs = catalog.polyhedra(n)

    def row(item):
        gid, pg = item
        cycles = conditions.hamiltonian_cycles(pg, budget=cfg.circuit_budget)
        per_cycle = []
        ads_any = False
        for cyc in cycles:
            eg = catalog.relabel_with_equator(pg, cyc)
            cert = conditions.feasibility(eg, "ads", budget=cfg.circuit_budget)
            per_cycle.append({"cycle": list(cyc), "feasible": cert.feasible,
                              "margin": str(cert.margin)})
            ads_any = ads_any or cert.feasible
        # the sphere-side system does not involve the equator, so any
        # Hamiltonian relabeling serves; without one the equivalence is
        # decided by Hamiltonicity alone
        rivin = None
        if cycles:
            eg = catalog.relabel_with_equator(pg, cycles[0])
            rivin = conditions.feasibility(eg, "rivin", budget=cfg.circuit_budget)
        return {
            "graph_id": gid,
            "n": n,
            "n_edges": len(pg.edges),
            "rivin_feasible": bool(rivin.feasible) if rivin else None,
            "n_hamiltonian_cycles": len(cycles),
            "ads_feasible": ads_any,
            "per_cycle": per_cycle,
        }

    rows = _pmap(row, list(enumerate(graphs)))
    violations = []
    for r in rows:
        expected = bool(r["rivin_feasible"]) and r["n_hamiltonian_cycles"] > 0
        if r["ads_feasible"] != expected:
            violations.append(r["graph_id"])
    _report(cfg, f"survey_n{n}.json",
            {"command": "survey", "n": n, "seed": cfg.seed,
             "rows": rows, "equivalence_violations": violations})
    with open(_outpath(cfg, f"survey_n{n}.csv"), "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["graph_id", "n", "n_edges", "rivin_feasible",
                     "n_hamiltonian_cycles", "ads_feasible"])
        for r in rows:
            wr.writerow([r["graph_id"], r["n"], r["n_edges"], r["rivin_feasible"],
                         r["n_hamiltonian_cycles"], r["ads_feasible"]])
    if cfg.figures:
        figures.save_survey_figure(_outpath(cfg, f"survey_n{n}.png"), rows)
    print(f"{len(rows)} graphs surveyed; equivalence violations: {violations or 'none'}")
    return 0 if not violations else 2


def cmd_export(args, cfg):
    fmt_in = "json" if args.mesh.endswith(".json") else "obj"
    try:
        with open(args.mesh, "rb") as fh:
            mesh = import_mesh(fh.read(), fmt_in)
    except (OSError, InscribeError) as exc:
        return _fail(f"{args.mesh}: {exc}")
    out = args.out or _outpath(cfg, "mesh." + ("obj" if args.format == "obj"
                                               else "quadric.json"))
    with open(out, "wb") as fh:
        fh.write(export_mesh(mesh, args.format))
    print(f"written {out}")
    return 0


# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="quadric-inscribe",
        description="inscribability checks and ideal-polyhedron construction "
                    "for the sphere, hyperboloid and cylinder")
    ap.add_argument("--tolerance", type=float, default=1e-10)
    ap.add_argument("--budget", type=int, default=10**7,
                    help="circuit enumeration budget")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--step-floor", type=float, default=1e-8,
                    help="smallest admissible continuation step")
    ap.add_argument("--out", dest="outdir", default=".",
                    help="output directory for reports and figures")
    ap.add_argument("--no-figures", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run the linear conditions or feasibility")
    c.add_argument("graph")
    c.add_argument("--angles", default=None)
    c.add_argument("--system", choices=("rivin", "ads"), required=True)

    r = sub.add_parser("realize", help="construct and inscribe a polyhedron")
    r.add_argument("graph")
    r.add_argument("angles")
    r.add_argument("--geometry", choices=("hp", "ads"), required=True)
    r.add_argument("--mesh-out", dest="out", default=None)

    a = sub.add_parser("angles", help="measure a polygon pair")
    a.add_argument("polygons")

    s = sub.add_parser("survey", help="catalog survey of the equivalence")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)

    e = sub.add_parser("export", help="convert a mesh between OBJ and JSON")
    e.add_argument("mesh")
    e.add_argument("--format", choices=("obj", "json"), required=True)
    e.add_argument("--file-out", dest="out", default=None)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    seed = getattr(args, "seed", None)
    try:
        cfg = RunConfig(tolerance=args.tolerance, circuit_budget=args.budget,
                        step_floor=args.step_floor, seed=seed, outdir=args.outdir,
                        figures=not args.no_figures)
    except ValueError as exc:
        return _fail(str(exc))
    handler = {
        "check": cmd_check,
        "realize": cmd_realize,
        "angles": cmd_angles,
        "survey": cmd_survey,
        "export": cmd_export,
    }[args.command]
    try:
        return handler(args, cfg)
    except ValueError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
