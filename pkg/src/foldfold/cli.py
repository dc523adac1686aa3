"""Batch command-line front end.

Subcommands: classify, curves, manifold, melnikov, canard, simulate,
portrait, sweep, reproduce.  Output is deterministic: fixed float
formatting, no timestamps; ``reproduce`` exits with the number of failed
rows so CI can gate on it.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import FoldFoldError, UsageError
from .canard import canard_constants, numeric_canard
from .dynamics import (B_coefficient, big_orbit_side, find_periodic_orbit,
                       integrate)
from .equilibria import chart, classify_region, find_critical_point
from .filippov import diagnose
from .melnikov import build_profile, cycle_zeros, hopf_criticality, melnikov, saddle_node
from .regularize import RegularizedSystem, get_transition
from .scenarios import REPRODUCE_IDS, get_scenario, load_scenario_json
from .slowfast import critical_manifold


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return f"{x:.12g}"


def _emit(args, name: str, text: str) -> None:
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, name)
        with open(path, "w") as fh:
            fh.write(text)
        print(path)
    else:
        sys.stdout.write(text)


def _resolve_scenario(args):
    if args.scenario_file:
        return load_scenario_json(args.scenario_file)
    return get_scenario(args.scenario)


def _family_phi(args):
    sc = _resolve_scenario(args)
    phi = get_transition(args.phi or sc.default_phi)
    return sc, sc.family(), phi


def _add_common(p, alpha=False, eps=False, eps_many=False):
    p.add_argument("--scenario", default="ii-basic")
    p.add_argument("--scenario-file", default=None,
                   help="path to a scenario JSON (overrides --scenario)")
    p.add_argument("--phi", default=None, help="transition label or omit for the default")
    if alpha:
        p.add_argument("--alpha", type=float, default=0.01)
    if eps:
        p.add_argument("--epsilon", type=float, default=0.006)
    if eps_many:
        p.add_argument("--epsilon", type=float, action="append", default=None)
    p.add_argument("--out", default=None, help="directory for output files")
    p.add_argument("--format", default=None, choices=("csv", "json", "svg"))


def cmd_classify(args) -> int:
    sc, family, _ = _family_phi(args)
    diag = diagnose(family)
    payload = {"scenario": sc.id, **diag.as_dict()}
    _emit(args, f"{sc.id}_classify.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_curves(args) -> int:
    sc, family, phi = _family_phi(args)
    ch = chart(family, phi)
    payload = {
        "scenario": sc.id, "phi": phi.label,
        "vstar": ch.vstar, "xstar": ch.xstar, "xbar": ch.xbar,
        "M_of_Z": ch.M_of_Z, "N_of_ZZt": ch.N_of_ZZt,
        "D_coeff": ch.D_coeff, "delta_H": ch.delta_H,
        "hopf_criticality": ch.hopf_criticality,
        "numeric_H": [[e, a] for e, a in ch.numeric_H],
        "fold_class": ch.fold_class,
    }
    delta_C = None
    if ch.fold_class == "visible-invisible" and ch.detZx0 < 0:
        delta_C = canard_constants(family, phi).delta_C
        payload["delta_C"] = delta_C
    rows = ["epsilon,alpha_D_minus,alpha_D_plus,alpha_H,alpha_C"]
    for eps in (1e-3, 3e-3, 6e-3, 1e-2):
        a_d = math.sqrt(eps / ch.D_coeff) if ch.D_coeff > 0 else None
        rows.append(",".join([
            _fmt(eps), _fmt(-a_d if a_d else None), _fmt(a_d),
            _fmt(ch.delta_H * eps), _fmt(delta_C * eps if delta_C is not None else None)]))
    if args.format != "json":
        _emit(args, f"{sc.id}_{phi.label}_curves.csv", "\n".join(rows) + "\n")
    if args.format != "csv":
        _emit(args, f"{sc.id}_{phi.label}_curves.json",
              json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_manifold(args) -> int:
    sc, family, phi = _family_phi(args)
    reg = RegularizedSystem(family, phi, args.alpha, args.epsilon)
    man = critical_manifold(reg)
    lo, hi = sorted(man.endpoints)
    margin = 1e-6 * max(1.0, hi - lo)
    xs = np.linspace(lo + margin, hi - margin, 200)
    rows = ["x,m0,stability"]
    for x in xs:
        try:
            rows.append(f"{_fmt(x)},{_fmt(man.m0_alpha(x))},{man.stability(x)}")
        except FoldFoldError:
            rows.append(f"{_fmt(x)},,")
    _emit(args, f"{sc.id}_{phi.label}_manifold.csv", "\n".join(rows) + "\n")
    return 0


def cmd_melnikov(args) -> int:
    sc, family, phi = _family_phi(args)
    prof = build_profile(family, phi)
    deltas = args.delta or [prof.delta_H]
    summary = {"scenario": sc.id, "phi": phi.label, "delta_H": prof.delta_H,
               "criticality": hopf_criticality(prof), "zeros": {}, "saddle_node": None}
    lines = ["delta,v0,M"]
    grid = np.linspace(prof.vstar + 1e-4, prof.domain_top, args.n)
    for d in deltas:
        for v0 in grid:
            lines.append(f"{_fmt(d)},{_fmt(v0)},{_fmt(melnikov(prof, float(v0), d))}")
        summary["zeros"][_fmt(d)] = [[v, s] for v, s in cycle_zeros(prof, d)]
    try:
        vs, ds = saddle_node(prof)
        summary["saddle_node"] = {"v": vs, "delta": ds}
    except FoldFoldError:
        pass
    _emit(args, f"{sc.id}_{phi.label}_melnikov.csv", "\n".join(lines) + "\n")
    _emit(args, f"{sc.id}_{phi.label}_melnikov.json",
          json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_canard(args) -> int:
    sc, family, phi = _family_phi(args)
    rep = canard_constants(family, phi)
    eps_list = args.epsilon or [1e-3]
    numeric = [[eps, numeric_canard(family, phi, eps)] for eps in eps_list]
    payload = {
        "scenario": sc.id, "phi": phi.label,
        "delta_C_closed": rep.delta_C,
        "delta_C_numeric": numeric,
        "gap_slope": rep.gap_slope_C,
        "constants": {"M0": rep.M0, "M1": rep.M1, "M2": rep.M2,
                      "M3": rep.M3, "M4": rep.M4},
    }
    _emit(args, f"{sc.id}_{phi.label}_canard.json",
          json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_simulate(args) -> int:
    sc, family, phi = _family_phi(args)
    reg = RegularizedSystem(family, phi, args.alpha, args.epsilon)
    traj = integrate(reg, (args.x0, args.v0), args.time)
    rows = ["t,x,v"] + [f"{_fmt(t)},{_fmt(x)},{_fmt(v)}"
                        for t, x, v in zip(traj.t, traj.x, traj.v)]
    _emit(args, f"{sc.id}_{phi.label}_trajectory.csv", "\n".join(rows) + "\n")
    events = [{"t": e.t, "x": e.x, "v": e.v, "which": e.which, "direction": e.direction}
              for e in traj.events]
    _emit(args, f"{sc.id}_{phi.label}_events.json",
          json.dumps(events, indent=2, sort_keys=True) + "\n")
    return 0


def _svg_polyline(points, color, width=0.8):
    pts = " ".join(f"{x:.3f},{y:.3f}" for x, y in points)
    return f'<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{pts}"/>'


def cmd_portrait(args) -> int:
    sc, family, phi = _family_phi(args)
    reg = RegularizedSystem(family, phi, args.alpha, args.epsilon)
    W, H = 640.0, 480.0
    x_rng = (-0.5, 0.5)
    v_rng = (-3.0, 3.0)

    def to_px(x, v):
        px = (x - x_rng[0]) / (x_rng[1] - x_rng[0]) * W
        py = H - (v - v_rng[0]) / (v_rng[1] - v_rng[0]) * H
        return px, py

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W:.0f}" height="{H:.0f}" '
             f'viewBox="0 0 {W:.0f} {H:.0f}">',
             '<rect width="100%" height="100%" fill="white"/>']
    for v_edge in (-1.0, 1.0):
        parts.append(_svg_polyline([to_px(x_rng[0], v_edge), to_px(x_rng[1], v_edge)],
                                   "#bbbbbb"))
    man = critical_manifold(reg)
    lo, hi = sorted(man.endpoints)
    pts = []
    for x in np.linspace(lo + 1e-6, hi - 1e-6, 120):
        try:
            pts.append(to_px(x, man.m0_alpha(x)))
        except FoldFoldError:
            pass
    if pts:
        parts.append(_svg_polyline(pts, "#cc3333", 1.2))
    for x0 in np.linspace(x_rng[0] * 0.8, x_rng[1] * 0.8, args.grid):
        for v0 in (-2.5, 2.5):
            try:
                traj = integrate(reg, (x0, v0), args.time)
            except FoldFoldError:
                continue
            parts.append(_svg_polyline([to_px(x, v) for x, v in zip(traj.x, traj.v)],
                                       "#3355aa", 0.6))
    parts.append("</svg>")
    _emit(args, f"{sc.id}_{phi.label}_portrait.svg", "\n".join(parts) + "\n")
    return 0


def cmd_sweep(args) -> int:
    from .filippov import unfolding_return_fixed_point

    sc, family, phi = _family_phi(args)
    eps = args.epsilon
    rows = ["alpha,kind,n_orbits,stabilities"]
    if args.n > 0:
        ch = chart(family, phi, criticality=False, numeric_eps=())
        prof = build_profile(family, phi)
        for alpha in np.linspace(args.alpha_min, args.alpha_max, args.n):
            kind = classify_region(ch, float(alpha), eps)
            reg = RegularizedSystem(family, phi, float(alpha), eps)
            seeds = [(v0, 0.25) for v0, _ in cycle_zeros(prof, float(alpha) / eps,
                                                         n_grid=150)]
            if ch.fold_class == "invisible-invisible" and alpha != 0.0:
                # the crossing-cycle continuation can sit past the Melnikov
                # scan window; seed it from the nonsmooth fixed point
                try:
                    f_alpha = unfolding_return_fixed_point(family, float(alpha))
                except FoldFoldError:
                    f_alpha = None
                if f_alpha is not None:
                    guess = 0.6 * f_alpha**2 / eps
                    seeds.append((guess, 0.9 * guess))
            orbits = []
            for v0, width in seeds:
                try:
                    cert = find_periodic_orbit(reg, v0, bracket_width=width)
                except FoldFoldError:
                    continue
                v_sec = cert.section_point[1]
                if all(abs(v_sec - prev) > 1e-4 for prev, _ in orbits):
                    orbits.append((v_sec, cert.stability))
            orbits.sort()
            labels = "+".join(stab for _, stab in orbits)
            rows.append(f"{_fmt(alpha)},{kind},{len(orbits)},{labels}")
    _emit(args, f"{sc.id}_{phi.label}_sweep.csv", "\n".join(rows) + "\n")
    return 0


def _check(rows, name, value, ref, tol) -> None:
    ok = value is not None and abs(value - ref) <= tol
    rows.append((name, value, ref, tol, "PASS" if ok else "FAIL"))


def _check_in(rows, name, value, window) -> None:
    ok = value is not None and window[0] <= value <= window[1]
    rows.append((name, value, f"({window[0]:g},{window[1]:g})", "", "PASS" if ok else "FAIL"))


def _check_eq(rows, name, value, ref) -> None:
    rows.append((name, value, ref, "", "PASS" if value == ref else "FAIL"))


def cmd_reproduce(args) -> int:
    ex_id = args.example
    if ex_id not in REPRODUCE_IDS:
        raise UsageError(f"unknown example {ex_id!r}; known: {sorted(REPRODUCE_IDS)}")
    scen_id, phi_label = REPRODUCE_IDS[ex_id]
    sc = get_scenario(scen_id)
    family = sc.family()
    phi = get_transition(phi_label)
    rows: list[tuple] = []

    if ex_id == "3.1":
        diag = diagnose(family)
        _check(rows, "versal_margin", diag.versal_margin, 0.0, 1e-12)
        _check(rows, "muZ(eta=0)", diag.muZ, 1.0 / 3.0, 1e-9)
        reg = RegularizedSystem(family, phi, 0.3, 0.01)
        cp = find_critical_point(reg)
        _check(rows, "det_scaled", cp.det_scaled, 6.0 * phi.d1(0.0), 1e-9)
        _check(rows, "trace_scaled", cp.trace_scaled, 0.3 * 0.01, 1e-9)
    else:
        ref = sc.reference[phi_label]
        ch = chart(family, phi, criticality=True, numeric_eps=())
        if "D_coeff" in ref:
            tol = 1e-12 if scen_id == "ii-basic" else 1e-3 if phi_label == "quintic-b" else 1e-2
            _check(rows, "D_coeff", ch.D_coeff, ref["D_coeff"], tol)
        tol_h = 1e-12 if scen_id == "ii-basic" else 1e-6 if phi_label == "quintic-b" else 1e-2
        if scen_id == "b-field":
            tol_h = 1e-2 if phi_label == "septic" else 1e-3
        _check(rows, "delta_H", ch.delta_H, ref["delta_H"], tol_h)
        _check_eq(rows, "criticality", ch.hopf_criticality, ref["criticality"])
        if "delta_C" in ref:
            rep = canard_constants(family, phi)
            tol_c = 0.001 if (scen_id, phi_label) == ("b-field", "cubic") else 0.01
            _check(rows, "delta_C", rep.delta_C, ref["delta_C"], tol_c)
        if "B" in ref:
            tol_b = 0.05 if phi_label == "septic" else 0.1
            _check(rows, "B", B_coefficient(family, phi), ref["B"], tol_b)
            _check_eq(rows, "big_orbit_side", big_orbit_side(family, phi),
                      ref["big_orbit_side"])
        if "saddle_node_window_eps006" in ref:
            prof = build_profile(family, phi)
            _, ds = saddle_node(prof)
            _check_in(rows, "alpha_S(eps=0.006)", ds * 0.006,
                      ref["saddle_node_window_eps006"])
        if "saddle_node_window_eps001" in ref:
            prof = build_profile(family, phi)
            _, ds = saddle_node(prof)
            lo, hi = ref["saddle_node_window_eps001"]
            _check_in(rows, "alpha_S(eps=0.01)", ds * 0.01, (0.9 * lo, 1.1 * hi))

    width = max(len(r[0]) for r in rows) + 2
    lines = [f"example {ex_id}: scenario={scen_id} phi={phi_label}"]
    failures = 0
    for name, value, ref_v, tol, verdict in rows:
        lines.append(f"  {name:<{width}} computed={_fmt(value):<20} "
                     f"reference={_fmt(ref_v):<16} tol={_fmt(tol):<10} {verdict}")
        failures += verdict == "FAIL"
    lines.append(f"  -> {len(rows) - failures}/{len(rows)} passed")
    _emit(args, f"reproduce_{ex_id.replace('.', '_')}.txt", "\n".join(lines) + "\n")
    return failures


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="foldfold",
                                 description="fold-fold singularity analysis toolkit")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="fold-fold diagnosis as JSON")
    _add_common(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("curves", help="bifurcation chart and curve samples")
    _add_common(p)
    p.set_defaults(fn=cmd_curves)

    p = sub.add_parser("manifold", help="critical manifold CSV")
    _add_common(p, alpha=True, eps=True)
    p.set_defaults(fn=cmd_manifold)

    p = sub.add_parser("melnikov", help="Melnikov profile, zeros, saddle node")
    _add_common(p)
    p.add_argument("--delta", type=float, action="append", default=None)
    p.add_argument("--n", type=int, default=120)
    p.set_defaults(fn=cmd_melnikov)

    p = sub.add_parser("canard", help="canard slope: closed form and numeric")
    _add_common(p, eps_many=True)
    p.set_defaults(fn=cmd_canard)

    p = sub.add_parser("simulate", help="one trajectory as CSV plus events JSON")
    _add_common(p, alpha=True, eps=True)
    p.add_argument("--x0", type=float, default=-0.3)
    p.add_argument("--v0", type=float, default=1.0)
    p.add_argument("--time", type=float, default=5.0)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("portrait", help="phase portrait SVG")
    _add_common(p, alpha=True, eps=True)
    p.add_argument("--grid", type=int, default=5)
    p.add_argument("--time", type=float, default=4.0)
    p.set_defaults(fn=cmd_portrait)

    p = sub.add_parser("sweep", help="per-alpha critical point kind and orbit count")
    _add_common(p, eps=True)
    p.add_argument("--alpha-min", type=float, default=-0.05)
    p.add_argument("--alpha-max", type=float, default=0.05)
    p.add_argument("--n", type=int, default=11)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("reproduce", help="computed-vs-reference table for a worked example")
    p.add_argument("example", help="one of " + ", ".join(sorted(REPRODUCE_IDS)))
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_reproduce)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FoldFoldError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
