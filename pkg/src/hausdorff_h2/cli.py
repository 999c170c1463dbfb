"""Command-line runner for the verification suites.

    hausdorff-h2 eval|norm|verify-atoms|doubling|weil [--config PATH] [--out PATH]
                 [--format csv|json] [--seed N] [--nodes N]

Configs are JSON objects carrying ``"schema": 1``; missing keys fall back to
the defaults in ``DEFAULTS``. Exit status: 0 success, 1 numerical-domain
failure or a failed check, 2 unreadable or invalid config.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import atoms as at
from . import geometry as geo
from . import norms
from . import operators as ops
from . import sl2

SCHEMA = 1

DEFAULTS = {
    "eval": {
        "schema": 1,
        "operator": "hausdorff",
        "kernel": {"density": {"kind": "uniform"}, "atoms": []},
        "function": {"kind": "radial_gaussian", "center": [0.0, 1.0], "scale": 0.7},
        "points": {"kind": "grid", "x": [-1.0, 1.0, 5], "y": [0.5, 2.0, 4]},
        "nodes": 4096,
    },
    "norm": {
        "schema": 1,
        "n_kernels": 20,
        "n_functions": 20,
        "p": [1, 2, 4, "inf"],
        "grid_nodes": [384, 256],
        "theta_nodes": 256,
        "eps_quad": 1e-3,
    },
    "verify-atoms": {
        "schema": 1,
        "b": 4.0,
        "n_atoms": 100,
        "n_angles": 64,
        "n_kernels": 50,
        "tol": 1e-9,
    },
    "doubling": {
        "schema": 1,
        "radii": [0.5, 1.0, 2.0, 10.0],
        "tau_b": [[2.0, 1.0], [2.0, 4.0], [3.0, 1.0], [1.0, 2.0]],
        "mc_samples": 1000000,
    },
    "weil": {
        "schema": 1,
        "n_bumps": 5,
        "haar_nodes": [128, 128, 4],
        "polar_nodes": [256, 256],
        "unimodular": [["k", 1.0471975511965976], ["v", 0.0], ["v", 0.6283185307179586]],
        "unimodular_nodes": [128, 128, 128],
        "rel_tol": 1e-6,
    },
}


class ConfigError(ValueError):
    pass


# -- config parsing -------------------------------------------------------------


def load_config(cmd: str, path: str | None) -> dict:
    cfg = dict(DEFAULTS[cmd])
    if path is None:
        return cfg
    try:
        user = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(user, dict):
        raise ConfigError("config must be a JSON object")
    if user.get("schema") != SCHEMA:
        raise ConfigError(f"unsupported config schema {user.get('schema')!r}; expected {SCHEMA}")
    unknown = set(user) - set(cfg)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg.update(user)
    return cfg


def _p_value(p):
    if isinstance(p, str) and p.lower() in ("inf", "infinity"):
        return math.inf
    return float(p)


def function_from_dict(d: dict) -> ops.FieldFunction:
    kind = d.get("kind")
    center = complex(*d.get("center", [0.0, 1.0]))
    if kind == "bump":
        return ops.bump(center, float(d["radius"]), float(d.get("amplitude", 1.0)))
    if kind in ("gaussian", "radial_gaussian"):
        return ops.gaussian(center, float(d["scale"]), float(d.get("amplitude", 1.0)))
    if kind == "indicator":
        return ops.ball_indicator(center, float(d["radius"]))
    raise ConfigError(f"unknown function kind {kind!r}")


def points_from_dict(d: dict) -> np.ndarray:
    if d.get("kind") == "grid":
        x0, x1, nx = d["x"]
        y0, y1, ny = d["y"]
        X, Y = np.meshgrid(np.linspace(x0, x1, int(nx)), np.linspace(y0, y1, int(ny)), indexing="ij")
        pts = (X + 1j * Y).ravel()
    elif d.get("kind") == "list":
        pts = np.array([complex(x, y) for x, y in d["values"]])
    else:
        raise ConfigError(f"unknown points kind {d.get('kind')!r}")
    if np.any(pts.imag <= 0):
        raise geo.GeometryError("evaluation points must lie in the upper half-plane")
    return pts


# -- output ---------------------------------------------------------------------


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return "inf" if math.isinf(v) else repr(float(v))
    return str(v)


def write_rows(rows: list[dict], out, fmt: str, meta: dict | None = None):
    if fmt == "json":
        clean = [{k: (_fmt(v) if isinstance(v, float) and not math.isfinite(v) else
                      bool(v) if isinstance(v, np.bool_) else
                      float(v) if isinstance(v, np.floating) else v)
                  for k, v in r.items()} for r in rows]
        out.write(json.dumps({"meta": meta or {}, "rows": clean}, indent=2, sort_keys=True))
        out.write("\n")
        return
    buf = io.StringIO()
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow([_fmt(v) for v in r.values()])
    out.write(buf.getvalue())


# -- subcommands ----------------------------------------------------------------


def cmd_eval(cfg: dict, seed: int, nodes: int | None):
    try:
        km = ops.KernelMeasure.from_dict(cfg["kernel"])
        f = function_from_dict(cfg["function"])
    except ops.KernelError as exc:
        raise ConfigError(str(exc)) from None
    pts = points_from_dict(cfg["points"])
    n = int(nodes or cfg["nodes"])
    op = {"hausdorff": ops.hausdorff_apply, "cesaro": ops.cesaro_apply}.get(cfg["operator"])
    if op is None:
        raise ConfigError(f"unknown operator {cfg['operator']!r}")
    hf = np.atleast_1d(op(km, f, pts, n))
    fv = np.atleast_1d(f(pts))
    rows = [{"re": z.real, "im": z.imag, "f": float(a), "Hf": float(np.real(b))}
            for z, a, b in zip(pts, fv, hf)]
    return rows, True


def cmd_norm(cfg: dict, seed: int, nodes: int | None):
    rng = np.random.default_rng(seed)
    kernels = [ops.random_kernel(rng) for _ in range(int(cfg["n_kernels"]))]
    funcs = [ops.random_bump(rng) for _ in range(int(cfg["n_functions"]))]
    ps = [_p_value(p) for p in cfg["p"]]
    lp = norms.LpConfig(nodes=tuple(cfg["grid_nodes"]), theta_nodes=int(nodes or cfg["theta_nodes"]))
    rows = []
    ok = True
    for i, km in enumerate(kernels):
        for j, f in enumerate(funcs):
            for r in norms.verify_lp_bound(km, f, lp, kernel_id=f"k{i:02d}",
                                           eps_quad=float(cfg["eps_quad"]), ps=ps):
                ok &= r.passed
                rows.append({"kernel_id": r.kernel_id, "function_id": f"f{j:02d}", "p": r.p,
                             "norm_f": r.norm_f, "norm_hf": r.norm_hf, "bound": r.bound,
                             "ratio": r.ratio, "pass": r.passed})
    return rows, ok


def cmd_verify_atoms(cfg: dict, seed: int, nodes: int | None):
    rng = np.random.default_rng(seed)
    tol = float(cfg["tol"])
    hc = at.HardyConfig(b=float(cfg["b"]))
    base = [at.random_atom(rng, b=hc.b) for _ in range(int(cfg["n_atoms"]))]
    angles = 2 * np.pi * np.arange(int(cfg["n_angles"])) / int(cfg["n_angles"])

    worst_sup, worst_mean, fails = -np.inf, 0.0, 0
    for a in base:
        for t in angles:
            rep = at.atom_check(at.atom_pushforward(a, t), hc, tol)
            fails += not rep.passed
            worst_sup = max(worst_sup, rep.sup_excess)
            worst_mean = max(worst_mean, rep.mean_residual)
    rows = [{"check": "pushforward_atoms", "cases": len(base) * len(angles), "failures": fails,
             "worst": max(worst_sup, worst_mean)}]

    thm_fails, worst_gap = 0, -np.inf
    for _ in range(int(cfg["n_kernels"])):
        km = ops.random_kernel(rng, atomic_only=True)
        k = int(rng.integers(1, 4))
        d = at.AtomicDecomposition(tuple((float(rng.normal()), base[int(rng.integers(len(base)))])
                                         for _ in range(k)))
        image = at.hausdorff_on_decomposition(km, d)
        gap = at.h1_upper_bound(image) - ops.kernel_l1_norm(km) * at.h1_upper_bound(d)
        bad = gap > 1e-12 or not all(at.atom_check(a, hc, tol).passed for _, a in image.terms)
        thm_fails += bad
        worst_gap = max(worst_gap, gap)
    rows.append({"check": "image_decomposition_bound", "cases": int(cfg["n_kernels"]),
                 "failures": thm_fails, "worst": worst_gap})
    return rows, fails == 0 and thm_fails == 0


def cmd_doubling(cfg: dict, seed: int, nodes: int | None):
    rows = []
    ok = True
    n_mc = int(cfg["mc_samples"])
    for k, r in enumerate(cfg["radii"]):
        r = float(r)
        ratio = geo.doubling_ratio(r)
        closed = 4 * np.cosh(r / 2) ** 2
        mc, se = _mc_ratio(r, n_mc, seed + k)
        agree = abs(ratio - mc) <= 3 * se
        ok &= agree
        rows.append({"kind": "doubling", "r": r, "tau": 2.0, "value": ratio, "closed_form": closed,
                     "mc": mc, "mc_se": se, "pass": bool(agree)})
    for tau, b in cfg["tau_b"]:
        d = at.estimate_D_tau_b(float(tau), float(b))
        closed = (np.sinh(tau * b / 2) / np.sinh(b / 2)) ** 2
        agree = abs(d / closed - 1) < 1e-9
        ok &= agree
        rows.append({"kind": "D_tau_b", "r": float(b), "tau": float(tau), "value": d,
                     "closed_form": closed, "mc": math.nan, "mc_se": math.nan, "pass": bool(agree)})
    return rows, ok


def _mc_ratio(r, n, seed):
    """Doubling ratio from two Monte Carlo areas, with a propagated standard error."""
    est = []
    for rad, s in ((2 * r, seed), (r, seed + 10_000)):
        est.append(geo.hyp_ball_area_mc(geo.HypBall(geo.I, rad), n, s))
    (a2, s2), (a1, s1) = est
    ratio = a2 / a1
    return ratio, ratio * math.hypot(s2 / a2, s1 / a1)


def weil_bumps(rng, n):
    return [ops.random_bump(rng, max_offset=1.5, radius_range=(0.5, 1.5)) for _ in range(n)]


def cmd_weil(cfg: dict, seed: int, nodes: int | None):
    rng = np.random.default_rng(seed)
    tol = float(cfg["rel_tol"])
    rows = []
    ok = True
    for j, f in enumerate(weil_bumps(rng, int(cfg["n_bumps"]))):
        grp, quo = sl2.weil_check(f, tuple(cfg["haar_nodes"]), tuple(cfg["polar_nodes"]))
        err = abs(grp - quo) / abs(quo)
        ok &= err < tol
        rows.append({"check": "weil", "case": f"f{j}", "group": grp, "quotient": quo,
                     "rel_err": err, "pass": bool(err < tol)})
    grid = sl2.HaarGrid(nodes=tuple(cfg["unimodular_nodes"]))
    for j, F in enumerate(sl2.gaussian_bumps(rng, 3)):
        for kind, theta in cfg["unimodular"]:
            u = {"k": sl2.rotation_k, "v": sl2.reflection_v}[kind](float(theta))
            a, b = sl2.check_unimodular(F, u, grid)
            err = abs(a - b) / abs(a)
            ok &= err < tol
            rows.append({"check": f"unimodular_{kind}({float(theta):.6f})", "case": f"F{j}",
                         "group": a, "quotient": b, "rel_err": err, "pass": bool(err < tol)})
    return rows, ok


COMMANDS = {
    "eval": cmd_eval,
    "norm": cmd_norm,
    "verify-atoms": cmd_verify_atoms,
    "doubling": cmd_doubling,
    "weil": cmd_weil,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hausdorff-h2", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="JSON config (schema 1); defaults are built in")
    ap.add_argument("--out", help="output file (default: stdout)")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--nodes", type=int, help="override the angle quadrature node count")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not 0 <= args.seed < 2 ** 64:
        print("error: seed must be a 64-bit unsigned integer", file=sys.stderr)
        return 2
    try:
        cfg = load_config(args.command, args.config)
        rows, ok = COMMANDS[args.command](cfg, args.seed, args.nodes)
    except (ConfigError, KeyError, TypeError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    meta = {"command": args.command, "seed": args.seed, "config": cfg, "passed": bool(ok)}
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_rows(rows, fh, args.format, meta)
    else:
        write_rows(rows, sys.stdout, args.format, meta)
    if not ok:
        print("error: one or more checks failed", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
