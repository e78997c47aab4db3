"""Command-line front end (``ballgreen``).

Every JSON document has the envelope {"command", "config", "result"} plus a
"timestamp" unless --no-timestamp is given; floats carry 15 significant digits.
Exit status: 0 success / all checks passed, 1 a check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .ballgeom import DimensionContext, QuadratureSpec, SCHEMES
from .fields import named_field, read_tabulated_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
OPS = ("green", "grad", "abs", "h", "riesz", "poisson")
KERNELS = ("green", "green-gradient", "n", "h", "poisson")


class UsageError(Exception):
    pass


def _clean(obj):
    """Round floats to 15 significant digits and turn numpy values into JSON types."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist()) if obj.ndim else _clean(obj.item())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(f"{x:.15g}") + 0.0
    return obj


def _fmt(x) -> str:
    return f"{float(x) + 0.0:.15g}"


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse numbers from {text!r}") from exc


def _parse_dims(text: str) -> list[int]:
    dims = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-")
            dims.extend(range(int(lo), int(hi) + 1))
        else:
            dims.append(int(part))
    if not dims:
        raise UsageError("empty dimension list")
    if any(d < 3 for d in dims):
        raise UsageError("dimensions must be >= 3")
    return dims


def _parse_points(text: str, n: int) -> np.ndarray:
    """Inline 'a,b,c;d,e,f' or a CSV file with a header line."""
    if os.path.exists(text):
        with open(text, newline="") as fh:
            rows = [r for r in csv.reader(fh)][1:]
        pts = np.array([[float(v) for v in r] for r in rows if r])
    else:
        try:
            pts = np.array([[float(v) for v in row.split(",")] for row in text.split(";") if row.strip()])
        except ValueError as exc:
            raise UsageError(f"cannot parse points {text!r}") from exc
    if pts.ndim != 2 or pts.shape[1] != n:
        raise UsageError(f"points must have {n} coordinates each")
    if np.any(np.linalg.norm(pts, axis=1) >= 1):
        raise UsageError("evaluation points must lie in the open unit ball")
    return pts


def _default_seed() -> int:
    env = os.environ.get("BALLGREEN_SEED")
    return int(env) if env else 0


def _add_common(p: argparse.ArgumentParser, quadrature=True):
    p.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    p.add_argument("--output", help="write to this path instead of standard output")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp (byte-stable output)")
    p.add_argument("--workers", type=int, default=1, help="cap on parallel workers")
    if quadrature:
        p.add_argument("--scheme", choices=SCHEMES, default=None)
        p.add_argument("--radial-nodes", type=int, default=None)
        p.add_argument("--angular-nodes", type=int, default=None)
        p.add_argument("--mc-samples", type=int, default=None)
        p.add_argument("--split-radius", type=float, default=None)
    p.add_argument("--seed", type=int, default=None, help="RNG seed (fallback: $BALLGREEN_SEED, else 0)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ballgreen", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run registered verification checks")
    p.add_argument("target", help="'all' or a check name")
    p.add_argument("--dims", default="3,4", help="comma list or range, e.g. 3,4,5 or 3-10")
    p.add_argument("--profile", choices=("fast", "thorough"), default="fast")
    _add_common(p)

    for name, hlp in (("norm-inf", "L^inf norm scan of the absolute gradient operator"),
                      ("norm-l1", "L^1 norm scan via the swapped kernel")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--dim", type=int, default=3)
        p.add_argument("--convention", choices=("unit", "sigma", "green"),
                       default="unit" if name == "norm-inf" else "green")
        p.add_argument("--grid", default=None, help="comma list of radii (must include 0)")
        p.add_argument("--method", choices=("moebius", "direct"), default="moebius")
        p.add_argument("--csv-out", help="also write radius,value,error CSV here")
        _add_common(p)

    p = sub.add_parser("series-audit", help="signs and sums of the series coefficients")
    p.add_argument("--dims", default="3-10")
    p.add_argument("--m-max", type=int, default=200)
    _add_common(p, quadrature=False)

    p = sub.add_parser("interp-bound", help="Riesz-Thorin bound between the endpoint norms")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--convention", choices=("unit", "sigma", "green"), default="sigma")
    _add_common(p, quadrature=False)

    p = sub.add_parser("solve", help="apply an operator to a field at points (CSV output)")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--g", default="const(1)", help="named field, e.g. const(1), rpow(2), coord(0), coord(0,1)")
    p.add_argument("--tabulated", help="CSV x1..xn,value with header: tabulated field instead of --g")
    p.add_argument("--points", required=True, help="CSV file with header, or inline 'a,b,c;d,e,f'")
    p.add_argument("--op", choices=OPS, required=True)
    p.add_argument("--convention", choices=("unit", "sigma", "green"), default="sigma")
    p.add_argument("--mu", type=float, default=0.5, help="Riesz exponent for --op riesz")
    _add_common(p)
    p.set_defaults(format="csv")

    p = sub.add_parser("kernel-eval", help="evaluate a kernel at a pair of points (JSON)")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--kernel", choices=KERNELS, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True, help="second point (a unit vector for poisson)")
    _add_common(p, quadrature=False)

    p = sub.add_parser("hyp2f1", help="Gauss hypergeometric function 2F1(a,b;c;t)")
    for a in "abct":
        p.add_argument(a, type=float)
    _add_common(p, quadrature=False)
    p.set_defaults(format="pretty")

    p = sub.add_parser("angular-integral", help="B(mu/2,1/2) 2F1(nu, nu+(1-mu)/2; (1+mu)/2; r^2)")
    p.add_argument("mu", type=float)
    p.add_argument("nu", type=float)
    p.add_argument("r", type=float)
    p.add_argument("--check", action="store_true", help="also integrate the left-hand side adaptively")
    _add_common(p, quadrature=False)
    p.set_defaults(format="pretty")

    p = sub.add_parser("conjecture", help="evidence scan for the L^p -> L^inf candidates (p > n)")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--grid", default="0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    p.add_argument("--eta-samples", type=int, default=4)
    _add_common(p)
    return ap


def _spec_from(args, base: QuadratureSpec | None = None) -> QuadratureSpec:
    base = base or QuadratureSpec("reduced-polar", 24, 24, 20_000, 0, 0.1)
    kw = dict(scheme=base.scheme, radial_nodes=base.radial_nodes, angular_nodes=base.angular_nodes,
              mc_samples=base.mc_samples, seed=args.seed, split_radius=base.split_radius)
    for key in ("scheme", "radial_nodes", "angular_nodes", "mc_samples", "split_radius"):
        val = getattr(args, key, None)
        if val is not None:
            kw[key] = val
    try:
        return QuadratureSpec(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("output",)}
    return _clean(cfg)


def _emit(args, result: dict, csv_rows=None, pretty=None):
    envelope = {"command": args.command, "config": _config(args), "result": _clean(result)}
    if not args.no_timestamp:
        envelope["timestamp"] = datetime.now(timezone.utc).isoformat()
    if args.format == "json":
        text = json.dumps(envelope, indent=2, sort_keys=True) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        buf.write("# " + json.dumps(envelope["config"], sort_keys=True) + "\n")
        for row in csv_rows or []:
            w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
        text = buf.getvalue()
    else:
        text = (pretty if pretty is not None else json.dumps(envelope["result"], indent=2)) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands --------------------------------------------------------------

def _cmd_verify(args):
    from .verify import REGISTRY, run_all, run_check
    dims = _parse_dims(args.dims)
    ov = {}
    for key in ("scheme", "radial_nodes", "angular_nodes", "mc_samples", "split_radius"):
        if getattr(args, key) is not None:
            ov[key] = getattr(args, key)
    if args.target == "all":
        report = run_all(dims, args.profile, args.seed, args.workers, ov)
    else:
        if args.target not in REGISTRY:
            raise UsageError(f"unknown check {args.target!r}; known: {', '.join(sorted(REGISTRY))}")
        ov["seed"] = args.seed
        res = run_check(args.target, dims, ov, args.profile)
        report = {"profile": args.profile, "dims": dims, "seed": args.seed,
                  "all_passed": all(r.passed for r in res), "checks": [r.to_dict() for r in res]}
    if args.no_timestamp:
        for c in report["checks"]:
            c["runtime_ms"] = 0
    rows = [("name", "dimension", "passed", "abs_error", "tolerance")] + [
        (c["name"], c["dimension"], c["passed"], c["abs_error"], c["tolerance"]) for c in report["checks"]]
    pretty = "\n".join(f"{'PASS' if c['passed'] else 'FAIL'}  n={c['dimension']}  {c['name']}"
                       for c in report["checks"])
    _emit(args, report, rows, pretty)
    return EXIT_OK if report["all_passed"] else EXIT_FAIL


def _norm_cmd(args, kind):
    from .normcalc import DEFAULT_GRID, norm_inf_estimate, norm_l1_estimate
    ctx = _ctx(args.dim)
    spec = _spec_from(args)
    grid = _parse_floats(args.grid) if args.grid else list(DEFAULT_GRID)
    if 0.0 not in grid:
        raise UsageError("grid must include radius 0")
    if any(not 0 <= r < 1 for r in grid):
        raise UsageError("grid radii must lie in [0, 1)")
    fn = norm_inf_estimate if kind == "inf" else norm_l1_estimate
    rep = fn(ctx, spec, args.convention, grid, args.method)
    rows = [("radius", "value", "error")] + list(zip(rep.grid, rep.values, rep.errors))
    if args.csv_out:
        with open(args.csv_out, "w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows(
                [rows[0]] + [[_fmt(v) for v in r] for r in rows[1:]])
    pretty = (f"supremum {rep.value:.7f} at radius {rep.argmax_radius:g} "
              f"({rep.convention} convention; closed form {rep.target:.7f})")
    _emit(args, rep.to_dict(), rows, pretty)
    return EXIT_OK


def _cmd_series(args):
    from .normcalc import SeriesCoefficients, majorant_c_derivative
    dims = _parse_dims(args.dims)
    if args.m_max < 1:
        raise UsageError("--m-max must be >= 1")
    out, ok = [], True
    for n in dims:
        sc = SeriesCoefficients.build(n, args.m_max)
        c_mono = all(sc.c[i + 1] >= sc.c[i] for i in range(len(sc.c) - 1))
        row = {"n": n, "a0": sc.a0, "c_limit": sc.c_limit,
               "max_a": max(sc.a), "min_e": min(sc.e), "max_b_minus_c": max(b - c for b, c in zip(sc.b, sc.c)),
               "max_c": max(sc.c), "c_nondecreasing": c_mono,
               "min_c_derivative": min(majorant_c_derivative(n, m) for m in range(1, args.m_max + 1))}
        row["passed"] = bool(row["max_a"] < 0 and row["min_e"] >= 0 and row["max_b_minus_c"] <= 1e-12
                             and row["max_c"] <= sc.c_limit < 1 and c_mono)
        ok &= row["passed"]
        out.append(row)
    rows = [tuple(out[0].keys())] + [tuple(r.values()) for r in out]
    pretty = "\n".join(f"n={r['n']}: {'PASS' if r['passed'] else 'FAIL'} max a_m={r['max_a']:.3e} "
                       f"min e_m={r['min_e']:.3e} c_limit={r['c_limit']:.10f}" for r in out)
    _emit(args, {"m_max": args.m_max, "dims": out, "all_passed": ok}, rows, pretty)
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_interp(args):
    from .normcalc import interpolation_bound_for
    ctx = _ctx(args.dim)
    try:
        val = interpolation_bound_for(args.p, ctx, args.convention)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, {"p": args.p, "bound": val, "convention": args.convention},
          [("p", "bound"), (args.p, val)], _fmt(val))
    return EXIT_OK


def _cmd_solve(args):
    from . import operators as ops
    ctx = _ctx(args.dim)
    spec = _spec_from(args)
    try:
        g = read_tabulated_csv(args.tabulated) if args.tabulated else named_field(args.g)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    if spec.scheme == "reduced-polar" and not g.radial and args.op != "riesz":
        spec = QuadratureSpec("singularity-split", spec.radial_nodes, min(spec.angular_nodes, 16),
                              spec.mc_samples, spec.seed, spec.split_radius)
    pts = _parse_points(args.points, ctx.n)
    rows, results = [], []
    for x in pts:
        if args.op == "green":
            v, e = ops.green_potential(g, x, spec, ctx)
            vals = [v]
        elif args.op == "grad":
            r = ops.grad_operator(g, x, spec, ctx)
            vals, e = list(r.value), r.estimated_error
        elif args.op == "abs":
            v, e = ops.abs_operator(g, x, spec, ctx, args.convention)
            vals = [v]
        elif args.op == "h":
            v, e = ops.h_operator(g, x, spec, ctx)
            vals = [v]
        elif args.op == "riesz":
            v = ops.riesz_potential(g, args.mu, x, spec, ctx)
            c = QuadratureSpec(spec.scheme, max(8, 3 * spec.radial_nodes // 4), spec.angular_nodes,
                               spec.mc_samples, spec.seed, spec.split_radius)
            vals, e = [v], abs(v - ops.riesz_potential(g, args.mu, x, c, ctx))
        else:
            v = ops.poisson_extension(g, x, spec, ctx)
            c = QuadratureSpec(spec.scheme, spec.radial_nodes, max(8, 3 * spec.angular_nodes // 4),
                               spec.mc_samples, spec.seed, spec.split_radius)
            vals, e = [v], abs(v - ops.poisson_extension(g, x, c, ctx))
        point = " ".join(_fmt(c) for c in x)
        rows.append([point] + vals + [e])
        results.append({"point": list(x), "value": vals if len(vals) > 1 else vals[0], "error_estimate": e})
    header = ["point"] + ([f"value_{i + 1}" for i in range(ctx.n)] if args.op == "grad" else ["value"]) + ["error_estimate"]
    if args.format == "pretty":
        args.format = "csv"  # a table is the pretty form here
    res = {"op": args.op, "field": g.label, "disclaimer": g.disclaimer, "values": results}
    _emit(args, res, [header] + rows)
    return EXIT_OK


def _cmd_kernel(args):
    from . import kernels
    ctx = _ctx(args.dim)
    x = np.array(_parse_floats(args.x))
    y = np.array(_parse_floats(args.y))
    if len(x) != ctx.n or len(y) != ctx.n:
        raise UsageError(f"points need {ctx.n} coordinates")
    fn = {"green": kernels.green, "green-gradient": kernels.green_gradient,
          "n": kernels.n_kernel_mag, "h": kernels.h_kernel_mag, "poisson": kernels.poisson_kernel}[args.kernel]
    try:
        val = fn(x, y, ctx)
    except kernels.SingularityError as exc:
        raise UsageError(str(exc)) from exc
    val = np.asarray(val)
    _emit(args, {"kernel": args.kernel, "x": x, "y": y, "value": val},
          [("kernel", "value"), (args.kernel, " ".join(_fmt(v) for v in np.atleast_1d(val)))],
          " ".join(_fmt(v) for v in np.atleast_1d(val)))
    return EXIT_OK


def _cmd_hyp(args):
    from .specfun import hyp2f1, DomainError, ParameterError
    try:
        val = hyp2f1(args.a, args.b, args.c, args.t)
    except (DomainError, ParameterError) as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, {"value": val}, [("a", "b", "c", "t", "value"), (args.a, args.b, args.c, args.t, val)], _fmt(val))
    return EXIT_OK


def _cmd_angular(args):
    from .specfun import AngularIntegralParams, DomainError, angular_integral
    try:
        val = angular_integral(AngularIntegralParams(args.mu, args.nu, args.r))
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    res = {"value": val}
    if args.check:
        from scipy.integrate import quad
        f = lambda t: math.sin(t) ** (args.mu - 1) / (1 + args.r ** 2 - 2 * args.r * math.cos(t)) ** args.nu
        res["quadrature"] = quad(f, 0, math.pi, epsabs=1e-13, epsrel=1e-14, limit=400)[0]
        res["residual"] = abs(res["quadrature"] - val)
    _emit(args, res, [tuple(res.keys()), tuple(res.values())], _fmt(val))
    return EXIT_OK


def _cmd_conjecture(args):
    from .conjecture import ConjectureParams, conjecture_scan
    ctx = _ctx(args.dim)
    try:
        params = ConjectureParams(args.dim, args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    grid = _parse_floats(args.grid)
    if not grid:
        raise UsageError("empty grid")
    rep = conjecture_scan(params, grid, _spec_from(args), ctx, args.eta_samples)
    rows = [("radius", "phi_A", "phi_B")] + list(zip(rep.grid, rep.phi_A, rep.phi_B))
    _emit(args, rep.to_dict(), rows)
    return EXIT_OK


def _ctx(n: int) -> DimensionContext:
    try:
        return DimensionContext(n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


COMMANDS = {
    "verify": _cmd_verify,
    "norm-inf": lambda a: _norm_cmd(a, "inf"),
    "norm-l1": lambda a: _norm_cmd(a, "l1"),
    "series-audit": _cmd_series,
    "interp-bound": _cmd_interp,
    "solve": _cmd_solve,
    "kernel-eval": _cmd_kernel,
    "hyp2f1": _cmd_hyp,
    "angular-integral": _cmd_angular,
    "conjecture": _cmd_conjecture,
}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.seed is None:
        args.seed = _default_seed()
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"ballgreen {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
