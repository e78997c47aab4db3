"""Registry of named verification checks.

Each check takes (ctx, spec, profile) and returns a list of CheckResult.
Numerical failures are recorded, never raised.
"""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict

import numpy as np
from scipy.integrate import quad

from . import kernels
from .ballgeom import (DimensionContext, QuadratureSpec, ball_sample, bracket, moebius,
                       moebius_jacobian, moebius_norm_identity, sphere_sample)
from .fields import constant, coordinate, radial_power
from .normcalc import (DEFAULT_GRID, SeriesCoefficients, J_lemma_integral, J_lemma_quadrature,
                       J_theorem_integral, L_closed_form, L_quadrature, L_series,
                       RadialDiscretization, c_limit, interpolation_bound_for,
                       kernel_integral_K, kernel_integral_K_vector, kernel_integral_Kswap,
                       majorant_c_derivative, series_J_lemma, series_J_theorem,
                       sphere_integral_direct, sphere_integral_reduced)
from .operators import RieszParams, grad_operator, green_potential, riesz_bound_check
from .results import CheckResult
from .specfun import AngularIntegralParams, GammaInequalityCase, angular_integral, gamma_inequality_holds, gamma_inequality_le

PROFILES = ("fast", "thorough")

# every published statement the registry covers -> check names
MANIFEST = {
    "green-function-and-constants": ["kernel-green-gradient"],
    "gradient-operator-D": ["manufactured-solution"],
    "absolute-operator-N": ["theorem-inf-norm"],
    "hypergeometric-identity": ["hyp-identity"],
    "gamma-inequality": ["gamma-inequality"],
    "moebius-transform": ["moebius-identities"],
    "theorem-inf-norm": ["theorem-inf-norm", "sup-location"],
    "identity-chain": ["identity-chain"],
    "sphere-integral-reduction": ["sphere-reduction"],
    "series-coefficients": ["series-signs", "series-integral"],
    "corollary-gradient-bound": ["gradient-domination"],
    "riesz-lemma": ["riesz-bound"],
    "theorem-l1-norm": ["lemma-h-norm"],
    "lemma-h-series": ["series-integral"],
    "interpolation-corollary": ["duality-interpolation"],
}

REGISTRY = {}


def check(name):
    def deco(fn):
        REGISTRY[name] = fn
        return fn
    return deco


def _x(rho, n):
    x = np.zeros(n)
    x[0] = rho
    return x


def _random_ball(count, seed, ctx, rmax):
    return ball_sample(count, seed, ctx) * rmax


@check("theorem-inf-norm")
def _theorem_inf(ctx, spec, profile):
    n = ctx.n
    target = 2 * n * math.pi ** (n / 2) / ((n + 1) * math.gamma(n / 2))
    out = []
    for method in ("direct", "moebius"):
        out.append(CheckResult.compare(f"theorem-inf-norm[{method}]", n,
                                       kernel_integral_K(0.0, method, spec, ctx), target, 1e-6,
                                       "published: L^inf norm constant 2n pi^(n/2)/((n+1)Gamma(n/2))"))
    return out


@check("sup-location")
def _sup_location(ctx, spec, profile):
    n = ctx.n
    k0 = kernel_integral_K(0.0, "moebius", spec, ctx)
    vals = [kernel_integral_K(r, "moebius", spec, ctx) for r in DEFAULT_GRID]
    worst = max(v / k0 - 1 for v in vals)
    argmax = DEFAULT_GRID[int(np.argmax(vals))]
    out = [CheckResult.predicate("sup-location[K<=K(0)]", n, worst <= 1e-5 and argmax == 0.0,
                                 "published: supremum of K attained at x = 0", max(worst, 0.0), 1e-5,
                                 detail={"grid": list(DEFAULT_GRID), "values": vals})]
    ref = kernel_integral_K(0.5, "direct", spec, ctx)
    # the full-sphere rule costs nodes^(n-1); the integrand is smooth, so keep it modest
    sub = QuadratureSpec("singularity-split", 16, 12 if n >= 5 else 16,
                         spec.mc_samples, spec.seed, spec.split_radius)
    dirs = sphere_sample(5, spec.seed + 11, ctx)
    vs = [kernel_integral_K_vector(0.5 * d, sub, ctx) for d in dirs]
    spread = max(abs(v - ref) / ref for v in vs)
    out.append(CheckResult.predicate("sup-location[direction-independence]", n, spread <= 1e-6,
                                     "derived: rotation invariance of K", spread, 1e-6,
                                     detail={"values": vs, "reduced": ref}))
    agree = max(abs(kernel_integral_K(r, "direct", spec, ctx) / kernel_integral_K(r, "moebius", spec, ctx) - 1)
                for r in (0.1, 0.3, 0.5, 0.7, 0.9))
    out.append(CheckResult.predicate("sup-location[direct-vs-moebius]", n, agree <= 1e-5,
                                     "derived: two independent quadratures of K", agree, 1e-5))
    return out


@check("lemma-h-norm")
def _lemma_h(ctx, spec, profile):
    n = ctx.n
    out = [CheckResult.compare("lemma-h-norm[Kswap(0)=omega]", n,
                               kernel_integral_Kswap(0.0, "moebius", spec, ctx), ctx.omega, 1e-6,
                               "published: int_B |H(0,y)| dy = omega_{n-1}")]
    out.append(CheckResult.compare("lemma-h-norm[green L1 norm]", n,
                                   ctx.c_n * kernel_integral_Kswap(0.0, "direct", spec, ctx), 1 / (n - 2),
                                   1e-6, "published: L^1 norm equals 1/(n-2)"))
    vals = [kernel_integral_Kswap(r, "moebius", spec, ctx) for r in DEFAULT_GRID]
    worst = max(v / ctx.omega - 1 for v in vals)
    out.append(CheckResult.predicate("lemma-h-norm[Kswap<=omega]", n, worst <= 1e-5,
                                     "published: supremum of the swapped integral at x = 0",
                                     max(worst, 0.0), 1e-5, detail={"values": vals}))
    return out


@check("hyp-identity")
def _hyp_identity(ctx, spec, profile):
    n = ctx.n
    worst = 0.0
    for mu, nu, r in itertools.product((2, 3, 4, 5), (1.0, 1.5, 2.0, (n + 1) / 2),
                                       [k / 10 for k in range(10)]):
        f = lambda t: math.sin(t) ** (mu - 1) / (1 + r * r - 2 * r * math.cos(t)) ** nu
        lhs = quad(f, 0, math.pi, epsabs=1e-13, epsrel=1e-14, limit=400)[0]
        worst = max(worst, abs(lhs - angular_integral(AngularIntegralParams(mu, nu, r))))
    return [CheckResult.predicate("hyp-identity", n, worst < 1e-8,
                                  "published: Beta * 2F1 form of the angular integral", worst, 1e-8)]


@check("sphere-reduction")
def _sphere_reduction(ctx, spec, profile):
    n = ctx.n
    worst = 0.0
    for a in (n + 1, n + 2, 3.0, 2 * n):
        for c in (0.0, 0.2, 0.4, 0.6, 0.8, 0.9):
            red = sphere_integral_reduced(a, 1.0, c, ctx) if c < 1 else None
            worst = max(worst, abs(red - sphere_integral_direct(a, 1.0, c, ctx)) / max(1.0, abs(red)))
    return [CheckResult.predicate("sphere-reduction", n, worst < 1e-7,
                                  "published: sphere integral as omega * 2F1", worst, 1e-7)]


@check("series-signs")
def _series_signs(ctx, spec, profile):
    dims = range(3, 11) if profile == "thorough" else [ctx.n]
    bad = []
    for n in dims:
        sc = SeriesCoefficients.build(n, 200)
        lim = sc.c_limit
        for m in range(1, 201):
            a, e, b, c = sc.a[m - 1], sc.e[m - 1], sc.b[m - 1], sc.c[m - 1]
            if not (a < 0 and e >= 0 and b <= c * (1 + 1e-12) and c <= lim and lim < 1):
                bad.append((n, m))
            if m > 1 and c < sc.c[m - 2]:
                bad.append((n, m, "c decreasing"))
            if majorant_c_derivative(n, m) < 0:
                bad.append((n, m, "c' < 0"))
    out = [CheckResult.predicate("series-signs", ctx.n, not bad,
                                 "published: a_m < 0, e_m >= 0, b_m <= c(m) <= lim c < 1",
                                 float(len(bad)), 0.0, detail={"dims": list(dims), "violations": bad[:20]})]
    out.append(CheckResult.compare("series-signs[c_limit n=3]", 3, c_limit(3), 2 / 3, 1e-12,
                                   "derived: sqrt(pi) Gamma(2)/(2 Gamma(5/2))"))
    return out


@check("series-integral")
def _series_integral(ctx, spec, profile):
    n = ctx.n
    out = []
    w1 = w2 = w3 = w4 = 0.0
    for rho in (0.0, 0.3, 0.5, 0.7, 0.9):
        w1 = max(w1, abs(series_J_theorem(rho, 200, ctx) - J_theorem_integral(rho, ctx)) / ctx.omega)
        w2 = max(w2, abs(series_J_lemma(rho, 200, ctx) - J_lemma_integral(rho, ctx)))
        w3 = max(w3, abs(series_J_lemma(rho, 200, ctx) - J_lemma_quadrature(rho, spec, ctx)))
        lc = L_closed_form(rho, ctx)
        w4 = max(w4, abs(lc - L_series(rho, 200, ctx)) / lc, abs(lc - L_quadrature(rho, spec, ctx)) / lc)
    for name, w in (("J_theorem", w1), ("J_lemma-1d", w2), ("J_lemma-2d", w3), ("L", w4)):
        out.append(CheckResult.predicate(f"series-integral[{name}]", n, w <= 1e-6,
                                         "published: series forms of J and L", w, 1e-6))
    worst = 0.0
    for rho in DEFAULT_GRID[:-1]:
        worst = max(worst, kernel_integral_K(rho, "moebius", spec, ctx) - series_J_theorem(rho, 200, ctx))
    out.append(CheckResult.predicate("series-integral[K<=majorant]", n, worst <= 1e-9,
                                     "published: triangle-inequality majorant", max(worst, 0.0), 1e-9))
    return out


@check("gamma-inequality")
def _gamma_inequality(ctx, spec, profile):
    vals = np.linspace(0.1, 6.0, 20)
    ks = np.linspace(-5.5, 5.5, 20)
    count = violations = 0
    for m, p, k in itertools.product(vals, vals, ks):
        if not (p > k > -m):
            continue
        count += 1
        case = GammaInequalityCase(float(m), float(p), float(k))
        sign, ge = gamma_inequality_holds(case)
        s = k * (p - m - k)
        if (s >= 0 and not ge) or (s <= 0 and not gamma_inequality_le(case)):
            violations += 1
    return [CheckResult.predicate("gamma-inequality", ctx.n, violations == 0,
                                  "published: Chebyshev-type Gamma inequality", float(violations), 0.0,
                                  detail={"admissible_cases": count})]


@check("moebius-identities")
def _moebius(ctx, spec, profile):
    n = ctx.n
    x = _random_ball(200, spec.seed + 1, ctx, 0.95)
    y = _random_ball(200, spec.seed + 2, ctx, 0.95)
    norm_res = float(np.max(moebius_norm_identity(x, y)))
    inv = float(np.max(np.abs(moebius(-x * 0.9 / 0.95, moebius(x * 0.9 / 0.95, y * 0.9 / 0.95)) - y * 0.9 / 0.95)))
    worst_j = 0.0
    h = 1e-5
    for xi, zi in zip(x[:20] * 0.7, y[:20] * 0.7):
        J = np.empty((n, n))
        for k in range(n):
            e = np.zeros(n)
            e[k] = h
            J[:, k] = (moebius(-xi, zi + e) - moebius(-xi, zi - e)) / (2 * h)
        det = abs(np.linalg.det(J))
        worst_j = max(worst_j, abs(det / moebius_jacobian(xi, zi) - 1))
    return [CheckResult.predicate("moebius-identities[norm]", n, norm_res <= 1e-12,
                                  "published: |T_x y| = |x-y|/[x,y]", norm_res, 1e-12),
            CheckResult.predicate("moebius-identities[inverse]", n, inv <= 1e-10,
                                  "derived: T_{-x} T_x = id", inv, 1e-10),
            CheckResult.predicate("moebius-identities[jacobian]", n, worst_j <= 1e-6,
                                  "published: Jacobian ((1-|x|^2)/[z,-x]^2)^n", worst_j, 1e-6)]


@check("kernel-green-gradient")
def _kernel_grad(ctx, spec, profile):
    n = ctx.n
    x = _random_ball(400, spec.seed + 3, ctx, 0.9)
    y = _random_ball(400, spec.seed + 4, ctx, 0.9)
    keep = np.linalg.norm(x - y, axis=1) >= 0.1
    x, y = x[keep][:100], y[keep][:100]
    h = 1e-5
    fd = np.empty_like(x)
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        fd[:, k] = (kernels.green(x + e, y, ctx) - kernels.green(x - e, y, ctx)) / (2 * h)
    an = kernels.green_gradient(x, y, ctx)
    rel = float(np.max(np.linalg.norm(fd - an, axis=1) / np.linalg.norm(an, axis=1)))
    scale = float(np.max(np.abs(np.linalg.norm(an, axis=1) * ctx.omega - kernels.n_kernel_mag(x, y, ctx))
                         / kernels.n_kernel_mag(x, y, ctx)))
    return [CheckResult.predicate("kernel-green-gradient[fd]", n, rel <= 1e-6,
                                  "published: closed-form gradient of G", rel, 1e-6),
            CheckResult.predicate("kernel-green-gradient[scaling]", n, scale <= 1e-13,
                                  "derived: (n-2) c_n omega = 1", scale, 1e-13)]


@check("identity-chain")
def _identity_chain(ctx, spec, profile):
    n = ctx.n
    count = 10_000
    x = _random_ball(count, spec.seed + 5, ctx, 0.8)
    z = _random_ball(count, spec.seed + 6, ctx, 0.99)
    y = moebius(-x, z)
    lhs = kernels.n_kernel_mag(x, y, ctx)
    rhs = kernels.ide_form(x, z, ctx)
    res = float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, rhs)))
    return [CheckResult.predicate("identity-chain", n, res <= 1e-10,
                                  "published: Moebius pull-back of the kernel", res, 1e-10)]


@check("manufactured-solution")
def _manufactured(ctx, spec, profile):
    n = ctx.n
    one = constant(1.0)
    worst_g = max(abs(green_potential(one, _x(r, n), spec, ctx)[0] - (1 - r * r) / (2 * n))
                  for r in np.linspace(0, 0.95, 20))
    pts = _random_ball(10, spec.seed + 7, ctx, 0.7)
    worst_d = max(float(np.max(np.abs(grad_operator(one, p, spec, ctx).value - p / n))) for p in pts)
    full = QuadratureSpec("singularity-split", spec.radial_nodes, 12 if n >= 5 else 16,
                          spec.mc_samples, spec.seed, spec.split_radius)
    h = 1e-4
    worst_fd = 0.0
    fields = [(one, spec), (radial_power(2.0), spec), (coordinate(0), full)]
    for g, sp in fields:
        for p in pts[:4] if profile == "fast" else pts:
            d = grad_operator(g, p, sp, ctx).value
            for k in range(n):
                e = np.zeros(n)
                e[k] = h
                fd = -(green_potential(g, p + e, sp, ctx)[0] - green_potential(g, p - e, sp, ctx)[0]) / (2 * h)
                worst_fd = max(worst_fd, abs(fd - d[k]))
    return [CheckResult.predicate("manufactured-solution[G]", n, worst_g <= 1e-6,
                                  "derived: u = (|x|^2-1)/(2n) solves Lap u = 1", worst_g, 1e-6),
            CheckResult.predicate("manufactured-solution[D]", n, worst_d <= 5e-4,
                                  "derived: grad u = x/n", worst_d, 5e-4),
            CheckResult.predicate("manufactured-solution[D-vs-fd]", n, worst_fd <= 5e-4,
                                  "derived: D = grad(-G)", worst_fd, 5e-4)]


@check("gradient-domination")
def _domination(ctx, spec, profile):
    from .operators import abs_operator
    n = ctx.n
    full = QuadratureSpec("singularity-split", spec.radial_nodes, 12 if n >= 5 else 16,
                          spec.mc_samples, spec.seed, spec.split_radius)
    worst = -math.inf
    for g in (constant(1.0), coordinate(0), coordinate(0, 1.0)):
        for p in _random_ball(3, spec.seed + 8, ctx, 0.8):
            d = np.linalg.norm(grad_operator(g, p, full, ctx).value)
            a = abs_operator(abs(g), p, full, ctx, "sigma")[0]
            worst = max(worst, d - a)
    return [CheckResult.predicate("gradient-domination", n, worst <= 1e-10,
                                  "published: |D g| <= N |g| pointwise", max(worst, 0.0), 1e-10)]


@check("riesz-bound")
def _riesz(ctx, spec, profile):
    n = ctx.n
    out = []
    grid = [(mu, p, q) for mu in (0.5, 0.75, 1.0) for p in (1.0, 1.5, 2.0) for q in (1.0, 2.0, 3.0)
            if 0 <= 1 / p - 1 / q < mu]
    samples = 400 if profile == "fast" else 2000
    for f in (constant(1.0), radial_power(1.0), coordinate(0, 1.0)):
        sub = QuadratureSpec("reduced-polar", 16, 24, spec.mc_samples, spec.seed, spec.split_radius)
        for mu, p, q in grid:
            out.append(riesz_bound_check(f, RieszParams(mu, p, q), sub, ctx, samples=samples))
    ok = all(r.passed for r in out)
    worst = max(r.abs_error for r in out)
    return [CheckResult.predicate("riesz-bound", n, ok, "published: Riesz potential bound", worst, 0.0,
                                  detail={"cases": len(out),
                                          "slack_min": min(r.detail["rhs"] - r.detail["lhs"] for r in out)})]


@check("duality-interpolation")
def _duality(ctx, spec, profile):
    n = ctx.n
    disc = RadialDiscretization.build(ctx)
    s = disc.summary(1.0 / ctx.omega)
    bound = interpolation_bound_for(2.0, ctx, "sigma")
    # sigma-convention suprema: Kswap(0)/omega = 1, K(0)/omega = n/(n+1)
    k1 = kernel_integral_Kswap(0.0, "moebius", spec, ctx) / ctx.omega
    kinf = kernel_integral_K(0.0, "moebius", spec, ctx) / ctx.omega
    rel1 = abs(s["norm_1"] / k1 - 1)
    relinf = abs(s["norm_inf"] / kinf - 1)
    return [CheckResult.predicate("duality-interpolation[exact]", n, s["exact_duality"],
                                  "published: ||N||_1 = ||N*||_inf (adjoint)", 0.0, 0.0, detail=s),
            CheckResult.predicate("duality-interpolation[matrix-vs-integral]", n,
                                  rel1 <= 0.05 and relinf <= 0.05,
                                  "derived: discretisation within 5%", max(rel1, relinf), 0.05),
            CheckResult.predicate("duality-interpolation[spectral<=bound]", n,
                                  s["spectral_l2"] <= bound * 1.05,
                                  "published: Riesz-Thorin bound at p=2",
                                  max(0.0, s["spectral_l2"] - bound * 1.05), 0.05,
                                  detail={"bound": bound, "spectral": s["spectral_l2"]})]


def default_spec(profile: str = "fast", seed: int = 0) -> QuadratureSpec:
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}")
    base = QuadratureSpec("reduced-polar", 24, 24, 20_000, seed, 0.1)
    return base if profile == "fast" else base.scaled(4)


def run_check(name: str, dims, overrides: dict | None = None, profile: str = "fast"):
    if name not in REGISTRY:
        raise KeyError(f"unknown check {name!r}; known: {sorted(REGISTRY)}")
    dims = list(dims)
    if not dims:
        raise ValueError("dimension list is empty")
    overrides = dict(overrides or {})
    seed = overrides.pop("seed", 0)
    spec = default_spec(profile, seed)
    if overrides:
        spec = QuadratureSpec(**{**asdict(spec), **overrides})
    results = []
    for n in dims:
        ctx = DimensionContext(n)
        t0 = time.perf_counter()
        try:
            res = REGISTRY[name](ctx, spec, profile)
        except Exception as exc:  # recorded, never propagated
            res = [CheckResult.predicate(name, n, False, "error", math.inf, 0.0,
                                         detail={"error": f"{type(exc).__name__}: {exc}"})]
        ms = int(1000 * (time.perf_counter() - t0))
        for r in res:
            r.runtime_ms = ms
            r.spec_echo = asdict(spec)
        results.extend(res)
    return results


def run_all(dims, profile: str = "fast", seed: int = 0, workers: int = 1, overrides=None):
    dims = list(dims)
    if not dims:
        raise ValueError("dimension list is empty")
    if profile == "thorough" and 5 not in dims:
        dims = dims + [5]
    ov = dict(overrides or {})
    ov["seed"] = seed
    names = list(REGISTRY)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        parts = list(pool.map(lambda nm: run_check(nm, dims, dict(ov), profile), names))
    results = [r for part in parts for r in part]
    return {"profile": profile, "dims": dims, "seed": seed,
            "all_passed": all(r.passed for r in results),
            "checks": [r.to_dict() for r in results]}
