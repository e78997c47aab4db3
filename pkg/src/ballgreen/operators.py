"""Integral operators applied to concrete fields.

Every integrand singular at y = x is integrated in polar coordinates
centred at x: y = x + s w, dy = s^(n-1) ds dw, s in [0, s_max(w)].  The
Jacobian absorbs the |x-y|^(1-n) growth.  The s-range is split at
``split_radius`` (the singular inner ball) and then graded geometrically,
so near-boundary features of width 1-|x| stay resolved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from . import kernels
from .ballgeom import (DimensionContext, QuadratureSpec, axial_points, ball_sample,
                       gauss_legendre, gauss_sin_power, graded_panels, composite_gauss,
                       sphere_rule, as_ball_point, SchemeMismatchError)
from .fields import ScalarField
from .results import CheckResult

CHUNK = 4096  # directions per vectorised batch


class QuadratureBudgetError(ArithmeticError):
    pass


@dataclass(frozen=True)
class NormConvention:
    """Kernel prefactor: unit (1), sigma (1/omega_{n-1}) or green (1/((n-2) omega_{n-1}))."""
    tag: str
    prefactor: float

    @classmethod
    def of(cls, tag: str, ctx: DimensionContext) -> "NormConvention":
        table = {"unit": 1.0, "sigma": 1.0 / ctx.omega, "green": ctx.c_n}
        if tag not in table:
            raise ValueError(f"unknown convention {tag!r}; choose unit, sigma or green")
        return cls(tag, table[tag])


@dataclass
class VectorResult:
    value: np.ndarray
    estimated_error: float


@dataclass(frozen=True)
class RieszParams:
    mu: float
    p: float
    q: float

    def __post_init__(self):
        if not 0 < self.mu <= 1:
            raise ValueError("mu must lie in (0, 1]")
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be >= 1")
        if not 0 <= self.delta < self.mu:
            raise ValueError(f"need 0 <= 1/p - 1/q < mu, got delta={self.delta}")

    @property
    def delta(self) -> float:
        return 1.0 / self.p - (0.0 if math.isinf(self.q) else 1.0 / self.q)


# --- x-centred polar rule ---------------------------------------------------

def _directions(x, ctx: DimensionContext, spec: QuadratureSpec, reduced: bool):
    n = ctx.n
    if reduced:
        rho = np.linalg.norm(x)
        axis = x / rho if rho > 0 else np.eye(n)[0]
        th, wt = gauss_sin_power(spec.angular_nodes, n - 2)
        return axial_points(np.ones_like(th), th, axis, n), wt * ctx.omega_sub
    return sphere_rule(n, spec.angular_nodes)


def _s_max(x, dirs):
    b = dirs @ x
    return -b + np.sqrt(b * b + 1.0 - x @ x)


def _panel_fractions(x, smax_all, spec: QuadratureSpec):
    """Breakpoints in u = s/s_max, per direction: (Ndir, P+2)."""
    h0 = min(spec.split_radius, 0.5 * (1.0 - np.linalg.norm(x)))
    top = float(np.max(smax_all))
    panels = max(1, math.ceil(math.log2(max(top / h0, 1.0))))
    lo = np.minimum(h0 / smax_all, 1.0)
    k = np.arange(panels + 1)
    fr = lo[:, None] ** ((panels - k) / panels)[None, :]
    return np.concatenate([np.zeros((len(lo), 1)), fr], axis=1)


def centered_integrate(x, integrand, spec: QuadratureSpec, ctx: DimensionContext,
                       reduced: bool = False, radial_nodes: int | None = None):
    """Sum of w * integrand(y) * s^(n-1) over the x-centred polar rule.

    ``integrand(y, s)`` receives y with shape (..., n) and s with shape (...)
    and returns values of shape (...) or (..., k).
    """
    x = np.asarray(x, dtype=float)
    n = ctx.n
    dirs, wd = _directions(x, ctx, spec, reduced)
    smax = _s_max(x, dirs)
    frac = _panel_fractions(x, smax, spec)
    u, wu = gauss_legendre(radial_nodes or spec.radial_nodes, 0.0, 1.0)
    total = 0.0
    for start in range(0, len(dirs), CHUNK):
        sl = slice(start, start + CHUNK)
        f = frac[sl]
        a, b = f[:, :-1], f[:, 1:]
        # nodes (Nd, P, k) in u-space, mapped to s
        uu = a[..., None] + (b - a)[..., None] * u
        ww = (b - a)[..., None] * wu
        s = (smax[sl, None, None] * uu).reshape(len(f), -1)
        w = (wd[sl, None, None] * smax[sl, None, None] * ww).reshape(len(f), -1) * s ** (n - 1)
        y = x + s[..., None] * dirs[sl, None, :]
        vals = integrand(y, s)
        if vals.ndim == w.ndim:
            total = total + np.sum(w * vals)
        else:
            total = total + np.tensordot(w, vals, axes=([0, 1], [0, 1]))
    return total


def _apply(x, integrand, spec, ctx, g: ScalarField, vector=False):
    """Dispatch on the quadrature scheme; returns (value, error estimate).

    reduced-polar collapses the direction sphere to the polar angle about x
    (radial operands only); singularity-split uses the full direction sphere.
    """
    x = as_ball_point(x, ctx.n)
    if spec.scheme == "monte-carlo":
        return _apply_mc(x, integrand, spec, ctx)
    reduced = spec.scheme == "reduced-polar"
    if reduced and not g.radial:
        raise SchemeMismatchError(f"reduced-polar needs a radial field, got {g.label}")
    coarse_nodes = max(8, 3 * spec.radial_nodes // 4)
    if vector and reduced:
        # the component orthogonal to x integrates to zero by symmetry
        rho = np.linalg.norm(x)
        axis = x / rho if rho > 0 else np.eye(ctx.n)[0]

        def proj(y, s):
            return integrand(y, s) @ axis
        fine = centered_integrate(x, proj, spec, ctx, True)
        coarse = centered_integrate(x, proj, spec, ctx, True, coarse_nodes)
        return fine * axis, abs(fine - coarse)
    fine = centered_integrate(x, integrand, spec, ctx, reduced)
    coarse = centered_integrate(x, integrand, spec, ctx, reduced, coarse_nodes)
    return fine, float(np.max(np.abs(np.asarray(fine) - coarse)))


def _apply_mc(x, integrand, spec, ctx):
    """Inner ball |y-x| < split_radius by the polar rule, remainder by Monte Carlo."""
    n = ctx.n
    inner_spec = QuadratureSpec("singularity-split", spec.radial_nodes, spec.angular_nodes,
                                spec.mc_samples, spec.seed, spec.split_radius)
    dirs, wd = sphere_rule(n, inner_spec.angular_nodes)
    smax = np.minimum(_s_max(x, dirs), spec.split_radius)
    u, wu = gauss_legendre(spec.radial_nodes, 0.0, 1.0)
    s = smax[:, None] * u
    w = wd[:, None] * smax[:, None] * wu * s ** (n - 1)
    inner = np.tensordot(w, integrand(x + s[..., None] * dirs[:, None, :], s), axes=([0, 1], [0, 1]))
    y = ball_sample(spec.mc_samples, spec.seed, ctx)
    d = np.linalg.norm(y - x, axis=1)
    keep = d >= spec.split_radius
    vals = np.zeros((len(y),) + np.shape(inner))
    vals[keep] = integrand(y[keep], d[keep])
    vals *= ctx.volume
    outer = vals.mean(axis=0)
    err = 3 * vals.std(axis=0, ddof=1) / math.sqrt(len(y))
    return inner + outer, float(np.max(err))


# --- operators ----------------------------------------------------------------

def green_potential(g: ScalarField, x, spec: QuadratureSpec, ctx: DimensionContext):
    """int_B G(x,y) g(y) dy; returns (value, estimated error)."""
    def integrand(y, s):
        return kernels.green(x, y, ctx) * g(y)
    val, err = _apply(x, integrand, spec, ctx, g)
    return float(val), err


def grad_operator(g: ScalarField, x, spec: QuadratureSpec, ctx: DimensionContext) -> VectorResult:
    """(1/omega) int_B N(x,y) g(y) dy, the gradient of -G[g]."""
    def integrand(y, s):
        return kernels.n_kernel(x, y, ctx) * g(y)[..., None]
    val, err = _apply(x, integrand, spec, ctx, g, vector=True)
    return VectorResult(np.asarray(val) / ctx.omega, err / ctx.omega)


def abs_operator(f: ScalarField, x, spec: QuadratureSpec, ctx: DimensionContext,
                 convention: NormConvention | str = "sigma"):
    if isinstance(convention, str):
        convention = NormConvention.of(convention, ctx)

    def integrand(y, s):
        return kernels.n_kernel_mag(x, y, ctx) * f(y)
    val, err = _apply(x, integrand, spec, ctx, f)
    return convention.prefactor * float(val), convention.prefactor * err


def h_operator(f: ScalarField, x, spec: QuadratureSpec, ctx: DimensionContext):
    """(1/((n-2) omega)) int_B |H(x,y)| f(y) dy."""
    def integrand(y, s):
        return kernels.h_kernel_mag(x, y, ctx) * f(y)
    val, err = _apply(x, integrand, spec, ctx, f)
    return ctx.c_n * float(val), ctx.c_n * err


def riesz_potential(f: ScalarField, mu: float, x, spec: QuadratureSpec, ctx: DimensionContext):
    """V_mu f(x) = int_B |x-y|^(n(mu-1)) f(y) dy.

    After the polar Jacobian the radial weight is s^(n mu - 1), handled
    exactly by Gauss-Jacobi nodes on [0, s_max].  Radial fields, and affine
    fields c + y_i (whose potential is c V[1] + x_i/|x| V[<y, x/|x|>]), use
    the polar angle about x only.
    """
    if not 0 < mu <= 1:
        raise ValueError("mu must lie in (0, 1]")
    x = as_ball_point(x, ctx.n)
    n = ctx.n
    beta = n * mu - 1.0
    reduced = spec.scheme == "reduced-polar" and (f.radial or f.affine is not None)
    dirs, wd = _directions(x, ctx, spec, reduced)
    smax = _s_max(x, dirs)
    v, wv = roots_jacobi(spec.radial_nodes, 0.0, beta)
    # int_0^S s^beta h(s) ds = (S/2)^(beta+1) int_{-1}^{1} (1+v)^beta h(S(1+v)/2) dv
    s = smax[:, None] * (1 + v) / 2
    w = wd[:, None] * (smax[:, None] / 2) ** (beta + 1) * wv
    y = x + s[..., None] * dirs[:, None, :]
    if reduced and not f.radial:
        c, i = f.affine
        rho = np.linalg.norm(x)
        axis = x / rho if rho > 0 else np.eye(n)[0]
        along = float(np.sum(w * (y @ axis))) if rho > 0 else 0.0
        return float(c * np.sum(w) + axis[i] * along)
    return float(np.sum(w * f(y)))


def poisson_extension(f: ScalarField, x, spec: QuadratureSpec, ctx: DimensionContext):
    """P[f](x) = int_S P(x,eta) f(eta) d sigma(eta) with normalised sigma."""
    x = as_ball_point(x, ctx.n)
    n = ctx.n
    rho = float(np.linalg.norm(x))
    if f.radial:
        axis = x / rho if rho > 0 else np.eye(n)[0]
        breaks = graded_panels(0.0, np.pi, max(1.0 - rho, 1e-3), toward="a")
        th, wt = composite_gauss(breaks, spec.angular_nodes)
        wt = wt * np.sin(th) ** (n - 2) * ctx.omega_sub
        eta = axial_points(np.ones_like(th), th, axis, n)
    else:
        eta, wt = sphere_rule(n, spec.angular_nodes)
    return float(np.sum(wt * kernels.poisson_kernel(x, eta, ctx) * f(eta)) / ctx.omega)


def lq_norm_mc(values, q: float, ctx: DimensionContext):
    """(|B| mean |v|^q)^(1/q) from uniform ball samples, with a 1-sigma error (delta method)."""
    a = np.abs(values) ** q * ctx.volume
    m = a.mean()
    se = a.std(ddof=1) / math.sqrt(len(a))
    val = m ** (1 / q)
    return val, val / q * se / m if m > 0 else 0.0


def riesz_bound_rhs(params: RieszParams, f_norm_p: float, ctx: DimensionContext) -> float:
    mu, delta = params.mu, params.delta
    vol = ctx.volume
    return ((1 / (mu - delta)) ** (1 - delta) * (ctx.omega / ctx.n) ** (1 - mu)
            * vol ** (mu - delta) * f_norm_p)


def riesz_bound_check(f: ScalarField, params: RieszParams, spec: QuadratureSpec,
                      ctx: DimensionContext, samples: int = 2000) -> CheckResult:
    """||V_mu f||_q <= (1/(mu-delta))^(1-delta) (omega/n)^(1-mu) |B|^(mu-delta) ||f||_p.

    ||V_mu f||_q is a Monte Carlo average over a seeded ball sample; ||f||_p is
    integrated deterministically.  Passes when LHS <= RHS + 3 standard errors
    + the inner-quadrature error estimate (fine vs 3/4-node rule) + 1e-12
    relative roundoff, the last two covering the equality cases.
    """
    from .ballgeom import ball_integrate
    pts = ball_sample(samples, spec.seed, ctx)
    coarse = QuadratureSpec(spec.scheme, max(8, 3 * spec.radial_nodes // 4),
                            max(8, 3 * spec.angular_nodes // 4), spec.mc_samples, spec.seed,
                            spec.split_radius)
    vf = np.array([riesz_potential(f, params.mu, p, spec, ctx) for p in pts])
    vc = np.array([riesz_potential(f, params.mu, p, coarse, ctx) for p in pts])
    lhs, lhs_se = lq_norm_mc(vf, params.q, ctx)
    quad_err = abs(lhs - lq_norm_mc(vc, params.q, ctx)[0])
    power = ScalarField(f"|{f.label}|^p", lambda y: np.abs(f(y)) ** params.p,
                        radial=f.radial, axis_index=f.axis_index)
    scheme = "reduced-polar" if power.axis_in(ctx.n) is not None else "singularity-split"
    fpq, _ = ball_integrate(power, QuadratureSpec(scheme, 32, 32, spec.mc_samples, spec.seed,
                                                  spec.split_radius), ctx)
    rhs = riesz_bound_rhs(params, fpq ** (1 / params.p), ctx)
    margin = 3 * lhs_se + quad_err + 1e-12 * abs(rhs)
    ok = lhs <= rhs + margin
    worst = max(0.0, lhs - rhs - margin)
    return CheckResult.predicate(
        f"riesz-bound[{f.label},mu={params.mu:g},p={params.p:g},q={params.q:g}]", ctx.n, ok,
        "inequality: Riesz potential L^p->L^q bound", worst=worst, tolerance=margin,
        detail={"lhs": lhs, "rhs": rhs, "lhs_se": lhs_se, "quad_err": quad_err})
