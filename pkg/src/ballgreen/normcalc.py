"""Kernel integrals K, Kswap, their hypergeometric reductions, the series
coefficients that bound them, and L^inf / L^1 / interpolated norm estimates
of the absolute gradient operator."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import quad

from . import kernels
from .ballgeom import (DimensionContext, QuadratureSpec, axial_points, bracket,
                       graded_panels, moebius, moebius_jacobian, reduced_polar_rule)
from .fields import constant
from .operators import NormConvention, abs_operator, h_operator
from .specfun import hyp2f1

DEFAULT_GRID = tuple(round(0.05 * k, 2) for k in range(20)) + (0.99,)
DEFAULT_M_MAX = 200

NORMALISATION_NOTE = (
    "kernel prefactor conventions differ: the operator is defined with 1/omega_{n-1}, the "
    "L^inf constant is the unit-prefactor supremum, the L^1 value 1/(n-2) is the "
    "green-prefactor supremum; every number is reported with its convention")


def _x_on_axis(rho: float, n: int) -> np.ndarray:
    x = np.zeros(n)
    x[0] = rho
    return x


def _graded_2d_rule(rho, ctx, radial_nodes, angular_nodes):
    """(r, theta) rule graded toward r = 1 and theta = pi at scale 1 - rho."""
    scale = max(1.0 - rho, 1e-4)
    rb = graded_panels(0.0, 1.0, scale, toward="b")
    tb = graded_panels(0.0, np.pi, scale, toward="b")
    return reduced_polar_rule(ctx, radial_nodes, angular_nodes, rb, tb)


# --- K(x) = int_B |N(x,y)| dy ----------------------------------------------

def moebius_reduced_integrand(rho, r, t, n):
    """(1-rho^2) |x(r^(n-1)-r) + xi(r^n-1)| / |r x + xi|^(n+2), xi at polar angle t from x."""
    # |a x_hat + b xi|^2 with a = rho (r^(n-1)-r), b = r^n - 1
    a = rho * (r ** (n - 1) - r)
    b = r ** n - 1
    num = np.sqrt(a * a + b * b + 2 * a * b * np.cos(t))
    den = (1 + r * r * rho * rho + 2 * r * rho * np.cos(t)) ** ((n + 2) / 2)
    return (1 - rho * rho) * num / den


def kernel_integral_K(rho: float, method: str, spec: QuadratureSpec, ctx: DimensionContext) -> float:
    """K(|x|) = int_B |N(x,y)| dy.

    method "direct" integrates the original kernel in x-centred polar
    coordinates; "moebius" integrates the pulled-back form over (r, angle).
    """
    n = ctx.n
    if method == "direct":
        sp = QuadratureSpec("reduced-polar", spec.radial_nodes, spec.angular_nodes,
                            spec.mc_samples, spec.seed, spec.split_radius)
        return abs_operator(constant(1.0), _x_on_axis(rho, n), sp, ctx, "unit")[0]
    if method == "moebius":
        r, t, w = _graded_2d_rule(rho, ctx, spec.radial_nodes, 4 * spec.angular_nodes)
        # the rule carries r^(n-1); the pulled-back integrand is already per dr dxi
        return float(np.dot(w / r ** (n - 1), moebius_reduced_integrand(rho, r, t, n)))
    raise ValueError(f"unknown method {method!r}")


def kernel_integral_K_vector(x, spec: QuadratureSpec, ctx: DimensionContext) -> float:
    """K at an arbitrary point, full direction sphere (no symmetry assumed)."""
    sp = QuadratureSpec("singularity-split", spec.radial_nodes, spec.angular_nodes,
                        spec.mc_samples, spec.seed, spec.split_radius)
    return abs_operator(constant(1.0), x, sp, ctx, "unit")[0]


def kernel_integral_Kswap(rho: float, method: str, spec: QuadratureSpec, ctx: DimensionContext) -> float:
    """int_B |H(x,y)| dy, the row integral of the swapped kernel."""
    n = ctx.n
    if method == "direct":
        sp = QuadratureSpec("reduced-polar", spec.radial_nodes, spec.angular_nodes,
                            spec.mc_samples, spec.seed, spec.split_radius)
        return h_operator(constant(1.0), _x_on_axis(rho, n), sp, ctx)[0] / ctx.c_n
    if method == "moebius":
        x = _x_on_axis(rho, n)
        r, t, w = _graded_2d_rule(rho, ctx, spec.radial_nodes, 2 * spec.angular_nodes)
        z = axial_points(r, t, -x / rho if rho > 0 else np.eye(n)[0], n) if rho > 0 else \
            axial_points(r, t, np.eye(n)[0], n)
        y = moebius(-x, z)
        vals = kernels.h_kernel_mag(x, y, ctx) * moebius_jacobian(x, z)
        return float(np.dot(w, vals))
    raise ValueError(f"unknown method {method!r}")


# --- sphere averages ---------------------------------------------------------

def sphere_integral_reduced(a_exponent: float, r: float, rho: float, ctx: DimensionContext) -> float:
    """int_S |r x + xi|^(-a) d xi = omega F(a/2, 1 - n/2 + a/2; n/2; r^2 |x|^2)."""
    n = ctx.n
    if not r * rho < 1:
        raise ValueError("need r |x| < 1")
    a = a_exponent
    return ctx.omega * hyp2f1(a / 2, 1 - n / 2 + a / 2, n / 2, (r * rho) ** 2)


def sphere_integral_direct(a_exponent: float, r: float, rho: float, ctx: DimensionContext) -> float:
    """Same sphere integral by adaptive quadrature over the polar angle."""
    n = ctx.n
    c = r * rho

    def f(t):
        return np.sin(t) ** (n - 2) * (1 + c * c + 2 * c * np.cos(t)) ** (-a_exponent / 2)
    val = quad(f, 0, np.pi, epsabs=1e-14, epsrel=1e-13, limit=400)[0]
    return ctx.omega_sub * val


# --- series coefficients -----------------------------------------------------

_LG = math.lgamma
_SQRT_PI = math.sqrt(math.pi)


def coefficient_a(n: int, m: int) -> float:
    """Coefficient of |x|^(2m), m >= 1, of the L^inf majorant J (without the omega factor)."""
    first = (2 * (n - 3) * n + 4 * (n - 2) * m) / (n * (n - 3 + 2 * m) * (n - 1 + 2 * m) * (n + 1 + 2 * m))
    second = ((n - 2) * (n - 3 + 4 * m) / (8 * _SQRT_PI)
              * math.exp(_LG(n / 2) + _LG(m - 0.5) + _LG((n - 3) / 2 + m)
                         - _LG((1 + n) / 2) - _LG(1 + m) - _LG(n / 2 + m)))
    return first - second


def coefficient_b(n: int, m: int) -> float:
    """Ratio of the two parts of a_m; a_m < 0 iff b_m < 1."""
    num = 2 * ((n - 3) * n + 2 * (n - 2) * m) * _SQRT_PI
    den = (n - 2) * n * (n - 3 + 4 * m)
    return num / den * math.exp(_LG(m + 1) + _LG((1 + n) / 2) + _LG(n / 2 + m)
                                - _LG(n / 2) - _LG(m - 0.5) - _LG((3 + n) / 2 + m))


def majorant_c(n: int, m: float) -> float:
    """Gamma-inequality majorant of b_m; increasing in m."""
    num = 2 * m * ((n - 3) * n + 2 * (n - 2) * m) * _SQRT_PI
    den = (n - 2) * (n + 2 * m) * (n - 3 + 4 * m)
    return num / den * math.exp(_LG((1 + n) / 2) - _LG(1 + n / 2))


def majorant_c_derivative(n: int, m: float) -> float:
    num = 2 * ((n - 3) ** 2 * n ** 2 + 4 * (n - 3) * (n - 2) * n * m + 4 * (6 + (n - 3) * n) * m * m) * _SQRT_PI
    den = (n - 2) * (n + 2 * m) ** 2 * (n + 4 * m - 3) ** 2
    return num / den * math.exp(_LG((1 + n) / 2) - _LG(1 + n / 2))


def c_limit(n: int) -> float:
    return _SQRT_PI * math.exp(_LG((1 + n) / 2) - _LG(1 + n / 2)) / 2


def coefficient_A(n: int, m: int, r):
    """Coefficient of |x|^(2m) in the radial integrand K_r(x) of J."""
    r = np.asarray(r, dtype=float)
    if m == 0:
        return 1 - r ** n
    part1 = (r ** (2 * m - 4) / (2 * n) * r ** n * (1 - r * r)
             * (-2 * m * (-2 + n + 2 * m) + 2 * (1 + m) * (n + 2 * m) * r * r))
    g = math.exp(_LG(n / 2) + _LG((1 + 2 * m) / 2) + _LG((n + 2 * m - 1) / 2)
                 - _LG(m + 1) - _LG((1 + n) / 2) - _LG(n / 2 + m)) / (2 * _SQRT_PI)
    part2 = (r ** (2 * m - 4) * (r * r - r ** n)
             * (-2 * m * (-2 + 2 * m + n) + (1 + 2 * m) * (-1 + 2 * m + n) * r * r) * g)
    return part1 + part2


def coefficient_e(n: int, m: int) -> float:
    """Coefficient e_m in J_lemma(x) = n/(n+1) - sum e_m |x|^(2m)."""
    poly = n * (8 * m * m + (n - 1) ** 2 + 2 * m * (3 * n - 5))
    den = (2 * m + n - 1) ** 2 * (2 * m + n + 1) ** 2 * _SQRT_PI
    return poly / den * math.exp(_LG(m - 0.5) + _LG(1.5 + m + n / 2) + _LG(n / 2)
                                 - _LG(1 + m) - _LG(m + n / 2) - _LG((1 + n) / 2))


@dataclass
class SeriesCoefficients:
    n: int
    m_max: int
    a: list
    e: list
    b: list
    c: list
    c_limit: float
    a0: float

    @classmethod
    def build(cls, n: int, m_max: int = DEFAULT_M_MAX) -> "SeriesCoefficients":
        ms = range(1, m_max + 1)
        ctx = DimensionContext(n)
        return cls(n, m_max,
                   [coefficient_a(n, m) for m in ms],
                   [coefficient_e(n, m) for m in ms],
                   [coefficient_b(n, m) for m in ms],
                   [majorant_c(n, m) for m in ms],
                   c_limit(n),
                   ctx.omega * n / (n + 1))


def _series_sum(coeffs, s: float):
    """sum_{m>=1} coeffs[m-1] s^m and a geometric tail bound."""
    total = 0.0
    p = 1.0
    for c in coeffs:
        p *= s
        total += c * p
    last = abs(coeffs[-1]) * p
    tail = last * s / (1 - s) if s < 1 else math.inf
    return total, tail


def series_J_theorem(rho: float, m_max: int, ctx: DimensionContext, with_tail=False):
    """omega (n/(n+1) + sum a_m |x|^(2m)): the series majorant of K(|x|)."""
    if m_max < 50:
        raise ValueError("m_max must be >= 50")
    n = ctx.n
    total, tail = _series_sum([coefficient_a(n, m) for m in range(1, m_max + 1)], rho * rho)
    val = ctx.omega * (n / (n + 1) + total)
    return (val, ctx.omega * tail) if with_tail else val


def J_theorem_integral(rho: float, ctx: DimensionContext) -> float:
    """omega (1-|x|^2) int_0^1 [(1-r^(n-2)) F(3/2,(1+n)/2;n/2;r^2|x|^2)
    + (r^(n-2)-r^n)(n-(n-4)r^2|x|^2)/(n(1-r^2|x|^2)^3)] dr."""
    n = ctx.n
    s = rho * rho

    def f(r):
        u = r * r * s
        return ((1 - r ** (n - 2)) * hyp2f1(1.5, (1 + n) / 2, n / 2, u)
                + (r ** (n - 2) - r ** n) * (n - (n - 4) * u) / (n * (1 - u) ** 3))
    return ctx.omega * (1 - s) * quad(f, 0, 1, epsabs=1e-14, epsrel=1e-13, limit=200)[0]


def J_theorem_from_A(rho: float, m_max: int, ctx: DimensionContext) -> float:
    """omega int_0^1 sum_m A_m(r) |x|^(2m) dr, by Gauss-Legendre in r."""
    from .ballgeom import gauss_legendre
    r, w = gauss_legendre(64, 0.0, 1.0)
    s = rho * rho
    total = np.zeros_like(r)
    for m in range(m_max + 1):
        total += coefficient_A(ctx.n, m, r) * s ** m
    return ctx.omega * float(np.dot(w, total))


def series_J_lemma(rho: float, m_max: int, ctx: DimensionContext) -> float:
    """n/(n+1) - sum e_m |x|^(2m)."""
    if m_max < 50:
        raise ValueError("m_max must be >= 50")
    n = ctx.n
    total, _ = _series_sum([coefficient_e(n, m) for m in range(1, m_max + 1)], rho * rho)
    return n / (n + 1) - total


def J_lemma_integral(rho: float, ctx: DimensionContext) -> float:
    """(1-|x|^2) int_0^1 (1-r^n) F(3/2,(1+n)/2;n/2;r^2|x|^2) dr."""
    n = ctx.n
    s = rho * rho
    f = lambda r: (1 - r ** n) * hyp2f1(1.5, (1 + n) / 2, n / 2, r * r * s)
    return (1 - s) * quad(f, 0, 1, epsabs=1e-14, epsrel=1e-13, limit=200)[0]


def J_lemma_quadrature(rho: float, spec: QuadratureSpec, ctx: DimensionContext) -> float:
    """(1/omega) int_B |x-y| (|x-y|^-n - [x,y]^-n) dy in x-centred polar coordinates."""
    from .operators import centered_integrate
    x = _x_on_axis(rho, ctx.n)
    n = ctx.n

    def integrand(y, s):
        return s * (s ** -n - bracket(x, y) ** -n)
    return float(centered_integrate(x, integrand, spec, ctx, reduced=True)) / ctx.omega


def L_closed_form(rho: float, ctx: DimensionContext) -> float:
    """C' (1-|x|^2) F(1,(1+n)/2;(3+n)/2;|x|^2) with C' = omega/(n+1)."""
    n = ctx.n
    s = rho * rho
    return ctx.omega / (n + 1) * (1 - s) * hyp2f1(1.0, (1 + n) / 2, (3 + n) / 2, s)


def L_series(rho: float, m_max: int, ctx: DimensionContext) -> float:
    n = ctx.n
    coeffs = [2 * (1 + n) / (-1 + 4 * m * m + 4 * m * n + n * n) for m in range(1, m_max + 1)]
    total, _ = _series_sum(coeffs, rho * rho)
    return ctx.omega / (n + 1) * (1 - total)


def L_quadrature(rho: float, spec: QuadratureSpec, ctx: DimensionContext) -> float:
    """int_B |y| (1-|x|^2)/[x,y]^n dy by a graded reduced-polar rule."""
    n = ctx.n
    x = _x_on_axis(rho, n)
    r, t, w = _graded_2d_rule(rho, ctx, spec.radial_nodes, spec.angular_nodes)
    # the bracket is smallest for y along +x; flip the angle so grading sits at theta = 0
    y = axial_points(r, np.pi - t, np.eye(n)[0], n)
    return float(np.dot(w, r * (1 - rho * rho) / bracket(x, y) ** n))


# --- norm estimates ------------------------------------------------------------

@dataclass
class NormReport:
    kind: str
    n: int
    convention: str
    prefactor: float
    value: float
    argmax_radius: float
    grid: list
    values: list
    method: str
    target: float
    errors: list = field(default_factory=list)
    note: str = NORMALISATION_NOTE
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def _coarser(spec: QuadratureSpec) -> QuadratureSpec:
    return QuadratureSpec(spec.scheme, max(8, 3 * spec.radial_nodes // 4),
                          max(8, 3 * spec.angular_nodes // 4), spec.mc_samples, spec.seed,
                          spec.split_radius)


def _report(kind, ctx, spec, convention, radii_grid, fn, method, target_unit):
    """fn(radius, spec) -> unit-prefactor value; errors compare against a 3/4-node rule."""
    grid = [float(r) for r in radii_grid]
    if not grid or 0.0 not in grid:
        raise ValueError("radii grid must be non-empty and contain 0")
    conv = NormConvention.of(convention, ctx) if isinstance(convention, str) else convention
    coarse = _coarser(spec)
    vals, errs = [], []
    for r in grid:
        v = fn(r, spec)
        vals.append(conv.prefactor * v)
        errs.append(conv.prefactor * abs(v - fn(r, coarse)))
    i = int(np.argmax(vals))
    return NormReport(kind, ctx.n, conv.tag, conv.prefactor, vals[i], grid[i], grid, vals,
                      method, conv.prefactor * target_unit, errs)


def norm_inf_estimate(ctx: DimensionContext, spec: QuadratureSpec, convention="unit",
                      radii_grid=DEFAULT_GRID, method: str = "moebius") -> NormReport:
    """sup over the grid of prefactor * K(|x|); closed-form target omega n/(n+1)."""
    return _report("norm-inf", ctx, spec, convention, radii_grid,
                   lambda r, sp: kernel_integral_K(r, method, sp, ctx), method,
                   ctx.omega * ctx.n / (ctx.n + 1))


def norm_l1_estimate(ctx: DimensionContext, spec: QuadratureSpec, convention="green",
                     radii_grid=DEFAULT_GRID, method: str = "moebius",
                     with_matrix: bool = True) -> NormReport:
    """sup over the grid of prefactor * Kswap(|x|): the L^1 norm via the adjoint."""
    rep = _report("norm-l1", ctx, spec, convention, radii_grid,
                  lambda r, sp: kernel_integral_Kswap(r, method, sp, ctx), method, ctx.omega)
    if with_matrix:
        disc = RadialDiscretization.build(ctx)
        rep.extra["matrix"] = disc.summary(rep.prefactor)
    return rep


def interpolation_bound(p: float, norm_1: float, norm_inf: float) -> float:
    """Riesz-Thorin: ||T||_p <= ||T||_1^(1/p) ||T||_inf^((p-1)/p)."""
    if not 1 < p < math.inf:
        raise ValueError("p must lie in (1, inf)")
    return norm_1 ** (1 / p) * norm_inf ** ((p - 1) / p)


def interpolation_bound_for(p: float, ctx: DimensionContext, convention="sigma") -> float:
    """Interpolated bound using the closed-form endpoint norms under one convention."""
    conv = NormConvention.of(convention, ctx)
    n1 = conv.prefactor * ctx.omega
    ninf = conv.prefactor * ctx.omega * ctx.n / (ctx.n + 1)
    return interpolation_bound(p, n1, ninf)


# --- finite discretisation -------------------------------------------------

@dataclass
class RadialDiscretization:
    """The operator restricted to radial functions on ``cells`` radial shells.

    Matrix entry (i, j) integrates the unit-prefactor kernel at |x| = centre_i
    over shell j with a sub x sub (r, angle) tensor rule per cell.
    ``weights`` are the shell volumes defining the discrete L^1 / L^2 norms.
    """
    n: int
    edges: np.ndarray
    centres: np.ndarray
    weights: np.ndarray
    matrix: np.ndarray

    @classmethod
    def build(cls, ctx: DimensionContext, cells: int = 20, sub: int = 20):
        from .ballgeom import gauss_legendre, gauss_sin_power
        n = ctx.n
        edges = np.linspace(0.0, 1.0, cells + 1)
        centres = 0.5 * (edges[:-1] + edges[1:])
        weights = ctx.omega / n * (edges[1:] ** n - edges[:-1] ** n)
        th, wt = gauss_sin_power(sub, n - 2)
        wt = wt * ctx.omega_sub
        M = np.empty((cells, cells))
        for j in range(cells):
            r, wr = gauss_legendre(sub, edges[j], edges[j + 1])
            R, T = np.meshgrid(r, th, indexing="ij")
            W = np.outer(wr * r ** (n - 1), wt)
            y = axial_points(R, T, np.eye(n)[0], n)
            for i in range(cells):
                x = _x_on_axis(centres[i], n)
                M[i, j] = np.sum(W * kernels.n_kernel_mag(x, y, ctx))
        return cls(n, edges, centres, weights, M)

    def l1_matrix(self) -> np.ndarray:
        """W M W^-1: its plain 1-norm is the weighted-L^1 operator norm."""
        return self.weights[:, None] * self.matrix / self.weights[None, :]

    def l2_matrix(self) -> np.ndarray:
        s = np.sqrt(self.weights)
        return s[:, None] * self.matrix / s[None, :]

    def summary(self, prefactor: float = 1.0) -> dict:
        A = prefactor * self.l1_matrix()
        one = matrix_norm_1(A)
        inf_t = matrix_norm_inf(A.T)
        inf_m = matrix_norm_inf(prefactor * self.matrix)
        return {"cells": len(self.centres), "norm_1": one, "norm_inf_transpose": inf_t,
                "exact_duality": one == inf_t, "norm_inf": inf_m,
                "spectral_l2": spectral_norm(prefactor * self.l2_matrix())}


def matrix_norm_1(A) -> float:
    """Max column sum, each sum correctly rounded (math.fsum)."""
    A = np.abs(np.asarray(A))
    return max(math.fsum(A[:, j]) for j in range(A.shape[1]))


def matrix_norm_inf(A) -> float:
    A = np.abs(np.asarray(A))
    return max(math.fsum(A[i, :]) for i in range(A.shape[0]))


def spectral_norm(A, iters: int = 500, tol: float = 1e-13, seed: int = 0) -> float:
    """Largest singular value by power iteration on A^T A."""
    A = np.asarray(A, dtype=float)
    v = np.random.Generator(np.random.Philox(seed)).standard_normal(A.shape[1])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = A.T @ (A @ v)
        new = float(np.linalg.norm(w))
        if new == 0.0:
            return 0.0
        v = w / new
        if abs(new - lam) <= tol * new:
            lam = new
            break
        lam = new
    return math.sqrt(lam)
