"""Numerical exploration of candidate L^p -> L^inf constants (p > n).

A_p is built from the q-norm of |N(x, .)|, B_p from the q-norm of its
projection <N(x, .), eta>, with q = p/(p-1).  Closed forms are compared with
their x = 0 integrals; scans over |x| only record evidence.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.special import roots_jacobi

from . import kernels
from .ballgeom import (DimensionContext, QuadratureSpec, axial_points, gauss_legendre,
                       as_sphere_direction, gauss_sin_power, sphere_area, sphere_rule, sphere_sample)

_LG = math.lgamma


@dataclass(frozen=True)
class ConjectureParams:
    n: int
    p: float

    def __post_init__(self):
        if not self.p > self.n:
            raise ValueError(f"need p > n, got p={self.p}, n={self.n}")

    @property
    def q(self) -> float:
        return self.p / (self.p - 1)


def _radial_beta(n, q):
    """int_0^1 (r^(1-n) - r)^q r^(n-1) dr = Gamma(1+q)Gamma(1+(1/n-1)q) / (n Gamma(2+q/n))."""
    return math.exp(_LG(1 + q) + _LG(1 + (1 / n - 1) * q) - _LG(2 + q / n)) / n


def conjecture_Ap_closed(params: ConjectureParams, ctx: DimensionContext) -> float:
    n, q, p = ctx.n, params.q, params.p
    return ctx.omega ** (-1 / p) * _radial_beta(n, q) ** (1 / q)


def conjecture_Ap_integral(params: ConjectureParams, ctx: DimensionContext) -> float:
    """(1/omega) (int_B (|y|^(1-n) - |y|)^q dy)^(1/q) by 1-D adaptive quadrature."""
    n, q = ctx.n, params.q
    f = lambda r: (r ** (1 - n) - r) ** q * r ** (n - 1)
    val = quad(f, 0, 1, epsabs=1e-15, epsrel=1e-13, limit=400)[0]
    return (ctx.omega * val) ** (1 / q) / ctx.omega


def conjecture_Bp_closed(params: ConjectureParams, ctx: DimensionContext) -> float:
    """B_p closed form exactly as displayed with the conjecture.

    Its angular factor Gamma(n/2)Gamma((n-1+q)/2)/(Gamma((n-1)/2)Gamma((n+q)/2))
    is the sphere average of |sin|^q, not of |<y/|y|, eta>|^q = |cos|^q; see
    ``conjecture_Bp_cosine_closed`` for the latter.
    """
    n, q, p = ctx.n, params.q, params.p
    ang = math.exp(_LG(n / 2) + _LG((n - 1 + q) / 2) - _LG((n - 1) / 2) - _LG((n + q) / 2))
    return ctx.omega ** (-1 / p) * (_radial_beta(n, q) * ang) ** (1 / q)


def conjecture_Bp_cosine_closed(params: ConjectureParams, ctx: DimensionContext) -> float:
    """Closed form with the sphere average of |cos|^q: Gamma(n/2)Gamma((1+q)/2)/(sqrt(pi)Gamma((n+q)/2))."""
    n, q, p = ctx.n, params.q, params.p
    ang = math.exp(_LG(n / 2) + _LG((1 + q) / 2) - _LG((n + q) / 2)) / math.sqrt(math.pi)
    return ctx.omega ** (-1 / p) * (_radial_beta(n, q) * ang) ** (1 / q)


def sphere_abs_moment(q: float, eta, n: int) -> float:
    """int_{S^(n-1)} |<w, eta>|^q dw by nested adaptive quadrature.

    Writes w = u e_1 + sqrt(1-u^2) w' and integrates w' over S^(n-2) about the
    component of eta orthogonal to e_1, splitting at the sign change of <w, eta>.
    """
    eta = as_sphere_direction(eta, n)
    e1 = float(eta[0])
    perp = float(np.linalg.norm(eta[1:]))
    sub_area = sphere_area(n - 2)

    def inner(u):
        a = u * e1
        b = math.sqrt(max(1 - u * u, 0.0)) * perp
        f = lambda phi: abs(a + b * math.cos(phi)) ** q * math.sin(phi) ** (n - 3)
        pts = None
        if b > 0 and abs(a) < b:
            pts = [math.acos(-a / b)]
        return sub_area * quad(f, 0, math.pi, points=pts, epsabs=1e-15, epsrel=1e-13, limit=200)[0]

    outer = lambda u: (1 - u * u) ** ((n - 3) / 2) * inner(u)
    return quad(outer, -1, 1, epsabs=1e-14, epsrel=1e-12, limit=200)[0]


def conjecture_Bp_integral(params: ConjectureParams, ctx: DimensionContext, eta=None) -> float:
    """(1/omega) (int_B |<y,eta>|^q (|y|^-n - 1)^q dy)^(1/q), eta defaulting to e_1."""
    n, q = ctx.n, params.q
    if eta is None:
        eta = np.eye(n)[0]
    rad = quad(lambda r: r ** q * (r ** -n - 1) ** q * r ** (n - 1), 0, 1,
               epsabs=1e-15, epsrel=1e-13, limit=400)[0]
    return (rad * sphere_abs_moment(q, eta, n)) ** (1 / q) / ctx.omega


def _q_norm_about(x, q, ctx, spec, value_fn, reduced):
    """(int_B value_fn(y)^q dy)^(1/q) for a kernel growing like |x-y|^(1-n).

    value_fn must return |kernel| * s^(n-1) (bounded); the leftover weight
    s^((n-1)(1-q)) is absorbed by Gauss-Jacobi on the inner panel.
    """
    n = ctx.n
    beta = (n - 1) * (1 - q)
    if reduced:
        rho = np.linalg.norm(x)
        axis = x / rho if rho > 0 else np.eye(n)[0]
        th, wt = gauss_sin_power(spec.angular_nodes, n - 2)
        dirs = axial_points(np.ones_like(th), th, axis, n)
        wd = wt * ctx.omega_sub
    else:
        dirs, wd = sphere_rule(n, spec.angular_nodes)
    b = dirs @ x
    smax = -b + np.sqrt(b * b + 1 - x @ x)
    h = np.minimum(spec.split_radius, smax)
    v, wv = roots_jacobi(spec.radial_nodes, 0.0, beta)
    s_in = h[:, None] * (1 + v) / 2
    w_in = wd[:, None] * (h[:, None] / 2) ** (beta + 1) * wv
    u, wu = gauss_legendre(spec.radial_nodes, 0.0, 1.0)
    s_out = h[:, None] + (smax - h)[:, None] * u
    w_out = wd[:, None] * (smax - h)[:, None] * wu * s_out ** beta
    total = 0.0
    for s, w in ((s_in, w_in), (s_out, w_out)):
        y = x + s[..., None] * dirs[:, None, :]
        total += np.sum(w * value_fn(y, s) ** q)
    return total ** (1 / q)


def phi_A(rho: float, params: ConjectureParams, spec: QuadratureSpec, ctx: DimensionContext) -> float:
    """(int_B |N(x,y)|^q dy)^(1/q) at |x| = rho (no omega factor)."""
    x = np.zeros(ctx.n)
    x[0] = rho
    fn = lambda y, s: kernels.n_kernel_mag(x, y, ctx) * s ** (ctx.n - 1)
    return _q_norm_about(x, params.q, ctx, spec, fn, reduced=True)


def phi_B(rho: float, eta, params: ConjectureParams, spec: QuadratureSpec, ctx: DimensionContext) -> float:
    """(int_B |<N(x,y), eta>|^q dy)^(1/q) at x = rho e_1 (no omega factor)."""
    x = np.zeros(ctx.n)
    x[0] = rho
    eta = np.asarray(eta, dtype=float)
    fn = lambda y, s: np.abs(kernels.n_kernel(x, y, ctx) @ eta) * s ** (ctx.n - 1)
    return _q_norm_about(x, params.q, ctx, spec, fn, reduced=False)


@dataclass
class ConjectureReport:
    n: int
    p: float
    q: float
    grid: list
    phi_A: list
    phi_B: list
    argmax_A: float
    argmax_B: float
    max_at_zero_A: bool
    max_at_zero_B: bool
    closed: dict
    reading: str = ("B scan maximises jointly over x on the grid and the sampled directions eta; "
                    "values carry no omega factor; evidence only, no verdict")
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def conjecture_scan(params: ConjectureParams, radii_grid, spec: QuadratureSpec,
                    ctx: DimensionContext, eta_samples: int = 4) -> ConjectureReport:
    grid = list(radii_grid)
    if not grid:
        raise ValueError("radii grid must be non-empty")
    n = ctx.n
    # by symmetry only the angle between eta and x matters
    etas = [np.eye(n)[0], np.eye(n)[1]] + list(sphere_sample(eta_samples, spec.seed, ctx))
    pa = [phi_A(r, params, spec, ctx) for r in grid]
    pb = [max(phi_B(r, e, params, spec, ctx) for e in etas) for r in grid]
    ia, ib = int(np.argmax(pa)), int(np.argmax(pb))
    closed = {
        "A_closed": conjecture_Ap_closed(params, ctx),
        "A_integral_x0": conjecture_Ap_integral(params, ctx),
        "B_closed_as_displayed": conjecture_Bp_closed(params, ctx),
        "B_closed_cosine": conjecture_Bp_cosine_closed(params, ctx),
        "B_integral_x0": conjecture_Bp_integral(params, ctx),
    }
    return ConjectureReport(n, params.p, params.q, grid, pa, pb, grid[ia], grid[ib],
                            grid[ia] == 0.0, grid[ib] == 0.0, closed)
