"""Unit-ball geometry and quadrature.

Points are numpy arrays whose last axis has length n; all geometric
functions broadcast over leading axes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

SCHEMES = ("reduced-polar", "monte-carlo", "singularity-split")


class SchemeMismatchError(ValueError):
    pass


def sphere_area(n: int) -> float:
    """Surface measure of S^(n-1): 2 pi^(n/2) / Gamma(n/2)."""
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


@dataclass(frozen=True)
class DimensionContext:
    n: int
    omega: float = field(init=False)
    omega_sub: float = field(init=False)  # omega_{n-2}, area of S^(n-2)
    c_n: float = field(init=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise ValueError(f"dimension must be an integer >= 3, got {self.n}")
        object.__setattr__(self, "omega", sphere_area(self.n))
        object.__setattr__(self, "omega_sub", sphere_area(self.n - 1))
        object.__setattr__(self, "c_n", 1.0 / ((self.n - 2) * self.omega))

    @property
    def volume(self) -> float:
        return self.omega / self.n


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = "singularity-split"
    radial_nodes: int = 24
    angular_nodes: int = 24
    mc_samples: int = 20_000
    seed: int = 0
    split_radius: float = 0.1

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if self.radial_nodes < 8 or self.angular_nodes < 8:
            raise ValueError("node counts must be >= 8")
        if self.mc_samples < 10_000:
            raise ValueError("mc_samples must be >= 1e4")
        if not 0 < self.split_radius <= 0.5:
            raise ValueError("split_radius must lie in (0, 0.5]")

    def scaled(self, factor: int) -> "QuadratureSpec":
        return QuadratureSpec(self.scheme, self.radial_nodes * factor,
                              self.angular_nodes * factor, self.mc_samples * factor,
                              self.seed, self.split_radius)


def as_ball_point(x, n: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if n is not None and x.shape[-1] != n:
        raise ValueError(f"expected {n} coordinates, got {x.shape[-1]}")
    if np.any(np.linalg.norm(x, axis=-1) >= 1.0):
        raise ValueError("point(s) outside the open unit ball")
    return x


def as_sphere_direction(xi, n: int | None = None) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if n is not None and xi.shape[-1] != n:
        raise ValueError(f"expected {n} coordinates, got {xi.shape[-1]}")
    if np.any(np.abs(np.linalg.norm(xi, axis=-1) - 1.0) > 1e-14):
        raise ValueError("direction(s) not on the unit sphere")
    return xi


def _dot(x, y):
    return np.sum(x * y, axis=-1)


def bracket(x, y):
    """[x, y] = | |x| y - y/|y| |, via sqrt(|x|^2 |y|^2 - 2<x,y> + 1)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    val = _dot(x, x) * _dot(y, y) - 2.0 * _dot(x, y) + 1.0
    return np.sqrt(np.maximum(val, 0.0))


def moebius(x, y):
    """T_x y = ((1-|x|^2)(y-x) - |y-x|^2 x) / [x,y]^2, maps x to 0."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = y - x
    num = (1.0 - _dot(x, x))[..., None] * d - _dot(d, d)[..., None] * x
    return num / (bracket(x, y) ** 2)[..., None]


def moebius_norm_identity(x, y):
    """Residual of |T_x y| = |x-y| / [x,y]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lhs = np.linalg.norm(moebius(x, y), axis=-1)
    rhs = np.linalg.norm(x - y, axis=-1) / bracket(x, y)
    return np.abs(lhs - rhs)


def moebius_jacobian(x, z):
    """Volume factor ((1-|x|^2)/[z,-x]^2)^n of y = T_{-x} z."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    n = x.shape[-1]
    return ((1.0 - _dot(x, x)) / bracket(z, -x) ** 2) ** n


# --- quadrature rules -------------------------------------------------------

@lru_cache(maxsize=None)
def _leggauss(k: int):
    return np.polynomial.legendre.leggauss(k)


def gauss_legendre(k: int, a: float = -1.0, b: float = 1.0):
    u, w = _leggauss(k)
    half = 0.5 * (b - a)
    return a + half * (u + 1.0), half * w


@lru_cache(maxsize=None)
def gauss_sin_power(k: int, power: int):
    """Nodes theta in (0, pi), weights for int_0^pi f(theta) sin^power(theta) dtheta.

    Gauss-Jacobi in cos(theta); exact for polynomials in cos(theta) of degree < 2k.
    """
    alpha = (power - 1) / 2.0
    u, w = roots_jacobi(k, alpha, alpha)
    return np.arccos(u), w


def graded_panels(a: float, b: float, scale: float, toward: str = "b", ratio: float = 2.0):
    """Breakpoints on [a, b] refined geometrically toward one end down to width ``scale``."""
    length = b - a
    if scale >= length:
        return np.array([a, b])
    widths = [scale]
    while sum(widths) * ratio < length:
        widths.append(widths[-1] * ratio)
    widths = np.array(widths) * (length / sum(widths))
    cuts = np.concatenate([[0.0], np.cumsum(widths)])
    cuts[-1] = length
    if toward == "b":
        return b - cuts[::-1]
    return a + cuts


def composite_gauss(breaks, k: int):
    nodes, weights = [], []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        u, w = gauss_legendre(k, lo, hi)
        nodes.append(u)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def sphere_rule(n: int, angular_nodes: int):
    """Product rule on S^(n-1); returns (directions (N, n), weights (N,)) summing to omega_{n-1}.

    Hyperspherical angles theta_1..theta_{n-2} use Gauss-Jacobi in cos with
    weights sin^(n-1-j); the azimuth uses the periodic trapezoid rule.
    """
    nphi = 2 * angular_nodes
    phi = 2 * np.pi * np.arange(nphi) / nphi
    dirs = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    wts = np.full(nphi, 2 * np.pi / nphi)
    for power in range(1, n - 1):
        th, wt = gauss_sin_power(angular_nodes, power)
        # prepend cos(theta), scale the existing (lower-dimensional) coordinates by sin(theta)
        c = np.cos(th)[:, None, None]
        s = np.sin(th)[:, None, None]
        lead = np.broadcast_to(c, (len(th), len(dirs), 1))
        dirs = np.concatenate([lead, s * dirs[None]], axis=-1).reshape(-1, power + 2)
        wts = (wt[:, None] * wts[None]).reshape(-1)
    return dirs, wts


def reduced_polar_rule(ctx: DimensionContext, radial_nodes: int, angular_nodes: int,
                       r_breaks=None, t_breaks=None):
    """2-D (r, theta) rule for axisymmetric integrands on B^n.

    Weights include omega_{n-2} r^(n-1) sin^(n-2)(theta).  Returns (r, theta, w), flattened.
    """
    n = ctx.n
    if r_breaks is None:
        r, wr = gauss_legendre(radial_nodes, 0.0, 1.0)
    else:
        r, wr = composite_gauss(r_breaks, radial_nodes)
    if t_breaks is None:
        t, wt = gauss_sin_power(angular_nodes, n - 2)
    else:
        t, wt = composite_gauss(t_breaks, angular_nodes)
        wt = wt * np.sin(t) ** (n - 2)
    R, T = np.meshgrid(r, t, indexing="ij")
    W = ctx.omega_sub * np.outer(wr * r ** (n - 1), wt)
    return R.ravel(), T.ravel(), W.ravel()


def axial_points(r, theta, axis, n: int):
    """Embed (r, theta) as points r (cos theta axis + sin theta perp) in R^n."""
    axis = np.asarray(axis, dtype=float)
    perp = np.zeros(n)
    j = int(np.argmin(np.abs(axis)))
    perp[j] = 1.0
    perp -= perp.dot(axis) * axis
    perp /= np.linalg.norm(perp)
    r = np.asarray(r)[..., None]
    theta = np.asarray(theta)[..., None]
    return r * (np.cos(theta) * axis + np.sin(theta) * perp)


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox stream; reproducible across platforms."""
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


def sphere_sample(count: int, seed: int, ctx: DimensionContext) -> np.ndarray:
    g = make_rng(seed).standard_normal((count, ctx.n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def ball_sample(count: int, seed: int, ctx: DimensionContext) -> np.ndarray:
    rng = make_rng(seed)
    g = rng.standard_normal((count, ctx.n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * rng.random(count)[:, None] ** (1.0 / ctx.n)


def ball_integrate(f, spec: QuadratureSpec, ctx: DimensionContext):
    """Integrate a ScalarField over B^n; returns (value, estimated_error)."""
    n = ctx.n
    if spec.scheme == "monte-carlo":
        y = ball_sample(spec.mc_samples, spec.seed, ctx)
        vals = f(y) * ctx.volume
        return float(vals.mean()), float(3 * vals.std(ddof=1) / math.sqrt(len(vals)))
    if spec.scheme == "reduced-polar":
        axis = f.axis_in(n)
        if axis is None:
            raise SchemeMismatchError(f"field {f.label} is not axisymmetric")
        r, t, w = reduced_polar_rule(ctx, spec.radial_nodes, spec.angular_nodes)
        val = float(np.dot(w, f(axial_points(r, t, axis, n))))
        r2, t2, w2 = reduced_polar_rule(ctx, max(8, 3 * spec.radial_nodes // 4),
                                        max(8, 3 * spec.angular_nodes // 4))
        coarse = float(np.dot(w2, f(axial_points(r2, t2, axis, n))))
        return val, abs(val - coarse)
    dirs, wd = sphere_rule(n, spec.angular_nodes)
    r, wr = gauss_legendre(spec.radial_nodes, 0.0, 1.0)
    pts = r[None, :, None] * dirs[:, None, :]
    w = wd[:, None] * (wr * r ** (n - 1))[None, :]
    val = float(np.sum(w * f(pts)))
    r2, wr2 = gauss_legendre(max(8, 3 * spec.radial_nodes // 4), 0.0, 1.0)
    pts2 = r2[None, :, None] * dirs[:, None, :]
    w2 = wd[:, None] * (wr2 * r2 ** (n - 1))[None, :]
    return val, abs(val - float(np.sum(w2 * f(pts2))))
