"""Pointwise kernels on B^n: Green function, its gradient, the absolute
gradient kernel, its swapped counterpart H, and the Poisson kernel.

All functions broadcast over leading axes of ``x`` and ``y``.
"""
from __future__ import annotations

import numpy as np

from .ballgeom import DimensionContext, bracket

SINGULAR_RADIUS = 1e-12


class SingularityError(ValueError):
    pass


def _prep(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = np.linalg.norm(x - y, axis=-1)
    if np.any(d < SINGULAR_RADIUS):
        raise SingularityError("kernel evaluated on the diagonal x = y")
    return x, y, d


def green(x, y, ctx: DimensionContext):
    """G(x,y) = c_n (|x-y|^(2-n) - [x,y]^(2-n))."""
    x, y, d = _prep(x, y)
    n = ctx.n
    return ctx.c_n * (d ** (2 - n) - bracket(x, y) ** (2 - n))


def n_kernel(x, y, ctx: DimensionContext):
    """Vector kernel (x-y)/|x-y|^n - (|y|^2 x - y)/[x,y]^n."""
    x, y, d = _prep(x, y)
    n = ctx.n
    yy = np.sum(y * y, axis=-1)[..., None]
    return (x - y) / (d ** n)[..., None] - (yy * x - y) / (bracket(x, y) ** n)[..., None]


def green_gradient(x, y, ctx: DimensionContext):
    """Gradient of G in x: c_n (2-n) times the vector kernel."""
    return ctx.c_n * (2 - ctx.n) * n_kernel(x, y, ctx)


def n_kernel_mag(x, y, ctx: DimensionContext):
    return np.linalg.norm(n_kernel(x, y, ctx), axis=-1)


def h_kernel(x, y, ctx: DimensionContext):
    """H(x,y) = (y-x)/|y-x|^n - (|x|^2 y - x)/[y,x]^n, the vector kernel with roles swapped."""
    return n_kernel(y, x, ctx)


def h_kernel_mag(x, y, ctx: DimensionContext):
    return np.linalg.norm(h_kernel(x, y, ctx), axis=-1)


def h_split_bound(x, y, ctx: DimensionContext):
    """Upper bound |x-y|(|x-y|^-n - [x,y]^-n) + |y|(1-|x|^2)/[x,y]^n for |H(x,y)|."""
    x, y, d = _prep(x, y)
    n = ctx.n
    b = bracket(x, y)
    return d * (d ** -n - b ** -n) + np.linalg.norm(y, axis=-1) * (1 - np.sum(x * x, axis=-1)) / b ** n


def ide_form(x, z, ctx: DimensionContext):
    """|vector kernel|(x, T_{-x} z) written in the pulled-back variable z:

    [z,-x]^(n-2) (1-|x|^2)^(1-n) |z|^(1-n) | |z|^(n-1)(z+x) - (x|z| + z/|z|) |
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    n = ctx.n
    rz = np.linalg.norm(z, axis=-1)[..., None]
    v = rz ** (n - 1) * (z + x) - (x * rz + z / rz)
    return (bracket(z, -x) ** (n - 2) * (1 - np.sum(x * x, axis=-1)) ** (1 - n)
            * rz[..., 0] ** (1 - n) * np.linalg.norm(v, axis=-1))


def poisson_kernel(x, eta, ctx: DimensionContext):
    """P(x, eta) = (1-|x|^2)/|x-eta|^n, normalised against d sigma."""
    x = np.asarray(x, dtype=float)
    eta = np.asarray(eta, dtype=float)
    return (1 - np.sum(x * x, axis=-1)) / np.linalg.norm(x - eta, axis=-1) ** ctx.n
