"""Operand fields on the ball: a small registry of analytic fields plus
tabulated samples with inverse-distance interpolation."""
from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.spatial import cKDTree

IDW_NEIGHBOURS = 8


@dataclass(frozen=True)
class ScalarField:
    """A function on the ball (or on the sphere, for boundary data).

    ``radial`` fields are symmetric about every axis; otherwise ``axis_index``
    names the coordinate axis of rotational symmetry, if any.
    """
    label: str
    fn: Callable[[np.ndarray], np.ndarray]
    kind: str = "named"
    radial: bool = False
    axis_index: int | None = None
    disclaimer: str | None = None
    affine: tuple | None = None  # (c, i) for the field c + y_i

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        return np.broadcast_to(self.fn(y), y.shape[:-1]).astype(float)

    def axis_in(self, n: int):
        if self.radial:
            e = np.zeros(n)
            e[0] = 1.0
            return e
        if self.axis_index is None:
            return None
        e = np.zeros(n)
        e[self.axis_index] = 1.0
        return e

    def __abs__(self):
        return ScalarField(f"|{self.label}|", lambda y: np.abs(self.fn(y)), self.kind,
                           self.radial, self.axis_index, self.disclaimer)


def _axis_key(f: ScalarField):
    if f.radial:
        return "radial"
    return f.axis_index


def lincomb(alpha: float, f: ScalarField, beta: float, h: ScalarField) -> ScalarField:
    keys = {_axis_key(f), _axis_key(h)} - {"radial"}
    radial = not keys
    axis = keys.pop() if len(keys) == 1 else None
    return ScalarField(f"{alpha:g}*{f.label}+{beta:g}*{h.label}",
                       lambda y: alpha * f(y) + beta * h(y), "named", radial, axis)


def constant(c: float = 1.0) -> ScalarField:
    return ScalarField(f"const({c:g})", lambda y: np.full(y.shape[:-1], float(c)), radial=True)


def radial_power(alpha: float) -> ScalarField:
    def fn(y):
        r = np.linalg.norm(y, axis=-1)
        with np.errstate(divide="ignore"):
            return r ** alpha
    return ScalarField(f"rpow({alpha:g})", fn, radial=True)


def coordinate(i: int, offset: float = 0.0) -> ScalarField:
    label = f"coord({i})" if offset == 0 else f"{offset:g}+coord({i})"
    return ScalarField(label, lambda y: offset + y[..., i], axis_index=i,
                       affine=(float(offset), int(i)))


def indicator(radius: float) -> ScalarField:
    return ScalarField(f"indicator({radius:g})",
                       lambda y: (np.linalg.norm(y, axis=-1) < radius).astype(float), radial=True)


_NAMED = {
    "const": lambda a: constant(float(a[0]) if a else 1.0),
    "rpow": lambda a: radial_power(float(a[0])),
    "coord": lambda a: coordinate(int(a[0]), float(a[1]) if len(a) > 1 else 0.0),
    "indicator": lambda a: indicator(float(a[0])),
}


def named_field(spec: str) -> ScalarField:
    """Parse registry names such as ``const(1)``, ``rpow(2)``, ``coord(0)``,
    ``coord(0,1)`` (i.e. 1 + y_1) or ``indicator(0.5)``."""
    m = re.fullmatch(r"\s*(\w+)\s*(?:\(([^)]*)\))?\s*", spec)
    if not m or m.group(1) not in _NAMED:
        raise KeyError(f"unknown field {spec!r}; known: {sorted(_NAMED)}")
    args = [a for a in (m.group(2) or "").split(",") if a.strip()]
    return _NAMED[m.group(1)](args)


def tabulated_field(points, values, k: int = IDW_NEIGHBOURS) -> ScalarField:
    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=float)
    if np.any(np.linalg.norm(points, axis=1) >= 1.0):
        raise ValueError("tabulated points must lie in the open unit ball")
    tree = cKDTree(points)
    k = min(k, len(points))

    def fn(y):
        flat = y.reshape(-1, y.shape[-1])
        d, idx = tree.query(flat, k=k)
        d = d.reshape(len(flat), k)
        idx = idx.reshape(len(flat), k)
        exact = d[:, 0] < 1e-14
        w = 1.0 / np.maximum(d * d, 1e-300)
        out = np.sum(w * values[idx], axis=1) / np.sum(w, axis=1)
        out[exact] = values[idx[exact, 0]]
        return out.reshape(y.shape[:-1])

    return ScalarField(f"tabulated[{len(points)}]", fn, kind="tabulated",
                       disclaimer=f"inverse-distance interpolation over {k} neighbours; approximate")


def read_tabulated_csv(path) -> ScalarField:
    """Rows x_1,...,x_n,value after a mandatory header line."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError("empty CSV")
    body = [list(map(float, r)) for r in rows[1:] if r]
    arr = np.asarray(body)
    return tabulated_field(arr[:, :-1], arr[:, -1])
