"""Radial discretisation of the absolute operator: matrix norms vs cell count (sigma convention)."""
import argparse
import math
from dataclasses import dataclass

from ballgreen.ballgeom import DimensionContext
from ballgreen.normcalc import RadialDiscretization, interpolation_bound


@dataclass
class StudyConfig:
    dims: tuple = (3, 4, 5)
    cells: tuple = (5, 10, 20, 40)
    sub: int = 20


def run(cfg: StudyConfig):
    for n in cfg.dims:
        ctx = DimensionContext(n)
        bound = interpolation_bound(2, 1.0, n / (n + 1))
        for c in cfg.cells:
            s = RadialDiscretization.build(ctx, c, cfg.sub).summary(1 / ctx.omega)
            print(f"n={n} cells={c:>3}: |M|_1 {s['norm_1']:.5f}  |M|_inf {s['norm_inf']:.5f} "
                  f"(target {n / (n + 1):.5f})  |M|_2 {s['spectral_l2']:.5f} <= {bound:.5f}  "
                  f"duality exact {s['exact_duality']}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cells", default="5,10,20,40")
    a = ap.parse_args()
    run(StudyConfig(cells=tuple(int(c) for c in a.cells.split(","))))
