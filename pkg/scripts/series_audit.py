"""Coefficient audit beyond the default range: signs of a_m, e_m and the b_m <= c(m) chain."""
import argparse
from dataclasses import dataclass

from ballgreen.normcalc import SeriesCoefficients


@dataclass
class AuditConfig:
    n_max: int = 20
    m_max: int = 2000


def run(cfg: AuditConfig):
    for n in range(3, cfg.n_max + 1):
        sc = SeriesCoefficients.build(n, cfg.m_max)
        worst_b = max(b - c for b, c in zip(sc.b, sc.c))
        mono = all(c2 >= c1 for c1, c2 in zip(sc.c, sc.c[1:]))
        print(f"n={n:>2}  max a_m {max(sc.a):+.3e}  min e_m {min(sc.e):.3e}  "
              f"max(b-c) {worst_b:+.2e}  c nondecreasing {mono}  c_limit {sc.c_limit:.12f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=20)
    ap.add_argument("--m-max", type=int, default=2000)
    a = ap.parse_args()
    run(AuditConfig(a.n_max, a.m_max))
