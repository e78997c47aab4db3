"""Evidence tables for the L^p -> L^inf candidates: Phi_A, Phi_B over radii for several (n, p)."""
import argparse
import json
from dataclasses import dataclass, field
from pathlib import Path

from ballgreen.ballgeom import DimensionContext, QuadratureSpec
from ballgreen.conjecture import ConjectureParams, conjecture_scan


@dataclass
class ConjectureConfig:
    cases: tuple = ((3, 4), (3, 6), (4, 5), (4, 8), (5, 6), (5, 10))
    grid: tuple = tuple(k / 10 for k in range(10)) + (0.95,)
    eta_samples: int = 6
    out: Path = Path("results/conjecture_scan.json")
    # Phi_B uses the full-sphere rule (cost ~ nodes^(n-1)) and converges only
    # algebraically across the sign change of <N, eta>; trade nodes for dimension
    angular_by_dim: dict = field(default_factory=lambda: {3: 64, 4: 24, 5: 12})

    def spec(self, n):
        return QuadratureSpec("reduced-polar", 24, self.angular_by_dim.get(n, 8), 20_000, 0, 0.1)


def run(cfg: ConjectureConfig):
    reports = []
    for n, p in cfg.cases:
        rep = conjecture_scan(ConjectureParams(n, p), cfg.grid, cfg.spec(n), DimensionContext(n), cfg.eta_samples)
        c = rep.closed
        print(f"n={n} p={p:g}: argmax A at {rep.argmax_A:g}, B at {rep.argmax_B:g}; "
              f"B displayed {c['B_closed_as_displayed']:.6f} vs integral {c['B_integral_x0']:.6f}")
        reports.append(rep.to_dict())
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    cfg.out.write_text(json.dumps(reports, indent=2))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/conjecture_scan.json"))
    ap.add_argument("--eta-samples", type=int, default=6)
    a = ap.parse_args()
    run(ConjectureConfig(out=a.out, eta_samples=a.eta_samples))
