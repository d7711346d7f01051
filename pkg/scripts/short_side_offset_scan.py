"""How the direction/distance vs Cartesian error ratio on the tall space
depends on where the horizontal trajectory sits.

The trajectory runs across the 2-wide side of [0,2) x [0,10) at height b0.
Prints the per-eps AE ratio and its mean for each offset and reference choice.
"""
import argparse

import numpy as np

from tracs.eval import ExperimentConfig, run_experiment
from tracs.geometry import Location
from tracs.presets import TALL

EPS = (2.0, 4.0, 6.0, 8.0)


def ratio(b0: float, ref0: str, repeats: int, seed: int) -> list[float]:
    traj = [Location(TALL.width * i / 100, b0) for i in range(100)]
    ae = {}
    for method in ("tracs_d", "tracs_c"):
        cfg = ExperimentConfig(method, space=TALL, eps_grid=EPS, trajectories=[traj], repeats=repeats, seed=seed, ref0=ref0)
        ae[method] = [r.mean_ae for r in run_experiment(cfg.validate()).rows]
    return [d / c for d, c in zip(ae["tracs_d"], ae["tracs_c"])]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--offsets", type=float, nargs="+", default=[0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0])
    ap.add_argument("--repeats", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("b0     ref0    ratio per eps (2,4,6,8)        mean")
    for ref0 in ("start", "center"):
        for b0 in args.offsets:
            r = ratio(b0, ref0, args.repeats, args.seed)
            print(f"{b0:<6g} {ref0:<7} {' '.join(f'{x:.3f}' for x in r):<30} {np.mean(r):.3f}")


if __name__ == "__main__":
    main()
