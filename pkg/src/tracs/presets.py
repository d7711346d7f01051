"""Named experiment presets that regenerate the evaluation figures as tables."""
from __future__ import annotations

from dataclasses import replace

import numpy as np

from .eval import (
    EvalReport,
    ExperimentConfig,
    bench_perturbation,
    direction_error_curve,
    run_experiment,
    short_side_trajectory,
)
from .geometry import RectSpace
from .trajectory import GridSpace

UNIT = RectSpace()
TALL = RectSpace(0.0, 2.0, 0.0, 10.0)
EPS_GRID = (2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0)

PRESETS = ("fig5a", "fig5b", "fig6", "fig7", "fig10", "discrete10", "discrete50", "bench")


def preset_configs(name: str, seed: int = 0) -> list[ExperimentConfig]:
    """Trajectory-level configurations for ``name`` (empty for fig10/bench)."""
    if name in ("fig5a", "fig5b"):
        space = UNIT if name == "fig5a" else TALL
        return [ExperimentConfig(m, space=space, eps_grid=EPS_GRID, seed=seed) for m in ("tracs_d", "tracs_c", "strawman")]
    if name == "fig6":
        traj = short_side_trajectory(TALL, 100)
        return [
            ExperimentConfig(m, space=TALL, eps_grid=(2.0, 4.0, 6.0, 8.0), trajectories=[traj], repeats=1000, seed=seed)
            for m in ("tracs_d", "tracs_c")
        ]
    if name == "fig7":
        return [ExperimentConfig(m, space=UNIT, eps_grid=EPS_GRID, seed=seed) for m in ("tracs_d", "tracs_d_rsw")]
    if name in ("discrete10", "discrete50"):
        side = 10 if name == "discrete10" else 50
        grid = GridSpace(UNIT, side, side)
        return [
            ExperimentConfig(m, space=UNIT, eps_grid=EPS_GRID, seed=seed, discretize=grid)
            for m in ("tracs_d", "tracs_c")
        ]
    if name in ("fig10", "bench"):
        return []
    raise KeyError(name)


def run_preset(name: str, seed: int = 0, scale: float = 1.0) -> dict[str, list[dict]]:
    """Run a preset; returns ``{table name: rows}``.

    ``scale`` shrinks trajectory counts, repeats and sample sizes (for smoke
    runs); 1.0 is the full size.
    """
    def n(x: int) -> int:
        return max(1, int(round(x * scale)))

    if name == "fig10":
        rng = np.random.default_rng([seed, 10])
        rows = direction_error_curve("tracs_d", (1.0,) + EPS_GRID, n(100_000), rng)
        for k in (3, 6, 12):
            rows += direction_error_curve("strawman", (1.0,) + EPS_GRID, n(100_000), rng, k=k)
        return {"fig10_direction_error": rows}
    if name == "bench":
        rows = bench_perturbation(
            ("tracs_d", "tracs_c", "exponential"),
            (100, 10_000, 250_000),
            reps=n(10_000),
            seed=seed,
            baseline_reps=n(200),
        )
        return {"bench_timing": rows}
    report = EvalReport()
    for cfg in preset_configs(name, seed):
        if cfg.trajectories is None:
            cfg = replace(cfg, n_trajectories=n(cfg.n_trajectories))
        cfg = replace(cfg, repeats=n(cfg.repeats))
        report.extend(run_experiment(cfg))
    return {name: [r.__dict__ for r in report.rows]}
