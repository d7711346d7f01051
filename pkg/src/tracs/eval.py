"""Metrics, experiment runner and micro-benchmarks.

RNG streams are derived from ``(seed, purpose, trajectory index, ...)`` with
:func:`numpy.random.default_rng`, so results do not depend on the order in
which trajectories are processed.
"""
from __future__ import annotations

import csv
import json
import math
import statistics
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import mechanisms as mech
from .geometry import Location, RectSpace, circular_distance
from .mechanisms import ParameterError, PrivacyBudget
from .trajectory import (
    GridSpace,
    PointSpace,
    discretize,
    perturb_location_dd,
    strawman_trajectory,
    tracs_c,
    tracs_d,
    tracs_d_rsw,
)

METHODS = ("tracs_d", "tracs_c", "strawman", "tracs_d_rsw")

# purpose tags for derived RNG streams
_GEN, _PERTURB, _REF = 0, 1, 2


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""


def average_error(t: Sequence, t2: Sequence) -> float:
    """Mean Euclidean distance between corresponding locations."""
    if len(t) != len(t2):
        raise ValueError(f"trajectory lengths differ: {len(t)} != {len(t2)}")
    if len(t) == 0:
        raise ValueError("empty trajectories")
    return math.fsum(math.hypot(p[0] - q[0], p[1] - q[1]) for p, q in zip(t, t2)) / len(t)


def gen_random_trajectory(space: RectSpace, length: int, rng) -> list[Location]:
    """``length`` points drawn i.i.d. uniformly over ``space``."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    u = rng.random((length, 2))
    a = space.a_sta + u[:, 0] * space.width
    b = space.b_sta + u[:, 1] * space.height
    return [Location(float(x), float(y)) for x, y in zip(a, b)]


def short_side_trajectory(space: RectSpace, length: int) -> list[Location]:
    """Evenly spaced points on the shorter lower/left edge of ``space``."""
    if space.width <= space.height:
        return [Location(space.a_sta + space.width * i / length, space.b_sta) for i in range(length)]
    return [Location(space.a_sta, space.b_sta + space.height * i / length) for i in range(length)]


@dataclass
class ExperimentConfig:
    method: str
    space: RectSpace = field(default_factory=RectSpace)
    eps_grid: tuple[float, ...] = (2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0)
    # explicit direction budgets aligned with eps_grid; None -> eps*pi/(pi+1)
    eps_d: tuple[float, ...] | None = None
    k: int = 6
    n_trajectories: int = 100
    trajectory_length: int = 100
    repeats: int = 1
    seed: int = 0
    discretize: GridSpace | PointSpace | None = None
    # fixed private trajectories; replaces random generation when given
    trajectories: list | None = None
    # dummy reference for direction/distance methods: start | center | random
    ref0: str = "start"

    def validate(self) -> "ExperimentConfig":
        if self.method not in METHODS:
            raise ConfigError(f"method: unknown {self.method!r}, expected one of {METHODS}")
        if not self.eps_grid:
            raise ConfigError("eps_grid: must not be empty")
        if any(not (e > 0 and math.isfinite(e)) for e in self.eps_grid):
            raise ConfigError(f"eps_grid: values must be positive, got {self.eps_grid}")
        if self.eps_d is not None:
            if len(self.eps_d) != len(self.eps_grid):
                raise ConfigError("eps_d: length must match eps_grid")
            if any(not (0 < d < e) for d, e in zip(self.eps_d, self.eps_grid)):
                raise ConfigError("eps_d: each value must lie in (0, eps)")
        for name in ("n_trajectories", "trajectory_length", "repeats"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name}: must be >= 1")
        if self.method == "strawman" and self.k < 2:
            raise ConfigError("k: strawman needs k >= 2")
        if self.ref0 not in ("start", "center", "random"):
            raise ConfigError(f"ref0: expected start|center|random, got {self.ref0!r}")
        if self.trajectories is not None and len(self.trajectories) == 0:
            raise ConfigError("trajectories: must not be empty")
        return self

    @property
    def label(self) -> str:
        return f"strawman_k{self.k}" if self.method == "strawman" else self.method

    def budget(self, i: int) -> PrivacyBudget:
        eps = self.eps_grid[i]
        if self.eps_d is None:
            return PrivacyBudget.heuristic(eps)
        return PrivacyBudget(eps, self.eps_d[i])


@dataclass
class EvalRow:
    method: str
    eps: float
    mean_ae: float
    stderr: float
    per_loc_time_s: float
    n_samples: int


@dataclass
class EvalReport:
    rows: list[EvalRow] = field(default_factory=list)

    COLUMNS = ("method", "eps", "mean_ae", "stderr", "per_loc_time_s")

    def extend(self, other: "EvalReport") -> "EvalReport":
        self.rows.extend(other.rows)
        return self

    def row(self, method: str, eps: float) -> EvalRow:
        for r in self.rows:
            if r.method == method and r.eps == eps:
                return r
        raise KeyError((method, eps))

    def to_json(self, path) -> None:
        Path(path).write_text(json.dumps([asdict(r) for r in self.rows], indent=2) + "\n")

    def to_csv(self, path) -> None:
        write_table([asdict(r) for r in self.rows], path, columns=self.COLUMNS + ("n_samples",))


def write_table(rows: Iterable[dict], path, columns: Sequence[str] | None = None) -> None:
    rows = list(rows)
    if columns is None:
        columns = list(rows[0]) if rows else []
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def _reference(cfg: ExperimentConfig, rng) -> Location:
    s = cfg.space
    if cfg.ref0 == "center":
        return s.center
    if cfg.ref0 == "random":
        return Location(s.a_sta + rng.random() * s.width, s.b_sta + rng.random() * s.height)
    return Location(s.a_sta, s.b_sta)


def _perturb(cfg: ExperimentConfig, traj, i_eps: int, rng, ref0):
    budget = cfg.budget(i_eps)
    if cfg.method == "tracs_d":
        return tracs_d(cfg.space, traj, budget, rng, ref0)
    if cfg.method == "tracs_d_rsw":
        return tracs_d_rsw(cfg.space, traj, budget, rng, ref0)
    if cfg.method == "strawman":
        return strawman_trajectory(cfg.space, traj, budget, cfg.k, rng, ref0)
    return tracs_c(cfg.space, traj, budget.eps, rng)


def experiment_trajectories(cfg: ExperimentConfig) -> list[list[Location]]:
    if cfg.trajectories is not None:
        return [[cfg.space.check(p) for p in t] for t in cfg.trajectories]
    return [
        gen_random_trajectory(cfg.space, cfg.trajectory_length, np.random.default_rng([cfg.seed, _GEN, i]))
        for i in range(cfg.n_trajectories)
    ]


def run_experiment(cfg: ExperimentConfig) -> EvalReport:
    """Mean AE (and its standard error) per eps over all trajectories x repeats.

    The same private trajectories are reused for every eps and every method
    with the same seed.
    """
    cfg.validate()
    trajs = experiment_trajectories(cfg)
    report = EvalReport()
    for ie, eps in enumerate(cfg.eps_grid):
        errors = []
        elapsed = 0.0
        n_loc = 0
        for it, traj in enumerate(trajs):
            for rep in range(cfg.repeats):
                rng = np.random.default_rng([cfg.seed, _PERTURB, it, ie, rep])
                ref0 = _reference(cfg, np.random.default_rng([cfg.seed, _REF, it, ie, rep]))
                t0 = time.perf_counter()
                out = _perturb(cfg, traj, ie, rng, ref0)
                if cfg.discretize is not None:
                    out = discretize(out, cfg.discretize)
                elapsed += time.perf_counter() - t0
                n_loc += len(traj)
                errors.append(average_error(traj, out))
        errs = np.asarray(errors)
        se = float(errs.std(ddof=1) / math.sqrt(len(errs))) if len(errs) > 1 else 0.0
        report.rows.append(EvalRow(cfg.label, float(eps), float(errs.mean()), se, elapsed / n_loc, len(errs)))
    return report


# -- mechanism-level statistics --------------------------------------------


def mse_with_stderr(mechanism: str, x: float, eps: float, n: int, rng) -> tuple[float, float]:
    """Empirical MSE of a piecewise mechanism at input ``x`` and its standard error.

    Circular mechanisms use arc distance.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    try:
        pdf = mech.PDF_FACTORIES[mechanism](x, eps)
    except KeyError:
        raise ParameterError(f"unknown mechanism {mechanism!r}") from None
    y = pdf.sample(rng, n)
    if pdf.circular:
        d = np.abs(y - x) % (2 * math.pi)
        d = np.minimum(d, 2 * math.pi - d)
    else:
        d = y - x
    sq = d * d
    se = float(sq.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return float(sq.mean()), se


def empirical_mse(mechanism: str, x: float, eps: float, n: int, rng) -> float:
    return mse_with_stderr(mechanism, x, eps, n, rng)[0]


def direction_error_curve(
    method: str, eps_grid: Sequence[float], n: int, rng, k: int = 6
) -> list[dict]:
    """Mean arc distance between uniform private directions and their perturbations.

    ``method`` is ``tracs_d`` (the direction mechanism at budget ``eps``),
    ``tracs_d_rsw`` or ``strawman`` (k sectors).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if method == "tracs_d":
        sampler = mech.sample_mcirc
    elif method == "tracs_d_rsw":
        sampler = mech.sample_sw_direction
    elif method == "strawman":
        def sampler(phi, eps, rng):
            return mech.strawman_direction(phi, k, eps, rng)
    else:
        raise ParameterError(f"unknown direction method {method!r}")
    label = f"strawman_k{k}" if method == "strawman" else method
    rows = []
    for eps in eps_grid:
        phis = rng.random(n) * (2 * math.pi)
        errs = np.fromiter((circular_distance(p, sampler(p, eps, rng)) for p in phis), float, n)
        rows.append({
            "method": label,
            "eps": float(eps),
            "mean_error": float(errs.mean()),
            "stderr": float(errs.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0,
        })
    return rows


# -- timing ----------------------------------------------------------------


def _interleaved_medians(calls: Sequence, reps: Sequence[int], rounds: int = 10, warmup: int = 50) -> list[float]:
    """Median ns per call for each function, timed in round-robin blocks.

    Interleaving spreads clock-speed drift evenly over all cells instead of
    letting it masquerade as a dependence on the cell parameters.
    """
    for fn, n in zip(calls, reps):
        for _ in range(min(warmup, n)):
            fn()
    clock = time.perf_counter_ns
    samples: list[list[int]] = [[] for _ in calls]
    for r in range(rounds):
        for fn, n, out in zip(calls, reps, samples):
            # block sizes sum to n over all rounds
            for _ in range(n * (r + 1) // rounds - n * r // rounds):
                t0 = clock()
                fn()
                out.append(clock() - t0)
    return [statistics.median(s) for s in samples]


def bench_perturbation(
    methods: Sequence[str],
    m_grid: Sequence[int],
    reps: int = 10_000,
    seed: int = 0,
    eps: float = 5.0,
    baseline_reps: int | None = None,
) -> list[dict]:
    """Median per-location perturbation time over discrete spaces of size ``m``.

    ``tracs_d`` / ``tracs_c`` perturb one location and round it onto a
    ``sqrt(m) x sqrt(m)`` unit-square grid.  ``exponential`` samples one of the
    ``m`` grid centres with the Exponential mechanism.  ``baseline_reps``
    overrides ``reps`` for the exponential rows, whose calls are Θ(m).
    """
    space = RectSpace()
    budget = PrivacyBudget.heuristic(eps)
    cells, calls, counts = [], [], []
    for m in m_grid:
        side = max(1, round(math.sqrt(m)))
        grid = GridSpace(space, side, side)
        rng = np.random.default_rng([seed, m])
        target = Location(*rng.random(2))
        ref = Location(*rng.random(2))
        for method in methods:
            if method == "tracs_c":
                def call(grid=grid, target=target, rng=rng):
                    return grid.round(tracs_c(space, (target,), eps, rng)[0])
                n = reps
            elif method == "tracs_d":
                def call(grid=grid, target=target, ref=ref, rng=rng):
                    return grid.round(perturb_location_dd(space, ref, target, budget, rng))
                n = reps
            elif method == "exponential":
                cands = [tuple(p) for p in grid.points().tolist()]
                def call(cands=cands, target=target, rng=rng):
                    return mech.exponential_mechanism(target, cands, eps, rng)
                n = baseline_reps or reps
            else:
                raise ParameterError(f"unknown bench method {method!r}")
            cells.append((method, side * side))
            calls.append(call)
            counts.append(n)
    medians = _interleaved_medians(calls, counts)
    rows = [
        {"method": method, "m": m, "reps": n, "median_s": med * 1e-9}
        for (method, m), n, med in zip(cells, counts, medians)
    ]
    return rows
