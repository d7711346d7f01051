"""Command-line front end.

Exit codes: 0 success, 2 usage/config error, 3 data error, 4 I/O error.
The seed falls back to ``$TRACS_SEED`` and then 0.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .eval import (
    METHODS,
    ConfigError,
    EvalReport,
    ExperimentConfig,
    gen_random_trajectory,
    run_experiment,
    write_table,
)
from .geometry import DomainError, GeometryError, Location, RectSpace
from .io import DataError, read_points, read_trajectories, write_trajectories
from .mechanisms import ParameterError, PrivacyBudget
from .presets import PRESETS, run_preset
from .trajectory import GridSpace, PointSpace, discretize, strawman_trajectory, tracs_c, tracs_d, tracs_d_rsw

EXIT_USAGE, EXIT_DATA, EXIT_IO = 2, 3, 4


class UsageError(Exception):
    pass


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("TRACS_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"TRACS_SEED must be an integer, got {env!r}") from None


def _space(args) -> RectSpace:
    return RectSpace(args.a_sta, args.a_end, args.b_sta, args.b_end)


def _add_space(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("location space")
    g.add_argument("--a-sta", type=float, default=0.0)
    g.add_argument("--a-end", type=float, default=1.0)
    g.add_argument("--b-sta", type=float, default=0.0)
    g.add_argument("--b-end", type=float, default=1.0)


def _add_discrete(p: argparse.ArgumentParser, required: bool = False) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--grid", nargs=2, type=int, metavar=("ROWS", "COLS"), help="round to grid cell centres")
    g.add_argument("--points", type=Path, help="round to the nearest point in this file")


def _discrete(args, space: RectSpace):
    if args.grid is not None:
        return GridSpace(space, *args.grid)
    if args.points is not None:
        return PointSpace(read_points(args.points))
    return None


def cmd_gen(args) -> None:
    if args.n < 1 or args.length < 1:
        raise UsageError("--n and --length must be >= 1")
    space = _space(args)
    seed = _seed(args)
    trajs = [gen_random_trajectory(space, args.length, np.random.default_rng([seed, i])) for i in range(args.n)]
    write_trajectories(args.out, trajs)


def _perturb_one(args, space, traj, seed: int, idx: int):
    rng = np.random.default_rng([seed, idx])
    if args.method == "tracs_c":
        return tracs_c(space, traj, args.eps, rng)
    budget = PrivacyBudget(args.eps, args.eps_d) if args.eps_d is not None else PrivacyBudget.heuristic(args.eps)
    if args.ref == "center":
        ref0 = space.center
    elif args.ref == "random":
        r = np.random.default_rng([seed, idx, 1])
        ref0 = Location(space.a_sta + r.random() * space.width, space.b_sta + r.random() * space.height)
    else:
        ref0 = None
    if args.method == "tracs_d":
        return tracs_d(space, traj, budget, rng, ref0)
    if args.method == "tracs_d_rsw":
        return tracs_d_rsw(space, traj, budget, rng, ref0)
    return strawman_trajectory(space, traj, budget, args.k, rng, ref0)


def cmd_perturb(args) -> None:
    space = _space(args)
    seed = _seed(args)
    target = _discrete(args, space)
    trajs = read_trajectories(args.inp)
    out = []
    for i, t in enumerate(trajs):
        pert = _perturb_one(args, space, t, seed, i)
        out.append(discretize(pert, target) if target is not None else pert)
    write_trajectories(args.out, out)


def cmd_round(args) -> None:
    space = _space(args)
    target = _discrete(args, space)
    trajs = read_trajectories(args.inp)
    if isinstance(target, GridSpace):
        for t in trajs:
            for p in t:
                space.check(p)
    write_trajectories(args.out, [discretize(t, target) for t in trajs])


# -- evaluate --------------------------------------------------------------

_CONFIG_FIELDS = {
    "methods", "method", "space", "eps_grid", "eps_d", "k", "n_trajectories",
    "trajectory_length", "repeats", "seed", "ref0", "grid", "points", "trajectories",
}


def load_config(path, seed: int | None = None) -> list[ExperimentConfig]:
    """Parse a JSON experiment config into one ExperimentConfig per method."""
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON ({e.msg})") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    unknown = set(raw) - _CONFIG_FIELDS
    if unknown:
        raise ConfigError(f"unknown field(s): {', '.join(sorted(unknown))}")
    methods = raw.get("methods", [raw["method"]] if "method" in raw else None)
    if not methods or not isinstance(methods, list):
        raise ConfigError("methods: need a non-empty list (or 'method')")
    try:
        space = RectSpace(**raw.get("space", {}))
    except (TypeError, GeometryError) as e:
        raise ConfigError(f"space: {e}") from None
    kw = {}
    for name in ("n_trajectories", "trajectory_length", "repeats", "k", "seed"):
        if name in raw:
            if not isinstance(raw[name], int):
                raise ConfigError(f"{name}: must be an integer")
            kw[name] = raw[name]
    for name in ("eps_grid", "eps_d"):
        if name in raw:
            v = raw[name]
            if not isinstance(v, list) or not all(isinstance(x, (int, float)) for x in v):
                raise ConfigError(f"{name}: must be a list of numbers")
            kw[name] = tuple(float(x) for x in v)
    if "ref0" in raw:
        kw["ref0"] = raw["ref0"]
    if seed is not None:
        kw["seed"] = seed
    if "grid" in raw:
        g = raw["grid"]
        if not (isinstance(g, list) and len(g) == 2 and all(isinstance(x, int) for x in g)):
            raise ConfigError("grid: must be [rows, cols]")
        try:
            kw["discretize"] = GridSpace(space, *g)
        except ParameterError as e:
            raise ConfigError(f"grid: {e}") from None
    elif "points" in raw:
        kw["discretize"] = PointSpace(read_points(Path(path).parent / raw["points"]))
    if "trajectories" in raw:
        kw["trajectories"] = read_trajectories(Path(path).parent / raw["trajectories"])
    cfgs = []
    for m in methods:
        cfgs.append(ExperimentConfig(m, space=space, **kw).validate())
    return cfgs


def cmd_evaluate(args) -> None:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    seed = _seed(args)
    if args.preset:
        tables = run_preset(args.preset, seed=seed, scale=args.scale)
        for name, rows in tables.items():
            write_table(rows, out_dir / f"{name}.csv")
            (out_dir / f"{name}.json").write_text(json.dumps(rows, indent=2) + "\n")
        return
    if args.config:
        cfgs = load_config(args.config, seed=args.seed)
    else:
        if not args.method:
            raise UsageError("evaluate needs --preset, --config or --method")
        space = _space(args)
        cfgs = [
            ExperimentConfig(
                m, space=space, eps_grid=tuple(args.eps or (2, 3, 4, 5, 6, 7, 8)), k=args.k,
                n_trajectories=args.n, trajectory_length=args.length, repeats=args.repeats,
                seed=seed, discretize=_discrete(args, space),
            ).validate()
            for m in args.method
        ]
    report = EvalReport()
    for cfg in cfgs:
        report.extend(run_experiment(cfg))
    report.to_csv(out_dir / "report.csv")
    report.to_json(out_dir / "report.json")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tracs", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write random trajectories")
    g.add_argument("--n", type=int, required=True, help="number of trajectories")
    g.add_argument("--length", type=int, required=True, help="points per trajectory")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", type=Path, required=True)
    _add_space(g)
    g.set_defaults(func=cmd_gen)

    q = sub.add_parser("perturb", help="perturb trajectories from a file")
    q.add_argument("--in", dest="inp", type=Path, required=True)
    q.add_argument("--out", type=Path, required=True)
    q.add_argument("--method", choices=METHODS, required=True)
    q.add_argument("--eps", type=float, required=True, help="per-location budget")
    q.add_argument("--eps-d", "--eps_d", dest="eps_d", type=float, help="direction share (default eps*pi/(pi+1))")
    q.add_argument("--k", type=int, default=6, help="sectors for the strawman method")
    q.add_argument("--ref", choices=("start", "center", "random"), default="start", help="dummy reference")
    q.add_argument("--seed", type=int)
    _add_space(q)
    _add_discrete(q)
    q.set_defaults(func=cmd_perturb)

    e = sub.add_parser("evaluate", help="run experiments and write reports")
    src = e.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=PRESETS)
    src.add_argument("--config", type=Path, help="JSON experiment config")
    e.add_argument("--method", action="append", choices=METHODS)
    e.add_argument("--eps", type=float, nargs="+")
    e.add_argument("--k", type=int, default=6)
    e.add_argument("--n", type=int, default=100, help="number of random trajectories")
    e.add_argument("--length", type=int, default=100)
    e.add_argument("--repeats", type=int, default=1)
    e.add_argument("--scale", type=float, default=1.0, help="shrink preset sizes (smoke runs)")
    e.add_argument("--seed", type=int)
    e.add_argument("--out-dir", type=Path, required=True)
    _add_space(e)
    _add_discrete(e)
    e.set_defaults(func=cmd_evaluate)

    r = sub.add_parser("round", help="round trajectories onto a grid or point set")
    r.add_argument("--in", dest="inp", type=Path, required=True)
    r.add_argument("--out", type=Path, required=True)
    _add_space(r)
    _add_discrete(r, required=True)
    r.set_defaults(func=cmd_round)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (UsageError, ConfigError, ParameterError) as e:
        print(f"tracs: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, DomainError) as e:
        print(f"tracs: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except GeometryError as e:
        print(f"tracs: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"tracs: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
