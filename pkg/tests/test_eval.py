import csv
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tracs import mechanisms as mech
from tracs.eval import (
    ConfigError,
    EvalReport,
    ExperimentConfig,
    average_error,
    bench_perturbation,
    direction_error_curve,
    empirical_mse,
    gen_random_trajectory,
    mse_with_stderr,
    run_experiment,
    short_side_trajectory,
)
from tracs.geometry import RectSpace
from tracs.presets import PRESETS, preset_configs, run_preset
from tracs.trajectory import GridSpace

UNIT = RectSpace()
TALL = RectSpace(0.0, 2.0, 0.0, 10.0)


class TestAverageError:
    def test_examples(self):
        assert average_error([(0, 0), (1, 1)], [(0, 0), (1, 1)]) == 0.0
        assert average_error([(0, 0), (1, 1)], [(1, 0), (1, 0)]) == 1.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            average_error([(0, 0)], [(0, 0), (1, 1)])

    pts = st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=4, max_size=4)

    @given(pts, pts, st.floats(-5, 5), st.floats(-5, 5))
    def test_symmetric_and_translation_invariant(self, t, u, da, db):
        ae = average_error(t, u)
        assert ae >= 0 and ae == average_error(u, t)
        moved = average_error([(a + da, b + db) for a, b in t], [(a + da, b + db) for a, b in u])
        assert math.isclose(ae, moved, rel_tol=1e-9, abs_tol=1e-9)


class TestRandomTrajectory:
    def test_length_and_determinism(self):
        t = gen_random_trajectory(TALL, 17, np.random.default_rng(0))
        assert len(t) == 17 and all(TALL.contains(p) for p in t)
        assert t == gen_random_trajectory(TALL, 17, np.random.default_rng(0))

    def test_mean_is_center(self):
        n = 100_000
        pts = np.array(gen_random_trajectory(TALL, n, np.random.default_rng(1)))
        sd = np.array([TALL.width, TALL.height]) / math.sqrt(12)
        assert np.all(np.abs(pts.mean(axis=0) - TALL.center) < 3 * sd / math.sqrt(n))

    def test_short_side(self):
        t = short_side_trajectory(TALL, 4)
        assert t == [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (1.5, 0.0)]


class TestConfig:
    @pytest.mark.parametrize(
        "kw,field",
        [
            ({"method": "nope"}, "method"),
            ({"eps_grid": ()}, "eps_grid"),
            ({"eps_grid": (1.0, -2.0)}, "eps_grid"),
            ({"eps_grid": (2.0,), "eps_d": (2.5,)}, "eps_d"),
            ({"eps_grid": (2.0, 3.0), "eps_d": (1.0,)}, "eps_d"),
            ({"n_trajectories": 0}, "n_trajectories"),
            ({"trajectory_length": 0}, "trajectory_length"),
            ({"repeats": 0}, "repeats"),
            ({"method": "strawman", "k": 1}, "k"),
            ({"ref0": "corner"}, "ref0"),
        ],
    )
    def test_errors_name_field(self, kw, field):
        kw = {"method": "tracs_d", **kw}
        with pytest.raises(ConfigError, match=f"^{field}"):
            ExperimentConfig(**kw).validate()

    def test_label_and_budget(self):
        cfg = ExperimentConfig("strawman", k=12, eps_grid=(2.0, 4.0), eps_d=(1.0, 3.0))
        assert cfg.label == "strawman_k12"
        assert cfg.budget(1).eps_d == 3.0
        assert math.isclose(ExperimentConfig("tracs_d").budget(0).eps_d, 2 * math.pi / (math.pi + 1))


class TestRunExperiment:
    def small(self, method, **kw):
        return ExperimentConfig(method, n_trajectories=20, trajectory_length=20, **kw)

    def test_reproducible(self):
        a = run_experiment(self.small("tracs_d", seed=3))
        b = run_experiment(self.small("tracs_d", seed=3))
        assert [(r.eps, r.mean_ae, r.stderr) for r in a.rows] == [(r.eps, r.mean_ae, r.stderr) for r in b.rows]
        c = run_experiment(self.small("tracs_d", seed=4))
        assert a.rows[0].mean_ae != c.rows[0].mean_ae

    def test_sample_counts(self):
        rep = run_experiment(self.small("tracs_c", repeats=3, eps_grid=(2.0, 5.0)))
        assert [r.n_samples for r in rep.rows] == [60, 60]
        assert all(r.mean_ae >= 0 and r.stderr >= 0 and r.per_loc_time_s > 0 for r in rep.rows)

    def test_fixed_trajectories_and_reference(self):
        traj = short_side_trajectory(TALL, 10)
        for ref0 in ("start", "center", "random"):
            rep = run_experiment(ExperimentConfig("tracs_d", space=TALL, trajectories=[traj], repeats=5, ref0=ref0))
            assert all(r.n_samples == 5 for r in rep.rows)

    def test_discretized_outputs(self):
        grid = GridSpace(UNIT, 2, 2)
        rep = run_experiment(self.small("tracs_c", discretize=grid, eps_grid=(30.0,)))
        # at high eps each point lands in its own cell, so AE is the distance to that cell centre
        assert rep.rows[0].mean_ae < 0.5

    def test_cartesian_error_decreases(self):
        rep = run_experiment(ExperimentConfig("tracs_c"))
        for lo, hi in zip(rep.rows, rep.rows[1:]):
            assert hi.mean_ae + 3 * math.hypot(lo.stderr, hi.stderr) < lo.mean_ae

    def test_report_files(self, tmp_path):
        rep = run_experiment(self.small("tracs_d", eps_grid=(2.0, 3.0)))
        rep.to_csv(tmp_path / "r.csv")
        rep.to_json(tmp_path / "r.json")
        rows = list(csv.DictReader(open(tmp_path / "r.csv")))
        assert list(rows[0])[:5] == ["method", "eps", "mean_ae", "stderr", "per_loc_time_s"]
        assert json.loads((tmp_path / "r.json").read_text())[1]["eps"] == 3.0
        assert rep.row("tracs_d", 3.0).eps == 3.0
        with pytest.raises(KeyError):
            rep.row("tracs_d", 9.0)

    def test_tall_space_cartesian_vs_strawman_ratio(self):
        tables = run_preset("fig5b")["fig5b"]
        c = np.array([r["mean_ae"] for r in tables if r["method"] == "tracs_c"])
        s = np.array([r["mean_ae"] for r in tables if r["method"] == "strawman_k6"])
        assert abs((c / s).mean() - 0.64) <= 0.15


class TestMse:
    @pytest.mark.parametrize("eps", [2.0, 4.0])
    def test_distance_mse_matches_closed_form(self, eps):
        mse, se = mse_with_stderr("mdist", 0.0, eps, 1_000_000, np.random.default_rng(int(eps)))
        assert abs(mse - mech.worst_case_mse_closed_form(eps)) < 3 * se

    def test_distance_mse_rate(self):
        rng = np.random.default_rng(5)
        ratio = empirical_mse("mdist", 0.0, 8.0, 1_000_000, rng) / empirical_mse("mdist", 0.0, 4.0, 1_000_000, rng)
        assert abs(ratio / math.exp(-2) - 1) < 0.15

    def test_direction_mse_decreasing(self):
        rng = np.random.default_rng(6)
        vals = [empirical_mse("mcirc", 1.0, e, 200_000, rng) for e in (2.0, 4.0, 6.0, 8.0)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_unknown_mechanism(self):
        with pytest.raises(ValueError):
            empirical_mse("laplace", 0.0, 1.0, 10, np.random.default_rng(0))


class TestDirectionErrorCurve:
    def test_small_eps_is_uniform(self):
        rng = np.random.default_rng(7)
        n = 20_000
        for method in ("tracs_d", "strawman"):
            row = direction_error_curve(method, (1e-6,), n, rng)[0]
            # arc distance under a uniform output: mean pi/2, sd pi/sqrt(12)
            assert abs(row["mean_error"] - math.pi / 2) < 3 * math.pi / math.sqrt(12 * n)

    def test_rows(self):
        rows = direction_error_curve("strawman", (2.0, 4.0), 100, np.random.default_rng(8), k=3)
        assert [r["method"] for r in rows] == ["strawman_k3"] * 2
        with pytest.raises(ValueError):
            direction_error_curve("tracs_c", (2.0,), 10, np.random.default_rng(0))


def test_bench_rows():
    rows = bench_perturbation(("tracs_d", "tracs_c", "exponential"), (100, 400), reps=200, baseline_reps=20)
    assert {(r["method"], r["m"]) for r in rows} == {
        (m, s) for m in ("tracs_d", "tracs_c", "exponential") for s in (100, 400)
    }
    assert all(r["median_s"] > 0 for r in rows)


def test_preset_names():
    for name in PRESETS:
        cfgs = preset_configs(name)
        assert all(c.validate() for c in cfgs)
    fig6 = preset_configs("fig6")
    assert fig6[0].space == TALL and fig6[0].repeats == 1000
    assert {c.method for c in preset_configs("fig5a")} == {"tracs_d", "tracs_c", "strawman"}


def test_report_extend():
    a, b = EvalReport(), EvalReport()
    a.extend(run_experiment(ExperimentConfig("tracs_c", eps_grid=(2.0,), n_trajectories=2, trajectory_length=2)))
    b.extend(a)
    assert len(b.rows) == 1
