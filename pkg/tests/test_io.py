import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tracs.io import (
    DataError,
    format_csv,
    format_jsonl,
    parse_csv,
    parse_jsonl,
    read_points,
    read_trajectories,
    write_trajectories,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
trajs = st.lists(st.lists(st.tuples(finite, finite), min_size=1, max_size=5), min_size=1, max_size=4)


@given(trajs)
def test_jsonl_round_trip_is_exact(ts):
    assert parse_jsonl(format_jsonl(ts)) == ts


@given(trajs)
def test_csv_round_trip_is_exact(ts):
    assert parse_csv(format_csv(ts)) == ts


def test_jsonl_layout():
    assert format_jsonl([[(0.1, 2.0)]]) == '{"points": [[0.10000000000000001, 2]]}\n'


def test_csv_rows_sorted_by_idx_and_grouped():
    text = "traj_id,idx,a,b\nx,1,1,1\ny,0,5,5\nx,0,0,0\n"
    assert parse_csv(text) == [[(0, 0), (1, 1)], [(5, 5)]]


@pytest.mark.parametrize(
    "text",
    [
        "not json\n",
        '{"pts": [[0, 0]]}\n',
        '{"points": []}\n',
        '{"points": [[0, 0, 1]]}\n',
        '{"points": [[0, "x"]]}\n',
        '{"points": [[0, NaN]]}\n',
    ],
)
def test_bad_jsonl(text):
    with pytest.raises(DataError):
        parse_jsonl(text)


@pytest.mark.parametrize("text", ["a,b\n1,2\n", "traj_id,idx,a,b\n0,x,1,1\n", "traj_id,idx,a,b\n0,0,1,inf\n"])
def test_bad_csv(text):
    with pytest.raises(DataError):
        parse_csv(text)


def test_files_pick_format_by_extension(tmp_path):
    ts = [[(0.25, 0.5), (0.75, 1.0)], [(0.0, 0.0)]]
    for name in ("t.jsonl", "t.csv"):
        write_trajectories(tmp_path / name, ts)
        assert read_trajectories(tmp_path / name) == ts
    assert (tmp_path / "t.csv").read_text().startswith("traj_id,idx,a,b\n")


def test_read_points(tmp_path):
    (tmp_path / "p.csv").write_text("a,b\n0,0\n1,0.5\n")
    assert read_points(tmp_path / "p.csv") == [(0, 0), (1, 0.5)]
    write_trajectories(tmp_path / "p.jsonl", [[(1, 2)], [(3, 4), (5, 6)]])
    assert read_points(tmp_path / "p.jsonl") == [(1, 2), (3, 4), (5, 6)]
    (tmp_path / "e.csv").write_text("a,b\n")
    with pytest.raises(DataError):
        read_points(tmp_path / "e.csv")
    (tmp_path / "e.jsonl").write_text("")
    with pytest.raises(DataError):
        read_points(tmp_path / "e.jsonl")


def test_random_doubles_survive(tmp_path):
    pts = np.random.default_rng(0).random((100, 2)) * 1e-7 + 123.456
    ts = [[tuple(map(float, p)) for p in pts]]
    write_trajectories(tmp_path / "x.jsonl", ts)
    assert read_trajectories(tmp_path / "x.jsonl") == ts
