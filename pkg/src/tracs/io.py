"""Trajectory files: JSON Lines (``{"points": [[a, b], ...]}``) or CSV.

CSV files carry ``traj_id,idx,a,b`` columns.  The format is picked from the
file extension.  Coordinates are written with 17 significant digits so that
doubles round-trip exactly.
"""
from __future__ import annotations

import csv
import json
import math
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Sequence

from .geometry import Location


class DataError(ValueError):
    """Malformed trajectory or point data."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _is_csv(path) -> bool:
    return Path(path).suffix.lower() == ".csv"


def _point(raw, where: str) -> Location:
    try:
        a, b = raw
        a, b = float(a), float(b)
    except (TypeError, ValueError):
        raise DataError(f"{where}: expected a coordinate pair, got {raw!r}") from None
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DataError(f"{where}: non-finite coordinate {raw!r}")
    return Location(a, b)


def parse_jsonl(text: str, source: str = "<string>") -> list[list[Location]]:
    out = []
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise DataError(f"{source}:{n}: invalid JSON ({e.msg})") from None
        pts = rec.get("points") if isinstance(rec, dict) else None
        if not isinstance(pts, list) or not pts:
            raise DataError(f"{source}:{n}: record needs a non-empty 'points' list")
        out.append([_point(p, f"{source}:{n}") for p in pts])
    return out


def parse_csv(text: str, source: str = "<string>") -> list[list[Location]]:
    reader = csv.DictReader(text.splitlines())
    need = {"traj_id", "idx", "a", "b"}
    if reader.fieldnames is None or not need <= set(reader.fieldnames):
        raise DataError(f"{source}: CSV header must contain {sorted(need)}")
    groups: dict[str, list[tuple[int, Location]]] = defaultdict(list)
    order: list[str] = []
    for n, row in enumerate(reader, 2):
        tid = row["traj_id"]
        if tid not in groups:
            order.append(tid)
        try:
            idx = int(row["idx"])
        except (TypeError, ValueError):
            raise DataError(f"{source}:{n}: bad idx {row['idx']!r}") from None
        groups[tid].append((idx, _point((row["a"], row["b"]), f"{source}:{n}")))
    return [[p for _, p in sorted(groups[t], key=lambda e: e[0])] for t in order]


def read_trajectories(path) -> list[list[Location]]:
    text = Path(path).read_text()
    return parse_csv(text, str(path)) if _is_csv(path) else parse_jsonl(text, str(path))


def format_jsonl(trajs: Iterable[Sequence]) -> str:
    lines = []
    for t in trajs:
        pts = ", ".join(f"[{_fmt(a)}, {_fmt(b)}]" for a, b in t)
        lines.append(f'{{"points": [{pts}]}}')
    return "\n".join(lines) + ("\n" if lines else "")


def format_csv(trajs: Iterable[Sequence]) -> str:
    lines = ["traj_id,idx,a,b"]
    for tid, t in enumerate(trajs):
        lines += [f"{tid},{i},{_fmt(a)},{_fmt(b)}" for i, (a, b) in enumerate(t)]
    return "\n".join(lines) + "\n"


def write_trajectories(path, trajs: Iterable[Sequence]) -> None:
    text = format_csv(trajs) if _is_csv(path) else format_jsonl(trajs)
    Path(path).write_text(text)


def read_points(path) -> list[Location]:
    """Point set for rounding: CSV with ``a,b`` columns, else all JSONL points."""
    text = Path(path).read_text()
    if _is_csv(path):
        reader = csv.DictReader(text.splitlines())
        if reader.fieldnames is None or not {"a", "b"} <= set(reader.fieldnames):
            raise DataError(f"{path}: CSV header must contain a,b")
        pts = [_point((r["a"], r["b"]), f"{path}:{n}") for n, r in enumerate(reader, 2)]
    else:
        pts = [p for t in parse_jsonl(text, str(path)) for p in t]
    if not pts:
        raise DataError(f"{path}: point set is empty")
    return pts
