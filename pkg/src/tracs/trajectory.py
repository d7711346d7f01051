"""Whole-trajectory perturbation and rounding to discrete spaces."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import mechanisms as mech
from .geometry import (
    ONE_MINUS,
    TWO_PI,
    DomainError,
    Location,
    RectSpace,
    advance,
    clamp_into,
    denormalize_coords,
    direction_between,
    distance_space_size,
    normalize_coords,
)
from .mechanisms import ParameterError, PrivacyBudget

Trajectory = list[Location]

# (private value, eps, rng) -> perturbed value
Sampler = Callable[[float, float, object], float]


def _check_trajectory(space: RectSpace, traj: Sequence) -> Trajectory:
    if len(traj) == 0:
        raise DomainError("trajectory is empty")
    return [space.check(p) for p in traj]


def perturb_location_dd(
    space: RectSpace,
    ref: Location,
    target: Location,
    budget: PrivacyBudget,
    rng,
    direction: Sampler = mech.sample_mcirc,
    distance: Sampler = mech.sample_mdist,
) -> Location:
    """One direction/distance perturbation of ``target`` relative to ``ref``.

    Consumes one direction draw (``eps_d``) then one distance draw
    (``eps - eps_d``).
    """
    phi = direction_between(ref, target)
    size = distance_space_size(space, ref, phi)
    dist = math.hypot(target[0] - ref[0], target[1] - ref[1])
    rbar = min(dist / size, ONE_MINUS) if size > 0.0 else 0.0
    phi_out = direction(phi, budget.eps_d, rng)
    rbar_out = distance(rbar, budget.eps_r, rng)
    out = advance(ref, phi_out, rbar_out * distance_space_size(space, ref, phi_out))
    return clamp_into(space, out)


def _chain(space, traj, budget, ref0, rng, direction, distance) -> Trajectory:
    traj = _check_trajectory(space, traj)
    ref = Location(space.a_sta, space.b_sta) if ref0 is None else space.check(ref0)
    out = []
    for target in traj:
        ref = perturb_location_dd(space, ref, target, budget, rng, direction, distance)
        out.append(ref)
    return out


def tracs_d(space: RectSpace, traj: Sequence, budget: PrivacyBudget, rng, ref0=None) -> Trajectory:
    """Direction/distance perturbation with the previous output as reference.

    ``ref0`` is the dummy starting reference; it defaults to ``(a_sta, b_sta)``.
    """
    return _chain(space, traj, budget, ref0, rng, mech.sample_mcirc, mech.sample_mdist)


def tracs_d_rsw(space: RectSpace, traj: Sequence, budget: PrivacyBudget, rng, ref0=None) -> Trajectory:
    """:func:`tracs_d` with the square-wave style samplers."""
    return _chain(space, traj, budget, ref0, rng, mech.sample_sw_direction, mech.sample_sw_distance)


def strawman_trajectory(
    space: RectSpace, traj: Sequence, budget: PrivacyBudget, k: int, rng, ref0=None
) -> Trajectory:
    """:func:`tracs_d` with the direction step replaced by k-RR over ``k`` sectors."""
    if k < 2:
        raise ParameterError(f"strawman needs k >= 2, got {k}")

    def direction(phi, eps, rng):
        return mech.strawman_direction(phi, k, eps, rng)

    return _chain(space, traj, budget, ref0, rng, direction, mech.sample_mdist)


def tracs_c(space: RectSpace, traj: Sequence, eps: float, rng) -> Trajectory:
    """Perturb each normalized coordinate independently with ``eps / 2``."""
    eps = mech._check_eps(eps)
    half = eps / 2.0
    out = []
    for loc in _check_trajectory(space, traj):
        da, db = normalize_coords(space, loc)
        da = mech.sample_mdist(da, half, rng)
        db = mech.sample_mdist(db, half, rng)
        out.append(clamp_into(space, denormalize_coords(space, (da, db))))
    return out


# -- circular area ---------------------------------------------------------


@dataclass(frozen=True)
class CircularSpace:
    """Disc of radius ``radius`` in polar coordinates."""

    radius: float = 1.0

    def __post_init__(self) -> None:
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise DomainError(f"radius must be positive, got {self.radius}")


class PolarPoint(tuple):
    """``(phi, r)`` with ``phi`` in ``[0, 2*pi)``."""

    __slots__ = ()

    def __new__(cls, phi: float, r: float):
        return super().__new__(cls, (float(phi), float(r)))

    phi = property(lambda self: self[0])
    r = property(lambda self: self[1])

    def __repr__(self) -> str:
        return f"PolarPoint(phi={self[0]!r}, r={self[1]!r})"


def tracs_d_circular(
    space: CircularSpace, traj: Sequence, budget: PrivacyBudget, rng
) -> list[PolarPoint]:
    """Perturb each polar point's angle and scaled radius independently."""
    R = space.radius
    out = []
    for phi, r in traj:
        if not (0.0 <= phi < TWO_PI and 0.0 <= r < R):
            raise DomainError(f"polar point {(phi, r)!r} outside disc of radius {R}")
        phi_out = mech.sample_mcirc(phi, budget.eps_d, rng)
        r_out = mech.sample_mdist(r / R, budget.eps_r, rng) * R
        out.append(PolarPoint(phi_out, min(r_out, math.nextafter(R, 0.0))))
    return out


# -- rounding --------------------------------------------------------------


def round_to_grid(space: RectSpace, loc, rows: int, cols: int) -> tuple[int, int]:
    """Index ``(row, col)`` of the grid cell containing ``loc``.

    Rows split the ``b`` axis and columns the ``a`` axis.  Cells are half-open,
    so a point on a shared edge belongs to the cell above it; the upper
    boundary folds into the last cell.
    """
    if rows < 1 or cols < 1:
        raise ParameterError(f"grid dims must be >= 1, got {rows}x{cols}")
    da, db = normalize_coords(space, loc)
    return min(int(db * rows), rows - 1), min(int(da * cols), cols - 1)


def cell_center(space: RectSpace, cell: tuple[int, int], rows: int, cols: int) -> Location:
    row, col = cell
    return denormalize_coords(space, ((col + 0.5) / cols, (row + 0.5) / rows))


def round_to_points(loc, points) -> Location:
    """Nearest point by Euclidean distance; ties go to the lowest index."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ParameterError("point set is empty")
    da = pts[:, 0] - loc[0]
    db = pts[:, 1] - loc[1]
    # argmin returns the first minimum, which is the lowest-index tie
    i = int(np.argmin(da * da + db * db))
    return Location(float(pts[i, 0]), float(pts[i, 1]))


@dataclass(frozen=True)
class GridSpace:
    """Evenly divided ``rows x cols`` grid over ``space``; rounds to cell centres."""

    space: RectSpace
    rows: int
    cols: int

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ParameterError(f"grid dims must be >= 1, got {self.rows}x{self.cols}")

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def round(self, loc) -> Location:
        cell = round_to_grid(self.space, loc, self.rows, self.cols)
        return cell_center(self.space, cell, self.rows, self.cols)

    def points(self) -> np.ndarray:
        a = self.space.a_sta + (np.arange(self.cols) + 0.5) / self.cols * self.space.width
        b = self.space.b_sta + (np.arange(self.rows) + 0.5) / self.rows * self.space.height
        bb, aa = np.meshgrid(b, a, indexing="ij")
        return np.column_stack([aa.ravel(), bb.ravel()])


class PointSpace:
    """Finite set of locations; rounds to the nearest one."""

    def __init__(self, points) -> None:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        if len(pts) == 0:
            raise ParameterError("point set is empty")
        self._pts = pts

    @property
    def size(self) -> int:
        return len(self._pts)

    def points(self) -> np.ndarray:
        return self._pts

    def round(self, loc) -> Location:
        return round_to_points(loc, self._pts)

    def round_many(self, locs) -> np.ndarray:
        """Vectorized rounding of an ``(n, 2)`` array; same tie rule."""
        q = np.asarray(locs, dtype=float).reshape(-1, 2)
        out = np.empty_like(q)
        chunk = max(1, 2_000_000 // len(self._pts))
        for s in range(0, len(q), chunk):
            blk = q[s : s + chunk]
            da = self._pts[None, :, 0] - blk[:, None, 0]
            db = self._pts[None, :, 1] - blk[:, None, 1]
            out[s : s + chunk] = self._pts[np.argmin(da * da + db * db, axis=1)]
        return out


DiscreteSpace = GridSpace | PointSpace


def discretize(traj: Sequence, target: DiscreteSpace) -> Trajectory:
    return [target.round(p) for p in traj]
