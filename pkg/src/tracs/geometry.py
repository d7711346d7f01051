"""Planar geometry of a rectangular location space.

Locations are treated as planar ``(a, b)`` pairs (longitude-like, latitude-like).
Two decompositions are supported: direction/distance relative to a reference
location, and normalized Cartesian coordinates relative to the lower-left corner.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

TWO_PI = 2.0 * math.pi
# largest double strictly below 1.0
ONE_MINUS = math.nextafter(1.0, 0.0)


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class DomainError(GeometryError):
    """A location lies outside its space."""


class BoundaryReferenceError(GeometryError):
    """A reference location is not strictly inside the space."""


class Location(NamedTuple):
    a: float
    b: float


@dataclass(frozen=True)
class RectSpace:
    """The rectangle ``[a_sta, a_end) x [b_sta, b_end)``."""

    a_sta: float = 0.0
    a_end: float = 1.0
    b_sta: float = 0.0
    b_end: float = 1.0

    def __post_init__(self) -> None:
        vals = (self.a_sta, self.a_end, self.b_sta, self.b_end)
        if not all(math.isfinite(v) for v in vals):
            raise GeometryError(f"space bounds must be finite, got {vals}")
        if not (self.a_sta < self.a_end and self.b_sta < self.b_end):
            raise GeometryError(f"empty space: {vals}")

    @property
    def width(self) -> float:
        return self.a_end - self.a_sta

    @property
    def height(self) -> float:
        return self.b_end - self.b_sta

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    @property
    def center(self) -> Location:
        return Location(0.5 * (self.a_sta + self.a_end), 0.5 * (self.b_sta + self.b_end))

    def contains(self, loc, closed: bool = False) -> bool:
        """Membership test; ``closed=True`` also accepts the upper edges."""
        a, b = loc
        if closed:
            return self.a_sta <= a <= self.a_end and self.b_sta <= b <= self.b_end
        return self.a_sta <= a < self.a_end and self.b_sta <= b < self.b_end

    def is_interior(self, loc) -> bool:
        a, b = loc
        return self.a_sta < a < self.a_end and self.b_sta < b < self.b_end

    def check(self, loc) -> Location:
        """Return ``loc`` as a Location or raise DomainError if it is outside."""
        a, b = loc
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"non-finite location {loc!r}")
        if not self.contains((a, b), closed=True):
            raise DomainError(f"location {loc!r} outside space {self}")
        return Location(float(a), float(b))


def direction_between(ref, target) -> float:
    """Angle of the vector ``ref -> target`` in ``[0, 2*pi)``.

    Coincident points return 0.
    """
    da = target[0] - ref[0]
    db = target[1] - ref[1]
    if da == 0.0 and db == 0.0:
        return 0.0
    phi = math.atan2(db, da)
    if phi < 0.0:
        phi += TWO_PI
        if phi >= TWO_PI:  # -0.0 < tiny negative angle rounds up to 2*pi
            phi = 0.0
    return phi


class CornerAngles(NamedTuple):
    phi1: float
    phi2: float
    phi3: float
    phi4: float


def corner_angles(space: RectSpace, ref) -> CornerAngles:
    """Directions from an interior ``ref`` to the four corners.

    ``phi3`` and ``phi4`` are lifted by ``2*pi`` so that
    ``phi1 < phi2 < phi3 < phi4`` holds.
    """
    if not space.is_interior(ref):
        raise BoundaryReferenceError(f"reference {ref!r} is not strictly inside {space}")
    a, b = ref
    phi1 = math.atan2(space.b_end - b, space.a_end - a)
    phi2 = math.atan2(space.b_end - b, space.a_sta - a)
    phi3 = math.atan2(space.b_sta - b, space.a_sta - a) + TWO_PI
    phi4 = math.atan2(space.b_sta - b, space.a_end - a) + TWO_PI
    return CornerAngles(phi1, phi2, phi3, phi4)


def nudge_inside(space: RectSpace, ref) -> Location:
    """Move a boundary reference one representable step into the interior."""
    a, b = ref
    if a <= space.a_sta:
        a = math.nextafter(space.a_sta, space.a_end)
    elif a >= space.a_end:
        a = math.nextafter(space.a_end, space.a_sta)
    if b <= space.b_sta:
        b = math.nextafter(space.b_sta, space.b_end)
    elif b >= space.b_end:
        b = math.nextafter(space.b_end, space.b_sta)
    return Location(a, b)


def distance_space_size(space: RectSpace, ref, phi: float) -> float:
    """Length of the ray from ``ref`` along ``phi`` to the boundary of ``space``.

    The branch is picked by which corner-angle interval contains ``phi``.
    References on the boundary are nudged inward first; rays leaving through
    the adjacent edge then have (near) zero length.
    """
    if not space.contains(ref, closed=True):
        raise DomainError(f"reference {ref!r} outside space {space}")
    if not space.is_interior(ref):
        ref = nudge_inside(space, ref)
    a, b = ref
    phi1, phi2, phi3, phi4 = corner_angles(space, ref)
    if phi < phi1 or phi >= phi4:
        size = (space.a_end - a) / math.cos(phi)
    elif phi < phi2:
        size = (space.b_end - b) / math.sin(phi)
    elif phi < phi3:
        size = (a - space.a_sta) / -math.cos(phi)
    else:
        size = (b - space.b_sta) / -math.sin(phi)
    # subnormal nudges can flip the sign of a near-zero branch value
    return size if size > 0.0 else 0.0


def normalize_coords(space: RectSpace, loc) -> tuple[float, float]:
    """Map ``loc`` to ``[0, 1) x [0, 1)`` relative to the lower-left corner."""
    a, b = space.check(loc)
    da = (a - space.a_sta) / space.width
    db = (b - space.b_sta) / space.height
    return min(da, ONE_MINUS), min(db, ONE_MINUS)


def denormalize_coords(space: RectSpace, pair) -> Location:
    da, db = pair
    return Location(space.a_sta + da * space.width, space.b_sta + db * space.height)


def advance(ref, phi: float, dist: float) -> Location:
    """Displace ``ref`` by ``dist`` along direction ``phi``."""
    return Location(ref[0] + dist * math.cos(phi), ref[1] + dist * math.sin(phi))


def clamp_into(space: RectSpace, loc) -> Location:
    """Clamp onto the half-open space (upper edges map one step inside)."""
    a = min(max(loc[0], space.a_sta), math.nextafter(space.a_end, space.a_sta))
    b = min(max(loc[1], space.b_sta), math.nextafter(space.b_end, space.b_sta))
    return Location(a, b)


def circular_distance(x: float, y: float) -> float:
    """Arc distance between two angles."""
    d = abs(x - y) % TWO_PI
    return min(d, TWO_PI - d)
