"""Local-differential-privacy trajectory perturbation in continuous 2-D space."""
from .geometry import Location, RectSpace
from .mechanisms import PrivacyBudget
from .trajectory import (
    CircularSpace,
    GridSpace,
    PointSpace,
    PolarPoint,
    strawman_trajectory,
    tracs_c,
    tracs_d,
    tracs_d_circular,
    tracs_d_rsw,
)

__all__ = [
    "Location",
    "RectSpace",
    "PrivacyBudget",
    "CircularSpace",
    "GridSpace",
    "PointSpace",
    "PolarPoint",
    "tracs_d",
    "tracs_d_rsw",
    "tracs_c",
    "strawman_trajectory",
    "tracs_d_circular",
]
