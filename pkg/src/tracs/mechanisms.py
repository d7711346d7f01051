"""Randomized perturbation primitives.

The continuous mechanisms are all piecewise: a high density ``p`` on one
interval and ``p / exp(eps)`` everywhere else, on either the circle
``[0, 2*pi)`` or the unit segment ``[0, 1)``.  Their densities are exposed via
:class:`PiecewisePdf` so that privacy and goodness-of-fit checks can use exact
values; samplers draw exactly one uniform per output.

Every sampler takes an explicit ``rng`` exposing ``random()`` (a
``numpy.random.Generator`` in practice).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .geometry import ONE_MINUS, TWO_PI, Location


class ParameterError(ValueError):
    """Invalid mechanism parameter (budget, domain size, index)."""


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not (eps > 0.0 and math.isfinite(eps)):
        raise ParameterError(f"eps must be positive and finite, got {eps}")
    return eps


@dataclass(frozen=True)
class PrivacyBudget:
    """Per-location budget ``eps`` split into a direction share ``eps_d``."""

    eps: float
    eps_d: float

    def __post_init__(self) -> None:
        _check_eps(self.eps)
        if not (0.0 < self.eps_d < self.eps):
            raise ParameterError(f"need 0 < eps_d < eps, got eps={self.eps}, eps_d={self.eps_d}")

    @classmethod
    def heuristic(cls, eps: float) -> "PrivacyBudget":
        """Split by domain size: ``eps_d = eps * pi / (pi + 1)``."""
        return cls(eps, eps * math.pi / (math.pi + 1.0))

    @property
    def eps_r(self) -> float:
        return self.eps - self.eps_d


@dataclass(frozen=True)
class PiecewisePdf:
    """Two-level density on a circular or linear domain.

    The high-density interval starts at ``lo`` and has length ``width``; on the
    circle it may wrap past ``2*pi``.
    """

    circular: bool
    p: float
    lo: float
    width: float
    eps: float

    @property
    def domain(self) -> float:
        return TWO_PI if self.circular else 1.0

    @property
    def low(self) -> float:
        return self.p * math.exp(-self.eps)

    @property
    def hi(self) -> float:
        return self.lo + self.width

    @property
    def high_mass(self) -> float:
        return self.width * self.p

    def interval(self) -> tuple[float, float]:
        """High interval ``[lo, hi)`` with ``hi`` reduced into the domain."""
        hi = self.hi
        if self.circular and hi >= TWO_PI:
            hi -= TWO_PI
        return self.lo, hi

    def pieces(self) -> list[tuple[float, float, float]]:
        """``(start, end, density)`` pieces tiling the domain in order."""
        L, lo, hi = self.domain, self.lo, self.hi
        if self.circular and hi > L:
            return [(0.0, hi - L, self.p), (hi - L, lo, self.low), (lo, L, self.p)]
        out = []
        if lo > 0.0:
            out.append((0.0, lo, self.low))
        out.append((lo, hi, self.p))
        if hi < L:
            out.append((hi, L, self.low))
        return out

    def total_mass(self) -> float:
        return math.fsum((e - s) * d for s, e, d in self.pieces())

    def density(self, y):
        """Density at ``y`` (scalar or array); zero outside the domain."""
        y = np.asarray(y, dtype=float)
        inside = (y >= 0.0) & (y < self.domain)
        if self.circular:
            high = np.mod(y - self.lo, TWO_PI) < self.width
        else:
            high = (y >= self.lo) & (y < self.hi)
        out = np.where(inside, np.where(high, self.p, self.low), 0.0)
        return float(out) if out.ndim == 0 else out

    def inverse_cdf(self, u: float) -> float:
        """Map one uniform ``u`` in ``[0, 1)`` to a draw (scalar fast path)."""
        hm = self.width * self.p
        if self.circular:
            # offset from lo: high piece first, then the rest of the circle
            t = u / self.p if u < hm else self.width + (u - hm) / self.low
            y = (self.lo + t) % TWO_PI
            return y if y < TWO_PI else 0.0
        m0 = self.lo * self.low
        if u < m0:
            y = u / self.low
        elif u < m0 + hm:
            y = self.lo + (u - m0) / self.p
        else:
            y = self.hi + (u - m0 - hm) / self.low
        return min(max(y, 0.0), ONE_MINUS)

    def inverse_cdf_array(self, u: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`inverse_cdf`."""
        u = np.asarray(u, dtype=float)
        hm = self.width * self.p
        if self.circular:
            t = np.where(u < hm, u / self.p, self.width + (u - hm) / self.low)
            y = np.mod(self.lo + t, TWO_PI)
            return np.where(y < TWO_PI, y, 0.0)
        m0 = self.lo * self.low
        y = np.where(
            u < m0,
            u / self.low,
            np.where(u < m0 + hm, self.lo + (u - m0) / self.p, self.hi + (u - m0 - hm) / self.low),
        )
        return np.clip(y, 0.0, ONE_MINUS)

    def sample(self, rng, size: int | None = None):
        if size is None:
            return self.inverse_cdf(rng.random())
        return self.inverse_cdf_array(rng.random(size))


def _wrap(x: float) -> float:
    x %= TWO_PI
    return x if x < TWO_PI else 0.0


def _linear_interval(x: float, c: float) -> float:
    """Left end of the width-``2c`` high interval around ``x`` on ``[0, 1)``."""
    if c <= x < 1.0 - c:
        return x - c
    if x < c:
        return 0.0
    return 1.0 - 2.0 * c


def _check_unit(x: float) -> float:
    if not (0.0 <= x < 1.0):
        raise ParameterError(f"normalized input must lie in [0, 1), got {x}")
    return x


def mcirc_pdf(phi: float, eps: float) -> PiecewisePdf:
    """Direction mechanism: ``p = exp(eps/2) / (2*pi)`` centred on ``phi``."""
    eps = _check_eps(eps)
    half = math.pi * math.expm1(eps / 2) / math.expm1(eps)
    p = math.exp(eps / 2) / TWO_PI
    return PiecewisePdf(True, p, _wrap(phi - half), 2.0 * half, eps)


def mdist_pdf(rbar: float, eps: float) -> PiecewisePdf:
    """Distance mechanism on ``[0, 1)`` with ``p = exp(eps/2)``."""
    eps = _check_eps(eps)
    _check_unit(rbar)
    c = math.expm1(eps / 2) / (2.0 * math.expm1(eps))
    return PiecewisePdf(False, math.exp(eps / 2), _linear_interval(rbar, c), 2.0 * c, eps)


def _sw_width_factor(eps: float) -> float:
    # (e^eps (eps - 1) + 1) / (e^eps - 1)^2
    em1 = math.expm1(eps)
    return (eps * math.exp(eps) - em1) / (em1 * em1)


def sw_direction_pdf(phi: float, eps: float) -> PiecewisePdf:
    """Square-wave style direction mechanism (narrower, taller high piece)."""
    eps = _check_eps(eps)
    half = math.pi * _sw_width_factor(eps)
    p = math.expm1(eps) / (TWO_PI * eps)
    return PiecewisePdf(True, p, _wrap(phi - half), 2.0 * half, eps)


def sw_distance_pdf(rbar: float, eps: float) -> PiecewisePdf:
    """Square-wave style distance mechanism on ``[0, 1)``.

    The interval branch is chosen on the private input ``rbar``.
    """
    eps = _check_eps(eps)
    _check_unit(rbar)
    c = 0.5 * _sw_width_factor(eps)
    p = math.expm1(eps) / eps
    return PiecewisePdf(False, p, _linear_interval(rbar, c), 2.0 * c, eps)


def sample_mcirc(phi: float, eps: float, rng) -> float:
    return mcirc_pdf(phi, eps).inverse_cdf(rng.random())


def sample_mdist(rbar: float, eps: float, rng) -> float:
    return mdist_pdf(rbar, eps).inverse_cdf(rng.random())


def sample_sw_direction(phi: float, eps: float, rng) -> float:
    return sw_direction_pdf(phi, eps).inverse_cdf(rng.random())


def sample_sw_distance(rbar: float, eps: float, rng) -> float:
    return sw_distance_pdf(rbar, eps).inverse_cdf(rng.random())


#: name -> pdf factory, for code that selects a mechanism by id
PDF_FACTORIES: dict[str, Callable[[float, float], PiecewisePdf]] = {
    "mcirc": mcirc_pdf,
    "mdist": mdist_pdf,
    "sw_direction": sw_direction_pdf,
    "sw_distance": sw_distance_pdf,
}


def dominant_sector(eps: float) -> tuple[float, float]:
    """Width and probability mass of the direction mechanism's high interval."""
    eps = _check_eps(eps)
    width = TWO_PI * math.expm1(eps / 2) / math.expm1(eps)
    mass = 1.0 / (1.0 + math.exp(-eps / 2))
    return width, mass


def worst_case_mse_closed_form(eps: float) -> float:
    """MSE of the distance mechanism at input 0 (the worst case)."""
    eps = _check_eps(eps)
    c = math.expm1(eps / 2) / (2.0 * math.expm1(eps))
    p = math.exp(eps / 2)
    c8 = 8.0 * c**3
    return c8 * p / 3.0 + (1.0 - c8) * p / (3.0 * math.exp(eps))


# -- discrete mechanisms ---------------------------------------------------


def _krr_keep(k: int, eps: float) -> float:
    return 1.0 / (1.0 + (k - 1) * math.exp(-eps))


def _check_krr(j: int, k: int, eps: float) -> None:
    if k < 2:
        raise ParameterError(f"k-RR needs k >= 2, got {k}")
    if not (0 <= j < k):
        raise ParameterError(f"index {j} outside [0, {k})")
    if not (eps >= 0.0 and math.isfinite(eps)):
        raise ParameterError(f"eps must be >= 0, got {eps}")


def krr_probabilities(j: int, k: int, eps: float) -> np.ndarray:
    _check_krr(j, k, eps)
    keep = _krr_keep(k, eps)
    probs = np.full(k, (1.0 - keep) / (k - 1))
    probs[j] = keep
    return probs


def krr_sample(j: int, k: int, eps: float, rng) -> int:
    """Randomized response over ``k`` values; keeps ``j`` w.p. e^eps/(k-1+e^eps)."""
    _check_krr(j, k, eps)
    keep = _krr_keep(k, eps)
    u = rng.random()
    if u < keep:
        return j
    i = min(int((u - keep) / (1.0 - keep) * (k - 1)), k - 2)
    return i if i < j else i + 1


def strawman_direction(phi: float, k: int, eps: float, rng) -> float:
    """k-RR over ``k`` equal sectors, then a uniform angle inside the chosen one."""
    _check_eps(eps)
    if k < 2:
        raise ParameterError(f"strawman needs k >= 2, got {k}")
    sector = TWO_PI / k
    j = min(int(phi / sector), k - 1)
    i = krr_sample(j, k, eps, rng)
    out = (i + rng.random()) * sector
    return out if out < TWO_PI else math.nextafter(TWO_PI, 0.0)


def exponential_probabilities(x, candidates: Sequence, eps: float) -> np.ndarray:
    """Selection probabilities with score ``-||x - y||`` (vectorized reference)."""
    eps = _check_eps(eps)
    pts = np.asarray(candidates, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ParameterError("exponential mechanism needs at least one candidate")
    d = np.hypot(pts[:, 0] - x[0], pts[:, 1] - x[1])
    spread = d.max() - d.min()
    if spread == 0.0:
        return np.full(len(pts), 1.0 / len(pts))
    w = np.exp(eps * (d.min() - d) / (2.0 * spread))
    return w / w.sum()


def exponential_mechanism(x, candidates: Sequence, eps: float, rng) -> Location:
    """Pick a candidate with probability proportional to ``exp(-eps*||x-y|| / (2*spread))``.

    ``spread`` is the range of scores over the candidates; a zero range gives a
    uniform pick.  Scoring and sampling both scan every candidate.
    """
    eps = _check_eps(eps)
    if len(candidates) == 0:
        raise ParameterError("exponential mechanism needs at least one candidate")
    xa, xb = x
    hypot = math.hypot
    dists = [hypot(c[0] - xa, c[1] - xb) for c in candidates]
    dmin = min(dists)
    spread = max(dists) - dmin
    u = rng.random()
    if spread == 0.0:
        return Location(*candidates[min(int(u * len(candidates)), len(candidates) - 1)])
    scale = eps / (2.0 * spread)
    exp = math.exp
    weights = [exp(scale * (dmin - d)) for d in dists]
    target = u * math.fsum(weights)
    acc = 0.0
    for i, w in enumerate(weights):
        acc += w
        if target < acc:
            return Location(*candidates[i])
    return Location(*candidates[-1])
