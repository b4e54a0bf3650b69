"""Fuzzy numbers as discretized membership-level profiles.

A fuzzy number is stored by its level sets: for each membership level
lam on a grid containing 0 and 1, the cut is the interval
[lo(lam), hi(lam)].  Validity means lo is nondecreasing in lam, hi is
nonincreasing, and lo <= hi everywhere (nested cuts).

All profiles produced from triangular or trapezoidal inputs by the
operations below are piecewise linear in lam with breakpoints on the
grid, so the grid representation is exact for them.  For profiles that
are not piecewise linear on their grid, the stored values are a sampled
approximation and the metric below is a grid approximation of the true
supremum.

Values are immutable; every operation returns a new number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    HukuharaNotExist,
    LambdaOutOfRange,
    NegativeScalar,
    NegativeSpread,
)

#: Number of cells in the default uniform level grid (grid has this + 1 points).
DEFAULT_GRID_SIZE = 64

#: Slack absorbing floating-point noise in monotonicity/nesting checks.
MONOTONE_TOL = 1e-12


def uniform_levels(grid_size: int = DEFAULT_GRID_SIZE) -> np.ndarray:
    """Uniform level grid with ``grid_size`` cells on [0, 1]."""
    if grid_size < 1:
        raise ValueError(f"grid_size must be >= 1, got {grid_size}")
    return np.linspace(0.0, 1.0, grid_size + 1)


@dataclass(frozen=True)
class Interval:
    """A single level cut [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FuzzyNumber:
    """A fuzzy real number given by endpoint functions on a level grid.

    ``levels`` is strictly increasing, starts at 0 and ends at 1.
    ``lo``/``hi`` hold the left/right cut endpoints per grid level.
    Between grid levels the profile is interpreted piecewise linearly.
    """

    levels: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        levels = _freeze(self.levels)
        lo = _freeze(self.lo)
        hi = _freeze(self.hi)
        if levels.ndim != 1 or levels.size < 2:
            raise ValueError("level grid must be 1-D with at least 2 points")
        if lo.shape != levels.shape or hi.shape != levels.shape:
            raise ValueError("lo/hi must match the level grid in length")
        if levels[0] != 0.0 or levels[-1] != 1.0:
            raise ValueError("level grid must start at 0 and end at 1")
        if np.any(np.diff(levels) <= 0):
            raise ValueError("level grid must be strictly increasing")
        if np.any(np.diff(lo) < -MONOTONE_TOL):
            raise ValueError("left endpoints must be nondecreasing in the level")
        if np.any(np.diff(hi) > MONOTONE_TOL):
            raise ValueError("right endpoints must be nonincreasing in the level")
        if np.any(lo > hi + MONOTONE_TOL):
            raise ValueError("left endpoint exceeds right endpoint at some level")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def support(self) -> Interval:
        return Interval(float(self.lo[0]), float(self.hi[0]))

    @property
    def core(self) -> Interval:
        return Interval(float(self.lo[-1]), float(self.hi[-1]))

    def __repr__(self) -> str:  # keep array dumps out of test output
        return (
            f"FuzzyNumber(support=[{self.lo[0]:g}, {self.hi[0]:g}], "
            f"core=[{self.lo[-1]:g}, {self.hi[-1]:g}], "
            f"levels={self.levels.size})"
        )


def fuzzy_zero(grid_size: int = DEFAULT_GRID_SIZE) -> FuzzyNumber:
    """The crisp zero: every cut is {0}."""
    return crisp(0.0, grid_size)


def crisp(value: float, grid_size: int = DEFAULT_GRID_SIZE) -> FuzzyNumber:
    """A real number embedded as a fuzzy number (all cuts degenerate)."""
    levels = uniform_levels(grid_size)
    v = np.full_like(levels, float(value))
    return FuzzyNumber(levels, v, v.copy())


def make_triangular(
    center: float,
    left_spread: float,
    right_spread: float,
    grid_size: int = DEFAULT_GRID_SIZE,
) -> FuzzyNumber:
    """Triangular fuzzy number with peak at ``center``.

    The cut at level lam is
    [center - left_spread*(1-lam), center + right_spread*(1-lam)],
    so the support is [center - left_spread, center + right_spread].
    """
    if left_spread < 0 or right_spread < 0:
        raise NegativeSpread(
            f"spreads must be nonnegative, got ({left_spread}, {right_spread})"
        )
    levels = uniform_levels(grid_size)
    one_minus = 1.0 - levels
    return FuzzyNumber(
        levels,
        center - left_spread * one_minus,
        center + right_spread * one_minus,
    )


def from_breakpoints(
    breakpoints,
    grid_size: int | None = None,
) -> FuzzyNumber:
    """Build a fuzzy number from explicit (lam, lo, hi) breakpoints.

    Breakpoints must cover lam = 0 and lam = 1 and be given in strictly
    increasing lam order; between breakpoints the endpoints are linear.
    When ``grid_size`` is given, the stored grid is the union of the
    uniform grid and the breakpoint levels, which keeps the profile
    exactly representable.
    """
    pts = sorted((float(l), float(a), float(b)) for l, a, b in breakpoints)
    lams = np.array([p[0] for p in pts])
    los = np.array([p[1] for p in pts])
    his = np.array([p[2] for p in pts])
    if lams[0] != 0.0 or lams[-1] != 1.0:
        raise ValueError("breakpoints must include levels 0 and 1")
    if np.any(np.diff(lams) <= 0):
        raise ValueError("breakpoint levels must be strictly increasing")
    if grid_size is not None:
        grid = np.union1d(uniform_levels(grid_size), lams)
        los = np.interp(grid, lams, los)
        his = np.interp(grid, lams, his)
        lams = grid
    return FuzzyNumber(lams, los, his)


def _check_lambda(lam: float) -> float:
    if not 0.0 <= lam <= 1.0:
        raise LambdaOutOfRange(f"membership level must be in [0, 1], got {lam}")
    return float(lam)


def level(u: FuzzyNumber, lam: float) -> Interval:
    """The cut [u_lo(lam), u_hi(lam)], linearly interpolated off-grid."""
    lam = _check_lambda(lam)
    lo = float(np.interp(lam, u.levels, u.lo))
    hi = float(np.interp(lam, u.levels, u.hi))
    # interpolation noise can cross a degenerate cut by ~1e-16
    if lo > hi:
        lo = hi = 0.5 * (lo + hi)
    return Interval(lo, hi)


def len_level(u: FuzzyNumber, lam: float) -> float:
    """Width of the cut at level lam."""
    cut = level(u, lam)
    return cut.width


def resample(u: FuzzyNumber, levels: np.ndarray) -> FuzzyNumber:
    """The same profile sampled on another level grid."""
    if np.array_equal(u.levels, levels):
        return u
    return FuzzyNumber(
        levels,
        np.interp(levels, u.levels, u.lo),
        np.interp(levels, u.levels, u.hi),
    )


def common_levels(u: FuzzyNumber, v: FuzzyNumber) -> np.ndarray:
    """Union grid on which both operands are exactly representable."""
    if np.array_equal(u.levels, v.levels):
        return u.levels
    return np.union1d(u.levels, v.levels)


def add(u: FuzzyNumber, v: FuzzyNumber) -> FuzzyNumber:
    """Levelwise sum of two fuzzy numbers."""
    grid = common_levels(u, v)
    a, b = resample(u, grid), resample(v, grid)
    return FuzzyNumber(grid, a.lo + b.lo, a.hi + b.hi)


def scale(factor: float, u: FuzzyNumber) -> FuzzyNumber:
    """Product of a nonnegative real factor with a fuzzy number."""
    if factor < 0:
        raise NegativeScalar(f"scaling factor must be >= 0, got {factor}")
    return FuzzyNumber(u.levels, factor * u.lo, factor * u.hi)


def hukuhara_profiles(
    levels: np.ndarray,
    minuend_lo: np.ndarray,
    minuend_hi: np.ndarray,
    subtrahend_lo: np.ndarray,
    subtrahend_hi: np.ndarray,
    what: str = "",
) -> tuple[np.ndarray, np.ndarray]:
    """Array core of the Hukuhara difference.

    Inputs are stacked profiles of shape (..., m) over a shared level
    grid of length m.  Returns the candidate difference profiles and
    raises HukuharaNotExist, naming the first offending level, when the
    candidate is not a valid fuzzy number.
    """
    lo = minuend_lo - subtrahend_lo
    hi = minuend_hi - subtrahend_hi
    ctx = f" ({what})" if what else ""

    bad = np.diff(lo, axis=-1) < -MONOTONE_TOL
    if np.any(bad):
        j = int(np.argwhere(bad)[0][-1])
        raise HukuharaNotExist(
            f"difference does not exist{ctx}: candidate left endpoint decreases "
            f"between levels {levels[j]:g} and {levels[j + 1]:g}",
            lam=float(levels[j]),
        )
    bad = np.diff(hi, axis=-1) > MONOTONE_TOL
    if np.any(bad):
        j = int(np.argwhere(bad)[0][-1])
        raise HukuharaNotExist(
            f"difference does not exist{ctx}: candidate right endpoint increases "
            f"between levels {levels[j]:g} and {levels[j + 1]:g}",
            lam=float(levels[j]),
        )
    bad = lo > hi + MONOTONE_TOL
    if np.any(bad):
        j = int(np.argwhere(bad)[0][-1])
        raise HukuharaNotExist(
            f"difference does not exist{ctx}: candidate cut is empty at level "
            f"{levels[j]:g}",
            lam=float(levels[j]),
        )
    return lo, hi


def hukuhara_diff(u: FuzzyNumber, v: FuzzyNumber) -> FuzzyNumber:
    """The fuzzy number w with v + w = u (levelwise), when it exists.

    The candidate has endpoints u.lo - v.lo and u.hi - v.hi; it is the
    difference iff it is itself a valid fuzzy number, otherwise
    HukuharaNotExist is raised.
    """
    grid = common_levels(u, v)
    a, b = resample(u, grid), resample(v, grid)
    lo, hi = hukuhara_profiles(grid, a.lo, a.hi, b.lo, b.hi)
    return FuzzyNumber(grid, lo, hi)


def d_inf(u: FuzzyNumber, v: FuzzyNumber) -> float:
    """Supremum metric: sup over levels of the endpoint deviations.

    Computed as the maximum over the (union) level grid, which is exact
    for profiles piecewise linear on that grid.
    """
    grid = common_levels(u, v)
    a, b = resample(u, grid), resample(v, grid)
    return float(
        max(np.max(np.abs(a.lo - b.lo)), np.max(np.abs(a.hi - b.hi)))
    )
