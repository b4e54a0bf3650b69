"""Fixed-point computation of the fuzzy interpolation function.

The interpolant is the unique continuous fuzzy-valued function f with
f(x) = alpha_i * f(linv_i(x)) + q_i(x) on each subinterval, where
linv_i is the inverse horizontal map and q_i the offset map.  It is
computed by iterating the associated operator on a sampled
representative: a fuzzy value per point of a grid that contains every
data node, with levelwise linear interpolation in between.

Because the operator is a contraction with factor max(alpha_i), plain
iteration from the piecewise-linear data interpolant converges
geometrically; the stopping rule uses the standard a-posteriori bound
for contractions.

A chaos-game sampler of the underlying recurrent IFS attractor is
included as an independent cross-check of the solved function.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import fuzzy, rifs
from .errors import (
    LambdaOutOfRange,
    MaxIterExceeded,
    NotIrreducible,
    XOutOfRange,
)
from .fuzzy import FuzzyNumber
from .rifs import FuzzyDataSet, RifsSpec

#: Default number of grid cells per data subinterval.
DEFAULT_DENSITY = 64

#: Tolerance for "this function interpolates the data" checks.
NODE_TOL = 1e-10


def _resolve_workers(workers: int | None) -> int:
    """Worker-thread count; FUZZFRAC_THREADS caps it, 0 means auto."""
    if workers is None:
        raw = os.environ.get("FUZZFRAC_THREADS", "").strip()
        if not raw:
            return 1
        workers = int(raw)
    if workers == 0:
        return os.cpu_count() or 1
    return max(1, int(workers))


@dataclass(frozen=True)
class SampledFuzzyFunction:
    """A fuzzy-valued function sampled on a grid over [x_0, x_n].

    ``los``/``his`` hold one level profile per grid point (rows).  All
    rows share ``levels``.  Between grid points the function is the
    levelwise linear interpolant of the neighbouring rows, which is
    again a valid fuzzy number.
    """

    grid: np.ndarray
    levels: np.ndarray
    los: np.ndarray
    his: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if self.los.shape != (grid.size, self.levels.size):
            raise ValueError("profile array shape does not match grid and levels")
        if self.his.shape != self.los.shape:
            raise ValueError("lo/hi profile arrays differ in shape")
        tol = fuzzy.MONOTONE_TOL
        if (
            np.any(np.diff(self.los, axis=1) < -tol)
            or np.any(np.diff(self.his, axis=1) > tol)
            or np.any(self.los > self.his + tol)
        ):
            raise ValueError("some grid point carries an invalid fuzzy profile")
        for name in ("grid", "levels", "los", "his"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return self.grid.size

    def value(self, k: int) -> FuzzyNumber:
        """The stored fuzzy value at grid index k."""
        return FuzzyNumber(self.levels, self.los[k], self.his[k])

    def values(self) -> list[FuzzyNumber]:
        return [self.value(k) for k in range(len(self))]

    def with_profiles(self, los: np.ndarray, his: np.ndarray) -> "SampledFuzzyFunction":
        return SampledFuzzyFunction(self.grid, self.levels, los, his)


@dataclass(frozen=True)
class IterationReport:
    """Convergence record of one fixed-point solve."""

    iterations: int
    successive_D: tuple[float, ...]
    final_residual: float
    alpha: float
    a_posteriori_error: float


# ---------------------------------------------------------------------------
# grids and evaluation


def make_grid(data: FuzzyDataSet, density: int = DEFAULT_DENSITY) -> np.ndarray:
    """Uniform-per-subinterval grid with ``density`` cells per subinterval."""
    if density < 1:
        raise ValueError(f"density must be >= 1, got {density}")
    parts = [
        np.linspace(data.xs[i], data.xs[i + 1], density + 1)[:-1]
        for i in range(data.n)
    ]
    parts.append(data.xs[-1:])
    return np.concatenate(parts)


def _resample_rows(
    levels_from: np.ndarray, rows: np.ndarray, levels_to: np.ndarray
) -> np.ndarray:
    if np.array_equal(levels_from, levels_to):
        return rows
    j = np.clip(
        np.searchsorted(levels_from, levels_to, side="right") - 1,
        0,
        levels_from.size - 2,
    )
    t = (levels_to - levels_from[j]) / (levels_from[j + 1] - levels_from[j])
    return rows[:, j] * (1 - t) + rows[:, j + 1] * t


def _interp_data_profiles(
    data: FuzzyDataSet, xs: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Piecewise-linear fuzzy interpolant of the data, levelwise."""
    idx = rifs.interval_index(data.xs, xs)
    width = data.xs[idx] - data.xs[idx - 1]
    t = np.clip((xs - data.xs[idx - 1]) / width, 0.0, 1.0)[:, None]
    lo = (1 - t) * data.los[idx - 1] + t * data.los[idx]
    hi = (1 - t) * data.his[idx - 1] + t * data.his[idx]
    return lo, hi


def node_interpolant(
    data: FuzzyDataSet, grid: np.ndarray | None = None, density: int = DEFAULT_DENSITY
) -> SampledFuzzyFunction:
    """The levelwise-linear interpolant of the data, sampled on a grid.

    This is the canonical starting iterate: it interpolates the data by
    construction and is cheap to form.
    """
    if grid is None:
        grid = make_grid(data, density)
    lo, hi = _interp_data_profiles(data, np.asarray(grid, dtype=float))
    return SampledFuzzyFunction(grid, data.levels, lo, hi)


def _bracket(grid: np.ndarray, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    span = grid[-1] - grid[0]
    tol = 1e-9 * max(1.0, span)
    if np.any(xs < grid[0] - tol) or np.any(xs > grid[-1] + tol):
        k = int(np.argmax(np.maximum(grid[0] - xs, xs - grid[-1])))
        raise XOutOfRange(
            f"x={xs[k]:g} outside the sampled domain [{grid[0]:g}, {grid[-1]:g}]"
        )
    j = np.clip(np.searchsorted(grid, xs, side="right") - 1, 0, grid.size - 2)
    w = (xs - grid[j]) / (grid[j + 1] - grid[j])
    return j, np.clip(w, 0.0, 1.0)


def eval_profiles(
    phi: SampledFuzzyFunction, xs: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Levelwise linear evaluation at many abscissae; stacked profiles."""
    xs = np.asarray(xs, dtype=float)
    j, w = _bracket(phi.grid, xs)
    w = w[:, None]
    lo = (1 - w) * phi.los[j] + w * phi.los[j + 1]
    hi = (1 - w) * phi.his[j] + w * phi.his[j + 1]
    return lo, hi


def evaluate(phi: SampledFuzzyFunction, x: float) -> FuzzyNumber:
    """The function value at x: a stored row at grid points, otherwise
    the levelwise linear interpolant of the bracketing rows."""
    lo, hi = eval_profiles(phi, np.array([float(x)]))
    return FuzzyNumber(phi.levels, lo[0], hi[0])


def metric_D(phi: SampledFuzzyFunction, psi: SampledFuzzyFunction) -> float:
    """Uniform distance: max over grid points of the levelwise deviation."""
    if np.array_equal(phi.grid, psi.grid) and np.array_equal(phi.levels, psi.levels):
        return float(
            max(
                np.max(np.abs(phi.los - psi.los)),
                np.max(np.abs(phi.his - psi.his)),
            )
        )
    grid = np.union1d(phi.grid, psi.grid)
    alo, ahi = eval_profiles(phi, grid)
    blo, bhi = eval_profiles(psi, grid)
    levels = np.union1d(phi.levels, psi.levels)
    alo = _resample_rows(phi.levels, alo, levels)
    ahi = _resample_rows(phi.levels, ahi, levels)
    blo = _resample_rows(psi.levels, blo, levels)
    bhi = _resample_rows(psi.levels, bhi, levels)
    return float(max(np.max(np.abs(alo - blo)), np.max(np.abs(ahi - bhi))))


# ---------------------------------------------------------------------------
# the interpolation operator on sampled functions


@dataclass(frozen=True)
class OperatorPlan:
    """Precomputed data applying the interpolation operator on a grid.

    For each grid point x: the owning subinterval's scaling factor, the
    bracket (j0, weight) of the preimage linv_i(x) within the same grid,
    and the offset profile q_i(x).  The offsets do not change across
    iterations, so one plan serves a whole solve.
    """

    grid: np.ndarray
    levels: np.ndarray
    alpha: np.ndarray
    j0: np.ndarray
    w: np.ndarray
    q_lo: np.ndarray
    q_hi: np.ndarray
    node_positions: np.ndarray


def build_plan(spec: RifsSpec, grid: np.ndarray) -> OperatorPlan:
    grid = np.asarray(grid, dtype=float)
    node_positions = np.searchsorted(grid, spec.nodes)
    if np.any(node_positions >= grid.size) or np.any(
        np.abs(grid[np.clip(node_positions, 0, grid.size - 1)] - spec.nodes) > 1e-12
    ):
        raise ValueError("every data node must be a grid point")
    idx = rifs.interval_index(spec, grid)
    preimage = rifs._map_l_inv_vec(spec, idx, grid)
    j0, w = _bracket(grid, preimage)
    q_lo, q_hi = rifs.q_profiles(spec, grid, idx)
    return OperatorPlan(
        grid=grid,
        levels=spec.levels,
        alpha=spec.alphas[idx - 1],
        j0=j0,
        w=w,
        q_lo=q_lo,
        q_hi=q_hi,
        node_positions=node_positions,
    )


def _apply_rows(
    plan: OperatorPlan, los: np.ndarray, his: np.ndarray, rows: slice
) -> tuple[np.ndarray, np.ndarray]:
    j = plan.j0[rows]
    w = plan.w[rows][:, None]
    a = plan.alpha[rows][:, None]
    src_lo = (1 - w) * los[j] + w * los[j + 1]
    src_hi = (1 - w) * his[j] + w * his[j + 1]
    return a * src_lo + plan.q_lo[rows], a * src_hi + plan.q_hi[rows]


def apply_plan(
    plan: OperatorPlan, los: np.ndarray, his: np.ndarray, workers: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    n_rows = plan.grid.size
    if workers <= 1 or n_rows < 4096:
        return _apply_rows(plan, los, his, slice(None))
    from concurrent.futures import ThreadPoolExecutor

    out_lo = np.empty_like(los)
    out_hi = np.empty_like(his)
    chunk = -(-n_rows // workers)
    slices = [slice(k, min(k + chunk, n_rows)) for k in range(0, n_rows, chunk)]

    def fill(sl: slice) -> None:
        out_lo[sl], out_hi[sl] = _apply_rows(plan, los, his, sl)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(fill, slices))
    return out_lo, out_hi


def _aligned_profiles(
    phi: SampledFuzzyFunction, levels: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    return (
        _resample_rows(phi.levels, phi.los, levels),
        _resample_rows(phi.levels, phi.his, levels),
    )


def _check_interpolates(
    spec: RifsSpec, phi: SampledFuzzyFunction, node_positions: np.ndarray
) -> None:
    los, his = _aligned_profiles(phi, spec.levels)
    err = max(
        np.max(np.abs(los[node_positions] - spec.data.los)),
        np.max(np.abs(his[node_positions] - spec.data.his)),
    )
    if err > NODE_TOL:
        raise ValueError(
            f"input function does not interpolate the data (node error {err:g})"
        )


def apply_T(
    spec: RifsSpec,
    phi: SampledFuzzyFunction,
    check_interpolation: bool = True,
    workers: int | None = None,
) -> SampledFuzzyFunction:
    """One application of the interpolation operator.

    The result at x is alpha_i * phi(linv_i(x)) + q_i(x) for x in
    subinterval i.  For inputs interpolating the data the output does
    too; ``check_interpolation`` guards that precondition (switch it off
    to probe the operator on arbitrary functions).
    """
    plan = build_plan(spec, phi.grid)
    if check_interpolation:
        _check_interpolates(spec, phi, plan.node_positions)
    los, his = _aligned_profiles(phi, spec.levels)
    out_lo, out_hi = apply_plan(plan, los, his, _resolve_workers(workers))
    return SampledFuzzyFunction(phi.grid, spec.levels, out_lo, out_hi)


def solve(
    spec: RifsSpec,
    grid_density: int = DEFAULT_DENSITY,
    tol: float = 1e-8,
    max_iter: int = 10000,
    workers: int | None = None,
    grid: np.ndarray | None = None,
) -> tuple[SampledFuzzyFunction, IterationReport]:
    """Iterate the operator to its fixed point on a sampled grid.

    Starts from the piecewise-linear data interpolant and stops when the
    a-posteriori contraction bound guarantees the sampled iterate is
    within ``tol`` of the sampled fixed point.  Raises MaxIterExceeded
    if the cap is hit first.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if grid is None:
        grid = make_grid(spec.data, grid_density)
    nworkers = _resolve_workers(workers)
    plan = build_plan(spec, grid)
    start = node_interpolant(spec.data, grid)
    los, his = _aligned_profiles(start, spec.levels)

    alpha = spec.alpha_max
    threshold = tol * (1.0 - alpha) / alpha if alpha > 0 else np.inf
    successive: list[float] = []
    for _ in range(max_iter):
        new_lo, new_hi = apply_plan(plan, los, his, nworkers)
        step = float(
            max(np.max(np.abs(new_lo - los)), np.max(np.abs(new_hi - his)))
        )
        successive.append(step)
        los, his = new_lo, new_hi
        if step <= threshold:
            break
    else:
        raise MaxIterExceeded(
            f"no convergence to tol={tol:g} within {max_iter} iterations "
            f"(last step {successive[-1]:g})"
        )

    res_lo, res_hi = apply_plan(plan, los, his, nworkers)
    final_residual = float(
        max(np.max(np.abs(res_lo - los)), np.max(np.abs(res_hi - his)))
    )
    phi = SampledFuzzyFunction(grid, spec.levels, los, his)
    report = IterationReport(
        iterations=len(successive),
        successive_D=tuple(successive),
        final_residual=final_residual,
        alpha=alpha,
        a_posteriori_error=successive[-1] * alpha / (1.0 - alpha),
    )
    return phi, report


def residual(
    spec: RifsSpec, phi: SampledFuzzyFunction, workers: int | None = None
) -> float:
    """Fixed-point defect: distance between phi and one operator step.

    Defined for any sampled function on a node-containing grid, not just
    interpolating ones.
    """
    plan = build_plan(spec, phi.grid)
    los, his = _aligned_profiles(phi, spec.levels)
    out_lo, out_hi = apply_plan(plan, los, his, _resolve_workers(workers))
    return float(max(np.max(np.abs(out_lo - los)), np.max(np.abs(out_hi - his))))


def refinement_residual(
    spec: RifsSpec, phi: SampledFuzzyFunction, grid_density: int
) -> float:
    """Fixed-point defect of phi measured on a finer grid.

    On grids closed under the preimage maps the own-grid residual only
    reflects the stopping rule, so discretization quality is probed by
    re-sampling the solution onto a denser grid and applying the
    operator there.
    """
    grid = make_grid(spec.data, grid_density)
    lo, hi = eval_profiles(phi, grid)
    lo = _resample_rows(phi.levels, lo, spec.levels)
    hi = _resample_rows(phi.levels, hi, spec.levels)
    dense = SampledFuzzyFunction(grid, spec.levels, lo, hi)
    return residual(spec, dense)


# ---------------------------------------------------------------------------
# direct recursion (grid-free evaluation)


def unroll_profiles(
    spec: RifsSpec,
    xs: np.ndarray,
    depth: int,
    base: SampledFuzzyFunction | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the fixed point by unrolling its defining recursion.

    Follows each abscissa's preimage chain for ``depth`` steps,
    accumulating the scaled offsets, and closes with ``base`` (default:
    the piecewise-linear data interpolant).  The error is at most
    (max alpha)^depth times the distance of ``base`` from the fixed
    point, independent of any solve grid.
    """
    xs = np.asarray(xs, dtype=float)
    m = spec.levels.size
    acc_lo = np.zeros((xs.size, m))
    acc_hi = np.zeros((xs.size, m))
    coef = np.ones(xs.size)
    cur = xs.copy()
    for _ in range(max(0, depth)):
        idx = rifs.interval_index(spec, cur)
        q_lo, q_hi = rifs.q_profiles(spec, cur, idx)
        acc_lo += coef[:, None] * q_lo
        acc_hi += coef[:, None] * q_hi
        coef = coef * spec.alphas[idx - 1]
        cur = rifs._map_l_inv_vec(spec, idx, cur)
        cur = np.clip(cur, spec.nodes[0], spec.nodes[-1])
    if base is None:
        seed_lo, seed_hi = _interp_data_profiles(spec.data, cur)
    else:
        seed_lo, seed_hi = eval_profiles(base, cur)
        seed_lo = _resample_rows(base.levels, seed_lo, spec.levels)
        seed_hi = _resample_rows(base.levels, seed_hi, spec.levels)
    acc_lo += coef[:, None] * seed_lo
    acc_hi += coef[:, None] * seed_hi
    return acc_lo, acc_hi


def unroll_value(
    spec: RifsSpec,
    x: float,
    depth: int,
    base: SampledFuzzyFunction | None = None,
) -> FuzzyNumber:
    lo, hi = unroll_profiles(spec, np.array([float(x)]), depth, base)
    return FuzzyNumber(spec.levels, lo[0], hi[0])


# ---------------------------------------------------------------------------
# chaos game


@dataclass(frozen=True)
class ChaosGameSample:
    """Post-burn-in orbit of the random iteration, stored columnwise."""

    xs: np.ndarray
    levels: np.ndarray
    los: np.ndarray
    his: np.ndarray

    def __len__(self) -> int:
        return self.xs.size

    def point(self, k: int) -> tuple[float, FuzzyNumber]:
        return float(self.xs[k]), FuzzyNumber(self.levels, self.los[k], self.his[k])

    def as_points(self) -> list[tuple[float, FuzzyNumber]]:
        return [self.point(k) for k in range(len(self))]


def chaos_game(
    spec: RifsSpec, steps: int, burn_in: int, seed: int
) -> ChaosGameSample:
    """Random iteration of the recurrent IFS; emits points after burn-in.

    The chain state is (s, (x, u)) with x in subinterval s.  Each step
    draws the next map index t from row s of the transition matrix
    (possible only when the address interval of t covers I_s, so the
    map applies), then moves the point by the graph map of t.  Orbits
    approach the attractor geometrically, so post-burn-in points lie on
    the graph of the interpolant up to numerical noise.  Deterministic
    for a fixed seed.
    """
    if steps <= burn_in:
        raise ValueError(f"steps ({steps}) must exceed burn_in ({burn_in})")
    if not rifs.check_irreducible(spec.M):
        raise NotIrreducible(
            "transition matrix is reducible; the random iteration cannot "
            "reach the whole attractor"
        )
    n = spec.n
    row_cum = np.cumsum(spec.M, axis=1)
    uniforms = np.random.default_rng(seed).random(steps)

    kept = steps - burn_in
    xs_out = np.empty(kept)
    lo_out = np.empty((kept, spec.levels.size))
    hi_out = np.empty((kept, spec.levels.size))

    s = 1
    x = float(spec.nodes[0])
    lo = spec.data.los[0].copy()
    hi = spec.data.his[0].copy()
    nodes = spec.nodes
    s_idx = spec.address.s_idx
    for step in range(steps):
        t = int(np.searchsorted(row_cum[s - 1], uniforms[step], side="right"))
        t = min(t, n - 1) + 1
        x_new = float(nodes[t - 1] + spec.c_l[t - 1] * (x - nodes[s_idx[t - 1]]))
        q_lo, q_hi = rifs.q_profiles(spec, np.array([x_new]), np.array([t]))
        alpha = spec.alphas[t - 1]
        lo = alpha * lo + q_lo[0]
        hi = alpha * hi + q_hi[0]
        x, s = x_new, t
        if step >= burn_in:
            k = step - burn_in
            xs_out[k] = x
            lo_out[k] = lo
            hi_out[k] = hi
    return ChaosGameSample(xs=xs_out, levels=spec.levels, los=lo_out, his=hi_out)


# ---------------------------------------------------------------------------
# level-curve export


@dataclass(frozen=True)
class LevelSetTable:
    """Level curves of a sampled function at chosen membership levels."""

    x: np.ndarray
    lambdas: tuple[float, ...]
    lowers: tuple[np.ndarray, ...]
    uppers: tuple[np.ndarray, ...]

    def columns(self) -> list[tuple[str, np.ndarray]]:
        cols: list[tuple[str, np.ndarray]] = [("x", self.x)]
        for lam, lo, hi in zip(self.lambdas, self.lowers, self.uppers):
            cols.append((f"f_minus({lam:g})", lo))
            cols.append((f"f_plus({lam:g})", hi))
        return cols


def export_level_sets(phi: SampledFuzzyFunction, lambdas) -> LevelSetTable:
    """Lower/upper level curves over the grid, one pair per level."""
    lams = [float(l) for l in lambdas]
    for lam in lams:
        if not 0.0 <= lam <= 1.0:
            raise LambdaOutOfRange(f"membership level must be in [0, 1], got {lam}")
    lowers = []
    uppers = []
    for lam in lams:
        j = int(
            np.clip(
                np.searchsorted(phi.levels, lam, side="right") - 1,
                0,
                phi.levels.size - 2,
            )
        )
        t = (lam - phi.levels[j]) / (phi.levels[j + 1] - phi.levels[j])
        lowers.append((1 - t) * phi.los[:, j] + t * phi.los[:, j + 1])
        uppers.append((1 - t) * phi.his[:, j] + t * phi.his[:, j + 1])
    return LevelSetTable(
        x=phi.grid,
        lambdas=tuple(lams),
        lowers=tuple(lowers),
        uppers=tuple(uppers),
    )
