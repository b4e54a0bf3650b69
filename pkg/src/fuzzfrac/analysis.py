"""Analytic certificates for the fuzzy interpolant.

Three groups of results are computed and checked against observations:

* Hölder continuity: an exponent tau and coefficient 2Q such that the
  interpolant's modulus of continuity is bounded by 2Q |x - y|^tau.
* A-priori norm bound: the uniform distance of the interpolant from the
  crisp zero is at most L_q * max(|x_0|, |x_n|) / (1 - alpha).
* Stability: perturbing abscissae, fuzzy ordinates, or scaling factors
  moves the interpolant by at most an explicit multiple of the
  perturbation size.

Perturbed abscissae are handled through the node-to-node piecewise
affine reparametrization R; the perturbed interpolant is the original
construction composed with R^{-1} (the offset maps transform exactly
that way because they depend on x only through the barycentric weight
within each subinterval).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fuzzy, rifs, solver
from .errors import (
    EndpointMoved,
    InadmissiblePerturbation,
    NotIncreasing,
    ScalingConditionsViolated,
)
from .fuzzy import FuzzyNumber
from .rifs import FuzzyDataSet, RifsSpec
from .solver import SampledFuzzyFunction

PERTURBATION_KINDS = ("perturb_x", "perturb_u", "perturb_both", "perturb_alpha")


@dataclass(frozen=True)
class HolderParams:
    """Hölder continuity data of the interpolant.

    ``delta`` is the roughness ratio alpha / c_min; the case split on
    delta against 1 decides the exponent.  ``H`` = 2Q is the coefficient
    in the final modulus bound.
    """

    delta: float
    tau: float
    Q: float
    case: str
    M_bound: float
    N_bound: float
    H: float
    alpha: float
    c_min: float
    c_max: float
    L_q: float
    span_min: float
    span_max: float


def a_priori_norm_bound(spec: RifsSpec) -> float:
    """Upper bound on the uniform distance of the interpolant from zero."""
    L = float(np.max(spec.L_q))
    xmax = max(abs(float(spec.nodes[0])), abs(float(spec.nodes[-1])))
    return L * xmax / (1.0 - spec.alpha_max)


def holder_params(spec: RifsSpec, tau_if_critical: float = 0.5) -> HolderParams:
    """Hölder exponent and coefficient from the contraction data.

    In the critical case alpha == c_min any exponent in (0, 1) works;
    ``tau_if_critical`` picks one.
    """
    alpha = spec.alpha_max
    c_min = float(np.min(spec.c_l))
    c_max = float(np.max(spec.c_l))
    L = float(np.max(spec.L_q))
    spans = spec.nodes[spec.address.e_idx] - spec.nodes[spec.address.s_idx]
    span_min, span_max = float(np.min(spans)), float(np.max(spans))

    M_bound = 2.0 * a_priori_norm_bound(spec)
    N_bound = max(M_bound / (c_min * span_min), L)
    delta = alpha / c_min

    if delta < 1.0:
        case, tau = "delta_lt_1", 1.0
        Q = N_bound / (1.0 - delta)
    elif delta == 1.0:
        if not 0.0 < tau_if_critical < 1.0:
            raise ValueError(
                f"critical-case exponent must be in (0, 1), got {tau_if_critical}"
            )
        case, tau = "delta_eq_1", float(tau_if_critical)
        Q = (
            N_bound
            * (1.0 - 1.0 / ((1.0 - tau) * math.e * math.log(c_max)))
            * max(1.0, span_max)
        )
    else:
        case = "delta_gt_1"
        tau = math.log(delta) / math.log(c_max) + 1.0
        if tau <= 0.0:
            raise ValueError(
                f"no positive Hölder exponent: alpha={alpha:g} is too large for "
                f"c_max={c_max:g} (requires alpha < c_min / c_max)"
            )
        Q = N_bound * delta / (delta - 1.0) * max(1.0, span_max)

    return HolderParams(
        delta=delta,
        tau=tau,
        Q=Q,
        case=case,
        M_bound=M_bound,
        N_bound=N_bound,
        H=2.0 * Q,
        alpha=alpha,
        c_min=c_min,
        c_max=c_max,
        L_q=L,
        span_min=span_min,
        span_max=span_max,
    )


@dataclass(frozen=True)
class HolderCheck:
    """Empirical check of the modulus bound on random point pairs."""

    passed: bool
    worst_ratio: float
    violations: int
    num_pairs: int
    slack: float


def verify_holder(
    f: SampledFuzzyFunction,
    hp: HolderParams,
    num_pairs: int = 10_000,
    seed: int = 0,
    slack: float = 1e-7,
) -> HolderCheck:
    """Sample pairs (x, y) and check d(f(x), f(y)) <= 2Q |x-y|^tau + slack.

    ``worst_ratio`` reports max d / |x-y|^tau over the sample, the
    empirical counterpart of 2Q.
    """
    rng = np.random.default_rng(seed)
    a, b = float(f.grid[0]), float(f.grid[-1])
    xs = rng.uniform(a, b, num_pairs)
    ys = rng.uniform(a, b, num_pairs)
    lo1, hi1 = solver.eval_profiles(f, xs)
    lo2, hi2 = solver.eval_profiles(f, ys)
    d = np.maximum(
        np.max(np.abs(lo1 - lo2), axis=1), np.max(np.abs(hi1 - hi2), axis=1)
    )
    mod = np.abs(xs - ys) ** hp.tau
    bound = hp.H * mod
    violations = int(np.sum(d > bound + slack))
    nonzero = mod > 0
    worst = float(np.max(d[nonzero] / mod[nonzero])) if np.any(nonzero) else 0.0
    return HolderCheck(
        passed=violations == 0,
        worst_ratio=worst,
        violations=violations,
        num_pairs=num_pairs,
        slack=slack,
    )


# ---------------------------------------------------------------------------
# stability bounds


def _max_d_inf(values_a, values_b) -> float:
    return max(fuzzy.d_inf(a, b) for a, b in zip(values_a, values_b))


def _check_x_star(spec: RifsSpec, x_star: np.ndarray) -> np.ndarray:
    x_star = np.asarray(x_star, dtype=float)
    if x_star.shape != spec.nodes.shape:
        raise ValueError(
            f"expected {spec.nodes.size} perturbed abscissae, got {x_star.size}"
        )
    if x_star[0] != spec.nodes[0] or x_star[-1] != spec.nodes[-1]:
        raise EndpointMoved(
            "perturbed abscissae must keep both domain endpoints fixed"
        )
    if np.any(np.diff(x_star) <= 0):
        raise NotIncreasing("perturbed abscissae must be strictly increasing")
    return x_star


def _with_data(spec: RifsSpec, values, alphas) -> RifsSpec:
    data = FuzzyDataSet.from_points(list(zip(spec.nodes.tolist(), values)))
    return rifs.build_rifs(data, spec.address, alphas, validate=True)


def bound_perturb_x(spec: RifsSpec, hp: HolderParams, x_star) -> float:
    """Stability bound for perturbed abscissae (endpoints fixed)."""
    x_star = _check_x_star(spec, x_star)
    dx = float(np.max(np.abs(spec.nodes - x_star)))
    alpha = spec.alpha_max
    return (1.0 + alpha) * hp.H * dx**hp.tau / (1.0 - alpha)


def bound_perturb_u(spec: RifsSpec, u_star, mu: float | None = None) -> float:
    """Stability bound for perturbed fuzzy ordinates.

    ``mu`` bounds the offset-map displacement per unit of ordinate
    perturbation; for the built-in offset family it equals 1 + alpha.
    The perturbed ordinates must remain admissible for the same scaling
    factors, otherwise the perturbed interpolant does not exist.
    """
    u_star = list(u_star)
    _with_data(spec, u_star, spec.alphas)
    alpha = spec.alpha_max
    if mu is None:
        mu = 1.0 + alpha
    du = _max_d_inf(spec.data.values, u_star)
    return mu * du / (1.0 - alpha)


def bound_perturb_both(spec: RifsSpec, hp: HolderParams, x_star, u_star) -> float:
    """Combined bound for simultaneous abscissa and ordinate perturbation."""
    x_star = _check_x_star(spec, x_star)
    u_star = list(u_star)
    _with_data(spec, u_star, spec.alphas)
    alpha = spec.alpha_max
    dx = float(np.max(np.abs(spec.nodes - x_star)))
    du = _max_d_inf(spec.data.values, u_star)
    return (1.0 + alpha) / (1.0 - alpha) * (hp.H * dx**hp.tau + du)


def bound_perturb_alpha(spec: RifsSpec, alpha_star, mu: float | None = None) -> float:
    """Stability bound for perturbed vertical scaling factors.

    ``mu`` bounds the offset-map displacement per unit of scaling
    perturbation; for the built-in offset family the data norm
    max d_inf(u_i, 0) works.
    """
    alpha_star = np.asarray(alpha_star, dtype=float)
    try:
        _with_data(spec, spec.data.values, alpha_star)
    except ValueError as exc:
        raise ScalingConditionsViolated(str(exc)) from exc
    alpha = spec.alpha_max
    alpha_s = float(np.max(alpha_star))
    if mu is None:
        mu = float(
            max(np.max(np.abs(spec.data.los)), np.max(np.abs(spec.data.his)))
        )
    L = float(np.max(spec.L_q))
    xmax = max(abs(float(spec.nodes[0])), abs(float(spec.nodes[-1])))
    da = float(np.max(np.abs(spec.alphas - alpha_star)))
    return (L * xmax / ((1.0 - alpha) * (1.0 - alpha_s)) + mu / (1.0 - alpha_s)) * da


# ---------------------------------------------------------------------------
# perturbation experiments


@dataclass(frozen=True)
class StabilityReport:
    """Observed versus guaranteed displacement for one perturbation."""

    kind: str
    perturbation_size: float
    theoretical_bound: float
    observed_D: float
    margin: float
    slack: float

    @property
    def passed(self) -> bool:
        return self.margin >= 0.0


def perturbed_inputs(
    spec: RifsSpec, kind: str, size: float, seed: int
) -> tuple[np.ndarray, list[FuzzyNumber], np.ndarray]:
    """Deterministic perturbed configuration for an experiment.

    Directions are drawn once from the seed and scaled by ``size``, so
    experiments at different sizes with one seed perturb along the same
    field (making observed displacement comparable across sizes).
    Ordinates are shifted by crisp constants, which never breaks
    admissibility; abscissa and scaling perturbations are validated and
    raise InadmissiblePerturbation when they leave the admissible set.
    """
    if kind not in PERTURBATION_KINDS:
        raise ValueError(f"unknown perturbation kind {kind!r}")
    rng = np.random.default_rng(seed)
    n = spec.n
    eta_x = rng.uniform(-1.0, 1.0, n + 1)
    eta_x[0] = eta_x[-1] = 0.0
    eta_u = rng.uniform(-1.0, 1.0, n + 1)
    eta_a = rng.uniform(-1.0, 1.0, n)

    x_star = spec.nodes.copy()
    u_star = list(spec.data.values)
    alpha_star = np.array(spec.alphas, dtype=float)

    if kind in ("perturb_x", "perturb_both"):
        x_star = spec.nodes + size * eta_x
        if np.any(np.diff(x_star) <= 0):
            raise InadmissiblePerturbation(
                f"abscissa perturbation of size {size:g} breaks monotonicity"
            )
    if kind in ("perturb_u", "perturb_both"):
        u_star = [
            FuzzyNumber(u.levels, u.lo + size * e, u.hi + size * e)
            for u, e in zip(u_star, eta_u)
        ]
    if kind == "perturb_alpha":
        alpha_star = alpha_star + size * eta_a
        if np.any(alpha_star < 0) or np.any(alpha_star >= 1):
            raise InadmissiblePerturbation(
                f"scaling perturbation of size {size:g} leaves [0, 1)"
            )
    return x_star, u_star, alpha_star


def _unroll_depth(alpha: float, target: float = 1e-9) -> int:
    if alpha <= 0.0:
        return 1
    return min(500, max(1, math.ceil(math.log(target) / math.log(alpha))))


def run_perturbation_experiment(
    spec: RifsSpec,
    kind: str,
    size: float,
    seed: int = 0,
    grid_density: int = solver.DEFAULT_DENSITY,
    tol: float = 1e-8,
    max_iter: int = 10000,
    hp: HolderParams | None = None,
    base: SampledFuzzyFunction | None = None,
) -> StabilityReport:
    """Solve the base and perturbed interpolants and compare with the bound.

    The perturbed interpolant shares the base abscissae up to the
    reparametrization R, so it is solved on the original nodes with the
    perturbed ordinates/scalings and composed with R^{-1}.  The observed
    distance is taken over the base grid; abscissa-perturbed values are
    evaluated there by unrolling the perturbed recursion (seeded with
    its solved grid function), which avoids interpolation noise.
    """
    try:
        x_star, u_star, alpha_star = perturbed_inputs(spec, kind, size, seed)
        if kind in ("perturb_x", "perturb_both"):
            _check_x_star(spec, x_star)
        if kind in ("perturb_x", "perturb_both"):
            hp = hp if hp is not None else holder_params(spec)
        if kind == "perturb_x":
            bound = bound_perturb_x(spec, hp, x_star)
        elif kind == "perturb_u":
            bound = bound_perturb_u(spec, u_star)
        elif kind == "perturb_both":
            bound = bound_perturb_both(spec, hp, x_star, u_star)
        else:
            bound = bound_perturb_alpha(spec, alpha_star)
    except (EndpointMoved, NotIncreasing, ScalingConditionsViolated) as exc:
        raise InadmissiblePerturbation(str(exc)) from exc

    if base is None:
        base, _ = solver.solve(spec, grid_density=grid_density, tol=tol, max_iter=max_iter)

    # the ordinate/scaling part of the perturbed system (abscissae enter
    # only through the reparametrization, handled below)
    if kind == "perturb_x" or size == 0.0:
        factor_spec, factor_phi = spec, base
    else:
        factor_spec = _with_data(spec, u_star, alpha_star)
        factor_phi, _ = solver.solve(
            factor_spec, grid_density=grid_density, tol=tol, max_iter=max_iter
        )

    if kind in ("perturb_x", "perturb_both"):
        # evaluate the perturbed interpolant at the base grid through R^{-1}
        r_inv = np.interp(base.grid, x_star, spec.nodes)
        depth = _unroll_depth(factor_spec.alpha_max)
        star_lo, star_hi = solver.unroll_profiles(
            factor_spec, r_inv, depth, base=factor_phi
        )
        observed = float(
            max(
                np.max(np.abs(star_lo - base.los)),
                np.max(np.abs(star_hi - base.his)),
            )
        )
    else:
        observed = solver.metric_D(base, factor_phi)

    slack = 10.0 * tol
    return StabilityReport(
        kind=kind,
        perturbation_size=float(size),
        theoretical_bound=float(bound),
        observed_D=observed,
        margin=float(bound) + slack - observed,
        slack=slack,
    )


def run_perturbation_suite(
    spec: RifsSpec,
    kinds=PERTURBATION_KINDS,
    sizes=(1e-1, 1e-2, 1e-3),
    seed: int = 0,
    workers: int | None = None,
    **solver_kwargs,
) -> list[StabilityReport]:
    """All (kind, size) experiments, sharing one base solve.

    Independent experiments may run on a thread pool; results are
    returned in deterministic (kind, size) order either way.
    """
    base, _ = solver.solve(spec, **{
        k: v for k, v in solver_kwargs.items()
        if k in ("grid_density", "tol", "max_iter")
    })
    jobs = [(kind, size) for kind in kinds for size in sizes]

    def run(job):
        kind, size = job
        return run_perturbation_experiment(
            spec, kind, size, seed=seed, base=base, **solver_kwargs
        )

    nworkers = solver._resolve_workers(workers)
    if nworkers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            return list(pool.map(run, jobs))
    return [run(job) for job in jobs]
