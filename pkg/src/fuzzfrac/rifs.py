"""Recurrent IFS construction over fuzzy data.

Given interpolation data (x_i, u_i) with fuzzy ordinates, an address map
assigning to each subinterval I_i = [x_{i-1}, x_i] a larger node-aligned
address interval [x_{s_i}, x_{e_i}], and vertical scaling factors
alpha_i in [0, 1), this module builds:

* the affine horizontal maps from address intervals onto subintervals,
* the fuzzy offset maps that pin the construction to the data,
* the row-stochastic transition matrix of the recurrent structure,
* the contraction certificate for the graph maps.

Index convention: subintervals and their maps are numbered 1..n as is
usual for interpolation schemes; node indices run 0..n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fuzzy
from .errors import (
    DanglingInterval,
    EndpointConditionsViolated,
    NotContractive,
    ScalingConditionsViolated,
    XOutOfDomain,
)
from .fuzzy import FuzzyNumber

#: Absolute slack for abscissa domain checks (absorbs float round-trip noise).
DOMAIN_TOL = 1e-9

#: Tolerance for the endpoint-matching self-check at build time.
ENDPOINT_TOL = 1e-10


@dataclass(frozen=True)
class FuzzyDataSet:
    """Interpolation data: strictly increasing abscissae, fuzzy ordinates.

    All ordinate profiles are resampled onto one shared level grid so
    that levelwise vector arithmetic is well defined; ``los``/``his``
    stack the profiles row-per-node.
    """

    xs: np.ndarray
    values: tuple[FuzzyNumber, ...]
    levels: np.ndarray
    los: np.ndarray
    his: np.ndarray

    @classmethod
    def from_points(cls, points) -> "FuzzyDataSet":
        pts = list(points)
        if len(pts) < 3:
            raise ValueError(f"need at least 3 data points, got {len(pts)}")
        xs = np.array([float(x) for x, _ in pts])
        if np.any(np.diff(xs) <= 0):
            raise ValueError("abscissae must be strictly increasing")
        grid = pts[0][1].levels
        for _, u in pts[1:]:
            grid = np.union1d(grid, u.levels)
        values = tuple(fuzzy.resample(u, grid) for _, u in pts)
        los = np.vstack([u.lo for u in values])
        his = np.vstack([u.hi for u in values])
        xs.setflags(write=False)
        los.setflags(write=False)
        his.setflags(write=False)
        return cls(xs=xs, values=values, levels=grid, los=los, his=his)

    @property
    def n(self) -> int:
        """Number of subintervals (one less than the number of points)."""
        return len(self.xs) - 1

    @property
    def points(self) -> list[tuple[float, FuzzyNumber]]:
        return list(zip(self.xs.tolist(), self.values))


@dataclass(frozen=True)
class AddressMap:
    """Per-subinterval address intervals given by node index pairs (s, e)."""

    s_idx: np.ndarray
    e_idx: np.ndarray

    @classmethod
    def from_pairs(cls, pairs) -> "AddressMap":
        s = np.array([int(a) for a, _ in pairs])
        e = np.array([int(b) for _, b in pairs])
        s.setflags(write=False)
        e.setflags(write=False)
        return cls(s_idx=s, e_idx=e)

    def validate(self, n: int) -> None:
        if len(self.s_idx) != n:
            raise ValueError(
                f"address map has {len(self.s_idx)} entries for {n} subintervals"
            )
        for i, (s, e) in enumerate(zip(self.s_idx, self.e_idx), start=1):
            if not (0 <= s < e <= n):
                raise ValueError(
                    f"address interval {i}: node indices ({s}, {e}) out of range 0..{n}"
                )
            if e - s < 2:
                raise ValueError(
                    f"address interval {i} must span at least two subintervals, "
                    f"got ({s}, {e})"
                )

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.s_idx.tolist(), self.e_idx.tolist()))


@dataclass(frozen=True)
class ScalingCheck:
    """Admissibility result for one subinterval's scaling factor.

    ``a1`` is levelwise length domination, ``a2``/``a3`` are the
    monotonicity requirements on the endpoint differences (read
    non-strictly).  A failing condition records the first offending
    level.
    """

    interval: int
    a1_ok: bool
    a1_lam: float | None
    a2_ok: bool
    a2_lam: float | None
    a3_ok: bool
    a3_lam: float | None

    @property
    def ok(self) -> bool:
        return self.a1_ok and self.a2_ok and self.a3_ok


@dataclass(frozen=True)
class ScalingReport:
    checks: tuple[ScalingCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[str]:
        out = []
        for c in self.checks:
            for name, okay, lam in (
                ("a1", c.a1_ok, c.a1_lam),
                ("a2", c.a2_ok, c.a2_lam),
                ("a3", c.a3_ok, c.a3_lam),
            ):
                if not okay:
                    out.append(
                        f"interval {c.interval}: condition ({name}) fails at "
                        f"level {lam:g}"
                    )
        return out


@dataclass(frozen=True)
class ContractionCertificate:
    """Contraction data for the graph maps in the weighted product metric.

    ``theta`` weights the fuzzy coordinate of the metric
    |x - y| + theta * d_inf(u, v); the certificate is valid for any
    theta in (0, theta_max).
    """

    theta_max: float
    theta: float
    c_w: np.ndarray

    @property
    def max_c_w(self) -> float:
        return float(np.max(self.c_w))


@dataclass(frozen=True)
class RifsSpec:
    """A validated recurrent IFS over a fuzzy data set.

    Immutable once built; all derived quantities (horizontal contraction
    ratios, offset-map Lipschitz bounds, transition matrix, connection
    sets, contraction certificate) are computed at build time.
    """

    data: FuzzyDataSet
    address: AddressMap
    alphas: np.ndarray
    c_l: np.ndarray
    L_q: np.ndarray
    M: np.ndarray
    a_counts: np.ndarray
    lambda_sets: tuple[tuple[int, ...], ...]
    theta_max: float
    theta: float
    c_w: np.ndarray

    @property
    def n(self) -> int:
        return self.data.n

    @property
    def nodes(self) -> np.ndarray:
        return self.data.xs

    @property
    def levels(self) -> np.ndarray:
        return self.data.levels

    @property
    def alpha_max(self) -> float:
        return float(np.max(self.alphas))


# ---------------------------------------------------------------------------
# interval bookkeeping


def interval_index(spec_or_nodes, xs):
    """Subinterval index (1-based) owning each abscissa.

    A shared node x_i belongs to interval i, the one ending there; the
    construction makes both candidate values agree at shared nodes, so
    the choice only fixes a convention.
    """
    nodes = (
        spec_or_nodes if isinstance(spec_or_nodes, np.ndarray) else spec_or_nodes.nodes
    )
    idx = np.searchsorted(nodes, xs, side="left")
    idx = np.clip(idx, 1, len(nodes) - 1)
    if np.isscalar(xs) or np.ndim(xs) == 0:
        return int(idx)
    return idx


def _check_index(spec: RifsSpec, i: int) -> None:
    if not 1 <= i <= spec.n:
        raise ValueError(f"interval index must be in 1..{spec.n}, got {i}")


def _address_bounds(spec: RifsSpec, i: int) -> tuple[float, float]:
    s, e = spec.address.s_idx[i - 1], spec.address.e_idx[i - 1]
    return float(spec.nodes[s]), float(spec.nodes[e])


def map_l(spec: RifsSpec, i: int, x: float) -> float:
    """Affine image of an address-interval point in subinterval i."""
    _check_index(spec, i)
    a, b = _address_bounds(spec, i)
    if not a - DOMAIN_TOL <= x <= b + DOMAIN_TOL:
        raise XOutOfDomain(
            f"x={x:g} outside address interval [{a:g}, {b:g}] of interval {i}"
        )
    return float(spec.nodes[i - 1] + spec.c_l[i - 1] * (x - a))


def map_l_inv(spec: RifsSpec, i: int, x: float) -> float:
    """Preimage in the address interval of a point of subinterval i."""
    _check_index(spec, i)
    lo, hi = float(spec.nodes[i - 1]), float(spec.nodes[i])
    if not lo - DOMAIN_TOL <= x <= hi + DOMAIN_TOL:
        raise XOutOfDomain(
            f"x={x:g} outside subinterval [{lo:g}, {hi:g}] (interval {i})"
        )
    a, _ = _address_bounds(spec, i)
    return float(a + (x - lo) / spec.c_l[i - 1])


def _map_l_inv_vec(spec: RifsSpec, idx: np.ndarray, xs: np.ndarray) -> np.ndarray:
    left = spec.nodes[idx - 1]
    starts = spec.nodes[spec.address.s_idx[idx - 1]]
    return starts + (xs - left) / spec.c_l[idx - 1]


# ---------------------------------------------------------------------------
# offset maps


def q_profiles(
    spec: RifsSpec, xs: np.ndarray, idx: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Offset-map profiles at many abscissae at once.

    For x in subinterval i with barycentric weight a = (x - x_{i-1}) /
    (x_i - x_{i-1}), the offset is the Hukuhara difference

        [a u_i + (1-a) u_{i-1}]  minus  alpha_i [a u_{e_i} + (1-a) u_{s_i}].

    The subtrahend's weight equals a because the horizontal map is
    affine and matches the address endpoints to the subinterval's.
    Returns stacked (lo, hi) arrays of shape (len(xs), levels).
    """
    xs = np.asarray(xs, dtype=float)
    idx = np.asarray(idx)
    nodes = spec.nodes
    width = nodes[idx] - nodes[idx - 1]
    a = (xs - nodes[idx - 1]) / width
    if np.any(a < -DOMAIN_TOL) or np.any(a > 1 + DOMAIN_TOL):
        k = int(np.argmax(np.maximum(-a, a - 1)))
        raise XOutOfDomain(
            f"x={xs[k]:g} outside subinterval {int(idx[k])} for the offset map"
        )
    a = np.clip(a, 0.0, 1.0)[:, None]

    los, his = spec.data.los, spec.data.his
    s_nodes = spec.address.s_idx[idx - 1]
    e_nodes = spec.address.e_idx[idx - 1]
    alpha = spec.alphas[idx - 1][:, None]

    main_lo = a * los[idx] + (1 - a) * los[idx - 1]
    main_hi = a * his[idx] + (1 - a) * his[idx - 1]
    sub_lo = alpha * (a * los[e_nodes] + (1 - a) * los[s_nodes])
    sub_hi = alpha * (a * his[e_nodes] + (1 - a) * his[s_nodes])

    return fuzzy.hukuhara_profiles(
        spec.levels, main_lo, main_hi, sub_lo, sub_hi, what="offset map"
    )


def q_map(spec: RifsSpec, i: int, x: float) -> FuzzyNumber:
    """The fuzzy offset at one abscissa of subinterval i."""
    _check_index(spec, i)
    lo, hi = float(spec.nodes[i - 1]), float(spec.nodes[i])
    if not lo - DOMAIN_TOL <= x <= hi + DOMAIN_TOL:
        raise XOutOfDomain(
            f"x={x:g} outside subinterval [{lo:g}, {hi:g}] (interval {i})"
        )
    qlo, qhi = q_profiles(spec, np.array([x]), np.array([i]))
    return FuzzyNumber(spec.levels, qlo[0], qhi[0])


def f_map(spec: RifsSpec, i: int, x: float, u: FuzzyNumber) -> FuzzyNumber:
    """Vertical map: scale the fuzzy argument and add the offset.

    ``x`` ranges over the address interval of subinterval i; the offset
    is taken at the mapped abscissa.
    """
    _check_index(spec, i)
    a, b = _address_bounds(spec, i)
    if not a - DOMAIN_TOL <= x <= b + DOMAIN_TOL:
        raise XOutOfDomain(
            f"x={x:g} outside address interval [{a:g}, {b:g}] of interval {i}"
        )
    mapped = map_l(spec, i, x)
    return fuzzy.add(
        fuzzy.scale(float(spec.alphas[i - 1]), u), q_map(spec, i, mapped)
    )


def lipschitz_q(spec: RifsSpec, i: int) -> float:
    """Lipschitz bound of the offset map on subinterval i.

    The offset endpoints are affine in x between values fixed by the
    data at membership levels 0 and 1, so the bound is a four-term
    maximum of endpoint differences divided by the subinterval width.
    """
    _check_index(spec, i)
    return float(spec.L_q[i - 1])


def _lipschitz_bounds(
    data: FuzzyDataSet, address: AddressMap, alphas: np.ndarray
) -> np.ndarray:
    los, his = data.los, data.his
    out = np.empty(data.n)
    for k in range(data.n):
        i = k + 1
        s, e = address.s_idx[k], address.e_idx[k]
        al = alphas[k]
        width = data.xs[i] - data.xs[i - 1]
        # endpoint differences at levels 1 and 0, crossed
        hi_terms = (
            abs((his[i, -1] - al * his[e, -1]) - (his[i - 1, 0] - al * his[s, 0])),
            abs((his[i, 0] - al * his[e, 0]) - (his[i - 1, -1] - al * his[s, -1])),
        )
        lo_terms = (
            abs((los[i, -1] - al * los[e, -1]) - (los[i - 1, 0] - al * los[s, 0])),
            abs((los[i, 0] - al * los[e, 0]) - (los[i - 1, -1] - al * los[s, -1])),
        )
        out[k] = max(*hi_terms, *lo_terms) / width
    return out


# ---------------------------------------------------------------------------
# admissibility of the scaling factors


def validate_scaling(spec: RifsSpec) -> ScalingReport:
    """Check the admissibility conditions for every subinterval.

    (a1) the data cut at each end of the subinterval is at least as wide
    as the scaled cut it must absorb, at every level; (a2)/(a3) the
    left/right endpoint differences are nondecreasing/nonincreasing in
    the level.  Monotonicity is non-strict: constant differences are
    admissible (and occur for natural data).
    """
    tol = fuzzy.MONOTONE_TOL
    levels = spec.levels
    los, his = spec.data.los, spec.data.his
    checks = []
    for k in range(spec.n):
        i = k + 1
        s, e = spec.address.s_idx[k], spec.address.e_idx[k]
        al = spec.alphas[k]

        def first_bad(mask) -> float | None:
            idx = np.flatnonzero(mask)
            return float(levels[idx[0]]) if idx.size else None

        len_im1 = his[i - 1] - los[i - 1]
        len_i = his[i] - los[i]
        bad_a1 = (len_im1 < al * (his[s] - los[s]) - tol) | (
            len_i < al * (his[e] - los[e]) - tol
        )
        a1_lam = first_bad(bad_a1)

        d_start = np.diff(los[i - 1] - al * los[s])
        d_end = np.diff(los[i] - al * los[e])
        bad_a2 = (d_start < -tol) | (d_end < -tol)
        a2_lam = first_bad(bad_a2)

        d_start = np.diff(his[i - 1] - al * his[s])
        d_end = np.diff(his[i] - al * his[e])
        bad_a3 = (d_start > tol) | (d_end > tol)
        a3_lam = first_bad(bad_a3)

        checks.append(
            ScalingCheck(
                interval=i,
                a1_ok=a1_lam is None,
                a1_lam=a1_lam,
                a2_ok=a2_lam is None,
                a2_lam=a2_lam,
                a3_ok=a3_lam is None,
                a3_lam=a3_lam,
            )
        )
    return ScalingReport(checks=tuple(checks))


# ---------------------------------------------------------------------------
# recurrent structure


def _connection(n: int, address: AddressMap) -> tuple[np.ndarray, np.ndarray, tuple]:
    """Transition matrix, coverage counts, and connection sets.

    Row s lists the intervals t whose address interval contains I_s,
    each with probability 1/a_s where a_s is the number of such t.
    """
    M = np.zeros((n, n))
    a_counts = np.zeros(n, dtype=int)
    for srow in range(1, n + 1):
        covers = [
            t
            for t in range(1, n + 1)
            if address.s_idx[t - 1] <= srow - 1 and srow <= address.e_idx[t - 1]
        ]
        if not covers:
            raise DanglingInterval(
                f"subinterval {srow} is contained in no address interval"
            )
        a_counts[srow - 1] = len(covers)
        for t in covers:
            M[srow - 1, t - 1] = 1.0 / len(covers)
    lambda_sets = tuple(
        tuple(range(int(address.s_idx[k]) + 1, int(address.e_idx[k]) + 1))
        for k in range(n)
    )
    return M, a_counts, lambda_sets


def build_matrix(spec: RifsSpec) -> tuple[np.ndarray, tuple[tuple[int, ...], ...]]:
    """Row-stochastic transition matrix and connection sets of the spec."""
    M, _, lam = _connection(spec.n, spec.address)
    return M, lam


def check_irreducible(M: np.ndarray) -> bool:
    """True iff the nonzero pattern's digraph is strongly connected."""
    A = np.asarray(M) > 0
    n = A.shape[0]

    def reaches_all(adj: np.ndarray) -> bool:
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        frontier = [0]
        while frontier:
            nxt = []
            for v in frontier:
                for w in np.flatnonzero(adj[v]):
                    if not seen[w]:
                        seen[w] = True
                        nxt.append(int(w))
            frontier = nxt
        return bool(seen.all())

    return reaches_all(A) and reaches_all(A.T)


def contraction_certificate(spec: RifsSpec) -> ContractionCertificate:
    """Contraction coefficients of the graph maps for the stored theta.

    Each graph map contracts the weighted product metric by
    max(c_l * (1 + theta * L_q), alpha); all coefficients must be < 1,
    which holds whenever theta < theta_max.
    """
    c_w = np.maximum(spec.c_l * (1.0 + spec.theta * spec.L_q), spec.alphas)
    if np.any(c_w >= 1.0):
        k = int(np.argmax(c_w))
        raise NotContractive(
            f"graph map {k + 1} has contraction coefficient {c_w[k]:g} >= 1 "
            f"(theta={spec.theta:g}, theta_max={spec.theta_max:g})"
        )
    return ContractionCertificate(
        theta_max=spec.theta_max, theta=spec.theta, c_w=c_w
    )


# ---------------------------------------------------------------------------
# assembly


def build_rifs(
    data: FuzzyDataSet,
    address: AddressMap,
    alphas,
    theta: float | None = None,
    validate: bool = True,
) -> RifsSpec:
    """Assemble and validate a recurrent IFS over the data.

    ``theta`` defaults to half the largest value for which the
    contraction certificate applies.  With ``validate`` set, the scaling
    admissibility conditions and the endpoint-matching identities are
    checked and a violation raises; with it unset the spec is still
    fully derived, so individual checks can be re-run for reporting.
    """
    n = data.n
    address.validate(n)
    alphas = np.asarray(alphas, dtype=float)
    if alphas.shape != (n,):
        raise ValueError(f"expected {n} scaling factors, got shape {alphas.shape}")
    if np.any(alphas < 0) or np.any(alphas >= 1):
        raise ValueError("scaling factors must lie in [0, 1)")

    widths = np.diff(data.xs)
    spans = data.xs[address.e_idx] - data.xs[address.s_idx]
    c_l = widths / spans
    if np.any(c_l >= 1.0):
        k = int(np.argmax(c_l))
        raise NotContractive(
            f"horizontal map {k + 1} is not contractive: ratio {c_l[k]:g} >= 1"
        )

    M, a_counts, lambda_sets = _connection(n, address)
    L_q = _lipschitz_bounds(data, address, alphas)

    steep = np.max(L_q * c_l)
    theta_max = float((1.0 - np.max(c_l)) / steep) if steep > 0 else np.inf
    if theta is None:
        theta = theta_max / 2.0 if np.isfinite(theta_max) else 1.0
    if theta <= 0:
        raise ValueError(f"theta must be positive, got {theta}")

    c_w = np.maximum(c_l * (1.0 + theta * L_q), alphas)
    if np.any(c_w >= 1.0):
        k = int(np.argmax(c_w))
        raise NotContractive(
            f"graph map {k + 1} has contraction coefficient {c_w[k]:g} >= 1; "
            f"choose theta below {theta_max:g}"
        )

    for arr in (alphas, c_l, L_q, M, a_counts, c_w):
        arr.setflags(write=False)

    spec = RifsSpec(
        data=data,
        address=address,
        alphas=alphas,
        c_l=c_l,
        L_q=L_q,
        M=M,
        a_counts=a_counts,
        lambda_sets=lambda_sets,
        theta_max=theta_max,
        theta=float(theta),
        c_w=c_w,
    )

    if validate:
        report = validate_scaling(spec)
        if not report.ok:
            raise ScalingConditionsViolated(
                "inadmissible scaling factors: " + "; ".join(report.failures()),
                report=report,
            )
        _check_endpoint_conditions(spec)
    return spec


def _check_endpoint_conditions(spec: RifsSpec) -> None:
    """Verify the maps reproduce the data at the address endpoints."""
    for i in range(1, spec.n + 1):
        s, e = spec.address.s_idx[i - 1], spec.address.e_idx[i - 1]
        left = f_map(spec, i, float(spec.nodes[s]), spec.data.values[s])
        right = f_map(spec, i, float(spec.nodes[e]), spec.data.values[e])
        err = max(
            fuzzy.d_inf(left, spec.data.values[i - 1]),
            fuzzy.d_inf(right, spec.data.values[i]),
        )
        if err > ENDPOINT_TOL:
            raise EndpointConditionsViolated(
                f"interval {i}: endpoint matching off by {err:g}"
            )
