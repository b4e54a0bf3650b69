"""Shared test utilities: independent oracles and random generators.

The oracles here deliberately avoid the library's sampled-grid solver:
the metric oracle works from closed-form triangular endpoint lines on a
dense level sweep, and the recursion oracle unrolls the interpolation
functional equation pointwise with plain FuzzyNumber arithmetic.
"""

from __future__ import annotations

import bisect

import numpy as np

from fuzzfrac import (
    AddressMap,
    FuzzyDataSet,
    FuzzyNumber,
    add,
    build_rifs,
    make_triangular,
    map_l_inv,
    q_map,
    scale,
    uniform_levels,
)


# ---------------------------------------------------------------------------
# metric oracle for triangular numbers


def tri_endpoints(center, left, right, lam):
    """Closed-form cut endpoints of a triangular number."""
    return center - left * (1.0 - lam), center + right * (1.0 - lam)


def d_inf_triangular_oracle(a, b, samples: int = 100_001) -> float:
    """Brute-force sup metric between triangulars over a dense level sweep."""
    lams = np.linspace(0.0, 1.0, samples)
    alo, ahi = tri_endpoints(*a, lams)
    blo, bhi = tri_endpoints(*b, lams)
    return float(max(np.max(np.abs(alo - blo)), np.max(np.abs(ahi - bhi))))


# ---------------------------------------------------------------------------
# pointwise recursion oracle


def recursion_oracle(spec, x: float, depth: int) -> FuzzyNumber:
    """Unroll the functional equation at one abscissa.

    Seeded by the piecewise-linear data interpolant; after ``depth``
    unrolls the remaining error is (max alpha)^depth times the seed's
    distance from the fixed point.  Interval lookup uses bisect, not the
    solver's grid machinery.
    """
    nodes = spec.nodes.tolist()
    if depth == 0:
        i = min(max(bisect.bisect_left(nodes, x), 1), len(nodes) - 1)
        t = (x - nodes[i - 1]) / (nodes[i] - nodes[i - 1])
        t = min(max(t, 0.0), 1.0)
        return add(
            scale(1.0 - t, spec.data.values[i - 1]), scale(t, spec.data.values[i])
        )
    i = min(max(bisect.bisect_left(nodes, x), 1), len(nodes) - 1)
    inner = recursion_oracle(spec, map_l_inv(spec, i, x), depth - 1)
    return add(scale(float(spec.alphas[i - 1]), inner), q_map(spec, i, x))


# ---------------------------------------------------------------------------
# random fuzzy numbers


def random_triangular(rng: np.random.Generator, grid_size: int = 16) -> FuzzyNumber:
    return make_triangular(
        rng.uniform(-10, 10), rng.uniform(0, 5), rng.uniform(0, 5), grid_size
    )


def random_trapezoidal(rng: np.random.Generator, grid_size: int = 16) -> FuzzyNumber:
    levels = uniform_levels(grid_size)
    a = rng.uniform(-10, 10)
    b = a + rng.uniform(0, 4)
    l, r = rng.uniform(0, 5), rng.uniform(0, 5)
    return FuzzyNumber(levels, a - l * (1 - levels), b + r * (1 - levels))


def random_fuzzy(rng: np.random.Generator, grid_size: int = 16) -> FuzzyNumber:
    if rng.random() < 0.5:
        return random_triangular(rng, grid_size)
    return random_trapezoidal(rng, grid_size)


def random_interpolating(spec, grid, rng: np.random.Generator):
    """A random interpolating sampled function on the given grid.

    Deforms the data interpolant by stretch and shift fields that vanish
    at the data nodes, so node values (and hence membership in the
    interpolating class) are preserved exactly.
    """
    from fuzzfrac import node_interpolant

    f0 = node_interpolant(spec.data, grid)
    dist = np.min(np.abs(grid[:, None] - spec.nodes[None, :]), axis=1)
    w = dist / dist.max()
    shift = rng.uniform(-2, 2) * w + rng.uniform(-1, 1) * w**2
    stretch = 1.0 + rng.uniform(-0.4, 0.4) * w
    los = stretch[:, None] * f0.los + shift[:, None]
    his = stretch[:, None] * f0.his + shift[:, None]
    return f0.with_profiles(los, his)


# ---------------------------------------------------------------------------
# random admissible configurations


def _alpha_limit(spreads: np.ndarray, i: int, s: int, e: int) -> float:
    """Largest scaling factor admissible on subinterval i (1-based)."""
    l, r = spreads[:, 0], spreads[:, 1]
    ratios = []
    for data_node, addr_node in ((i - 1, s), (i, e)):
        ratios.append((l[data_node] + r[data_node]) / (l[addr_node] + r[addr_node]))
        ratios.append(l[data_node] / l[addr_node])
        ratios.append(r[data_node] / r[addr_node])
    return min(ratios)


def random_admissible_spec(rng: np.random.Generator, grid_size: int = 16):
    """A random data set + address structure + admissible scaling factors.

    Retries until the address intervals cover every subinterval, every
    horizontal map contracts, and the transition matrix is irreducible.
    """
    from fuzzfrac import check_irreducible
    from fuzzfrac.errors import FuzzFracError

    while True:
        n = int(rng.integers(3, 7))
        gaps = rng.uniform(0.4, 1.6, n)
        x0 = rng.uniform(-2.0, 1.0)
        xs = np.concatenate([[x0], x0 + np.cumsum(gaps)])

        pairs = []
        for _ in range(n):
            s = int(rng.integers(0, n - 1))
            e = int(rng.integers(s + 2, n + 1))
            pairs.append((s, e))

        centers = rng.uniform(-5, 5, n + 1)
        spreads = rng.uniform(0.1, 2.0, (n + 1, 2))
        values = [
            make_triangular(c, sp[0], sp[1], grid_size)
            for c, sp in zip(centers, spreads)
        ]

        alphas = []
        for i in range(1, n + 1):
            s, e = pairs[i - 1]
            limit = min(0.95, _alpha_limit(spreads, i, s, e))
            alphas.append(limit * rng.uniform(0.05, 0.9))

        try:
            data = FuzzyDataSet.from_points(list(zip(xs, values)))
            spec = build_rifs(data, AddressMap.from_pairs(pairs), alphas)
        except (FuzzFracError, ValueError):
            continue
        if not check_irreducible(spec.M):
            continue
        return spec
