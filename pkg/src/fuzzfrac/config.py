"""Problem configurations: JSON schema, loading, bundled example.

Schema (all keys at the top level of one JSON object):

    data              list of {"x": real, "u": ordinate}; an ordinate is
                      either [center, left_spread, right_spread] for a
                      triangular fuzzy number or
                      {"breakpoints": [[level, lo, hi], ...]} for an
                      explicit profile (levels 0 and 1 required)
    address           list of [s, e] node-index pairs, one per
                      subinterval, each spanning at least two
                      subintervals (e - s >= 2)
    alphas            list of vertical scaling factors in [0, 1)
    lambda_grid_size  cells in the membership-level grid (default 64)
    grid_density      solver grid cells per subinterval (default 64)
    tol               solver tolerance (default 1e-8)
    max_iter          solver iteration cap (default 10000)
    seed              seed for randomized commands (default 0)
    lambdas           levels exported/plotted (default [0.5, 0.75, 1.0])
    plot              {"width": px, "height": px} (default 900 x 600)

Structural problems raise ConfigParseError naming the offending field;
domain problems (ordering, admissibility) surface when building the
spec.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources

from . import fuzzy
from .errors import ConfigParseError
from .fuzzy import FuzzyNumber
from .rifs import AddressMap, FuzzyDataSet, RifsSpec, build_rifs

_MISSING = object()


def _take(obj: dict, key: str, kinds, where: str, default=_MISSING):
    if key not in obj:
        if default is _MISSING:
            raise ConfigParseError(f"missing required field {key!r}", where)
        return default
    val = obj[key]
    if kinds is not None and not isinstance(val, kinds):
        names = (
            kinds.__name__
            if isinstance(kinds, type)
            else "/".join(k.__name__ for k in kinds)
        )
        raise ConfigParseError(
            f"expected {names}, got {type(val).__name__}", f"{where}.{key}"
        )
    return val


def _parse_ordinate(raw, grid_size: int, where: str) -> FuzzyNumber:
    if isinstance(raw, list):
        if len(raw) != 3 or not all(isinstance(v, (int, float)) for v in raw):
            raise ConfigParseError(
                "triangular ordinate must be [center, left_spread, right_spread]",
                where,
            )
        try:
            return fuzzy.make_triangular(raw[0], raw[1], raw[2], grid_size)
        except Exception as exc:
            raise ConfigParseError(str(exc), where) from exc
    if isinstance(raw, dict):
        pts = _take(raw, "breakpoints", list, where)
        try:
            return fuzzy.from_breakpoints(pts, grid_size=grid_size)
        except (ValueError, TypeError) as exc:
            raise ConfigParseError(str(exc), f"{where}.breakpoints") from exc
    raise ConfigParseError(
        "ordinate must be a [c, l, r] list or a breakpoints object", where
    )


@dataclass(frozen=True)
class ProblemConfig:
    """Everything one run needs: data, structure, and solver knobs."""

    points: tuple[tuple[float, FuzzyNumber], ...]
    address_pairs: tuple[tuple[int, int], ...]
    alphas: tuple[float, ...]
    lambda_grid_size: int = fuzzy.DEFAULT_GRID_SIZE
    grid_density: int = 64
    tol: float = 1e-8
    max_iter: int = 10000
    seed: int = 0
    lambdas: tuple[float, ...] = (0.5, 0.75, 1.0)
    plot_width: int = 900
    plot_height: int = 600

    @classmethod
    def from_dict(cls, raw: dict, where: str = "config") -> "ProblemConfig":
        if not isinstance(raw, dict):
            raise ConfigParseError("top level must be a JSON object", where)
        grid_size = int(_take(raw, "lambda_grid_size", int, where, 64))
        if grid_size < 1:
            raise ConfigParseError(
                "lambda_grid_size must be >= 1", f"{where}.lambda_grid_size"
            )

        data_raw = _take(raw, "data", list, where)
        points = []
        for k, entry in enumerate(data_raw):
            ewhere = f"{where}.data[{k}]"
            if not isinstance(entry, dict):
                raise ConfigParseError("data entry must be an object", ewhere)
            x = _take(entry, "x", (int, float), ewhere)
            u = _parse_ordinate(
                _take(entry, "u", None, ewhere), grid_size, f"{ewhere}.u"
            )
            points.append((float(x), u))

        addr_raw = _take(raw, "address", list, where)
        pairs = []
        for k, entry in enumerate(addr_raw):
            awhere = f"{where}.address[{k}]"
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(v, int) for v in entry)
            ):
                raise ConfigParseError(
                    "address entry must be a [s, e] pair of node indices", awhere
                )
            pairs.append((entry[0], entry[1]))

        alphas_raw = _take(raw, "alphas", list, where)
        if not all(isinstance(v, (int, float)) for v in alphas_raw):
            raise ConfigParseError("alphas must be numbers", f"{where}.alphas")

        lambdas_raw = _take(raw, "lambdas", list, where, [0.5, 0.75, 1.0])
        if not all(isinstance(v, (int, float)) for v in lambdas_raw):
            raise ConfigParseError("lambdas must be numbers", f"{where}.lambdas")

        plot = _take(raw, "plot", dict, where, {})
        width = int(_take(plot, "width", int, f"{where}.plot", 900))
        height = int(_take(plot, "height", int, f"{where}.plot", 600))

        known = {
            "data", "address", "alphas", "lambda_grid_size", "grid_density",
            "tol", "max_iter", "seed", "lambdas", "plot",
        }
        for key in raw:
            if key not in known:
                raise ConfigParseError(f"unknown field {key!r}", where)

        return cls(
            points=tuple(points),
            address_pairs=tuple(pairs),
            alphas=tuple(float(a) for a in alphas_raw),
            lambda_grid_size=grid_size,
            grid_density=int(_take(raw, "grid_density", int, where, 64)),
            tol=float(_take(raw, "tol", (int, float), where, 1e-8)),
            max_iter=int(_take(raw, "max_iter", int, where, 10000)),
            seed=int(_take(raw, "seed", int, where, 0)),
            lambdas=tuple(float(v) for v in lambdas_raw),
            plot_width=width,
            plot_height=height,
        )

    def dataset(self) -> FuzzyDataSet:
        return FuzzyDataSet.from_points(self.points)

    def address(self) -> AddressMap:
        return AddressMap.from_pairs(self.address_pairs)

    def build(self, validate: bool = True) -> RifsSpec:
        return build_rifs(
            self.dataset(), self.address(), list(self.alphas), validate=validate
        )

    def override(self, **kwargs) -> "ProblemConfig":
        """Copy with some fields replaced (used by CLI flags).

        Changing the level grid resamples the ordinates onto the new
        uniform grid, which is exact for piecewise-linear profiles whose
        breakpoints are grid levels (triangular ones in particular).
        """
        new_grid = kwargs.get("lambda_grid_size")
        if new_grid is not None and new_grid != self.lambda_grid_size:
            levels = fuzzy.uniform_levels(new_grid)
            kwargs["points"] = tuple(
                (x, fuzzy.resample(u, levels)) for x, u in self.points
            )
        return replace(self, **kwargs)


def load_config(path: str) -> ProblemConfig:
    """Parse a configuration file, reporting errors with file context."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigParseError(str(exc), path) from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            path,
        ) from exc
    return ProblemConfig.from_dict(raw, where=path)


def example_config() -> ProblemConfig:
    """The bundled five-point triangular example configuration."""
    text = resources.files("fuzzfrac").joinpath("data/example2.json").read_text()
    return ProblemConfig.from_dict(json.loads(text), where="example2")
