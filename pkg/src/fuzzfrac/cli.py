"""Command-line front end.

Subcommands: validate | solve | plot | analyze | perturb.  All commands
read one JSON problem configuration (default: the bundled example) and
are deterministic given (config, seed): repeated runs write byte-equal
outputs.  Exit codes: 0 success, 1 domain or validation failure,
2 usage or configuration parse failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import analysis, rifs, solver
from .config import ProblemConfig, example_config, load_config
from .errors import ConfigParseError, FuzzFracError
from .svgfig import Figure

#: Level -> stroke color for the standard exported levels.
LEVEL_COLORS = {0.5: "#d62728", 0.75: "#2ca02c", 1.0: "#1f77b4"}
_EXTRA_COLORS = ("#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")


def _num(v: float) -> str:
    return format(float(v), ".17g")


def _write_csv(path: str, columns) -> None:
    names = [name for name, _ in columns]
    rows = zip(*[vals for _, vals in columns])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(names) + "\n")
        for row in rows:
            fh.write(",".join(_num(v) for v in row) + "\n")


def _load(args: argparse.Namespace) -> ProblemConfig:
    cfg = (
        example_config()
        if args.config in (None, "example2")
        else load_config(args.config)
    )
    overrides = {}
    if getattr(args, "tol", None) is not None:
        overrides["tol"] = args.tol
    if getattr(args, "grid_density", None) is not None:
        overrides["grid_density"] = args.grid_density
    if getattr(args, "lambda_grid", None) is not None:
        overrides["lambda_grid_size"] = args.lambda_grid
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "lambdas", None):
        overrides["lambdas"] = tuple(
            float(v) for v in args.lambdas.split(",") if v.strip()
        )
    return cfg.override(**overrides) if overrides else cfg


def _outdir(args: argparse.Namespace) -> str:
    out = args.out or "out"
    os.makedirs(out, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# validate


def cmd_validate(args: argparse.Namespace) -> int:
    cfg = _load(args)
    checks: list[tuple[str, bool, str]] = []

    def record(name: str, ok: bool, detail: str = "") -> None:
        checks.append((name, ok, detail))

    spec = None
    try:
        spec = cfg.build(validate=False)
        record("dataset", True, f"{spec.n + 1} points on [{spec.nodes[0]:g}, {spec.nodes[-1]:g}]")
        record(
            "horizontal contraction",
            True,
            "c_l = " + ", ".join(f"{c:.6g}" for c in spec.c_l),
        )
    except (FuzzFracError, ValueError) as exc:
        record("construction", False, str(exc))

    if spec is not None:
        report = rifs.validate_scaling(spec)
        detail = "all admissible" if report.ok else "; ".join(report.failures())
        record("scaling conditions (a1)-(a3)", report.ok, detail)

        record(
            "offset Lipschitz bounds",
            True,
            "L = " + ", ".join(f"{v:.6g}" for v in spec.L_q),
        )

        rows_ok = bool(np.allclose(spec.M.sum(axis=1), 1.0, atol=1e-12))
        record(
            "transition matrix rows sum to 1",
            rows_ok,
            "M = " + "; ".join("[" + ", ".join(f"{v:.6g}" for v in row) + "]" for row in spec.M),
        )
        irr = rifs.check_irreducible(spec.M)
        unreachable = ""
        if not irr:
            reach = _reachable_from(spec.M, 0)
            missing = [str(i + 1) for i in range(spec.n) if not reach[i]]
            unreachable = (
                "unreachable interval indices: " + ", ".join(missing)
                if missing
                else "some interval cannot reach interval 1"
            )
        record("transition matrix irreducible", irr, unreachable)

        try:
            cert = rifs.contraction_certificate(spec)
            record(
                "contraction certificate",
                True,
                f"theta_max = {cert.theta_max:.6g}, theta = {cert.theta:.6g}, "
                "c_w = " + ", ".join(f"{v:.6g}" for v in cert.c_w),
            )
        except FuzzFracError as exc:
            record("contraction certificate", False, str(exc))

        try:
            rifs._check_endpoint_conditions(spec)
            record("endpoint matching", True, "data reproduced at address endpoints")
        except FuzzFracError as exc:
            record("endpoint matching", False, str(exc))

        if not report.ok:
            record("offset maps well defined", False, "scaling conditions failed")

    all_ok = all(ok for _, ok, _ in checks)
    for name, ok, detail in checks:
        tag = "PASS" if ok else "FAIL"
        line = f"[{tag}] {name}"
        if detail:
            line += f": {detail}"
        print(line)
    print("validation " + ("passed" if all_ok else "failed"))
    return 0 if all_ok else 1


def _reachable_from(M: np.ndarray, start: int) -> np.ndarray:
    adj = np.asarray(M) > 0
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[start] = True
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for w in np.flatnonzero(adj[v]):
                if not seen[w]:
                    seen[w] = True
                    nxt.append(int(w))
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# solve


def _solve_from_config(cfg: ProblemConfig):
    spec = cfg.build()
    phi, report = solver.solve(
        spec,
        grid_density=cfg.grid_density,
        tol=cfg.tol,
        max_iter=cfg.max_iter,
    )
    return spec, phi, report


def cmd_solve(args: argparse.Namespace) -> int:
    cfg = _load(args)
    out = _outdir(args)
    spec, phi, report = _solve_from_config(cfg)

    table = solver.export_level_sets(phi, cfg.lambdas)
    csv_path = os.path.join(out, "solution.csv")
    _write_csv(csv_path, table.columns())

    report_path = os.path.join(out, "iteration_report.txt")
    lines = [
        f"iterations: {report.iterations}",
        f"alpha (contraction factor): {_num(report.alpha)}",
        f"final residual: {_num(report.final_residual)}",
        f"a-posteriori error bound: {_num(report.a_posteriori_error)}",
        "successive distances:",
    ]
    lines += [f"  {k + 1}: {_num(d)}" for k, d in enumerate(report.successive_D)]
    with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")

    print(f"wrote {csv_path}")
    print(f"wrote {report_path}")
    return 0


# ---------------------------------------------------------------------------
# plot


def _color_for(lam: float, fallback: list) -> str:
    if lam in LEVEL_COLORS:
        return LEVEL_COLORS[lam]
    return fallback.pop(0) if fallback else "#17becf"


def cmd_plot(args: argparse.Namespace) -> int:
    cfg = _load(args)
    out = _outdir(args)
    spec, phi, _ = _solve_from_config(cfg)

    table = solver.export_level_sets(phi, cfg.lambdas)
    lo0, hi0 = phi.los[:, 0], phi.his[:, 0]
    ymin = float(min(lo0.min(), min(c.min() for c in table.lowers)))
    ymax = float(max(hi0.max(), max(c.max() for c in table.uppers)))
    pad = 0.05 * (ymax - ymin or 1.0)
    xlim = (float(phi.grid[0]), float(phi.grid[-1]))
    ylim = (ymin - pad, ymax + pad)

    fig = Figure(cfg.plot_width, cfg.plot_height, xlim, ylim, "level curves")
    extras = list(_EXTRA_COLORS)
    for lam, lower, upper in zip(table.lambdas, table.lowers, table.uppers):
        color = _color_for(lam, extras)
        fig.polyline(phi.grid, lower, color)
        fig.polyline(phi.grid, upper, color)
        fig.add_legend(f"level {lam:g}", color)
    level_path = os.path.join(out, "level_sets.svg")
    with open(level_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(fig.to_svg())

    fig2 = Figure(cfg.plot_width, cfg.plot_height, xlim, ylim, "fuzzy graph")
    fig2.band(phi.grid, lo0, hi0, "#1f77b4", opacity=0.3)
    fig2.polyline(phi.grid, phi.los[:, -1], "#1f77b4", width=2.0)
    fig2.add_legend("support band", "#9ecae1")
    fig2.add_legend("core", "#1f77b4")
    band_path = os.path.join(out, "graph_band.svg")
    with open(band_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(fig2.to_svg())

    print(f"wrote {level_path}")
    print(f"wrote {band_path}")
    return 0


# ---------------------------------------------------------------------------
# analyze


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _load(args)
    spec, phi, report = _solve_from_config(cfg)

    hp = analysis.holder_params(spec)
    bound0 = analysis.a_priori_norm_bound(spec)
    observed0 = float(max(np.max(np.abs(phi.los)), np.max(np.abs(phi.his))))
    check = analysis.verify_holder(
        phi, hp, num_pairs=10_000, seed=cfg.seed, slack=10 * cfg.tol
    )

    print(f"roughness ratio delta: {hp.delta:.6g} ({hp.case})")
    print(f"Holder exponent tau: {hp.tau:.6g}")
    print(f"Holder constant Q: {hp.Q:.6g} (modulus coefficient H = 2Q = {hp.H:.6g})")
    print(f"a-priori norm bound: {bound0:.6g} (observed distance from zero: {observed0:.6g})")
    print(
        f"empirical modulus check: {check.num_pairs} pairs, "
        f"worst ratio {check.worst_ratio:.6g} vs H = {hp.H:.6g}, "
        f"violations beyond slack: {check.violations}"
    )
    ok = check.passed and observed0 <= bound0 + 10 * cfg.tol
    print("analysis " + ("passed" if ok else "failed"))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# perturb


def cmd_perturb(args: argparse.Namespace) -> int:
    cfg = _load(args)
    out = _outdir(args)
    spec = cfg.build()
    report = analysis.run_perturbation_experiment(
        spec,
        args.kind,
        args.size,
        seed=cfg.seed,
        grid_density=cfg.grid_density,
        tol=cfg.tol,
        max_iter=cfg.max_iter,
    )
    path = os.path.join(out, "stability_report.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("kind,size,theoretical_bound,observed_D,margin\n")
        fh.write(
            ",".join(
                [
                    report.kind,
                    _num(report.perturbation_size),
                    _num(report.theoretical_bound),
                    _num(report.observed_D),
                    _num(report.margin),
                ]
            )
            + "\n"
        )
    print(
        f"{report.kind} size={report.perturbation_size:g}: "
        f"bound {report.theoretical_bound:.6g}, observed {report.observed_D:.6g}, "
        f"margin {report.margin:.6g}"
    )
    print(f"wrote {path}")
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzfrac",
        description=(
            "Fuzzy-valued recurrent fractal interpolation: build, solve, "
            "plot, and certify."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--config",
            default=None,
            help="problem configuration JSON ('example2' or omitted = bundled example)",
        )
        p.add_argument("--tol", type=float, default=None, help="solver tolerance")
        p.add_argument(
            "--grid-density", type=int, default=None, help="grid cells per subinterval"
        )
        p.add_argument(
            "--lambda-grid", type=int, default=None, help="membership-level grid cells"
        )
        p.add_argument("--seed", type=int, default=None, help="randomization seed")
        p.add_argument(
            "--lambdas", default=None, help="comma-separated export levels"
        )
        p.add_argument("--out", default=None, help="output directory (default: out)")

    for name, fn in (
        ("validate", cmd_validate),
        ("solve", cmd_solve),
        ("plot", cmd_plot),
        ("analyze", cmd_analyze),
        ("perturb", cmd_perturb),
    ):
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(fn=fn)

    sub.choices["perturb"].add_argument(
        "--kind",
        required=True,
        choices=analysis.PERTURBATION_KINDS,
        help="which coordinates to perturb",
    )
    sub.choices["perturb"].add_argument(
        "--size", type=float, required=True, help="perturbation magnitude"
    )
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigParseError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (FuzzFracError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
