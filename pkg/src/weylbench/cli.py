"""Command-line front end for reproducible verification runs.

Exit codes: 0 all asserted checks pass, 1 at least one tolerance assertion
failed, 2 usage or input error.  Identical invocations produce byte-identical
reports (seeded randomness, no timestamps).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bounds import (
    berger_component_bound,
    constants,
    cubic_bound_eval,
    eigen_bound,
    gap_verdict_integral,
    pinch_verdict_dim4,
    pinch_verdict_norm,
    pinch_verdict_pointwise,
    wcubic_closed_form,
    wcubic_oracle,
)
from .chart import GridSpec, curvature_field, grid_file_metric, identity_residual_report, preset_metric
from .dim4 import berger_normal_form, det_identities, split_self_dual
from .models import model_curvature, package_consistency, parse_model_spec, symmetric_space_identity_report
from .report import render
from .sampling import random_traceless_symmetric, random_weyl
from .serialization import operator_from_dict
from .suite import run_identity_suite
from .tensors import EPS_ALG, EPS_NF, CurvatureTensor, bianchi_residual

DEFAULT_TOLERANCES = {
    "eps_alg": EPS_ALG,
    "eps_nf": EPS_NF,
    "chart_zero": 1e-12,
    "oracle_low": 1e-4,
    "oracle_high": 1e-9,
}


def _base_report(args: argparse.Namespace, tols: dict) -> dict:
    return {
        "command": args.command,
        "config": {
            "seed": getattr(args, "seed", None),
            "trials": getattr(args, "trials", None),
            "format": args.format,
            "tolerances": dict(sorted(tols.items())),
            "versions": {"weylbench": __version__, "numpy": np.__version__},
        },
        "results": {},
        "failures": [],
    }


def _finish(report: dict, args: argparse.Namespace) -> int:
    report["passed"] = not report["failures"]
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["passed"] else 1


def _parse_tols(pairs: list[str]) -> dict:
    tols = dict(DEFAULT_TOLERANCES)
    for pair in pairs or []:
        if "=" not in pair:
            raise ValueError(f"bad tolerance override {pair!r}, expected name=value")
        name, value = pair.split("=", 1)
        if name not in tols:
            raise ValueError(f"unknown tolerance {name!r}")
        tols[name] = float(value)
    return tols


def _check(report: dict, name: str, value: float, bound: float) -> None:
    report["results"][name] = value
    if not (abs(value) <= bound):
        report["failures"].append(name)


def cmd_identities(args, tols) -> int:
    report = _base_report(args, tols)
    dims = tuple(int(d) for d in args.n) if args.n else (4, 5, 6, 7, 8)
    suite = run_identity_suite(dimensions=dims, trials=args.trials, seed=args.seed,
                               tolerance=tols["eps_alg"], workers=args.workers)
    report["results"]["residuals"] = dict(sorted(suite.residuals.items()))
    report["results"]["reported_stats"] = dict(sorted(suite.stats.items()))
    report["failures"] = sorted(suite.failures())
    return _finish(report, args)


def cmd_model(args, tols) -> int:
    report = _base_report(args, tols)
    spec = parse_model_spec(args.spec)
    pkg = model_curvature(spec)
    report["results"]["n"] = pkg.R.n
    report["results"]["scalar"] = pkg.S
    tol = tols["eps_alg"]
    for name, value in package_consistency(pkg).items():
        _check(report, f"consistency.{name}", value, tol * max(1.0, abs(pkg.S)))
    if pkg.R.n >= 4:
        for name, value in symmetric_space_identity_report(pkg).items():
            if name in ("r1", "r2"):
                _check(report, name, value, tol * max(1.0, abs(pkg.S)) ** 3)
            else:
                report["results"][name] = value
    return _finish(report, args)


def cmd_dim4(args, tols) -> int:
    report = _base_report(args, tols)
    with open(args.input, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    op = operator_from_dict(data, tol=tols["eps_alg"])
    if op.n != 4:
        raise ValueError(f"dim4 subcommand needs an n=4 operator, got n={op.n}")
    tol = tols["eps_alg"]
    scale = max(1.0, float(np.abs(op.mat).max()))
    _check(report, "trace_free_residual", float(np.abs(np.einsum('ipjp->ij', op.four())).max()),
           tol * scale * 100)
    W = CurvatureTensor(4, op.mat, tol=1.0)  # Bianchi residual reported, not trusted
    _check(report, "bianchi_residual", bianchi_residual(W), tol * scale * 100)
    if report["failures"]:
        return _finish(report, args)
    split = split_self_dual(W)
    report["results"]["wplus_eigenvalues"] = sorted(np.linalg.eigvalsh(split.wplus).tolist())
    report["results"]["wminus_eigenvalues"] = sorted(np.linalg.eigvalsh(split.wminus).tolist())
    nf = berger_normal_form(W)
    report["results"]["normal_form"] = {"a": nf.a.tolist(), "b": nf.b.tolist(),
                                        "residual": nf.residual}
    _check(report, "normal_form_residual", nf.residual, tols["eps_nf"] * scale)
    det = det_identities(split.wplus)
    _check(report, "cube_dot_vs_3det", det.cube_dot - 3 * det.det, 100 * tol * scale ** 3)
    _check(report, "cube_sharp_vs_6det", det.cube_sharp - 6 * det.det, 100 * tol * scale ** 3)
    wp_norm = float(np.linalg.norm(split.wplus))
    _check(report, "det_sharp_bound", max(0.0, 18 * det.det - np.sqrt(6) * wp_norm ** 3),
           tol * scale ** 3)
    if args.scalar is not None:
        omega = float(np.linalg.eigvalsh(split.wplus).max())
        report["results"]["pinch"] = pinch_verdict_dim4(omega, args.scalar).as_dict()
    return _finish(report, args)


def cmd_bounds(args, tols) -> int:
    report = _base_report(args, tols)
    rng = np.random.default_rng(args.seed)
    worst = {"berger": 0.0, "cubic_eig": 0.0, "cubic_norm": 0.0, "eigen": 0.0}
    for n in (5, 6, 7, 8):
        for _ in range(args.trials):
            W = random_weyl(rng, n)
            cb = berger_component_bound(W)
            worst["berger"] = max(worst["berger"], cb.max_component - cb.bound)
            ce = cubic_bound_eval(W)
            worst["cubic_eig"] = max(worst["cubic_eig"], ce.lhs - ce.eig_bound)
            worst["cubic_norm"] = max(worst["cubic_norm"], ce.lhs - ce.norm_bound)
            T = random_traceless_symmetric(rng, int(rng.integers(2, 11)))
            lam, bound = eigen_bound(T)
            worst["eigen"] = max(worst["eigen"], lam - bound)
    for name, value in worst.items():
        _check(report, f"audit.{name}_excess", max(value, 0.0), tols["eps_alg"] * 100)
    oracle_results = {}
    for n in range(2, 9):
        for s in (0.5, 1.0, 2.0):
            closed = wcubic_closed_form(s, n)
            res = wcubic_oracle(s, n, budget=args.budget, seed=args.seed)
            key = f"oracle.n{n}_s{s}"
            oracle_results[key] = {"closed": closed, "oracle": res.value,
                                   "converged": res.converged}
            _check(report, f"{key}.excess", max(res.value - closed, 0.0), tols["oracle_high"])
            _check(report, f"{key}.defect", max(closed - res.value, 0.0), tols["oracle_low"])
    report["results"]["oracle"] = oracle_results
    return _finish(report, args)


def cmd_constants(args, tols) -> int:
    report = _base_report(args, tols)
    tab = constants(args.n)
    report["results"]["constants"] = {k: v for k, v in tab.as_dict().items() if v is not None}
    if tab.alpha is not None and args.n >= 6:
        from .bounds import quadratic_coefficients
        A, B, C = quadratic_coefficients(args.n)
        resid = (A * tab.alpha ** 2 + B * tab.alpha + C) / max(1.0, abs(C))
        _check(report, "quadratic_residual", resid, tols["eps_alg"])
        lower = (args.n - 3) / (2.0 * (args.n - 1))
        _check(report, "alpha_above_lower_bound", max(0.0, lower - tab.alpha), tols["eps_alg"])
    return _finish(report, args)


def _load_pinch_inputs(args) -> tuple[CurvatureTensor, np.ndarray, float]:
    with open(args.input, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    op = operator_from_dict(data["W"])
    W = CurvatureTensor(op.n, op.mat)
    E = np.asarray(data["E"], dtype=float)
    return W, E, float(data["S"])


def cmd_pinch(args, tols) -> int:
    report = _base_report(args, tols)
    if args.kind == "dim4":
        if args.omega is None or args.scalar is None:
            raise ValueError("dim4 pinch needs --omega and --S")
        verdict = pinch_verdict_dim4(args.omega, args.scalar)
    else:
        if not args.input:
            raise ValueError("pointwise/norm pinch needs --input JSON with W, E, S")
        W, E, S = _load_pinch_inputs(args)
        if args.kind == "pointwise":
            verdict = pinch_verdict_pointwise(W, E, S)
        else:
            verdict = pinch_verdict_norm(W, E, S)
    report["results"]["verdict"] = verdict.as_dict()
    return _finish(report, args)


def cmd_gap(args, tols) -> int:
    report = _base_report(args, tols)
    verdict = gap_verdict_integral(args.norm_w, args.norm_e, args.yamabe, args.n)
    report["results"]["verdict"] = verdict.as_dict()
    return _finish(report, args)


def cmd_chart(args, tols) -> int:
    report = _base_report(args, tols)
    if args.target.endswith(".json"):
        metric = grid_file_metric(args.target)
    else:
        metric = preset_metric(args.target)
    file_grid = metric.default_grid
    if args.center:
        center = np.array([float(c) for c in args.center.split(",")])
    elif file_grid is not None:
        center = file_grid.center
    else:
        center = 0.1 * (1.0 + np.arange(metric.n)) / metric.n
    step = args.step if args.step is not None else (
        file_grid.h if file_grid is not None else 1e-3)
    order = args.order if args.order is not None else (
        file_grid.order if file_grid is not None else 2)
    grid = GridSpec(center=center, h=step, order=order)
    field = curvature_field(metric, grid, with_ricci_identity=args.ricci_identity)
    residuals = identity_residual_report(field)
    report["results"]["n"] = metric.n
    report["results"]["harmonic_weyl"] = metric.harmonic_weyl
    report["results"]["scalar"] = field.S
    report["results"]["weyl_norm_sq"] = float(np.sum(field.decomposition.weyl.mat ** 2))
    report["results"]["residuals"] = {k: float(v) for k, v in sorted(residuals.items())}
    if metric.name.startswith("euclidean"):
        for key, value in residuals.items():
            if "margin" not in key:
                _check(report, f"zero.{key}", value, tols["chart_zero"])
    if residuals.get("kato_classical_margin", 0.0) < -100 * tols["eps_alg"]:
        report["failures"].append("kato_classical_margin")
    if args.halving:
        grid2 = GridSpec(center=center, h=grid.h / 2.0, order=grid.order)
        field2 = curvature_field(metric, grid2, with_ricci_identity=False)
        residuals2 = identity_residual_report(field2)
        ratios = {}
        floor = 1e-10  # round-off floor of the nested stencils; no O(h^2) signal below
        for key in ("second_bianchi_r", "bianchi_map_w", "delta_w_pq"):
            hi, lo = residuals.get(key, 0.0), residuals2.get(key, 0.0)
            if hi <= floor and lo <= floor:
                continue  # converged past discretization on this preset
            ratios[key] = hi / lo if lo > 0 else float("inf")
            if not (3.5 <= ratios[key] <= 4.5):
                report["failures"].append(f"halving.{key}")
        report["results"]["halving_ratios"] = {k: float(v) for k, v in sorted(ratios.items())}
    return _finish(report, args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weylbench",
        description="Verification workbench for curvature-operator algebra and "
                    "harmonic-Weyl rigidity machinery.")
    parser.add_argument("--version", action="version", version=f"weylbench {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                       help="override a named tolerance")
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--out", help="write the report to a file instead of stdout")

    p = sub.add_parser("identities", help="randomized curvature-algebra identity suite")
    p.add_argument("--n", action="append", help="dimension (repeatable), default 4..8")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("model", help="homogeneous model-space package and residuals")
    p.add_argument("spec", help='e.g. "sphere:4:1.0" or "product:sphere:2:1.0,sphere:2:1.0"')
    common(p)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("dim4", help="self-dual split, normal form, determinant identities")
    p.add_argument("input", help="operator JSON file (n = 4)")
    p.add_argument("--S", dest="scalar", type=float, default=None,
                   help="scalar curvature for the pinch verdict")
    common(p)
    p.set_defaults(func=cmd_dim4)

    p = sub.add_parser("bounds", help="sampling audit of the cubic bounds plus the oracle")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--budget", type=int, default=100_000)
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("constants", help="dimensional constants table")
    p.add_argument("n", type=int)
    common(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("pinch", help="pointwise pinch verdicts")
    p.add_argument("kind", choices=("pointwise", "norm", "dim4"))
    p.add_argument("--input", help="JSON file with W (operator), E (matrix), S (number)")
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--S", dest="scalar", type=float, default=None)
    common(p)
    p.set_defaults(func=cmd_pinch)

    p = sub.add_parser("gap", help="integral gap verdict from norms and the Yamabe invariant")
    p.add_argument("norm_w", type=float)
    p.add_argument("norm_e", type=float)
    p.add_argument("yamabe", type=float)
    p.add_argument("n", type=int)
    common(p)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("chart", help="finite-difference chart field and identity residuals")
    p.add_argument("target", help="preset name or grid-file path (*.json)")
    p.add_argument("--h", dest="step", type=float, default=None,
                   help="stencil step (default 1e-3, or the grid file's step)")
    p.add_argument("--order", type=int, choices=(2, 4), default=None)
    p.add_argument("--center", help="comma-separated chart coordinates")
    p.add_argument("--halving", action="store_true",
                   help="recompute at h/2 and check O(h^2) ratios")
    p.add_argument("--ricci-identity", action="store_true")
    common(p)
    p.set_defaults(func=cmd_chart)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        tols = _parse_tols(args.tol)
        return args.func(args, tols)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except AssertionError as exc:
        sys.stderr.write(f"assertion failed: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
