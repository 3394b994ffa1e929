"""Command-line front end.

Subcommands: curvature, flatness, check-soliton, solve, examples, verify.
Exit codes: 0 pass, 1 verdict failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .curvature import ricci_coordinate_oracle, ricci_frame, connection_table
from .expressions import evaluate, free_axes, parse_expr
from .flatness import UnsupportedCaseError, flatness_criterion, riemann_sup
from .metric import (
    MetricError,
    check_metric_on_grid,
    classify,
    lie_bracket_table,
    load_metric,
    sample_grid,
)
from .soliton import (
    EQUATION_INDEX,
    load_soliton,
    residual,
    soliton_kind,
    soliton_to_dict,
)
from .solutions import FAMILIES, builtin_examples
from .tape import backend_name, eval_many


@dataclass
class RunConfig:
    grid_n: int = 9
    tol_flat: float = 1e-7
    tol_soliton: float = 1e-8
    fd_step: float = 1e-5
    output: str = "text"

    def __post_init__(self):
        if self.grid_n < 3:
            raise ValueError("--grid must be at least 3")
        if self.tol_flat <= 0 or self.tol_soliton <= 0 or self.fd_step <= 0:
            raise ValueError("tolerances and fd step must be positive")


def _emit(payload: dict, config: RunConfig, text_lines) -> None:
    if config.output == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--grid", type=int, default=9, help="grid points per axis")
    sub.add_argument("--tol-flat", type=float, default=1e-7)
    sub.add_argument("--tol-soliton", type=float, default=1e-8)
    sub.add_argument("--fd-step", type=float, default=1e-5)
    sub.add_argument("--output", choices=("text", "json"), default="text")


def _config(args) -> RunConfig:
    return RunConfig(
        grid_n=args.grid,
        tol_flat=args.tol_flat,
        tol_soliton=args.tol_soliton,
        fd_step=args.fd_step,
        output=args.output,
    )


def cmd_curvature(args) -> int:
    config = _config(args)
    m = load_metric(args.metric)
    pts = sample_grid(m.domain, config.grid_n)
    check_metric_on_grid(m, pts)
    ric = ricci_frame(m)
    entries = {}
    for i, j in EQUATION_INDEX:
        vals = eval_many(ric.entry(i, j), pts)
        entries[f"{i}{j}"] = {
            "min": float(vals.min()),
            "max": float(vals.max()),
            "max_abs": float(np.abs(vals).max()),
        }
    payload = {
        "case": classify(m).value,
        "grid_n": config.grid_n,
        "ricci": entries,
        "riemann_sup": riemann_sup(m, pts),
    }
    lines = [
        f"case: {payload['case']}",
        f"max |Riemann| over grid: {payload['riemann_sup']:.6e}",
        "Ricci entries over grid (frame basis):",
    ]
    for key, stats in entries.items():
        lines.append(
            f"  Ric({key[0]},{key[1]}): min {stats['min']: .6e}  "
            f"max {stats['max']: .6e}"
        )
    if args.verify:
        rng = np.random.default_rng(1234)
        diffs = []
        for _ in range(args.points):
            p = _random_interior_point(m, rng)
            frame_vals = np.array(
                [[evaluate(ric.entry(i, j), p) for j in (1, 2, 3)] for i in (1, 2, 3)]
            )
            oracle = ricci_coordinate_oracle(m, p, step=config.fd_step)
            diffs.append(float(np.abs(frame_vals - oracle).max()))
        payload["oracle_max_diff"] = max(diffs)
        payload["oracle_points"] = args.points
        lines.append(
            f"oracle cross-check at {args.points} points: "
            f"max |frame - FD| = {max(diffs):.3e}"
        )
    _emit(payload, config, lines)
    return 0


def _random_interior_point(m, rng) -> tuple:
    # Margin keeps oracle stencils inside the box.
    coords = []
    for axis in (1, 2, 3):
        lo, hi = m.domain.interval(axis)
        pad = 0.05 * (hi - lo)
        coords.append(rng.uniform(lo + pad, hi - pad))
    return tuple(coords)


def cmd_flatness(args) -> int:
    config = _config(args)
    m = load_metric(args.metric)
    try:
        verdict = flatness_criterion(m, config.grid_n, config.tol_flat)
    except UnsupportedCaseError as exc:
        payload = {
            "case": "general",
            "criterion_holds": None,
            "numeric_sup": exc.numeric_sup,
            "agrees": None,
        }
        _emit(
            payload,
            config,
            [
                "case: general (no closed-form criterion)",
                f"max |Riemann| over grid: {exc.numeric_sup:.6e}",
            ],
        )
        return 0 if exc.numeric_sup < config.tol_flat else 1
    payload = {
        "case": verdict.case.value,
        "criterion_holds": verdict.criterion_holds,
        "criterion": verdict.criterion_description,
        "numeric_sup": verdict.numeric_sup,
        "agrees": verdict.agrees,
        "tol": verdict.tol,
    }
    _emit(
        payload,
        config,
        [
            f"case: {verdict.case.value}",
            f"criterion holds: {verdict.criterion_holds}",
            f"  ({verdict.criterion_description})",
            f"max |Riemann| over grid: {verdict.numeric_sup:.6e}",
            f"criterion and numeric verdict agree: {verdict.agrees}",
        ],
    )
    return 0 if verdict.agrees else 1


def cmd_check_soliton(args) -> int:
    config = _config(args)
    s = load_soliton(args.soliton)
    report = residual(s, config.grid_n, config.tol_soliton)
    kind = soliton_kind(s, config.grid_n).value if report.verdict else None
    payload = report.to_dict()
    payload["kind"] = kind
    lines = [f"system (general), grid {config.grid_n}^3:"]
    for (i, j), stats in report.equations.items():
        lines.append(
            f"  eq ({i},{j}): max {stats['max']:.3e}  rms {stats['rms']:.3e}"
        )
    lines.append(
        f"verdict: {'PASS' if report.verdict else 'FAIL'} "
        f"(threshold {report.tol_effective:.3e})"
    )
    if kind:
        lines.append(f"kind: {kind}")
    _emit(payload, config, lines)
    return 0 if report.verdict else 1


def _parse_params(raw_params, family: str) -> dict:
    const_keys = {"lam", "mu", "c1", "c2", "c3", "c4", "c5", "c6", "v3_ref"}
    expr_keys = {"F", "G", "lam_expr", "v3"}
    params: dict = {}
    cs = {}
    for item in raw_params or []:
        if "=" not in item:
            raise MetricError(f"--param needs key=value, got {item!r}")
        key, _, value = item.partition("=")
        key = key.strip()
        if key == "branch":
            params["branch"] = value.strip()
            continue
        try:
            e = parse_expr(value)
        except ValueError as exc:
            raise MetricError(f"bad value for {key}: {exc}") from exc
        if key in const_keys:
            if free_axes(e):
                raise MetricError(f"parameter {key} must be a constant")
            cs[key] = evaluate(e, (0.0, 0.0, 0.0))
        elif key in expr_keys:
            params["lam" if key == "lam_expr" else key] = e
        else:
            raise MetricError(f"unknown parameter {key!r}")
    if family == "sep":
        params["lam"] = cs.pop("lam", 0.0)
        params["mu"] = cs.pop("mu", 0.0)
        params["c"] = tuple(cs.pop(f"c{i}", 0.0) for i in range(1, 7))
        if cs:
            raise MetricError(f"unused parameters: {sorted(cs)}")
        return params
    if "lam" in cs and family == "both3":
        params.setdefault("lam", cs.pop("lam"))
    for key, value in cs.items():
        params[key] = value
    return params


def cmd_solve(args) -> int:
    config = _config(args)
    m = load_metric(args.metric)
    family = args.family
    if family not in FAMILIES:
        raise MetricError(
            f"unknown family {family!r}; choose from {sorted(FAMILIES)}"
        )
    params = _parse_params(args.param, family)
    if family == "unit-v3" and params:
        raise MetricError("unit-v3 takes no parameters")
    soliton = FAMILIES[family](m, **params)
    spec = soliton_to_dict(soliton)
    text = json.dumps(spec, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        if config.output == "text":
            print(f"wrote soliton spec to {args.out}")
    else:
        print(text)
    if args.check:
        report = residual(soliton, config.grid_n, config.tol_soliton)
        worst = report.equations[report.worst()]["max"]
        if config.output == "text":
            print(
                f"residual check: {'PASS' if report.verdict else 'FAIL'} "
                f"(max {worst:.3e})"
            )
        return 0 if report.verdict else 1
    return 0


def cmd_examples(args) -> int:
    config = _config(args)
    rows = []
    all_pass = True
    for entry in builtin_examples():
        report = residual(entry.soliton, config.grid_n, config.tol_soliton)
        kind = soliton_kind(entry.soliton, config.grid_n)
        worst = report.equations[report.worst()]["max"]
        all_pass = all_pass and report.verdict
        rows.append(
            {
                "name": entry.name,
                "description": entry.description,
                "verdict": report.verdict,
                "max_residual": worst,
                "kind": kind.value,
            }
        )
    lines = [f"{'entry':<16} {'verdict':<8} {'max residual':<14} kind"]
    for row in rows:
        lines.append(
            f"{row['name']:<16} {'PASS' if row['verdict'] else 'FAIL':<8} "
            f"{row['max_residual']:<14.3e} {row['kind']}"
        )
    lines.append(f"catalogue: {'all pass' if all_pass else 'FAILURES PRESENT'}")
    _emit(rows, config, lines)
    return 0 if all_pass else 1


def cmd_verify(args) -> int:
    config = _config(args)
    if args.metric:
        targets = [("input", load_metric(args.metric))]
    else:
        targets = [(e.name, e.soliton.metric) for e in builtin_examples()]
    rng = np.random.default_rng(20240817)
    results = []
    ok = True
    for name, m in targets:
        pts = sample_grid(m.domain, config.grid_n)
        check_metric_on_grid(m, pts)
        ric = ricci_frame(m)
        oracle_diff = 0.0
        for _ in range(args.points):
            p = _random_interior_point(m, rng)
            frame_vals = np.array(
                [[evaluate(ric.entry(i, j), p) for j in (1, 2, 3)] for i in (1, 2, 3)]
            )
            oracle = ricci_coordinate_oracle(m, p, step=config.fd_step)
            oracle_diff = max(oracle_diff, float(np.abs(frame_vals - oracle).max()))
        compat, torsion = _connection_checks(m, pts)
        entry_ok = oracle_diff < 1e-4 and compat < 1e-10 and torsion < 1e-10
        ok = ok and entry_ok
        results.append(
            {
                "metric": name,
                "oracle_max_diff": oracle_diff,
                "metric_compatibility": compat,
                "torsion": torsion,
                "ok": entry_ok,
            }
        )
    lines = [f"{'metric':<16} {'oracle diff':<13} {'compat':<10} {'torsion':<10} ok"]
    for row in results:
        lines.append(
            f"{row['metric']:<16} {row['oracle_max_diff']:<13.3e} "
            f"{row['metric_compatibility']:<10.2e} {row['torsion']:<10.2e} "
            f"{'yes' if row['ok'] else 'NO'}"
        )
    _emit(results, config, lines)
    return 0 if ok else 1


def _connection_checks(m, pts) -> tuple[float, float]:
    """Sup of metric-compatibility and torsion defects of the connection."""
    conn = connection_table(m)
    brackets = lie_bracket_table(m)
    compat = 0.0
    for i in range(3):
        for j in range(3):
            for k in range(3):
                e = conn[i][j][k] + conn[i][k][j]  # E_i(g(E_j,E_k)) = 0
                compat = max(compat, float(np.abs(eval_many(e, pts)).max()))
    torsion = 0.0
    for (i, j), beta in brackets.items():
        for comp in range(3):
            e = conn[i - 1][j - 1][comp] - conn[j - 1][i - 1][comp] - beta[comp]
            torsion = max(torsion, float(np.abs(eval_many(e, pts)).max()))
    return compat, torsion


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diagsol",
        description=(
            "Curvature, flatness and almost eta-Ricci soliton checks for "
            "3D diagonal metrics g = f1^-2 dx1^2 + f2^-2 dx2^2 + dx3^2. "
            f"Evaluation backend: {backend_name()}."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curvature", help="Ricci/Riemann report for a metric spec")
    p.add_argument("metric")
    p.add_argument("--verify", action="store_true", help="compare with the FD oracle")
    p.add_argument("--points", type=int, default=20, help="oracle sample points")
    _common_flags(p)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("flatness", help="flatness criterion vs numeric Riemann sup")
    p.add_argument("metric")
    _common_flags(p)
    p.set_defaults(func=cmd_flatness)

    p = sub.add_parser("check-soliton", help="residuals of the soliton system")
    p.add_argument("soliton")
    _common_flags(p)
    p.set_defaults(func=cmd_check_soliton)

    p = sub.add_parser("solve", help="construct soliton data for a metric")
    p.add_argument("metric")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument(
        "--param",
        action="append",
        metavar="KEY=VALUE",
        help="family parameter (c1..c6, lam, mu, F, G, v3, v3_ref, branch)",
    )
    p.add_argument("-o", "--out", help="output spec path (default: stdout)")
    p.add_argument("--check", action="store_true", help="also run the residual check")
    _common_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("examples", help="run the built-in catalogue")
    _common_flags(p)
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("verify", help="oracle cross-checks (catalogue or a metric)")
    p.add_argument("metric", nargs="?", default=None)
    p.add_argument("--points", type=int, default=20)
    _common_flags(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MetricError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
