"""Batch command line front-end. All randomness flows from --seed; identical
argv and input files produce byte-identical data outputs.

Exit codes: 0 = run completed and every check passed; 1 = a theorem-backed
check failed (bound violation or residual above --tol); 2 = invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import plotting
from .funcspace import besov_norm, symbol_from_json
from .matrixcore import derive_seed, random_hermitian, spectral_decompose
from .opint import random_haagerup_rep
from .search import SearchConfig, escape_probe, search_counterexample, trend_csv, trend_report
from .theorems import (
    RatioRecord,
    check_toi_schatten,
    instance_from_json,
    random_instance,
    sweep_dimensions,
    verify_pair_formula,
)

MODE_KINDS = {
    "2.1i": "core",
    "2.1ii": "core",
    "2.1iii": "core",
    "2.2first": "first",
    "2.2second": "second",
}


def _parse_p(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return math.inf
    return float(text)


def _parse_list(text: str, cast):
    return [cast(item) for item in text.split(",") if item.strip()]


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _figure_path(out: Path) -> Path:
    return out.with_suffix(out.suffix + ".png") if out.suffix != ".png" else out


def cmd_verify_identity(args) -> int:
    out = Path(args.out)
    if args.input:
        instances = [instance_from_json(obj) for obj in json.loads(Path(args.input).read_text())]
    else:
        instances = [
            random_instance(
                args.dim, args.degree, 2.0, derive_seed(args.seed, "verify", i), min_gap=1e-6
            )
            for i in range(args.samples)
        ]
    residuals = [verify_pair_formula(inst, tol=args.tol) for inst in instances]
    passed = all(r <= args.tol for r in residuals)
    _write_json(
        out,
        {
            "subcommand": "verify-identity",
            "dim": args.dim,
            "degree": args.degree,
            "samples": len(instances),
            "seed": args.seed,
            "tol": args.tol,
            "residuals": residuals,
            "max_residual": max(residuals) if residuals else 0.0,
            "passed": passed,
        },
    )
    if not args.no_figures:
        plotting.save_residual_figure(residuals, args.tol, _figure_path(out))
    print(
        f"verify-identity: {len(residuals)} instances, max residual "
        f"{max(residuals) if residuals else 0.0:.3e}, {'PASS' if passed else 'FAIL'}"
    )
    return 0 if passed else 1


def cmd_check_bounds(args) -> int:
    out = Path(args.out)
    kind = MODE_KINDS[args.mode]
    q = args.q
    if args.mode in ("2.1iii", "2.2first", "2.2second") and q is None:
        raise ValueError(f"mode {args.mode} requires --q")
    if q is None:
        q = math.inf
    reports = []
    for i in range(args.samples):
        seed = derive_seed(args.seed, "bounds", args.mode, i)
        decomps = [
            spectral_decompose(random_hermitian(args.dim, derive_seed(seed, tag)))
            for tag in ("E1", "E2", "E3")
        ]
        grids = tuple(D.eigenvalues for D in decomps)
        rep = random_haagerup_rep(kind, grids, args.jk, args.jk, derive_seed(seed, "rep"))
        rng = np.random.default_rng(derive_seed(seed, "TR"))
        T = rng.standard_normal((args.dim, args.dim)) + 1j * rng.standard_normal((args.dim, args.dim))
        R = rng.standard_normal((args.dim, args.dim)) + 1j * rng.standard_normal((args.dim, args.dim))
        reports.append(check_toi_schatten(rep, T, R, args.p, q, args.mode, *decomps))
    violations = sum(0 if r.passed else 1 for r in reports)
    _write_json(
        out,
        {
            "subcommand": "check-bounds",
            "mode": args.mode,
            "p": "inf" if math.isinf(args.p) else args.p,
            "q": "inf" if math.isinf(q) else q,
            "dim": args.dim,
            "jk": args.jk,
            "seed": args.seed,
            "reports": [r.to_json() for r in reports],
            "violations": violations,
        },
    )
    print(f"check-bounds {args.mode}: {len(reports)} instances, {violations} violations")
    return 0 if violations == 0 else 1


def cmd_lipschitz_sweep(args) -> int:
    out = Path(args.out)
    records = sweep_dimensions(
        _parse_list(args.p_list, _parse_p),
        _parse_list(args.dim_list, int),
        args.samples,
        args.seed,
        degree=args.degree,
    )
    lines = [",".join(RatioRecord.CSV_COLUMNS)]
    lines.extend(",".join(str(v) for v in rec.csv_row()) for rec in records)
    out.write_text("\n".join(lines) + "\n")
    if not args.no_figures:
        plotting.save_ratio_sweep_figure(records, _figure_path(out))
    top = max((r.normalized_ratio for r in records), default=0.0)
    print(f"lipschitz-sweep: {len(records)} records, max normalized ratio {top:.6g}")
    return 0


def cmd_search(args) -> int:
    out = Path(args.out)
    cfg = SearchConfig(
        p=args.p,
        dim=args.dim,
        symbol_degree=args.degree,
        budget=args.budget,
        restarts=args.restarts,
        master_seed=args.seed,
        step_scale=args.step_scale,
    )
    report = search_counterexample(cfg)
    out.write_text(report.to_json_str() + "\n")
    if not args.no_figures:
        plotting.save_trajectory_figure(report.trajectory, _figure_path(out))
    print(f"search: best normalized ratio {report.best_ratio:.6g} (resampled {report.resampled})")
    return 0


def cmd_escape_probe(args) -> int:
    out = Path(args.out)
    rows = []
    for dim in _parse_list(args.dim_list, int):
        for i in range(args.samples):
            seed = derive_seed(args.seed, "escape", dim, i)
            rep = escape_probe(args.p, dim, seed)
            rows.append(
                {
                    "p": args.p,
                    "dim": dim,
                    "sample_index": i,
                    "seed": seed,
                    "lhs": rep.lhs,
                    "rhs": rep.rhs,
                    "ratio": rep.lhs / rep.rhs,
                    "passed": rep.passed,
                }
            )
    header = "p,dim,sample_index,seed,lhs,rhs,ratio,passed"
    lines = [header]
    for row in rows:
        lines.append(
            f"{row['p']!r},{row['dim']},{row['sample_index']},{row['seed']},"
            f"{row['lhs']!r},{row['rhs']!r},{row['ratio']!r},{row['passed']}"
        )
    out.write_text("\n".join(lines) + "\n")
    trend = trend_report(rows, "dim", "ratio")
    trend_path = out.with_suffix(out.suffix + ".trend.csv")
    trend_path.write_text(trend_csv(trend, "dim"))
    if not args.no_figures:
        plotting.save_escape_probe_figure(rows, _figure_path(out))
    growth = trend[-1]["growth"]
    print(f"escape-probe p={args.p:g}: {len(rows)} probes, max-ratio growth {growth:.4g}")
    return 0


def cmd_besov(args) -> int:
    out = Path(args.out)
    f = symbol_from_json(json.loads(Path(args.symbol).read_text()))
    profile = besov_norm(f, oversample=args.oversample)
    _write_json(
        out,
        {
            "subcommand": "besov",
            "N": f.degree,
            "oversample": args.oversample,
            "block_norms": list(profile.block_norms),
            "besov_norm": profile.besov_norm,
        },
    )
    print(f"besov: degree {f.degree}, norm {profile.besov_norm:.6g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opintlab",
        description="Finite-dimensional checks for operator-integral norm theorems",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0, help="master seed for all randomness")
        sp.add_argument("--out", required=True, help="output file path")
        sp.add_argument("--no-figures", action="store_true", help="skip PNG rendering")

    sp = sub.add_parser("verify-identity", help="check the perturbation identity on random instances")
    sp.add_argument("--dim", type=int, default=4)
    sp.add_argument("--degree", type=int, default=3)
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--input", help="optional JSON file with serialized instances")
    common(sp)
    sp.set_defaults(func=cmd_verify_identity)

    sp = sub.add_parser("check-bounds", help="check triple-integral Schatten bounds")
    sp.add_argument("--mode", required=True, choices=sorted(MODE_KINDS))
    sp.add_argument("--p", type=_parse_p, required=True)
    sp.add_argument("--q", type=_parse_p, default=None)
    sp.add_argument("--dim", type=int, default=8)
    sp.add_argument("--jk", type=int, default=4, help="factor index sizes J = K")
    sp.add_argument("--samples", type=int, default=50)
    common(sp)
    sp.set_defaults(func=cmd_check_bounds)

    sp = sub.add_parser("lipschitz-sweep", help="sweep normalized Lipschitz ratios to CSV")
    sp.add_argument("--p-list", default="1,1.5,2")
    sp.add_argument("--dim-list", default="2,4,8")
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--degree", type=int, default=3)
    common(sp)
    sp.set_defaults(func=cmd_lipschitz_sweep)

    sp = sub.add_parser("search", help="hill-climb for large ratios at p > 2")
    sp.add_argument("--p", type=_parse_p, required=True)
    sp.add_argument("--dim", type=int, default=8)
    sp.add_argument("--degree", type=int, default=3)
    sp.add_argument("--budget", type=int, default=500)
    sp.add_argument("--restarts", type=int, default=4)
    sp.add_argument("--step-scale", type=float, default=0.2)
    common(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("escape-probe", help="adjacent-measure probe at 1 <= p < 2")
    sp.add_argument("--p", type=_parse_p, default=1.0)
    sp.add_argument("--dim-list", default="4,8,16,32")
    sp.add_argument("--samples", type=int, default=5)
    common(sp)
    sp.set_defaults(func=cmd_escape_probe)

    sp = sub.add_parser("besov", help="dyadic-block norm of a symbol file")
    sp.add_argument("--symbol", required=True, help="symbol JSON file")
    sp.add_argument("--oversample", type=int, default=8)
    common(sp)
    sp.set_defaults(func=cmd_besov)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
