"""Experiment harness: config-driven runs, law tabulation, comparisons.

All outputs are plain CSV/JSON with floats printed to 17 significant
digits, so a (config, seed) pair reproduces byte-identical files.  Exit
code 0 means every declared tolerance passed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import limit_laws, oracles, particle_sim, profiles
from .errors import RarefanError

__all__ = ["main", "run_experiment", "emit_figure1", "compare_report"]


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_fmt)
        fh.write("\n")


# ---------------------------------------------------------------------------
# law construction from config-ish descriptors
# ---------------------------------------------------------------------------


def law_for_profile(profile, variable: str | None = None) -> limit_laws.LimitLaw:
    """The closed-form law matching a builtin profile family."""
    fam = profile.family
    p = dict(profile.params)
    if fam == "two_corner":
        return limit_laws.two_corner_cdf(int(p["x"]), int(p["y"]), variable or "speed")
    if fam == "periodic":
        return limit_laws.periodic_tasep_cdf(
            int(p["k_plus"]), int(p["k_minus"]), variable or "speed"
        )
    if fam == "bernoulli":
        return limit_laws.bernoulli_cdf(p["p1"], p["p2"], variable or "speed")
    if fam == "hammersley_periodic":
        return limit_laws.hammersley_periodic_cdf(p["lam"], p["mu"])
    if fam == "hammersley_poisson":
        return limit_laws.hammersley_poisson_cdf(p["lam"], p["mu"])
    raise RarefanError(f"no closed-form law for family {fam!r}")


def _law_grid(law: limit_laws.LimitLaw, points: int) -> np.ndarray:
    lo, hi = law.support
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise RarefanError("cannot tabulate a law with unbounded support")
    pad = (hi - lo) / (points + 1)
    return np.linspace(lo + pad, hi - pad, points)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_law_tabulate(args) -> int:
    profile = profiles.build_builtin(args.family, **json.loads(args.params))
    law = law_for_profile(profile, args.variable)
    grid = _law_grid(law, args.points)
    rows = []
    for x in grid:
        v, e = law.eval_with_error(float(x))
        rows.append((x, v, law.method, e))
    out = os.path.join(args.out, "law.csv")
    os.makedirs(args.out, exist_ok=True)
    _write_csv(out, ["point", "value", "method", "error_bound"], rows)
    print(f"wrote {out} ({len(rows)} rows, {law.label})")
    return 0


def run_experiment(config: dict, out_dir: str) -> dict:
    """Simulate a model against its law and write the report files.

    Config keys: model (tasep | hammersley), profile (family descriptor),
    t, replicas, seed, ks_tolerance, workers.
    """
    os.makedirs(out_dir, exist_ok=True)
    profile = profiles.profile_from_config(config["profile"])
    model = config["model"]
    t = float(config.get("t", 2000.0))
    replicas = int(config.get("replicas", 2000))
    seed = int(config.get("seed", 1))
    workers = int(config.get("workers", 1))
    tol = float(config.get("ks_tolerance", 0.05))
    law = law_for_profile(profile)
    report = particle_sim.empirical_speed_cdf(
        model, profile, t, replicas, law, seed=seed, workers=workers
    )
    _write_csv(
        os.path.join(out_dir, "speeds.csv"),
        ["model", "seed", "replica", "t", "speed"],
        report.rows(),
    )
    grid = _law_grid(law, 200)
    law_rows = []
    for x in grid:
        v, e = law.eval_with_error(float(x))
        law_rows.append((x, v, law.method, e))
    _write_csv(
        os.path.join(out_dir, "law.csv"),
        ["point", "value", "method", "error_bound"],
        law_rows,
    )
    summary = {
        "model": model,
        "profile": profiles.profile_to_config(profile),
        "t": t,
        "replicas": replicas,
        "seed": seed,
        "law": law.label,
        "ks_statistic": report.ks_statistic,
        "ks_pvalue": report.ks_pvalue,
        "ks_tolerance": tol,
        "passed": bool(report.passed(tol)),
    }
    _write_json(os.path.join(out_dir, "summary.json"), summary)
    return summary


def _cmd_simulate(args) -> int:
    with open(args.config) as fh:
        config = json.load(fh)
    if args.seed is not None:
        config["seed"] = args.seed
    if args.replicas is not None:
        config["replicas"] = args.replicas
    if args.t is not None:
        config["t"] = args.t
    summary = run_experiment(config, args.out)
    print(json.dumps(summary, indent=2, sort_keys=True, default=_fmt))
    return 0 if summary["passed"] else 1


def emit_figure1(out_dir: str) -> str:
    """Tabulate the periodic-boundary law at lam=1, mu=2 over rho in [1, 2].

    201 rows in steps of 0.005 with the straight-line Poisson-boundary
    reference (mu - rho) / (mu - lam); the endpoints are pinned to 1 and 0.
    """
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    for i in range(201):
        rho = 1.0 + 0.005 * i
        if i == 0:
            value, err = 1.0, 0.0
        elif i == 200:
            value, err = 0.0, 0.0
        else:
            value, err = limit_laws.hammersley_periodic_compare(1.0, 2.0, rho)
        rows.append((rho, value, err, 2.0 - rho))
    path = os.path.join(out_dir, "figure1.csv")
    _write_csv(path, ["rho", "value", "error_bound", "uniform_reference"], rows)
    return path


def _cmd_figure1(args) -> int:
    path = emit_figure1(args.out)
    print(f"wrote {path}")
    return 0


def compare_report(law_a, law_b, points: int = 200) -> dict:
    """Grid comparison of two laws of the same kind."""
    if law_a.kind != law_b.kind:
        raise RarefanError(f"incompatible kinds: {law_a.kind} vs {law_b.kind}")
    lo = max(law_a.support[0], law_b.support[0])
    hi = min(law_a.support[1], law_b.support[1])
    if hi <= lo:
        raise RarefanError("supports do not overlap")
    pad = (hi - lo) / (points + 1)
    grid = np.linspace(lo + pad, hi - pad, points)
    diffs = [abs(law_a(float(x)) - law_b(float(x))) for x in grid]
    return {
        "kind": law_a.kind,
        "grid_lo": lo,
        "grid_hi": hi,
        "points": points,
        "max_abs_diff": max(diffs),
        "labels": [law_a.label, law_b.label],
    }


def _cmd_compare(args) -> int:
    with open(args.config) as fh:
        config = json.load(fh)
    pa = profiles.build_builtin(**config["law_a"])
    pb = profiles.build_builtin(**config["law_b"])
    report = compare_report(
        law_for_profile(pa, config.get("variable")),
        law_for_profile(pb, config.get("variable")),
        points=int(config.get("points", 200)),
    )
    tol = config.get("tolerance")
    report["tolerance"] = tol
    report["passed"] = bool(tol is None or report["max_abs_diff"] <= tol)
    os.makedirs(args.out, exist_ok=True)
    _write_json(os.path.join(args.out, "compare.json"), report)
    print(json.dumps(report, indent=2, sort_keys=True, default=_fmt))
    return 0 if report["passed"] else 1


def _cmd_oracle(args) -> int:
    """Quick oracle battery; exit 0 only if every check passes."""
    from .lattice_lpp import WeightField, lpp_value

    rng = np.random.default_rng(args.seed)
    reports = []
    for trial in range(20):
        shape = rng.integers(1, 5, size=2)
        field = WeightField(seed=args.seed + trial)
        w = field.block(0, 0, int(shape[0]), int(shape[1]))
        main = lpp_value(field, (0, 0), (int(shape[0]) - 1, int(shape[1]) - 1))
        reports.append(
            oracles.OracleReport(
                quantity=f"lpp_{trial}",
                oracle_value=oracles.lpp_enumerate(w),
                main_value=main,
                tolerance=0.0,
                cost=int(shape[0] * shape[1]),
            )
        )
    from . import _kernels as K

    for trial in range(50):
        pts = rng.random((12, 2))
        order = np.argsort(pts[:, 0])
        main = int(K.lis_length(np.ascontiguousarray(pts[order, 1])))
        reports.append(
            oracles.OracleReport(
                quantity=f"lis_{trial}",
                oracle_value=float(oracles.lis_quadratic(pts)),
                main_value=float(main),
                tolerance=0.0,
                cost=12,
            )
        )
    for x in (1, 2, 3):
        for y in (1, 2):
            for rho in (0.3, 0.5, 0.7):
                reports.append(
                    oracles.OracleReport(
                        quantity=f"gamma_{x}_{y}_{rho}",
                        oracle_value=oracles.gamma_compare_integrate(x, y, rho),
                        main_value=limit_laws.gamma_compare(x, y, rho),
                        tolerance=1e-8,
                        cost=1,
                    )
                )
    os.makedirs(args.out, exist_ok=True)
    _write_csv(
        os.path.join(args.out, "oracle_report.csv"),
        ["quantity", "oracle", "main", "difference", "tolerance", "passed"],
        [
            (r.quantity, r.oracle_value, r.main_value, r.difference, r.tolerance, r.passed)
            for r in reports
        ],
    )
    n_fail = sum(not r.passed for r in reports)
    print(f"{len(reports)} oracle checks, {n_fail} failures")
    return 0 if n_fail == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rarefan",
        description="rarefaction-fan particle systems: laws, simulations, comparisons",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    law = sub.add_parser("law", help="closed-form law utilities")
    law_sub = law.add_subparsers(dest="law_command", required=True)
    tab = law_sub.add_parser("tabulate", help="tabulate a builtin family's law")
    tab.add_argument("--family", required=True)
    tab.add_argument("--params", default="{}", help="JSON object of family parameters")
    tab.add_argument("--variable", default=None, help="speed | angle (lattice families)")
    tab.add_argument("--points", type=int, default=200)
    tab.add_argument("--out", default=".")
    tab.set_defaults(func=_cmd_law_tabulate)

    sim = sub.add_parser("simulate", help="run a config-driven speed experiment")
    sim.add_argument("--config", required=True)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--replicas", type=int, default=None)
    sim.add_argument("--t", type=float, default=None)
    sim.add_argument("--out", default="out")
    sim.set_defaults(func=_cmd_simulate)

    cmp_ = sub.add_parser("compare", help="grid-compare two closed-form laws")
    cmp_.add_argument("--config", required=True)
    cmp_.add_argument("--out", default="out")
    cmp_.set_defaults(func=_cmd_compare)

    fig = sub.add_parser("figure1", help="tabulate the periodic-boundary curve")
    fig.add_argument("--out", default="out")
    fig.set_defaults(func=_cmd_figure1)

    orc = sub.add_parser("oracle", help="run the quick oracle battery")
    orc.add_argument("--seed", type=int, default=0)
    orc.add_argument("--out", default="out")
    orc.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RarefanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
