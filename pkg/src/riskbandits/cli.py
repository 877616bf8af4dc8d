"""Command-line experiment runner.

Subcommands:
  eval      criterion values per arm and for requested mixtures
  oracle    best arm, gaps, simplex sweep, pull-count bounds -> CSV
  simulate  Monte Carlo estimates (performance, proxy regret, horizon gap,
            reference regret) -> one CSV per (policy, horizon)
  check     admissibility conditions and invariant suites -> report

Exit codes: 0 success, 1 config/validation error, 2 check failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import checks as checklib
from .config import ExperimentConfig, load_config
from .dist import MixtureDistribution
from .errors import ConfigError, DomainError
from .oracle import best_single_arm, oracle_report, simplex_grid_argmax
from .policy import SimplePolicy
from .sim import (
    RegretReport,
    estimate_horizon_gap,
    estimate_performance,
    estimate_proxy_regret,
    estimate_reference_regret,
    run_replications,
    write_report_csv,
)

__all__ = ["main"]


def _criterion_label(cfg: ExperimentConfig) -> str:
    params = cfg.criterion.params_label()
    return f"{cfg.criterion.tag}({params})" if params else cfg.criterion.tag


def _base_meta(cfg: ExperimentConfig) -> dict:
    return {
        "version": cfg.version,
        "seed": cfg.seed,
        "criterion": _criterion_label(cfg),
        "arms": len(cfg.arms),
    }


def cmd_eval(cfg: ExperimentConfig, out_dir: Path | None) -> int:
    rows = []
    for i, arm in enumerate(cfg.arms):
        rows.append((f"arm{i + 1}", cfg.criterion.evaluate(arm)))
    for p in cfg.mixtures:
        label = "mix[" + ",".join(f"{w:g}" for w in p) + "]"
        rows.append((label, cfg.criterion.evaluate(MixtureDistribution(cfg.arms, p))))
    width = max(len(r[0]) for r in rows)
    print(f"criterion: {_criterion_label(cfg)}")
    for name, value in rows:
        print(f"  {name:<{width}}  {value:.12g}")
    if out_dir is not None:
        path = out_dir / "eval.csv"
        with open(path, "w", encoding="utf-8") as fh:
            for key, val in sorted(_base_meta(cfg).items()):
                fh.write(f"# {key}={val}\n")
            fh.write("target,value\n")
            for name, value in rows:
                fh.write(f"{name},{value!r}\n")
        print(f"wrote {path}")
    return 0


def cmd_oracle(cfg: ExperimentConfig, out_dir: Path | None) -> int:
    cert = cfg.criterion.stability_certificate(cfg.arms, **cfg.certificate_overrides)
    report = oracle_report(
        cfg.criterion,
        cfg.arms,
        resolution=cfg.grid_resolution,
        certificate=cert,
        ucb_alpha=cfg.ucb_alpha,
        horizons=cfg.horizons,
    )
    print(f"criterion: {_criterion_label(cfg)}")
    print(f"best arm: arm{report.best_arm + 1}  value {report.best_value:.12g}")
    for i, gap in enumerate(report.gaps):
        print(f"  arm{i + 1} gap {gap:.12g}")
    if report.p_star is not None:
        p = ",".join(f"{w:g}" for w in report.p_star)
        print(f"simplex sweep argmax: p=({p})  value {report.p_star_value:.12g}")
    if report.lipschitz is not None:
        print(f"stationary-gap constant L: {report.lipschitz:.6g}")
    for horizon, (bounds, regret_bound) in report.pull_bounds.items():
        parts = [
            f"arm{i + 1}<={u:.6g}" for i, u in enumerate(bounds) if u is not None
        ]
        print(f"T={horizon}: expected pulls {'; '.join(parts)}; "
              f"proxy-regret bound {regret_bound:.6g}")
    if out_dir is not None:
        path = out_dir / "oracle.csv"
        with open(path, "w", encoding="utf-8") as fh:
            for key, val in sorted(_base_meta(cfg).items()):
                fh.write(f"# {key}={val}\n")
            fh.write("record,arm,horizon,value\n")
            fh.write(f"best-arm,{report.best_arm + 1},,{report.best_value!r}\n")
            for i, gap in enumerate(report.gaps):
                fh.write(f"gap,{i + 1},,{gap!r}\n")
            if report.p_star is not None:
                p = "|".join(f"{w:g}" for w in report.p_star)
                fh.write(f"simplex-argmax[{p}],,,{report.p_star_value!r}\n")
            if report.lipschitz is not None:
                fh.write(f"lipschitz,,,{report.lipschitz!r}\n")
            for horizon, (bounds, regret_bound) in report.pull_bounds.items():
                for i, u in enumerate(bounds):
                    if u is not None:
                        fh.write(f"pull-bound,{i + 1},{horizon},{u!r}\n")
                fh.write(f"proxy-regret-bound,,{horizon},{regret_bound!r}\n")
        print(f"wrote {path}")
    return 0


def _stationary_optimum(cfg: ExperimentConfig) -> float | None:
    """Best stationary value: vertex for the quasiconvex catalog, grid sweep
    otherwise (when a resolution is configured)."""
    if cfg.criterion.convexity in ("linear", "convex", "quasiconvex"):
        return best_single_arm(cfg.criterion, cfg.arms)[1]
    if cfg.grid_resolution is not None and len(cfg.arms) <= 4:
        return simplex_grid_argmax(cfg.criterion, cfg.arms, cfg.grid_resolution)[1]
    return None


def _reference_policy(cfg: ExperimentConfig):
    if cfg.reference == "best-arm":
        best, _, _ = best_single_arm(cfg.criterion, cfg.arms)
        p = np.zeros(len(cfg.arms))
        p[best] = 1.0
        return f"best-arm(arm{best + 1})", SimplePolicy(p)
    if isinstance(cfg.reference, dict):
        return cfg.reference.get("label", cfg.reference["kind"]), cfg.resolve_policy(
            cfg.reference
        )
    raise ConfigError(f"unknown reference spec {cfg.reference!r}")


def cmd_simulate(
    cfg: ExperimentConfig, out_dir: Path | None, reps: int, parallel: int
) -> int:
    if not cfg.policies:
        raise ConfigError("simulate needs at least one policy in the config")
    if not cfg.horizons:
        raise ConfigError("simulate needs a non-empty 'horizons' list")
    out_dir = out_dir or Path(".")
    p_star_value = _stationary_optimum(cfg)
    want = set(cfg.estimators)
    for horizon in cfg.horizons:
        ref_episodes = None
        if "reference-regret" in want:
            ref_label, ref_policy = _reference_policy(cfg)
            ref_episodes = run_replications(
                cfg.arms, ref_policy, cfg.criterion, horizon, reps,
                cfg.seed, cfg.checkpoints, parallel,
            )
        for label, policy in cfg.policy_objects():
            episodes = run_replications(
                cfg.arms, policy, cfg.criterion, horizon, reps,
                cfg.seed, cfg.checkpoints, parallel,
            )
            rows = []
            if "performance" in want:
                rows += estimate_performance(episodes)
            if "proxy-regret" in want and p_star_value is not None:
                rows += estimate_proxy_regret(episodes, p_star_value)
            if "horizon-gap" in want and reps >= 2:
                rows += estimate_horizon_gap(episodes)
            if "reference-regret" in want and ref_episodes is not None:
                rows += estimate_reference_regret(episodes, ref_episodes)
            meta = _base_meta(cfg)
            meta.update({"policy": label, "horizon": horizon, "replications": reps})
            if "reference-regret" in want:
                meta["reference"] = ref_label
            if p_star_value is not None:
                meta["stationary-optimum"] = repr(float(p_star_value))
            report = RegretReport(rows, meta)
            safe_label = label.replace("/", "-").replace(" ", "")
            path = out_dir / f"simulate_{safe_label}_T{horizon}.csv"
            write_report_csv(path, report)
            print(f"wrote {path} ({len(rows)} rows)")
    return 0


def cmd_check(cfg: ExperimentConfig, out_dir: Path | None) -> int:
    opts = cfg.check_options
    pairs = int(opts.get("pairs", 200))
    seed = int(opts.get("seed", cfg.seed))
    dkw_reps = int(opts.get("dkw_reps", 2000))
    results = []

    results.append(checklib.condition_c1(cfg.criterion, cfg.arms))
    results.append(checklib.condition_c2(cfg.arms))
    alpha = getattr(cfg.criterion, "alpha", None)
    if alpha is not None:
        results.append(checklib.condition_c3(cfg.arms, alpha))
        results.append(
            checklib.condition_c4(
                cfg.arms,
                alpha,
                b_alpha=opts.get("b_alpha"),
                m_alpha=opts.get("m_alpha"),
                grid_step=float(opts.get("grid_step", 1e-3)),
            )
        )
        results.append(checklib.condition_c5(cfg.arms, alpha))

    results.append(checklib.convexity_check(cfg.criterion, cfg.arms, pairs, seed))
    # the modulus suite validates the criterion's own certificate; radii
    # overrides are policy-exploration knobs, not stability claims
    cert = cfg.criterion.stability_certificate(cfg.arms)
    if cert is not None:
        results.append(checklib.modulus_check(cfg.criterion, cfg.arms, cert, pairs, seed))
    try:
        params = cfg.resolve_policy({"kind": "ucb", "alpha": cfg.ucb_alpha}).params
        results.append(checklib.phi_identity_check(params))
    except ConfigError:
        pass
    try:
        smooth = cfg.criterion.smoothness_certificate(cfg.arms)
    except DomainError:
        smooth = None
    if smooth is not None:
        results.append(
            checklib.residual_check(cfg.criterion, cfg.arms, smooth, max(20, pairs // 4), seed)
        )
    results.append(checklib.galois_check(cfg.arms, n_points=100, seed=seed))
    dkw_grid = opts.get("dkw_grid", [(25, 0.2), (100, 0.1), (100, 0.2)])
    results.append(
        checklib.dkw_grid_check(cfg.arms[0], dkw_grid, reps=dkw_reps, seed=seed)
    )
    if cfg.criterion.tag == "cvar":
        results.append(checklib.cvar_order_statistic_check(seed=seed))

    for res in results:
        print(res.line())
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} checks passed")
    if out_dir is not None:
        path = out_dir / "check.csv"
        with open(path, "w", encoding="utf-8") as fh:
            for key, val in sorted(_base_meta(cfg).items()):
                fh.write(f"# {key}={val}\n")
            fh.write("check,passed,detail\n")
            for res in results:
                detail = res.detail.replace(",", ";")
                fh.write(f"{res.name},{int(res.passed)},{detail}\n")
        print(f"wrote {path}")
    return 2 if n_fail else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="riskbandits",
        description="Risk-criterion bandit simulator and analysis toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("eval", "oracle", "simulate", "check"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="experiment YAML file")
        p.add_argument("--out", default=None, help="output directory for CSV files")
        p.add_argument("--seed", type=int, default=None, help="override the base seed")
        if name == "simulate":
            p.add_argument("--reps", type=int, default=None, help="override replications")
            p.add_argument("--parallel", type=int, default=1, help="worker processes")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        out_dir = None
        if args.out is not None:
            out_dir = Path(args.out)
            out_dir.mkdir(parents=True, exist_ok=True)
        elif cfg.output is not None:
            out_dir = Path(cfg.output)
            out_dir.mkdir(parents=True, exist_ok=True)

        if args.command == "eval":
            return cmd_eval(cfg, out_dir)
        if args.command == "oracle":
            return cmd_oracle(cfg, out_dir)
        if args.command == "simulate":
            reps = args.reps if args.reps is not None else cfg.replications
            return cmd_simulate(cfg, out_dir, reps, args.parallel)
        if args.command == "check":
            return cmd_check(cfg, out_dir)
    except (ConfigError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
