"""Command-line front door.

Subcommands: ``analyze`` (closed-form NE and W), ``simulate`` (replicated
discrete-event runs), ``validate`` (analytic-vs-simulation error harness),
``optimize`` (constrained grid search), ``policy-compare`` (N-policy /
T-policy scenarios) and ``bs`` (base-station case sweeps).

Exit codes: 0 success, 1 infeasible or empty result, 2 invalid input,
3 internal numerical failure.  Simulation-bearing commands require --seed
and are byte-identical when re-run with identical flags.  CSV files land in
--out or the directory named by the BMVQ_OUT_DIR environment variable.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import basestation, compare, optimizer, validation
from .config import (
    PolicyConfig,
    PolicyKind,
    PowerProfile,
    TrafficModel,
    load_config_file,
    validate_config,
)
from .delay import expected_waiting_time
from .energy import expected_normalized_energy
from .errors import BmvqError, ConfigError, RhoUnityError
from .markov import DEFAULT_EPSILON, MarkovEngine
from .simulator import default_horizon, replicate

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_BAD_INPUT = 2
EXIT_NUMERICAL = 3


def _parse_floats(text: str):
    return tuple(float(x) for x in text.replace(",", " ").split())


def _parse_ints(text: str):
    return tuple(int(x) for x in text.replace(",", " ").split())


def _add_model_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat key=value config file (overrides flags)")
    p.add_argument("--lambda", dest="lam", type=float, help="arrival rate")
    p.add_argument("--mu", type=float, help="service rate")
    p.add_argument("--cap", type=int, default=50, help="queue capacity K")
    p.add_argument("--policy", choices=["bmv", "npolicy", "none"], default="bmv")
    p.add_argument("--stage-lengths", type=_parse_floats, default=(),
                   help="vacation stage lengths, space or comma separated")
    p.add_argument("--stage-powers", type=_parse_floats, default=(),
                   help="per-stage sleep powers")
    p.add_argument("--n-threshold", type=int, default=1)
    p.add_argument("--p-active", type=float, default=130.0)
    p.add_argument("--p-idle", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)


def _build_config(args):
    if args.config:
        return load_config_file(args.config)
    if args.lam is None or args.mu is None:
        raise ConfigError([("MissingKey", "--lambda and --mu are required "
                            "(or pass --config)")])
    stage_powers = args.stage_powers
    if args.policy == "bmv" and args.stage_lengths and not stage_powers:
        stage_powers = (75.0,) * len(args.stage_lengths)
    if args.policy == "npolicy" and not stage_powers:
        stage_powers = (75.0,)
    return validate_config(
        TrafficModel(lam=args.lam, mu=args.mu),
        PolicyConfig(kind=PolicyKind(args.policy),
                     stage_lengths=args.stage_lengths,
                     n_threshold=args.n_threshold, queue_cap=args.cap),
        PowerProfile(p_active=args.p_active, stage_powers=stage_powers,
                     p_idle=args.p_idle),
    )


def _out_path(args, default_name):
    if args.out:
        return args.out
    out_dir = os.environ.get("BMVQ_OUT_DIR")
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        return os.path.join(out_dir, default_name)
    return None


def _emit(payload: dict, path=None):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_analyze(args) -> int:
    config = _build_config(args)
    engine = MarkovEngine(config.traffic, config.policy.queue_cap,
                          epsilon=args.epsilon)
    energy = expected_normalized_energy(config, engine, args.epsilon)
    delay = expected_waiting_time(config, engine, args.epsilon)
    _emit({
        "config": config.to_json_dict(),
        "ne": energy.ne,
        "w": delay.w,
        "energy": energy.to_json_dict(),
        "delay": delay.to_json_dict(),
    }, _out_path(args, "analyze.json"))
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = _build_config(args)
    horizon = args.horizon or default_horizon(config.traffic.lam)
    metrics = replicate(config, horizon, args.seed, args.reps,
                        warmup=args.warmup, workers=args.workers)
    _emit(metrics.to_json_dict(), _out_path(args, "simulate.json"))
    return EXIT_OK


def cmd_validate(args) -> int:
    grid = validation.ValidationGrid(
        lambdas=args.lambdas or validation.DEFAULT_LAMBDAS,
        mu=args.mu if args.mu is not None else 0.8,
        n_stages=args.n_stages, queue_cap=args.cap)
    ne_report, w_report, rows = validation.run_validation(
        grid, args.seed, reps=args.reps, horizon_arrivals=args.horizon_arrivals,
        workers=args.workers)
    csv_path = _out_path(args, "validation.csv")
    if csv_path:
        validation.write_validation_csv(csv_path, rows)
    _emit({"ne_report": ne_report.to_json_dict(),
           "w_report": w_report.to_json_dict()},
          csv_path and csv_path.replace(".csv", ".json"))
    return EXIT_OK


def cmd_optimize(args) -> int:
    traffic = TrafficModel(lam=args.lam, mu=args.mu)
    power = PowerProfile(p_active=args.p_active,
                         stage_powers=args.stage_powers or (75.0,),
                         p_idle=args.p_idle)
    pool = optimizer.SearchPool(lv_pool=args.lv_pool, nv_pool=args.nv_pool,
                                d_const=args.dmax)
    results = {}
    if args.mode in ("analytic", "both"):
        results["analytic"] = optimizer.opt_search(
            pool, optimizer.analytic_evaluator(traffic, power, args.cap,
                                               args.epsilon))
    if args.mode in ("sim", "both"):
        if args.seed is None:
            raise ConfigError([("MissingKey", "--seed is required for simulation")])
        results["sim"] = optimizer.brute_force_sim(
            traffic, pool, power, args.seed, args.reps, horizon=args.horizon,
            queue_cap=args.cap, workers=args.workers)
    payload = {k: v.to_json_dict() for k, v in results.items()}
    if args.mode == "both" and results["analytic"].best and results["sim"].best:
        ana_cell = results["sim"].cell(*results["analytic"].best)
        gt_cell = results["sim"].cell(*results["sim"].best)
        payload["relative_error"] = [
            abs(ana_cell.ne - gt_cell.ne) / gt_cell.ne,
            abs(ana_cell.w - gt_cell.w) / gt_cell.w,
        ]
    for name, res in results.items():
        csv_path = _out_path(args, f"optimize_{name}.csv")
        if csv_path:
            res.write_csv(csv_path)
    _emit(payload, _out_path(args, "optimize.json"))
    return EXIT_OK if all(r.best for r in results.values()) else EXIT_INFEASIBLE


def cmd_policy_compare(args) -> int:
    if args.scenario == "bmv-vs-n":
        rows = compare.bmv_vs_n_sweep(
            n_values=args.n_values or range(1, 11), base_seed=args.seed,
            reps=args.reps, horizon=args.horizon, workers=args.workers)
    else:
        rows = compare.bmv_vs_t_sweep(
            total_vacation=args.total_vacation,
            n_values=args.n_values or range(1, 8), base_seed=args.seed,
            reps=args.reps, horizon=args.horizon, workers=args.workers)
    path = _out_path(args, f"{args.scenario}.csv")
    if path:
        compare.write_compare_csv(path, rows)
    else:
        print("policy,parameter,ne,w,w_ci_halfwidth")
        for r in rows:
            print(f"{r.policy},{r.parameter},{r.ne},{r.w},{r.w_ci_halfwidth}")
    return EXIT_OK


def cmd_bs(args) -> int:
    if args.case == 1:
        rows = basestation.case1_sweep(
            lambda_grid=args.lambdas, mu=args.mu if args.mu else basestation.MU_CASE1)
    else:
        rows = basestation.case2_sweep(
            rho_grid=args.rhos,
            lambda_fixed=args.lam if args.lam else basestation.LAMBDA_CASE2)
    if args.json:
        _emit(basestation.sweep_to_json_dict(rows),
              _out_path(args, f"bs_case{args.case}.json"))
        return EXIT_OK
    path = _out_path(args, f"bs_case{args.case}.csv")
    if path:
        basestation.write_sweep_csv(path, rows)
    else:
        print("lambda,mu,rho,p_active,ne,w,power_avg,energy_per_packet")
        for r in rows:
            print(f"{r.lam},{r.mu},{r.rho},{r.p_active},{r.ne},{r.w},"
                  f"{r.power_avg},{r.energy_per_packet}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bmvq",
                                 description="bounded multi-vacation queueing lab")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="closed-form NE and W for one config")
    _add_model_flags(p)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("simulate", help="replicated discrete-event simulation")
    _add_model_flags(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--reps", type=int, default=30)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--warmup", type=float, default=0.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("validate", help="analytic-vs-simulation error harness")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--reps", type=int, default=30)
    p.add_argument("--mu", type=float, default=0.8)
    p.add_argument("--cap", type=int, default=50)
    p.add_argument("--n-stages", type=int, default=4)
    p.add_argument("--lambdas", type=_parse_floats, default=None)
    p.add_argument("--horizon-arrivals", type=float, default=1e5,
                   help="horizon per instance, in expected arrivals")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("optimize", help="delay-constrained energy grid search")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--cap", type=int, default=50)
    p.add_argument("--dmax", type=float, required=True, help="waiting-time bound")
    p.add_argument("--lv-pool", type=_parse_floats,
                   default=optimizer.CASE_STUDY_LV_POOL)
    p.add_argument("--nv-pool", type=_parse_ints,
                   default=optimizer.CASE_STUDY_NV_POOL)
    p.add_argument("--mode", choices=["analytic", "sim", "both"],
                   default="analytic")
    p.add_argument("--p-active", type=float, default=130.0)
    p.add_argument("--p-idle", type=float, default=None)
    p.add_argument("--stage-powers", type=_parse_floats, default=(75.0,))
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--reps", type=int, default=30)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_optimize)

    p = sub.add_parser("policy-compare", help="N-policy / T-policy scenarios")
    p.add_argument("--scenario", choices=["bmv-vs-n", "bmv-vs-t"], required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--n-values", type=_parse_ints, default=None)
    p.add_argument("--total-vacation", type=float, default=0.01)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_policy_compare)

    p = sub.add_parser("bs", help="base-station case sweeps (analytic)")
    p.add_argument("--case", type=int, choices=[1, 2], required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--lambdas", type=_parse_floats, default=None,
                   help="case-1 input-rate grid")
    p.add_argument("--rhos", type=_parse_floats, default=None,
                   help="case-2 traffic-load grid")
    p.add_argument("--json", action="store_true",
                   help="emit the table as JSON instead of CSV")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_bs)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, RhoUnityError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return EXIT_BAD_INPUT
    except BmvqError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
