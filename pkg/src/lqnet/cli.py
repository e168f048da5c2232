"""Command-line entry point: ``lqnet {solve,simulate,validate-bound,demo-fig1,demo-fig2}``.

Exit status is 0 on success, 2 when the game is not strongly monotone and
1 on I/O or configuration errors. ``LQNET_OUTPUT_DIR`` overrides the default
output directory when ``--out`` is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .equilibrium import solve_static, vi_residual
from .exceptions import AssumptionViolated, NotConverged
from .experiment import build_problem, builtin_config, load_config, run_experiment, write_svg
from .game import GameSpec, check_network, game_constants
from .metrics import validate_concentration
from .networks import compensated_effective_mean, network_from_dict

OUT_ENV = "LQNET_OUTPUT_DIR"
DEFAULT_OUT = "results"


def _out_dir(args) -> str:
    return args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _load_network(path, n_players: int) -> np.ndarray:
    """A bare matrix, ``{"A": matrix}``, or a network model (whose mean is used)."""
    if path is None:
        return np.zeros((n_players, n_players))
    d = _read_json(path)
    if isinstance(d, dict) and "type" in d:
        A = network_from_dict(d).mean()
    else:
        A = np.asarray(d["A"] if isinstance(d, dict) else d, dtype=float)
    return check_network(A, n_players)


def cmd_solve(args) -> int:
    spec = GameSpec.from_dict(_read_json(args.spec))
    A = _load_network(args.network, spec.n_players)
    s = solve_static(spec, A, tol=args.tol)
    c = game_constants(spec, A)
    out = {
        "equilibrium": s.tolist(),
        "vi_residual": vi_residual(spec, A, s),
        "constants": {"L": c.L, "mu": c.mu, "tau_star": c.tau_star},
    }
    print(json.dumps(out, indent=2))
    return 0


def _configs(args):
    cfg = load_config(args.config) if hasattr(args, "config") and args.config else builtin_config(args.builtin)
    cfg = cfg.with_overrides(seed=args.seed, trials=getattr(args, "trials", None), iters=getattr(args, "iters", None))
    return cfg, cfg.expand()


def _simulate(args, stem_default=None) -> int:
    cfg, runs = _configs(args)
    out = _out_dir(args)
    reports = []
    for run in runs:
        report = run_experiment(run, workers=args.workers, snapshots=args.snapshots)
        paths = report.write(out, trajectories=args.trajectories)
        if args.snapshots:
            path = os.path.join(out, f"{run.name}_snapshots.npy")
            np.save(path, np.stack([t.snapshots for t in report.trajectories]))
            paths.append(path)
        for p in paths:
            print(p)
        reports.append(report)
    if args.svg:
        for p in write_svg(reports, out, stem_default or cfg.name):
            print(p)
    return 0


def cmd_validate_bound(args) -> int:
    cfg, runs = _configs(args)
    results = []
    for run in runs:
        spec, model, pm = build_problem(run)
        ref = model.mean() if pm is None else compensated_effective_mean(model, pm)
        sbar = solve_static(spec, ref)
        rep = validate_concentration(spec, model, sbar, args.delta, args.trials_bound, seed=run.seed, pm=pm)
        results.append({"name": run.name, **rep.to_dict()})
    print(json.dumps(results if len(results) > 1 else results[0], indent=2))
    return 0


def _add_run_options(p, with_trials=True):
    p.add_argument("--seed", type=int, default=None, help="root seed (overrides the config)")
    p.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or ./{DEFAULT_OUT})")
    p.add_argument("--snapshots", action="store_true", help="also save every iterate as <name>_snapshots.npy")
    p.add_argument("--svg", action="store_true", help="write SVG line charts (needs matplotlib)")
    p.add_argument("--trajectories", action="store_true", help="also write per-trial <name>_trials.csv")
    p.add_argument("--workers", type=int, default=1, help="processes for running trials")
    if with_trials:
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--iters", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lqnet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="Nash equilibrium of a GameSpec over a fixed network")
    p.add_argument("--spec", required=True)
    p.add_argument("--network", default=None, help="matrix or network-model JSON (default: no edges)")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("simulate", help="run a JSON experiment config")
    p.add_argument("--config", required=True)
    _add_run_options(p)
    p.set_defaults(func=_simulate)

    p = sub.add_parser("validate-bound", help="empirical check of the epsilon-Nash concentration bound")
    p.add_argument("--config", required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--trials", dest="trials_bound", type=int, required=True, help="sampled stage networks")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_validate_bound)

    for name, builtin in [("demo-fig1", "fig1"), ("demo-fig2", "fig2")]:
        what = "fixed" if builtin == "fig1" else "random-participation"
        p = sub.add_parser(name, help=f"pricing case study, {what} population, N in {{20, 50, 100}}")
        _add_run_options(p)
        p.set_defaults(func=_simulate, builtin=builtin)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AssumptionViolated as exc:
        print(f"lqnet: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError, TypeError, NotConverged) as exc:
        print(f"lqnet: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
