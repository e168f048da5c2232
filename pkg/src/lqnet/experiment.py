"""Seeded multi-trial experiments with CSV output.

A config is a JSON object::

    {
      "name": "fig1",
      "game": {"type": "pricing", "params": {"N": 50, "M": 100, ...}},
      "network": null,                 # pricing default: the market model
      "participation": {"pbar": 0.9},  # omit for a fixed population
      "schedule": {"type": "fixed_l"},
      "iters": 2000, "trials": 100, "seed": 0,
      "gap": "normalized",             # or "unnormalized" / "none"
      "sweep": {"N": [20, 50, 100]}    # pricing only, optional
    }

``game`` may instead be ``{"type": "lq", "spec": <GameSpec JSON>}``, in
which case ``network`` is required.
"""

from __future__ import annotations

import copy
import csv
import hashlib
import json
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .dynamics import Probes, Trajectory, run_dynamic_population, run_time_varying, schedule_from_dict
from .dynamics import write_trajectories_csv
from .game import GameConstants, GameSpec
from .networks import ParticipationModel, network_from_dict
from .pricing import PricingParams, pricing_to_lq

__all__ = [
    "ExperimentConfig",
    "RunReport",
    "SUMMARY_COLUMNS",
    "build_problem",
    "load_config",
    "builtin_config",
    "run_experiment",
    "write_svg",
]

SUMMARY_COLUMNS = ("k", "tau", "mean_dist", "std_dist", "mean_gap", "std_gap")
_GAP_MODES = ("normalized", "unnormalized", "none")


@dataclass
class ExperimentConfig:
    name: str
    game: dict
    network: dict | None = None
    participation: dict | None = None
    schedule: dict = field(default_factory=lambda: {"type": "fixed_l"})
    iters: int = 2000
    trials: int = 100
    seed: int = 0
    gap: str = "normalized"
    s0: list | None = None
    sweep: dict | None = None

    def __post_init__(self):
        if self.game.get("type") not in ("pricing", "lq"):
            raise ValueError(f"game.type must be 'pricing' or 'lq', got {self.game.get('type')!r}")
        if self.game["type"] == "lq" and self.network is None:
            raise ValueError("an 'lq' game needs an explicit network model")
        if self.gap not in _GAP_MODES:
            raise ValueError(f"gap must be one of {_GAP_MODES}")
        if self.iters < 0 or self.trials < 1:
            raise ValueError("need iters >= 0 and trials >= 1")
        if self.sweep is not None:
            if self.game["type"] != "pricing" or set(self.sweep) != {"N"}:
                raise ValueError("only pricing configs may sweep, and only over N")
        schedule_from_dict(self.schedule)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**copy.deepcopy(d))

    def to_dict(self) -> dict:
        return {name: copy.deepcopy(getattr(self, name)) for name in self.__dataclass_fields__}

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def expand(self) -> list:
        """One config per swept population size (or ``[self]`` without a sweep)."""
        if self.sweep is None:
            return [self]
        out = []
        for N in self.sweep["N"]:
            d = self.to_dict()
            d["sweep"] = None
            d["name"] = f"{self.name}_N{N}"
            d["game"]["params"]["N"] = int(N)
            out.append(ExperimentConfig.from_dict(d))
        return out

    def with_overrides(self, **kw) -> "ExperimentConfig":
        d = self.to_dict()
        d.update({k: v for k, v in kw.items() if v is not None})
        return ExperimentConfig.from_dict(d)


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return ExperimentConfig.from_dict(json.load(fh))


def builtin_config(name: str) -> ExperimentConfig:
    """The shipped ``fig1`` (fixed population) or ``fig2`` (random participation) config."""
    text = resources.files("lqnet").joinpath("configs", f"{name}.json").read_text()
    return ExperimentConfig.from_dict(json.loads(text))


def build_problem(config: ExperimentConfig):
    """Return ``(spec, network_model, participation_model_or_None)`` for a config without a sweep."""
    if config.sweep is not None:
        raise ValueError("expand() sweep configs before building them")
    part = config.participation
    if config.game["type"] == "pricing":
        params = dict(config.game["params"])
        if part is not None:
            params["pbar"] = part["pbar"]
        p = PricingParams.from_dict(params)
        spec = pricing_to_lq(p)
        model = p.network_model() if config.network is None else network_from_dict(config.network)
        pm = p.participation_model() if part is not None else None
    else:
        spec = GameSpec.from_dict(config.game["spec"])
        model = network_from_dict(config.network)
        pm = None
        if part is not None:
            pm = ParticipationModel(np.broadcast_to(np.asarray(part["pbar"], dtype=float), (spec.n_players,)))
    if model.n_nodes != spec.n_players:
        raise ValueError(f"network has {model.n_nodes} nodes but the game has {spec.n_players} players")
    return spec, model, pm


def _trial(args):
    spec, model, pm, sched, iters, s0, seed, trial, probes = args
    if pm is None:
        return run_time_varying(spec, model, sched, iters, s0=s0, seed=seed, trial=trial, probes=probes)
    return run_dynamic_population(spec, model, pm, sched, iters, s0=s0, seed=seed, trial=trial, probes=probes)


def _fmt(x) -> str:
    return "" if np.isnan(x) else repr(float(x))


@dataclass
class RunReport:
    """Trial-averaged curves of one experiment plus the per-trial trajectories."""

    config: ExperimentConfig
    reference: np.ndarray
    constants: GameConstants
    tau: np.ndarray
    mean_dist: np.ndarray
    std_dist: np.ndarray
    mean_gap: np.ndarray
    std_gap: np.ndarray
    trajectories: list

    @property
    def k(self) -> np.ndarray:
        return np.arange(self.tau.size)

    @property
    def dynamics(self) -> str:
        return "time_varying" if self.config.participation is None else "dynamic_population"

    def metadata(self) -> dict:
        return {
            "name": self.config.name,
            "config_hash": self.config.config_hash(),
            "seed": self.config.seed,
            "dynamics": self.dynamics,
            "trials": self.config.trials,
            "iters": self.config.iters,
            "constants": {"L": self.constants.L, "mu": self.constants.mu, "tau_star": self.constants.tau_star},
            "reference_equilibrium": [float(x) for x in self.reference],
            "config": self.config.to_dict(),
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(SUMMARY_COLUMNS)
            for k in range(self.tau.size):
                w.writerow((k, repr(float(self.tau[k])), _fmt(self.mean_dist[k]), _fmt(self.std_dist[k]),
                            _fmt(self.mean_gap[k]), _fmt(self.std_gap[k])))

    def write(self, out_dir, trajectories: bool = False) -> list:
        """Write ``<name>.csv`` and the ``<name>.json`` sidecar; optionally ``<name>_trials.csv``."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = [out / f"{self.config.name}.csv", out / f"{self.config.name}.json"]
        self.write_csv(paths[0])
        paths[1].write_text(json.dumps(self.metadata(), indent=2, sort_keys=True) + "\n")
        if trajectories:
            paths.append(out / f"{self.config.name}_trials.csv")
            write_trajectories_csv(self.trajectories, paths[-1])
        return paths


def run_experiment(config: ExperimentConfig, workers: int = 1, snapshots: bool = False) -> RunReport:
    """Run every trial of a (non-sweep) config and average the curves across trials.

    Trials are independent and may run in ``workers`` processes; results are
    merged by trial index, so the output does not depend on ``workers``.

    Raises
    ------
    AssumptionViolated
        If the game over the relevant expected network is not strongly monotone.
    """
    spec, model, pm = build_problem(config)
    sched = schedule_from_dict(config.schedule)
    probes = Probes(gap=config.gap != "none", normalized_gap=config.gap == "normalized", snapshots=snapshots)
    s0 = None if config.s0 is None else np.asarray(config.s0, dtype=float)
    jobs = [(spec, model, pm, sched, config.iters, s0, config.seed, t, probes) for t in range(config.trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            trajs = list(pool.map(_trial, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        trajs = [_trial(job) for job in jobs]

    first: Trajectory = trajs[0]
    if config.game["type"] == "pricing" and np.any(first.reference >= spec.hi):
        warnings.warn(f"{config.name}: price cap binds at the reference equilibrium", stacklevel=2)
    dist = np.stack([t.dist for t in trajs])
    if probes.gap:
        gap = np.stack([t.gap for t in trajs])
        mean_gap, std_gap = gap.mean(axis=0), gap.std(axis=0)
    else:
        mean_gap = std_gap = np.full(dist.shape[1], np.nan)
    return RunReport(
        config=config,
        reference=first.reference,
        constants=first.constants,
        tau=first.tau,
        mean_dist=dist.mean(axis=0),
        std_dist=dist.std(axis=0),
        mean_gap=mean_gap,
        std_gap=std_gap,
        trajectories=trajs,
    )


def write_svg(reports, out_dir, stem: str) -> list:
    """Line charts of mean distance (log scale) and mean gap, one curve per report."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    with matplotlib.rc_context({"svg.hashsalt": stem, "svg.fonttype": "none"}):
        for column, ylabel, log in [("mean_dist", "mean ||s^k - s_eq||", True), ("mean_gap", "mean gap", False)]:
            fig, ax = plt.subplots(figsize=(6, 3.5))
            for r in reports:
                ax.plot(r.k, getattr(r, column), label=r.config.name, linewidth=1)
            if log:
                ax.set_yscale("log")
            ax.set_xlabel("iteration k")
            ax.set_ylabel(ylabel)
            ax.legend()
            fig.tight_layout()
            path = out / f"{stem}_{column}.svg"
            fig.savefig(path, format="svg", metadata={"Date": None})
            plt.close(fig)
            paths.append(path)
    return paths
