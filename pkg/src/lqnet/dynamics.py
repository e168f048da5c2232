"""Stochastic gradient play over sampled networks and random participation.

Two learning processes are provided:

* :func:`run_time_varying` -- every player takes a projected gradient step
  against a freshly sampled network ``A^k``;
* :func:`run_dynamic_population` -- only participating players move, with
  step ``tau_k / pbar_i``, against ``A^k P^k``.

Iteration ``k`` of trial ``t`` draws all its randomness from
``iteration_rng(seed, t, k)``, so runs replay exactly and trials are
independent.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .equilibrium import solve_static
from .game import GameConstants, GameSpec, feasible, game_constants, game_jacobian, project
from .exceptions import DegenerateDenominator
from .metrics import J_FLOOR, stage_gaps
from .networks import ParticipationModel, compensated_effective_mean, iteration_rng

__all__ = [
    "Harmonic",
    "FixedL",
    "ConstantStep",
    "step_value",
    "schedule_from_dict",
    "schedule_to_dict",
    "Probes",
    "Trajectory",
    "TRAJECTORY_COLUMNS",
    "write_trajectories_csv",
    "uniform_noise",
    "perturbation",
    "population_perturbation",
    "perturbation_statistics",
    "run_time_varying",
    "run_dynamic_population",
]


@dataclass(frozen=True)
class Harmonic:
    """``tau_k = c / (k + k0)``."""

    c: float
    k0: int = 1

    def __post_init__(self):
        if self.c <= 0 or self.k0 < 1:
            raise ValueError("Harmonic schedule needs c > 0 and k0 >= 1")


@dataclass(frozen=True)
class FixedL:
    """``tau_k = 1 / (L (k + 1))`` with ``L`` the Lipschitz constant over the expected network."""


@dataclass(frozen=True)
class ConstantStep:
    """Fixed step. Not diminishing, so only meaningful for a degenerate (constant) network."""

    tau: float


def step_value(sched, k: int, constants: GameConstants | None = None) -> float:
    if k < 0:
        raise ValueError("iteration index must be nonnegative")
    if isinstance(sched, Harmonic):
        return sched.c / (k + sched.k0)
    if isinstance(sched, FixedL):
        if constants is None:
            raise ValueError("FixedL schedule needs the game constants")
        return 1.0 / (constants.L * (k + 1))
    if isinstance(sched, ConstantStep):
        return sched.tau
    raise TypeError(f"unknown step schedule {sched!r}")


def schedule_from_dict(d: dict):
    kind = d.get("type", "fixed_l")
    if kind == "fixed_l":
        return FixedL()
    if kind == "harmonic":
        return Harmonic(float(d["c"]), int(d.get("k0", 1)))
    if kind == "constant":
        return ConstantStep(float(d["tau"]))
    raise ValueError(f"unknown schedule type {kind!r}")


def schedule_to_dict(sched) -> dict:
    if isinstance(sched, FixedL):
        return {"type": "fixed_l"}
    if isinstance(sched, Harmonic):
        return {"type": "harmonic", "c": sched.c, "k0": sched.k0}
    return {"type": "constant", "tau": sched.tau}


@dataclass
class Probes:
    """What a run records beyond step sizes and distances.

    ``check_feasible`` asserts every iterate lies in the strategy set.
    """

    gap: bool = False
    normalized_gap: bool = True
    snapshots: bool = False
    perturbation: bool = False
    check_feasible: bool = False


TRAJECTORY_COLUMNS = ("trial", "k", "tau", "dist_to_eq", "gap", "participants")


@dataclass
class Trajectory:
    """Per-iteration records of one run, ``k = 0 .. iters`` inclusive."""

    reference: np.ndarray
    constants: GameConstants
    tau: np.ndarray
    dist: np.ndarray
    gap: np.ndarray | None = None
    participants: np.ndarray | None = None
    snapshots: np.ndarray | None = None
    perturbation_sq: np.ndarray | None = None
    perturbation_bound: float | None = None
    trial: int = 0

    @property
    def k(self) -> np.ndarray:
        return np.arange(self.dist.size)

    def __len__(self):
        return self.dist.size

    def rows(self):
        for k in range(len(self)):
            gap = "" if self.gap is None else repr(float(self.gap[k]))
            part = "" if self.participants is None else str(int(self.participants[k]))
            yield (self.trial, k, repr(float(self.tau[k])), repr(float(self.dist[k])), gap, part)


def write_trajectories_csv(trajectories, path) -> None:
    """Write runs as CSV with columns ``trial,k,tau,dist_to_eq,gap,participants``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRAJECTORY_COLUMNS)
        for traj in trajectories:
            w.writerows(traj.rows())


def uniform_noise(half_width: float):
    """Zero-mean bounded noise hook: i.i.d. uniform on ``[-half_width, half_width]``."""

    def draw(rng, shape):
        return rng.uniform(-half_width, half_width, size=shape)

    return draw


def perturbation(spec: GameSpec, s, A_sample, A_mean) -> np.ndarray:
    """``F(s, A_sample) - F(s, A_mean) = -alpha/N ((A_sample - A_mean) kron I) s``."""
    S = spec.blocks(s)
    D = np.asarray(A_sample, dtype=float) - np.asarray(A_mean, dtype=float)
    return (-(spec.alpha / spec.n_players) * (D @ S)).ravel()


def population_perturbation(spec: GameSpec, s, A, P, pbar, A_mean) -> np.ndarray:
    """Noise that turns random-participation play into stochastic gradient play over ``Abar Pbar``.

    With ``At_ij = P_ii A_ij P_jj / pbar_i`` (whose mean is ``Abar Pbar``),

        w_i = alpha/N sum_j (E[At_ij] - At_ij) s_j + (P_ii - pbar_i) / pbar_i (Q_i s_i - theta_i)

    ``A`` is the sampled network, ``P`` the participation matrix or its
    diagonal, and ``A_mean`` the expected network ``Abar``.
    """
    S = spec.blocks(s)
    p = np.asarray(P, dtype=float)
    p = np.diag(p) if p.ndim == 2 else p
    pbar = np.asarray(pbar, dtype=float)
    At = (p[:, None] * np.asarray(A, dtype=float) * p[None, :]) / pbar[:, None]
    EAt = np.asarray(A_mean, dtype=float) * pbar[None, :]
    own = np.einsum("inm,im->in", spec.q, S) - spec.theta
    w = spec.alpha / spec.n_players * ((EAt - At) @ S) + ((p - pbar) / pbar)[:, None] * own
    return w.ravel()


def perturbation_statistics(spec: GameSpec, model, s, samples: int, seed: int = 0, batch: int = 10_000):
    """Monte Carlo mean, standard error and worst squared norm of the perturbation at fixed ``s``.

    Returns ``(mean, stderr, max_sq_norm)`` with ``mean`` and ``stderr`` of
    length ``N * n``.
    """
    S = spec.blocks(s)
    Abar = model.mean()
    total = np.zeros(S.size)
    total_sq = np.zeros(S.size)
    worst = 0.0
    for c, start in enumerate(range(0, samples, batch)):
        size = min(batch, samples - start)
        A = model.sample(iteration_rng(seed, c), size=size)
        W = (-(spec.alpha / spec.n_players) * ((A - Abar) @ S)).reshape(size, -1)
        total += W.sum(axis=0)
        total_sq += (W**2).sum(axis=0)
        worst = max(worst, float((W**2).sum(axis=1).max()))
    mean = total / samples
    var = np.maximum(total_sq / samples - mean**2, 0.0) * samples / max(samples - 1, 1)
    return mean, np.sqrt(var / samples), worst


def _run(spec, model, pm, sched, iters, s0, seed, trial, probes, aggregate_noise):
    probes = probes or Probes()
    N, n = spec.n_players, spec.dim
    if pm is None:
        ref_net = model.mean()
    else:
        if pm.n_players != N:
            raise ValueError("participation model size does not match the game")
        ref_net = compensated_effective_mean(model, pm)
    if model.n_nodes != N:
        raise ValueError("network model size does not match the game")
    constants = game_constants(spec, ref_net, require=True)
    sbar = solve_static(spec, ref_net)

    s = project(spec.lo if s0 is None else s0, spec)
    if s0 is not None and not feasible(s0, spec):
        raise ValueError("initial profile is not feasible")

    taus = np.array([step_value(sched, k, constants) for k in range(iters + 1)])
    dist = np.empty(iters + 1)
    gap = np.empty(iters + 1) if probes.gap else None
    participants = np.empty(iters + 1, dtype=np.int64) if pm is not None else None
    snaps = np.empty((iters + 1, N * n)) if probes.snapshots else None
    pert = np.empty(iters + 1) if probes.perturbation else None
    if pm is not None:
        step_scale = np.repeat(1.0 / pm.pbar, n)

    for k in range(iters + 1):
        rng = iteration_rng(seed, trial, k)
        A = model.sample(rng)
        if pm is not None:
            mask = pm.sample_mask(rng)
            A_raw = A
            A = A * mask[None, :].astype(float)
            participants[k] = int(mask.sum())

        if probes.check_feasible:
            assert feasible(s, spec), f"iterate {k} left the strategy set"
        dist[k] = np.linalg.norm(s - sbar)
        if snaps is not None:
            snaps[k] = s
        if gap is not None:
            g, Jstar = stage_gaps(spec, s, A)
            if probes.normalized_gap:
                if np.any(np.abs(Jstar) < J_FLOOR):
                    raise DegenerateDenominator(f"|J*| fell below {J_FLOOR:g} at iteration {k}")
                gap[k] = np.max(np.abs(g / Jstar))
            else:
                gap[k] = g.max()
        if pert is not None:
            if pm is None:
                w = perturbation(spec, s, A, ref_net)
            else:
                w = population_perturbation(spec, s, A_raw, mask, pm.pbar, model.mean())
            pert[k] = float(w @ w)
        if k == iters:
            break

        F = game_jacobian(spec, s, A)
        if aggregate_noise is not None:
            F = F - spec.alpha * aggregate_noise(rng, F.shape)
        if pm is None:
            s = project(s - taus[k] * F, spec)
        else:
            moved = project(s - (taus[k] * step_scale) * F, spec)
            s = np.where(np.repeat(mask, n), moved, s)

    return Trajectory(
        reference=sbar,
        constants=constants,
        tau=taus,
        dist=dist,
        gap=gap,
        participants=participants,
        snapshots=snaps,
        perturbation_sq=pert,
        perturbation_bound=N * spec.alpha**2 * spec.s_max**2,
        trial=trial,
    )


def run_time_varying(spec: GameSpec, model, sched, iters: int, s0=None, seed: int = 0, trial: int = 0,
                     probes: Probes | None = None, aggregate_noise=None) -> Trajectory:
    """Projected gradient play ``s <- proj(s - tau_k F(s, A^k))`` with a fresh ``A^k`` each step.

    Distances are measured to the equilibrium over the expected network.
    ``aggregate_noise(rng, shape)``, if given, is added to every player's
    local aggregate before the step.

    Raises
    ------
    AssumptionViolated
        If the game over the expected network is not strongly monotone.
    """
    return _run(spec, model, None, sched, iters, s0, seed, trial, probes, aggregate_noise)


def run_dynamic_population(spec: GameSpec, model, pm: ParticipationModel, sched, iters: int, s0=None,
                           seed: int = 0, trial: int = 0, probes: Probes | None = None,
                           aggregate_noise=None) -> Trajectory:
    """Gradient play where player ``i`` moves only when ``P_ii^k = 1``, with step ``tau_k / pbar_i``.

    The game at iteration ``k`` is played over ``A^k P^k``; distances are
    measured to the equilibrium over ``Abar Pbar``.
    """
    return _run(spec, model, pm, sched, iters, s0, seed, trial, probes, aggregate_noise)
