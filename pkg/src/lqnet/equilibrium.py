"""Nash equilibria of LQ games over a fixed network."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .exceptions import NotConverged
from .game import GameSpec, game_constants, game_jacobian, project

__all__ = [
    "UnconstrainedSolution",
    "system_matrix",
    "gradient_play",
    "solve_static",
    "solve_unconstrained",
    "vi_residual",
]


class UnconstrainedSolution(NamedTuple):
    s: np.ndarray
    interior: bool


def system_matrix(spec: GameSpec, net) -> np.ndarray:
    """Dense ``Q - alpha/N (A kron I_n)``, the Jacobian of the game map."""
    N, n = spec.n_players, spec.dim
    Qbig = np.zeros((N * n, N * n))
    for i in range(N):
        Qbig[i * n:(i + 1) * n, i * n:(i + 1) * n] = spec.q[i]
    return Qbig - spec.alpha / N * np.kron(np.asarray(net, dtype=float), np.eye(n))


def vi_residual(spec: GameSpec, net, s) -> float:
    """Natural-map residual ``||s - proj(s - F(s))||``; zero exactly at the equilibrium."""
    s = np.asarray(s, dtype=float).ravel()
    return float(np.linalg.norm(s - project(s - game_jacobian(spec, s, net), spec)))


def gradient_play(spec: GameSpec, net, steps, iters: int, s0=None) -> np.ndarray:
    """Projected gradient play ``s <- proj(s - tau_k F(s))`` over a fixed network.

    ``steps`` is either a scalar step or a sequence of at least ``iters``
    steps. Returns all iterates as an ``(iters + 1, N * n)`` array.
    """
    s = project(spec.lo if s0 is None else s0, spec)
    taus = np.broadcast_to(np.asarray(steps, dtype=float), (iters,)) if np.ndim(steps) == 0 else steps
    out = np.empty((iters + 1, s.size))
    out[0] = s
    for k in range(iters):
        s = project(s - taus[k] * game_jacobian(spec, s, net), spec)
        out[k + 1] = s
    return out


def solve_static(spec: GameSpec, net, tau=None, tol: float = 1e-10, max_iter: int = 1_000_000, s0=None):
    """Nash equilibrium over ``net`` by fixed-step projected gradient play.

    The default step is ``mu / L**2``. Iteration stops when the natural-map
    residual (and therefore also the ``tau``-scaled fixed-point residual) is
    at most ``tol``.

    Raises
    ------
    AssumptionViolated
        If the game is not strongly monotone over ``net``.
    NotConverged
        After ``max_iter`` iterations; the exception carries the residual.
    """
    constants = game_constants(spec, net, require=True)
    if tau is None:
        tau = constants.mu / constants.L**2
    if not 0 < tau:
        raise ValueError(f"step size must be positive, got {tau}")
    # ||s - proj(s - tau F)|| <= max(1, tau) * ||s - proj(s - F)||
    stop = tol * min(1.0, 1.0 / tau)
    s = project(spec.lo if s0 is None else s0, spec)
    resid = np.inf
    for _ in range(max_iter + 1):
        F = game_jacobian(spec, s, net)
        resid = np.linalg.norm(s - project(s - F, spec))
        if resid <= stop:
            return s
        s = project(s - tau * F, spec)
    raise NotConverged(f"gradient play did not reach residual {tol:g} in {max_iter} iterations",
                       residual=float(resid), iterate=s)


def solve_unconstrained(spec: GameSpec, net) -> UnconstrainedSolution:
    """Root of the game map by a dense LU solve, ignoring the boxes."""
    game_constants(spec, net, require=True)
    s = np.linalg.solve(system_matrix(spec, net), spec.theta.ravel())
    interior = bool(np.all(s > spec.lo) and np.all(s < spec.hi))
    return UnconstrainedSolution(s, interior)
