"""Equilibrium quality: best responses, suboptimality gaps and concentration bounds."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import DegenerateDenominator, NotConverged
from .game import GameSpec
from .networks import effective_network, iteration_rng

__all__ = [
    "J_FLOOR",
    "best_responses",
    "best_response_cost",
    "stage_gaps",
    "suboptimality_gap",
    "epsilon_bound",
    "ConcentrationReport",
    "validate_concentration",
]

J_FLOOR = 1e-9
BR_TOL = 1e-10


def _local_term(spec: GameSpec, S, A):
    # theta_i + alpha/N sum_j A_ij s_j, for one network (N, N) or a stack (T, N, N)
    return spec.theta + (spec.alpha / spec.n_players) * (A @ S)


def _qform(Q, X, Y):
    # x' Q y per player
    if Q.shape[-1] == 1:
        return Q[..., 0, 0] * X[..., 0] * Y[..., 0]
    return np.einsum("...n,...nm,...m->...", X, Q, Y)


def _dot(X, Y):
    if X.shape[-1] == 1:
        return X[..., 0] * Y[..., 0]
    return np.einsum("...n,...n->...", X, Y)


def _box_qp(Q, b, lo, hi, step, tol=BR_TOL, max_iter=100_000):
    """Minimize ``0.5 x'Qx - b'x`` over boxes, vectorized over leading axes.

    Projected gradient with per-problem step ``2 / (lambda_min + lambda_max)``,
    warm-started at the clamped unconstrained minimizer. In one dimension
    that start is already the fixed point.
    """
    if Q.shape[-1] == 1:
        return np.clip(b / Q[..., 0], lo, hi)
    x = np.clip(np.linalg.solve(Q, b[..., None])[..., 0], lo, hi)
    t = step[..., None]
    for _ in range(max_iter):
        g = np.einsum("...nm,...m->...n", Q, x) - b
        x_new = np.clip(x - t * g, lo, hi)
        if np.max(np.linalg.norm(x_new - x, axis=-1), initial=0.0) <= tol:
            return x_new
        x = x_new
    raise NotConverged("best-response solver hit its iteration cap")


def _best_responses(spec: GameSpec, S, A):
    b = _local_term(spec, S, A)
    lo = spec.lo.reshape(S.shape)
    hi = spec.hi.reshape(S.shape)
    if S.shape[-1] == 1:
        Q, step = spec.q, None
    else:
        Q = np.broadcast_to(spec.q, b.shape[:-1] + spec.q.shape[-2:])
        step = np.broadcast_to(2.0 / spec.eig_extremes.sum(axis=1), b.shape[:-1])
    X = _box_qp(Q, b, lo, hi, step)
    Jstar = 0.5 * _qform(spec.q, X, X) - _dot(X, b)
    return X, Jstar, b


def best_responses(spec: GameSpec, s, net):
    """Best responses of every player to ``s`` over ``net``.

    ``net`` may be a single ``(N, N)`` network or a ``(T, N, N)`` stack, in
    which case the outputs gain a leading axis. Returns ``(X, Jstar)``: the
    best-response strategies ``(..., N, n)`` and their costs ``(..., N)``.
    """
    X, Jstar, _ = _best_responses(spec, spec.blocks(s), np.asarray(net, dtype=float))
    return X, Jstar


def best_response_cost(spec: GameSpec, i: int, s, net) -> float:
    """``inf`` over player ``i``'s box of their cost, the others held at ``s``."""
    if not 0 <= i < spec.n_players:
        raise IndexError(f"player index {i} out of range")
    S = spec.blocks(s)
    A = np.asarray(net, dtype=float)
    b = spec.theta[i] + spec.alpha / spec.n_players * (A[i] @ S)
    lo_i, hi_i = spec.boxes[i].lo, spec.boxes[i].hi
    lmin, lmax = spec.eig_extremes[i]
    x = _box_qp(spec.q[i][None], b[None], lo_i, hi_i, np.array([2.0 / (lmin + lmax)]))[0]
    return float(0.5 * x @ spec.q[i] @ x - x @ b)


def stage_gaps(spec: GameSpec, s, net):
    """Per-player regret ``J_i(s) - J_i^*`` and ``J_i^*`` (vectorized like :func:`best_responses`).

    The regret is evaluated as a difference of quadratics to avoid cancellation.
    """
    S = spec.blocks(s)
    X, Jstar, b = _best_responses(spec, S, np.asarray(net, dtype=float))
    D = S - X
    gaps = 0.5 * _qform(spec.q, D, S + X) - _dot(D, b)
    # s_i itself is feasible, so the infimum never exceeds J_i(s); clip roundoff
    return np.maximum(gaps, 0.0), Jstar


def suboptimality_gap(spec: GameSpec, s, net, normalized: bool = True) -> float:
    """Largest per-player suboptimality gap at ``s``.

    Normalized: ``max_i |(J_i - J_i^*) / J_i^*|``. Unnormalized:
    ``max_i (J_i - J_i^*)``.

    Raises
    ------
    DegenerateDenominator
        When normalizing and some ``|J_i^*| < J_FLOOR``.
    """
    gaps, Jstar = stage_gaps(spec, s, net)
    if not normalized:
        return float(gaps.max())
    if np.any(np.abs(Jstar) < J_FLOOR):
        bad = int(np.argmin(np.abs(Jstar)))
        raise DegenerateDenominator(f"|J*| of player {bad} is {abs(Jstar[bad]):.3g} < {J_FLOOR:g}")
    return float(np.max(np.abs(gaps / Jstar)))


def epsilon_bound(alpha: float, s_max: float, n: int, N: int, delta: float) -> float:
    """High-probability epsilon for which the expected-network equilibrium is epsilon-Nash
    in a sampled stage game: ``2 |alpha| s_max^2 sqrt(n ln(2 n N / delta) / (2 N))``.
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if N < 1 or n < 1:
        raise ValueError("N and n must be positive")
    if s_max < 0:
        raise ValueError("s_max must be nonnegative")
    return 2.0 * abs(alpha) * s_max**2 * math.sqrt(n * math.log(2.0 * n * N / delta) / (2.0 * N))


@dataclass
class ConcentrationReport:
    delta: float
    bound: float
    trials: int
    violations: int
    violation_rate: float
    max_observed_gap: float
    gap_quantiles: dict

    def to_dict(self) -> dict:
        return asdict(self)


def validate_concentration(spec: GameSpec, model, sbar, delta: float, trials: int, seed: int = 0,
                           pm=None, batch: int = 100) -> ConcentrationReport:
    """Sample stage networks and count those where ``sbar`` misses the epsilon-Nash bound.

    Each stage uses ``A^k`` (or ``A^k P^k`` when a participation model is
    given) and records the largest unnormalized player gap at ``sbar``.
    Stages are drawn in batches, each batch from its own stream.
    """
    bound = epsilon_bound(spec.alpha, spec.s_max, spec.dim, spec.n_players, delta)
    worst = np.empty(trials)
    for c, start in enumerate(range(0, trials, batch)):
        size = min(batch, trials - start)
        rng = iteration_rng(seed, c)
        A = model.sample(rng, size=size)
        if pm is not None:
            A = effective_network(A, pm.sample_mask(rng, size=size))
        gaps, _ = stage_gaps(spec, sbar, A)
        worst[start:start + size] = gaps.max(axis=-1)
    violations = int(np.sum(worst > bound))
    qs = (0.5, 0.9, 0.99, 1.0)
    return ConcentrationReport(
        delta=float(delta),
        bound=float(bound),
        trials=int(trials),
        violations=violations,
        violation_rate=violations / trials,
        max_observed_gap=float(worst.max()),
        gap_quantiles={str(q): float(v) for q, v in zip(qs, np.quantile(worst, qs))},
    )

