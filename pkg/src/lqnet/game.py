"""Linear-quadratic network games: data model, costs, Jacobian and constants.

Player ``i`` minimizes

    J_i(s) = 0.5 * s_i' Q_i s_i - s_i' (theta_i + alpha/N * sum_j A_ij s_j)

over a box ``lo_i <= s_i <= hi_i``. Strategy profiles are flat float arrays of
length ``N * n`` holding the player blocks back to back.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .exceptions import AssumptionViolated
from .linalg import spectral_norm

__all__ = [
    "StrategyBox",
    "GameSpec",
    "GameConstants",
    "check_network",
    "feasible",
    "project",
    "cost",
    "game_jacobian",
    "game_constants",
    "random_game",
]


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StrategyBox:
    """Axis-aligned box ``[lo, hi]`` in R^n."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = _frozen(np.atleast_1d(self.lo))
        hi = _frozen(np.atleast_1d(self.hi))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError(f"box bounds must be 1-D of equal length, got {lo.shape} and {hi.shape}")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("box bounds must be finite")
        if np.any(lo > hi):
            raise ValueError("box is empty: lo > hi in some coordinate")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.size

    @property
    def s_max(self) -> float:
        """Largest Euclidean norm over the box (attained at a corner)."""
        return float(np.sqrt(np.sum(np.maximum(self.lo**2, self.hi**2))))

    def contains(self, x, atol: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lo - atol) and np.all(x <= self.hi + atol))


@dataclass(frozen=True, eq=False)
class GameSpec:
    """Parameters of an LQ game, independent of the network it is played on.

    ``q`` is stored as an ``(N, n, n)`` stack and ``theta`` as ``(N, n)``;
    both accept any nested-sequence input that reshapes to those shapes.
    """

    q: np.ndarray
    theta: np.ndarray
    alpha: float
    boxes: tuple

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float)
        if theta.ndim == 1:
            theta = theta[:, None]
        N, n = theta.shape
        q = np.array(self.q, dtype=float).reshape(N, n, n)
        if not np.allclose(q, np.transpose(q, (0, 2, 1)), rtol=0, atol=1e-12 * max(1.0, np.abs(q).max())):
            raise ValueError("every Q_i must be symmetric")
        eigs = np.linalg.eigvalsh(q)
        if eigs[:, 0].min() <= 0:
            raise ValueError("every Q_i must be positive definite")
        boxes = tuple(b if isinstance(b, StrategyBox) else StrategyBox(**b) for b in self.boxes)
        if len(boxes) != N or any(b.dim != n for b in boxes):
            raise ValueError(f"expected {N} boxes of dimension {n}")
        object.__setattr__(self, "q", _frozen(q))
        object.__setattr__(self, "theta", _frozen(theta))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "_eig_extremes", _frozen(eigs[:, [0, -1]]))
        object.__setattr__(self, "boxes", boxes)
        object.__setattr__(self, "_lo", _frozen(np.concatenate([b.lo for b in boxes])))
        object.__setattr__(self, "_hi", _frozen(np.concatenate([b.hi for b in boxes])))

    @property
    def n_players(self) -> int:
        return self.theta.shape[0]

    @property
    def dim(self) -> int:
        return self.theta.shape[1]

    @property
    def lo(self) -> np.ndarray:
        """Stacked lower bounds, length ``N * n``."""
        return self._lo

    @property
    def hi(self) -> np.ndarray:
        return self._hi

    @property
    def eig_extremes(self) -> np.ndarray:
        """Per-player ``(lambda_min(Q_i), lambda_max(Q_i))`` as an ``(N, 2)`` array."""
        return self._eig_extremes

    @property
    def theta_max(self) -> float:
        return float(np.linalg.norm(self.theta, axis=1).max())

    @property
    def s_max(self) -> float:
        return max(b.s_max for b in self.boxes)

    def blocks(self, s) -> np.ndarray:
        """View a stacked profile as an ``(N, n)`` array of player blocks."""
        s = np.asarray(s, dtype=float)
        if s.size != self.n_players * self.dim:
            raise ValueError(f"profile has {s.size} entries, expected {self.n_players * self.dim}")
        return s.reshape(self.n_players, self.dim)

    def to_dict(self) -> dict:
        return {
            "n_players": self.n_players,
            "dim": self.dim,
            "q": self.q.tolist(),
            "theta": self.theta.tolist(),
            "alpha": self.alpha,
            "boxes": [{"lo": b.lo.tolist(), "hi": b.hi.tolist()} for b in self.boxes],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GameSpec":
        N, n = int(d["n_players"]), int(d["dim"])
        q = np.array(d["q"], dtype=float)
        if q.size != N * n * n:
            raise ValueError(f"'q' has {q.size} entries, expected {N * n * n}")
        theta = np.array(d["theta"], dtype=float).reshape(N, n)
        return cls(q=q.reshape(N, n, n), theta=theta, alpha=d["alpha"], boxes=tuple(d["boxes"]))

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "GameSpec":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class GameConstants:
    """Lipschitz constant ``L``, strong-monotonicity constant ``mu`` and ``tau_star = 2 mu / L**2``."""

    L: float
    mu: float
    tau_star: float

    @property
    def strongly_monotone(self) -> bool:
        return self.mu > 0

    def require_strongly_monotone(self) -> "GameConstants":
        if not self.strongly_monotone:
            raise AssumptionViolated(
                f"lambda_min(Q) - |alpha|/N ||A||_2 = {self.mu:.6g} <= 0; equilibrium uniqueness not guaranteed",
                mu=self.mu,
            )
        return self


def check_network(A, n_players: int | None = None) -> np.ndarray:
    """Validate an adjacency matrix: square, entries in [0, 1], zero diagonal."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"network must be a square matrix, got shape {A.shape}")
    if n_players is not None and A.shape[0] != n_players:
        raise ValueError(f"network has {A.shape[0]} nodes, game has {n_players} players")
    if np.any(A < 0) or np.any(A > 1):
        raise ValueError("network entries must lie in [0, 1]")
    if np.any(np.diag(A) != 0):
        raise ValueError("network must have a zero diagonal")
    return A


def feasible(s, spec: GameSpec, atol: float = 0.0) -> bool:
    s = np.asarray(s, dtype=float).ravel()
    return bool(np.all(s >= spec.lo - atol) and np.all(s <= spec.hi + atol))


def project(point, spec: GameSpec) -> np.ndarray:
    """Euclidean projection onto the product of boxes (coordinatewise clamp)."""
    return np.clip(np.asarray(point, dtype=float).ravel(), spec.lo, spec.hi)


def _aggregate(A, S):
    # (A kron I_n) s in block form
    return A @ S


def cost(spec: GameSpec, i: int, s, net) -> float:
    """Cost of player ``i`` at profile ``s`` over network ``net``."""
    N = spec.n_players
    if not 0 <= i < N:
        raise IndexError(f"player index {i} out of range for {N} players")
    S = spec.blocks(s)
    A = np.asarray(net, dtype=float)
    if A.shape != (N, N):
        raise ValueError(f"network shape {A.shape} does not match {N} players")
    si = S[i]
    local = spec.theta[i] + spec.alpha / N * (A[i] @ S)
    return float(0.5 * si @ spec.q[i] @ si - si @ local)


def game_jacobian(spec: GameSpec, s, net) -> np.ndarray:
    """Stacked own-strategy gradients ``Q s - theta - alpha/N (A kron I) s``."""
    N = spec.n_players
    S = spec.blocks(s)
    A = np.asarray(net, dtype=float)
    if A.shape != (N, N):
        raise ValueError(f"network shape {A.shape} does not match {N} players")
    own = spec.q[:, 0, 0, None] * S if spec.dim == 1 else np.einsum("inm,im->in", spec.q, S)
    F = own - spec.theta - (spec.alpha / N) * _aggregate(A, S)
    return F.ravel()


def game_constants(spec: GameSpec, net, require: bool = False) -> GameConstants:
    """Lipschitz and strong-monotonicity constants of the game Jacobian over ``net``.

    With ``require=True`` an :class:`AssumptionViolated` is raised when
    ``mu <= 0``; otherwise the caller inspects ``strongly_monotone``.
    """
    lam_min, lam_max = float(spec.eig_extremes[:, 0].min()), float(spec.eig_extremes[:, 1].max())
    net_term = abs(spec.alpha) / spec.n_players * spectral_norm(net)
    L = lam_max + net_term
    mu = lam_min - net_term
    constants = GameConstants(L=L, mu=mu, tau_star=2.0 * mu / L**2)
    if require:
        constants.require_strongly_monotone()
    return constants


def random_game(rng, n_players: int, dim: int = 1, box: float = 100.0, eig_range=(1.0, 3.0),
                monotonicity_margin: float = 0.5):
    """Draw a random strongly monotone game and network for testing and demos.

    Returns ``(spec, A)``. The network strength ``alpha`` is scaled so that
    ``mu >= monotonicity_margin * lambda_min(Q)``; its sign is random.
    """
    N, n = n_players, dim
    q = np.empty((N, n, n))
    for i in range(N):
        V, _ = np.linalg.qr(rng.standard_normal((n, n)))
        q[i] = (V * rng.uniform(*eig_range, size=n)) @ V.T
    q = 0.5 * (q + np.transpose(q, (0, 2, 1)))
    theta = rng.uniform(-1.0, 1.0, size=(N, n))
    A = rng.uniform(0.0, 1.0, size=(N, N))
    np.fill_diagonal(A, 0.0)
    lam_min = np.linalg.eigvalsh(q)[:, 0].min()
    norm_A = np.linalg.norm(A, 2)
    alpha = 0.0
    if norm_A > 0:
        alpha = rng.uniform(-1.0, 1.0) * (1.0 - monotonicity_margin) * lam_min * N / norm_A
    boxes = tuple(StrategyBox(np.full(n, -box), np.full(n, box)) for _ in range(N))
    return GameSpec(q=q, theta=theta, alpha=alpha, boxes=boxes), A
