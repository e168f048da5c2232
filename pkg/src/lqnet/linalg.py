"""Small dense linear-algebra helpers."""

from __future__ import annotations

import numpy as np

from .exceptions import NotConverged


def spectral_norm(M, tol: float = 1e-10, max_iter: int = 100_000) -> float:
    """Largest singular value of ``M`` by power iteration on ``M.T @ M``.

    The start vector is drawn from a fixed-seed generator so the result is
    deterministic. Iteration stops once the eigen-residual of ``M.T @ M`` is
    below ``tol`` relative to the current Rayleigh quotient.

    Raises
    ------
    NotConverged
        If the residual test is not met within ``max_iter`` iterations.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {M.shape}")
    if M.size == 0 or not np.any(M):
        return 0.0

    x = np.random.default_rng(0).standard_normal(M.shape[1])
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(max_iter):
        y = M.T @ (M @ x)
        lam = float(x @ y)
        if lam == 0.0:
            # start vector fell in the nullspace; nudge it deterministically
            x = x + np.linspace(1.0, 2.0, x.size)
            x /= np.linalg.norm(x)
            continue
        resid = np.linalg.norm(y - lam * x)
        if resid <= tol * lam:
            return float(np.sqrt(lam))
        x = y / np.linalg.norm(y)
    raise NotConverged(
        f"power iteration did not converge in {max_iter} iterations",
        residual=float(resid / lam),
    )

