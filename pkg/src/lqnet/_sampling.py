"""Exact inverse-CDF sampling of many binomials sharing a few distinct means."""

from __future__ import annotations

import numpy as np
from numba import njit
from scipy.stats import binom

GUIDE_SIZE = 1024


@njit(cache=True)
def _invert(u, group, cdf, guide, out):
    G = guide.shape[1]
    for t in range(u.size):
        g = group[t]
        x = guide[g, int(u[t] * G)]
        while u[t] >= cdf[g, x]:
            x += 1
        out[t] = x


class BinomialTable:
    """Binomial(M, p) sampler for a fixed finite set of success probabilities.

    Each draw consumes one uniform and is located in the CDF through a guide
    table, so the result is an exact inverse-transform sample.
    """

    def __init__(self, probs, M: int):
        probs = np.asarray(probs, dtype=float)
        cdf = binom.cdf(np.arange(M + 1)[None, :], M, probs[:, None])
        cdf[:, -1] = np.inf
        grid = np.arange(GUIDE_SIZE) / GUIDE_SIZE
        self.cdf = np.ascontiguousarray(cdf)
        self.guide = np.stack([np.searchsorted(c, grid, side="right") for c in cdf]).astype(np.int64)
        self.M = M

    def sample(self, u, group):
        u = np.asarray(u, dtype=float)
        if group.shape != u.shape:
            group = np.broadcast_to(group, u.shape)
        group = np.ascontiguousarray(group, dtype=np.int64).ravel()
        u = np.ascontiguousarray(u).ravel()
        out = np.empty(u.size, dtype=np.int64)
        _invert(u, group, self.cdf, self.guide, out)
        return out
