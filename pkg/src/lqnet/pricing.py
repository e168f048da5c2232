"""Online-market pricing game mapped onto the LQ network game.

Seller ``i`` sets price ``s_i``; each of ``M`` customers demands
``dbar_i - eta (s_i + alpha/N sum_j A^c_ij s_j)`` with ``A^c_ij`` a
co-purchase indicator. The seller's cost is minus revenue, which in LQ form
has ``Q_i = 2 eta M``, ``theta_i = M dbar_i`` and network strength
``-eta M alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import GameSpec, StrategyBox
from .networks import BinomialAverage, ParticipationModel, block_mean

__all__ = ["PricingParams", "even_split", "pricing_to_lq", "demand"]


def even_split(n_items: int, n_categories: int = 2) -> np.ndarray:
    """Contiguous, as-even-as-possible 0-based category labels (earlier categories get the remainder)."""
    return (np.arange(n_items) * n_categories) // n_items


@dataclass(frozen=True, eq=False)
class PricingParams:
    """Market parameters. ``categories`` are 0-based indices into ``block_probs``."""

    N: int
    M: int
    eta: float
    alpha: float
    dbar: np.ndarray
    categories: np.ndarray
    block_probs: np.ndarray
    pbar: np.ndarray = None
    price_cap: float = 20.0

    def __post_init__(self):
        N = int(self.N)
        dbar = np.broadcast_to(np.asarray(self.dbar, dtype=float), (N,)).copy()
        cat = np.asarray(self.categories, dtype=int)
        B = np.asarray(self.block_probs, dtype=float)
        pbar = np.ones(N) if self.pbar is None else np.broadcast_to(np.asarray(self.pbar, dtype=float), (N,)).copy()
        if self.eta <= 0:
            raise ValueError("price sensitivity eta must be positive")
        if self.alpha < 0:
            raise ValueError("co-purchase influence alpha must be nonnegative")
        if int(self.M) != self.M or self.M < 1:
            raise ValueError("customer count M must be a positive integer")
        if np.any(dbar <= 0):
            raise ValueError("maximum demands dbar must be positive")
        if cat.shape != (N,):
            raise ValueError(f"need one category per seller, got shape {cat.shape}")
        if np.any(B < 0) or np.any(B > 1):
            raise ValueError("block probabilities must lie in [0, 1]")
        if cat.min() < 0 or cat.max() >= B.shape[0]:
            raise ValueError("category index out of range for block_probs")
        if np.any(pbar <= 0) or np.any(pbar > 1):
            raise ValueError("participation probabilities must lie in (0, 1]")
        if self.price_cap <= 0:
            raise ValueError("price cap must be positive")
        for name, value in [("N", N), ("M", int(self.M)), ("eta", float(self.eta)), ("alpha", float(self.alpha)),
                            ("dbar", dbar), ("categories", cat), ("block_probs", B), ("pbar", pbar),
                            ("price_cap", float(self.price_cap))]:
            if isinstance(value, np.ndarray):
                value.setflags(write=False)
            object.__setattr__(self, name, value)

    @classmethod
    def two_category(cls, N: int, M: int = 100, eta: float = 1.0, alpha: float = 0.8,
                     dbar_by_category=(2.0, 10.0), block_probs=((0.8, 0.3), (0.3, 0.8)),
                     pbar: float = 1.0, price_cap: float = 20.0) -> "PricingParams":
        """Market with sellers split evenly between categories, defaulting to the case-study values."""
        B = np.asarray(block_probs, dtype=float)
        cat = even_split(N, B.shape[0])
        dbar = np.asarray(dbar_by_category, dtype=float)[cat]
        return cls(N=N, M=M, eta=eta, alpha=alpha, dbar=dbar, categories=cat, block_probs=B,
                   pbar=pbar, price_cap=price_cap)

    def mean_network(self) -> np.ndarray:
        return block_mean(self.categories, self.block_probs)

    def network_model(self) -> BinomialAverage:
        """Daily co-purchase network: average of ``M`` Bernoulli customer layers."""
        return BinomialAverage(self.mean_network(), self.M)

    def participation_model(self) -> ParticipationModel:
        return ParticipationModel(self.pbar)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "eta": self.eta,
            "alpha": self.alpha,
            "dbar": self.dbar.tolist(),
            "categories": self.categories.tolist(),
            "block_probs": self.block_probs.tolist(),
            "pbar": self.pbar.tolist(),
            "price_cap": self.price_cap,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PricingParams":
        """Accepts the full form or the short form with ``dbar_by_category`` and no ``categories``."""
        d = dict(d)
        B = np.asarray(d.pop("block_probs", ((0.8, 0.3), (0.3, 0.8))), dtype=float)
        N = int(d.pop("N"))
        cat = np.asarray(d.pop("categories", even_split(N, B.shape[0])), dtype=int)
        if "dbar_by_category" in d:
            dbar = np.asarray(d.pop("dbar_by_category"), dtype=float)[cat]
        else:
            dbar = d.pop("dbar")
        known = {"M", "eta", "alpha", "pbar", "price_cap"}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown pricing parameters: {sorted(unknown)}")
        return cls(N=N, dbar=dbar, categories=cat, block_probs=B,
                   M=d.get("M", 100), eta=d.get("eta", 1.0), alpha=d.get("alpha", 0.8),
                   pbar=d.get("pbar"), price_cap=d.get("price_cap", 20.0))


def pricing_to_lq(p: PricingParams) -> GameSpec:
    """LQ game whose costs equal the sellers' negative revenues."""
    Q = np.full((p.N, 1, 1), 2.0 * p.eta * p.M)
    theta = (p.M * p.dbar)[:, None]
    boxes = tuple(StrategyBox([0.0], [p.price_cap]) for _ in range(p.N))
    return GameSpec(q=Q, theta=theta, alpha=-p.eta * p.M * p.alpha, boxes=boxes)


def demand(p: PricingParams, prices, A) -> np.ndarray:
    """Total demand ``M (dbar_i - eta (s_i + alpha/N sum_j A_ij s_j))`` per product."""
    s = np.asarray(prices, dtype=float)
    A = np.asarray(A, dtype=float)
    if s.shape != (p.N,) or A.shape != (p.N, p.N):
        raise ValueError("prices and network must match the number of sellers")
    return p.M * (p.dbar - p.eta * (s + p.alpha / p.N * (A @ s)))
