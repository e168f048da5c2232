"""Random interaction networks and random participation.

Every model exposes its exact mean (``mean()``) and a seeded sampler
(``sample(rng, size=None)``). Samplers only touch the generator passed in.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._sampling import BinomialTable
from .game import check_network

__all__ = [
    "ConstantNetwork",
    "BernoulliEdges",
    "BinomialAverage",
    "BlockBernoulli",
    "ParticipationModel",
    "block_mean",
    "iteration_rng",
    "sample_network",
    "expected_network",
    "sample_participation",
    "effective_network",
    "compensated_effective_mean",
    "network_from_dict",
]

_MAX_TABLE_GROUPS = 512


def iteration_rng(seed: int, trial: int = 0, k: int = 0) -> np.random.Generator:
    """Independent generator for the ``(trial, k)`` pair under a root seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial, k)))


def block_mean(categories, block_probs) -> np.ndarray:
    """Mean matrix with ``A_ij = block_probs[cat(i), cat(j)]`` and zero diagonal.

    Categories are 0-based indices into ``block_probs``.
    """
    cat = np.asarray(categories, dtype=int)
    B = np.asarray(block_probs, dtype=float)
    A = B[cat[:, None], cat[None, :]]
    np.fill_diagonal(A, 0.0)
    return A


def _shape(size, N):
    return (N, N) if size is None else (*np.atleast_1d(size), N, N)


@dataclass(frozen=True, eq=False)
class ConstantNetwork:
    """Degenerate model that always returns the same network."""

    A: np.ndarray

    def __post_init__(self):
        A = np.array(check_network(self.A))
        A.setflags(write=False)
        object.__setattr__(self, "A", A)

    @property
    def n_nodes(self):
        return self.A.shape[0]

    def mean(self):
        return self.A.copy()

    def sample(self, rng, size=None):
        return np.broadcast_to(self.A, _shape(size, self.n_nodes)).copy()

    def to_dict(self):
        return {"type": "constant", "params": {"A": self.A.tolist()}}


@dataclass(frozen=True, eq=False)
class BernoulliEdges:
    """Independent edges ``A_ij ~ Ber(mean_ij)``."""

    mean_matrix: np.ndarray

    def __post_init__(self):
        A = np.array(check_network(self.mean_matrix))
        A.setflags(write=False)
        object.__setattr__(self, "mean_matrix", A)

    @property
    def n_nodes(self):
        return self.mean_matrix.shape[0]

    def mean(self):
        return self.mean_matrix.copy()

    def sample(self, rng, size=None):
        u = rng.random(_shape(size, self.n_nodes))
        return (u < self.mean_matrix).astype(float)

    def to_dict(self):
        return {"type": "bernoulli", "params": {"mean": self.mean_matrix.tolist()}}


@dataclass(frozen=True, eq=False)
class BinomialAverage:
    """Average of ``M`` independent Bernoulli layers: ``A_ij = Bin(M, mean_ij) / M``.

    This is the co-purchase network of the pricing example, with one layer per
    customer.
    """

    mean_matrix: np.ndarray
    M: int
    _groups: np.ndarray = field(init=False, repr=False, default=None)
    _table: BinomialTable = field(init=False, repr=False, default=None)

    def __post_init__(self):
        A = np.array(check_network(self.mean_matrix))
        A.setflags(write=False)
        object.__setattr__(self, "mean_matrix", A)
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"M must be a positive integer, got {self.M}")
        object.__setattr__(self, "M", int(self.M))
        values, groups = np.unique(A, return_inverse=True)
        if values.size <= _MAX_TABLE_GROUPS:
            object.__setattr__(self, "_groups", groups.reshape(A.shape).astype(np.int64))
            object.__setattr__(self, "_table", BinomialTable(values, self.M))

    @property
    def n_nodes(self):
        return self.mean_matrix.shape[0]

    def mean(self):
        return self.mean_matrix.copy()

    def sample(self, rng, size=None):
        shape = _shape(size, self.n_nodes)
        if self._table is None:
            counts = rng.binomial(self.M, np.broadcast_to(self.mean_matrix, shape))
        else:
            groups = self._groups if size is None else np.broadcast_to(self._groups, shape)
            counts = self._table.sample(rng.random(shape), groups)
        return counts.reshape(shape) / self.M

    def to_dict(self):
        return {"type": "binomial_average", "params": {"mean": self.mean_matrix.tolist(), "M": self.M}}


@dataclass(frozen=True, eq=False)
class BlockBernoulli:
    """Stochastic block model: ``A_ij ~ Ber(block_probs[cat(i), cat(j)])``."""

    categories: np.ndarray
    block_probs: np.ndarray

    def __post_init__(self):
        cat = np.array(self.categories, dtype=int)
        B = np.array(self.block_probs, dtype=float)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise ValueError("block_probs must be a square matrix")
        if cat.min() < 0 or cat.max() >= B.shape[0]:
            raise ValueError("category index out of range for block_probs")
        if np.any(B < 0) or np.any(B > 1):
            raise ValueError("block probabilities must lie in [0, 1]")
        for a in (cat, B):
            a.setflags(write=False)
        object.__setattr__(self, "categories", cat)
        object.__setattr__(self, "block_probs", B)

    @property
    def n_nodes(self):
        return self.categories.size

    def mean(self):
        return block_mean(self.categories, self.block_probs)

    def sample(self, rng, size=None):
        u = rng.random(_shape(size, self.n_nodes))
        return (u < self.mean()).astype(float)

    def to_dict(self):
        return {
            "type": "block_bernoulli",
            "params": {"categories": self.categories.tolist(), "block_probs": self.block_probs.tolist()},
        }


@dataclass(frozen=True, eq=False)
class ParticipationModel:
    """Independent participation ``P_ii ~ Ber(pbar_i)`` with every ``pbar_i`` in (0, 1]."""

    pbar: np.ndarray

    def __post_init__(self):
        p = np.array(np.atleast_1d(self.pbar), dtype=float)
        if p.ndim != 1:
            raise ValueError("pbar must be a vector")
        if np.any(p <= 0) or np.any(p > 1):
            raise ValueError("participation probabilities must lie in (0, 1]")
        p.setflags(write=False)
        object.__setattr__(self, "pbar", p)

    @classmethod
    def uniform(cls, p: float, n_players: int) -> "ParticipationModel":
        return cls(np.full(n_players, float(p)))

    @property
    def n_players(self):
        return self.pbar.size

    def mean(self):
        return np.diag(self.pbar)

    def sample_mask(self, rng, size=None):
        shape = (self.n_players,) if size is None else (*np.atleast_1d(size), self.n_players)
        return rng.random(shape) < self.pbar

    def to_dict(self):
        return {"pbar": self.pbar.tolist()}


def network_from_dict(d: dict):
    """Build a network model from its ``{"type": ..., "params": {...}}`` form."""
    kind = d.get("type")
    params = d.get("params", {})
    if kind == "constant":
        return ConstantNetwork(np.array(params["A"], dtype=float))
    if kind == "bernoulli":
        return BernoulliEdges(np.array(params["mean"], dtype=float))
    if kind == "binomial_average":
        if "mean" in params:
            mean = np.array(params["mean"], dtype=float)
        else:
            mean = block_mean(params["categories"], params["block_probs"])
        return BinomialAverage(mean, params["M"])
    if kind == "block_bernoulli":
        return BlockBernoulli(params["categories"], params["block_probs"])
    raise ValueError(f"unknown network model type {kind!r}")


def sample_network(model, rng) -> np.ndarray:
    return model.sample(rng)


def expected_network(model) -> np.ndarray:
    return model.mean()


def sample_participation(pm: ParticipationModel, rng) -> np.ndarray:
    """Diagonal 0/1 participation matrix."""
    return np.diag(pm.sample_mask(rng).astype(float))


def _participation_vector(P):
    P = np.asarray(P, dtype=float)
    return np.diag(P) if P.ndim == 2 else P


def effective_network(A, P) -> np.ndarray:
    """``A @ P`` for a diagonal participation matrix; ``P`` may also be its diagonal."""
    A = np.asarray(A, dtype=float)
    p = _participation_vector(P)
    if p.shape[-1] != A.shape[-1]:
        raise ValueError(f"participation of size {p.shape[-1]} does not match network of size {A.shape[-1]}")
    return A * p[..., None, :]


def compensated_effective_mean(model, pm: ParticipationModel) -> np.ndarray:
    """``Abar @ Pbar``, the mean of ``Pbar^-1 P A P``."""
    return effective_network(model.mean(), pm.pbar)
