"""Seedable synthetic graph generators and edge-noise models.

Every function here is a pure function of its parameters and seed, backed
by ``numpy.random.Generator`` (PCG64). Runs are reproducible for a fixed
numpy version; the RNG algorithm is part of the documented interface.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, Permutation
from .score import MappingSet

__all__ = [
    "NoiseParams",
    "erdos_renyi",
    "stochastic_block_model",
    "random_regular",
    "power_law",
    "noise_model_I",
    "noise_model_II",
    "random_permutation",
    "sample_mapping_set",
]

# Seed-graph edge density used by power_law before attachment starts.
POWER_LAW_SEED_DENSITY = 0.5

_REGULAR_MAX_ATTEMPTS = 20_000


@dataclass(frozen=True)
class NoiseParams:
    """Noise configuration in the regime the mean-field analysis covers.

    ``p`` is the clean edge density, ``p_e`` the flip/deletion probability.
    For the density-preserving model the insertion probability is pinned to
    ``p_e2 = p * p_e / (1 - p)`` so the expected output density stays ``p``.
    """

    p: float
    p_e: float
    p_e2: float | None = None

    def __post_init__(self):
        if not 0 <= self.p < 0.5:
            raise ValueError(f"p must lie in [0, 1/2), got {self.p}")
        if not 0 <= self.p_e < 0.5:
            raise ValueError(f"p_e must lie in [0, 1/2), got {self.p_e}")
        if self.p_e2 is not None:
            expected = self.p * self.p_e / (1.0 - self.p)
            if abs(self.p_e2 - expected) > 1e-12:
                raise ValueError(f"p_e2 must equal p*p_e/(1-p) = {expected}, got {self.p_e2}")

    @classmethod
    def density_preserving(cls, p: float, p_e: float) -> "NoiseParams":
        return cls(p=p, p_e=p_e, p_e2=p * p_e / (1.0 - p))


def _symmetric_bernoulli(n: int, prob: np.ndarray | float, rng: np.random.Generator) -> np.ndarray:
    """0/1 symmetric matrix, zero diagonal; each unordered pair drawn once."""
    u = rng.random((n, n))
    hit = np.triu(u < prob, 1).astype(np.int8)
    return hit + hit.T


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """Undirected G(n, p): each unordered pair is an edge with probability p."""
    if not 0 <= p <= 1:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    return Graph(_symmetric_bernoulli(n, p, rng))


def stochastic_block_model(block_sizes: list[int], density: np.ndarray, seed: int) -> Graph:
    """Undirected blockmodel: pair (i, j) in blocks (a, b) is an edge w.p. density[a, b]."""
    density = np.asarray(density, dtype=np.float64)
    k = len(block_sizes)
    if density.shape != (k, k):
        raise ValueError(f"density must be {k}x{k} for {k} blocks, got {density.shape}")
    if not np.array_equal(density, density.T):
        raise ValueError("density matrix must be symmetric")
    if density.min() < 0 or density.max() > 1:
        raise ValueError("density entries must lie in [0, 1]")
    if any(s <= 0 for s in block_sizes):
        raise ValueError("block sizes must be positive")
    block_of = np.repeat(np.arange(k), block_sizes)
    pair_prob = density[np.ix_(block_of, block_of)]
    rng = np.random.default_rng(seed)
    return Graph(_symmetric_bernoulli(len(block_of), pair_prob, rng))


def random_regular(n: int, d: int, seed: int) -> Graph:
    """Simple d-regular graph on n nodes via the pairing model.

    Pairings producing self-loops or multi-edges are rejected wholesale and
    redrawn, which yields exact degrees and a simple graph.
    """
    if d < 0 or d >= n:
        raise ValueError(f"degree must satisfy 0 <= d < n, got d={d}, n={n}")
    if (n * d) % 2 != 0:
        raise ValueError(f"n*d must be even, got n={n}, d={d}")
    if d == 0:
        return Graph.empty(n)
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(_REGULAR_MAX_ATTEMPTS):
        perm = rng.permutation(stubs)
        u, v = perm[0::2], perm[1::2]
        if (u == v).any():
            continue
        adj = np.zeros((n, n), dtype=np.int8)
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        keys = lo * n + hi
        if len(np.unique(keys)) != len(keys):
            continue
        adj[lo, hi] = 1
        return Graph(adj + adj.T)
    raise RuntimeError(f"pairing model failed to produce a simple {d}-regular graph after {_REGULAR_MAX_ATTEMPTS} attempts")


def power_law(n: int, m: int, n0: int, seed: int) -> Graph:
    """Preferential-attachment graph: new nodes attach to m distinct existing nodes.

    Starts from a random seed subgraph on n0 nodes (density
    ``POWER_LAW_SEED_DENSITY``); each subsequent node picks m distinct
    targets with probability proportional to current degree, uniformly when
    every candidate has degree zero.
    """
    if not (1 <= m <= n0 <= n):
        raise ValueError(f"need 1 <= m <= n0 <= n, got m={m}, n0={n0}, n={n}")
    rng = np.random.default_rng(seed)
    adj = np.zeros((n, n), dtype=np.int8)
    seed_block = _symmetric_bernoulli(n0, POWER_LAW_SEED_DENSITY, rng)
    adj[:n0, :n0] = seed_block
    degrees = np.zeros(n, dtype=np.float64)
    degrees[:n0] = seed_block.sum(axis=1)
    for t in range(n0, n):
        weights = degrees[:t].copy()
        targets = []
        for _ in range(m):
            if weights.sum() <= 0:
                pool = np.ones(t)
                pool[targets] = 0.0
                probs = pool / pool.sum()
            else:
                probs = weights / weights.sum()
            pick = int(rng.choice(t, p=probs))
            targets.append(pick)
            weights[pick] = 0.0
        for v in targets:
            adj[t, v] = adj[v, t] = 1
            degrees[v] += 1
        degrees[t] = m
    return Graph(adj)


def noise_model_I(g: Graph, p_e: float, seed: int) -> Graph:
    """Flip every unordered node pair of ``g`` independently with probability p_e."""
    if g.directed:
        raise ValueError("edge-flip noise is defined for undirected graphs")
    if not 0 <= p_e <= 1:
        raise ValueError(f"flip probability must lie in [0, 1], got {p_e}")
    rng = np.random.default_rng(seed)
    q = _symmetric_bernoulli(g.n, p_e, rng)
    flipped = g.adjacency * (1 - q) + (1 - g.adjacency) * q
    np.fill_diagonal(flipped, 0)
    return Graph(flipped)


def noise_model_II(g: Graph, p_e: float, p: float, seed: int) -> Graph:
    """Delete edges w.p. p_e and insert non-edges w.p. p*p_e/(1-p).

    The insertion rate is chosen so a clean density-p graph keeps expected
    density p after perturbation.
    """
    if g.directed:
        raise ValueError("deletion/insertion noise is defined for undirected graphs")
    if not 0 <= p < 1:
        raise ValueError(f"clean density must lie in [0, 1), got {p}")
    if not 0 <= p_e <= 1:
        raise ValueError(f"deletion probability must lie in [0, 1], got {p_e}")
    p_e2 = p * p_e / (1.0 - p)
    if p_e2 > 1:
        raise ValueError(f"insertion probability p*p_e/(1-p) = {p_e2} exceeds 1")
    rng = np.random.default_rng(seed)
    q = _symmetric_bernoulli(g.n, p_e, rng)
    q2 = _symmetric_bernoulli(g.n, p_e2, rng)
    noisy = g.adjacency * (1 - q) + (1 - g.adjacency) * q2
    np.fill_diagonal(noisy, 0)
    return Graph(noisy)


def random_permutation(n: int, seed: int) -> Permutation:
    rng = np.random.default_rng(seed)
    return Permutation(rng.permutation(n))


def sample_mapping_set(n: int, truth: Permutation, k: int, seed: int) -> MappingSet:
    """Candidate mapping set of size k*n containing all n true pairs.

    The other (k-1)*n members are drawn uniformly without replacement from
    the false pairs (i, j') with j' != truth(i).
    """
    if truth.n != n:
        raise ValueError(f"truth permutation size {truth.n} does not match n={n}")
    if k < 1:
        raise ValueError(f"expansion factor must be >= 1, got {k}")
    extra = (k - 1) * n
    if extra > n * n - n:
        raise ValueError(f"cannot sample {extra} false pairs from {n * n - n} available")
    pairs = [(i, int(truth.mapping[i])) for i in range(n)]
    if extra > 0:
        rng = np.random.default_rng(seed)
        all_ids = np.arange(n * n)
        truth_ids = np.arange(n) * n + truth.mapping
        false_ids = np.setdiff1d(all_ids, truth_ids, assume_unique=True)
        chosen = rng.choice(false_ids, size=extra, replace=False)
        pairs.extend((int(t) // n, int(t) % n) for t in chosen)
    return MappingSet(n1=n, n2=n, pairs=tuple(sorted(pairs)))
