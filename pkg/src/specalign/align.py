"""End-to-end alignment solvers and exact small-instance oracles.

Two solvers are provided. ``eigen_align`` weights candidate mappings by the
leading eigenvector of the pairwise alignment matrix and rounds with a
maximum-weight bipartite matching. ``low_rank_align`` solves the orthogonal
relaxation of the trace objective on transformed adjacency matrices and
rounds through eigenvalue-scaled rank-k affinities, enumerating eigenvector
sign choices exhaustively. ``brute_force_qap`` is the factorial-time exact
oracle used to validate both.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .graph import Graph, pad_to
from .matching import Assignment, greedy_matching, hungarian_max_weight
from .metrics import count_alignment, generalized_objective
from .score import (
    DEFAULT_DENSE_ENTRY_CAP,
    MappingSet,
    ScoreScheme,
    alignment_matvec,
    build_alignment_matrix,
)
from .spectral import SpectralDecomposition, leading_eigenvector, psd_shift, top_k_eigs

__all__ = [
    "AlignmentResult",
    "RelaxationSolution",
    "eigen_align",
    "orthogonal_relaxation",
    "low_rank_align",
    "rounding_gap_bound",
    "brute_force_qap",
    "expected_objective_gap",
]

BRUTE_FORCE_MAX_N = 10
SIGN_ENUM_MAX_RANK = 12


@dataclass(frozen=True)
class AlignmentResult:
    """A bijective (partial) mapping plus its recomputed quality numbers."""

    mapping: Assignment
    matches: int
    mismatches: int
    neutrals: int
    objective: float
    method: str
    gamma: float
    rank: int | None = None
    seed: int | None = None

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return self.mapping.pairs


@dataclass(frozen=True)
class RelaxationSolution:
    """Orthogonal-relaxation optimizer V U^T with its two spectra.

    ``x0`` is orthogonal; flipping entries of ``signs`` spans the family of
    alternative optima obtained by negating eigenvector pairs.
    """

    x0: np.ndarray
    signs: np.ndarray
    spectra: tuple[SpectralDecomposition, SpectralDecomposition]


def _finish(
    g1: Graph,
    g2: Graph,
    assignment: Assignment,
    gamma: float,
    method: str,
    rank: int | None,
    seed: int | None,
) -> AlignmentResult:
    matches, mismatches, neutrals = count_alignment(g1, g2, assignment)
    objective = generalized_objective(g1, g2, assignment, gamma)
    return AlignmentResult(
        mapping=assignment,
        matches=matches,
        mismatches=mismatches,
        neutrals=neutrals,
        objective=objective,
        method=method,
        gamma=gamma,
        rank=rank,
        seed=seed,
    )


def eigen_align(
    g1: Graph,
    g2: Graph,
    s: ScoreScheme,
    mapping_set: MappingSet | str = "full",
    *,
    matching: str = "exact",
    tol: float = 1e-10,
    max_iter: int = 100_000,
    seed: int = 0,
    max_entries: int = DEFAULT_DENSE_ENTRY_CAP,
) -> AlignmentResult:
    """Leading-eigenvector alignment rounded by bipartite matching.

    With ``mapping_set="full"`` on undirected graphs the eigenvector is
    computed matrix-free; otherwise the dense alignment matrix over the
    allowed pairs is built (subject to the size cap). Eigenvector entries
    become matching weights on the allowed cells, and the matching step is
    exact (``"exact"``) or greedy (``"greedy"``).
    """
    if matching not in ("exact", "greedy"):
        raise ValueError(f"matching must be 'exact' or 'greedy', got {matching!r}")
    if g1.directed != g2.directed:
        raise ValueError("graphs must be both directed or both undirected")
    n1, n2 = g1.n, g2.n

    if isinstance(mapping_set, str):
        if mapping_set != "full":
            raise ValueError(f"mapping_set must be a MappingSet or 'full', got {mapping_set!r}")
        if g1.directed:
            mapping_set = MappingSet.full(n1, n2)
        else:
            mapping_set = None  # matrix-free path
    if mapping_set is None:
        op = lambda y: alignment_matvec(g1, g2, s, y)  # noqa: E731
        _, vec = leading_eigenvector(op, n1 * n2, tol=tol, max_iter=max_iter, seed=seed)
        weights = vec.reshape((n1, n2), order="F")
        allowed = None
    else:
        if mapping_set.n1 != n1 or mapping_set.n2 != n2:
            raise ValueError("mapping set sizes do not match the graphs")
        a_dense = build_alignment_matrix(g1, g2, s, mapping_set, max_entries=max_entries)
        _, vec = leading_eigenvector(a_dense, len(mapping_set), tol=tol, max_iter=max_iter, seed=seed)
        weights = np.zeros((n1, n2))
        rows, cols = mapping_set.rows_cols()
        weights[rows, cols] = vec
        allowed = mapping_set.mask()

    if matching == "exact":
        assignment = hungarian_max_weight(weights, allowed)
    else:
        assignment = greedy_matching(weights, allowed)
    return _finish(g1, g2, assignment, s.gamma, "ea", None, seed)


def orthogonal_relaxation(g1m: np.ndarray, g2m: np.ndarray) -> RelaxationSolution:
    """Optimal orthogonal matrix for max Tr(M1 X M2 X^T): X0 = V U^T.

    ``V`` and ``U`` hold full eigenbases of the two symmetric inputs with
    eigenvalues paired in descending order. The attained value is
    ``sum_i lambda_i(M1) lambda_i(M2)``, an upper bound on the permutation
    optimum.
    """
    g1m = np.asarray(g1m, dtype=np.float64)
    g2m = np.asarray(g2m, dtype=np.float64)
    if g1m.shape != g2m.shape or g1m.ndim != 2 or g1m.shape[0] != g1m.shape[1]:
        raise ValueError(f"inputs must be square matrices of equal size, got {g1m.shape} and {g2m.shape}")
    n = g1m.shape[0]
    dec1 = top_k_eigs(g1m, n)
    dec2 = top_k_eigs(g2m, n)
    x0 = dec1.eigenvectors @ dec2.eigenvectors.T
    return RelaxationSolution(x0=x0, signs=np.ones(n, dtype=np.int64), spectra=(dec1, dec2))


def _permutation_from_assignment(assignment: Assignment, n: int) -> np.ndarray:
    x = np.zeros((n, n))
    for i, j in assignment.pairs:
        x[i, j] = 1.0
    return x


def low_rank_align(
    g1: Graph,
    g2: Graph,
    gamma: float,
    rank_k: int = 3,
    *,
    matching: str = "exact",
    mapping_set: MappingSet | None = None,
    use_projection_rounding: bool = False,
    seed: int | None = None,
) -> AlignmentResult:
    """Rank-k spectral alignment of the transformed adjacency matrices.

    Forms ``M = adjacency - gamma * J`` for both graphs (padding the smaller
    graph with isolated nodes first), shifts each to positive definite,
    and takes the top ``rank_k`` eigenpairs of the shifted matrices. Every
    sign vector in {-1, +1}^rank_k yields an affinity
    ``sum_i sign_i * lambda_i(M1) * lambda_i(M2) * v_i u_i^T`` whose
    maximum-weight matching is a candidate mapping; candidates are scored
    by the trace objective on the padded pair and the best one is returned
    with padded rows dropped. ``use_projection_rounding`` switches the
    affinity to the plain eigenvector outer products (a known-weak
    baseline kept for comparison).
    """
    if matching not in ("exact", "greedy"):
        raise ValueError(f"matching must be 'exact' or 'greedy', got {matching!r}")
    if g1.directed or g2.directed:
        raise ValueError("low-rank alignment supports undirected graphs only")
    if not 0 <= gamma < 0.5:
        raise ValueError(f"gamma must lie in [0, 1/2), got {gamma}")
    n = max(g1.n, g2.n)
    if rank_k < 1 or rank_k > n:
        raise ValueError(f"rank must lie in [1, {n}], got {rank_k}")
    if rank_k > SIGN_ENUM_MAX_RANK:
        raise ValueError(f"rank {rank_k} exceeds the exhaustive sign-enumeration limit of {SIGN_ENUM_MAX_RANK}")

    p1 = pad_to(g1, n)
    p2 = pad_to(g2, n)
    m1, _ = psd_shift(p1.as_float() - gamma)
    m2, _ = psd_shift(p2.as_float() - gamma)
    dec1 = top_k_eigs(m1, rank_k)
    dec2 = top_k_eigs(m2, rank_k)
    scale = np.ones(rank_k) if use_projection_rounding else dec1.eigenvalues * dec2.eigenvalues

    allowed = None
    if mapping_set is not None:
        if mapping_set.n1 != g1.n or mapping_set.n2 != g2.n:
            raise ValueError("mapping set sizes do not match the graphs")
        allowed = np.zeros((n, n), dtype=bool)
        rows, cols = mapping_set.rows_cols()
        allowed[rows, cols] = True
        # Padded rows/columns stay matchable among themselves so the
        # matching of real nodes is not blocked by the padding.
        allowed[g1.n :, :] = True
        allowed[:, g2.n :] = True

    best: tuple[float, Assignment, np.ndarray] | None = None
    for signs in itertools.product((1.0, -1.0), repeat=rank_k):
        affinity = (dec1.eigenvectors * (np.asarray(signs) * scale)) @ dec2.eigenvectors.T
        if matching == "exact":
            candidate = hungarian_max_weight(affinity, allowed)
        else:
            candidate = greedy_matching(affinity, allowed)
        value = generalized_objective(p1, p2, candidate, gamma)
        if best is None or value > best[0]:
            best = (value, candidate, affinity)

    _, winner, affinity = best
    kept = tuple((i, j) for i, j in winner.pairs if i < g1.n and j < g2.n)
    trimmed = Assignment(pairs=kept, total_weight=float(sum(affinity[i, j] for i, j in kept)))
    return _finish(g1, g2, trimmed, gamma, "lra", rank_k, seed)


def rounding_gap_bound(g1m: np.ndarray, g2m: np.ndarray, eps: float) -> float:
    """Worst-case linearization error ``eps^2 * sum_i sigma_i(M1) sigma_i(M2)``."""
    if eps < 0:
        raise ValueError(f"eps must be non-negative, got {eps}")
    g1m = np.asarray(g1m, dtype=np.float64)
    g2m = np.asarray(g2m, dtype=np.float64)
    if np.abs(g1m - g1m.T).max() > 1e-10 or np.abs(g2m - g2m.T).max() > 1e-10:
        raise ValueError("inputs must be symmetric")
    s1 = np.linalg.svd(g1m, compute_uv=False)
    s2 = np.linalg.svd(g2m, compute_uv=False)
    return float(eps * eps * (s1 * s2).sum())


def brute_force_qap(g1: Graph, g2: Graph, gamma: float) -> AlignmentResult:
    """Exact maximizer of the trace objective by permutation enumeration.

    Guarded to n <= 10. Ties resolve to the lexicographically smallest
    permutation (enumeration order).
    """
    if g1.n != g2.n:
        raise ValueError(f"graphs must have equal size, got {g1.n} and {g2.n}")
    n = g1.n
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    if not 0 <= gamma < 0.5:
        raise ValueError(f"gamma must lie in [0, 1/2), got {gamma}")
    m1 = g1.as_float() - gamma
    m2 = g2.as_float() - gamma
    best_value = -np.inf
    best_perm: tuple[int, ...] | None = None
    for perm in itertools.permutations(range(n)):
        idx = np.asarray(perm)
        value = float((m1 * m2[np.ix_(idx, idx)]).sum())
        if value > best_value:
            best_value = value
            best_perm = perm
    pairs = tuple((i, best_perm[i]) for i in range(n))
    assignment = Assignment(pairs=pairs, total_weight=best_value)
    return _finish(g1, g2, assignment, gamma, "brute", None, None)


def expected_objective_gap(p: float, p_e: float, s: ScoreScheme, model: str) -> float:
    """Published closed-form per-pair objective gap between true and false mappings.

    Model "I": ``p(1-p)(1-2q)(s1+s2-2s3) + q(1-2p)s3`` with q = p_e.
    Model "II": ``p((1-p-pe)(1+alpha) + pe(1-2p))`` in neutral-gap units,
    using alpha = (s1-s3)/(s2-s3).

    Note: these are the closed forms as published. A self-consistent
    expectation of the same statistic differs in the q-dependent term (see
    the test suite), so simulations track these forms only at p_e = 0.
    """
    if not 0 < p < 0.5:
        raise ValueError(f"p must lie in (0, 1/2), got {p}")
    if not 0 <= p_e < 0.5:
        raise ValueError(f"p_e must lie in [0, 1/2), got {p_e}")
    if model == "I":
        return p * (1 - p) * (1 - 2 * p_e) * (s.s1 + s.s2 - 2 * s.s3) + p_e * (1 - 2 * p) * s.s3
    if model == "II":
        return (s.s2 - s.s3) * p * ((1 - p - p_e) * (1 + s.alpha) + p_e * (1 - 2 * p))
    raise ValueError(f"model must be 'I' or 'II', got {model!r}")
