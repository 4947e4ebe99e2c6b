"""Match/neutral/mismatch scoring and the pairwise alignment matrix.

The alignment matrix A lives on candidate node mappings: entry
A[(i,j'),(r,s')] scores the pair of mappings by whether the underlying
edges agree (match), disagree (mismatch), or are both absent (neutral).
A is available both as an explicit dense matrix over a restricted mapping
set and as a matrix-free operator over the full product set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph

__all__ = [
    "ScoreScheme",
    "MappingSet",
    "MemoryGuardError",
    "from_alpha",
    "alignment_entry",
    "directed_alignment_entry",
    "build_alignment_matrix",
    "alignment_matvec",
    "DEFAULT_DENSE_ENTRY_CAP",
]

# Largest |R|^2 the dense builder will materialize (~200 MB of float64).
DEFAULT_DENSE_ENTRY_CAP = 25_000_000


class MemoryGuardError(MemoryError):
    """Dense alignment matrix would exceed the configured size cap."""


@dataclass(frozen=True)
class ScoreScheme:
    """Scores for matched, neutral, and mismatched mapping pairs.

    Requires ``match_score > neutral_score > mismatch_score > 0``; the
    strict positivity keeps the alignment matrix entrywise positive, which
    the leading-eigenvector step relies on. ``gamma`` is the derived
    mismatch-penalty weight in [0, 1/2).
    """

    match_score: float
    neutral_score: float
    mismatch_score: float

    def __post_init__(self):
        for name in ("match_score", "neutral_score", "mismatch_score"):
            object.__setattr__(self, name, float(getattr(self, name)))
        s1, s2, s3 = self.match_score, self.neutral_score, self.mismatch_score
        if not (s1 > s2 > s3 > 0):
            raise ValueError(f"scores must satisfy match > neutral > mismatch > 0, got ({s1}, {s2}, {s3})")

    @property
    def s1(self) -> float:
        return self.match_score

    @property
    def s2(self) -> float:
        return self.neutral_score

    @property
    def s3(self) -> float:
        return self.mismatch_score

    @property
    def gamma(self) -> float:
        return (self.s2 - self.s3) / (self.s1 + self.s2 - 2 * self.s3)

    @property
    def alpha(self) -> float:
        """Match-to-neutral gap ratio; equals alpha for schemes built by from_alpha."""
        return (self.s1 - self.s3) / (self.s2 - self.s3)


def from_alpha(alpha: float, eps: float) -> ScoreScheme:
    """Scheme (alpha+eps, 1+eps, eps), which puts gamma exactly at 1/(1+alpha)."""
    if alpha <= 1:
        raise ValueError(f"alpha must exceed 1, got {alpha}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return ScoreScheme(alpha + eps, 1.0 + eps, eps)


@dataclass(frozen=True)
class MappingSet:
    """An ordered set of allowed mapping pairs (i, j') between two node sets."""

    n1: int
    n2: int
    pairs: tuple[tuple[int, int], ...]
    index: dict[tuple[int, int], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        idx: dict[tuple[int, int], int] = {}
        for pos, (i, j) in enumerate(self.pairs):
            if not (0 <= i < self.n1 and 0 <= j < self.n2):
                raise ValueError(f"pair ({i}, {j}) out of range for sizes ({self.n1}, {self.n2})")
            if (i, j) in idx:
                raise ValueError(f"duplicate pair ({i}, {j}) in mapping set")
            idx[(i, j)] = pos
        object.__setattr__(self, "index", idx)

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return pair in self.index

    def mask(self) -> np.ndarray:
        """Boolean n1 x n2 matrix marking allowed cells."""
        allowed = np.zeros((self.n1, self.n2), dtype=bool)
        rows, cols = self.rows_cols()
        allowed[rows, cols] = True
        return allowed

    def rows_cols(self) -> tuple[np.ndarray, np.ndarray]:
        arr = np.asarray(self.pairs, dtype=np.int64).reshape(len(self.pairs), 2)
        return arr[:, 0], arr[:, 1]

    @classmethod
    def full(cls, n1: int, n2: int) -> "MappingSet":
        return cls(n1=n1, n2=n2, pairs=tuple((i, j) for i in range(n1) for j in range(n2)))


def alignment_entry(s: ScoreScheme, e1: int, e2: int) -> float:
    """Score one pair of mappings from the two edge indicators.

    Evaluates ``(s1+s2-2*s3)*e1*e2 + (s3-s2)*(e1+e2) + s2``, which equals
    s1 when both edges exist, s3 when exactly one does, and s2 otherwise.
    """
    return (s.s1 + s.s2 - 2 * s.s3) * e1 * e2 + (s.s3 - s.s2) * (e1 + e2) + s.s2


def directed_alignment_entry(
    s: ScoreScheme,
    g1_forward: int,
    g1_backward: int,
    g2_forward: int,
    g2_backward: int,
) -> float:
    """Score a directed mapping pair from the four directional edge indicators.

    A direction is a match when both graphs have the edge, a mismatch when
    exactly one does. A pair that is a match one way and a mismatch the
    other is inconsistent and receives the average (s1+s3)/2; otherwise the
    strongest applicable category wins (match, then mismatch, then neutral).
    """
    fwd_match = g1_forward == 1 and g2_forward == 1
    bwd_match = g1_backward == 1 and g2_backward == 1
    fwd_mismatch = (g1_forward + g2_forward) == 1
    bwd_mismatch = (g1_backward + g2_backward) == 1
    if (fwd_match and bwd_mismatch) or (bwd_match and fwd_mismatch):
        return (s.s1 + s.s3) / 2.0
    if fwd_match or bwd_match:
        return s.s1
    if fwd_mismatch or bwd_mismatch:
        return s.s3
    return s.s2


def build_alignment_matrix(
    g1: Graph,
    g2: Graph,
    s: ScoreScheme,
    mapping_set: MappingSet,
    max_entries: int = DEFAULT_DENSE_ENTRY_CAP,
) -> np.ndarray:
    """Dense |R| x |R| alignment matrix over the given mapping set.

    Entries follow :func:`alignment_entry` on (G1(i,r), G2(j',s'));
    the diagonal is the neutral score (the zero adjacency diagonal makes
    this automatic). All entries are strictly positive. Refuses to build
    when |R|^2 exceeds ``max_entries``; use :func:`alignment_matvec` for
    large unrestricted problems instead.
    """
    if mapping_set.n1 != g1.n or mapping_set.n2 != g2.n:
        raise ValueError(
            f"mapping set sizes ({mapping_set.n1}, {mapping_set.n2}) do not match graphs ({g1.n}, {g2.n})"
        )
    if g1.directed != g2.directed:
        raise ValueError("graphs must be both directed or both undirected")
    r = len(mapping_set)
    if r * r > max_entries:
        raise MemoryGuardError(
            f"|R|^2 = {r * r} exceeds the cap of {max_entries} entries; "
            "use the implicit operator (alignment_matvec) for full mapping sets"
        )
    rows, cols = mapping_set.rows_cols()
    e1 = g1.as_float()[np.ix_(rows, rows)]
    e2 = g2.as_float()[np.ix_(cols, cols)]
    if not g1.directed:
        return (s.s1 + s.s2 - 2 * s.s3) * e1 * e2 + (s.s3 - s.s2) * (e1 + e2) + s.s2

    e1b, e2b = e1.T, e2.T
    fwd_match = (e1 == 1) & (e2 == 1)
    bwd_match = (e1b == 1) & (e2b == 1)
    fwd_mismatch = (e1 + e2) == 1
    bwd_mismatch = (e1b + e2b) == 1
    inconsistent = (fwd_match & bwd_mismatch) | (bwd_match & fwd_mismatch)
    out = np.full((r, r), s.s2, dtype=np.float64)
    out[fwd_mismatch | bwd_mismatch] = s.s3
    out[fwd_match | bwd_match] = s.s1
    out[inconsistent] = (s.s1 + s.s3) / 2.0
    return out


def alignment_matvec(g1: Graph, g2: Graph, s: ScoreScheme, y: np.ndarray) -> np.ndarray:
    """Product of the full (unrestricted) alignment matrix with ``y``.

    ``y`` uses the column-major vectorization ``y[i + j' * n1] = X[i, j']``.
    The three Kronecker-structured terms of the alignment matrix each act
    as a sandwich product on the n1 x n2 unfolding of ``y``, so the full
    matrix is never materialized. Undirected graphs only.
    """
    if g1.directed or g2.directed:
        raise ValueError("the implicit alignment operator supports undirected graphs only")
    n1, n2 = g1.n, g2.n
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (n1 * n2,):
        raise ValueError(f"vector length {y.shape} does not match n1*n2 = {n1 * n2}")
    Y = y.reshape((n1, n2), order="F")
    a1 = g1.as_float()
    a2 = g2.as_float()
    coupled = a1 @ Y @ a2.T
    g1_side = np.repeat((a1 @ Y).sum(axis=1, keepdims=True), n2, axis=1)
    g2_side = np.repeat((Y @ a2.T).sum(axis=0, keepdims=True), n1, axis=0)
    total = Y.sum()
    Z = (
        (s.s1 + s.s2 - 2 * s.s3) * coupled
        + (s.s3 - s.s2) * (g1_side + g2_side)
        + s.s2 * total
    )
    return Z.reshape(n1 * n2, order="F")
