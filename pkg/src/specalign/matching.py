"""Maximum-weight bipartite matching, exact and greedy.

The exact solver delegates the optimization to
``scipy.optimize.linear_sum_assignment`` and then normalizes the returned
assignment to the lexicographically smallest optimum, so equal-weight ties
resolve deterministically to the lowest (i, then j'). The greedy variant
implements the classic heaviest-cell sweep with a 1/2-approximation
guarantee for non-negative weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

__all__ = [
    "Assignment",
    "InfeasibleMatchingError",
    "hungarian_max_weight",
    "greedy_matching",
]

_TIE_TOL = 1e-9


class InfeasibleMatchingError(ValueError):
    """No full matching of the smaller side exists under the mask.

    ``deficient_rows`` is a set S of smaller-side vertices whose allowed
    neighborhood N(S) is smaller than S (a Hall violation witness).
    """

    def __init__(self, deficient_rows: list[int], neighborhood: list[int], transposed: bool):
        side = "column" if transposed else "row"
        other = "row" if transposed else "column"
        self.deficient_rows = deficient_rows
        self.neighborhood = neighborhood
        super().__init__(
            f"no full matching: {side}s {deficient_rows} only reach {other}s {neighborhood}"
        )


@dataclass(frozen=True)
class Assignment:
    """A one-to-one set of (i, j') pairs with its total weight."""

    pairs: tuple[tuple[int, int], ...]
    total_weight: float

    def __post_init__(self):
        rows = [i for i, _ in self.pairs]
        cols = [j for _, j in self.pairs]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise ValueError("assignment must use each row and column at most once")
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))

    def __len__(self) -> int:
        return len(self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


def _as_weight_mask(w: np.ndarray, allowed: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2:
        raise ValueError(f"weight matrix must be 2-D, got shape {w.shape}")
    if allowed is None:
        allowed = np.ones(w.shape, dtype=bool)
    else:
        allowed = np.asarray(allowed, dtype=bool)
        if allowed.shape != w.shape:
            raise ValueError(f"mask shape {allowed.shape} does not match weights {w.shape}")
    if not np.isfinite(w[allowed]).all():
        raise ValueError("weights on allowed cells must be finite")
    return w, allowed


def _max_bipartite_matching(allowed: np.ndarray) -> np.ndarray:
    """Kuhn's augmenting-path matching on a boolean mask; returns col match per row (-1 unmatched)."""
    n1, n2 = allowed.shape
    match_col = np.full(n2, -1, dtype=np.int64)

    def try_augment(row: int, seen: np.ndarray) -> bool:
        for col in range(n2):
            if allowed[row, col] and not seen[col]:
                seen[col] = True
                if match_col[col] == -1 or try_augment(match_col[col], seen):
                    match_col[col] = row
                    return True
        return False

    for row in range(n1):
        try_augment(row, np.zeros(n2, dtype=bool))
    match_row = np.full(n1, -1, dtype=np.int64)
    for col, row in enumerate(match_col):
        if row >= 0:
            match_row[row] = col
    return match_row


def _hall_violation(allowed: np.ndarray) -> tuple[list[int], list[int]]:
    """Deficient row set and its neighborhood, assuming no full row matching exists."""
    match_row = _max_bipartite_matching(allowed)
    free = [r for r in range(allowed.shape[0]) if match_row[r] == -1]
    start = free[0]
    col_owner = {int(c): int(r) for r, c in enumerate(match_row) if c >= 0}
    rows = {start}
    cols: set[int] = set()
    frontier = [start]
    while frontier:
        row = frontier.pop()
        for col in np.nonzero(allowed[row])[0]:
            col = int(col)
            if col in cols:
                continue
            cols.add(col)
            owner = col_owner.get(col)
            if owner is not None and owner not in rows:
                rows.add(owner)
                frontier.append(owner)
    return sorted(rows), sorted(cols)


def _solve_lap(w: np.ndarray, allowed: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """Max-weight full assignment of the smaller side, or None if infeasible."""
    cost = np.where(allowed, -w, np.inf)
    try:
        return linear_sum_assignment(cost)
    except ValueError:
        return None


def hungarian_max_weight(w: np.ndarray, allowed: np.ndarray | None = None) -> Assignment:
    """Maximum-weight one-to-one assignment covering the smaller side.

    Disallowed cells are excluded outright (no -inf sentinels in weights).
    Among maximum-weight assignments, returns the lexicographically
    smallest one: pairs are decided row by row, preferring the smallest
    feasible column that still permits an optimal completion.

    Raises :class:`InfeasibleMatchingError` with a Hall-violation witness
    when the mask admits no full matching of the smaller side.
    """
    w, allowed = _as_weight_mask(w, allowed)
    n1, n2 = w.shape

    transposed = n1 > n2
    side = allowed.T if transposed else allowed
    if not allowed.all():
        match_row = _max_bipartite_matching(side)
        if (match_row == -1).any():
            rows, cols = _hall_violation(side)
            raise InfeasibleMatchingError(rows, cols, transposed)

    solved = _solve_lap(w, allowed)
    if solved is None:
        rows, cols = _hall_violation(side)
        raise InfeasibleMatchingError(rows, cols, transposed)
    rr, cc = solved
    optimum = float(w[rr, cc].sum())
    tol = _TIE_TOL * max(1.0, abs(optimum))

    # Lexicographic normalization: fix (i, j') greedily in ascending order,
    # keeping only choices that preserve the optimal total.
    pairs: list[tuple[int, int]] = []
    fixed_weight = 0.0
    free_rows = list(range(n1))
    free_cols = list(range(n2))
    target_size = min(n1, n2)
    for i in range(n1):
        if len(pairs) == target_size:
            break
        remaining_rows = [r for r in free_rows if r != i]
        committed = False
        for j in free_cols:
            if not allowed[i, j]:
                continue
            rest = _best_completion(w, allowed, remaining_rows, [c for c in free_cols if c != j], target_size - len(pairs) - 1)
            if rest is None:
                continue
            if fixed_weight + w[i, j] + rest >= optimum - tol:
                pairs.append((i, j))
                fixed_weight += float(w[i, j])
                free_rows.remove(i)
                free_cols.remove(j)
                committed = True
                break
        if not committed:
            # Row i is unmatched in every optimal solution (only possible when n1 > n2).
            rest = _best_completion(w, allowed, remaining_rows, free_cols, target_size - len(pairs))
            if rest is None or fixed_weight + rest < optimum - tol:
                raise AssertionError("lexicographic normalization lost the optimum")
            free_rows.remove(i)
    return Assignment(pairs=tuple(pairs), total_weight=float(w[tuple(zip(*pairs))].sum()) if pairs else 0.0)


def _best_completion(
    w: np.ndarray,
    allowed: np.ndarray,
    rows: list[int],
    cols: list[int],
    need: int,
) -> float | None:
    """Best total weight of a matching of size ``need`` on the given submatrix, or None."""
    if need == 0:
        return 0.0
    if need > min(len(rows), len(cols)):
        return None
    sub_w = w[np.ix_(rows, cols)]
    sub_a = allowed[np.ix_(rows, cols)]
    if len(rows) > len(cols):
        sub_w, sub_a = sub_w.T, sub_a.T
    solved = _solve_lap(sub_w, sub_a)
    if solved is None:
        return None
    rr, cc = solved
    if len(rr) < need:
        return None
    return float(sub_w[rr, cc].sum())


def greedy_matching(w: np.ndarray, allowed: np.ndarray | None = None) -> Assignment:
    """Greedy heaviest-cell matching; ties go to the lowest (i, then j').

    For non-negative weights the result is at least half the optimum. Under
    restrictive masks the matching may cover fewer than min(n1, n2) rows.
    """
    w, allowed = _as_weight_mask(w, allowed)
    cells = np.argwhere(allowed)
    order = sorted(range(len(cells)), key=lambda t: (-w[cells[t, 0], cells[t, 1]], cells[t, 0], cells[t, 1]))
    used_rows: set[int] = set()
    used_cols: set[int] = set()
    pairs: list[tuple[int, int]] = []
    total = 0.0
    for t in order:
        i, j = int(cells[t, 0]), int(cells[t, 1])
        if i in used_rows or j in used_cols:
            continue
        used_rows.add(i)
        used_cols.add(j)
        pairs.append((i, j))
        total += float(w[i, j])
    return Assignment(pairs=tuple(pairs), total_weight=total)
