import itertools

import numpy as np
import pytest

from specalign.graph import Graph
from specalign.randgen import erdos_renyi
from specalign.score import (
    MappingSet,
    MemoryGuardError,
    ScoreScheme,
    alignment_entry,
    alignment_matvec,
    build_alignment_matrix,
    directed_alignment_entry,
    from_alpha,
)


class TestScoreScheme:
    def test_from_alpha_values(self):
        s = from_alpha(3, 0.001)
        assert (s.s1, s.s2, s.s3) == (3.001, 1.001, 0.001)
        assert s.gamma == pytest.approx(0.25)

    def test_from_alpha_boundary(self):
        with pytest.raises(ValueError):
            from_alpha(1.0, 0.001)

    def test_gamma_of_near_integer_scheme(self):
        # (5, 1, 0) itself is invalid (mismatch score must be positive);
        # the tiny-mismatch variant sits at gamma ~ 1/6
        with pytest.raises(ValueError):
            ScoreScheme(5, 1, 0)
        s = ScoreScheme(5, 1, 1e-9)
        assert s.gamma == pytest.approx(1 / 6, rel=1e-6)

    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            ScoreScheme(1, 2, 0.5)
        with pytest.raises(ValueError):
            ScoreScheme(3, 2, 2)

    def test_gamma_range_property(self):
        for s1, s2, s3 in [(4, 2, 1), (10, 1.5, 0.1), (2.0, 1.9, 1.8)]:
            g = ScoreScheme(s1, s2, s3).gamma
            assert 0 < g < 0.5


class TestAlignmentEntry:
    def test_case_table(self):
        s = ScoreScheme(4, 2, 1)
        assert alignment_entry(s, 1, 1) == 4
        assert alignment_entry(s, 1, 0) == 1
        assert alignment_entry(s, 0, 1) == 1
        assert alignment_entry(s, 0, 0) == 2

    def test_algebraic_form_matches_case_table_exhaustively(self):
        # the linear form and the case table agree on all binary inputs
        for s1, s2, s3 in [(4, 2, 1), (3.001, 1.001, 0.001), (7, 5, 2)]:
            s = ScoreScheme(s1, s2, s3)
            table = {(1, 1): s1, (1, 0): s3, (0, 1): s3, (0, 0): s2}
            for (e1, e2), want in table.items():
                assert alignment_entry(s, e1, e2) == pytest.approx(want)


class TestDirectedEntry:
    def test_all_zero_neutral(self):
        s = ScoreScheme(4, 2, 1)
        assert directed_alignment_entry(s, 0, 0, 0, 0) == 2

    def test_inconsistent_gets_average(self):
        s = ScoreScheme(4, 2, 1)
        # forward match, backward mismatch
        assert directed_alignment_entry(s, 1, 1, 1, 0) == 2.5
        assert directed_alignment_entry(s, 1, 0, 1, 1) == 2.5

    def test_match_dominates(self):
        s = ScoreScheme(4, 2, 1)
        assert directed_alignment_entry(s, 1, 0, 1, 0) == 4

    def test_mismatch_without_match(self):
        s = ScoreScheme(4, 2, 1)
        assert directed_alignment_entry(s, 1, 0, 0, 0) == 1

    def test_inconsistency_probability(self):
        # P(inconsistent) for iid Bernoulli(p) indicators is 4 p^3 (1-p)
        p = 0.1
        rng = np.random.default_rng(0)
        n = 10**6
        e = (rng.random((n, 4)) < p).astype(int)
        fwd_match = (e[:, 0] == 1) & (e[:, 2] == 1)
        bwd_match = (e[:, 1] == 1) & (e[:, 3] == 1)
        fwd_mism = (e[:, 0] + e[:, 2]) == 1
        bwd_mism = (e[:, 1] + e[:, 3]) == 1
        inconsistent = (fwd_match & bwd_mism) | (bwd_match & fwd_mism)
        expected = 4 * p**3 * (1 - p)
        sd = np.sqrt(expected * (1 - expected) / n)
        assert abs(inconsistent.mean() - expected) <= 4 * sd


class TestBuildAlignmentMatrix:
    def test_hand_computed_single_edge_pair(self):
        g = Graph.from_edges(2, [(0, 1)])
        a = build_alignment_matrix(g, g, ScoreScheme(4, 2, 1), MappingSet.full(2, 2))
        want = np.array(
            [
                [2, 1, 1, 4],
                [1, 2, 4, 1],
                [1, 4, 2, 1],
                [4, 1, 1, 2],
            ],
            dtype=float,
        )
        assert np.array_equal(a, want)

    def test_edgeless_all_neutral_off_diagonal(self):
        g = Graph.empty(3)
        a = build_alignment_matrix(g, g, ScoreScheme(4, 2, 1), MappingSet.full(3, 3))
        assert (a == 2).all()

    def test_alpha_scheme_value_set(self):
        alpha, eps = 3, 0.25
        s = from_alpha(alpha, eps)
        g1 = erdos_renyi(4, 0.5, 0)
        g2 = erdos_renyi(4, 0.5, 1)
        a = build_alignment_matrix(g1, g2, s, MappingSet.full(4, 4))
        assert set(np.round(np.unique(a), 9)) <= {alpha + eps, 1 + eps, eps}

    def test_symmetric_and_positive(self):
        g1 = erdos_renyi(5, 0.4, 2)
        g2 = erdos_renyi(5, 0.4, 3)
        a = build_alignment_matrix(g1, g2, ScoreScheme(4, 2, 1), MappingSet.full(5, 5))
        assert np.array_equal(a, a.T)
        assert a.min() > 0

    def test_memory_guard(self):
        g = Graph.empty(10)
        with pytest.raises(MemoryGuardError, match="implicit"):
            build_alignment_matrix(g, g, ScoreScheme(4, 2, 1), MappingSet.full(10, 10), max_entries=100)

    def test_restricted_submatrix_consistency(self):
        g1 = erdos_renyi(4, 0.5, 5)
        g2 = erdos_renyi(4, 0.5, 6)
        s = ScoreScheme(4, 2, 1)
        full = MappingSet.full(4, 4)
        a_full = build_alignment_matrix(g1, g2, s, full)
        sub = MappingSet(n1=4, n2=4, pairs=((0, 1), (1, 3), (2, 0), (3, 2)))
        a_sub = build_alignment_matrix(g1, g2, s, sub)
        idx = [full.index[p] for p in sub.pairs]
        assert np.array_equal(a_sub, a_full[np.ix_(idx, idx)])


def full_colmajor_order(n1, n2, mapping_set):
    return [mapping_set.index[(i, j)] for j in range(n2) for i in range(n1)]


class TestAlignmentMatvec:
    def test_zero_vector(self):
        g = erdos_renyi(3, 0.5, 0)
        out = alignment_matvec(g, g, ScoreScheme(4, 2, 1), np.zeros(9))
        assert np.array_equal(out, np.zeros(9))

    def test_matches_dense_product(self):
        rng = np.random.default_rng(7)
        s = ScoreScheme(4, 2, 1)
        for _ in range(20):
            n1, n2 = rng.integers(2, 7, size=2)
            g1 = erdos_renyi(int(n1), 0.5, int(rng.integers(2**31)))
            g2 = erdos_renyi(int(n2), 0.5, int(rng.integers(2**31)))
            full = MappingSet.full(g1.n, g2.n)
            a = build_alignment_matrix(g1, g2, s, full)
            order = full_colmajor_order(g1.n, g2.n, full)
            a_cm = a[np.ix_(order, order)]
            y = rng.standard_normal(g1.n * g2.n)
            assert np.abs(a_cm @ y - alignment_matvec(g1, g2, s, y)).max() < 1e-10

    def test_indicator_recovers_column(self):
        s = ScoreScheme(4, 2, 1)
        g1 = erdos_renyi(3, 0.6, 1)
        g2 = erdos_renyi(4, 0.6, 2)
        full = MappingSet.full(3, 4)
        a = build_alignment_matrix(g1, g2, s, full)
        order = full_colmajor_order(3, 4, full)
        a_cm = a[np.ix_(order, order)]
        for t in range(12):
            y = np.zeros(12)
            y[t] = 1.0
            assert np.allclose(alignment_matvec(g1, g2, s, y), a_cm[:, t], atol=1e-12)

    def test_dimension_mismatch(self):
        g = erdos_renyi(3, 0.5, 0)
        with pytest.raises(ValueError, match="length"):
            alignment_matvec(g, g, ScoreScheme(4, 2, 1), np.zeros(8))

    def test_directed_rejected(self):
        g = Graph.from_edges(3, [(0, 1)], directed=True)
        with pytest.raises(ValueError, match="undirected"):
            alignment_matvec(g, g, ScoreScheme(4, 2, 1), np.zeros(9))


class TestDirectedMatrix:
    def test_directed_entries_match_scalar_rule(self):
        s = ScoreScheme(4, 2, 1)
        rng = np.random.default_rng(3)
        for _ in range(5):
            adj1 = (rng.random((4, 4)) < 0.4).astype(np.int8)
            adj2 = (rng.random((4, 4)) < 0.4).astype(np.int8)
            np.fill_diagonal(adj1, 0)
            np.fill_diagonal(adj2, 0)
            g1 = Graph(adj1, directed=True)
            g2 = Graph(adj2, directed=True)
            full = MappingSet.full(4, 4)
            a = build_alignment_matrix(g1, g2, s, full)
            for (i, jp), (r, sp) in itertools.product(full.pairs, repeat=2):
                want = directed_alignment_entry(
                    s, adj1[i, r], adj1[r, i], adj2[jp, sp], adj2[sp, jp]
                )
                assert a[full.index[(i, jp)], full.index[(r, sp)]] == pytest.approx(want)
