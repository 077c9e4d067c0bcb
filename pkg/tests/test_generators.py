import numpy as np
import pytest

from exactnmf.generators import (
    BenchmarkEntry,
    benchmark_registry,
    cell24_slack,
    conjectured_ngon_rank,
    corr_submatrix,
    dodecahedron_slack,
    kronecker_gap_matrix,
    generic_ngon_slack,
    ledm,
    ledm_integer,
    nested_squares,
    polygon_slack,
    random_product,
    regular_ngon_slack,
    registry_entry,
    registry_names,
    udisj_y,
    bit_vectors,
)
from exactnmf.linalg import numeric_rank


class TestLedm:
    def test_formula_on_small_vector(self):
        out = ledm([1.0, 2.0, 3.0])
        assert np.array_equal(out, [[0, 1, 4], [1, 0, 1], [4, 1, 0]])

    def test_constant_vector_gives_zero(self):
        assert np.array_equal(ledm([2.0, 2.0, 2.0]), np.zeros((3, 3)))

    def test_integer_instance_n2(self):
        assert np.array_equal(ledm_integer(2), [[0, 1], [1, 0]])

    def test_rank_three(self):
        assert numeric_rank(ledm_integer(6)) == 3
        assert numeric_rank(ledm_integer(16)) == 3

    def test_symmetric_zero_diagonal(self):
        X = ledm_integer(9)
        assert np.array_equal(X, X.T)
        assert np.all(np.diag(X) == 0)

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(1)
        a = rng.random(7)
        p = rng.permutation(7)
        assert np.allclose(ledm(a[p]), ledm(a)[np.ix_(p, p)])


class TestPolygonSlack:
    def test_square_has_two_zeros_per_row(self):
        S = regular_ngon_slack(4)
        assert np.all((S == 0).sum(axis=1) == 2)
        assert numeric_rank(S) == 3

    def test_regular_ngons_rank_three_and_nonnegative(self):
        for n in (6, 7, 9, 16, 32):
            S = regular_ngon_slack(n)
            assert S.shape == (n, n)
            assert S.min() >= 0
            assert numeric_rank(S) == 3

    def test_rejects_wide_gaps(self):
        with pytest.raises(ValueError, match="below pi"):
            polygon_slack([0.0, 0.1, 0.2])

    def test_rejects_non_increasing(self):
        with pytest.raises(ValueError, match="increasing"):
            polygon_slack([0.0, 2.0, 1.0])

    def test_generic_reproducible(self):
        assert np.array_equal(generic_ngon_slack(8, 42), generic_ngon_slack(8, 42))

    def test_generic_rank_three(self):
        for seed in (0, 1, 2):
            assert numeric_rank(generic_ngon_slack(8, seed)) == 3

    def test_generic_angular_separation(self):
        # minimum pairwise gap must exceed pi/n for every seed
        n = 8
        for seed in range(1000):
            rng = np.random.default_rng(seed)
            arc = 2 * np.pi / n
            theta = (np.arange(n) + 0.25 + 0.5 * rng.random(n)) * arc
            gaps = np.diff(np.append(theta, theta[0] + 2 * np.pi))
            assert gaps.min() > np.pi / n


class TestSolidSlacks:
    def test_dodecahedron(self):
        S = dodecahedron_slack()
        assert S.shape == (20, 12)
        assert S.min() >= 0
        assert numeric_rank(S) == 4
        assert np.all((S == 0).sum(axis=0) == 5)  # pentagon facets
        assert np.all((S == 0).sum(axis=1) == 3)  # vertex degree

    def test_cell24(self):
        S = cell24_slack()
        assert S.shape == (24, 24)
        assert S.min() >= 0
        assert numeric_rank(S) == 5
        assert np.all((S == 0).sum(axis=1) == 6)  # octahedron facets


class TestUdisj:
    @pytest.mark.parametrize("n,rank", [(2, 3), (3, 6), (4, 9), (5, 18), (6, 27), (7, 54)])
    def test_shape_and_rank(self, n, rank):
        Y = udisj_y(n)
        assert Y.shape == (2**n, 2**n)
        assert numeric_rank(Y) == rank

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_zero_pattern(self, n):
        Y = udisj_y(n)
        bits = bit_vectors(n)
        inner = bits @ bits.T
        # intersecting-in-one pairs are exactly zero, disjoint pairs at least 1
        assert np.all(Y[inner == 1] == 0)
        assert np.all(Y[inner == 0] >= 1)
        # zeros never fall on disjoint pairs
        assert np.all(inner[Y == 0] != 0)

    def test_order_bounds(self):
        with pytest.raises(ValueError):
            udisj_y(1)
        with pytest.raises(ValueError):
            udisj_y(8)


class TestRandomProduct:
    def test_reproducible(self):
        X1, W1, H1 = random_product(seed=5)
        X2, W2, H2 = random_product(seed=5)
        assert np.array_equal(X1, X2)
        assert np.array_equal(W1, W2)
        assert np.array_equal(H1, H2)

    def test_rank_is_r(self):
        for density in (0.1, 0.3):
            X, W, H = random_product(50, 50, 10, density, seed=3)
            assert X.shape == (50, 50)
            assert numeric_rank(X) == 10
            assert np.array_equal(X, W @ H)

    def test_every_rank_one_factor_nonzero(self):
        _, W, H = random_product(20, 20, 6, 0.1, seed=8)
        assert np.all(np.abs(W).sum(axis=0) > 0)
        assert np.all(np.abs(H).sum(axis=1) > 0)


class TestSmallCounterexamples:
    def test_nested_squares_values(self):
        a = np.sqrt(2) - 0.9
        A = nested_squares(a)
        assert A.shape == (4, 4)
        assert np.allclose(A[0], [1 + a, 1 - a, 1 - a, 1 + a])
        assert np.allclose(A[2], [1 + a, 1 + a, 1 - a, 1 - a])
        assert numeric_rank(A) == 3

    def test_nested_squares_degenerate(self):
        assert np.array_equal(nested_squares(0.0), np.ones((4, 4)))
        assert numeric_rank(nested_squares(0.0)) == 1

    def test_kronecker_gap_matrix(self):
        A = kronecker_gap_matrix()
        a = 3.0 / 8.0
        assert np.array_equal(A, [[1, 0, 1, a], [0, 1, 0, 1 - a],
                                  [0, 0, 1, 1 - a], [1, 1, 0, a]])
        assert numeric_rank(A) == 3

    def test_corr_submatrix_small(self):
        M = corr_submatrix(2)
        bits = bit_vectors(2)
        inner = bits @ bits.T
        assert np.all(M[inner == 0] == 1)
        assert np.all(M[inner == 1] == 0)
        assert np.all(M[inner == 2] == 1)

    @pytest.mark.parametrize("n", [3, 4])
    def test_corr_submatrix_rank(self, n):
        assert numeric_rank(corr_submatrix(n)) == n * (n + 1) // 2 + 1


class TestConjecturedNgonRank:
    def test_matches_known_values(self):
        expected = {6: 5, 7: 6, 8: 6, 9: 7, 16: 8, 32: 10}
        for n, r in expected.items():
            assert conjectured_ngon_rank(n) == r

    def test_small_polygons(self):
        assert conjectured_ngon_rank(3) == 3
        assert conjectured_ngon_rank(4) == 4
        assert conjectured_ngon_rank(5) == 5

    def test_monotone_with_unit_steps(self):
        values = [conjectured_ngon_rank(n) for n in range(3, 200)]
        steps = np.diff(values)
        assert np.all(steps >= 0)
        assert np.all(steps <= 1)


class TestRegistry:
    def test_eighteen_entries(self):
        assert len(benchmark_registry()) == 18

    def test_known_metadata(self):
        e = registry_entry("LEDM16")
        assert e.expected_shape == (16, 16)
        assert (e.known_rank, e.nnrank) == (3, 8)
        e = registry_entry("UDISJ6")
        assert e.expected_shape == (64, 64)
        assert (e.known_rank, e.nnrank) == (27, 27)
        e = registry_entry("20-D")
        assert e.expected_shape == (20, 12)
        assert (e.known_rank, e.nnrank) == (4, 9)

    def test_starred_entries_are_bounds(self):
        for name, lower in (("LEDM32", 9), ("24-C", 10)):
            e = registry_entry(name)
            assert not e.nnrank_exact
            assert e.nnrank_lower_bound == lower

    def test_every_entry_rank_checks(self):
        for e in benchmark_registry():
            assert e.matrix.shape == e.expected_shape
            assert numeric_rank(e.matrix) == e.known_rank
            assert e.nnrank >= e.known_rank

    def test_unknown_name(self):
        with pytest.raises(KeyError, match="LEDM6"):
            registry_entry("nope")

    def test_names_order_stable(self):
        assert registry_names()[:5] == ("LEDM6", "LEDM8", "LEDM12", "LEDM16", "LEDM32")

    def test_entry_rejects_inconsistent_ranks(self):
        with pytest.raises(ValueError):
            BenchmarkEntry("bad", np.eye(3), (3, 3), known_rank=3, nnrank=2)
