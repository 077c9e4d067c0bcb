import math

import numpy as np
import pytest

from exactnmf.generators import (
    kronecker_gap_matrix,
    generic_ngon_slack,
    ledm_integer,
    random_product,
    regular_ngon_slack,
)
from exactnmf.linalg import kronecker
from exactnmf.heuristics import (
    MS2Config,
    RBRConfig,
    RefineConfig,
    SAConfig,
    _rbr_core,
    _sa_core,
    accept_move,
    final_refinement,
    hybrid,
    ms1,
    ms2,
    rank_by_rank,
    simulated_annealing,
    temperature_ladder,
)
from exactnmf.initialization import InitStrategy, init_pair, make_rng
from exactnmf.linalg import relative_error
from exactnmf.solvers import SolverKind

FAST_REFINE = RefineConfig.deterministic(sweeps=2000)


class TestFinalRefinement:
    def test_default_budget_is_one_second_walltime(self):
        from exactnmf.solvers import WallTime
        assert RefineConfig().budget == WallTime(1.0)
        assert RefineConfig().alpha == 0.99
        assert RefineConfig().tol == 1e-6

    def test_exact_input_returns_immediately(self):
        rng = np.random.default_rng(0)
        W = rng.random((5, 2))
        H = rng.random((2, 4))
        res = final_refinement(W @ H, W, H, FAST_REFINE)
        assert res.sweeps == 0
        assert len(res.trace) == 1
        assert res.error <= 1e-12

    def test_stops_on_plateau(self):
        # rank-1 target with rank-1 factors converges, then the shrink test
        # fails and the loop exits
        rng = np.random.default_rng(1)
        X = np.outer(rng.random(6) + 0.2, rng.random(5) + 0.2)
        X = X + 0.5 * np.ones_like(X)  # still rank 2, no exact rank-1 fit
        W0, H0 = init_pair(InitStrategy.RNDCUBE, 6, 5, 1, rng)
        res = final_refinement(X, W0, H0, RefineConfig.deterministic(sweeps=50))
        assert res.error > 1e-6
        assert res.trace[-1] >= 0.99 * res.trace[-2]

    def test_trace_is_nonincreasing(self):
        rng = np.random.default_rng(2)
        X = rng.random((8, 7))
        W0, H0 = init_pair(InitStrategy.SPARSE11, 8, 7, 3, rng)
        res = final_refinement(X, W0, H0, RefineConfig.deterministic(sweeps=100))
        assert all(b <= a + 1e-12 for a, b in zip(res.trace, res.trace[1:]))

    def test_round_cap(self):
        rng = np.random.default_rng(3)
        X = rng.random((8, 7))
        W0, H0 = init_pair(InitStrategy.SPARSE11, 8, 7, 3, rng)
        res = final_refinement(X, W0, H0,
                               RefineConfig.deterministic(sweeps=10, max_rounds=2))
        assert res.sweeps <= 20

    def test_error_matches_pair(self):
        rng = np.random.default_rng(4)
        X = rng.random((6, 6))
        W0, H0 = init_pair(InitStrategy.SPARSE11, 6, 6, 2, rng)
        res = final_refinement(X, W0, H0, FAST_REFINE)
        assert res.error == pytest.approx(relative_error(X, res.pair), abs=1e-14)


class TestMultiStart:
    def test_ms1_rejects_large_rank(self):
        with pytest.raises(ValueError, match="invalid rank"):
            ms1(np.ones((4, 5)) + np.eye(4, 5), 4, FAST_REFINE)

    def test_ms2_rejects_large_rank(self):
        with pytest.raises(ValueError, match="invalid rank"):
            ms2(np.ones((4, 5)) + np.eye(4, 5), 5, refine=FAST_REFINE)

    def test_ms1_deterministic(self):
        X, _, _ = random_product(12, 12, 3, 0.2, seed=7)
        a = ms1(X, 3, FAST_REFINE, seed=5)
        b = ms1(X, 3, FAST_REFINE, seed=5)
        assert a.error == b.error
        assert np.array_equal(a.pair.W, b.pair.W)
        assert np.array_equal(a.pair.H, b.pair.H)

    def test_ms2_single_start_matches_ms1_on_converging_run(self):
        # with one start, the same seed stream and the refinement budget set
        # to the screening sweep count, both heuristics walk the same sweep
        # trajectory; when the first window already reaches the tolerance
        # they stop at the same boundary with identical factors
        X, _, _ = random_product(15, 15, 3, 0.3, seed=1)
        n_sweeps = 200
        refine = RefineConfig.deterministic(sweeps=n_sweeps)
        cfg = MS2Config(n_starts=1, sweeps_per_start=n_sweeps,
                        init=InitStrategy.SPARSE11)
        a = ms2(X, 3, cfg, refine, seed=1)
        b = ms1(X, 3, refine, init=InitStrategy.SPARSE11, seed=1)
        assert a.error <= 1e-6  # the regime the identity needs
        assert a.error == b.error
        assert a.sweeps == b.sweeps
        assert np.array_equal(a.pair.W, b.pair.W)
        assert np.array_equal(a.pair.H, b.pair.H)

    def test_ms2_keeps_best_candidate(self):
        X, _, _ = random_product(12, 12, 3, 0.2, seed=9)
        res = ms2(X, 3, MS2Config(n_starts=8, sweeps_per_start=10), FAST_REFINE, seed=2)
        assert res.error == pytest.approx(relative_error(X, res.pair), abs=1e-14)


class TestAcceptanceRule:
    def test_improving_moves_always_accepted(self):
        assert accept_move(-0.3, 1e-9, 0.999999)
        assert accept_move(0.0, 1e-9, 0.999999)

    def test_freezing_limit_rejects_worsening(self):
        assert not accept_move(0.05, 1e-12, 1e-9)

    def test_matches_boltzmann_probability(self):
        rng = make_rng(123)
        hits = sum(accept_move(0.05, 0.1, rng.random()) for _ in range(100000))
        p = math.exp(-0.5)
        sigma = math.sqrt(p * (1 - p) / 100000)
        assert abs(hits / 100000 - p) <= 3 * sigma


class TestTemperatureLadder:
    def test_levels_and_endpoints(self):
        ladder = temperature_ladder(0.1, 1e-4, 22)
        assert ladder.shape == (22,)
        assert ladder[0] == 0.1
        assert ladder[-1] == 1e-4

    def test_constant_ratio(self):
        ladder = temperature_ladder(0.1, 1e-4, 22)
        ratios = ladder[1:] / ladder[:-1]
        expected = (1e-4 / 0.1) ** (1 / 21)
        assert np.allclose(ratios, expected, rtol=1e-12)

    def test_config_exposes_schedule(self):
        cfg = SAConfig()
        assert cfg.ladder().shape == (22,)
        assert cfg.cooling_ratio == pytest.approx((1e-4 / 0.1) ** (1 / 21))

    def test_validation(self):
        with pytest.raises(ValueError):
            temperature_ladder(1e-4, 0.1, 22)
        with pytest.raises(ValueError):
            temperature_ladder(0.1, 1e-4, 1)


class TestSimulatedAnnealing:
    def test_rejects_reset_above_rank(self):
        X = regular_ngon_slack(6)
        with pytest.raises(ValueError, match="reset_factors"):
            simulated_annealing(X, 2, SAConfig(reset_factors=3), FAST_REFINE, seed=1)

    def test_early_exit_spares_budget(self):
        cfg = SAConfig()
        res = simulated_annealing(regular_ngon_slack(6), 5, cfg, FAST_REFINE, seed=1)
        assert res.error <= 1e-6
        # a full annealing run would spend 21 * 50 * 100 sweeps; the exit on
        # reaching the tolerance cuts that by orders of magnitude
        full_budget = 21 * cfg.moves_per_level * cfg.sweeps_per_move
        assert res.sweeps < full_budget / 10

    def test_warm_start_at_tolerance_returns_without_moves(self):
        rng = np.random.default_rng(0)
        W = rng.random((6, 3))
        H = rng.random((3, 6))
        X = W @ H
        res = simulated_annealing(X, 3, SAConfig(), FAST_REFINE, seed=1,
                                  warm_start=(W, H))
        assert res.sweeps == 0
        assert res.error <= 1e-12

    def test_best_so_far_trace_nonincreasing(self):
        X = ledm_integer(6)
        rng = make_rng(11)
        cfg = SAConfig(moves_per_level=5, sweeps_per_move=20, n_levels=6)
        _, _, _, _, trace = _sa_core(X, 4, cfg, 1e-6, SolverKind.AHALS, rng)
        assert all(b <= a for a, b in zip(trace, trace[1:]))

    def test_deterministic(self):
        X = regular_ngon_slack(7)
        cfg = SAConfig(moves_per_level=5, sweeps_per_move=20, n_levels=6)
        a = simulated_annealing(X, 6, cfg, FAST_REFINE, seed=4)
        b = simulated_annealing(X, 6, cfg, FAST_REFINE, seed=4)
        assert a.error == b.error and a.sweeps == b.sweeps
        assert np.array_equal(a.pair.W, b.pair.W)


class TestRankByRank:
    def test_rank_one_matrix_needs_no_attempts(self):
        rng = np.random.default_rng(5)
        X = np.outer(rng.random(7) + 0.1, rng.random(6) + 0.1)
        res = rank_by_rank(X, 1, RBRConfig(), FAST_REFINE, seed=1)
        assert res.error <= 1e-10
        assert res.sweeps == 0  # the singular triplet already solves it

    def test_stage_errors_never_regress(self):
        for seed, X, r in ((1, ledm_integer(6), 5),
                           (2, regular_ngon_slack(8), 6),
                           (3, random_product(12, 12, 5, 0.2, seed=0)[0], 5)):
            rng = make_rng(seed)
            _, _, _, _, stages = _rbr_core(
                X, r, RBRConfig(), SolverKind.AHALS, rng, np.linalg.norm(X))
            assert all(b <= a + 1e-12 for a, b in zip(stages, stages[1:]))

    def test_finds_hexagon_factorization(self):
        res = rank_by_rank(regular_ngon_slack(6), 5, refine=FAST_REFINE, seed=1)
        assert res.error <= 1e-6
        assert res.pair.W.shape == (6, 5)
        assert res.pair.H.shape == (5, 6)
        assert res.pair.W.min() >= 0 and res.pair.H.min() >= 0

    def test_error_matches_pair(self):
        X = regular_ngon_slack(7)
        res = rank_by_rank(X, 6, refine=FAST_REFINE, seed=2)
        assert res.error == pytest.approx(relative_error(X, res.pair), abs=1e-14)


class TestHybrid:
    def test_annealer_exits_when_growth_already_exact(self):
        # long growth attempts fully converge on an easy product, so the
        # annealing phase and the refinement both exit without work
        X, _, _ = random_product(12, 12, 3, 0.3, seed=4)
        cfg = RBRConfig(attempts_per_stage=10, sweeps_per_attempt=500)
        res = hybrid(X, 3, rbr_cfg=cfg, refine=FAST_REFINE, seed=1)
        rbr_only = rank_by_rank(X, 3, cfg, refine=FAST_REFINE, seed=1)
        assert res.error <= 1e-6
        assert res.sweeps == rbr_only.sweeps == 2 * 10 * 500

    def test_beats_growth_on_kronecker_square(self):
        A = kronecker_gap_matrix()
        res = hybrid(A, 4, sa_cfg=SAConfig(moves_per_level=10, sweeps_per_move=50),
                     refine=FAST_REFINE, seed=1)
        assert res.error <= 1e-6

    def test_no_exact_rank3_fit_for_gap_matrix(self):
        # nonnegative rank 4: a trimmed-budget search at rank 3 never lands
        A = kronecker_gap_matrix()
        cfg = SAConfig(moves_per_level=5, sweeps_per_move=20, n_levels=8)
        for seed in range(1, 11):
            res = hybrid(A, 3, sa_cfg=cfg, refine=FAST_REFINE, seed=seed)
            assert res.error > 1e-4

    def test_deterministic(self):
        X = ledm_integer(8)
        cfg = SAConfig(moves_per_level=4, sweeps_per_move=20, n_levels=5)
        a = hybrid(X, 6, sa_cfg=cfg, refine=FAST_REFINE, seed=9)
        b = hybrid(X, 6, sa_cfg=cfg, refine=FAST_REFINE, seed=9)
        assert a.error == b.error and a.sweeps == b.sweeps


class TestKnownFindings:
    """Search results that certify known nonnegative-rank values."""

    def test_dodecahedron_factors_at_rank_9(self):
        from exactnmf.generators import dodecahedron_slack
        res = rank_by_rank(dodecahedron_slack(), 9,
                           refine=RefineConfig.deterministic(), seed=1)
        assert res.error <= 1e-6

    def test_plain_multistart_cracks_random_product(self):
        X, _, _ = random_product(50, 50, 10, 0.1, seed=101)
        refine = RefineConfig.deterministic()
        assert any(ms1(X, 10, refine, init=InitStrategy.SPARSE11, seed=s).error <= 1e-6
                   for s in range(1, 11))

    def test_generic_12gon_factors_at_rank_9(self):
        X = generic_ngon_slack(12, seed=7)
        refine = RefineConfig.deterministic()
        assert any(hybrid(X, 9, refine=refine, seed=s).error <= 1e-6
                   for s in range(1, 31))

    def test_gap_matrix_kronecker_square_at_rank_15(self):
        # one below the product of the factors' nonnegative ranks (4 * 4)
        AA = kronecker(kronecker_gap_matrix(), kronecker_gap_matrix())
        refine = RefineConfig.deterministic()
        assert any(hybrid(AA, 15, refine=refine, seed=s).error <= 1e-6
                   for s in range(1, 31))
