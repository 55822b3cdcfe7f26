"""Seeded no-free-lunch measurements and their exact counterparts."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scmlab import (
    EXACT,
    LEARNERS,
    MONTE_CARLO,
    PRNG_ID,
    Family,
    RootedTree,
    build_tree_scm,
    derive_seed,
    mutual_information_check,
    per_query_error,
    run_nfl,
    sample_obs,
    serialize,
)
from scmlab.errors import BadRangeError, MTooLargeError
from scmlab.learning import Dataset, _graph_oracle

QUARTER = Fraction(1, 4)


class TestDeriveSeed:
    def test_deterministic(self):
        assert derive_seed(42, "graph", 0) == derive_seed(42, "graph", 0)
        assert derive_seed(42, "graph", 0) == 2712432163083669725

    def test_streams_are_distinct(self):
        seeds = {
            derive_seed(42, "graph", 0),
            derive_seed(42, "graph", 1),
            derive_seed(42, "data", 0),
            derive_seed(42, "learner", 0),
            derive_seed(43, "graph", 0),
        }
        assert len(seeds) == 5

    def test_fits_64_bits(self):
        assert 0 <= derive_seed(123456789, "x") < 2**64


class TestSampleObs:
    def scm(self):
        return build_tree_scm(RootedTree(3, 1, {2: 1, 3: 2}))

    def test_rows_come_from_support(self):
        data = sample_obs(self.scm(), 100, seed=5)
        assert set(data.rows) <= {"000", "111"}
        assert len(data.rows) == 100

    def test_reproducible(self):
        a = sample_obs(self.scm(), 50, seed=5)
        b = sample_obs(self.scm(), 50, seed=5)
        assert a == b
        c = sample_obs(self.scm(), 50, seed=6)
        assert a.rows != c.rows

    def test_empty_sample(self):
        assert sample_obs(self.scm(), 0, seed=1).rows == ()

    def test_metadata(self):
        data = sample_obs(self.scm(), 3, seed=9, source="demo")
        assert (data.n, data.seed, data.source) == (3, 9, "demo")

    def test_rejects_negative_count(self):
        with pytest.raises(BadRangeError):
            sample_obs(self.scm(), -1, seed=0)


class TestLearnerRegistry:
    def test_ids(self):
        assert set(LEARNERS) == {
            "uniform-guess",
            "constant-empty",
            "empirical-independent",
        }

    def test_empirical_fit_degenerates_on_constant_data(self):
        learner = LEARNERS["empirical-independent"]
        data = Dataset(3, ("000",) * 4, 0, "fixed")
        oracle = learner.predict(data, 1, random.Random(0))
        assert oracle.component("obs").mass == {"000": Fraction(1)}

    def test_constant_empty_predicts_empty_graph(self):
        learner = LEARNERS["constant-empty"]
        data = Dataset(3, (), 0, "empty")
        oracle = learner.predict(data, 1, random.Random(0))
        assert serialize(oracle) == serialize(_graph_oracle(1, 0))


class TestExactRates:
    def test_uniform_guess_meets_bound(self):
        for m in (1, 2):
            report = run_nfl(m, 0, "uniform-guess", EXACT)
            assert report.success_rate == Fraction(1, 1 << (m * m))
            assert report.success_rate == report.bound

    def test_constant_empty_meets_bound(self):
        report = run_nfl(2, 0, "constant-empty", EXACT)
        assert report.success_rate == Fraction(1, 16) == report.bound

    def test_empirical_independent_never_recovers(self):
        report = run_nfl(2, 4, "empirical-independent", EXACT)
        assert report.success_rate == 0

    def test_every_learner_respects_bound(self):
        for learner_id in LEARNERS:
            report = run_nfl(2, 6, learner_id, EXACT)
            assert report.success_rate <= report.bound, learner_id

    def test_exact_report_shape(self):
        report = run_nfl(1, 3, "uniform-guess", EXACT)
        assert (report.mode, report.trials, report.successes) == (EXACT, None, None)
        assert report.seed is None
        assert report.prng == PRNG_ID


class TestMonteCarlo:
    def test_frozen_run(self):
        report = run_nfl(1, 2, "uniform-guess", MONTE_CARLO, trials=200, seed=7)
        assert report.successes == 97
        assert report.success_rate == Fraction(97, 200)
        assert report.bound == Fraction(1, 2)
        assert report.prng == PRNG_ID

    def test_deterministic_across_runs(self):
        a = run_nfl(2, 3, "constant-empty", MONTE_CARLO, trials=64, seed=11)
        b = run_nfl(2, 3, "constant-empty", MONTE_CARLO, trials=64, seed=11)
        assert a == b
        assert a.successes == 7

    def test_streams_isolate_data_from_learner(self):
        # uniform-guess never reads the dataset, so changing the sample
        # count must not shift the graph or guess streams
        small = run_nfl(1, 2, "uniform-guess", MONTE_CARLO, trials=200, seed=7)
        large = run_nfl(1, 5, "uniform-guess", MONTE_CARLO, trials=200, seed=7)
        assert small.successes == large.successes == 97

    def test_argument_validation(self):
        with pytest.raises(BadRangeError):
            run_nfl(1, 2, "uniform-guess", MONTE_CARLO, trials=None, seed=7)
        with pytest.raises(BadRangeError):
            run_nfl(1, 2, "uniform-guess", MONTE_CARLO, trials=10, seed=None)
        with pytest.raises(BadRangeError):
            run_nfl(1, 2, "no-such-learner", EXACT)
        with pytest.raises(BadRangeError):
            run_nfl(0, 2, "uniform-guess", EXACT)
        with pytest.raises(BadRangeError):
            run_nfl(1, -1, "uniform-guess", EXACT)
        with pytest.raises(BadRangeError):
            run_nfl(1, 2, "uniform-guess", "bootstrap")

    def test_m_cap(self):
        with pytest.raises(MTooLargeError):
            run_nfl(4, 2, "uniform-guess", EXACT)
        report = run_nfl(1, 2, "uniform-guess", EXACT, m_cap=1)
        assert report.m == 1
        with pytest.raises(MTooLargeError):
            run_nfl(2, 2, "uniform-guess", EXACT, m_cap=1)


class TestPerQueryError:
    def test_exact_grid(self):
        grid = {
            Fraction(0): Fraction(3, 4),
            Fraction(1, 8): Fraction(5, 8),
            Fraction(1, 4): Fraction(1, 2),
            Fraction(3, 8): Fraction(3, 8),
            Fraction(1, 2): QUARTER,
            Fraction(5, 8): QUARTER,
            Fraction(3, 4): QUARTER,
            Fraction(7, 8): QUARTER,
            Fraction(1): QUARTER,
        }
        for answer, expected in grid.items():
            assert per_query_error(1, answer) == expected, answer

    @given(st.fractions(min_value=0, max_value=1, max_denominator=64))
    @settings(max_examples=80, deadline=None)
    def test_every_constant_errs_at_least_a_quarter(self, answer):
        assert per_query_error(1, answer) >= QUARTER

    def test_mc_constant_hits_quarter_exactly(self):
        error = per_query_error(
            1, Fraction(3, 4), MONTE_CARLO, n_samples=2, trials=20, seed=11
        )
        assert error == QUARTER

    def test_mc_accepts_callable(self):
        error = per_query_error(
            1,
            lambda dataset: Fraction(3, 4),
            MONTE_CARLO,
            n_samples=2,
            trials=20,
            seed=11,
        )
        assert error == QUARTER

    def test_exact_rejects_callable(self):
        with pytest.raises(BadRangeError):
            per_query_error(1, lambda dataset: Fraction(1, 2))

    def test_mc_requires_full_arguments(self):
        with pytest.raises(BadRangeError):
            per_query_error(1, Fraction(1, 2), MONTE_CARLO, trials=5, seed=1)
        with pytest.raises(BadRangeError):
            per_query_error(1, Fraction(1, 2), MONTE_CARLO, n_samples=2, seed=1)
        with pytest.raises(BadRangeError):
            per_query_error(1, Fraction(1, 2), MONTE_CARLO, n_samples=2, trials=5)

    def test_m_cap(self):
        with pytest.raises(MTooLargeError):
            per_query_error(4, Fraction(1, 2))


class TestMutualInformation:
    def test_identical_laws_mean_zero_bits(self):
        for m in (1, 2):
            report = mutual_information_check(m)
            assert report.graph_count == 1 << (m * m)
            assert report.identical_laws is True
            assert report.mutual_information_bits == 0

    def test_family_size(self):
        assert mutual_information_check(2).graph_count == 16
