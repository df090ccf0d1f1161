import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from convlab import perrin as pr
from convlab.framework import (
    ConfigurationError,
    Status,
    StreamError,
    Verdict,
    check_stability,
)
from convlab.lineworld import StreamSpec

S, C, Q = Verdict.SIMPLE, Verdict.COMPLEX, Verdict.SUSPEND

SMALL = pr.PerrinConfig(grid=pr.GridSpec(0.5, 1.5, 0.1), horizon=40)


@pytest.fixture(scope="module")
def small_sheets():
    return {m.kind: pr.score_sheet(m, SMALL) for m in pr.builtin_methods(SMALL)}


class TestDecide:
    def test_realist_razor_keeps_simple_on_overlap(self):
        e = pr.PrismEvidence(0.9, 1.1, 0.95, 1.2)
        assert pr.decide(pr.ockham_method(), [e]) is S

    def test_both_deduce_complex_without_overlap(self):
        e = pr.PrismEvidence(0.2, 0.4, 0.6, 0.8)
        assert pr.decide(pr.ockham_method(), [e]) is C
        assert pr.decide(pr.anti_realist_method(), [e]) is C

    def test_agnostic_rule_suspends_on_overlap(self):
        e = pr.PrismEvidence(0.9, 1.1, 0.95, 1.2)
        assert pr.decide(pr.anti_realist_method(), [e]) is Q

    def test_way2_sacrifices_despite_overlap(self):
        way2 = pr.PerrinMethod(kind="WAY2", p=1.0, delta0=0.1)
        e = pr.PrismEvidence(0.97, 1.03, 0.98, 1.02)
        assert e.overlap()
        assert pr.decide(way2, [e]) is C

    def test_way1_suspends_at_sacrificed_point(self):
        way1 = pr.PerrinMethod(kind="WAY1", p=1.0, eps=0.5)
        e = pr.PrismEvidence(0.97, 1.03, 0.98, 1.02)
        assert pr.decide(way1, [e]) is Q

    def test_way3_threshold(self):
        way3 = pr.PerrinMethod(kind="WAY3", delta0=0.05)
        assert pr.decide(way3, [pr.PrismEvidence(0.99, 1.01, 0.99, 1.01)]) is C
        assert pr.decide(way3, [pr.PrismEvidence(0.9, 1.1, 0.9, 1.1)]) is S

    def test_nesting_enforced(self):
        a = pr.PrismEvidence(0.0, 1.0, 0.0, 1.0)
        b = pr.PrismEvidence(0.5, 1.5, 0.5, 1.5)
        with pytest.raises(StreamError):
            pr.decide(pr.ockham_method(), [a, b])
        with pytest.raises(StreamError):
            pr.decide(pr.ockham_method(), [])

    def test_method_validation(self):
        with pytest.raises(ValueError):
            pr.PerrinMethod(kind="WAY1", p=1.0)
        with pytest.raises(ValueError):
            pr.PerrinMethod(kind="WAY2", p=1.0, delta0=-0.5)
        with pytest.raises(ValueError):
            pr.PerrinMethod(kind="WAY9")


class TestPrismStreams:
    def test_centered_stage_one(self):
        w = pr.strand_world(1.0)
        e = pr.canonical_prism_stream(w, StreamSpec(1.0, 0.5), 1)
        assert (e.xlo, e.xhi, e.ylo, e.yhi) == (0.5, 1.5, 0.5, 1.5)

    def test_overlap_eventually_fails_off_diagonal(self):
        w = pr.plane_world(0.8, 1.2)
        spec = StreamSpec(1.0, 0.5)
        first = next(t for t in range(40)
                     if not pr.canonical_prism_stream(w, spec, t).overlap())
        assert pr.canonical_prism_stream(w, spec, first - 1).overlap()
        # centered streams separate once the width drops below the gap
        assert 2.0 * spec.half_width(first) < 0.4 <= 2.0 * spec.half_width(first - 1)

    @given(a=st.floats(0.3, 1.7), b=st.floats(0.3, 1.7),
           lam=st.floats(-1, 1), t=st.integers(1, 20))
    def test_nested_and_containing(self, a, b, lam, t):
        w = pr.plane_world(a, b)
        spec = StreamSpec(1.0, 0.6, "offcenter", lam)
        e = pr.canonical_prism_stream(w, spec, t)
        assert e.contains_point(a, b)
        assert e.is_subset_of(pr.canonical_prism_stream(w, spec, t - 1))

    def test_degenerate_prism_rejected(self):
        with pytest.raises(StreamError):
            pr.PrismEvidence(1.0, 1.0, 0.0, 1.0)

    def test_strand_world_requires_equal_parameters(self):
        with pytest.raises(ValueError):
            pr.PastaWorld(na=1.0, na_prime=1.1, z=1)


class TestDomains:
    def test_realist_razor_domain_shape(self):
        g = pr.domain_of_convergence(pr.ockham_method(), SMALL.grid, SMALL.stream, 40)
        assert all(r.status is Status.CONVERGES for r in g.strand)
        n = len(g.axis)
        for ia in range(n):
            for ib in range(n):
                expected = Status.DIVERGES if ia == ib else Status.CONVERGES
                assert g.plane_record(ia, ib).status is expected

    def test_agnostic_domain_shape(self):
        g = pr.domain_of_convergence(pr.anti_realist_method(), SMALL.grid, SMALL.stream, 40)
        assert all(r.status is Status.DIVERGES for r in g.strand)
        n = len(g.axis)
        assert all(g.plane_record(i, i).status is Status.DIVERGES for i in range(n))
        assert g.plane_record(0, n - 1).status is Status.CONVERGES

    def test_way1_diverges_only_at_sacrificed_pair(self):
        way1 = pr.PerrinMethod(kind="WAY1", p=1.0, eps=4.0)
        g = pr.domain_of_convergence(way1, SMALL.grid, SMALL.stream, 40)
        idx = g.axis.index(1.0)
        for ia, record in enumerate(g.strand):
            expected = Status.DIVERGES if ia == idx else Status.CONVERGES
            assert record.status is expected

    def test_settle_stages_recorded(self):
        g = pr.domain_of_convergence(pr.ockham_method(), SMALL.grid, SMALL.stream, 40)
        assert all(r.settle_stage == 0 for r in g.strand)
        # settle stage equals the first stage whose prism leaves the diagonal
        w = pr.plane_world(g.axis[0], g.axis[-1])
        brute = next(t for t in range(40)
                     if not pr.canonical_prism_stream(w, SMALL.stream, t).overlap())
        assert g.plane_record(0, len(g.axis) - 1).settle_stage == brute == 2

    def test_undetermined_fraction_shrinks_with_horizon(self):
        g3 = pr.domain_of_convergence(pr.ockham_method(), SMALL.grid, SMALL.stream, 3)
        g12 = pr.domain_of_convergence(pr.ockham_method(), SMALL.grid, SMALL.stream, 12)
        u3 = g3.fraction("plane", Status.UNDETERMINED)
        u12 = g12.fraction("plane", Status.UNDETERMINED)
        assert u3 > 0
        assert u12 < u3

    def test_simulation_never_contradicts_oracle(self):
        specs = [SMALL.stream,
                 StreamSpec(1.0, 0.6, "offcenter", 1.0),
                 StreamSpec(1.0, 0.6, "offcenter", -0.7)]
        worlds = [pr.strand_world(1.0), pr.strand_world(0.98), pr.plane_world(1.0, 1.0),
                  pr.plane_world(0.9, 1.3), pr.plane_world(1.0, 1.02)]
        for m in pr.builtin_methods(SMALL):
            for spec in specs:
                for w in worlds:
                    pr.classify_world(m, w, spec, 40)  # raises on contradiction

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            pr.GridSpec(1.5, 0.5, 0.1)
        with pytest.raises(ValueError):
            pr.GridSpec(0.5, 1.5, 0.13)


class TestAlmostEverywhere:
    def test_realist_razor_passes(self, small_sheets):
        assert small_sheets["OCKHAM_REALIST"].ae.passed

    def test_agnostic_fails_denseness_on_strand(self, small_sheets):
        report = small_sheets["ANTI_REALIST"].ae
        assert not report.passed
        strand_failures = [w for w in report.witnesses if w.get("component") == "strand"]
        assert strand_failures

    def test_way3_fails_full_strand(self, small_sheets):
        report = small_sheets["WAY3"].ae
        assert not report.passed
        assert small_sheets["WAY3"].fractions["coarse"]["strand"]["DIVERGES"] == 1.0

    def test_dimension_fraction_halves_for_razor(self, small_sheets):
        fr = small_sheets["OCKHAM_REALIST"].fractions
        f1 = fr["coarse"]["plane"]["DIVERGES"]
        f2 = fr["refined"]["plane"]["DIVERGES"]
        assert f1 > 0 and 0.25 * f1 <= f2 <= 0.75 * f1

    def test_mismatched_grids_rejected(self):
        g = pr.domain_of_convergence(pr.ockham_method(), SMALL.grid, SMALL.stream, 30)
        g_other = pr.domain_of_convergence(pr.anti_realist_method(), SMALL.grid.halved(),
                                           SMALL.stream, 30)
        with pytest.raises(ConfigurationError):
            pr.ae_check(g, g_other)
        with pytest.raises(ConfigurationError):
            pr.ae_check(g, g)


class TestMaximality:
    def test_realist_razor_maximal(self, small_sheets):
        assert small_sheets["OCKHAM_REALIST"].maximal.passed

    def test_agnostic_misses_every_pair(self, small_sheets):
        report = small_sheets["ANTI_REALIST"].maximal
        assert not report.passed
        assert all(w["check"] == "pair" for w in report.witnesses)

    def test_way1_fails_at_sacrificed_pair(self, small_sheets):
        report = small_sheets["WAY1"].maximal
        assert not report.passed
        assert any(w["a"] == 1.0 for w in report.witnesses)

    def test_way2_keeps_maximality(self, small_sheets):
        assert small_sheets["WAY2"].maximal.passed

    def test_undetermined_grid_rejected(self):
        g = pr.domain_of_convergence(pr.ockham_method(), SMALL.grid, SMALL.stream, 2)
        with pytest.raises(ConfigurationError):
            pr.maximality_check(pr.ockham_method(), g)


class TestStability:
    def test_realist_and_agnostic_stable(self, small_sheets):
        assert small_sheets["OCKHAM_REALIST"].stable.passed
        assert small_sheets["ANTI_REALIST"].stable.passed

    def test_way2_retracts_truth_at_sacrificed_strand_point(self, small_sheets):
        report = small_sheets["WAY2"].stable
        assert not report.passed
        strand_hits = [w for w in report.witnesses if w["z"] == 1 and w["na"] == 1.0]
        assert strand_hits
        verdicts = strand_hits[0]["verdicts"]
        assert verdicts[0] == "SIMPLE" and "COMPLEX" in verdicts

    def test_way2_witness_replays(self, small_sheets):
        wit = [w for w in small_sheets["WAY2"].stable.witnesses
               if w["z"] == 1 and w["na"] == 1.0][0]
        way2 = pr.PerrinMethod(kind="WAY2", p=SMALL.way2_p, delta0=SMALL.way2_delta0)
        world = pr.strand_world(wit["na"])
        for spec in pr.stability_spec_variants(SMALL.stream):
            if spec.label() == wit["stream"]:
                tr = pr.trace(way2, world, spec, SMALL.horizon)
                ok, pair = check_stability(tr, world.truth)
                assert not ok and list(pair) == list(wit["stage_pair"])
                assert [v.value for v in tr.verdicts()] == wit["verdicts"]
                break
        else:
            pytest.fail("witness stream spec not found")


class TestScoreSheet:
    def test_theorem_pattern(self, small_sheets):
        assert small_sheets["OCKHAM_REALIST"].pattern() == (True, True, True)
        assert small_sheets["ANTI_REALIST"].pattern() == (False, False, True)
        assert small_sheets["WAY1"].pattern() == (True, False, True)
        assert small_sheets["WAY2"].pattern() == (True, True, False)
        ae, _, stable = small_sheets["WAY3"].pattern()
        assert (ae, stable) == (False, True)

    def test_underdetermination_every_method(self):
        for m in pr.builtin_methods(SMALL):
            assert pr.underdetermination_ok(m, SMALL.grid, SMALL.stream)


class TestExperiments:
    def test_displacement_ratio_matches_generator(self):
        m = 100_000
        sample = pr.simulate_brownian(2.0, 4.0, (1.0, 2.0, 4.0), m, seed=5)
        slope_true = 4.0 / 2.0
        for t, msd in zip(sample.times, sample.msd):
            se = math.sqrt(2.0 / m) * slope_true * t
            assert abs(msd - slope_true * t) <= 3.0 * se

    def test_height_mean_matches_generator(self):
        n = 100_000
        sample = pr.simulate_sedimentation(2.0, 4.0, n, seed=5)
        mean_true = 1.0 / 8.0
        se = mean_true / math.sqrt(n)
        assert abs(sum(sample.heights) / n - mean_true) <= 3.0 * se

    def test_seed_reproducibility(self):
        a = pr.simulate_brownian(1.0, 1.0, (1.0, 2.0), 50, seed=3)
        b = pr.simulate_brownian(1.0, 1.0, (1.0, 2.0), 50, seed=3)
        assert a == b

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            pr.simulate_brownian(-1.0, 1.0, (1.0,), 10, 0)
        with pytest.raises(ValueError):
            pr.simulate_sedimentation(1.0, -2.0, 10, 0)
        with pytest.raises(ValueError):
            pr.ExperimentSample(kind="sediment", heights=(1.0, -2.0), cprime=1.0)


class TestEstimators:
    def test_intervals_shrink_onto_truth(self):
        small = pr.estimate_interval(
            pr.simulate_brownian(1.0, 2.0, pr.DEFAULT_TIMES, 200, 7), 0.95)
        large = pr.estimate_interval(
            pr.simulate_brownian(1.0, 2.0, pr.DEFAULT_TIMES, 200_000, 7), 0.95)
        assert large.hi - large.lo < small.hi - small.lo
        assert large.lo <= 1.0 <= large.hi
        assert abs(large.point - 1.0) < 0.02

    def test_sediment_interval(self):
        est = pr.estimate_interval(pr.simulate_sedimentation(1.0, 2.0, 100_000, 7), 0.95)
        assert est.parameter == "na_prime"
        assert est.lo <= 1.0 <= est.hi

    def test_nonpositive_slope_is_estimation_error(self):
        sample = pr.ExperimentSample(kind="brownian", times=(1.0, 2.0),
                                     msd=(1.0, -1.0), m_particles=10, c=1.0)
        with pytest.raises(pr.EstimationError):
            pr.estimate_interval(sample, 0.95)

    def test_confidence_validated(self):
        sample = pr.simulate_sedimentation(1.0, 1.0, 100, 1)
        with pytest.raises(ValueError):
            pr.estimate_interval(sample, 1.0)

    def test_coverage_smoke(self):
        res = pr.coverage_study("brownian", 1.0, 2.0, 400, 200, 0.95, seed=19)
        assert res.coverage >= 0.90
        res2 = pr.coverage_study("sediment", 1.0, 2.0, 400, 200, 0.95, seed=19)
        assert res2.coverage >= 0.90

    def test_width_scales_with_sample_size(self):
        w200 = pr.coverage_study("sediment", 1.0, 2.0, 200, 50, 0.95, 3).mean_width
        w800 = pr.coverage_study("sediment", 1.0, 2.0, 800, 50, 0.95, 3).mean_width
        assert w800 == pytest.approx(w200 / 2.0, rel=0.15)


class TestExperimentalStream:
    def test_diagonal_truth_keeps_simple(self):
        sr = pr.experimental_stream(1.0, 1.0, [50, 100, 200, 400, 800], 0.95, 20250801)
        assert sr.flagged_stage is None
        verdicts = [pr.decide_latest(pr.ockham_method(), e) for e in sr.prisms]
        assert all(v is S for v in verdicts)

    def test_off_diagonal_truth_eventually_complex(self):
        sr = pr.experimental_stream(0.8, 1.2, [50, 100, 200, 400, 800], 0.95, 20250801)
        verdicts = [pr.decide_latest(pr.ockham_method(), e) for e in sr.prisms]
        assert verdicts[-1] is C

    def test_nestedness_by_construction(self):
        sr = pr.experimental_stream(0.9, 1.1, [50, 100, 200, 400], 0.95, 11)
        for a, b in zip(sr.prisms, sr.prisms[1:]):
            assert b.is_subset_of(a)

    def test_containment_failure_flagged_not_fabricated(self):
        # at 50% confidence the per-stage intervals miss the truth often,
        # so an empty intersection appears quickly; the stream truncates
        sr = pr.experimental_stream(1.0, 1.0, [10, 20, 40, 80, 160, 320], 0.5, seed=0)
        assert sr.flagged_stage is not None
        assert len(sr.prisms) == sr.flagged_stage

    def test_schedule_must_increase(self):
        with pytest.raises(ValueError):
            pr.experimental_stream(1.0, 1.0, [100, 100], 0.95, 1)
