import pytest
from hypothesis import given
from hypothesis import strategies as st

from convlab.framework import (
    AsymptoticOracle,
    ConfigurationError,
    ConvergenceRecord,
    MethodSpec,
    ModeReport,
    OracleContradiction,
    Status,
    StreamTrace,
    Verdict,
    apply_method,
    check_stability,
    classify_convergence,
    empirical_settle_stage,
)
from convlab import lineworld as lw
from convlab import perrin as pr

S, C, Q = Verdict.SIMPLE, Verdict.COMPLEX, Verdict.SUSPEND


def make_trace(verdicts, world_id="w"):
    return StreamTrace(world_id, tuple((None, v) for v in verdicts))


class TestApplyMethod:
    def test_dispatch_to_interval_rule(self):
        m = lw.mstar_method()
        assert apply_method(m, [lw.IntervalEvidence(-0.5, 0.5)]) is S
        assert apply_method(m, [lw.IntervalEvidence(0.2, 0.4)]) is C

    def test_dispatch_to_prism_rule(self):
        anti = pr.method_spec(pr.anti_realist_method(), lw.StreamSpec())
        assert apply_method(anti, [pr.PrismEvidence(0.9, 1.1, 0.95, 1.2)]) is Q

    def test_family_mismatch_is_configuration_error(self):
        m = lw.mstar_method()
        with pytest.raises(ConfigurationError):
            apply_method(m, [pr.PrismEvidence(0.9, 1.1, 0.95, 1.2)])

    def test_empty_history_rejected(self):
        with pytest.raises(ValueError):
            apply_method(lw.mstar_method(), [])

    def test_determinism(self):
        m = lw.mstar_method()
        hist = [lw.IntervalEvidence(-1.0, 1.0), lw.IntervalEvidence(-0.25, 0.5)]
        assert apply_method(m, hist) is apply_method(m, hist)


class TestClassifyConvergence:
    def test_settled_from_start_with_oracle(self):
        trace = make_trace([S] * 10)
        oracle = AsymptoticOracle(Status.CONVERGES, settle_by=0)
        record = classify_convergence(trace, S, oracle)
        assert record.status is Status.CONVERGES
        assert record.settle_stage == 0

    def test_oracle_diverges_overrides_suffix(self):
        trace = make_trace([Q] * 6)
        record = classify_convergence(trace, S, AsymptoticOracle(Status.DIVERGES))
        assert record.status is Status.DIVERGES

    def test_near_diagonal_world_undetermined_at_short_horizon(self):
        # evidence cannot yet separate a from b: every verdict is SIMPLE,
        # the truth is COMPLEX, and no oracle is supplied
        w = pr.plane_world(1.0, 1.0 + 2.0**-50)
        spec = lw.StreamSpec(delta0=1.0, ratio=0.6)
        assert 2.0 * spec.half_width(19) > abs(w.na - w.na_prime)
        trace = pr.trace(pr.ockham_method(), w, spec, 20)
        assert all(v is S for v in trace.verdicts())
        record = classify_convergence(trace, w.truth, None)
        assert record.status is Status.UNDETERMINED

    def test_no_oracle_never_definite(self):
        record = classify_convergence(make_trace([C] * 4), C, None)
        assert record.status is Status.UNDETERMINED

    def test_settle_beyond_horizon_undetermined(self):
        trace = make_trace([S, S, S])
        oracle = AsymptoticOracle(Status.CONVERGES, settle_by=10)
        assert classify_convergence(trace, S, oracle).status is Status.UNDETERMINED

    def test_contradiction_detected(self):
        trace = make_trace([C, C, C, C])
        oracle = AsymptoticOracle(Status.CONVERGES, settle_by=1)
        with pytest.raises(OracleContradiction):
            classify_convergence(trace, S, oracle)

    def test_empty_trace_rejected(self):
        with pytest.raises(ValueError):
            classify_convergence(StreamTrace("w", ()), S, None)

    def test_oracle_requires_settle_stage(self):
        with pytest.raises(ValueError):
            AsymptoticOracle(Status.CONVERGES)
        with pytest.raises(ValueError):
            AsymptoticOracle(Status.UNDETERMINED)


class TestSettleStage:
    def test_basic(self):
        assert empirical_settle_stage([C, S, S], S) == 1
        assert empirical_settle_stage([S, S, S], S) == 0
        assert empirical_settle_stage([S, C], S) is None
        assert empirical_settle_stage([], S) is None


class TestStability:
    def test_all_suspend_vacuously_stable(self):
        assert check_stability(make_trace([Q, Q, Q]), S) == (True, None)

    def test_retraction_detected_with_adjacent_witness(self):
        passed, witness = check_stability(make_trace([S, S, C]), S)
        assert not passed
        assert witness == (1, 2)

    def test_false_answer_may_be_retracted(self):
        assert check_stability(make_trace([S, C, C]), C)[0]

    def test_suspension_after_truth_counts_as_retraction(self):
        passed, witness = check_stability(make_trace([S, Q]), S)
        assert not passed and witness == (0, 1)

    @given(st.lists(st.sampled_from([S, C, Q]), min_size=1, max_size=12),
           st.lists(st.sampled_from([S, C, Q]), min_size=0, max_size=6),
           st.sampled_from([S, C]))
    def test_monotone_under_extension(self, verdicts, extra, truth):
        base_ok, _ = check_stability(make_trace(verdicts), truth)
        ext_ok, _ = check_stability(make_trace(verdicts + extra), truth)
        if not base_ok:
            assert not ext_ok

    def test_converges_implies_stable_suffix(self):
        # records produced by the interval sweep honor the framework contract
        spec = lw.StreamSpec(delta0=1.0, ratio=0.7)
        mstar = lw.mstar_method()
        for theta in (0.0, 0.05, -0.3, 1.0):
            w = lw.LineWorld(theta)
            trace = lw.trace(mstar, w, spec, 40)
            record = classify_convergence(trace, w.truth, mstar.oracle(w, spec))
            assert record.status is Status.CONVERGES
            suffix = StreamTrace(trace.world_id, trace.stages[record.settle_stage:])
            assert check_stability(suffix, w.truth)[0]


class TestModeReport:
    def test_failing_report_needs_witnesses(self):
        with pytest.raises(ValueError):
            ModeReport("POINTWISE", False, ())

    def test_witnesses_optional_on_pass(self):
        assert ModeReport("POINTWISE", True).passed
