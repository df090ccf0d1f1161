"""Runtime acceptance checks shared by the CLI's --check flag.

Each check returns (check_id, passed, detail).  The canonical gate for
the whole package is the pytest acceptance module, which pins the full
experiment sizes; the functions here express the same assertions so a
configured run can enforce them via exit code.
"""

from __future__ import annotations

import math

from . import gaussian as g
from . import lineworld as lw
from . import perrin as pr
from . import predsel as ps
from .framework import Status, check_stability


def check_gaussian_levels(mc_trials: int, seed: int):
    """Constant level of the sqrt(2)-threshold rule, the 95% rule's
    level, BIC's rising level, and power thresholds."""
    results = []
    aic = g.aic_rule()
    w0 = g.GaussianWorld(0.0)
    probs = [g.truth_prob_analytic(aic, w0, n) for n in (10, 100, 1000)]
    ok = all(abs(p - 0.8427) <= 0.0005 for p in probs)
    ok = ok and max(probs) - min(probs) <= 1e-12
    mc, se = g.truth_prob_mc(aic, w0, 100, mc_trials, seed)
    ok = ok and abs(mc - probs[1]) <= max(0.004, 4 * se)
    results.append(("gaussian_aic_level", ok, f"analytic={probs[1]:.6f} mc={mc:.6f}"))

    md = g.confidence_rule_95()
    p95 = g.truth_prob_analytic(md, w0, 100)
    mc95, se95 = g.truth_prob_mc(md, w0, 100, mc_trials, seed)
    ok = abs(p95 - 0.9500) <= 0.0005 and abs(mc95 - p95) <= max(0.004, 4 * se95)
    results.append(("gaussian_m_dagger_level", ok, f"analytic={p95:.6f} mc={mc95:.6f}"))

    bic = g.bic_rule()
    targets = {100: 0.968, 10**4: 0.9976, 10**6: 0.9998}
    vals = {n: g.truth_prob_analytic(bic, w0, n) for n in targets}
    ok = all(abs(vals[n] - t) <= 0.001 for n, t in targets.items())
    ok = ok and vals[100] < vals[10**4] < vals[10**6]
    for n in targets:
        mcb, seb = g.truth_prob_mc(bic, w0, n, mc_trials, seed)
        ok = ok and abs(mcb - vals[n]) <= 4 * seb
    results.append(("gaussian_bic_consistency", ok,
                    " ".join(f"n={n}:{v:.5f}" for n, v in vals.items())))

    w5 = g.GaussianWorld(0.5)
    ok = all(g.truth_prob_analytic(aic, w5, n) >= 0.999 for n in (100, 200, 1000, 10**4))
    ok = ok and all(g.truth_prob_analytic(bic, w5, n) >= 0.999 for n in (200, 400, 1000, 10**4))
    results.append(("gaussian_power", ok, "theta=0.5 thresholds"))
    return results


def check_lineworld_suite(horizon: int = 60, ratio: float = 0.7):
    results = []
    worlds = [lw.LineWorld(round(i * 0.01, 10)) for i in range(-50, 51)]
    mstar = lw.mstar_method()
    specs = [
        lw.StreamSpec(delta0=1.0, ratio=ratio),
        lw.StreamSpec(delta0=1.0, ratio=ratio, drift="offcenter", offset=-1.0),
        lw.StreamSpec(delta0=1.0, ratio=ratio, drift="offcenter", offset=0.7),
    ]
    ok = True
    for spec in specs:
        records = lw.check_pointwise(mstar, worlds, spec, horizon)
        ok = ok and all(r.status is Status.CONVERGES for r in records)
        for w in worlds:
            passed, _ = check_stability(lw.trace(mstar, w, spec, horizon), w.truth)
            ok = ok and passed
    results.append(("lineworld_mstar_pointwise_stable", ok, f"{len(worlds)} worlds x {len(specs)} drifts"))

    ok = True
    for method in (mstar, lw.always_complex_method(), lw.always_suspend_method()):
        for length in (1.0, 0.1, 0.01):
            wit = lw.refute_uniform(method, length)
            ok = ok and lw.witness_is_valid(method, wit, length)
    results.append(("lineworld_uniform_refuted", ok, "lengths 1, 0.1, 0.01"))

    ok = lw.razor_necessity_probe(mstar).consequence == "NONE_FOUND"
    flagged = []
    for adversary in lw.razor_violator_suite():
        report = lw.razor_necessity_probe(adversary)
        flagged.append(report.consequence)
        ok = ok and report.consequence in ("POINTWISE_FAIL", "STABILITY_FAIL")
    results.append(("lineworld_razor_probe", ok, ",".join(flagged)))
    return results


def check_predsel_directions(a: ps.RegimeSummary, b: ps.RegimeSummary):
    results = []
    diff = a.correct_frequency_bic - a.correct_frequency_aic
    results.append(("predsel_regime_true_model", diff >= 0.05,
                    f"bic={a.correct_frequency_bic:.4f} aic={a.correct_frequency_aic:.4f}"))
    results.append(("predsel_regime_misspecified",
                    b.mean_excess_risk_aic <= b.mean_excess_risk_bic,
                    f"aic={b.mean_excess_risk_aic:.6f} bic={b.mean_excess_risk_bic:.6f}"))
    return results


def check_predsel_probe(seed: int, probe_reps: int = 4000):
    probe_truth = ps.poly_truth((1.0, -2.0, 0.5), noise_sigma=1.0, design="grid")
    at200 = ps.unbiasedness_probe(probe_truth, degree=2, n=200, reps=probe_reps, seed=seed)
    seeds = [seed + k for k in range(5)]
    rb_small = [ps.unbiasedness_probe(probe_truth, 2, 50, probe_reps, s).relative_bias for s in seeds]
    rb_large = [ps.unbiasedness_probe(probe_truth, 2, 400, probe_reps, s).relative_bias for s in seeds]
    trend = sum(rb_large) / 5 <= sum(rb_small) / 5
    return [("predsel_unbiasedness", at200.relative_bias <= 0.02 and trend,
             f"rel_bias(200)={at200.relative_bias:.5f}")]


EXPECTED_PATTERNS = {
    "OCKHAM_REALIST": (True, True, True),
    "ANTI_REALIST": (False, False, True),
    "WAY1": (True, False, True),
    "WAY2": (True, True, False),
    "WAY3": (False, None, True),  # None: maximality unconstrained
}


def check_perrin_theorem(config: pr.PerrinConfig, sheets: dict):
    """sheets: method kind -> ScoreSheet (computed by the caller so the
    grids are not recomputed per check)."""
    results = []
    ok = True
    details = []
    for kind, expected in EXPECTED_PATTERNS.items():
        got = sheets[kind].pattern()
        match = all(e is None or e == v for e, v in zip(expected, got))
        ok = ok and match
        details.append(f"{kind}:{''.join('P' if v else 'F' for v in got)}")
    way2 = sheets["WAY2"]
    ok = ok and not way2.stable.passed and len(way2.stable.witnesses) > 0
    results.append(("perrin_score_sheet", ok, " ".join(details)))

    ock = sheets["OCKHAM_REALIST"].fractions
    f1 = ock["coarse"]["plane"]["DIVERGES"]
    f2 = ock["refined"]["plane"]["DIVERGES"]
    ok = f1 > 0 and 0.25 * f1 <= f2 <= 0.75 * f1
    anti = sheets["ANTI_REALIST"].fractions
    ok = ok and anti["coarse"]["strand"]["DIVERGES"] == 1.0
    ok = ok and anti["refined"]["strand"]["DIVERGES"] == 1.0
    results.append(("perrin_lower_dimension", ok, f"ockham plane {f1:.5f}->{f2:.5f}"))

    ok = all(
        pr.underdetermination_ok(m, config.grid, config.stream)
        for m in pr.builtin_methods(config)
    )
    results.append(("perrin_underdetermination", ok, "no pair doubly covered"))
    return results


def check_perrin_estimators(seed: int, reps: int = 1000, size: int = 400):
    results = []
    cov_b = pr.coverage_study("brownian", 1.0, 2.0, size, reps, 0.95, seed)
    cov_s = pr.coverage_study("sediment", 1.0, 2.0, size, reps, 0.95, seed)
    ok = cov_b.coverage >= 0.93 and cov_s.coverage >= 0.93
    for kind in ("brownian", "sediment"):
        widths = [
            pr.coverage_study(kind, 1.0, 2.0, s, 60, 0.95, seed).mean_width
            for s in (100, 200, 400, 800)
        ]
        slope = _loglog_slope((100, 200, 400, 800), widths)
        ok = ok and abs(slope + 0.5) <= 0.15
    results.append(("perrin_estimators", ok,
                    f"coverage brownian={cov_b.coverage:.3f} sediment={cov_s.coverage:.3f}"))
    return results


def _loglog_slope(xs, ys) -> float:
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    mx = sum(lx) / len(lx)
    my = sum(ly) / len(ly)
    num = sum((a - mx) * (b - my) for a, b in zip(lx, ly))
    den = sum((a - mx) ** 2 for a in lx)
    return num / den
