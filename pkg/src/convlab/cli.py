"""Configuration-driven experiment runner.

Reads a strict JSON config, runs the selected experiment suites, and
writes CSV/JSON artifacts plus plot-ready series.  A master seed with
per-module derived substreams makes every emitted number a function of
(config, seed); rerunning the same config reproduces the numeric
outputs byte for byte.

Exit codes: 0 success, 1 acceptance-check failure (--check), 2
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import __version__, checks
from . import gaussian as g
from . import lineworld as lw
from . import perrin as pr
from . import predsel as ps
from .framework import Status, check_stability
from .lineworld import StreamSpec


class ConfigError(ValueError):
    pass


EXPERIMENTS = ("lineworld", "gaussian", "predsel", "perrin")


def _num(lo=None, hi=None, lo_open=False, hi_open=False, integer=False):
    def check(v, path):
        if isinstance(v, bool):
            raise ConfigError(f"{path}: expected a number, got {v!r}")
        if integer:
            if not isinstance(v, int):
                raise ConfigError(f"{path}: expected an integer, got {v!r}")
        elif not isinstance(v, (int, float)):
            raise ConfigError(f"{path}: expected a number, got {v!r}")
        if lo is not None and (v <= lo if lo_open else v < lo):
            raise ConfigError(f"{path}: {v} below the valid range")
        if hi is not None and (v >= hi if hi_open else v > hi):
            raise ConfigError(f"{path}: {v} above the valid range")
        return v
    return check


def _bool(v, path):
    if not isinstance(v, bool):
        raise ConfigError(f"{path}: expected true/false, got {v!r}")
    return v


def _numlist(item_check):
    def check(v, path):
        if not isinstance(v, list) or not v:
            raise ConfigError(f"{path}: expected a non-empty list")
        return [item_check(x, f"{path}[{i}]") for i, x in enumerate(v)]
    return check


def _experiment(v, path):
    if isinstance(v, str):
        if v == "all":
            return list(EXPERIMENTS)
        if v in EXPERIMENTS:
            return [v]
        raise ConfigError(f"{path}: unknown experiment {v!r}")
    if isinstance(v, list):
        for x in v:
            if x not in EXPERIMENTS:
                raise ConfigError(f"{path}: unknown experiment {x!r}")
        return list(v)
    raise ConfigError(f"{path}: expected a name or list of names")


def _string(v, path):
    if not isinstance(v, str):
        raise ConfigError(f"{path}: expected a string, got {v!r}")
    return v


SCHEMA = {
    "experiment": ("all", _experiment),
    "seed": (20250801, _num(integer=True)),
    "out_dir": ("out", _string),
    "check": (False, _bool),
    "plots": (True, _bool),
    "format": ("csv", lambda v, p: v if v in ("csv", "json") else (_ for _ in ()).throw(
        ConfigError(f"{p}: expected 'csv' or 'json', got {v!r}"))),
    "gaussian": {
        "theta_grid": ([0.0, 0.1, 0.25, 0.5, 1.0], _numlist(_num())),
        "n_grid": ([10, 20, 50, 100, 200, 500, 1000, 10000], _numlist(_num(lo=2, integer=True))),
        "alpha_grid": ([0.16, 0.05, 0.01, 0.001], _numlist(_num(lo=0, hi=1, lo_open=True, hi_open=True))),
        "mc_trials": (200000, _num(lo=1000, integer=True)),
        "mc_theta_grid": ([0.0, 0.5], _numlist(_num())),
        "mc_n_grid": ([10, 100, 1000], _numlist(_num(lo=2, integer=True))),
    },
    "lineworld": {
        "theta_min": (-0.5, _num()),
        "theta_max": (0.5, _num()),
        "theta_step": (0.01, _num(lo=0, lo_open=True)),
        "horizon": (60, _num(lo=1, integer=True)),
        "delta0": (1.0, _num(lo=0, lo_open=True)),
        "ratio": (0.7, _num(lo=0, hi=1, lo_open=True, hi_open=True)),
        "offsets": ([0.0, -1.0, 0.7], _numlist(_num(lo=-1, hi=1))),
        "uniform_lengths": ([1.0, 0.1, 0.01], _numlist(_num(lo=0, lo_open=True))),
        "razor_budget": (4000, _num(lo=10, integer=True)),
    },
    "predsel": {
        "regime_a_coeffs": ([1.0, -2.0, 0.5], _numlist(_num())),
        "regime_a_sigma": (1.0, _num(lo=0, lo_open=True)),
        "regime_a_max_degree": (6, _num(lo=0, integer=True)),
        "regime_a_n": (500, _num(lo=4, integer=True)),
        "regime_a_reps": (2000, _num(lo=100, integer=True)),
        "regime_b_sigma": (0.5, _num(lo=0, lo_open=True)),
        "regime_b_max_degree": (12, _num(lo=0, integer=True)),
        "regime_b_n": (500, _num(lo=4, integer=True)),
        "regime_b_reps": (1000, _num(lo=100, integer=True)),
        "probe_reps": (4000, _num(lo=100, integer=True)),
    },
    "perrin": {
        "grid_lo": (0.5, _num()),
        "grid_hi": (1.5, _num()),
        "grid_step": (0.02, _num(lo=0, lo_open=True)),
        "horizon": (40, _num(lo=1, integer=True)),
        "delta0": (1.0, _num(lo=0, lo_open=True)),
        "ratio": (0.6, _num(lo=0, hi=1, lo_open=True, hi_open=True)),
        "way1_p": (1.0, _num()),
        "way1_eps": (4.0, _num(lo=0, lo_open=True)),
        "way2_p": (1.0, _num()),
        "way2_delta0": (0.1, _num(lo=0, lo_open=True)),
        "way3_delta0": (4.0, _num(lo=0, lo_open=True)),
        "coverage_reps": (1000, _num(lo=10, integer=True)),
        "coverage_size": (400, _num(lo=10, integer=True)),
        "stream_schedule": ([50, 100, 200, 400, 800], _numlist(_num(lo=2, integer=True))),
    },
}


def _apply_schema(raw: dict, schema: dict, path: str = "") -> dict:
    if not isinstance(raw, dict):
        raise ConfigError(f"{path or 'config'}: expected an object")
    out = {}
    for key, value in raw.items():
        dotted = f"{path}{key}"
        if key not in schema:
            raise ConfigError(f"unknown key {dotted!r}")
        spec = schema[key]
        if isinstance(spec, dict):
            out[key] = _apply_schema(value, spec, f"{dotted}.")
        else:
            _, check = spec
            out[key] = check(value, dotted)
    for key, spec in schema.items():
        if key in out:
            continue
        if isinstance(spec, dict):
            out[key] = _apply_schema({}, spec, f"{path}{key}.")
        else:
            default, check = spec
            out[key] = check(default, f"{path}{key}")
    return out


def validate_config(raw_text: str) -> dict:
    """Parse and fully default a JSON config; unknown keys and
    out-of-range values are rejected with field diagnostics."""
    try:
        raw = json.loads(raw_text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    return _apply_schema(raw, SCHEMA)


# ---------------------------------------------------------------------------
# output helpers


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Status):
        return v.value
    return str(v)


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def write_csv(path: Path, header, rows) -> None:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    _write_atomic(path, buf.getvalue())


def write_json(path: Path, obj) -> None:
    _write_atomic(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _report_to_dict(report) -> dict:
    return {"mode": report.mode_id, "pass": report.passed,
            "witnesses": list(report.witnesses)}


# ---------------------------------------------------------------------------
# per-experiment runners


def run_gaussian(cfg: dict, seed: int, out: Path, fmt: str) -> dict:
    gc = cfg["gaussian"]
    rules = [g.aic_rule(), g.confidence_rule_95(), g.bic_rule()]
    rows = []
    for rule in rules:
        for theta in gc["theta_grid"]:
            curve = g.curve_analytic(rule, theta, gc["n_grid"])
            rows += [(curve.rule, theta, n, p, se) for n, p, se in curve.points]
        for theta in gc["mc_theta_grid"]:
            curve = g.curve_mc(rule, theta, gc["mc_n_grid"], gc["mc_trials"], seed)
            rows += [(curve.rule, theta, n, p, se) for n, p, se in curve.points]
    _emit_rows(out / "curves", fmt, ("rule", "theta", "n", "truth_prob", "se"), rows)

    modes = {}
    for rule in rules:
        reports = g.classify_mode(rule, gc["theta_grid"], gc["n_grid"], gc["alpha_grid"])
        modes[rule.label()] = {
            "HIGH_PROB": _report_to_dict(reports["HIGH_PROB"]),
            "PROB_ONE": _report_to_dict(reports["PROB_ONE"]),
        }
    w0 = g.GaussianWorld(0.0)
    return {
        "levels_at_theta0": {
            rule.label(): g.truth_prob_analytic(rule, w0, 100) for rule in rules
        },
        "modes": modes,
        "curve_rows": len(rows),
    }


def run_lineworld(cfg: dict, seed: int, out: Path, fmt: str) -> dict:
    lc = cfg["lineworld"]
    steps = round((lc["theta_max"] - lc["theta_min"]) / lc["theta_step"])
    worlds = [lw.LineWorld(round(lc["theta_min"] + i * lc["theta_step"], 12))
              for i in range(steps + 1)]
    mstar = lw.mstar_method()
    specs = [StreamSpec(lc["delta0"], lc["ratio"])] + [
        StreamSpec(lc["delta0"], lc["ratio"], "offcenter", lam)
        for lam in lc["offsets"] if lam != 0.0
    ]
    pointwise = {}
    stable = True
    for spec in specs:
        records = lw.check_pointwise(mstar, worlds, spec, lc["horizon"])
        pointwise[spec.label()] = {
            s.value: sum(r.status is s for r in records) for s in Status
        }
        for w in worlds:
            ok, _ = check_stability(lw.trace(mstar, w, spec, lc["horizon"]), w.truth)
            stable = stable and ok

    uniform = []
    for length in lc["uniform_lengths"]:
        wit = lw.refute_uniform(mstar, length)
        uniform.append({
            "prescribed_length": length,
            "witness_theta": wit.world.theta,
            "verdict": wit.verdict.value,
            "replay_valid": lw.witness_is_valid(mstar, wit, length),
        })

    razor = {}
    for method in [mstar, lw.always_suspend_method()] + lw.razor_violator_suite():
        report = lw.razor_necessity_probe(method, lc["razor_budget"])
        razor[method.name] = report.consequence
    return {
        "worlds": len(worlds),
        "pointwise_by_stream": pointwise,
        "mstar_stable": stable,
        "uniform_refutations": uniform,
        "razor_probe": razor,
    }


def run_predsel(cfg: dict, seed: int, out: Path, fmt: str):
    pc = cfg["predsel"]
    header = ("rep", "degree", "rss", "aic", "bic", "true_risk",
              "selected_aic", "selected_bic")
    truth_a = ps.poly_truth(pc["regime_a_coeffs"], pc["regime_a_sigma"])
    a = ps.regime_experiment(truth_a, range(pc["regime_a_max_degree"] + 1),
                             pc["regime_a_n"], pc["regime_a_reps"], seed)
    _emit_rows(out / "selection", fmt, header, a.rows)

    truth_b = ps.abs_truth(pc["regime_b_sigma"])
    b = ps.regime_experiment(truth_b, range(pc["regime_b_max_degree"] + 1),
                             pc["regime_b_n"], pc["regime_b_reps"], seed)
    _emit_rows(out / "selection_misspecified", fmt, header, b.rows)

    probe_truth = ps.poly_truth(pc["regime_a_coeffs"], pc["regime_a_sigma"], design="grid")
    degree = max(k for k, c in enumerate(pc["regime_a_coeffs"]) if c != 0.0)
    probe = {
        str(n): ps.unbiasedness_probe(probe_truth, degree, n, pc["probe_reps"], seed).relative_bias
        for n in (50, 100, 200, 400)
    }
    summary = {
        "true_model_in_set": {
            "correct_frequency_aic": a.correct_frequency_aic,
            "correct_frequency_bic": a.correct_frequency_bic,
            "mean_excess_risk_aic": a.mean_excess_risk_aic,
            "mean_excess_risk_bic": a.mean_excess_risk_bic,
            "true_degree": a.true_degree,
            "reps": a.reps,
        },
        "misspecified": {
            "mean_excess_risk_aic": b.mean_excess_risk_aic,
            "mean_excess_risk_bic": b.mean_excess_risk_bic,
            "reps": b.reps,
        },
        "unbiasedness_probe_relative_bias": probe,
    }
    return summary, a, b


def _perrin_sheets(config: pr.PerrinConfig):
    """Per-method (coarse, refined) domains and score sheets."""
    domains = {}
    sheets = {}
    for m in pr.builtin_methods(config):
        gcoarse = pr.domain_of_convergence(m, config.grid, config.stream,
                                           config.horizon, config.max_workers)
        gfine = pr.domain_of_convergence(m, config.grid.halved(), config.stream,
                                         config.horizon, config.max_workers)
        domains[m.kind] = (gcoarse, gfine)
        sheets[m.kind] = pr.score_sheet(m, config, domains=(gcoarse, gfine))
    return domains, sheets


def perrin_config_from(cfg: dict, max_workers: int) -> pr.PerrinConfig:
    pc = cfg["perrin"]
    return pr.PerrinConfig(
        grid=pr.GridSpec(pc["grid_lo"], pc["grid_hi"], pc["grid_step"]),
        horizon=pc["horizon"],
        stream=StreamSpec(pc["delta0"], pc["ratio"]),
        way1_p=pc["way1_p"], way1_eps=pc["way1_eps"],
        way2_p=pc["way2_p"], way2_delta0=pc["way2_delta0"],
        way3_delta0=pc["way3_delta0"],
        max_workers=max_workers,
    )


def run_perrin(cfg: dict, seed: int, out: Path, fmt: str, max_workers: int):
    pc = cfg["perrin"]
    config = perrin_config_from(cfg, max_workers)
    domains, sheets = _perrin_sheets(config)

    for kind, (gcoarse, _) in domains.items():
        rows = []
        axis = gcoarse.axis
        n = len(axis)
        for ia in range(n):
            for ib in range(n):
                r = gcoarse.plane_record(ia, ib)
                rows.append(("plane", axis[ia], axis[ib], r.status, r.settle_stage))
        for ia in range(n):
            r = gcoarse.strand[ia]
            rows.append(("strand", axis[ia], axis[ia], r.status, r.settle_stage))
        _emit_rows(out / f"domain_{kind.lower()}", fmt,
                   ("component", "a", "b", "status", "settle_stage"), rows)

    scoresheet = {
        kind: {
            "ae": _report_to_dict(s.ae),
            "maximal": _report_to_dict(s.maximal),
            "stable": _report_to_dict(s.stable),
            "fractions": s.fractions,
        }
        for kind, s in sheets.items()
    }
    underdet = {
        m.kind: pr.underdetermination_ok(m, config.grid, config.stream)
        for m in pr.builtin_methods(config)
    }
    write_json(out / "scoresheet.json", scoresheet)

    coverage = {}
    for kind, const in (("brownian", 2.0), ("sediment", 2.0)):
        res = pr.coverage_study(kind, 1.0, const, pc["coverage_size"],
                                pc["coverage_reps"], 0.95, seed)
        coverage[kind] = {"coverage": res.coverage, "mean_width": res.mean_width,
                          "reps": res.reps}

    streams = {}
    for label, (na, nb) in (("diagonal", (1.0, 1.0)), ("off_diagonal", (0.8, 1.2))):
        sr = pr.experimental_stream(na, nb, pc["stream_schedule"], 0.95, seed)
        verdicts = [pr.decide_latest(pr.ockham_method(), e).value for e in sr.prisms]
        streams[label] = {"stages": len(sr.prisms), "flagged_stage": sr.flagged_stage,
                          "ockham_verdicts": verdicts}

    summary = {
        "pattern": {k: list(s.pattern()) for k, s in sheets.items()},
        "underdetermination_ok": underdet,
        "coverage": coverage,
        "experimental_streams": streams,
    }
    return summary, sheets, domains, config


def _emit_rows(base: Path, fmt: str, header, rows) -> None:
    if fmt == "json":
        payload = [dict(zip(header, row)) for row in rows]
        write_json(base.with_suffix(".json"),
                   json.loads(json.dumps(payload, default=_fmt)))
    else:
        write_csv(base.with_suffix(".csv"), header, rows)


# ---------------------------------------------------------------------------
# plot-data emission


def emit_plots(out: Path, fmt: str, gaussian_cfg: dict, seed: int,
               predsel_summary: Optional[dict], domains: Optional[dict],
               regime_rows) -> list:
    """Long-format series ready for any plotting tool."""
    plots = out / "plots"
    plots.mkdir(parents=True, exist_ok=True)
    written = []

    if gaussian_cfg is not None:
        rows = []
        for rule in (g.aic_rule(), g.confidence_rule_95(), g.bic_rule()):
            for theta in gaussian_cfg["theta_grid"]:
                for n in gaussian_cfg["n_grid"]:
                    p = g.truth_prob_analytic(rule, g.GaussianWorld(theta), n)
                    rows.append((rule.label(), theta, n, p))
        _emit_rows(plots / "truth_prob_series", fmt, ("rule", "theta", "n", "truth_prob"), rows)
        written.append("truth_prob_series")

    if domains is not None:
        code = {Status.CONVERGES: 1, Status.DIVERGES: 0, Status.UNDETERMINED: -1}
        for kind, (gcoarse, _) in domains.items():
            rows = []
            axis = gcoarse.axis
            n = len(axis)
            for ia in range(n):
                for ib in range(n):
                    rows.append(("plane", axis[ia], axis[ib],
                                 code[gcoarse.plane_record(ia, ib).status]))
            for ia in range(n):
                rows.append(("strand", axis[ia], axis[ia], code[gcoarse.strand[ia].status]))
            _emit_rows(plots / f"domain_map_{kind.lower()}", fmt,
                       ("component", "a", "b", "code"), rows)
            written.append(f"domain_map_{kind.lower()}")

    if regime_rows is not None:
        per_rep = {}
        for rep, _deg, _rss, _aic, _bic, risk, sel_aic, sel_bic in regime_rows:
            row = per_rep.setdefault(rep, {"risks": {}, "sel_aic": sel_aic, "sel_bic": sel_bic})
            row["risks"][_deg] = risk
        rows = []
        for rep, row in sorted(per_rep.items()):
            best = min(row["risks"].values())
            rows.append((rep, "aic", row["risks"][row["sel_aic"]] - best))
            rows.append((rep, "bic", row["risks"][row["sel_bic"]] - best))
        _emit_rows(plots / "regret_distribution", fmt, ("rep", "selector", "excess_risk"), rows)
        written.append("regret_distribution")
    return written


# ---------------------------------------------------------------------------
# orchestration


@dataclass
class RunOutcome:
    exit_code: int
    out_dir: Path
    summary: dict


def run(config: dict, out_dir: Optional[str] = None) -> RunOutcome:
    start = time.time()
    out = Path(out_dir or config["out_dir"])
    experiments = config["experiment"]
    fmt = config["format"]
    seed = config["seed"]
    max_workers = _worker_cap()
    summary = {"experiments": experiments, "seed": seed, "version": __version__}
    check_results = []

    if not experiments:
        return RunOutcome(0, out, summary)
    out.mkdir(parents=True, exist_ok=True)

    domains = None
    regime_rows = None
    gaussian_cfg = None

    if "gaussian" in experiments:
        summary["gaussian"] = run_gaussian(config, seed, out, fmt)
        gaussian_cfg = config["gaussian"]
        if config["check"]:
            check_results += checks.check_gaussian_levels(config["gaussian"]["mc_trials"], seed)
    if "lineworld" in experiments:
        summary["lineworld"] = run_lineworld(config, seed, out, fmt)
        if config["check"]:
            check_results += checks.check_lineworld_suite(
                config["lineworld"]["horizon"], config["lineworld"]["ratio"])
    if "predsel" in experiments:
        pc = config["predsel"]
        summary["predsel"], regime_a, regime_b = run_predsel(config, seed, out, fmt)
        regime_rows = regime_b.rows
        if config["check"]:
            check_results += checks.check_predsel_directions(regime_a, regime_b)
            check_results += checks.check_predsel_probe(seed, pc["probe_reps"])
    if "perrin" in experiments:
        perrin_summary, sheets, domains, pconfig = run_perrin(
            config, seed, out, fmt, max_workers)
        summary["perrin"] = perrin_summary
        if config["check"]:
            check_results += checks.check_perrin_theorem(pconfig, sheets)
            check_results += checks.check_perrin_estimators(
                seed, config["perrin"]["coverage_reps"], config["perrin"]["coverage_size"])

    if config["plots"]:
        emit_plots(out, fmt, gaussian_cfg, seed,
                   summary.get("predsel"), domains, regime_rows)

    if check_results:
        summary["checks"] = {name: {"pass": ok, "detail": detail}
                             for name, ok, detail in check_results}
    write_json(out / "summary.json", summary)

    digests = {
        p.name: _digest(p)
        for p in sorted(out.rglob("*"))
        if p.is_file() and p.name != "manifest.json"
    }
    manifest = {
        "config": config,
        "version": __version__,
        "wall_clock_seconds": round(time.time() - start, 3),
        "outputs": digests,
    }
    write_json(out / "manifest.json", manifest)

    failed = [name for name, ok, _ in check_results if not ok]
    for name, ok, detail in check_results:
        print(f"check {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    return RunOutcome(1 if failed else 0, out, summary)


def _worker_cap() -> int:
    raw = os.environ.get("CONVLAB_THREADS", "1")
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigError(f"CONVLAB_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise ConfigError("CONVLAB_THREADS must be >= 1")
    return cap


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convlab",
        description="Run the convergence-standard experiment suites from a JSON config.",
    )
    parser.add_argument("--config", type=str, default=None, help="path to a JSON config")
    parser.add_argument("--out", type=str, default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override the master seed")
    parser.add_argument("--experiment", type=str, default=None,
                        help="lineworld|gaussian|predsel|perrin|all")
    parser.add_argument("--check", action="store_true",
                        help="enforce acceptance checks via exit code")
    parser.add_argument("--grid-step", type=float, default=None,
                        help="override the perrin grid step")
    parser.add_argument("--horizon", type=int, default=None,
                        help="override the perrin horizon")
    parser.add_argument("--trials", type=int, default=None,
                        help="override the gaussian Monte Carlo trial count")
    parser.add_argument("--format", type=str, default=None, choices=("csv", "json"),
                        help="tabular output format")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw_text = Path(args.config).read_text(encoding="utf-8") if args.config else "{}"
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        config = validate_config(raw_text)
        if args.seed is not None:
            config["seed"] = args.seed
        if args.experiment is not None:
            config["experiment"] = _experiment(args.experiment, "--experiment")
        if args.check:
            config["check"] = True
        if args.grid_step is not None:
            config["perrin"]["grid_step"] = _num(lo=0, lo_open=True)(args.grid_step, "--grid-step")
        if args.horizon is not None:
            config["perrin"]["horizon"] = _num(lo=1, integer=True)(args.horizon, "--horizon")
        if args.trials is not None:
            config["gaussian"]["mc_trials"] = _num(lo=1000, integer=True)(args.trials, "--trials")
        if args.format is not None:
            config["format"] = args.format
        outcome = run(config, out_dir=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
