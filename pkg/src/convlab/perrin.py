"""The atomism case: paired granularity parameters over a two-component
world space.

Worlds carry two positive parameters: the value inferred from mean
squared displacement of suspended particles (X axis) and the value
inferred from the vertical density profile (Y axis), plus a flag for
whether the discreteness hypothesis is true.  When it is true the two
parameters coincide, so the truth-worlds form a one-dimensional strand
over the diagonal; the falsity-worlds form the full two-dimensional
sheet.  The two components are kept disjoint: sheet worlds never come
arbitrarily close to strand worlds, so "almost everywhere" is judged
per component (denseness, and a lower-dimensional exception set).

Evidence is a nested rectangular prism: the product of one interval per
axis, always containing the world's parameter pair.  A prism "meets the
diagonal" when its two intervals overlap, in which case both hypotheses
remain live.  Five built-in methods are evaluated: the realist razor
(SIMPLE while the prism meets the diagonal, COMPLEX once it cannot),
the agnostic rule (SUSPEND instead of SIMPLE), and three ways of
sacrificing strand worlds, each realizing one known failure mode
(non-maximal domain, instability, or a missed strand interval).

The same module houses the synthetic displacement/sedimentation
experiments and the interval estimators that bridge them to prism
evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .framework import (
    AsymptoticOracle,
    ConfigurationError,
    ConvergenceRecord,
    MethodSpec,
    ModeReport,
    Status,
    StreamError,
    StreamTrace,
    Verdict,
    check_stability,
    classify_convergence,
)
from .gaussian import normal_quantile
from .lineworld import StreamSpec, interval_at
from .rand import substream

FAMILY = "perrin"

DIAG_TOL = 1e-12


class EstimationError(ValueError):
    """An interval estimator could not produce a positive interval."""


@dataclass(frozen=True)
class PastaWorld:
    na: float        # X-axis granularity parameter (displacement route)
    na_prime: float  # Y-axis granularity parameter (sedimentation route)
    z: int           # 1: discreteness hypothesis true; 0: false

    def __post_init__(self):
        if self.z not in (0, 1):
            raise ValueError("z must be 0 or 1")
        if self.z == 1 and self.na != self.na_prime:
            raise ValueError("strand worlds require na == na_prime")

    @property
    def truth(self) -> Verdict:
        return Verdict.SIMPLE if self.z == 1 else Verdict.COMPLEX

    @property
    def world_id(self) -> str:
        if self.z == 1:
            return f"strand:a={self.na!r}"
        return f"plane:a={self.na!r},b={self.na_prime!r}"


@dataclass(frozen=True)
class PrismEvidence:
    xlo: float
    xhi: float
    ylo: float
    yhi: float

    family = FAMILY

    def __post_init__(self):
        if not (self.xlo < self.xhi and self.ylo < self.yhi):
            raise StreamError("degenerate prism")

    @property
    def width(self) -> float:
        """Maximum side length."""
        return max(self.xhi - self.xlo, self.yhi - self.ylo)

    def overlap(self) -> bool:
        """Does the prism meet the diagonal (both hypotheses live)?"""
        return max(self.xlo, self.ylo) <= min(self.xhi, self.yhi)

    def contains_point(self, x: float, y: float) -> bool:
        return self.xlo <= x <= self.xhi and self.ylo <= y <= self.yhi

    def is_subset_of(self, other: "PrismEvidence") -> bool:
        return (other.xlo <= self.xlo and self.xhi <= other.xhi
                and other.ylo <= self.ylo and self.yhi <= other.yhi)


@dataclass(frozen=True)
class PerrinMethod:
    """One of the five built-in inference rules.

    kind: OCKHAM_REALIST | ANTI_REALIST | WAY1 | WAY2 | WAY3.
    p marks the sacrificed diagonal value for WAY1/WAY2; eps / delta0
    are the width gates of the respective triggers.
    """

    kind: str
    p: Optional[float] = None
    eps: Optional[float] = None
    delta0: Optional[float] = None

    def __post_init__(self):
        kinds = ("OCKHAM_REALIST", "ANTI_REALIST", "WAY1", "WAY2", "WAY3")
        if self.kind not in kinds:
            raise ValueError(f"unknown method kind {self.kind!r}")
        if self.kind == "WAY1" and not (self.p is not None and self.eps and self.eps > 0):
            raise ValueError("WAY1 needs p and eps > 0")
        if self.kind == "WAY2" and not (self.p is not None and self.delta0 and self.delta0 > 0):
            raise ValueError("WAY2 needs p and delta0 > 0")
        if self.kind == "WAY3" and not (self.delta0 and self.delta0 > 0):
            raise ValueError("WAY3 needs delta0 > 0")

    def label(self) -> str:
        if self.kind == "WAY1":
            return f"way1(p={self.p},eps={self.eps})"
        if self.kind == "WAY2":
            return f"way2(p={self.p},delta0={self.delta0})"
        if self.kind == "WAY3":
            return f"way3(delta0={self.delta0})"
        return self.kind.lower()


def ockham_method() -> PerrinMethod:
    return PerrinMethod(kind="OCKHAM_REALIST")


def anti_realist_method() -> PerrinMethod:
    return PerrinMethod(kind="ANTI_REALIST")


def decide_latest(m: PerrinMethod, e: PrismEvidence) -> Verdict:
    ok = Verdict.SIMPLE if e.overlap() else Verdict.COMPLEX
    if m.kind == "OCKHAM_REALIST":
        return ok
    if m.kind == "ANTI_REALIST":
        return Verdict.SUSPEND if e.overlap() else Verdict.COMPLEX
    if m.kind == "WAY1":
        if e.contains_point(m.p, m.p) and e.width < m.eps:
            return Verdict.SUSPEND
        return ok
    if m.kind == "WAY2":
        if e.contains_point(m.p, m.p) and e.width < m.delta0:
            return Verdict.COMPLEX
        return ok
    # WAY3: complex once the prism is narrow, even while it meets the diagonal
    if e.width < m.delta0:
        return Verdict.COMPLEX
    return ok


def decide(m: PerrinMethod, history: Sequence[PrismEvidence]) -> Verdict:
    """Verdict on the latest prism of a well-formed nested history."""
    if not history:
        raise StreamError("empty history")
    for prev, cur in zip(history, history[1:]):
        if not cur.is_subset_of(prev):
            raise StreamError("prisms are not nested")
    return decide_latest(m, history[-1])


def method_spec(m: PerrinMethod, spec: StreamSpec) -> MethodSpec:
    return MethodSpec(
        name=m.label(),
        family=FAMILY,
        decide=lambda hist: decide(m, hist),
        oracle=lambda w, s: asymptotic_oracle(m, w, s),
    )


# ---------------------------------------------------------------------------
# canonical prism streams


def canonical_prism_stream(w: PastaWorld, spec: StreamSpec, t: int) -> PrismEvidence:
    """Product of two stage-t intervals (one per axis, same drift),
    containing (na, na_prime) and nested under stage t-1."""
    if t < 0:
        raise ValueError("stage must be >= 0")
    x = interval_at(w.na, spec, t)
    y = interval_at(w.na_prime, spec, t)
    e = PrismEvidence(x.lo, x.hi, y.lo, y.hi)
    if not e.contains_point(w.na, w.na_prime):
        raise StreamError("drift evicts the world's parameters")
    if t > 0:
        xp = interval_at(w.na, spec, t - 1)
        yp = interval_at(w.na_prime, spec, t - 1)
        if not e.is_subset_of(PrismEvidence(xp.lo, xp.hi, yp.lo, yp.hi)):
            raise StreamError(f"stage {t} prism is not nested in stage {t - 1}")
    return e


def trace(m: PerrinMethod, w: PastaWorld, spec: StreamSpec, horizon: int) -> StreamTrace:
    stages = []
    for t in range(horizon):
        e = canonical_prism_stream(w, spec, t)
        stages.append((e, decide_latest(m, e)))
    return StreamTrace(world_id=w.world_id, stages=tuple(stages))


# ---------------------------------------------------------------------------
# analytic oracles (drift-robust bounds, valid for every admissible
# stream of the family: nestedness makes the diagonal-overlap, width and
# point-containment triggers monotone, so each settles permanently)


def _first_stage(spec: StreamSpec, predicate) -> int:
    t = 0
    while not predicate(2.0 * spec.half_width(t)):
        t += 1
    return t


def separation_stage(a: float, b: float, spec: StreamSpec) -> int:
    """First stage from which no admissible prism at (a, b) can meet the
    diagonal: intervals of width w containing a resp. b can share a
    point only while |a - b| <= 2w."""
    gap = abs(a - b)
    if gap == 0.0:
        raise ValueError("no separation stage on the diagonal")
    return _first_stage(spec, lambda w: 2.0 * w < gap)


def point_exit_stage(w: PastaWorld, p: float, spec: StreamSpec) -> int:
    """First stage from which (p, p) must have left every admissible
    prism: an interval of width w containing a can contain p only while
    |a - p| <= w."""
    gap = max(abs(w.na - p), abs(w.na_prime - p))
    if gap == 0.0:
        raise ValueError("(p, p) never leaves prisms at the sacrificed pair")
    return _first_stage(spec, lambda wd: wd < gap)


def width_stage(delta: float, spec: StreamSpec) -> int:
    """First stage from which every prism is narrower than delta."""
    return _first_stage(spec, lambda w: w < delta)


def _is_diag(w: PastaWorld) -> bool:
    return abs(w.na - w.na_prime) < DIAG_TOL


def asymptotic_oracle(m: PerrinMethod, w: PastaWorld, spec: StreamSpec) -> AsymptoticOracle:
    diag = _is_diag(w)
    conv = lambda t: AsymptoticOracle(Status.CONVERGES, settle_by=t)
    div = AsymptoticOracle(Status.DIVERGES)

    if m.kind == "OCKHAM_REALIST":
        if w.z == 1:
            return conv(0)
        return div if diag else conv(separation_stage(w.na, w.na_prime, spec))

    if m.kind == "ANTI_REALIST":
        if diag:  # strand or its sheet shadow: the prism always meets the diagonal
            return div
        return conv(separation_stage(w.na, w.na_prime, spec))

    if m.kind == "WAY1":
        at_pair = diag and abs(w.na - m.p) < DIAG_TOL
        if at_pair:
            return div  # suspension becomes permanent at the sacrificed pair
        if w.z == 1:
            return conv(point_exit_stage(w, m.p, spec))
        return div if diag else conv(separation_stage(w.na, w.na_prime, spec))

    if m.kind == "WAY2":
        at_pair = diag and abs(w.na - m.p) < DIAG_TOL
        if at_pair:
            # COMPLEX forever once the prism is narrow: right on the sheet,
            # wrong on the strand
            return conv(width_stage(m.delta0, spec)) if w.z == 0 else div
        if w.z == 1:
            return conv(point_exit_stage(w, m.p, spec))
        return div if diag else conv(separation_stage(w.na, w.na_prime, spec))

    # WAY3
    if w.z == 1:
        return div
    t_width = width_stage(m.delta0, spec)
    if diag:
        return conv(t_width)
    return conv(min(t_width, separation_stage(w.na, w.na_prime, spec)))


# ---------------------------------------------------------------------------
# domain of convergence over a sampled grid


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    step: float

    def __post_init__(self):
        if not (self.lo < self.hi and self.step > 0):
            raise ValueError("grid needs lo < hi and step > 0")
        if abs(round(self.span) - self.span) > 1e-9:
            raise ValueError("step must divide the grid span")

    @property
    def span(self) -> float:
        return (self.hi - self.lo) / self.step

    def axis(self) -> tuple:
        k = round(self.span)
        return tuple(round(self.lo + i * self.step, 12) for i in range(k + 1))

    def halved(self) -> "GridSpec":
        return GridSpec(self.lo, self.hi, self.step / 2.0)


@dataclass(frozen=True)
class DomainGrid:
    grid: GridSpec
    method: str
    horizon: int
    axis: tuple
    plane: tuple   # row-major ConvergenceRecord per (ia, ib), z = 0
    strand: tuple  # ConvergenceRecord per ia, z = 1

    def plane_record(self, ia: int, ib: int) -> ConvergenceRecord:
        return self.plane[ia * len(self.axis) + ib]

    def fraction(self, component: str, status: Status) -> float:
        records = self.plane if component == "plane" else self.strand
        return sum(r.status is status for r in records) / len(records)


def plane_world(a: float, b: float) -> PastaWorld:
    return PastaWorld(na=a, na_prime=b, z=0)


def strand_world(a: float) -> PastaWorld:
    return PastaWorld(na=a, na_prime=a, z=1)


def classify_world(m: PerrinMethod, w: PastaWorld, spec: StreamSpec, horizon: int) -> ConvergenceRecord:
    tr = trace(m, w, spec, horizon)
    return classify_convergence(tr, w.truth, asymptotic_oracle(m, w, spec))


def domain_of_convergence(m: PerrinMethod, grid: GridSpec, spec: StreamSpec,
                          horizon: int, max_workers: int = 1) -> DomainGrid:
    """Per-world convergence records for both components, simulated over
    canonical streams and upgraded by the analytic oracle.  Grid cells
    are independent; `max_workers` > 1 splits them across threads."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    axis = grid.axis()
    worlds = [plane_world(a, b) for a in axis for b in axis]
    worlds += [strand_world(a) for a in axis]

    def job(w: PastaWorld) -> ConvergenceRecord:
        return classify_world(m, w, spec, horizon)

    if max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            records = list(pool.map(job, worlds, chunksize=256))
    else:
        records = [job(w) for w in worlds]
    n_plane = len(axis) * len(axis)
    return DomainGrid(
        grid=grid,
        method=m.label(),
        horizon=horizon,
        axis=axis,
        plane=tuple(records[:n_plane]),
        strand=tuple(records[n_plane:]),
    )


# ---------------------------------------------------------------------------
# the three criteria


def _denseness_failures(g: DomainGrid):
    """Worlds with no converging same-component world within 2h."""
    axis = g.axis
    n = len(axis)
    conv_plane = np.array(
        [r.status is Status.CONVERGES for r in g.plane], dtype=bool
    ).reshape(n, n)
    near = np.zeros_like(conv_plane)
    offsets = [(di, dj) for di in range(-2, 3) for dj in range(-2, 3) if di * di + dj * dj <= 4]
    for di, dj in offsets:
        shifted = np.zeros_like(conv_plane)
        src = conv_plane[
            max(0, -di): n - max(0, di),
            max(0, -dj): n - max(0, dj),
        ]
        shifted[
            max(0, di): n - max(0, -di),
            max(0, dj): n - max(0, -dj),
        ] = src
        near |= shifted
    failures = [
        {"component": "plane", "a": axis[ia], "b": axis[ib]}
        for ia in range(n) for ib in range(n) if not near[ia, ib]
    ]
    conv_strand = np.array([r.status is Status.CONVERGES for r in g.strand], dtype=bool)
    near_strand = np.zeros_like(conv_strand)
    for di in range(-2, 3):
        lo_dst, hi_dst = max(0, di), n + min(0, di)
        near_strand[lo_dst:hi_dst] |= conv_strand[max(0, -di): n - max(0, di)]
    failures += [
        {"component": "strand", "a": axis[ia]} for ia in range(n) if not near_strand[ia]
    ]
    return failures


def _dimension_ok(frac_h: float, frac_h2: float) -> bool:
    if frac_h == 0.0:
        return frac_h2 == 0.0
    return 0.25 * frac_h <= frac_h2 <= 0.75 * frac_h


def ae_fractions(g: DomainGrid) -> dict:
    return {
        comp: {s.value: g.fraction(comp, s) for s in Status}
        for comp in ("plane", "strand")
    }


def ae_check(g: DomainGrid, g2: DomainGrid) -> ModeReport:
    """Almost-everywhere convergence via the two grid-level proxies.

    Denseness: every grid world has a converging world of its own
    component within 2h.  Lower dimension: the diverging fraction of
    each component either is zero or shrinks by a factor in
    [0.25, 0.75] when the step halves (a line in the sheet, or isolated
    points of the strand, shrink by ~0.5; full-dimensional divergence
    regions keep their fraction).  Undetermined fractions are reported
    separately via ae_fractions.
    """
    if g.method != g2.method:
        raise ConfigurationError("grids were computed for different methods")
    if (g.grid.lo, g.grid.hi) != (g2.grid.lo, g2.grid.hi):
        raise ConfigurationError("grids have different bounds")
    if abs(g2.grid.step * 2.0 - g.grid.step) > 1e-12:
        raise ConfigurationError("the second grid must halve the first grid's step")
    witnesses = list(_denseness_failures(g))[:25]
    for comp in ("plane", "strand"):
        f1 = g.fraction(comp, Status.DIVERGES)
        f2 = g2.fraction(comp, Status.DIVERGES)
        if not _dimension_ok(f1, f2):
            witnesses.append(
                {"component": comp, "check": "lower_dimension",
                 "fraction_h": f1, "fraction_h2": f2}
            )
    return ModeReport("ALMOST_EVERYWHERE", not witnesses, tuple(witnesses))


def maximality_check(m: PerrinMethod, g: DomainGrid) -> ModeReport:
    """A domain on this space is maximal iff it contains every
    off-diagonal sheet world and, for each diagonal value, at least one
    member of the empirically equivalent pair (it can then never be
    properly extended: adding the missing pair member would force
    dropping the other)."""
    axis = g.axis
    n = len(axis)
    undetermined = [
        r for r in (*g.plane, *g.strand) if r.status is Status.UNDETERMINED
    ]
    if undetermined:
        raise ConfigurationError(
            f"{len(undetermined)} records undetermined at this horizon; "
            "maximality needs fully determined verdicts"
        )
    witnesses = []
    for ia in range(n):
        for ib in range(n):
            if ia == ib:
                continue
            r = g.plane_record(ia, ib)
            if r.status is not Status.CONVERGES:
                witnesses.append(
                    {"check": "off_diagonal", "a": axis[ia], "b": axis[ib],
                     "status": r.status.value}
                )
    for ia in range(n):
        w0 = g.plane_record(ia, ia)
        w1 = g.strand[ia]
        if w0.status is not Status.CONVERGES and w1.status is not Status.CONVERGES:
            witnesses.append(
                {"check": "pair", "a": axis[ia],
                 "w0": w0.status.value, "w1": w1.status.value}
            )
    return ModeReport("MAXIMAL_DOMAIN", not witnesses, tuple(witnesses[:25]))


def default_stability_worlds(grid: GridSpec) -> list:
    axis = grid.axis()
    n = len(axis)
    worlds = [strand_world(a) for a in axis]
    worlds += [plane_world(a, a) for a in axis]
    for ia in range(n - 1):
        worlds.append(plane_world(axis[ia], axis[ia + 1]))
        worlds.append(plane_world(axis[ia + 1], axis[ia]))
    for ia in range(0, n, 5):
        for ib in range(0, n, 5):
            worlds.append(plane_world(axis[ia], axis[ib]))
    return worlds


def stability_scan(m: PerrinMethod, worlds: Sequence[PastaWorld],
                   specs: Sequence[StreamSpec], horizon: int) -> ModeReport:
    """Scan sampled worlds and stream variants for a retraction of the
    true answer; each witness carries full replay parameters."""
    witnesses = []
    for w in worlds:
        for spec in specs:
            tr = trace(m, w, spec, horizon)
            ok, pair = check_stability(tr, w.truth)
            if not ok:
                witnesses.append(
                    {"world": w.world_id, "z": w.z, "na": w.na, "na_prime": w.na_prime,
                     "stream": spec.label(), "stage_pair": pair,
                     "verdicts": [v.value for v in tr.verdicts()]}
                )
    return ModeReport("STABILITY", not witnesses, tuple(witnesses[:10]))


@dataclass(frozen=True)
class ScoreSheet:
    method: str
    ae: ModeReport
    maximal: ModeReport
    stable: ModeReport
    fractions: dict = field(default_factory=dict)

    def pattern(self) -> tuple:
        return (self.ae.passed, self.maximal.passed, self.stable.passed)


@dataclass(frozen=True)
class PerrinConfig:
    grid: GridSpec = GridSpec(0.5, 1.5, 0.02)
    horizon: int = 40
    stream: StreamSpec = StreamSpec(delta0=1.0, ratio=0.6)
    way1_p: float = 1.0
    way1_eps: float = 4.0     # above the initial prism width: the trigger
    way2_p: float = 1.0       # is active from stage 0 at the sacrificed pair
    way2_delta0: float = 0.1
    way3_delta0: float = 4.0
    max_workers: int = 1


def builtin_methods(config: PerrinConfig) -> list:
    return [
        ockham_method(),
        anti_realist_method(),
        PerrinMethod(kind="WAY1", p=config.way1_p, eps=config.way1_eps),
        PerrinMethod(kind="WAY2", p=config.way2_p, delta0=config.way2_delta0),
        PerrinMethod(kind="WAY3", delta0=config.way3_delta0),
    ]


def stability_spec_variants(base: StreamSpec) -> list:
    return [
        base,
        StreamSpec(base.delta0, base.ratio, "offcenter", 1.0),
        StreamSpec(base.delta0, base.ratio, "offcenter", -1.0),
    ]


def score_sheet(m: PerrinMethod, config: PerrinConfig,
                domains: Optional[tuple] = None) -> ScoreSheet:
    """Aggregate the three criteria for one method.

    `domains`, when given, must be the (coarse, refined) DomainGrid pair
    for this method; otherwise both grids are computed here.
    """
    if domains is None:
        g = domain_of_convergence(m, config.grid, config.stream, config.horizon,
                                  config.max_workers)
        g2 = domain_of_convergence(m, config.grid.halved(), config.stream,
                                   config.horizon, config.max_workers)
    else:
        g, g2 = domains
    ae = ae_check(g, g2)
    maximal = maximality_check(m, g)
    stable = stability_scan(
        m, default_stability_worlds(config.grid),
        stability_spec_variants(config.stream), config.horizon,
    )
    return ScoreSheet(
        method=m.label(), ae=ae, maximal=maximal, stable=stable,
        fractions={"coarse": ae_fractions(g), "refined": ae_fractions(g2)},
    )


def underdetermination_ok(m: PerrinMethod, grid: GridSpec, spec: StreamSpec) -> bool:
    """No method converges at both members of an empirically equivalent
    pair; checked analytically for every grid diagonal value."""
    for a in grid.axis():
        w0 = asymptotic_oracle(m, plane_world(a, a), spec)
        w1 = asymptotic_oracle(m, strand_world(a), spec)
        if w0.fate is Status.CONVERGES and w1.fate is Status.CONVERGES:
            return False
    return True


# ---------------------------------------------------------------------------
# synthetic experiments and interval estimators


@dataclass(frozen=True)
class ExperimentSample:
    kind: str  # "brownian" | "sediment"
    times: Optional[tuple] = None
    msd: Optional[tuple] = None
    m_particles: Optional[int] = None
    c: Optional[float] = None
    heights: Optional[tuple] = None
    cprime: Optional[float] = None

    def __post_init__(self):
        if self.kind == "brownian":
            if not self.times or not self.msd or len(self.times) != len(self.msd):
                raise ValueError("brownian samples need matching times and msd")
            if any(t <= 0 for t in self.times) or self.m_particles is None or self.m_particles < 2:
                raise ValueError("times must be positive and m >= 2")
        elif self.kind == "sediment":
            if not self.heights or len(self.heights) < 2:
                raise ValueError("sediment samples need n >= 2 heights")
            if any(h <= 0 for h in self.heights):
                raise ValueError("heights must be positive")
        else:
            raise ValueError(f"unknown sample kind {self.kind!r}")


def simulate_brownian(na_true: float, c: float, times: Sequence[float],
                      m_particles: int, seed: int) -> ExperimentSample:
    """Mean squared displacement at each time over m particles, with
    per-particle displacement drawn Normal(0, (c / na) * t)."""
    if na_true <= 0 or c <= 0:
        raise ValueError("na_true and c must be positive")
    rng = substream(seed, "brownian")
    times = tuple(float(t) for t in times)
    sigmas = np.sqrt((c / na_true) * np.asarray(times))
    disp = rng.standard_normal((len(times), m_particles)) * sigmas[:, None]
    msd = np.mean(disp * disp, axis=1)
    return ExperimentSample(kind="brownian", times=times, msd=tuple(msd.tolist()),
                            m_particles=m_particles, c=c)


def simulate_sedimentation(na_true: float, cprime: float, n: int, seed: int) -> ExperimentSample:
    """Particle heights drawn from the exponential density with rate
    cprime * na."""
    if na_true <= 0 or cprime <= 0:
        raise ValueError("na_true and cprime must be positive")
    rng = substream(seed, "sediment")
    heights = rng.exponential(scale=1.0 / (cprime * na_true), size=n)
    return ExperimentSample(kind="sediment", heights=tuple(heights.tolist()), cprime=cprime)


@dataclass(frozen=True)
class EstimateInterval:
    parameter: str  # "na" | "na_prime"
    lo: float
    hi: float
    point: float


def estimate_interval(sample: ExperimentSample, confidence: float) -> EstimateInterval:
    """Interval estimate of the relevant granularity parameter.

    Brownian: least-squares slope of msd against time through the
    origin, inverted through na = c / slope; the slope's standard error
    uses the model-based variance of a chi-square mean,
    Var(msd_t) = 2 (slope * t)^2 / m, and propagates through the
    reciprocal by transforming the interval endpoints.  Sedimentation:
    the exponential rate MLE 1 / mean(height) with its asymptotic
    standard error rate / sqrt(n), scaled by 1 / cprime.
    """
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie in (0, 1)")
    zq = normal_quantile(1.0 - (1.0 - confidence) / 2.0)
    if sample.kind == "brownian":
        t = np.asarray(sample.times)
        y = np.asarray(sample.msd)
        slope = float((t @ y) / (t @ t))
        if slope <= 0:
            raise EstimationError("non-positive displacement slope")
        var_slope = (2.0 / sample.m_particles) * slope**2 * float(np.sum(t**4)) / float(t @ t) ** 2
        se = math.sqrt(var_slope)
        s_lo, s_hi = slope - zq * se, slope + zq * se
        if s_lo <= 0:
            raise EstimationError("slope interval reaches zero; more particles needed")
        return EstimateInterval("na", lo=sample.c / s_hi, hi=sample.c / s_lo,
                                point=sample.c / slope)
    mean_h = float(np.mean(sample.heights))
    if mean_h <= 0:
        raise EstimationError("non-positive mean height")
    n = len(sample.heights)
    rate = 1.0 / mean_h
    se = rate / math.sqrt(n)
    r_lo, r_hi = rate - zq * se, rate + zq * se
    if r_lo <= 0:
        raise EstimationError("rate interval reaches zero; more particles needed")
    return EstimateInterval("na_prime", lo=r_lo / sample.cprime,
                            hi=r_hi / sample.cprime, point=rate / sample.cprime)


DEFAULT_TIMES = tuple(float(t) for t in range(1, 9))


@dataclass(frozen=True)
class StreamResult:
    prisms: tuple
    flagged_stage: Optional[int]  # stage whose estimate broke nestedness, if any


def experimental_stream(na: float, naprime: float, schedule: Sequence[int],
                        confidence: float, seed: int, c: float = 1.0,
                        cprime: float = 1.0, times: Sequence[float] = DEFAULT_TIMES) -> StreamResult:
    """Bridge the two estimators to prism evidence.

    Per stage, the product of the two interval estimates is intersected
    with the previous prism to enforce nestedness.  A stage whose
    intersection would be empty (a stochastic containment failure) is
    flagged and the stream truncated there; evidence is never fabricated.
    """
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("the sample-size schedule must be increasing")
    prisms = []
    prev = None
    for i, size in enumerate(schedule):
        try:
            bx = simulate_brownian(na, c, times, int(size), substream(seed, "stage-x", i).integers(2**63))
            by = simulate_sedimentation(naprime, cprime, int(size), substream(seed, "stage-y", i).integers(2**63))
            ix = estimate_interval(bx, confidence)
            iy = estimate_interval(by, confidence)
        except EstimationError:
            return StreamResult(tuple(prisms), flagged_stage=i)
        xlo, xhi, ylo, yhi = ix.lo, ix.hi, iy.lo, iy.hi
        if prev is not None:
            xlo, xhi = max(xlo, prev.xlo), min(xhi, prev.xhi)
            ylo, yhi = max(ylo, prev.ylo), min(yhi, prev.yhi)
        if not (xlo < xhi and ylo < yhi):
            return StreamResult(tuple(prisms), flagged_stage=i)
        prev = PrismEvidence(xlo, xhi, ylo, yhi)
        prisms.append(prev)
    return StreamResult(tuple(prisms), flagged_stage=None)


@dataclass(frozen=True)
class CoverageResult:
    reps: int
    coverage: float
    mean_width: float


def coverage_study(kind: str, na_true: float, const: float, size: int,
                   reps: int, confidence: float, seed: int,
                   times: Sequence[float] = DEFAULT_TIMES) -> CoverageResult:
    """Fraction of seeded replications whose interval covers the truth,
    plus the mean interval width."""
    hits = 0
    widths = 0.0
    for rep in range(reps):
        rep_seed = substream(seed, "coverage", kind, size, rep).integers(2**63)
        if kind == "brownian":
            sample = simulate_brownian(na_true, const, times, size, rep_seed)
        else:
            sample = simulate_sedimentation(na_true, const, size, rep_seed)
        est = estimate_interval(sample, confidence)
        hits += est.lo <= na_true <= est.hi
        widths += est.hi - est.lo
    return CoverageResult(reps=reps, coverage=hits / reps, mean_width=widths / reps)
