"""The non-stochastic exact-zero problem on the real line.

Worlds are real values theta; evidence is a nested sequence of closed
intervals containing theta whose lengths shrink geometrically to zero
but never to a point.  The admissible stream family is parameterized by
an initial half-width, a shrink ratio, and a bounded off-center drift:
at stage t the interval has half-width d_t = delta0 * ratio**t and its
center sits at theta + lam_t * d_t with |lam_t| <= 1.  lam_t == 0 is the
centered textbook stream; constant nonzero lam is nested by
construction; declared per-stage offset sequences are validated and
rejected if they would evict theta or break nesting.

The amount of evidence carried by an interval is the inverse of its
length.  The module houses the razor-following threshold rule (answer
SIMPLE while the interval still covers 0), the uniform-convergence
refuter, and the short-run-razor necessity probe with its adversary
suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .framework import (
    AsymptoticOracle,
    ConvergenceRecord,
    MethodSpec,
    Status,
    StreamError,
    StreamTrace,
    Verdict,
    classify_convergence,
)

FAMILY = "lineworld"


@dataclass(frozen=True)
class LineWorld:
    theta: float

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")

    @property
    def truth(self) -> Verdict:
        return Verdict.SIMPLE if self.theta == 0.0 else Verdict.COMPLEX


@dataclass(frozen=True)
class IntervalEvidence:
    """A closed interval [lo, hi] with lo < hi (never a single point)."""

    lo: float
    hi: float

    family = FAMILY

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise StreamError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise StreamError(f"degenerate interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def is_subset_of(self, other: "IntervalEvidence") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi


@dataclass(frozen=True)
class StreamSpec:
    """Parameters of one admissible evidence stream.

    drift "centered" pins the interval's center to theta; "offcenter"
    places the center at theta + offset * half_width, with offset a
    scalar in [-1, 1] or a per-stage sequence (the last entry is reused
    past its end).
    """

    delta0: float = 1.0
    ratio: float = 0.5
    drift: str = "centered"
    offset: object = 0.0  # float or sequence of floats

    def __post_init__(self):
        if not (self.delta0 > 0 and math.isfinite(self.delta0)):
            raise ValueError("delta0 must be positive and finite")
        if not 0.0 < self.ratio < 1.0:
            raise ValueError("ratio must lie in (0, 1)")
        if self.drift not in ("centered", "offcenter"):
            raise ValueError(f"unknown drift rule {self.drift!r}")
        for lam in self._offsets():
            if not (math.isfinite(lam) and abs(lam) <= 1.0):
                raise ValueError("offsets must lie in [-1, 1]")

    def _offsets(self):
        if isinstance(self.offset, (int, float)):
            return (float(self.offset),)
        return tuple(float(x) for x in self.offset)

    def half_width(self, t: int) -> float:
        return self.delta0 * self.ratio**t

    def offset_at(self, t: int) -> float:
        if self.drift == "centered":
            return 0.0
        offs = self._offsets()
        return offs[t] if t < len(offs) else offs[-1]

    def label(self) -> str:
        if self.drift == "centered":
            return f"centered(d0={self.delta0},r={self.ratio})"
        return f"offcenter(d0={self.delta0},r={self.ratio},lam={self.offset})"


def interval_at(theta: float, spec: StreamSpec, t: int) -> IntervalEvidence:
    """Raw stage-t interval of the stream, without nesting validation.

    Endpoints are computed as theta + (lam -+ 1) * d so containment of
    theta and nestedness survive floating point exactly: the two offsets
    have fixed signs and shrink monotonically with d.
    """
    d = spec.half_width(t)
    lam = spec.offset_at(t)
    return IntervalEvidence(theta + (lam - 1.0) * d, theta + (lam + 1.0) * d)


def canonical_stream(w: LineWorld, spec: StreamSpec, t: int) -> IntervalEvidence:
    """Stage-t interval: width 2 * delta0 * ratio**t, contains theta,
    nested under the stage-(t-1) interval.

    Raises StreamError if the drift rule would evict theta or break
    nesting (possible only with a declared offset sequence).
    """
    if t < 0:
        raise ValueError("stage must be >= 0")
    e = interval_at(w.theta, spec, t)
    slack = 1e-12 * max(1.0, abs(w.theta), spec.delta0)
    if not (e.lo - slack <= w.theta <= e.hi + slack):
        raise StreamError(f"drift evicts theta={w.theta} at stage {t}")
    if t > 0:
        prev = interval_at(w.theta, spec, t - 1)
        if e.lo < prev.lo - slack or e.hi > prev.hi + slack:
            raise StreamError(f"stage {t} interval is not nested in stage {t - 1}")
    return e


def history(w: LineWorld, spec: StreamSpec, stages: int) -> list:
    return [canonical_stream(w, spec, t) for t in range(stages)]


def trace(method: MethodSpec, w: LineWorld, spec: StreamSpec, horizon: int) -> StreamTrace:
    """Run a method along the canonical stream for `horizon` stages."""
    evid = history(w, spec, horizon)
    stages = []
    for t in range(horizon):
        stages.append((evid[t], method.decide(evid[: t + 1])))
    return StreamTrace(world_id=f"{FAMILY}:theta={w.theta!r}", stages=tuple(stages))


# ---------------------------------------------------------------------------
# decision rules


def mstar_decide(e: IntervalEvidence) -> Verdict:
    """SIMPLE iff the interval still includes 0 (closed boundaries
    count as inclusion), COMPLEX otherwise; never SUSPEND."""
    return Verdict.SIMPLE if e.lo <= 0.0 <= e.hi else Verdict.COMPLEX


def guaranteed_settle_stage(theta: float, spec: StreamSpec) -> int:
    """First stage from which every admissible interval of the family
    must exclude 0: an interval of width w containing theta can cover 0
    only while w >= |theta|, so the bound is the first t with
    2 * delta0 * ratio**t < |theta|.  Valid for every drift rule."""
    if theta == 0.0:
        return 0
    t = 0
    while 2.0 * spec.half_width(t) >= abs(theta):
        t += 1
    return t


def _mstar_oracle(w: LineWorld, spec: StreamSpec) -> AsymptoticOracle:
    return AsymptoticOracle(Status.CONVERGES, settle_by=guaranteed_settle_stage(w.theta, spec))


def mstar_method() -> MethodSpec:
    return MethodSpec(
        name="mstar",
        family=FAMILY,
        decide=lambda hist: mstar_decide(hist[-1]),
        oracle=_mstar_oracle,
    )


def always_complex_method() -> MethodSpec:
    def oracle(w: LineWorld, spec: StreamSpec) -> AsymptoticOracle:
        if w.theta == 0.0:
            return AsymptoticOracle(Status.DIVERGES)
        return AsymptoticOracle(Status.CONVERGES, settle_by=0)

    return MethodSpec(
        name="always_complex",
        family=FAMILY,
        decide=lambda hist: Verdict.COMPLEX,
        oracle=oracle,
    )


def always_suspend_method() -> MethodSpec:
    return MethodSpec(
        name="always_suspend",
        family=FAMILY,
        decide=lambda hist: Verdict.SUSPEND,
        oracle=lambda w, spec: AsymptoticOracle(Status.DIVERGES),
    )


# adversaries that violate the short-run razor in different ways

def width_trigger_violator(width0: float = 0.01) -> MethodSpec:
    """Outputs COMPLEX once the interval is narrower than width0 even
    when 0 is still inside; otherwise behaves like the threshold rule."""

    def decide(hist):
        e = hist[-1]
        if e.width < width0:
            return Verdict.COMPLEX
        return mstar_decide(e)

    return MethodSpec(name=f"width_violator({width0})", family=FAMILY, decide=decide)


def stage_trigger_violator(stage: int = 3) -> MethodSpec:
    """Outputs COMPLEX unconditionally at one fixed stage."""

    def decide(hist):
        if len(hist) - 1 == stage:
            return Verdict.COMPLEX
        return mstar_decide(hist[-1])

    return MethodSpec(name=f"stage_violator({stage})", family=FAMILY, decide=decide)


def parity_violator() -> MethodSpec:
    """Outputs COMPLEX at every odd stage regardless of the evidence."""

    def decide(hist):
        if (len(hist) - 1) % 2 == 1:
            return Verdict.COMPLEX
        return mstar_decide(hist[-1])

    return MethodSpec(name="parity_violator", family=FAMILY, decide=decide)


def razor_violator_suite() -> list:
    return [width_trigger_violator(), stage_trigger_violator(), parity_violator()]


# ---------------------------------------------------------------------------
# mode checks


def check_pointwise(
    method: MethodSpec,
    worlds: Sequence[LineWorld],
    spec: StreamSpec,
    horizon: int,
) -> list:
    """One ConvergenceRecord per world along the canonical stream,
    upgraded by the method's analytic oracle when it has one."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    records = []
    for w in worlds:
        tr = trace(method, w, spec, horizon)
        oracle = method.oracle(w, spec) if method.oracle is not None else None
        records.append(classify_convergence(tr, w.truth, oracle))
    return records


@dataclass(frozen=True)
class UniformWitness:
    """A world and an admissible finite history refuting one prescribed
    evidence amount: the final interval is at most `prescribed_length`
    long, yet the method's verdict there is false at the world."""

    world: LineWorld
    history: tuple
    failing_stage: int
    verdict: Verdict
    truth: Verdict


def refute_uniform(method: MethodSpec, prescribed_length: float) -> UniformWitness:
    """Produce a counterexample to uniform convergence at the given
    evidence amount (1 / prescribed_length).

    Query the method on a history of origin-centered intervals whose
    final width equals prescribed_length.  If it answers SIMPLE, a
    nonzero world inside the final interval refutes it; any other answer
    is refuted by the world theta = 0.  Such a witness always exists
    because an interval of nonzero length covering 0 decides nothing.
    """
    if not prescribed_length > 0:
        raise ValueError("prescribed_length must be positive")
    stages = 5
    half = prescribed_length / 2.0
    hist = tuple(
        IntervalEvidence(-half * 2.0 ** (stages - 1 - t), half * 2.0 ** (stages - 1 - t))
        for t in range(stages)
    )
    verdict = method.decide(list(hist))
    if verdict is Verdict.SIMPLE:
        world = LineWorld(theta=prescribed_length / 4.0)
    else:
        world = LineWorld(theta=0.0)
    return UniformWitness(
        world=world,
        history=hist,
        failing_stage=stages - 1,
        verdict=verdict,
        truth=world.truth,
    )


def witness_is_valid(method: MethodSpec, wit: UniformWitness, prescribed_length: float) -> bool:
    """Replay a uniform-convergence witness: the history must be
    admissible at the witness world, end at or below the prescribed
    length, and reproduce a verdict that is false at that world."""
    eps = 1e-12
    final = wit.history[wit.failing_stage]
    if final.width > prescribed_length * (1 + 1e-9):
        return False
    for t, e in enumerate(wit.history):
        if not e.contains(wit.world.theta):
            return False
        if t > 0 and not e.is_subset_of(wit.history[t - 1]):
            return False
        if t > 0 and not e.width < wit.history[t - 1].width + eps:
            return False
    replayed = method.decide(list(wit.history[: wit.failing_stage + 1]))
    return replayed is wit.verdict and replayed is not wit.truth


@dataclass(frozen=True)
class RazorReport:
    razor_violation: Optional[tuple]  # offending history, when found
    consequence: str  # POINTWISE_FAIL | STABILITY_FAIL | NONE_FOUND
    witness_world: Optional[LineWorld] = None
    witness_trace: Optional[StreamTrace] = None


def _candidate_histories(budget: int):
    """Bounded enumeration of admissible histories whose final interval
    contains 0, drawn from canonical streams over a small design."""
    thetas = (0.0, 0.004, -0.004, 0.03, -0.03, 0.2)
    specs = (
        StreamSpec(delta0=1.0, ratio=0.5),
        StreamSpec(delta0=1.0, ratio=0.7),
        StreamSpec(delta0=0.3, ratio=0.6),
        StreamSpec(delta0=1.0, ratio=0.5, drift="offcenter", offset=-0.8),
        StreamSpec(delta0=1.0, ratio=0.5, drift="offcenter", offset=0.8),
    )
    count = 0
    for theta in thetas:
        w = LineWorld(theta)
        for spec in specs:
            evid = []
            for t in range(40):
                e = canonical_stream(w, spec, t)
                evid.append(e)
                if not e.contains(0.0):
                    break
                count += 1
                yield list(evid)
                if count >= budget:
                    return


def razor_necessity_probe(method: MethodSpec, search_budget: int = 4000) -> RazorReport:
    """Search for a short-run razor violation and exhibit its cost.

    A violation is a history whose final interval still contains 0 but
    on which the method outputs COMPLEX.  Continuing that history with
    origin-centered shrinking intervals (admissible at theta = 0), one
    of two things must happen: the method never returns to SIMPLE, so it
    fails pointwise convergence at theta = 0; or it outputs SIMPLE at
    some later stage, retracting a verdict that was true at every
    nonzero world still inside the current interval, so it fails
    stability there.  Razor-obeying methods report NONE_FOUND.
    """
    extension = 30
    for hist in _candidate_histories(search_budget):
        if method.decide(hist) is not Verdict.COMPLEX:
            continue
        base = len(hist) - 1
        final = hist[base]
        # continue toward theta = 0 with halving origin-centered intervals
        half = min(-final.lo, final.hi, final.width / 4.0)
        if half <= 0.0:  # 0 sits on the boundary; unusable for a continuation
            continue
        extended = list(hist)
        verdicts = []
        for k in range(1, extension + 1):
            e = IntervalEvidence(-half / 2.0**k, half / 2.0**k)
            extended.append(e)
            verdicts.append(method.decide(extended))
        for k, v in enumerate(verdicts):
            if v is Verdict.SIMPLE:
                # retraction of a COMPLEX verdict that was true at a
                # nonzero world inside the stage-k interval
                e_k = extended[base + 1 + k]
                theta_w = e_k.hi / 2.0
                world = LineWorld(theta_w)
                stages = tuple(
                    (e, method.decide(extended[: i + 1]))
                    for i, e in enumerate(extended[: base + 2 + k])
                )
                return RazorReport(
                    razor_violation=tuple(hist),
                    consequence="STABILITY_FAIL",
                    witness_world=world,
                    witness_trace=StreamTrace(f"{FAMILY}:theta={theta_w!r}", stages),
                )
        # never returned to SIMPLE: fails pointwise at theta = 0
        stages = tuple(
            (e, method.decide(extended[: i + 1])) for i, e in enumerate(extended)
        )
        return RazorReport(
            razor_violation=tuple(hist),
            consequence="POINTWISE_FAIL",
            witness_world=LineWorld(0.0),
            witness_trace=StreamTrace(f"{FAMILY}:theta=0.0", stages),
        )
    return RazorReport(razor_violation=None, consequence="NONE_FOUND")
