"""Shared vocabulary and the verdict engine.

Every problem family in this package (nested intervals on the line,
Gaussian sampling, polynomial model selection, the paired-parameter
atomism case) evaluates inference methods the same way: a method maps a
finite evidence history to a verdict, verdicts along a stream are
classified against the world's true answer, and the classification feeds
mode checks (pointwise convergence, stability, almost-everywhere
coverage, ...).

Finite simulation cannot decide convergence by itself, so classification
is three-valued: CONVERGES and DIVERGES are only issued when an analytic
oracle certifies what happens beyond the simulated horizon; everything
else stays UNDETERMINED.  Oracles make the theorem-level checks exact
while the empirical runs stay honest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence


class Verdict(Enum):
    """A method's output at a stage.

    SIMPLE stands for the simple hypothesis of the problem at hand (the
    parameter is exactly zero; atomic theory is true), COMPLEX for its
    negation, SUSPEND for an explicit refusal to answer.  SUSPEND is a
    legal output at any stage.
    """

    SIMPLE = "SIMPLE"
    COMPLEX = "COMPLEX"
    SUSPEND = "SUSPEND"


class Status(Enum):
    """Per-world convergence classification."""

    CONVERGES = "CONVERGES"
    DIVERGES = "DIVERGES"
    UNDETERMINED = "UNDETERMINED"


class ConfigurationError(ValueError):
    """A method was applied to evidence from the wrong problem family,
    or two artifacts that must match (grids, bounds) do not."""


class StreamError(ValueError):
    """An evidence stream violates its contract (containment of the true
    parameters, nestedness, or strictly shrinking widths)."""


class OracleContradiction(RuntimeError):
    """A simulated trace disagrees with what the analytic oracle
    guarantees.  This must never happen for the built-in methods; it
    indicates a bug in either the oracle or the simulation."""


@dataclass(frozen=True)
class AsymptoticOracle:
    """Analytic certificate for a (method, world, stream-family) triple.

    fate = CONVERGES with settle_by = g means: on every admissible
    stream of the family, the method outputs the world's true answer at
    all stages >= g.  fate = DIVERGES means the method never settles on
    the true answer.  settle_by is required for CONVERGES.
    """

    fate: Status
    settle_by: Optional[int] = None

    def __post_init__(self):
        if self.fate is Status.CONVERGES and self.settle_by is None:
            raise ValueError("a CONVERGES oracle must state settle_by")
        if self.fate is Status.UNDETERMINED:
            raise ValueError("an oracle is by definition determined")


@dataclass(frozen=True)
class MethodSpec:
    """A named, parameterized inference rule.

    Evaluation treats `decide` as a pure function of the finite evidence
    history: identical histories must yield identical verdicts.  `family`
    names the problem family whose evidence the rule understands.
    `oracle`, when present, maps (world, stream spec) to an
    AsymptoticOracle used to upgrade UNDETERMINED classifications.
    """

    name: str
    family: str
    decide: Callable[[Sequence], Verdict]
    oracle: Optional[Callable] = None


@dataclass(frozen=True)
class StreamTrace:
    """Evidence/verdict pairs in acquisition order for one world."""

    world_id: str
    stages: tuple  # tuple of (evidence_item, Verdict)

    def verdicts(self) -> tuple:
        return tuple(v for _, v in self.stages)

    def __len__(self) -> int:
        return len(self.stages)


@dataclass(frozen=True)
class ConvergenceRecord:
    world_id: str
    status: Status
    settle_stage: Optional[int] = None


@dataclass(frozen=True)
class ModeReport:
    """Outcome of one evaluative-standard check.

    passed = False implies witnesses is non-empty; each witness is a
    dict with enough parameters (world, stream parameters, stage) to
    replay the failure independently.
    """

    mode_id: str  # UNIFORM | POINTWISE | STABILITY | HIGH_PROB | PROB_ONE | ALMOST_EVERYWHERE | MAXIMAL_DOMAIN
    passed: bool
    witnesses: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not self.passed and not self.witnesses:
            raise ValueError("a failing ModeReport must carry witnesses")


def apply_method(method: MethodSpec, history: Sequence) -> Verdict:
    """Dispatch a method to an evidence history.

    The history must be non-empty and belong to the method's problem
    family (each evidence type carries a `family` class attribute).
    """
    if not history:
        raise ValueError("empty evidence history")
    for item in history:
        fam = getattr(item, "family", None)
        if fam != method.family:
            raise ConfigurationError(
                f"method {method.name!r} expects {method.family!r} evidence, "
                f"got {type(item).__name__} (family {fam!r})"
            )
    return method.decide(history)


def empirical_settle_stage(verdicts: Sequence[Verdict], truth: Verdict) -> Optional[int]:
    """Least stage from which every verdict equals `truth` through the
    end of the trace, or None if the trace does not end on the truth."""
    if not verdicts or verdicts[-1] is not truth:
        return None
    s = len(verdicts) - 1
    while s > 0 and verdicts[s - 1] is truth:
        s -= 1
    return s


def classify_convergence(
    trace: StreamTrace,
    truth: Verdict,
    oracle: Optional[AsymptoticOracle] = None,
) -> ConvergenceRecord:
    """Classify one world's trace against the true answer.

    CONVERGES requires both an observed truth-suffix within the horizon
    and an oracle certifying persistence beyond it (settle_by inside the
    horizon); settle_stage is the least observed stage of the suffix.
    DIVERGES is issued only on the oracle's word.  Without an oracle, or
    when the certified settle stage lies beyond the horizon, the horizon
    is insufficient and the record is UNDETERMINED.
    """
    if len(trace) == 0:
        raise ValueError("empty trace")
    verdicts = trace.verdicts()
    settle = empirical_settle_stage(verdicts, truth)
    if oracle is None:
        return ConvergenceRecord(trace.world_id, Status.UNDETERMINED)
    if oracle.fate is Status.DIVERGES:
        return ConvergenceRecord(trace.world_id, Status.DIVERGES)
    # oracle.fate is CONVERGES
    horizon = len(verdicts) - 1
    if oracle.settle_by > horizon:
        return ConvergenceRecord(trace.world_id, Status.UNDETERMINED)
    if settle is None or settle > oracle.settle_by:
        raise OracleContradiction(
            f"world {trace.world_id}: oracle guarantees truth from stage "
            f"{oracle.settle_by} but the trace shows otherwise"
        )
    return ConvergenceRecord(trace.world_id, Status.CONVERGES, settle_stage=settle)


def check_stability(trace: StreamTrace, truth: Verdict):
    """Has the true answer, once output, ever been retracted?

    Returns (passed, witness).  witness is the first offending stage
    pair (i, j): stage i output the truth and stage j = i + 1 output
    something else.  Vacuously passes when the truth is never output.
    """
    verdicts = trace.verdicts()
    first_truth = None
    for i, v in enumerate(verdicts):
        if first_truth is None:
            if v is truth:
                first_truth = i
        elif v is not truth:
            return False, (i - 1, i)
    return True, None
