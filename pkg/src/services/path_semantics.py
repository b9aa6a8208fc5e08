"""
Path semantics for dipcheck
Path checking, adjacency/equivalence and exact path probabilities

The exact evaluator keeps x -> pathprob(eps, x, suffix) as a piecewise
exponential-polynomial, where x is the value currently stored in r, and
extends it one step at a time from the back of the path.
"""

import math
from pathlib import Path as FilePath
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import ValidationError

from src.config.logging_config import get_logger, log_execution_time
from src.config.settings import ADJACENCY_TOLERANCE, DEFAULT_SEED, PROBABILITY_TOLERANCE
from src.errors import (
    BadInterval,
    DegenerateScale,
    InputKindMismatch,
    NonPositiveEpsilon,
    NumericalError,
    NoSuchTransition,
    SchemaError,
)
from src.models.automaton import DipAutomaton, Guard, OutputKind, RealVar, TransitionDecl
from src.models.documents import PathDocument, StepDocument, schema_error_from
from src.models.path import Observation, Path, PathStep, ProbResult, SpotCheckResult
from src.tools.laplace import LaplaceDist, interval_prob, pdf_pep
from src.tools.piecewise import INF, PiecewiseExpPoly

logger = get_logger(__name__)

RawStep = Union[StepDocument, dict, Tuple[Optional[float], Observation]]
InputSeq = Sequence[Optional[float]]


# Path documents

def parse_path_document(text: str, source: str = "<path>") -> PathDocument:
    from src.services.automaton_service import load_text

    data = load_text(text, source)
    if not isinstance(data, dict):
        raise SchemaError(f"{source}: expected a top-level object", field="<root>")
    try:
        return PathDocument.model_validate(data)
    except ValidationError as e:
        raise schema_error_from(e, source) from e


def load_path(path: Union[str, FilePath]) -> PathDocument:
    from src.services.automaton_service import read_document

    path = FilePath(path)
    return parse_path_document(read_document(path), str(path))


def _observation(document: Any) -> Observation:
    if isinstance(document, Observation):
        return document
    if isinstance(document, dict):
        document = StepDocument.model_validate({"observed": document}).observed
    if document.var is not None:
        return Observation.real(document.var, document.lo, document.hi)
    return Observation.sym(document.sym)


def _normalize_step(raw: RawStep) -> Tuple[Optional[float], Observation, Optional[str]]:
    if isinstance(raw, tuple):
        value, observed = raw
        return value, _observation(observed), None
    if isinstance(raw, dict):
        raw = StepDocument.model_validate(raw)
    return raw.input, _observation(raw.observed), raw.state


def check_path(a: DipAutomaton,
               steps: Union[PathDocument, Iterable[RawStep]],
               start: Optional[str] = None) -> Path:
    """Validate raw steps against the automaton and resolve each step's transition"""
    if isinstance(steps, PathDocument):
        start = start or steps.start
        steps = steps.steps
    state = start or a.init
    if not a.has_state(state):
        raise NoSuchTransition(f"start state '{state}' is not declared", step=0)

    resolved: List[PathStep] = []
    for i, raw in enumerate(steps):
        value, observed, claimed = _normalize_step(raw)
        if claimed is not None and claimed != state:
            raise NoSuchTransition(f"step {i} claims state '{claimed}' but the path is at '{state}'", step=i)

        if observed.is_real and not observed.lo < observed.hi:
            raise BadInterval(f"step {i}: empty interval ({observed.lo}, {observed.hi})")

        decl = a.state(state)
        if decl.is_input and value is None:
            raise InputKindMismatch(f"step {i}: input state '{state}' needs an input value")
        if not decl.is_input and value is not None:
            raise InputKindMismatch(f"step {i}: non-input state '{state}' takes no input")
        if value is not None and not math.isfinite(value):
            raise InputKindMismatch(f"step {i}: input must be finite, got {value}")

        matches = [t for t in a.outgoing(state) if observed.matches(t.output)]
        if not matches:
            raise NoSuchTransition(f"step {i}: no transition from '{state}' outputs {observed}", step=i)

        transition = matches[0]
        resolved.append(PathStep(state, value, observed, transition))
        state = transition.target

    return Path(start or a.init, tuple(resolved))


def path_from_transitions(a: DipAutomaton, transitions: Sequence[TransitionDecl],
                          inputs: InputSeq,
                          intervals: Optional[Sequence[Optional[Tuple[float, float]]]] = None) -> Path:
    """Build a path along known transitions; real outputs default to (-inf, inf)"""
    steps = []
    for i, (t, value) in enumerate(zip(transitions, inputs)):
        lo, hi = (intervals[i] if intervals and intervals[i] else (-INF, INF))
        steps.append((value, Observation.of_label(t.output, lo, hi)))
    start = transitions[0].source if transitions else a.init
    return check_path(a, steps, start)


# Relations between paths

def adjacent(s1: InputSeq, s2: InputSeq) -> bool:
    if len(s1) != len(s2):
        return False
    for x, y in zip(s1, s2):
        if (x is None) != (y is None):
            return False
        if x is not None and abs(x - y) > 1.0 + ADJACENCY_TOLERANCE:
            return False
    return True


def equivalent(p1: Path, p2: Path) -> bool:
    return p1.start == p2.start and p1.outseq == p2.outseq


# Exact evaluation

def _check_eps(eps: float):
    if not eps > 0 or not math.isfinite(eps):
        raise NonPositiveEpsilon(f"eps must be a positive real, got {eps}")


def _step_function(a: DipAutomaton, eps: float, step: PathStep, after: PiecewiseExpPoly) -> PiecewiseExpPoly:
    """x -> pathprob from this step on, given `after` for the remaining steps"""
    t = step.transition
    params = a.params(step.state)
    shift = step.input or 0.0
    observed = step.observed

    aux = 1.0
    if t.output.kind is OutputKind.SAMPLE_AUX:
        if params.d_aux == 0:
            raise DegenerateScale(f"state '{step.state}' outputs s' with d_aux = 0")
        aux = interval_prob(LaplaceDist(float(params.d_aux) * eps, float(params.mu_aux) + shift),
                            observed.lo, observed.hi)

    lo, hi = (observed.lo, observed.hi) if t.output.kind is OutputKind.SAMPLE else (-INF, INF)
    needs_sample = t.assign or not t.guard.is_trivial or t.output.kind is OutputKind.SAMPLE
    if not needs_sample:
        return after.scale(aux)
    if params.d == 0:
        raise DegenerateScale(f"state '{step.state}' samples s with d = 0")

    sample = LaplaceDist(float(params.d) * eps, float(params.mu) + shift)

    if not t.assign:
        if t.guard is Guard.TRUE:
            return after.scale(aux * interval_prob(sample, lo, hi))
        density = pdf_pep(sample).clamp(lo, hi)
        tail = density.integrate_upper() if t.guard is Guard.GE else density.integrate_lower()
        return (tail * after).scale(aux)

    weighted = (pdf_pep(sample) * after).clamp(lo, hi)
    if t.guard is Guard.TRUE:
        return PiecewiseExpPoly.constant(aux * weighted.integrate())
    tail = weighted.integrate_upper() if t.guard is Guard.GE else weighted.integrate_lower()
    return tail.scale(aux)


def path_function(a: DipAutomaton, eps: float, p: Path) -> PiecewiseExpPoly:
    """x -> pathprob(eps, x, p) as a piecewise exponential-polynomial"""
    _check_eps(eps)
    f = PiecewiseExpPoly.constant(1.0)
    for step in reversed(p.steps):
        f = _step_function(a, eps, step, f)
    return f


def as_probability(value: float, tolerance: float = PROBABILITY_TOLERANCE) -> float:
    """Clip rounding noise into [0, 1]; anything further out is an evaluation error"""
    if not -tolerance <= value <= 1.0 + tolerance:
        raise NumericalError(f"exact evaluation gave {value!r}, outside [0, 1]", value=value)
    return min(1.0, max(0.0, value))


@log_execution_time
def pathprob_exact(a: DipAutomaton, eps: float, x0: float, p: Path) -> ProbResult:
    f = path_function(a, eps, p)
    return ProbResult(value=as_probability(f(x0)), method="exact", eps=eps, x0=x0)


def branch_partition_check(a: DipAutomaton, eps: float, x: float, q: str,
                           value: Optional[float] = 0.0) -> float:
    """P(Ge branch) + P(Lt branch) at state q with r = x; equals 1"""
    branches = [a.delta(q, Guard.GE), a.delta(q, Guard.LT)]
    if any(t is None for t in branches):
        raise NoSuchTransition(f"state '{q}' lacks a 'ge' or 'lt' transition", step=0)
    value = value if a.state(q).is_input else None
    total = 0.0
    for t in branches:
        path = path_from_transitions(a, [t], [value])
        total += path_function(a, eps, path)(x)
    return total


# Randomized privacy spot check

_SPOT_INTERVALS = ((-INF, INF), (0.0, INF), (-INF, 0.0), (-1.0, 1.0))
DEFAULT_FUZZ = (-1.0, -0.5, 0.0, 0.5, 1.0)


def _random_pair(a: DipAutomaton, rng: np.random.Generator, max_len: int,
                 fuzz: Sequence[float]) -> Tuple[Path, Path]:
    length = int(rng.integers(1, max_len + 1))
    state = a.init
    transitions, intervals, first, second = [], [], [], []
    for _ in range(length):
        options = a.outgoing(state)
        if not options:
            break
        t = options[int(rng.integers(len(options)))]
        transitions.append(t)
        intervals.append(_SPOT_INTERVALS[int(rng.integers(len(_SPOT_INTERVALS)))] if t.output.is_real else None)
        if a.state(state).is_input:
            value = float(rng.choice(fuzz))
            delta = float(rng.choice(DEFAULT_FUZZ))
            first.append(value)
            second.append(value + delta)
        else:
            first.append(None)
            second.append(None)
        state = t.target
    return (path_from_transitions(a, transitions, first, intervals),
            path_from_transitions(a, transitions, second, intervals))


def spot_check(a: DipAutomaton, eps: float, weight: Optional[float] = None,
               max_len: int = 8, fuzz: Sequence[float] = DEFAULT_FUZZ,
               seed: int = DEFAULT_SEED, pairs: int = 200) -> SpotCheckResult:
    """Check pathprob(rho1) <= e^(weight * eps) * pathprob(rho2) on random equivalent adjacent pairs"""
    if weight is None:
        from src.services.weight_analysis import weight as compute_weight
        weight = float(compute_weight(a))
    _check_eps(eps)
    bound = math.exp(weight * eps)
    rng = np.random.default_rng(seed)

    worst = -INF
    violations = []
    for _ in range(pairs):
        rho1, rho2 = _random_pair(a, rng, max_len, fuzz)
        p1 = pathprob_exact(a, eps, 0.0, rho1).value
        p2 = pathprob_exact(a, eps, 0.0, rho2).value
        if p1 > 0 and p2 > 0:
            worst = max(worst, math.log(p1) - math.log(p2))
        if p1 > bound * p2 * (1.0 + 1e-9) + 1e-300:
            violations.append((rho1, rho2, p1, p2))

    logger.info(f"Spot check of '{a.name}' at eps={eps}: {pairs} pairs, {len(violations)} violation(s)",
                extra={"automaton": a.name, "eps": eps, "seed": seed})
    return SpotCheckResult(eps=eps, bound=bound, checked=pairs, worst_log_ratio=worst,
                           violations=tuple(violations))
