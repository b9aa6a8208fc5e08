"""
Witness generation for dipcheck
Turns structural violation witnesses into concrete pairs of equivalent paths
with adjacent inputs, and measures how far their probabilities diverge
"""

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from src.config.logging_config import get_logger
from src.config.settings import DEFAULT_EPS_GRID
from src.errors import InvalidRepetition, WrongWitnessKind
from src.models.automaton import DipAutomaton, Guard, OutputKind, TransitionDecl, TransitionRef
from src.models.verdict import PathDirection, PrivacyClause, ViolationKind, ViolationWitness
from src.models.witness import RatioEntry, WitnessPair
from src.services.path_semantics import adjacent, equivalent, path_from_transitions, pathprob_exact
from src.tools.piecewise import INF

logger = get_logger(__name__)

VIOLATION_STYLES = ("tail", "printed")

_FULL = (-INF, INF)
_POSITIVE = (0.0, INF)
_NEGATIVE = (-INF, 0.0)


@dataclass(frozen=True)
class _Step:
    """One position of a laid-out witness walk"""

    transition: TransitionDecl
    segment: str
    position: int
    mu: float
    mu_aux: float
    is_input: bool

    @property
    def guard(self) -> Guard:
        return self.transition.guard


def _layout(a: DipAutomaton, segments: Iterable[Tuple[str, Sequence[TransitionRef]]]) -> List[_Step]:
    steps = []
    for segment, refs in segments:
        for position, ref in enumerate(refs):
            t = a.transition(ref)
            params = a.params(t.source)
            steps.append(_Step(
                transition=t,
                segment=segment,
                position=position,
                mu=float(params.mu),
                mu_aux=float(params.mu_aux),
                is_input=a.state(t.source).is_input,
            ))
    return steps


def _require(witness: ViolationWitness, kind: ViolationKind, ell: int):
    if witness.kind is not kind:
        raise WrongWitnessKind(f"expected a {kind.value} witness, got {witness.kind.value}")
    if ell < 1:
        raise InvalidRepetition(f"repetition count must be at least 1, got {ell}")


def _pair(a: DipAutomaton, steps: Sequence[_Step], first: Sequence[Optional[float]],
          second: Sequence[Optional[float]], intervals: Sequence[Optional[Tuple[float, float]]],
          ell: int, kind: ViolationKind) -> WitnessPair:
    transitions = [step.transition for step in steps]
    rho1 = path_from_transitions(a, transitions, first, intervals)
    rho2 = path_from_transitions(a, transitions, second, intervals)
    if not adjacent(rho1.inseq, rho2.inseq):
        raise RuntimeError(f"generated {kind.value} inputs are not adjacent")
    if not equivalent(rho1, rho2):
        raise RuntimeError(f"generated {kind.value} paths are not equivalent")
    return WitnessPair(rho1=rho1, rho2=rho2, ell=ell, kind=kind)


def gen_leaking_cycle_pair(a: DipAutomaton, witness: ViolationWitness, ell: int) -> WitnessPair:
    """Drive every guard true with margin 1, then swap the sample means at the marked positions"""
    _require(witness, ViolationKind.LEAKING_CYCLE, ell)
    steps = _layout(a, [("prefix", witness.prefix)] + [("cycle", witness.cycle)] * ell)

    first: List[Optional[float]] = []
    last_assign: Optional[int] = None
    for k, step in enumerate(steps):
        if not step.is_input:
            first.append(None)
        elif last_assign is None:
            first.append(0.0)
        else:
            ref = steps[last_assign]
            aligned = ref.mu - step.mu + (first[last_assign] or 0.0)
            margin = {Guard.GE: 1.0, Guard.LT: -1.0}.get(step.guard, 0.0)
            first.append(aligned + margin)
        if step.transition.assign:
            last_assign = k

    second = list(first)
    i, j = witness.marks
    offset = len(witness.prefix)
    for rep in range(ell):
        pi, pj = offset + rep * len(witness.cycle) + i, offset + rep * len(witness.cycle) + j
        si, sj = steps[pi], steps[pj]
        if si.is_input:
            second[pi] = first[pj] + sj.mu - si.mu
            second[pj] = first[pi] + si.mu - sj.mu
        else:
            second[pj] = first[pj] + (-1.0 if sj.guard is Guard.GE else 1.0)

    return _pair(a, steps, first, second, [None] * len(steps), ell, ViolationKind.LEAKING_CYCLE)


def gen_leaking_pair_pair(a: DipAutomaton, witness: ViolationWitness, ell: int) -> WitnessPair:
    """Cycles traversed with inputs half a unit past each guard, mirrored in the second path"""
    _require(witness, ViolationKind.LEAKING_PAIR, ell)
    steps = _layout(a, [("prefix", witness.prefix)]
                    + [("cycle", witness.cycle)] * ell
                    + [("connector", witness.connector)]
                    + [("cycle", witness.second_cycle)] * ell)

    first: List[Optional[float]] = []
    second: List[Optional[float]] = []
    for step in steps:
        if not step.is_input:
            first.append(None)
            second.append(None)
            continue
        half = {Guard.GE: 0.5, Guard.LT: -0.5}.get(step.guard) if step.segment == "cycle" else None
        if half is None:
            first.append(0.0)
            second.append(0.0)
        else:
            first.append(half - step.mu)
            second.append(-half - step.mu)

    return _pair(a, steps, first, second, [None] * len(steps), ell, ViolationKind.LEAKING_PAIR)


def gen_disclosing_cycle_pair(a: DipAutomaton, witness: ViolationWitness, ell: int) -> WitnessPair:
    """Center every sample at 0 and shift the disclosed one by a unit at each repetition"""
    _require(witness, ViolationKind.DISCLOSING_CYCLE, ell)
    steps = _layout(a, [("prefix", witness.prefix)] + [("cycle", witness.cycle)] * ell)
    marks = set(witness.marks)

    first: List[Optional[float]] = []
    second: List[Optional[float]] = []
    intervals: List[Optional[Tuple[float, float]]] = []
    for step in steps:
        if not step.is_input:
            first.append(None)
            second.append(None)
            intervals.append(None)
            continue
        offending = step.segment == "cycle" and step.position in marks
        kind = step.transition.output.kind
        if offending and kind is OutputKind.SAMPLE:
            first.append(-step.mu)
            second.append(-step.mu - 1.0)
            intervals.append(_POSITIVE)
        elif offending:
            upward = step.guard is Guard.LT
            first.append(-step.mu_aux)
            second.append(-step.mu_aux + (1.0 if upward else -1.0))
            intervals.append(_NEGATIVE if upward else _POSITIVE)
        else:
            first.append(-step.mu)
            second.append(-step.mu)
            intervals.append(None)

    return _pair(a, steps, first, second, intervals, ell, ViolationKind.DISCLOSING_CYCLE)


def _distinguished_interval(clause: PrivacyClause, direction: PathDirection) -> Tuple[float, float]:
    if clause is PrivacyClause.CYCLE_TO_OUTPUT:
        return _NEGATIVE if direction is PathDirection.AG else _POSITIVE
    return _POSITIVE if direction is PathDirection.AG else _NEGATIVE


def gen_violating_path_pair(a: DipAutomaton, witness: ViolationWitness, ell: int,
                            style: str = "tail") -> WitnessPair:
    """Repeat the adjoining cycle ell times around the path that outputs s

    style "tail" centers every sample and shifts the marked cycle step by a
    unit, pinning the distinguished output to one half-line. Style "printed"
    uses inputs half a unit past each guard of the cycle, mirrored in the
    second path, with the distinguished output in (0, inf).
    """
    _require(witness, ViolationKind.PRIVACY_VIOLATING_PATH, ell)
    if style not in VIOLATION_STYLES:
        raise ValueError(f"unknown witness style '{style}' (known: {', '.join(VIOLATION_STYLES)})")

    cycles = [("cycle", witness.cycle)] * ell
    path = [("path", witness.path)]
    segments = [("prefix", witness.prefix)] + (cycles + path if witness.cycle_first else path + cycles)
    steps = _layout(a, segments)

    shift_guard = Guard.LT if any(
        a.transition(witness.cycle[m]).guard is Guard.LT for m in witness.marks
    ) else Guard.GE
    shift = 1.0 if shift_guard is Guard.LT else -1.0
    distinguished = (_POSITIVE if style == "printed"
                     else _distinguished_interval(witness.clause, witness.direction))
    offending_position = witness.path.index(witness.offending)

    first: List[Optional[float]] = []
    second: List[Optional[float]] = []
    intervals: List[Optional[Tuple[float, float]]] = []
    for step in steps:
        is_offending = step.segment == "path" and step.position == offending_position
        intervals.append(distinguished if is_offending else None)
        if not step.is_input:
            first.append(None)
            second.append(None)
            continue

        in_cycle = step.segment == "cycle"
        if style == "printed" and in_cycle and not step.guard.is_trivial:
            half = 0.5 if step.guard is Guard.GE else -0.5
            first.append(half - step.mu)
            second.append(-half - step.mu)
        elif style == "tail" and in_cycle and step.position in witness.marks:
            first.append(-step.mu)
            second.append(-step.mu + shift)
        else:
            first.append(-step.mu)
            second.append(-step.mu)

    return _pair(a, steps, first, second, intervals, ell, ViolationKind.PRIVACY_VIOLATING_PATH)


def generate_pair(a: DipAutomaton, witness: ViolationWitness, ell: int, style: str = "tail") -> WitnessPair:
    if witness.kind is ViolationKind.LEAKING_CYCLE:
        return gen_leaking_cycle_pair(a, witness, ell)
    if witness.kind is ViolationKind.LEAKING_PAIR:
        return gen_leaking_pair_pair(a, witness, ell)
    if witness.kind is ViolationKind.DISCLOSING_CYCLE:
        return gen_disclosing_cycle_pair(a, witness, ell)
    return gen_violating_path_pair(a, witness, ell, style)


def ratio_report(a: DipAutomaton, pair: WitnessPair,
                 eps_grid: Sequence[float] = DEFAULT_EPS_GRID,
                 d: Optional[float] = None) -> Tuple[RatioEntry, ...]:
    """Exact pathprob(rho1) / pathprob(rho2) at each eps, with the e^(d * eps) threshold when d is given"""
    entries = []
    for eps in eps_grid:
        p1 = pathprob_exact(a, eps, pair.x0, pair.rho1).value
        p2 = pathprob_exact(a, eps, pair.x0, pair.rho2).value
        threshold = math.exp(float(d) * eps) if d is not None else None
        entries.append(RatioEntry(eps=eps, ell=pair.ell, p1=p1, p2=p2, threshold=threshold))
    logger.debug(f"Ratio report for {pair.kind.value} pair at ell={pair.ell}",
                 extra={"automaton": a.name, "ell": pair.ell})
    return tuple(entries)
