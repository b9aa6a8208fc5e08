"""
Verdict model for dipcheck
Well-formedness verdicts, structural violation witnesses and transition costs
"""

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from src.models.automaton import TransitionRef, format_rational


class ViolationKind(enum.Enum):
    """Structural pattern that rules out differential privacy"""
    LEAKING_CYCLE = "leaking_cycle"
    LEAKING_PAIR = "leaking_pair"
    DISCLOSING_CYCLE = "disclosing_cycle"
    PRIVACY_VIOLATING_PATH = "privacy_violating_path"


class PathDirection(enum.Enum):
    """AG: every assignment on the path is Ge-guarded; AL: every assignment is Lt-guarded"""
    AG = "ag"
    AL = "al"


class PrivacyClause(enum.Enum):
    """Shape of a privacy-violating path"""
    ASSIGNMENT_OUTPUT = "a"   # assignment outputting s, then a path into a cycle
    GUARDED_OUTPUT = "b"      # non-assignment guarded step outputting s, then a path into a cycle
    CYCLE_TO_OUTPUT = "c"     # a cycle, then a path ending in a guarded step outputting s


def _refs(refs: Tuple[TransitionRef, ...]) -> List[Dict[str, str]]:
    return [ref.to_dict() for ref in refs]


@dataclass(frozen=True)
class ViolationWitness:
    """Explicit transition sequences demonstrating a violation.

    Every sequence is a legal walk of the automaton. `prefix` starts at the
    initial state. Depending on kind:

    - leaking cycle: `cycle` with `marks` = (i, j), an assignment at i and a
      non-trivial guard at j > i
    - leaking pair: `cycle` (C), `second_cycle` (C') and the `connector` path
    - disclosing cycle: `cycle` and the `offending` input transition in it,
      with its positions in `marks`
    - privacy-violating path: `path`, the adjoining `cycle`, the `offending`
      transition outputting s, and `marks` = position of the shifted guarded step in the cycle
    """

    kind: ViolationKind
    prefix: Tuple[TransitionRef, ...] = ()
    cycle: Tuple[TransitionRef, ...] = ()
    second_cycle: Tuple[TransitionRef, ...] = ()
    connector: Tuple[TransitionRef, ...] = ()
    path: Tuple[TransitionRef, ...] = ()
    marks: Tuple[int, ...] = ()
    offending: Optional[TransitionRef] = None
    clause: Optional[PrivacyClause] = None
    direction: Optional[PathDirection] = None

    @property
    def cycle_first(self) -> bool:
        """For privacy-violating paths: whether the cycle precedes the path"""
        return self.clause is PrivacyClause.CYCLE_TO_OUTPUT

    def walk(self) -> List[TransitionRef]:
        """The witness laid out as one walk from the initial state (each cycle once)"""
        if self.kind is ViolationKind.LEAKING_PAIR:
            return [*self.prefix, *self.cycle, *self.connector, *self.second_cycle]
        if self.kind is ViolationKind.PRIVACY_VIOLATING_PATH and not self.cycle_first:
            return [*self.prefix, *self.path, *self.cycle]
        if self.kind is ViolationKind.PRIVACY_VIOLATING_PATH:
            return [*self.prefix, *self.cycle, *self.path]
        return [*self.prefix, *self.cycle]

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"kind": self.kind.value, "prefix": _refs(self.prefix)}
        if self.kind is ViolationKind.LEAKING_CYCLE:
            payload["cycle"] = _refs(self.cycle)
            payload["marks"] = list(self.marks)
        elif self.kind is ViolationKind.LEAKING_PAIR:
            payload["direction"] = self.direction.value
            payload["cycles"] = [_refs(self.cycle), _refs(self.second_cycle)]
            payload["path"] = _refs(self.connector)
        elif self.kind is ViolationKind.DISCLOSING_CYCLE:
            payload["cycle"] = _refs(self.cycle)
            payload["offending"] = self.offending.to_dict()
        else:
            payload["clause"] = self.clause.value
            payload["direction"] = self.direction.value
            payload["path"] = _refs(self.path)
            payload["cycle"] = _refs(self.cycle)
            payload["offending"] = self.offending.to_dict()
        return payload


@dataclass(frozen=True)
class Verdict:
    weight: Optional[Fraction] = None
    witness: Optional[ViolationWitness] = None

    @classmethod
    def well_formed(cls, weight: Fraction) -> "Verdict":
        return cls(weight=weight)

    @classmethod
    def violation(cls, witness: ViolationWitness) -> "Verdict":
        return cls(witness=witness)

    @property
    def is_well_formed(self) -> bool:
        return self.witness is None

    @property
    def status(self) -> str:
        return "well_formed" if self.is_well_formed else "violation"

    def to_dict(self) -> Dict[str, Any]:
        if self.is_well_formed:
            return {"status": self.status, "weight": format_rational(self.weight)}
        return {"status": self.status, "witness": self.witness.to_dict()}


@dataclass(frozen=True)
class CostedTransition:
    ref: TransitionRef
    is_critical: bool
    cost: Fraction
    reachable: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "transition": self.ref.to_dict(),
            "critical": self.is_critical,
            "cost": format_rational(self.cost),
            "reachable": self.reachable,
        }


@dataclass(frozen=True)
class WeightReport:
    weight: Fraction
    unrestricted_weight: Fraction
    costs: Tuple[CostedTransition, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "weight": format_rational(self.weight),
            "unrestricted_weight": format_rational(self.unrestricted_weight),
            "costs": [c.to_dict() for c in self.costs],
        }
