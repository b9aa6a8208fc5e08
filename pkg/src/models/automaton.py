"""
Automaton model for dipcheck
States with Laplace sampling parameters, guarded transitions and validation issues
"""

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Optional, Tuple


def format_rational(value: Fraction) -> str:
    """Render a rational as 'p/q', or 'p' when integral"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Guard(enum.Enum):
    """Guard condition comparing the fresh sample s with the stored value r"""
    TRUE = "true"
    GE = "ge"
    LT = "lt"

    @property
    def rank(self) -> int:
        """Serialization order: true < ge < lt"""
        return _GUARD_RANK[self]

    @property
    def is_trivial(self) -> bool:
        return self is Guard.TRUE


_GUARD_RANK = {Guard.TRUE: 0, Guard.GE: 1, Guard.LT: 2}


class RealVar(enum.Enum):
    """Real-valued output variable"""
    SAMPLE = "sample"
    SAMPLE_AUX = "sample_aux"


class OutputKind(enum.Enum):
    """Coarse classification of an output label"""
    FINITE = "finite"
    SAMPLE = "sample"
    SAMPLE_AUX = "sample_aux"


class StateKind(enum.Enum):
    """Whether a state reads an input value"""
    INPUT = "input"
    NON_INPUT = "noninput"


@dataclass(frozen=True)
class OutputLabel:
    """Either a finite symbol or one of the sampled real variables"""

    symbol: Optional[str] = None
    var: Optional[RealVar] = None

    @classmethod
    def sym(cls, symbol: str) -> "OutputLabel":
        return cls(symbol=symbol)

    @classmethod
    def real(cls, var: RealVar) -> "OutputLabel":
        return cls(var=var)

    @property
    def kind(self) -> OutputKind:
        if self.var is RealVar.SAMPLE:
            return OutputKind.SAMPLE
        if self.var is RealVar.SAMPLE_AUX:
            return OutputKind.SAMPLE_AUX
        return OutputKind.FINITE

    @property
    def is_real(self) -> bool:
        return self.var is not None

    def to_dict(self) -> Dict[str, str]:
        if self.var is not None:
            return {"var": self.var.value}
        return {"sym": self.symbol}

    def __str__(self) -> str:
        return self.var.value if self.var is not None else self.symbol


@dataclass(frozen=True)
class StateParams:
    """Scale multipliers and means of the two per-state Laplace samples"""

    d: Fraction
    mu: Fraction
    d_aux: Fraction = Fraction(0)
    mu_aux: Fraction = Fraction(0)

    def scaled(self, factor: Fraction) -> "StateParams":
        return StateParams(self.d * factor, self.mu, self.d_aux * factor, self.mu_aux)

    def to_dict(self) -> Dict[str, str]:
        return {
            "d": format_rational(self.d),
            "mu": format_rational(self.mu),
            "d_aux": format_rational(self.d_aux),
            "mu_aux": format_rational(self.mu_aux),
        }


@dataclass(frozen=True)
class StateDecl:
    id: str
    kind: StateKind
    params: StateParams

    @property
    def is_input(self) -> bool:
        return self.kind is StateKind.INPUT


@dataclass(frozen=True)
class TransitionRef:
    """Identifies a transition by (source, guard, target)"""

    source: str
    guard: Guard
    target: str

    @property
    def sort_key(self) -> Tuple[str, int, str]:
        return (self.source, self.guard.rank, self.target)

    def to_dict(self) -> Dict[str, str]:
        return {"from": self.source, "guard": self.guard.value, "to": self.target}

    def __str__(self) -> str:
        return f"{self.source} -{self.guard.value}-> {self.target}"


@dataclass(frozen=True)
class TransitionDecl:
    source: str
    guard: Guard
    target: str
    output: OutputLabel
    assign: bool

    @property
    def ref(self) -> TransitionRef:
        return TransitionRef(self.source, self.guard, self.target)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "from": self.source,
            "guard": self.guard.value,
            "to": self.target,
            "output": self.output.to_dict(),
            "assign": self.assign,
        }


@dataclass(frozen=True)
class DipAutomaton:
    """Validated automaton; construct through services.automaton_service.validate"""

    name: str
    init: str
    states: Tuple[StateDecl, ...]
    transitions: Tuple[TransitionDecl, ...]
    alphabet: Optional[Tuple[str, ...]] = None

    _state_index: Dict[str, StateDecl] = field(init=False, repr=False, compare=False)
    _delta: Dict[Tuple[str, Guard], TransitionDecl] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        states = tuple(sorted(self.states, key=lambda s: s.id))
        transitions = tuple(sorted(self.transitions, key=lambda t: t.ref.sort_key))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "transitions", transitions)
        if self.alphabet is not None:
            object.__setattr__(self, "alphabet", tuple(sorted(set(self.alphabet))))
        object.__setattr__(self, "_state_index", {s.id: s for s in states})
        object.__setattr__(self, "_delta", {(t.source, t.guard): t for t in transitions})

    def __hash__(self) -> int:
        return hash((self.name, self.init, self.states, self.transitions, self.alphabet))

    @property
    def state_ids(self) -> List[str]:
        return [s.id for s in self.states]

    def state(self, state_id: str) -> StateDecl:
        return self._state_index[state_id]

    def has_state(self, state_id: str) -> bool:
        return state_id in self._state_index

    def params(self, state_id: str) -> StateParams:
        return self._state_index[state_id].params

    def delta(self, state_id: str, guard: Guard) -> Optional[TransitionDecl]:
        """The transition partial function"""
        return self._delta.get((state_id, guard))

    def outgoing(self, state_id: str) -> List[TransitionDecl]:
        return [t for g in Guard if (t := self._delta.get((state_id, g))) is not None]

    def transition(self, ref: TransitionRef) -> TransitionDecl:
        t = self._delta.get((ref.source, ref.guard))
        if t is None or t.target != ref.target:
            raise KeyError(f"No transition {ref}")
        return t

    @property
    def out_alphabet(self) -> FrozenSet[str]:
        """Finite output symbols used by the transitions"""
        return frozenset(t.output.symbol for t in self.transitions if not t.output.is_real)

    def with_params(self, params: Dict[str, StateParams]) -> "DipAutomaton":
        """Copy with some states' parameters replaced"""
        states = tuple(
            StateDecl(s.id, s.kind, params.get(s.id, s.params)) for s in self.states
        )
        return DipAutomaton(self.name, self.init, states, self.transitions, self.alphabet)


class IssueKind(enum.Enum):
    """Structural condition violated by an automaton description"""
    DETERMINISM_VIOLATION = "determinism_violation"
    OUTPUT_DISTINCTION_VIOLATION = "output_distinction_violation"
    INITIALIZATION_VIOLATION = "initialization_violation"
    NON_INPUT_VIOLATION = "non_input_violation"
    DANGLING_REFERENCE = "dangling_reference"
    DUPLICATE_STATE_ID = "duplicate_state_id"
    NEGATIVE_SCALE = "negative_scale"
    DEGENERATE_SCALE = "degenerate_scale"
    UNDECLARED_SYMBOL = "undeclared_symbol"


@dataclass(frozen=True)
class ValidationIssue:
    kind: IssueKind
    message: str
    location: str

    def to_dict(self) -> Dict[str, str]:
        return {"kind": self.kind.value, "message": self.message, "location": self.location}
