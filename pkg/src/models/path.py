"""
Path model for dipcheck
Concrete executions (inputs plus observed outputs) and probability results
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple, Union

from src.models.automaton import OutputLabel, RealVar, TransitionDecl, TransitionRef
from src.models.documents import format_bound


@dataclass(frozen=True)
class Observation:
    """A finite symbol, or a real variable observed inside the open interval (lo, hi)"""

    symbol: Optional[str] = None
    var: Optional[RealVar] = None
    lo: float = -math.inf
    hi: float = math.inf

    @classmethod
    def sym(cls, symbol: str) -> "Observation":
        return cls(symbol=symbol)

    @classmethod
    def real(cls, var: RealVar, lo: float = -math.inf, hi: float = math.inf) -> "Observation":
        return cls(var=var, lo=lo, hi=hi)

    @classmethod
    def of_label(cls, label: OutputLabel, lo: float = -math.inf, hi: float = math.inf) -> "Observation":
        if label.var is not None:
            return cls.real(label.var, lo, hi)
        return cls.sym(label.symbol)

    @property
    def is_real(self) -> bool:
        return self.var is not None

    def matches(self, label: OutputLabel) -> bool:
        if self.var is not None:
            return label.var is self.var
        return label.var is None and label.symbol == self.symbol

    def outseq_item(self) -> Tuple[Any, ...]:
        """Output-sequence entry; a real observation is identified by its interval only"""
        if self.var is not None:
            return ("interval", self.lo, self.hi)
        return ("sym", self.symbol)

    def to_dict(self) -> Dict[str, Any]:
        if self.var is None:
            return {"sym": self.symbol}
        return {"var": self.var.value, "lo": format_bound(self.lo), "hi": format_bound(self.hi)}

    def __str__(self) -> str:
        if self.var is None:
            return self.symbol
        return f"{self.var.value} in ({self.lo:g}, {self.hi:g})"


@dataclass(frozen=True)
class PathStep:
    state: str
    input: Optional[float]
    observed: Observation
    transition: TransitionDecl


@dataclass(frozen=True)
class Path:
    start: str
    steps: Tuple[PathStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def inseq(self) -> List[Optional[float]]:
        return [step.input for step in self.steps]

    @property
    def outseq(self) -> List[Tuple[Any, ...]]:
        return [step.observed.outseq_item() for step in self.steps]

    @property
    def transitions(self) -> List[TransitionRef]:
        return [step.transition.ref for step in self.steps]

    @property
    def end(self) -> str:
        return self.steps[-1].transition.target if self.steps else self.start

    def to_document(self, automaton: Optional[str] = None, x0: float = 0.0) -> Dict[str, Any]:
        """Path document form"""
        document: Dict[str, Any] = {
            "x0": x0,
            "start": self.start,
            "steps": [
                {"input": step.input, "observed": step.observed.to_dict()}
                for step in self.steps
            ],
        }
        if automaton is not None:
            document["automaton"] = automaton
        return document


@dataclass(frozen=True)
class ProbResult:
    """Exact or Monte Carlo path probability"""

    value: float
    method: str
    eps: float
    x0: float = 0.0
    std_error: Optional[float] = None
    samples: Optional[int] = None
    hits: Optional[int] = None
    seed: Optional[int] = None
    rare_event: bool = False

    def to_dict(self) -> Dict[str, Union[float, int, str, bool, None]]:
        payload: Dict[str, Union[float, int, str, bool, None]] = {
            "method": self.method,
            "eps": self.eps,
            "x0": self.x0,
            "value": self.value,
        }
        if self.method == "monte_carlo":
            payload.update({
                "std_error": self.std_error,
                "samples": self.samples,
                "hits": self.hits,
                "seed": self.seed,
                "rare_event": self.rare_event,
            })
        return payload


@dataclass(frozen=True)
class SpotCheckResult:
    """Outcome of comparing random equivalent, adjacent path pairs against e^(weight * eps)"""

    eps: float
    bound: float
    checked: int
    worst_log_ratio: float
    violations: Tuple[Tuple[Path, Path, float, float], ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eps": self.eps,
            "bound": self.bound,
            "checked": self.checked,
            "worst_log_ratio": format_bound(self.worst_log_ratio),
            "violations": [
                {"rho1": r1.to_document(), "rho2": r2.to_document(), "p1": p1, "p2": p2}
                for r1, r2, p1, p2 in self.violations
            ],
        }


@dataclass(frozen=True)
class RunStep:
    state: str
    input: Optional[float]
    output: Union[str, float]
    transition: TransitionRef

    def to_dict(self) -> Dict[str, Any]:
        return {
            "state": self.state,
            "input": self.input,
            "output": self.output,
            "transition": self.transition.to_dict(),
        }


@dataclass(frozen=True)
class MechanismRun:
    """One sampled execution of an automaton on an input sequence"""

    eps: float
    seed: int
    steps: Tuple[RunStep, ...] = ()

    @property
    def outputs(self) -> List[Union[str, float]]:
        return [step.output for step in self.steps]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eps": self.eps,
            "seed": self.seed,
            "outputs": self.outputs,
            "steps": [step.to_dict() for step in self.steps],
        }
