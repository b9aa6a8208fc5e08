"""
Document schemas for dipcheck
Pydantic models for automaton and path files, with exact rational parsing
"""

import math
import re
from fractions import Fraction
from typing import Annotated, Any, List, Optional, Union

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    StrictBool,
    ValidationError,
    field_validator,
    model_validator,
)

from src.errors import SchemaError
from src.models.automaton import Guard, RealVar, StateKind, format_rational

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(value: Any) -> Fraction:
    """Parse 'p/q' or an integer (string or int) into an exact Fraction"""
    if isinstance(value, bool):
        raise ValueError(f"expected a rational, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL.match(value)
        if match:
            numerator, denominator = match.groups()
            if denominator is not None and int(denominator) == 0:
                raise ValueError(f"zero denominator in {value!r}")
            return Fraction(int(numerator), int(denominator or 1))
    raise ValueError(f"expected a rational string 'p/q' or integer, got {value!r}")


def parse_bound(value: Any) -> float:
    if isinstance(value, bool):
        raise ValueError(f"expected a number or '-inf'/'inf', got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity"):
            return math.inf
        if text in ("-inf", "-infinity"):
            return -math.inf
        return float(text)
    raise ValueError(f"expected a number or '-inf'/'inf', got {value!r}")


def format_bound(value: float) -> Union[float, str]:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


Rational = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
]

Bound = Annotated[
    float,
    BeforeValidator(parse_bound),
    PlainSerializer(format_bound),
]


class OutputDocument(BaseModel):
    """{"sym": S} or {"var": "sample"|"sample_aux"}"""

    model_config = ConfigDict(extra="forbid")

    sym: Optional[str] = Field(default=None, min_length=1)
    var: Optional[RealVar] = None

    @model_validator(mode="after")
    def exactly_one(self) -> "OutputDocument":
        if (self.sym is None) == (self.var is None):
            raise ValueError("output must have exactly one of 'sym' or 'var'")
        return self


class StateDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    id: str = Field(min_length=1)
    kind: StateKind
    d: Rational
    mu: Rational = Fraction(0)
    d_aux: Rational = Fraction(0)
    mu_aux: Rational = Fraction(0)


class TransitionDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    source: str = Field(alias="from", min_length=1)
    guard: Guard
    target: str = Field(alias="to", min_length=1)
    output: OutputDocument
    assign: StrictBool

    @field_validator("guard", mode="before")
    @classmethod
    def yaml_true(cls, value: Any) -> Any:
        # unquoted `true` in YAML arrives as a bool
        if value is True:
            return Guard.TRUE.value
        return value


class AutomatonDocument(BaseModel):
    """Unvalidated automaton description"""

    model_config = ConfigDict(extra="forbid")

    name: str
    init: str
    states: List[StateDocument]
    transitions: List[TransitionDocument] = Field(default_factory=list)
    alphabet: Optional[List[str]] = None


class ObservedDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    sym: Optional[str] = Field(default=None, min_length=1)
    var: Optional[RealVar] = None
    lo: Bound = -math.inf
    hi: Bound = math.inf

    @model_validator(mode="after")
    def exactly_one(self) -> "ObservedDocument":
        if (self.sym is None) == (self.var is None):
            raise ValueError("observed must have exactly one of 'sym' or 'var'")
        if self.sym is not None and (self.lo != -math.inf or self.hi != math.inf):
            raise ValueError("interval bounds only apply to 'var' observations")
        return self


class StepDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    input: Optional[float] = None
    observed: ObservedDocument
    state: Optional[str] = None


class PathDocument(BaseModel):
    """Concrete path: inputs and observed outputs, starting at `start` (default init)"""

    model_config = ConfigDict(extra="forbid")

    automaton: Optional[str] = None
    x0: float = 0.0
    start: Optional[str] = None
    steps: List[StepDocument] = Field(default_factory=list)


def schema_error_from(error: ValidationError, document: str = "document") -> SchemaError:
    """Translate the first pydantic error into a SchemaError naming the field"""
    first = error.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ())) or "<root>"
    kind = first.get("type", "")
    if kind == "missing":
        message = f"{document}: missing field '{location}'"
    elif kind == "extra_forbidden":
        message = f"{document}: unexpected field '{location}'"
    else:
        message = f"{document}: invalid value at '{location}': {first.get('msg', '')}"
    return SchemaError(message, field=location)
