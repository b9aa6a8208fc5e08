"""
Witness model for dipcheck
Concrete counterexample path pairs, probability-ratio evidence and refutation outcomes
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from src.models.automaton import format_rational
from src.models.documents import format_bound
from src.models.path import Path, ProbResult
from src.models.verdict import ViolationKind


@dataclass(frozen=True)
class RatioEntry:
    """pathprob(rho1) / pathprob(rho2) at one (eps, ell) cell"""

    eps: float
    ell: int
    p1: float
    p2: float
    threshold: Optional[float] = None

    @property
    def ratio(self) -> float:
        if self.p2 > 0:
            return self.p1 / self.p2
        return math.inf if self.p1 > 0 else math.nan

    @property
    def log_ratio(self) -> float:
        if self.p1 <= 0:
            return -math.inf
        if self.p2 <= 0:
            return math.inf
        return math.log(self.p1) - math.log(self.p2)

    @property
    def exceeds(self) -> Optional[bool]:
        if self.threshold is None:
            return None
        return self.p1 > 0 and self.ratio > self.threshold

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "eps": self.eps,
            "ell": self.ell,
            "p1": self.p1,
            "p2": self.p2,
            "ratio": format_bound(self.ratio) if not math.isnan(self.ratio) else "nan",
        }
        if self.threshold is not None:
            payload["threshold"] = self.threshold
            payload["exceeds"] = self.exceeds
        return payload


@dataclass(frozen=True)
class WitnessPair:
    rho1: Path
    rho2: Path
    ell: int
    kind: ViolationKind
    ratio_report: Tuple[RatioEntry, ...] = ()
    x0: float = 0.0

    def with_report(self, report: Tuple[RatioEntry, ...]) -> "WitnessPair":
        return WitnessPair(self.rho1, self.rho2, self.ell, self.kind, tuple(report), self.x0)

    def to_dict(self, automaton: Optional[str] = None) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "ell": self.ell,
            "rho1": self.rho1.to_document(automaton, self.x0),
            "rho2": self.rho2.to_document(automaton, self.x0),
            "ratios": [entry.to_dict() for entry in self.ratio_report],
        }


@dataclass(frozen=True)
class McConfirmation:
    """Monte Carlo re-estimate of both path probabilities of a hit"""

    p1: ProbResult
    p2: ProbResult
    sigmas: float
    confirmed: bool
    rare_event: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p1": self.p1.to_dict(),
            "p2": self.p2.to_dict(),
            "sigmas": self.sigmas,
            "confirmed": self.confirmed,
            "rare_event": self.rare_event,
        }


@dataclass(frozen=True)
class Refutation:
    d: Fraction
    hit: RatioEntry
    pair: WitnessPair
    confirmation: Optional[McConfirmation] = None
    searched: Tuple[RatioEntry, ...] = field(default_factory=tuple)

    status = "refuted"

    def to_dict(self, automaton: Optional[str] = None) -> Dict[str, Any]:
        return {
            "status": self.status,
            "d": format_rational(self.d),
            "hit": self.hit.to_dict(),
            "pair": self.pair.to_dict(automaton),
            "confirmation": self.confirmation.to_dict() if self.confirmation else None,
            "searched": [entry.to_dict() for entry in self.searched],
        }


@dataclass(frozen=True)
class Inconclusive:
    d: Fraction
    best: Optional[RatioEntry]
    searched: Tuple[RatioEntry, ...] = field(default_factory=tuple)

    status = "inconclusive"

    def to_dict(self, automaton: Optional[str] = None) -> Dict[str, Any]:
        return {
            "status": self.status,
            "d": format_rational(self.d),
            "best": self.best.to_dict() if self.best else None,
            "searched": [entry.to_dict() for entry in self.searched],
        }
