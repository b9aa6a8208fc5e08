"""
Data models for dipcheck
"""

from src.models.automaton import (
    DipAutomaton,
    Guard,
    IssueKind,
    OutputKind,
    OutputLabel,
    RealVar,
    StateDecl,
    StateKind,
    StateParams,
    TransitionDecl,
    TransitionRef,
    ValidationIssue,
    format_rational,
)
from src.models.documents import AutomatonDocument, PathDocument, parse_rational
from src.models.path import (
    MechanismRun,
    Observation,
    Path,
    PathStep,
    ProbResult,
    RunStep,
    SpotCheckResult,
)
from src.models.verdict import (
    CostedTransition,
    PathDirection,
    PrivacyClause,
    Verdict,
    ViolationKind,
    ViolationWitness,
    WeightReport,
)
from src.models.witness import Inconclusive, McConfirmation, RatioEntry, Refutation, WitnessPair
from src.models.report import Report

__all__ = [
    # Automaton
    "DipAutomaton",
    "Guard",
    "IssueKind",
    "OutputKind",
    "OutputLabel",
    "RealVar",
    "StateDecl",
    "StateKind",
    "StateParams",
    "TransitionDecl",
    "TransitionRef",
    "ValidationIssue",
    "format_rational",

    # Documents
    "AutomatonDocument",
    "PathDocument",
    "parse_rational",

    # Paths
    "Observation",
    "Path",
    "PathStep",
    "ProbResult",
    "SpotCheckResult",
    "MechanismRun",
    "RunStep",

    # Verdicts
    "CostedTransition",
    "PathDirection",
    "PrivacyClause",
    "Verdict",
    "ViolationKind",
    "ViolationWitness",
    "WeightReport",

    # Witnesses
    "Inconclusive",
    "McConfirmation",
    "RatioEntry",
    "Refutation",
    "WitnessPair",

    # Reports
    "Report",
]
