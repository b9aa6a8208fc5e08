"""
Shared fixtures for dipcheck tests
"""

import copy
from typing import Any, Callable, Dict

import pytest

from src.models.automaton import DipAutomaton
from src.services.automaton_service import builtin, document_dict, validate

BUILTIN_NAMES = ["svt", "numeric_sparse", "sort", "svt_two_phase", "numeric_sparse_mod"]
WELL_FORMED = ["svt", "numeric_sparse"]
NOT_WELL_FORMED = ["sort", "svt_two_phase", "numeric_sparse_mod"]


@pytest.fixture
def svt() -> DipAutomaton:
    return builtin("svt")


@pytest.fixture
def numeric_sparse() -> DipAutomaton:
    return builtin("numeric_sparse")


@pytest.fixture
def sort_automaton() -> DipAutomaton:
    return builtin("sort")


@pytest.fixture
def svt_two_phase() -> DipAutomaton:
    return builtin("svt_two_phase")


@pytest.fixture
def numeric_sparse_mod() -> DipAutomaton:
    return builtin("numeric_sparse_mod")


@pytest.fixture
def raw_document() -> Callable[..., Dict[str, Any]]:
    """Fresh, mutable copy of a built-in's document"""

    def factory(name: str = "svt") -> Dict[str, Any]:
        return copy.deepcopy(document_dict(builtin(name)))

    return factory


@pytest.fixture
def mutant_svt(raw_document) -> DipAutomaton:
    """svt whose below-threshold loop releases the sample itself"""
    document = raw_document("svt")
    document["name"] = "mutant_svt"
    for t in document["transitions"]:
        if t["from"] == "q1" and t["guard"] == "lt":
            t["output"] = {"var": "sample"}
    return validate(document)


def svt_chain_document(gadgets: int) -> Dict[str, Any]:
    """`gadgets` copies of svt in sequence; the weight is `gadgets`"""
    states, transitions = [], []
    for i in range(gadgets):
        states.append({"id": f"n{i}", "kind": "noninput", "d": "1/2", "mu": "0"})
        states.append({"id": f"w{i}", "kind": "input", "d": "1/4", "mu": "0"})
        transitions.append({"from": f"n{i}", "guard": "true", "to": f"w{i}",
                            "output": {"sym": "bot"}, "assign": True})
        transitions.append({"from": f"w{i}", "guard": "lt", "to": f"w{i}",
                            "output": {"sym": "bot"}, "assign": False})
        transitions.append({"from": f"w{i}", "guard": "ge", "to": f"n{i + 1}" if i + 1 < gadgets else "end",
                            "output": {"sym": "top"}, "assign": False})
    states.append({"id": "end", "kind": "input", "d": "1/4", "mu": "0"})
    return {"name": f"svt_chain_{gadgets}", "init": "n0", "states": states, "transitions": transitions}


@pytest.fixture
def svt_chain() -> Callable[[int], DipAutomaton]:
    def factory(gadgets: int) -> DipAutomaton:
        return validate(svt_chain_document(gadgets))

    return factory
