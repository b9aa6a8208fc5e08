"""
Services module for dipcheck
Analysis, semantics and witness generation over validated automata
"""

from src.services.automaton_service import (
    builtin,
    collect_issues,
    list_builtins,
    load_automaton,
    parse,
    serialize,
    validate,
)
from src.services.graph_analysis import (
    check_well_formed,
    find_disclosing_cycle,
    find_leaking_cycle,
    find_leaking_pair,
    find_privacy_violating_path,
)
from src.services.weight_analysis import cost, critical_transitions, weight, weight_report
from src.services.path_semantics import (
    adjacent,
    branch_partition_check,
    check_path,
    equivalent,
    pathprob_exact,
    spot_check,
)
from src.services.simulation import pathprob_mc, run_mechanism
from src.services.witness_generator import (
    gen_disclosing_cycle_pair,
    gen_leaking_cycle_pair,
    gen_leaking_pair_pair,
    gen_violating_path_pair,
    generate_pair,
    ratio_report,
)
from src.services.refutation import refute

__all__ = [
    # Automaton model
    "builtin",
    "collect_issues",
    "list_builtins",
    "load_automaton",
    "parse",
    "serialize",
    "validate",

    # Graph and weight analysis
    "check_well_formed",
    "find_disclosing_cycle",
    "find_leaking_cycle",
    "find_leaking_pair",
    "find_privacy_violating_path",
    "cost",
    "critical_transitions",
    "weight",
    "weight_report",

    # Path semantics
    "adjacent",
    "branch_partition_check",
    "check_path",
    "equivalent",
    "pathprob_exact",
    "spot_check",
    "pathprob_mc",
    "run_mechanism",

    # Witnesses
    "gen_disclosing_cycle_pair",
    "gen_leaking_cycle_pair",
    "gen_leaking_pair_pair",
    "gen_violating_path_pair",
    "generate_pair",
    "ratio_report",
    "refute",
]
