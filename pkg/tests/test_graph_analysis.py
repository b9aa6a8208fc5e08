"""
Tests for the structural violation finders and the well-formedness verdict
"""

from fractions import Fraction

import pytest

from src.models.automaton import Guard, TransitionRef
from src.models.verdict import PathDirection, PrivacyClause, ViolationKind
from src.services.automaton_service import builtin, rename_states, validate
from src.services.graph_analysis import (
    analyze,
    build_graph,
    check_well_formed,
    cycle_flags,
    find_disclosing_cycle,
    find_leaking_cycle,
    find_leaking_pair,
    find_privacy_violating_path,
    scc,
)

from tests.conftest import NOT_WELL_FORMED, WELL_FORMED


def ref(source, guard, target):
    return TransitionRef(source, Guard(guard), target)


def guarded_output_document(guard: str, assign: bool):
    """q1 leaves on `guard` releasing s into a state with a Ge self-loop"""
    return {
        "name": f"output_{guard}_{'assign' if assign else 'plain'}",
        "init": "q0",
        "states": [
            {"id": "q0", "kind": "noninput", "d": "1/2", "mu": "0"},
            {"id": "q1", "kind": "input", "d": "1/4", "mu": "0"},
            {"id": "q2", "kind": "input", "d": "1/4", "mu": "0"},
        ],
        "transitions": [
            {"from": "q0", "guard": "true", "to": "q1", "output": {"sym": "bot"}, "assign": True},
            {"from": "q1", "guard": guard, "to": "q2", "output": {"var": "sample"}, "assign": assign},
            {"from": "q2", "guard": "ge", "to": "q2", "output": {"sym": "top"}, "assign": False},
        ],
    }


def assert_legal_walk(a, witness):
    walk = witness.walk()
    assert walk[0].source == a.init
    for here, there in zip(walk, walk[1:]):
        assert here.target == there.source
    for r in walk:
        assert a.transition(r) is not None


class TestGraph:
    def test_vertices_follow_sorted_ids(self, svt):
        g = build_graph(svt)
        assert g.vertices == ("q0", "q1", "q2")
        assert g.init == 0
        assert all(g.reachable)

    def test_unreachable_state(self, raw_document):
        document = raw_document("svt")
        document["states"].append({"id": "u", "kind": "input", "d": "1/4", "mu": "0"})
        g = build_graph(validate(document))
        assert not g.is_reachable("u")
        assert g.is_reachable("q2")

    def test_scc_in_topological_order(self, svt_two_phase):
        g = build_graph(svt_two_phase)
        s = scc(g)
        order = {v: c for c, block in enumerate(s.components) for v in block}
        for e in s.dag_edges:
            edge = g.edges[e]
            assert order[edge.source] < order[edge.target]

    def test_cycle_flags(self, svt_two_phase):
        g = build_graph(svt_two_phase)
        flags = cycle_flags(g, scc(g))
        at = g.index
        assert flags.in_l_cycle[at["q1"]] and not flags.in_g_cycle[at["q1"]]
        assert flags.in_g_cycle[at["q2"]] and not flags.in_l_cycle[at["q2"]]
        assert not flags.in_l_cycle[at["q3"]]
        on_cycle = {g.edges[e].ref for e in range(len(g.edges)) if flags.on_cycle[e]}
        assert on_cycle == {ref("q1", "lt", "q1"), ref("q2", "ge", "q2")}


class TestVerdicts:
    @pytest.mark.parametrize("name, expected", [("svt", Fraction(1)), ("numeric_sparse", Fraction(1))])
    def test_well_formed_builtins(self, name, expected):
        verdict = check_well_formed(builtin(name))
        assert verdict.is_well_formed
        assert verdict.weight == expected
        assert verdict.to_dict() == {"status": "well_formed", "weight": "1"}

    @pytest.mark.parametrize("name, kind", [
        ("sort", ViolationKind.LEAKING_CYCLE),
        ("svt_two_phase", ViolationKind.LEAKING_PAIR),
        ("numeric_sparse_mod", ViolationKind.PRIVACY_VIOLATING_PATH),
    ])
    def test_violating_builtins(self, name, kind):
        verdict = check_well_formed(builtin(name))
        assert not verdict.is_well_formed
        assert verdict.witness.kind is kind

    def test_sort_leaking_cycle(self, sort_automaton):
        witness = check_well_formed(sort_automaton).witness
        loop = ref("q1", "lt", "q1")
        assert witness.cycle == (loop, loop)
        assert witness.marks == (0, 1)
        assert witness.prefix == (ref("q0", "true", "q1"),)

    def test_svt_two_phase_leaking_pair(self, svt_two_phase):
        witness = check_well_formed(svt_two_phase).witness
        assert witness.direction is PathDirection.AG
        assert witness.cycle == (ref("q1", "lt", "q1"),)
        assert witness.connector == (ref("q1", "ge", "q2"),)
        assert witness.second_cycle == (ref("q2", "ge", "q2"),)

    def test_disclosing_cycle(self, mutant_svt):
        witness = check_well_formed(mutant_svt).witness
        assert witness.kind is ViolationKind.DISCLOSING_CYCLE
        assert witness.offending == ref("q1", "lt", "q1")
        assert witness.cycle == (ref("q1", "lt", "q1"),)
        assert witness.marks == (0,)

    def test_numeric_sparse_mod_cycle_then_output(self, numeric_sparse_mod):
        witness = check_well_formed(numeric_sparse_mod).witness
        assert witness.clause is PrivacyClause.CYCLE_TO_OUTPUT
        assert witness.direction is PathDirection.AG
        assert witness.path == (ref("q1", "ge", "q2"),)
        assert witness.cycle == (ref("q1", "lt", "q1"),)
        assert witness.offending == ref("q1", "ge", "q2")
        assert witness.marks == (0,)

    def test_assignment_output_into_cycle(self):
        witness = check_well_formed(validate(guarded_output_document("ge", assign=True))).witness
        assert witness.kind is ViolationKind.PRIVACY_VIOLATING_PATH
        assert witness.clause is PrivacyClause.ASSIGNMENT_OUTPUT
        assert witness.direction is PathDirection.AG
        assert witness.path == (ref("q1", "ge", "q2"),)
        assert witness.cycle == (ref("q2", "ge", "q2"),)

    def test_guarded_output_into_cycle(self):
        witness = check_well_formed(validate(guarded_output_document("lt", assign=False))).witness
        assert witness.clause is PrivacyClause.GUARDED_OUTPUT
        assert witness.direction is PathDirection.AG
        assert witness.offending == ref("q1", "lt", "q2")

    def test_ge_output_into_g_cycle_is_harmless(self):
        verdict = check_well_formed(validate(guarded_output_document("ge", assign=False)))
        assert verdict.is_well_formed

    def test_unreachable_leak_is_ignored(self, raw_document):
        document = raw_document("svt")
        document["states"].append({"id": "u", "kind": "input", "d": "1/4", "mu": "0"})
        document["transitions"].append(
            {"from": "u", "guard": "lt", "to": "u", "output": {"sym": "bot"}, "assign": True})
        verdict = check_well_formed(validate(document))
        assert verdict.is_well_formed
        assert verdict.weight == 1


class TestFinderOrder:
    def test_each_finder_in_isolation(self, svt_two_phase):
        analysis = analyze(svt_two_phase)
        g, s, flags = analysis.graph, analysis.scc, analysis.flags
        assert find_leaking_cycle(g, s) is None
        assert find_leaking_pair(g, s, flags) is not None
        assert find_disclosing_cycle(g, s) is None
        assert find_privacy_violating_path(g, s, flags) is None

    @pytest.mark.parametrize("name", WELL_FORMED)
    def test_no_finder_fires_on_well_formed(self, name):
        analysis = analyze(builtin(name))
        g, s, flags = analysis.graph, analysis.scc, analysis.flags
        assert find_leaking_cycle(g, s) is None
        assert find_leaking_pair(g, s, flags) is None
        assert find_disclosing_cycle(g, s) is None
        assert find_privacy_violating_path(g, s, flags) is None


class TestWitnessShape:
    @pytest.mark.parametrize("name", NOT_WELL_FORMED)
    def test_witness_is_a_legal_walk(self, name):
        a = builtin(name)
        assert_legal_walk(a, check_well_formed(a).witness)

    def test_mutant_witness_is_a_legal_walk(self, mutant_svt):
        assert_legal_walk(mutant_svt, check_well_formed(mutant_svt).witness)

    @pytest.mark.parametrize("name", NOT_WELL_FORMED)
    def test_verdict_is_deterministic(self, name):
        assert check_well_formed(builtin(name)) == check_well_formed(builtin(name))

    @pytest.mark.parametrize("name", NOT_WELL_FORMED + WELL_FORMED)
    def test_renaming_keeps_verdict(self, name):
        a = builtin(name)
        mapping = {s: f"state_{s}" for s in a.state_ids}
        original, renamed = check_well_formed(a), check_well_formed(rename_states(a, mapping))
        assert original.is_well_formed == renamed.is_well_formed
        assert original.weight == renamed.weight
        if not original.is_well_formed:
            assert original.witness.kind is renamed.witness.kind

    def test_witness_serializes(self, svt_two_phase):
        payload = check_well_formed(svt_two_phase).to_dict()
        assert payload["status"] == "violation"
        assert payload["witness"]["kind"] == "leaking_pair"
        assert payload["witness"]["direction"] == "ag"
        assert payload["witness"]["path"] == [{"from": "q1", "guard": "ge", "to": "q2"}]


class TestChains:
    @pytest.mark.parametrize("gadgets", [1, 3, 12])
    def test_chain_weight_counts_gadgets(self, svt_chain, gadgets):
        verdict = check_well_formed(svt_chain(gadgets))
        assert verdict.is_well_formed
        assert verdict.weight == gadgets

    def test_deep_chain_has_no_recursion_limit(self, svt_chain):
        assert check_well_formed(svt_chain(1500)).weight == 1500
