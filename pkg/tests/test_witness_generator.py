"""
Tests for concrete witness pairs and their probability ratios
"""

import math

import pytest

from src.errors import InvalidRepetition, WrongWitnessKind
from src.models.verdict import ViolationKind
from src.services.automaton_service import builtin
from src.services.graph_analysis import check_well_formed
from src.services.path_semantics import adjacent, equivalent, pathprob_exact
from src.services.witness_generator import (
    gen_disclosing_cycle_pair,
    gen_leaking_cycle_pair,
    gen_violating_path_pair,
    generate_pair,
    ratio_report,
)

from tests.conftest import NOT_WELL_FORMED


def witness_of(a):
    return check_well_formed(a).witness


def ratio(a, pair, eps):
    entry, = ratio_report(a, pair, [eps])
    return entry.ratio


class TestPairShape:
    @pytest.mark.parametrize("ell", [1, 2, 5])
    @pytest.mark.parametrize("name", NOT_WELL_FORMED)
    def test_pairs_are_adjacent_equivalent_and_possible(self, name, ell):
        a = builtin(name)
        pair = generate_pair(a, witness_of(a), ell)
        assert adjacent(pair.rho1.inseq, pair.rho2.inseq)
        assert equivalent(pair.rho1, pair.rho2)
        assert pathprob_exact(a, 1.0, 0.0, pair.rho1).value > 0
        assert pathprob_exact(a, 1.0, 0.0, pair.rho2).value > 0

    def test_sort_inputs(self, sort_automaton):
        pair = gen_leaking_cycle_pair(sort_automaton, witness_of(sort_automaton), 2)
        assert pair.rho1.inseq == [0.0, -1.0, -2.0, -3.0, -4.0]
        assert pair.rho2.inseq == [0.0, -2.0, -1.0, -4.0, -3.0]

    def test_svt_two_phase_inputs(self, svt_two_phase):
        pair = generate_pair(svt_two_phase, witness_of(svt_two_phase), 3)
        assert pair.kind is ViolationKind.LEAKING_PAIR
        assert pair.rho1.inseq == [None, -0.5, -0.5, -0.5, 0.0, 0.5, 0.5, 0.5]
        assert pair.rho2.inseq == [None, 0.5, 0.5, 0.5, 0.0, -0.5, -0.5, -0.5]

    def test_printed_style_inputs(self, numeric_sparse_mod):
        pair = gen_violating_path_pair(numeric_sparse_mod, witness_of(numeric_sparse_mod), 3, style="printed")
        assert pair.rho1.inseq == [None, -0.5, -0.5, -0.5, 0.0]
        assert pair.rho2.inseq == [None, 0.5, 0.5, 0.5, 0.0]
        last = pair.rho1.steps[-1].observed
        assert (last.lo, last.hi) == (0.0, math.inf)

    def test_tail_style_inputs(self, numeric_sparse_mod):
        pair = gen_violating_path_pair(numeric_sparse_mod, witness_of(numeric_sparse_mod), 3)
        assert pair.rho1.inseq == [None, 0.0, 0.0, 0.0, 0.0]
        assert pair.rho2.inseq == [None, 1.0, 1.0, 1.0, 0.0]
        last = pair.rho2.steps[-1].observed
        assert (last.lo, last.hi) == (-math.inf, 0.0)

    def test_pair_serializes(self, svt_two_phase):
        pair = generate_pair(svt_two_phase, witness_of(svt_two_phase), 1)
        payload = pair.with_report(ratio_report(svt_two_phase, pair, [1.0], d=1)).to_dict("svt_two_phase")
        assert payload["kind"] == "leaking_pair"
        assert payload["rho1"]["automaton"] == "svt_two_phase"
        assert payload["ratios"][0]["threshold"] == pytest.approx(math.e)


class TestRatios:
    @pytest.mark.parametrize("ell", [1, 2, 4])
    @pytest.mark.parametrize("eps", [1.0, 2.0])
    def test_disclosing_cycle_ratio_is_exact(self, mutant_svt, ell, eps):
        pair = gen_disclosing_cycle_pair(mutant_svt, witness_of(mutant_svt), ell)
        assert ratio(mutant_svt, pair, eps) == pytest.approx(math.exp(ell * eps / 4), rel=1e-9)

    @pytest.mark.parametrize("ell", [1, 2, 4])
    @pytest.mark.parametrize("eps", [1.0, 2.0])
    def test_tail_style_ratio_is_exact(self, numeric_sparse_mod, ell, eps):
        pair = gen_violating_path_pair(numeric_sparse_mod, witness_of(numeric_sparse_mod), ell)
        expected = math.exp(ell * eps * 2 / 9)
        assert ratio(numeric_sparse_mod, pair, eps) == pytest.approx(expected, rel=1e-6)

    @pytest.mark.parametrize("ell", [1, 2, 4])
    @pytest.mark.parametrize("eps", [1.0, 2.0])
    def test_leaking_pair_ratio_lower_bound(self, svt_two_phase, ell, eps):
        pair = generate_pair(svt_two_phase, witness_of(svt_two_phase), ell)
        assert ratio(svt_two_phase, pair, eps) >= math.exp(ell * eps / 4) * (1 - 1e-9)

    def test_leaking_cycle_ratio_grows(self, sort_automaton):
        witness = witness_of(sort_automaton)
        short = ratio(sort_automaton, gen_leaking_cycle_pair(sort_automaton, witness, 1), 8.0)
        long = ratio(sort_automaton, gen_leaking_cycle_pair(sort_automaton, witness, 4), 8.0)
        assert long > short > 1.0

    def test_report_has_one_entry_per_eps(self, svt_two_phase):
        pair = generate_pair(svt_two_phase, witness_of(svt_two_phase), 2)
        entries = ratio_report(svt_two_phase, pair, [1.0, 2.0, 4.0], d=1)
        assert [e.eps for e in entries] == [1.0, 2.0, 4.0]
        assert all(e.ell == 2 for e in entries)
        assert all(e.threshold == pytest.approx(math.exp(e.eps)) for e in entries)

    def test_report_without_threshold(self, svt_two_phase):
        pair = generate_pair(svt_two_phase, witness_of(svt_two_phase), 1)
        entry, = ratio_report(svt_two_phase, pair, [1.0])
        assert entry.threshold is None
        assert entry.exceeds is None


class TestErrors:
    def test_wrong_kind(self, svt_two_phase, sort_automaton):
        with pytest.raises(WrongWitnessKind):
            gen_leaking_cycle_pair(svt_two_phase, witness_of(svt_two_phase), 1)
        with pytest.raises(WrongWitnessKind):
            gen_violating_path_pair(sort_automaton, witness_of(sort_automaton), 1)

    def test_zero_repetitions(self, sort_automaton):
        with pytest.raises(InvalidRepetition):
            generate_pair(sort_automaton, witness_of(sort_automaton), 0)

    def test_unknown_style(self, numeric_sparse_mod):
        with pytest.raises(ValueError):
            gen_violating_path_pair(numeric_sparse_mod, witness_of(numeric_sparse_mod), 1, style="bold")
