"""
Tests for the refutation search
"""

import math
from fractions import Fraction

import pytest

from src.errors import AutomatonIsWellFormed, InvalidRepetition, NonPositiveEpsilon
from src.models.witness import Inconclusive, Refutation
from src.services.automaton_service import builtin
from src.services.path_semantics import adjacent, equivalent
from src.services.refutation import refute, repetition_schedule


class TestSchedule:
    @pytest.mark.parametrize("ell_max, expected", [
        (1, [1]),
        (5, [1, 2, 4]),
        (64, [1, 2, 4, 8, 16, 32, 64]),
    ])
    def test_powers_of_two(self, ell_max, expected):
        assert repetition_schedule(ell_max) == expected

    def test_rejects_zero(self):
        with pytest.raises(InvalidRepetition):
            repetition_schedule(0)


class TestRefute:
    def test_svt_two_phase_is_not_eps_private(self, svt_two_phase):
        outcome = refute(svt_two_phase, 1, eps_grid=(1.0, 2.0, 4.0), ell_max=16, mc_samples=0)
        assert isinstance(outcome, Refutation)
        assert outcome.hit.ell <= 8
        assert outcome.hit.exceeds
        assert outcome.confirmation is None
        assert outcome.pair.ell == outcome.hit.ell
        assert outcome.d == Fraction(1)
        assert outcome.searched[-1] in outcome.pair.ratio_report

    def test_numeric_sparse_mod_is_not_eps_private(self, numeric_sparse_mod):
        outcome = refute(numeric_sparse_mod, 1, eps_grid=(1.0,), ell_max=8, mc_samples=0)
        assert outcome.status == "refuted"
        assert outcome.hit.ell == 8

    @pytest.mark.slow
    def test_sort_refutation(self, sort_automaton):
        outcome = refute(sort_automaton, Fraction(1, 2), eps_grid=(4.0, 8.0), ell_max=4, mc_samples=0)
        assert outcome.status == "refuted"

    @pytest.mark.slow
    @pytest.mark.parametrize("name, d", [("sort", 2), ("svt_two_phase", 1)])
    def test_default_grid_refutes_within_ell_max(self, name, d):
        outcome = refute(builtin(name), d, eps_grid=(1.0, 2.0, 4.0, 8.0), ell_max=64, mc_samples=0)
        assert isinstance(outcome, Refutation)
        assert outcome.hit.ell <= 64
        assert outcome.hit.ratio > math.exp(d * outcome.hit.eps)
        pair = outcome.pair
        assert adjacent(pair.rho1.inseq, pair.rho2.inseq)
        assert equivalent(pair.rho1, pair.rho2)

    @pytest.mark.slow
    def test_hit_is_confirmed_by_simulation(self, mutant_svt):
        outcome = refute(mutant_svt, Fraction(3, 4), eps_grid=(2.0,), ell_max=8, mc_samples=200_000, seed=3)
        assert outcome.hit.ell == 4
        assert outcome.status == "refuted"
        assert outcome.confirmation.confirmed
        assert not outcome.confirmation.rare_event

    def test_search_can_be_inconclusive(self, sort_automaton):
        outcome = refute(sort_automaton, 50, eps_grid=(1.0, 2.0), ell_max=2, mc_samples=0)
        assert isinstance(outcome, Inconclusive)
        assert len(outcome.searched) == 4
        assert outcome.best in outcome.searched
        assert outcome.to_dict()["status"] == "inconclusive"

    def test_well_formed_automata_cannot_be_refuted(self, svt):
        with pytest.raises(AutomatonIsWellFormed):
            refute(svt, 1, mc_samples=0)

    @pytest.mark.parametrize("grid", [(), (1.0, 0.0), (-2.0,)])
    def test_rejects_bad_eps_grids(self, sort_automaton, grid):
        with pytest.raises(NonPositiveEpsilon):
            refute(sort_automaton, 1, eps_grid=grid, mc_samples=0)

    def test_refutation_serializes(self, svt_two_phase):
        payload = refute(svt_two_phase, 1, eps_grid=(4.0,), ell_max=16, mc_samples=0).to_dict("svt_two_phase")
        assert payload["status"] == "refuted"
        assert payload["d"] == "1"
        assert payload["confirmation"] is None
        assert payload["pair"]["kind"] == "leaking_pair"
