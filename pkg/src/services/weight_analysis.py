"""
Weight analysis for dipcheck
Exact transition costs and the privacy-budget multiplier weight(A)
"""

from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional

from src.config.logging_config import get_logger
from src.models.automaton import DipAutomaton, OutputKind, TransitionDecl, TransitionRef
from src.models.verdict import CostedTransition, WeightReport
from src.services.graph_analysis import GraphAnalysis, SccDecomposition, UnderlyingGraph, analyze

logger = get_logger(__name__)


def critical_transitions(a: DipAutomaton, scc: Optional[SccDecomposition] = None,
                         graph: Optional[UnderlyingGraph] = None) -> FrozenSet[TransitionRef]:
    """Transitions lying on no cycle, i.e. joining two different SCCs"""
    if scc is None or graph is None:
        analysis = analyze(a)
        graph, scc = analysis.graph, analysis.scc
    return frozenset(graph.edges[e].ref for e in scc.dag_edges)


def _critical_cost(t: TransitionDecl, a: DipAutomaton) -> Fraction:
    state = a.state(t.source)
    params = state.params
    if not state.is_input:
        return params.d
    if t.output.kind is OutputKind.SAMPLE_AUX:
        return 2 * params.d + params.d_aux
    return 2 * params.d


def cost(t: TransitionDecl, a: DipAutomaton, critical: Optional[FrozenSet[TransitionRef]] = None) -> Fraction:
    if critical is None:
        critical = critical_transitions(a)
    if t.ref not in critical:
        return Fraction(0)
    return _critical_cost(t, a)


def _longest_path(a: DipAutomaton, analysis: GraphAnalysis, restrict_to_reachable: bool) -> Fraction:
    g, s = analysis.graph, analysis.scc
    count = len(s.components)

    best: List[Optional[Fraction]] = [None] * count
    if restrict_to_reachable:
        best[s.component[g.init]] = Fraction(0)
    else:
        best = [Fraction(0)] * count

    outgoing: Dict[int, List[int]] = {}
    for e in s.dag_edges:
        outgoing.setdefault(s.component[g.edges[e].source], []).append(e)

    # components are in topological order, so every predecessor is settled first
    for c in range(count):
        if best[c] is None:
            continue
        for e in outgoing.get(c, ()):
            edge = g.edges[e]
            target = s.component[edge.target]
            candidate = best[c] + _critical_cost(a.transition(edge.ref), a)
            if best[target] is None or candidate > best[target]:
                best[target] = candidate

    return max(b for b in best if b is not None)


def weight(a: DipAutomaton, restrict_to_reachable: bool = True,
           analysis: Optional[GraphAnalysis] = None) -> Fraction:
    """Supremum of summed costs over paths, as a longest path in the condensation DAG"""
    if analysis is None:
        analysis = analyze(a)
    return _longest_path(a, analysis, restrict_to_reachable)


def weight_report(a: DipAutomaton) -> WeightReport:
    analysis = analyze(a)
    critical = critical_transitions(a, analysis.scc, analysis.graph)
    costs = tuple(
        CostedTransition(
            ref=t.ref,
            is_critical=t.ref in critical,
            cost=cost(t, a, critical),
            reachable=analysis.graph.is_reachable(t.source),
        )
        for t in a.transitions
    )
    report = WeightReport(
        weight=weight(a, analysis=analysis),
        unrestricted_weight=weight(a, restrict_to_reachable=False, analysis=analysis),
        costs=costs,
    )
    logger.debug(f"Weight of '{a.name}': {report.weight} (unrestricted {report.unrestricted_weight})")
    return report
