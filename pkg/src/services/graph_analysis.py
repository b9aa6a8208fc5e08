"""
Graph analysis for dipcheck
Decides well-formedness in linear time via SCCs and BFS over restricted subgraphs
"""

from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from src.config.logging_config import get_logger, log_execution_time
from src.models.automaton import DipAutomaton, Guard, OutputKind, TransitionRef
from src.models.verdict import (
    PathDirection,
    PrivacyClause,
    Verdict,
    ViolationKind,
    ViolationWitness,
)
from src.tools.scc import strongly_connected_components

logger = get_logger(__name__)


@dataclass(frozen=True)
class Edge:
    index: int
    source: int
    target: int
    guard: Guard
    assign: bool
    output_kind: OutputKind
    from_input: bool
    ref: TransitionRef

    @property
    def in_ag(self) -> bool:
        """Kept in G_AG: assignments only when Ge-guarded"""
        return not self.assign or self.guard is Guard.GE

    @property
    def in_al(self) -> bool:
        """Kept in G_AL: assignments only when Lt-guarded"""
        return not self.assign or self.guard is Guard.LT

    @property
    def outputs_sample(self) -> bool:
        return self.output_kind is OutputKind.SAMPLE


@dataclass(frozen=True)
class UnderlyingGraph:
    """Edge-labeled graph of an automaton; vertices are indexed in sorted id order"""

    vertices: Tuple[str, ...]
    index: Dict[str, int]
    edges: Tuple[Edge, ...]
    out_edges: Tuple[Tuple[int, ...], ...]
    in_edges: Tuple[Tuple[int, ...], ...]
    init: int
    reachable: Tuple[bool, ...]

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    def is_reachable(self, state_id: str) -> bool:
        return self.reachable[self.index[state_id]]

    def refs(self, edge_ids: Iterable[int]) -> Tuple[TransitionRef, ...]:
        return tuple(self.edges[e].ref for e in edge_ids)


@dataclass(frozen=True)
class SccDecomposition:
    component: Tuple[int, ...]
    components: Tuple[Tuple[int, ...], ...]
    internal_edges: Tuple[Tuple[int, ...], ...]
    dag_edges: Tuple[int, ...]

    def is_internal(self, g: UnderlyingGraph, edge_id: int) -> bool:
        edge = g.edges[edge_id]
        return self.component[edge.source] == self.component[edge.target]


@dataclass(frozen=True)
class CycleFlags:
    in_l_cycle: Tuple[bool, ...]
    in_g_cycle: Tuple[bool, ...]
    on_cycle: Tuple[bool, ...]


def build_graph(a: DipAutomaton) -> UnderlyingGraph:
    vertices = tuple(a.state_ids)
    index = {v: i for i, v in enumerate(vertices)}

    edges = tuple(
        Edge(
            index=i,
            source=index[t.source],
            target=index[t.target],
            guard=t.guard,
            assign=t.assign,
            output_kind=t.output.kind,
            from_input=a.state(t.source).is_input,
            ref=t.ref,
        )
        for i, t in enumerate(a.transitions)
    )

    out_lists: List[List[int]] = [[] for _ in vertices]
    in_lists: List[List[int]] = [[] for _ in vertices]
    for e in edges:
        out_lists[e.source].append(e.index)
        in_lists[e.target].append(e.index)
    for lst in out_lists:
        lst.sort(key=lambda e: (edges[e].target, edges[e].guard.rank))
    for lst in in_lists:
        lst.sort(key=lambda e: (edges[e].source, edges[e].guard.rank))

    init = index[a.init]
    reachable = [False] * len(vertices)
    reachable[init] = True
    queue = deque([init])
    while queue:
        v = queue.popleft()
        for e in out_lists[v]:
            w = edges[e].target
            if not reachable[w]:
                reachable[w] = True
                queue.append(w)

    return UnderlyingGraph(
        vertices=vertices,
        index=index,
        edges=edges,
        out_edges=tuple(tuple(lst) for lst in out_lists),
        in_edges=tuple(tuple(lst) for lst in in_lists),
        init=init,
        reachable=tuple(reachable),
    )


def scc(g: UnderlyingGraph) -> SccDecomposition:
    successors = [[g.edges[e].target for e in g.out_edges[v]] for v in range(g.vertex_count)]
    blocks = strongly_connected_components(successors)

    component = [0] * g.vertex_count
    for c, block in enumerate(blocks):
        for v in block:
            component[v] = c

    internal: List[List[int]] = [[] for _ in blocks]
    dag_edges = []
    for e in g.edges:
        cs, ct = component[e.source], component[e.target]
        if cs == ct:
            internal[cs].append(e.index)
        else:
            dag_edges.append(e.index)

    return SccDecomposition(
        component=tuple(component),
        components=tuple(tuple(b) for b in blocks),
        internal_edges=tuple(tuple(lst) for lst in internal),
        dag_edges=tuple(dag_edges),
    )


def cycle_flags(g: UnderlyingGraph, s: SccDecomposition) -> CycleFlags:
    has_lt = [any(g.edges[e].guard is Guard.LT for e in edges) for edges in s.internal_edges]
    has_ge = [any(g.edges[e].guard is Guard.GE for e in edges) for edges in s.internal_edges]
    return CycleFlags(
        in_l_cycle=tuple(has_lt[s.component[v]] for v in range(g.vertex_count)),
        in_g_cycle=tuple(has_ge[s.component[v]] for v in range(g.vertex_count)),
        on_cycle=tuple(s.is_internal(g, e.index) for e in g.edges),
    )


# Walk reconstruction

def _bfs(g: UnderlyingGraph,
         sources: Iterable[int],
         allow: Callable[[Edge], bool],
         goal: Callable[[int], bool]) -> Optional[Tuple[int, List[int]]]:
    """Multi-source BFS; returns the first goal vertex and the edge path leading to it"""
    parent: Dict[int, Optional[int]] = {}
    queue = deque()
    for v in sources:
        if v not in parent:
            parent[v] = None
            queue.append(v)
    while queue:
        v = queue.popleft()
        if goal(v):
            return v, _unwind(g, parent, v)
        for e in g.out_edges[v]:
            edge = g.edges[e]
            if edge.target not in parent and allow(edge):
                parent[edge.target] = e
                queue.append(edge.target)
    return None


def _unwind(g: UnderlyingGraph, parent: Dict[int, Optional[int]], v: int) -> List[int]:
    path = []
    while parent[v] is not None:
        e = parent[v]
        path.append(e)
        v = g.edges[e].source
    path.reverse()
    return path


def _walk_within(g: UnderlyingGraph, s: SccDecomposition, start: int, goal: int) -> List[int]:
    """Shortest walk inside one SCC; smallest next-state id first"""
    c = s.component[start]
    found = _bfs(g, [start], lambda e: s.component[e.target] == c, lambda v: v == goal)
    if found is None:
        raise RuntimeError(f"{g.vertices[goal]} not reachable from {g.vertices[start]} inside its SCC")
    return found[1]


def _cycle_through(g: UnderlyingGraph, s: SccDecomposition, edge_id: int,
                   anchor: Optional[int] = None) -> List[int]:
    """A cycle containing `edge_id`, starting and ending at `anchor` (default its source)"""
    edge = g.edges[edge_id]
    start = edge.source if anchor is None else anchor
    return (_walk_within(g, s, start, edge.source)
            + [edge_id]
            + _walk_within(g, s, edge.target, start))


def _guarded_cycle(g: UnderlyingGraph, s: SccDecomposition, v: int, guard: Guard) -> Tuple[List[int], int]:
    """A cycle through v containing an internal edge with `guard`, and that edge's position"""
    edge_id = next(e for e in s.internal_edges[s.component[v]] if g.edges[e].guard is guard)
    cycle = _cycle_through(g, s, edge_id, anchor=v)
    return cycle, cycle.index(edge_id)


def _prefix(g: UnderlyingGraph, v: int) -> List[int]:
    found = _bfs(g, [g.init], lambda e: True, lambda w: w == v)
    if found is None:
        raise RuntimeError(f"{g.vertices[v]} is not reachable from the initial state")
    return found[1]


def _reachable_components(g: UnderlyingGraph, s: SccDecomposition) -> Iterable[int]:
    return (c for c, block in enumerate(s.components) if g.reachable[block[0]])


# Finders

def find_leaking_cycle(g: UnderlyingGraph, s: SccDecomposition) -> Optional[ViolationWitness]:
    """A reachable cycle with an assignment followed later by a non-trivial guard"""
    for c in _reachable_components(g, s):
        internal = s.internal_edges[c]
        assigning = [e for e in internal if g.edges[e].assign]
        guarded = [e for e in internal if not g.edges[e].guard.is_trivial]
        if not assigning or not guarded:
            continue

        ea, eg = assigning[0], guarded[0]
        first, second = g.edges[ea], g.edges[eg]
        if ea == eg:
            back = _walk_within(g, s, first.target, first.source)
            cycle = [ea] + back + [ea] + back
        else:
            cycle = ([ea] + _walk_within(g, s, first.target, second.source)
                     + [eg] + _walk_within(g, s, second.target, first.source))

        j = next(k for k in range(1, len(cycle)) if not g.edges[cycle[k]].guard.is_trivial)
        i = max(k for k in range(j) if g.edges[cycle[k]].assign)
        return ViolationWitness(
            kind=ViolationKind.LEAKING_CYCLE,
            prefix=g.refs(_prefix(g, first.source)),
            cycle=g.refs(cycle),
            marks=(i, j),
        )
    return None


def find_leaking_pair(g: UnderlyingGraph, s: SccDecomposition,
                      flags: CycleFlags) -> Optional[ViolationWitness]:
    """An L-cycle reaching a G-cycle by an AG-path, or a G-cycle reaching an L-cycle by an AL-path"""
    variants = (
        (PathDirection.AG, flags.in_l_cycle, flags.in_g_cycle, Guard.LT, Guard.GE, lambda e: e.in_ag),
        (PathDirection.AL, flags.in_g_cycle, flags.in_l_cycle, Guard.GE, Guard.LT, lambda e: e.in_al),
    )
    for direction, from_flags, to_flags, first_guard, second_guard, allow in variants:
        sources = [v for v in range(g.vertex_count) if g.reachable[v] and from_flags[v]]
        found = _bfs(g, sources, allow, lambda v: to_flags[v])
        if found is None:
            continue

        target, connector = found
        origin = g.edges[connector[0]].source if connector else target
        first, _ = _guarded_cycle(g, s, origin, first_guard)
        second, _ = _guarded_cycle(g, s, target, second_guard)
        return ViolationWitness(
            kind=ViolationKind.LEAKING_PAIR,
            prefix=g.refs(_prefix(g, origin)),
            cycle=g.refs(first),
            second_cycle=g.refs(second),
            connector=g.refs(connector),
            direction=direction,
        )
    return None


def find_disclosing_cycle(g: UnderlyingGraph, s: SccDecomposition) -> Optional[ViolationWitness]:
    """A reachable cycle with an input transition that outputs s or s'"""
    for c in _reachable_components(g, s):
        for e in s.internal_edges[c]:
            edge = g.edges[e]
            if edge.from_input and edge.output_kind is not OutputKind.FINITE:
                cycle = _cycle_through(g, s, e)
                return ViolationWitness(
                    kind=ViolationKind.DISCLOSING_CYCLE,
                    prefix=g.refs(_prefix(g, edge.source)),
                    cycle=g.refs(cycle),
                    offending=edge.ref,
                    marks=tuple(k for k, x in enumerate(cycle) if x == e),
                )
    return None


def _toward(g: UnderlyingGraph, targets: Sequence[bool],
            allow: Callable[[Edge], bool]) -> Dict[int, Optional[int]]:
    """Reverse BFS: for every vertex that reaches a target, the first edge of a shortest path"""
    step: Dict[int, Optional[int]] = {}
    queue = deque()
    for v in range(g.vertex_count):
        if targets[v]:
            step[v] = None
            queue.append(v)
    while queue:
        v = queue.popleft()
        for e in g.in_edges[v]:
            edge = g.edges[e]
            if edge.source not in step and allow(edge):
                step[edge.source] = e
                queue.append(edge.source)
    return step


def _from(g: UnderlyingGraph, sources: Sequence[bool],
          allow: Callable[[Edge], bool]) -> Dict[int, Optional[int]]:
    """Forward BFS parent edges from every reachable source vertex"""
    parent: Dict[int, Optional[int]] = {}
    queue = deque()
    for v in range(g.vertex_count):
        if sources[v] and g.reachable[v]:
            parent[v] = None
            queue.append(v)
    while queue:
        v = queue.popleft()
        for e in g.out_edges[v]:
            edge = g.edges[e]
            if edge.target not in parent and allow(edge):
                parent[edge.target] = e
                queue.append(edge.target)
    return parent


def _follow(g: UnderlyingGraph, step: Dict[int, Optional[int]], v: int) -> Tuple[List[int], int]:
    path = []
    while step[v] is not None:
        e = step[v]
        path.append(e)
        v = g.edges[e].target
    return path, v


def find_privacy_violating_path(g: UnderlyingGraph, s: SccDecomposition,
                                flags: CycleFlags) -> Optional[ViolationWitness]:
    """An AG-/AL-path joining a cycle and a transition that outputs s, in one of three shapes"""
    to_g_ag = _toward(g, flags.in_g_cycle, lambda e: e.in_ag)
    to_l_al = _toward(g, flags.in_l_cycle, lambda e: e.in_al)
    from_l_ag = _from(g, flags.in_l_cycle, lambda e: e.in_ag)
    from_g_al = _from(g, flags.in_g_cycle, lambda e: e.in_al)

    def into_cycle(edge: Edge, clause: PrivacyClause, direction: PathDirection,
                   step: Dict[int, Optional[int]], guard: Guard) -> ViolationWitness:
        rest, end = _follow(g, step, edge.target)
        cycle, mark = _guarded_cycle(g, s, end, guard)
        return ViolationWitness(
            kind=ViolationKind.PRIVACY_VIOLATING_PATH,
            prefix=g.refs(_prefix(g, edge.source)),
            path=g.refs([edge.index] + rest),
            cycle=g.refs(cycle),
            marks=(mark,),
            offending=edge.ref,
            clause=clause,
            direction=direction,
        )

    def out_of_cycle(edge: Edge, direction: PathDirection,
                     parent: Dict[int, Optional[int]], guard: Guard) -> ViolationWitness:
        lead = _unwind(g, parent, edge.source)
        origin = g.edges[lead[0]].source if lead else edge.source
        cycle, mark = _guarded_cycle(g, s, origin, guard)
        return ViolationWitness(
            kind=ViolationKind.PRIVACY_VIOLATING_PATH,
            prefix=g.refs(_prefix(g, origin)),
            path=g.refs(lead + [edge.index]),
            cycle=g.refs(cycle),
            marks=(mark,),
            offending=edge.ref,
            clause=PrivacyClause.CYCLE_TO_OUTPUT,
            direction=direction,
        )

    candidates = [e for e in g.edges if e.outputs_sample and g.reachable[e.source]]

    for edge in candidates:
        if edge.assign:
            if edge.target in to_g_ag:
                return into_cycle(edge, PrivacyClause.ASSIGNMENT_OUTPUT, PathDirection.AG, to_g_ag, Guard.GE)
            if edge.target in to_l_al:
                return into_cycle(edge, PrivacyClause.ASSIGNMENT_OUTPUT, PathDirection.AL, to_l_al, Guard.LT)

    for edge in candidates:
        if edge.assign:
            continue
        if edge.guard is Guard.LT and edge.target in to_g_ag:
            return into_cycle(edge, PrivacyClause.GUARDED_OUTPUT, PathDirection.AG, to_g_ag, Guard.GE)
        if edge.guard is Guard.GE and edge.target in to_l_al:
            return into_cycle(edge, PrivacyClause.GUARDED_OUTPUT, PathDirection.AL, to_l_al, Guard.LT)

    for edge in candidates:
        if edge.guard is Guard.GE and edge.source in from_l_ag:
            return out_of_cycle(edge, PathDirection.AG, from_l_ag, Guard.LT)
        if edge.guard is Guard.LT and edge.source in from_g_al:
            return out_of_cycle(edge, PathDirection.AL, from_g_al, Guard.GE)

    return None


@dataclass(frozen=True)
class GraphAnalysis:
    graph: UnderlyingGraph
    scc: SccDecomposition
    flags: CycleFlags


def analyze(a: DipAutomaton) -> GraphAnalysis:
    g = build_graph(a)
    s = scc(g)
    return GraphAnalysis(g, s, cycle_flags(g, s))


def find_violation(analysis: GraphAnalysis) -> Optional[ViolationWitness]:
    """First witness in the fixed order leaking cycle, leaking pair, disclosing cycle, violating path"""
    g, s, flags = analysis.graph, analysis.scc, analysis.flags
    return (find_leaking_cycle(g, s)
            or find_leaking_pair(g, s, flags)
            or find_disclosing_cycle(g, s)
            or find_privacy_violating_path(g, s, flags))


@log_execution_time
def check_well_formed(a: DipAutomaton) -> Verdict:
    from src.services.weight_analysis import weight

    analysis = analyze(a)
    witness = find_violation(analysis)
    if witness is not None:
        logger.info(f"Automaton '{a.name}' is not well-formed: {witness.kind.value}",
                    extra={"automaton": a.name})
        return Verdict.violation(witness)

    w = weight(a, analysis=analysis)
    logger.info(f"Automaton '{a.name}' is well-formed with weight {w}", extra={"automaton": a.name})
    return Verdict.well_formed(w)
