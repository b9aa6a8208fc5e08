"""
Strongly connected components
Iterative Tarjan over an integer adjacency list, no recursion limit
"""

from typing import List, Sequence

_BEGIN, _CONTINUE, _RETURN = 0, 1, 2


def strongly_connected_components(successors: Sequence[Sequence[int]]) -> List[List[int]]:
    """Partition nodes 0..n-1 into SCCs.

    `successors[u]` lists the successors of node u. The SCCs are returned in
    topological order of the condensation: every edge between two different
    components goes from an earlier block to a later one. Roots are visited in
    increasing node order and successors in list order, so the result is
    deterministic for a given adjacency list.
    """
    count = len(successors)
    index = [-1] * count
    lowlink = [0] * count
    on_stack = [False] * count
    stack: List[int] = []
    sccs: List[List[int]] = []
    counter = 0

    for root in range(count):
        if index[root] != -1:
            continue
        work = [(root, 0, _BEGIN)]
        while work:
            v, succ_index, state = work.pop()

            if state == _BEGIN:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
                work.append((v, 0, _CONTINUE))
                continue

            if state == _RETURN:
                w = successors[v][succ_index]
                lowlink[v] = min(lowlink[v], lowlink[w])
                succ_index += 1

            # _CONTINUE (or resumed after _RETURN)
            out = successors[v]
            while succ_index < len(out):
                w = out[succ_index]
                if index[w] == -1:
                    work.append((v, succ_index, _RETURN))
                    work.append((w, 0, _BEGIN))
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
                succ_index += 1
            else:
                if lowlink[v] == index[v]:
                    block = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        block.append(w)
                        if w == v:
                            break
                    block.sort()
                    sccs.append(block)

    sccs.reverse()
    return sccs
