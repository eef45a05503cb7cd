"""
Adaptation properties
Bounded Adaptation and Eventual Adaptation decided over explored state graphs.
"""

import logging
import math
from typing import Dict, List, Optional, Set

import networkx as nx

from .lts import StateGraph
from .process import Barb, format_barb
from .verdict import Verdict

logger = logging.getLogger(__name__)


def error_states(g: StateGraph, error: Barb) -> Set[int]:
    return {s for s in range(len(g.states)) if error in g.barbs[s]}


def _error_cycle_states(error_graph: nx.DiGraph) -> Set[int]:
    """States lying on a cycle made only of error states"""
    cyclic: Set[int] = set()
    for component in nx.strongly_connected_components(error_graph):
        if len(component) > 1:
            cyclic |= component
        else:
            state = next(iter(component))
            if error_graph.has_edge(state, state):
                cyclic.add(state)
    return cyclic


def error_runs(g: StateGraph, error: Barb) -> Dict[int, float]:
    """
    Longest number of consecutive error states on a path starting at each
    error state; infinite when an error-only cycle is reachable through errors.
    """
    errors = error_states(g, error)
    error_graph = g.to_networkx().subgraph(errors)
    cyclic = _error_cycle_states(error_graph)
    condensed = nx.condensation(error_graph)
    mapping = condensed.graph["mapping"]

    component_run: Dict[int, float] = {}
    for component in reversed(list(nx.topological_sort(condensed))):
        members = condensed.nodes[component]["members"]
        if members & cyclic:
            component_run[component] = math.inf
            continue
        best = max((component_run[nxt] for nxt in condensed.successors(component)), default=0)
        component_run[component] = 1 + best
    return {state: component_run[mapping[state]] for state in errors}


def _root_path(g: StateGraph, goal: int) -> List[int]:
    return nx.shortest_path(g.to_networkx(), g.root, goal)


def _closest(g: StateGraph, candidates: Set[int]) -> Optional[int]:
    if not candidates:
        return None
    lengths = nx.single_source_shortest_path_length(g.to_networkx(), g.root)
    reachable = [c for c in candidates if c in lengths]
    if not reachable:
        return None
    return min(reachable, key=lambda c: (lengths[c], c))


def check_BA(g: StateGraph, error: Barb, k: int) -> Verdict:
    """
    Bounded Adaptation: no computation traverses k+1 consecutive error states.

    Args:
        g: Explored state graph
        error: Error barb
        k: Maximum tolerated number of consecutive error states

    Returns:
        Verdict; a violation witness is a root path ending in k+1 error states
    """
    if k < 0:
        raise ValueError("k must be non-negative")

    name = f"BA({format_barb(error)}, k={k})"
    runs = error_runs(g, error)
    error_graph = g.to_networkx().subgraph(runs.keys())
    start = _closest(g, {s for s, run in runs.items() if run >= k + 1})

    if start is not None:
        witness = _root_path(g, start)
        current, needed = start, k
        while needed > 0:
            current = min(t for t in error_graph.successors(current) if runs[t] >= needed)
            witness.append(current)
            needed -= 1
        run = runs[start]
        detail = "an error-only cycle" if math.isinf(run) else f"{int(run)} consecutive error states"
        logger.info(f"{name} violated: {detail} reachable")
        return Verdict(
            property=name,
            status="violated",
            witness=witness,
            reason=f"computation with {detail}",
            states_explored=len(g.states),
            complete=g.complete,
            bounds=g.bounds(),
        )

    if not g.complete:
        logger.warning(f"{name} unknown: exploration stopped at {g.bounds_hit}")
        return Verdict(
            property=name,
            status="unknown",
            reason="no violation among explored states, exploration incomplete",
            states_explored=len(g.states),
            complete=False,
            bounds=g.bounds(),
        )

    return Verdict(
        property=name,
        status="holds",
        reason=f"every computation has at most {k} consecutive error states",
        states_explored=len(g.states),
        complete=True,
        bounds=g.bounds(),
    )


def check_EA(g: StateGraph, error: Barb) -> Verdict:
    """
    Eventual Adaptation: no maximal computation is eventually always erroneous.

    Error-only cycles and deadlocked error states both violate the property.
    """
    name = f"EA({format_barb(error)})"
    errors = error_states(g, error)
    error_graph = g.to_networkx().subgraph(errors)
    cyclic = _error_cycle_states(error_graph)
    stuck = errors & set(g.deadlocks())

    start = _closest(g, cyclic | stuck)
    if start is not None:
        witness = _root_path(g, start)
        if start in cyclic:
            if error_graph.has_edge(start, start):
                witness.append(start)
                reason = "error state with a tau self-loop"
            else:
                scc = next(c for c in nx.strongly_connected_components(error_graph) if start in c)
                loop_graph = error_graph.subgraph(scc)
                following = min(loop_graph.successors(start))
                witness.extend(nx.shortest_path(loop_graph, following, start))
                reason = "error-only cycle"
        else:
            reason = "deadlocked error state"
        logger.info(f"{name} violated: {reason}")
        return Verdict(
            property=name,
            status="violated",
            witness=witness,
            reason=reason,
            states_explored=len(g.states),
            complete=g.complete,
            bounds=g.bounds(),
        )

    if not g.complete:
        logger.warning(f"{name} unknown: exploration stopped at {g.bounds_hit}")
        return Verdict(
            property=name,
            status="unknown",
            reason="no violation among explored states, exploration incomplete",
            states_explored=len(g.states),
            complete=False,
            bounds=g.bounds(),
        )

    return Verdict(
        property=name,
        status="holds",
        reason="every error state eventually leads to a correct state",
        states_explored=len(g.states),
        complete=True,
        bounds=g.bounds(),
    )
