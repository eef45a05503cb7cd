"""
Labelled transition system of the E calculus
Derives transitions rule by rule and explores the tau-reachability graph
under state and depth bounds.
"""

import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Literal, Optional, Set, Tuple, Union

import networkx as nx
import pydot
from pydantic import BaseModel, ConfigDict, PrivateAttr

from .errors import PlaceholderLeak
from .process import (
    Barb,
    Input,
    Located,
    Output,
    Par,
    PLACEHOLDER,
    Prefix,
    Process,
    Repl,
    Sum,
    barbs,
    canonicalize,
    contains_placeholder,
    fill,
    format_barb,
    replace_placeholder,
    sort_key,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 100000


@dataclass(frozen=True)
class In:
    name: str


@dataclass(frozen=True)
class Out:
    name: str


@dataclass(frozen=True)
class Tau:
    pass


@dataclass(frozen=True)
class LocState:
    """A located process offers its current state"""
    name: str
    state: Process


@dataclass(frozen=True)
class UpdOffer:
    """An update prefix offers its pattern"""
    name: str
    pattern: Process


Label = Union[In, Out, Tau, LocState, UpdOffer]
TAU = Tau()


def _prefix_label(prefix: Prefix) -> Label:
    if isinstance(prefix, Input):
        return In(prefix.name)
    if isinstance(prefix, Output):
        return Out(prefix.name)
    return UpdOffer(prefix.name, prefix.pattern)


def _replace_at(parts: Tuple[Process, ...], index: int, new: Process) -> Tuple[Process, ...]:
    return parts[:index] + (new,) + parts[index + 1:]


@lru_cache(maxsize=65536)
def _derive(process: Process) -> Tuple[Tuple[Label, Process], ...]:
    """Raw derivations, targets not yet canonicalized"""
    if isinstance(process, Sum):
        return tuple((_prefix_label(prefix), body) for prefix, body in process.branches)

    if isinstance(process, Repl):
        return ((_prefix_label(process.prefix), Par((process.body, process))),)

    if isinstance(process, Located):
        # (Comp) then (Loc)
        derived = [(LocState(process.name, process.body), PLACEHOLDER)]
        for label, target in _derive(process.body):
            derived.append((label, Located(process.name, target)))
        return tuple(derived)

    if isinstance(process, Par):
        parts = process.parts
        per_part = [_derive(part) for part in parts]
        derived = []
        # (Act)
        for i, moves in enumerate(per_part):
            for label, target in moves:
                derived.append((label, Par(_replace_at(parts, i, target))))
        # (Tau1/2) and (Tau3/4)
        for i, moves_i in enumerate(per_part):
            for j, moves_j in enumerate(per_part):
                if i == j:
                    continue
                for label_i, target_i in moves_i:
                    for label_j, target_j in moves_j:
                        if isinstance(label_i, In) and isinstance(label_j, Out) and label_i.name == label_j.name:
                            synced = _replace_at(_replace_at(parts, i, target_i), j, target_j)
                            derived.append((TAU, Par(synced)))
                        elif (isinstance(label_i, LocState) and isinstance(label_j, UpdOffer)
                              and label_i.name == label_j.name):
                            updated = replace_placeholder(target_i, fill(label_j.pattern, label_i.state))
                            synced = _replace_at(_replace_at(parts, i, updated), j, target_j)
                            derived.append((TAU, Par(synced)))
        return tuple(derived)

    return ()


def transitions(process: Process) -> FrozenSet[Tuple[Label, Process]]:
    """
    All transitions derivable for a term, targets canonicalized.

    Located-state transitions keep the placeholder in their target; any other
    successor containing it raises PlaceholderLeak.
    """
    result = set()
    for label, target in _derive(process):
        canonical = canonicalize(target)
        if not isinstance(label, LocState) and contains_placeholder(canonical):
            from .printer import render_process
            raise PlaceholderLeak(render_process(canonical))
        result.add((label, canonical))
    return frozenset(result)


def tau_successors(process: Process) -> List[Process]:
    """Distinct canonical tau-successors in the total term order"""
    successors = {target for label, target in transitions(process) if isinstance(label, Tau)}
    return sorted(successors, key=sort_key)


class StateGraph(BaseModel):
    """Explored tau-reachability graph"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    states: List[Process]
    edges: List[Tuple[int, int]]
    barbs: List[FrozenSet[Barb]]
    depth: List[int]
    root: int = 0
    complete: bool
    bounds_hit: Literal["none", "max_states", "max_depth"] = "none"
    frontier: List[int] = []
    max_states: int
    max_depth: Optional[int] = None

    _graph: Optional[nx.DiGraph] = PrivateAttr(default=None)

    def to_networkx(self) -> nx.DiGraph:
        if self._graph is None:
            graph = nx.DiGraph()
            graph.add_nodes_from(range(len(self.states)))
            graph.add_edges_from(self.edges)
            self._graph = graph
        return self._graph

    def successors(self, state: int) -> List[int]:
        return sorted(self.to_networkx().successors(state))

    def predecessors(self, state: int) -> List[int]:
        return sorted(self.to_networkx().predecessors(state))

    def deadlocks(self) -> List[int]:
        """Fully expanded states without tau-successors"""
        frontier = set(self.frontier)
        graph = self.to_networkx()
        return [s for s in range(len(self.states)) if s not in frontier and graph.out_degree(s) == 0]

    def bounds(self) -> Dict[str, Optional[int]]:
        return {"max_states": self.max_states, "max_depth": self.max_depth}

    def to_json(self) -> Dict:
        from .printer import render_process
        return {
            "states": [
                {
                    "id": index,
                    "term": render_process(state),
                    "barbs": sorted(format_barb(barb) for barb in self.barbs[index]),
                }
                for index, state in enumerate(self.states)
            ],
            "edges": [[source, target] for source, target in self.edges],
            "root": self.root,
            "complete": self.complete,
            "bounds_hit": self.bounds_hit,
        }

    def to_dot(self) -> str:
        """DOT text: states labelled by term and barbs, tau edges unlabelled"""
        from .printer import render_process
        dot = pydot.Dot("lts", graph_type="digraph")
        dot.add_node(pydot.Node("init", label='""', shape="none", width="0"))
        for index, state in enumerate(self.states):
            barb_text = ", ".join(sorted(format_barb(barb) for barb in self.barbs[index]))
            label = f"{index}: {render_process(state)}\\n{{{barb_text}}}"
            shape = "doublecircle" if index in self.frontier else "box"
            dot.add_node(pydot.Node(str(index), label=f'"{label}"', shape=shape))
        dot.add_edge(pydot.Edge("init", str(self.root)))
        for source, target in self.edges:
            dot.add_edge(pydot.Edge(str(source), str(target)))
        return dot.to_string()


def explore(process: Process, max_states: int = DEFAULT_MAX_STATES,
            max_depth: Optional[int] = None, threads: int = 1) -> StateGraph:
    """
    Breadth-first exploration of tau-steps from the canonical form of `process`.

    States are numbered in discovery order with successors expanded in the
    total term order, so the graph does not depend on `threads`.

    Args:
        process: Initial term
        max_states: Maximum number of states kept
        max_depth: Maximum BFS depth expanded (None for unbounded)
        threads: Worker threads used to expand each BFS layer

    Returns:
        StateGraph with an honest completeness flag
    """
    if max_states < 1:
        raise ValueError("max_states must be at least 1")

    root = canonicalize(process)
    states: List[Process] = [root]
    index: Dict[Process, int] = {root: 0}
    depth: List[int] = [0]
    edges: Set[Tuple[int, int]] = set()
    frontier: Set[int] = set()
    states_hit = False
    depth_hit = False

    logger.info(f"Exploring from root with max_states={max_states}, max_depth={max_depth}, threads={threads}")

    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        layer = deque([0])
        while layer:
            current = list(layer)
            layer.clear()
            terms = [states[s] for s in current]
            if executor is not None:
                expansions = list(executor.map(tau_successors, terms))
            else:
                expansions = [tau_successors(term) for term in terms]

            for state, successors in zip(current, expansions):
                if max_depth is not None and depth[state] >= max_depth:
                    if successors:
                        frontier.add(state)
                        depth_hit = True
                    continue
                for successor in successors:
                    target = index.get(successor)
                    if target is None:
                        if len(states) >= max_states:
                            frontier.add(state)
                            states_hit = True
                            continue
                        target = len(states)
                        index[successor] = target
                        states.append(successor)
                        depth.append(depth[state] + 1)
                        layer.append(target)
                    edges.add((state, target))
    finally:
        if executor is not None:
            executor.shutdown()

    bounds_hit = "max_states" if states_hit else ("max_depth" if depth_hit else "none")
    complete = not frontier
    if complete:
        logger.info(f"Exploration complete: {len(states)} states, {len(edges)} edges")
    else:
        logger.warning(f"Exploration incomplete ({bounds_hit}): {len(states)} states, "
                       f"{len(frontier)} frontier states")

    return StateGraph(
        states=states,
        edges=sorted(edges),
        barbs=[barbs(state) for state in states],
        depth=depth,
        root=0,
        complete=complete,
        bounds_hit=bounds_hit,
        frontier=sorted(frontier),
        max_states=max_states,
        max_depth=max_depth,
    )
