"""
Orchestrations and systems
Local terms of a single role, their semantics, the synchronous composition
of located orchestrations, correct composition and implementation checks.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Set, Tuple, Union

import networkx as nx

from .choreography import (
    Choice,
    Interaction,
    One,
    ONE,
    Parallel,
    Seq,
    Star,
    TICK,
    Tick,
    Zero,
    ZERO,
)
from .errors import DuplicateRole, RoleMismatch, SelfAddressedOutput, StateBound
from .logic import pred_star
from .verdict import Verdict

logger = logging.getLogger(__name__)

DEFAULT_SYSTEM_STATE_CAP = 200000


@dataclass(frozen=True)
class TauAction:
    """Internal action `tau`"""


@dataclass(frozen=True)
class Receive:
    """`a?`"""
    name: str


@dataclass(frozen=True)
class Send:
    """`a!r`"""
    name: str
    to: str


@dataclass(frozen=True)
class OScope:
    """`X[C]`, or `X[C]@A` once started"""
    name: str
    body: object
    active: bool = False


@dataclass(frozen=True)
class OUpdate:
    """`X{(r1,..,rn): C1,..,Cn}`: one replacement body per listed role"""
    name: str
    roles: Tuple[str, ...]
    bodies: Tuple[object, ...]


Orchestration = Union[One, Zero, TauAction, Receive, Send, Seq, Choice, Parallel, Star, OScope, OUpdate]
TAU_ACTION = TauAction()


@dataclass(frozen=True)
class System:
    """Parallel composition of orchestrations `[C]@r`, at most one per role"""
    members: Tuple[Tuple[str, Orchestration], ...]

    @property
    def roles(self) -> Tuple[str, ...]:
        return tuple(role for role, _ in self.members)

    def term_of(self, role: str) -> Orchestration:
        for member, term in self.members:
            if member == role:
                return term
        raise KeyError(role)

    def replace(self, updates: Dict[str, Orchestration]) -> "System":
        return System(tuple((role, updates.get(role, term)) for role, term in self.members))


# ---------------------------------------------------------------------------
# Labels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalTau:
    pass


@dataclass(frozen=True)
class LocalIn:
    name: str


@dataclass(frozen=True)
class LocalOut:
    name: str
    to: str


@dataclass(frozen=True)
class ScopeStart:
    scope: str


@dataclass(frozen=True)
class ScopeEnd:
    scope: str


@dataclass(frozen=True)
class LocalUpdate:
    scope: str
    roles: Tuple[str, ...]
    bodies: Tuple[object, ...]


LocalLabel = Union[LocalTau, LocalIn, LocalOut, Tick, ScopeStart, ScopeEnd, LocalUpdate]
LOCAL_TAU = LocalTau()


@dataclass(frozen=True)
class SysTau:
    """Internal system step; `detail` names scope synchronizations"""
    detail: str = ""


@dataclass(frozen=True)
class PendingIn:
    name: str
    role: str


@dataclass(frozen=True)
class PendingOut:
    name: str
    sender: str
    receiver: str


@dataclass(frozen=True)
class SysUpdate:
    scope: str
    role: str
    roles: Tuple[str, ...]
    bodies: Tuple[object, ...]


# A completed communication is labelled exactly like a choreography interaction
Completed = Interaction
SystemLabel = Union[SysTau, Tick, Interaction, PendingIn, PendingOut, SysUpdate]
SYS_TAU = SysTau()


# ---------------------------------------------------------------------------
# Orchestration semantics
# ---------------------------------------------------------------------------

@lru_cache(maxsize=65536)
def orch_transitions(term: Orchestration) -> FrozenSet[Tuple[LocalLabel, Orchestration]]:
    """Transitions of a single orchestration"""
    moves: Set[Tuple[LocalLabel, Orchestration]] = set()

    if isinstance(term, One):
        moves.add((TICK, ZERO))
    elif isinstance(term, TauAction):
        moves.add((LOCAL_TAU, ONE))
    elif isinstance(term, Receive):
        moves.add((LocalIn(term.name), ONE))
    elif isinstance(term, Send):
        moves.add((LocalOut(term.name, term.to), ONE))

    elif isinstance(term, Choice):
        moves |= orch_transitions(term.left)
        moves |= orch_transitions(term.right)

    elif isinstance(term, Seq):
        for label, left in orch_transitions(term.left):
            if isinstance(label, Tick):
                moves |= orch_transitions(term.right)
            else:
                moves.add((label, Seq(left, term.right)))

    elif isinstance(term, Parallel):
        left_moves = orch_transitions(term.left)
        right_moves = orch_transitions(term.right)
        for label, left in left_moves:
            if isinstance(label, Tick):
                for other, right in right_moves:
                    if isinstance(other, Tick):
                        moves.add((TICK, Parallel(left, right)))
            else:
                moves.add((label, Parallel(left, term.right)))
        for label, right in right_moves:
            if not isinstance(label, Tick):
                moves.add((label, Parallel(term.left, right)))

    elif isinstance(term, Star):
        moves.add((TICK, ZERO))
        for label, body in orch_transitions(term.body):
            if not isinstance(label, Tick):
                moves.add((label, Seq(body, term)))

    elif isinstance(term, OScope):
        if not term.active:
            moves.add((ScopeStart(term.name), OScope(term.name, term.body, True)))
        else:
            for label, body in orch_transitions(term.body):
                if isinstance(label, Tick):
                    moves.add((ScopeEnd(term.name), ONE))
                else:
                    moves.add((label, OScope(term.name, body, True)))

    elif isinstance(term, OUpdate):
        moves.add((LocalUpdate(term.name, term.roles, term.bodies), ONE))

    return frozenset(moves)


def _oterms(term: Orchestration) -> Iterator[Orchestration]:
    """Subterms outside update bodies"""
    yield term
    if isinstance(term, (Seq, Choice, Parallel)):
        yield from _oterms(term.left)
        yield from _oterms(term.right)
    elif isinstance(term, (Star, OScope)):
        yield from _oterms(term.body)


def holds_scope(term: Orchestration, scope: str) -> bool:
    return any(isinstance(sub, OScope) and sub.name == scope for sub in _oterms(term))


def scope_holders(system: System, scope: str) -> Tuple[str, ...]:
    """Roles whose orchestration contains a scope named `scope` outside update bodies"""
    return tuple(role for role, term in system.members if holds_scope(term, scope))


def substitute_oscope(term: Orchestration, scope: str, body: Orchestration) -> Orchestration:
    """Replace the body of every scope named `scope`, keeping activation flags"""
    if isinstance(term, OScope):
        if term.name == scope:
            return OScope(term.name, body, term.active)
        return OScope(term.name, substitute_oscope(term.body, scope, body), term.active)
    if isinstance(term, (Seq, Choice, Parallel)):
        return type(term)(substitute_oscope(term.left, scope, body), substitute_oscope(term.right, scope, body))
    if isinstance(term, Star):
        return Star(substitute_oscope(term.body, scope, body))
    return term


# ---------------------------------------------------------------------------
# Systems
# ---------------------------------------------------------------------------

def validate_system(system: System) -> System:
    """Reject duplicate roles and outputs addressed to their own role"""
    seen: Set[str] = set()
    for role, term in system.members:
        if role in seen:
            raise DuplicateRole(role)
        seen.add(role)
        for sub in _oterms(term):
            if isinstance(sub, Send) and sub.to == role:
                raise SelfAddressedOutput(role, sub.name)
    return system


def _scope_moves(system: System, local: Dict[str, FrozenSet[Tuple[LocalLabel, Orchestration]]],
                 kind: type) -> Iterator[Tuple[SystemLabel, System]]:
    """Synchronized start or end of a scope by all of its holders"""
    names = {label.scope for moves in local.values() for label, _ in moves if isinstance(label, kind)}
    for scope in sorted(names):
        holders = scope_holders(system, scope)
        options = []
        for role in holders:
            targets = sorted((target for label, target in local[role]
                              if isinstance(label, kind) and label.scope == scope), key=repr)
            if not targets:
                break
            options.append(targets)
        else:
            verb = "start" if kind is ScopeStart else "end"
            for combination in itertools.product(*options):
                yield SysTau(f"{verb} {scope}"), system.replace(dict(zip(holders, combination)))


def _update_moves(system: System, role: str, label: LocalUpdate,
                  target: Orchestration) -> Iterator[Tuple[SystemLabel, System]]:
    holders = scope_holders(system, label.scope)
    if not holders:
        return
    if set(label.roles) != set(holders):
        raise RoleMismatch(label.scope, holders, label.roles)
    updated = system.replace({role: target})
    changes = {}
    for member, body in zip(label.roles, label.bodies):
        changes[member] = substitute_oscope(updated.term_of(member), label.scope, body)
    yield SysUpdate(label.scope, role, label.roles, label.bodies), updated.replace(changes)


def system_transitions(system: System) -> FrozenSet[Tuple[SystemLabel, System]]:
    """
    Transitions of a system.

    Local internal steps, pending inputs and outputs interleave; an output
    `a!s` at r and an input `a?` at s synchronize into `a:r->s`; `√` needs
    every role to tick. Scopes start and end by a synchronized internal step
    of all their holders, and an update replaces the scope body at every
    listed role at once.

    Raises:
        RoleMismatch: if an enabled update lists roles other than the scope's holders
    """
    local = {role: orch_transitions(term) for role, term in system.members}
    moves: Set[Tuple[SystemLabel, System]] = set()

    for role, term in system.members:
        for label, target in local[role]:
            if isinstance(label, LocalTau):
                moves.add((SYS_TAU, system.replace({role: target})))
            elif isinstance(label, LocalIn):
                moves.add((PendingIn(label.name, role), system.replace({role: target})))
            elif isinstance(label, LocalOut):
                moves.add((PendingOut(label.name, role, label.to), system.replace({role: target})))
                if label.to not in local:
                    continue
                for other, partner in local[label.to]:
                    if isinstance(other, LocalIn) and other.name == label.name:
                        moves.add((Completed(label.name, role, label.to),
                                   system.replace({role: target, label.to: partner})))
            elif isinstance(label, LocalUpdate):
                moves.update(_update_moves(system, role, label, target))

    ticks = []
    for role, _ in system.members:
        targets = [target for label, target in local[role] if isinstance(label, Tick)]
        if not targets:
            break
        ticks.append(targets)
    else:
        for combination in itertools.product(*ticks):
            moves.add((TICK, system.replace(dict(zip(system.roles, combination)))))

    moves.update(_scope_moves(system, local, ScopeStart))
    moves.update(_scope_moves(system, local, ScopeEnd))
    return frozenset(moves)


def is_closed_label(label: SystemLabel) -> bool:
    return isinstance(label, (SysTau, Tick, Interaction, SysUpdate))


def closed_transitions(system: System) -> List[Tuple[SystemLabel, System]]:
    """Transitions of the system seen in isolation, deterministically ordered"""
    from .printer import render_label, render_system

    closed = [(label, target) for label, target in system_transitions(system) if is_closed_label(label)]
    closed.sort(key=lambda move: (render_label(move[0]), render_system(move[1])))
    return closed


@dataclass
class SystemGraph:
    """Closed reachability graph of a system"""
    states: List[System] = field(default_factory=list)
    edges: List[Tuple[int, SystemLabel, int]] = field(default_factory=list)
    # sources and targets of `√` edges
    ticking: Set[int] = field(default_factory=set)
    terminal: Set[int] = field(default_factory=set)

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self.states)))
        for source, label, target in self.edges:
            graph.add_edge(source, target, label=label)
        return graph

    def live(self) -> Set[int]:
        """The root and every state entered by a move other than `√`"""
        found = {0}
        found.update(target for _, label, target in self.edges if not isinstance(label, Tick))
        return found


def explore_system(system: System, cap: int = DEFAULT_SYSTEM_STATE_CAP) -> SystemGraph:
    """
    Breadth-first exploration of closed transitions.

    Every state is expanded by its own moves, whichever label first led to it.

    Raises:
        StateBound: if more than `cap` states are reached
    """
    graph = SystemGraph(states=[system])
    index: Dict[System, int] = {system: 0}
    queue = deque([0])
    while queue:
        state = queue.popleft()
        for label, target in closed_transitions(graph.states[state]):
            found = index.get(target)
            if found is None:
                if len(graph.states) >= cap:
                    raise StateBound(cap)
                found = len(graph.states)
                index[target] = found
                graph.states.append(target)
                queue.append(found)
            if isinstance(label, Tick):
                graph.ticking.add(state)
                graph.terminal.add(found)
            graph.edges.append((state, label, found))
    logger.info(f"System exploration: {len(graph.states)} states, {len(graph.edges)} transitions")
    return graph


def _trace_of(graph: SystemGraph, path: List[int]) -> List[str]:
    from .printer import render_label

    labels = {}
    for source, label, target in graph.edges:
        labels.setdefault((source, target), label)
    return [render_label(labels[(source, target)]) for source, target in zip(path, path[1:])]


def check_correct_composition(system: System, cap: int = DEFAULT_SYSTEM_STATE_CAP) -> Verdict:
    """Every reachable state can still reach successful termination"""
    graph = explore_system(system, cap)
    nx_graph = graph.to_networkx()
    good = pred_star(nx_graph, graph.ticking)
    stuck = [state for state in sorted(graph.live()) if state not in good]
    bounds = {"system_state_cap": cap}

    if stuck:
        lengths = nx.single_source_shortest_path_length(nx_graph, 0)
        goal = min(stuck, key=lambda state: (lengths[state], state))
        path = nx.shortest_path(nx_graph, 0, goal)
        logger.info(f"Correct composition violated: state {goal} cannot terminate")
        return Verdict(
            property="correct-composition",
            status="violated",
            witness=path,
            trace=_trace_of(graph, path),
            reason="a reachable state cannot reach successful termination",
            states_explored=len(graph.states),
            bounds=bounds,
        )

    return Verdict(
        property="correct-composition",
        status="holds",
        reason="every reachable state can reach successful termination",
        states_explored=len(graph.states),
        bounds=bounds,
    )


def check_implements(system: System, choreography, cap: int = DEFAULT_SYSTEM_STATE_CAP) -> Verdict:
    """
    The system is a correct composition and its weak traces are traces of
    the choreography.

    Returns:
        Verdict; a trace counterexample is the shortest offending word
    """
    from .automata import TraceAutomaton
    from .printer import render_label

    composition = check_correct_composition(system, cap)
    if composition.status == "violated":
        return composition.model_copy(update={
            "property": "implements",
            "reason": "not a correct composition: " + composition.reason,
        })

    implementation = TraceAutomaton.from_system(system, cap)
    specification = TraceAutomaton.from_choreography(choreography, cap)
    word = implementation.counterexample(specification)
    states = composition.states_explored

    if word is not None:
        trace = [render_label(symbol) for symbol in word]
        logger.info(f"Implementation violated by trace {' '.join(trace)}")
        return Verdict(
            property="implements",
            status="violated",
            trace=trace,
            reason="the system has a trace the choreography does not allow",
            states_explored=states,
            bounds=composition.bounds,
        )

    return Verdict(
        property="implements",
        status="holds",
        reason="correct composition whose traces are all choreography traces",
        states_explored=states,
        bounds=composition.bounds,
    )


def weak_traces(system: System, limit: int, cap: int = DEFAULT_SYSTEM_STATE_CAP) -> List[Tuple[str, ...]]:
    """Rendered weak traces of length at most `limit`, `√` included"""
    from .automata import TraceAutomaton
    from .printer import render_label

    automaton = TraceAutomaton.from_system(system, cap)
    return sorted(tuple(render_label(symbol) for symbol in word) for word in automaton.words(limit))
