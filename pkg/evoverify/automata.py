"""
Trace automata
Finite automata over completed interactions, update events and `√`,
built from systems (internal steps as epsilon moves) or choreographies,
with on-the-fly subset construction for inclusion checks.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

from .choreography import (
    Interaction,
    TICK,
    Tick,
    UpdLabel,
    choreo_transitions,
    project,
    roles,
    scope_types,
)
from .errors import StateBound
from .orchestration import DEFAULT_SYSTEM_STATE_CAP, SysTau, SysUpdate, System, explore_system

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UpdateSymbol:
    """An update on `scope` by `role`, with the replacement body of every scope role"""
    scope: str
    role: str
    bodies: Tuple[object, ...] = ()


Symbol = Union[Interaction, UpdateSymbol, Tick]
StateSet = FrozenSet[int]


def symbol_of(label, types: Optional[Dict[str, Tuple[str, ...]]] = None) -> Optional[Symbol]:
    """
    Observable symbol of a choreography or system label, None for internal steps.

    Choreography updates are projected onto the roles of the scope (from
    `types`) so that they compare equal to the matching system update.
    """
    if isinstance(label, (Interaction, Tick)):
        return label
    if isinstance(label, UpdLabel):
        scope_roles = (types or {}).get(label.scope) or tuple(sorted(roles(label.body)))
        bodies = tuple(project(label.body, member, types) for member in scope_roles)
        return UpdateSymbol(label.scope, label.role, bodies)
    if isinstance(label, SysUpdate):
        return UpdateSymbol(label.scope, label.role, label.bodies)
    if isinstance(label, SysTau):
        return None
    raise TypeError(f"label {label!r} has no trace symbol")


def symbol_key(symbol: Symbol) -> tuple:
    """Interactions by (name, sender, receiver), then updates, `√` last"""
    if isinstance(symbol, Interaction):
        return (0, symbol.name, symbol.sender, symbol.receiver)
    if isinstance(symbol, UpdateSymbol):
        from .printer import render
        return (1, symbol.scope, symbol.role, ", ".join(render(body) for body in symbol.bodies))
    return (2, "", "", "")


class TraceAutomaton:
    """
    Nondeterministic automaton whose accepted words are complete traces.

    Every `√` edge leads to an accepting state without successors, so
    accepted words are exactly the traces ending in successful termination.
    """

    def __init__(self, initial: int, moves: Dict[int, List[Tuple[Optional[Symbol], int]]],
                 accepting: Set[int]):
        self.initial = initial
        self.moves = moves
        self.accepting = accepting

    @classmethod
    def from_system(cls, system: System, cap: int = DEFAULT_SYSTEM_STATE_CAP) -> "TraceAutomaton":
        graph = explore_system(system, cap)
        # `√` leads to an extra accepting state with no moves
        accept = len(graph.states)
        moves: Dict[int, List[Tuple[Optional[Symbol], int]]] = {s: [] for s in range(accept + 1)}
        for source, label, target in graph.edges:
            if isinstance(label, Tick):
                moves[source].append((TICK, accept))
            else:
                moves[source].append((symbol_of(label), target))
        return cls(0, moves, {accept})

    @classmethod
    def from_choreography(cls, term, cap: int = DEFAULT_SYSTEM_STATE_CAP) -> "TraceAutomaton":
        # state 0 accepts, state 1 is the choreography itself
        types = scope_types(term)
        index = {term: 1}
        states = [None, term]
        moves: Dict[int, List[Tuple[Optional[Symbol], int]]] = {0: [], 1: []}
        queue = deque([1])
        while queue:
            state = queue.popleft()
            for label, target in choreo_transitions(states[state]):
                if isinstance(label, Tick):
                    moves[state].append((TICK, 0))
                    continue
                found = index.get(target)
                if found is None:
                    if len(states) > cap:
                        raise StateBound(cap)
                    found = len(states)
                    index[target] = found
                    states.append(target)
                    moves[found] = []
                    queue.append(found)
                moves[state].append((symbol_of(label, types), found))
        logger.debug(f"Choreography automaton: {len(states)} states")
        return cls(1, moves, {0})

    def closure(self, states: Iterable[int]) -> StateSet:
        """Epsilon closure"""
        found = set(states)
        queue = deque(found)
        while queue:
            state = queue.popleft()
            for symbol, target in self.moves[state]:
                if symbol is None and target not in found:
                    found.add(target)
                    queue.append(target)
        return frozenset(found)

    def start(self) -> StateSet:
        return self.closure([self.initial])

    def step(self, states: StateSet, symbol: Symbol) -> StateSet:
        targets = [target for state in states for label, target in self.moves[state] if label == symbol]
        return self.closure(targets)

    def enabled(self, states: StateSet) -> List[Symbol]:
        symbols = {label for state in states for label, _ in self.moves[state] if label is not None}
        return sorted(symbols, key=symbol_key)

    def is_accepting(self, states: StateSet) -> bool:
        return bool(states & self.accepting)

    def accepts(self, word: Iterable[Symbol]) -> bool:
        current = self.start()
        for symbol in word:
            current = self.step(current, symbol)
            if not current:
                return False
        return self.is_accepting(current)

    def counterexample(self, other: "TraceAutomaton") -> Optional[List[Symbol]]:
        """
        Shortest accepted word of this automaton rejected by `other`, or None
        if the language is included. Ties are broken by symbol order.
        """
        initial = (self.start(), other.start())
        parents: Dict[Tuple[StateSet, StateSet], Optional[Tuple[Tuple[StateSet, StateSet], Symbol]]] = {
            initial: None
        }
        queue = deque([initial])
        while queue:
            pair = queue.popleft()
            mine, theirs = pair
            for symbol in self.enabled(mine):
                next_mine = self.step(mine, symbol)
                next_theirs = other.step(theirs, symbol)
                if self.is_accepting(next_mine) and not other.is_accepting(next_theirs):
                    word = [symbol]
                    cursor = pair
                    while parents[cursor] is not None:
                        cursor, previous = parents[cursor]
                        word.append(previous)
                    word.reverse()
                    return word
                following = (next_mine, next_theirs)
                if following not in parents:
                    parents[following] = (pair, symbol)
                    queue.append(following)
        return None

    def is_included_in(self, other: "TraceAutomaton") -> bool:
        return self.counterexample(other) is None

    def words(self, limit: int) -> Set[Tuple[Symbol, ...]]:
        """Accepted words of at most `limit` symbols"""
        found: Set[Tuple[Symbol, ...]] = set()
        layer = {((), self.start())}
        for _ in range(limit):
            following = set()
            for word, states in layer:
                for symbol in self.enabled(states):
                    targets = self.step(states, symbol)
                    extended = word + (symbol,)
                    if self.is_accepting(targets):
                        found.add(extended)
                    if symbol != TICK:
                        following.add((extended, targets))
            layer = following
        return found
