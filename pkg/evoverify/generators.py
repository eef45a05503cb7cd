"""
Seeded random terms
Processes, formulas and choreographies for corpus-style testing.
"""

import random
from typing import List, Optional, Sequence

from .choreography import Choice, Choreography, Interaction, ONE, Parallel, Seq, Star
from .logic import And, Atom, Ev, Formula, Next, Not, Or, TT
from .process import HOLE, NIL, Input, Located, Output, Par, Process, Repl, Sum, Update

CHANNELS = ("a", "b", "c", "e")
LOCALITIES = ("f", "g")
ROLES = ("p", "q", "r", "s")
OPERATIONS = ("m1", "m2", "m3", "m4", "m5", "m6")


class TermGenerator:
    """
    Random term factory; the same seed always yields the same terms.

    Args:
        seed: Seed of the private random generator
        channels: Channel names used by processes and formulas
        localities: Locality names used by processes
        roles: Roles used by choreographies (at most four are drawn)
        operations: Operation names used by choreographies (at most six are drawn)
    """

    def __init__(self, seed: int = 0, channels: Sequence[str] = CHANNELS,
                 localities: Sequence[str] = LOCALITIES, roles: Sequence[str] = ROLES,
                 operations: Sequence[str] = OPERATIONS):
        self.rng = random.Random(seed)
        self.channels = list(channels)
        self.localities = list(localities)
        self.roles = list(roles)[:4]
        self.operations = list(operations)[:6]

    # -- E processes --------------------------------------------------------

    def _prefix(self, depth: int, allow_update: bool):
        roll = self.rng.random()
        if allow_update and roll < 0.2:
            return Update(self.rng.choice(self.localities), self.pattern(max(depth - 1, 0)))
        if roll < 0.6:
            return Input(self.rng.choice(self.channels))
        return Output(self.rng.choice(self.channels))

    def process(self, depth: int = 3, replication: bool = True) -> Process:
        """Random process of nesting depth at most `depth`"""
        if depth <= 0:
            return NIL
        roll = self.rng.random()
        if roll < 0.15:
            return NIL
        if roll < 0.45:
            return Sum(((self._prefix(depth, True), self.process(depth - 1, replication)),))
        if roll < 0.6:
            branches = tuple((self._prefix(depth, True), self.process(depth - 1, replication))
                             for _ in range(2))
            return Sum(branches)
        if roll < 0.8:
            return Par((self.process(depth - 1, replication), self.process(depth - 1, replication)))
        if roll < 0.9 and replication:
            return Repl(self._prefix(depth, False), self.process(depth - 1, False))
        return Located(self.rng.choice(self.localities), self.process(depth - 1, replication))

    def pattern(self, depth: int = 2) -> Process:
        """Random update pattern; mostly holes under re-created localities"""
        roll = self.rng.random()
        if depth <= 0 or roll < 0.25:
            return HOLE
        if roll < 0.5:
            return Located(self.rng.choice(self.localities), self.pattern(depth - 1))
        if roll < 0.75:
            return Par((HOLE, self.process(depth - 1, replication=False)))
        return self.process(depth - 1, replication=False)

    def processes(self, count: int, depth: int = 3) -> List[Process]:
        return [self.process(depth) for _ in range(count)]

    # -- formulas -----------------------------------------------------------

    def formula(self, depth: int = 3) -> Formula:
        roll = self.rng.random()
        if depth <= 0 or roll < 0.25:
            if self.rng.random() < 0.1:
                return TT
            return Atom(self.rng.choice(("in", "out")), self.rng.choice(self.channels))
        if roll < 0.4:
            return Or(self.formula(depth - 1), self.formula(depth - 1))
        if roll < 0.55:
            return And(self.formula(depth - 1), self.formula(depth - 1))
        if roll < 0.7:
            return Not(self.formula(depth - 1))
        if roll < 0.85:
            return Next(self.formula(depth - 1))
        return Ev(self.formula(depth - 1))

    # -- choreographies -----------------------------------------------------

    def interaction(self, roles: Optional[Sequence[str]] = None) -> Interaction:
        sender, receiver = self.rng.sample(list(roles or self.roles), 2)
        return Interaction(self.rng.choice(self.operations), sender, receiver)

    def choreography(self, depth: int = 4) -> Choreography:
        """Random choreography without scopes, updates or `0`"""
        roll = self.rng.random()
        if depth <= 0 or roll < 0.3:
            return ONE if self.rng.random() < 0.05 else self.interaction()
        if roll < 0.6:
            return Seq(self.choreography(depth - 1), self.choreography(depth - 1))
        if roll < 0.75:
            return Choice(self.choreography(depth - 1), self.choreography(depth - 1))
        if roll < 0.9:
            return Parallel(self.choreography(depth - 1), self.choreography(depth - 1))
        return Star(self.choreography(depth - 1))

    def choreographies(self, count: int, depth: int = 4) -> List[Choreography]:
        return [self.choreography(depth) for _ in range(count)]
