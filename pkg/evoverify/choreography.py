"""
Choreographies
Global interaction terms, their semantics (including scopes and updates),
syntactic connectedness, projection and semantic well-formedness.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple, Union

from pydantic import BaseModel

from .errors import UnsupportedConstruct
from .verdict import Verdict

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Combinators shared with orchestrations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class One:
    """Successful termination `1`"""


@dataclass(frozen=True)
class Zero:
    """Terminated term `0`"""


@dataclass(frozen=True)
class Seq:
    left: object
    right: object


@dataclass(frozen=True)
class Choice:
    left: object
    right: object


@dataclass(frozen=True)
class Parallel:
    left: object
    right: object


@dataclass(frozen=True)
class Star:
    """Kleene iteration `H*`"""
    body: object


ONE = One()
ZERO = Zero()


# ---------------------------------------------------------------------------
# Choreography leaves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interaction:
    """`a:r->s`: role `sender` invokes operation `name` at `receiver`; also used as label"""
    name: str
    sender: str
    receiver: str

    @property
    def roles(self) -> FrozenSet[str]:
        return frozenset((self.sender, self.receiver))


@dataclass(frozen=True)
class Scope:
    """`X:{r,s}[H]`: updatable region; roles kept in declaration order"""
    name: str
    roles: Tuple[str, ...]
    body: object


@dataclass(frozen=True)
class UpdatePrefix:
    """`X{r: H}`: role r replaces the body of scopes named X by H"""
    name: str
    role: str
    body: object


Choreography = Union[One, Zero, Interaction, Seq, Choice, Parallel, Star, Scope, UpdatePrefix]


@dataclass(frozen=True)
class Tick:
    """Successful termination label"""


@dataclass(frozen=True)
class UpdLabel:
    """Update label `X{r: H}`"""
    scope: str
    role: str
    body: object


TICK = Tick()
ChoreoLabel = Union[Interaction, Tick, UpdLabel]


# ---------------------------------------------------------------------------
# Structural helpers
# ---------------------------------------------------------------------------

def subterms(term: Choreography, enter_updates: bool = False) -> Iterator[Choreography]:
    yield term
    if isinstance(term, (Seq, Choice, Parallel)):
        yield from subterms(term.left, enter_updates)
        yield from subterms(term.right, enter_updates)
    elif isinstance(term, Star):
        yield from subterms(term.body, enter_updates)
    elif isinstance(term, Scope):
        yield from subterms(term.body, enter_updates)
    elif isinstance(term, UpdatePrefix) and enter_updates:
        yield from subterms(term.body, enter_updates)


def located_subterms(term: Choreography, enter_updates: bool = False,
                     path: str = "root") -> Iterator[Tuple[str, Choreography]]:
    """Like `subterms`, paired with the dotted path from the root (`root.left.body`)"""
    yield path, term
    if isinstance(term, (Seq, Choice, Parallel)):
        yield from located_subterms(term.left, enter_updates, f"{path}.left")
        yield from located_subterms(term.right, enter_updates, f"{path}.right")
    elif isinstance(term, (Star, Scope)) or (isinstance(term, UpdatePrefix) and enter_updates):
        yield from located_subterms(term.body, enter_updates, f"{path}.body")


def interactions(term: Choreography) -> List[Interaction]:
    return [sub for sub in subterms(term) if isinstance(sub, Interaction)]


def roles(term: Choreography) -> Set[str]:
    """Roles occurring in interactions and scope types (update bodies excluded)"""
    found: Set[str] = set()
    for sub in subterms(term):
        if isinstance(sub, Interaction):
            found |= sub.roles
        elif isinstance(sub, Scope):
            found |= set(sub.roles)
    return found


def operations(term: Choreography) -> Set[str]:
    return {sub.name for sub in interactions(term)}


def has_updates(term: Choreography) -> bool:
    return any(isinstance(sub, (Scope, UpdatePrefix)) for sub in subterms(term))


def scope_types(term: Choreography) -> Dict[str, Tuple[str, ...]]:
    """First declared role list of every scope name, update bodies included"""
    types: Dict[str, Tuple[str, ...]] = {}
    for sub in subterms(term, enter_updates=True):
        if isinstance(sub, Scope) and sub.name not in types:
            types[sub.name] = sub.roles
    return types


def substitute_scope(term: Choreography, scope: str, body: Choreography) -> Choreography:
    """`H[body/X]`: replace the body of every scope named X outside update prefixes"""
    if isinstance(term, Scope):
        if term.name == scope:
            return Scope(term.name, term.roles, body)
        return Scope(term.name, term.roles, substitute_scope(term.body, scope, body))
    if isinstance(term, (Seq, Choice, Parallel)):
        return type(term)(substitute_scope(term.left, scope, body), substitute_scope(term.right, scope, body))
    if isinstance(term, Star):
        return Star(substitute_scope(term.body, scope, body))
    return term


def simplify(term):
    """
    Unit elimination: `1;X`, `X;1`, `X|1` and `1|X` become `X`.

    Works on choreographies and orchestrations alike; used for display.
    """
    if isinstance(term, Seq):
        left, right = simplify(term.left), simplify(term.right)
        if isinstance(left, One):
            return right
        if isinstance(right, One):
            return left
        return Seq(left, right)
    if isinstance(term, Parallel):
        left, right = simplify(term.left), simplify(term.right)
        if isinstance(left, One):
            return right
        if isinstance(right, One):
            return left
        return Parallel(left, right)
    if isinstance(term, Choice):
        return Choice(simplify(term.left), simplify(term.right))
    if isinstance(term, Star):
        return Star(simplify(term.body))
    if isinstance(term, Scope):
        return Scope(term.name, term.roles, simplify(term.body))
    if isinstance(term, UpdatePrefix):
        return UpdatePrefix(term.name, term.role, simplify(term.body))
    from .orchestration import OScope, OUpdate
    if isinstance(term, OScope):
        return OScope(term.name, simplify(term.body), term.active)
    if isinstance(term, OUpdate):
        return OUpdate(term.name, term.roles, tuple(simplify(body) for body in term.bodies))
    return term


# ---------------------------------------------------------------------------
# Semantics
# ---------------------------------------------------------------------------

@lru_cache(maxsize=65536)
def choreo_transitions(term: Choreography) -> FrozenSet[Tuple[ChoreoLabel, Choreography]]:
    """
    Transitions of a choreography.

    Interactions step to 1, `1` and `H*` tick to 0, sequence passes control
    on tick and parallel composition ticks only when both sides do. An
    update label substitutes the new body into every scope of the same name
    in the remaining term; a scope hit by its own update takes the new body.
    """
    moves: Set[Tuple[ChoreoLabel, Choreography]] = set()

    if isinstance(term, Interaction):
        moves.add((term, ONE))

    elif isinstance(term, One):
        moves.add((TICK, ZERO))

    elif isinstance(term, Choice):
        moves |= choreo_transitions(term.left)
        moves |= choreo_transitions(term.right)

    elif isinstance(term, Seq):
        for label, left in choreo_transitions(term.left):
            if isinstance(label, Tick):
                moves |= choreo_transitions(term.right)
            elif isinstance(label, UpdLabel):
                moves.add((label, Seq(left, substitute_scope(term.right, label.scope, label.body))))
            else:
                moves.add((label, Seq(left, term.right)))

    elif isinstance(term, Parallel):
        left_moves = choreo_transitions(term.left)
        right_moves = choreo_transitions(term.right)
        for label, left in left_moves:
            if isinstance(label, Tick):
                for other, right in right_moves:
                    if isinstance(other, Tick):
                        moves.add((TICK, Parallel(left, right)))
            elif isinstance(label, UpdLabel):
                moves.add((label, Parallel(left, substitute_scope(term.right, label.scope, label.body))))
            else:
                moves.add((label, Parallel(left, term.right)))
        for label, right in right_moves:
            if isinstance(label, UpdLabel):
                moves.add((label, Parallel(substitute_scope(term.left, label.scope, label.body), right)))
            elif not isinstance(label, Tick):
                moves.add((label, Parallel(term.left, right)))

    elif isinstance(term, Star):
        moves.add((TICK, ZERO))
        for label, body in choreo_transitions(term.body):
            if isinstance(label, Tick):
                continue
            if isinstance(label, UpdLabel):
                renewed = Star(substitute_scope(term.body, label.scope, label.body))
                moves.add((label, Seq(body, renewed)))
            else:
                moves.add((label, Seq(body, term)))

    elif isinstance(term, Scope):
        for label, body in choreo_transitions(term.body):
            if isinstance(label, UpdLabel) and label.scope == term.name:
                moves.add((label, Scope(term.name, term.roles, label.body)))
            else:
                moves.add((label, Scope(term.name, term.roles, body)))

    elif isinstance(term, UpdatePrefix):
        moves.add((UpdLabel(term.name, term.role, term.body), ONE))

    return frozenset(moves)


# ---------------------------------------------------------------------------
# Connectedness
# ---------------------------------------------------------------------------

class ConnectednessReport(BaseModel):
    """Outcome of the three syntactic connectedness conditions"""
    seq: bool = True
    choice: bool = True
    interference: bool = True
    witnesses: List[str] = []

    @property
    def connected(self) -> bool:
        return self.seq and self.choice and self.interference


@lru_cache(maxsize=65536)
def _pre_post(term: Choreography) -> Tuple[FrozenSet[Interaction], FrozenSet[Interaction], bool]:
    """(first interactions, last interactions, can terminate without interacting)"""
    if isinstance(term, Interaction):
        return frozenset((term,)), frozenset((term,)), False
    if isinstance(term, One):
        return frozenset(), frozenset(), True
    if isinstance(term, Zero):
        return frozenset(), frozenset(), False
    if isinstance(term, Seq):
        first_l, last_l, empty_l = _pre_post(term.left)
        first_r, last_r, empty_r = _pre_post(term.right)
        first = first_l | (first_r if empty_l else frozenset())
        last = last_r | (last_l if empty_r else frozenset())
        return first, last, empty_l and empty_r
    if isinstance(term, (Choice, Parallel)):
        first_l, last_l, empty_l = _pre_post(term.left)
        first_r, last_r, empty_r = _pre_post(term.right)
        empty = (empty_l or empty_r) if isinstance(term, Choice) else (empty_l and empty_r)
        return first_l | first_r, last_l | last_r, empty
    if isinstance(term, Star):
        first, last, _ = _pre_post(term.body)
        return first, last, True
    raise UnsupportedConstruct(type(term).__name__.lower(), "connectedness analysis")


def first_interactions(term: Choreography) -> FrozenSet[Interaction]:
    return _pre_post(term)[0]


def last_interactions(term: Choreography) -> FrozenSet[Interaction]:
    return _pre_post(term)[1]


def nullable(term: Choreography) -> bool:
    return _pre_post(term)[2]


def role_first_actions(term: Choreography, role: str) -> Tuple[FrozenSet[Tuple[str, str]], bool]:
    """
    First actions of `role` in a term as ("send"|"recv", operation) pairs,
    and whether the role may finish the term without acting.
    """
    if isinstance(term, Interaction):
        if term.sender == role:
            return frozenset({("send", term.name)}), False
        if term.receiver == role:
            return frozenset({("recv", term.name)}), False
        return frozenset(), True
    if isinstance(term, (One, Zero)):
        return frozenset(), True
    if isinstance(term, Seq):
        first_l, idle_l = role_first_actions(term.left, role)
        first_r, idle_r = role_first_actions(term.right, role)
        return first_l | (first_r if idle_l else frozenset()), idle_l and idle_r
    if isinstance(term, (Choice, Parallel)):
        first_l, idle_l = role_first_actions(term.left, role)
        first_r, idle_r = role_first_actions(term.right, role)
        idle = (idle_l or idle_r) if isinstance(term, Choice) else (idle_l and idle_r)
        return first_l | first_r, idle
    if isinstance(term, Star):
        first, _ = role_first_actions(term.body, role)
        return first, True
    raise UnsupportedConstruct(type(term).__name__.lower(), "connectedness analysis")


def _render(term) -> str:
    from .printer import render
    return render(term)


def _ordered_after(before: Interaction, after: Interaction, unique_names: Set[str]) -> bool:
    """`after` cannot complete before `before` in any projection"""
    if after.sender in before.roles:
        return True
    return after.receiver in before.roles and after.name in unique_names


def check_connectedness(term: Choreography) -> ConnectednessReport:
    """
    Evaluate the syntactic conditions that make projection sound.

    Sequence: every first interaction of H2 in `H1;H2` is ordered after
    every last interaction of H1: its sender took part in it, or its
    receiver did and the operation name is used only once in the whole
    choreography. The loop-back of `H*` needs the sender.
    Choice: all first interactions of both branches share one sender, both
    branches involve the same roles, and every other role starts each branch
    with receptions whose operation names differ between branches. Leaving
    `H*` is a choice between H and whatever follows the loop, so the same
    conditions hold there for the roles of H.
    Interference: the two sides of `|` use disjoint operation names.

    Raises:
        UnsupportedConstruct: if the term contains scopes or updates
    """
    if has_updates(term):
        raise UnsupportedConstruct("scopes and updates", "check_connectedness")

    report = ConnectednessReport()
    names = [interaction.name for interaction in interactions(term)]
    unique_names = {name for name in names if names.count(name) == 1}

    def check_sequence(before: Choreography, after: Choreography, context: str, strict: bool = False):
        for last in sorted(last_interactions(before), key=_render):
            for first in sorted(first_interactions(after), key=_render):
                ordered = first.sender in last.roles if strict else _ordered_after(last, first, unique_names)
                if not ordered:
                    report.seq = False
                    report.witnesses.append(
                        f"{context}: {_render(first)} may happen before {_render(last)}")

    def check_branches(left: Choreography, right: Choreography, context: str, same_roles: bool = True):
        firsts = first_interactions(left) | first_interactions(right)
        senders = {interaction.sender for interaction in firsts}
        if len(senders) > 1:
            report.choice = False
            report.witnesses.append(f"choice: {context} start with different senders {sorted(senders)}")
            return
        if same_roles and roles(left) != roles(right):
            report.choice = False
            report.witnesses.append(
                f"choice: {context} involve different roles "
                f"{sorted(roles(left))} and {sorted(roles(right))}")
            return
        for role in sorted(roles(left) - senders):
            first_l, _ = role_first_actions(left, role)
            first_r, _ = role_first_actions(right, role)
            sends = sorted(op for kind, op in first_l | first_r if kind == "send")
            if sends:
                report.choice = False
                report.witnesses.append(
                    f"choice: role {role} may send {sends} before telling the {context} apart")
                continue
            clash = {op for _, op in first_l} & {op for _, op in first_r}
            if clash:
                report.choice = False
                report.witnesses.append(
                    f"choice: role {role} cannot tell the {context} apart by {sorted(clash)}")

    def visit(sub: Choreography, continuation: Choreography):
        # `continuation` is what may run once `sub` has terminated
        if isinstance(sub, Seq):
            check_sequence(sub.left, sub.right, "sequence")
            visit(sub.left, Seq(sub.right, continuation))
            visit(sub.right, continuation)
        elif isinstance(sub, Star):
            check_sequence(sub.body, sub.body, "iteration", strict=True)
            if first_interactions(continuation):
                check_branches(sub.body, continuation, f"loop and exit of {_render(sub)}", same_roles=False)
            visit(sub.body, Seq(sub, continuation))
        elif isinstance(sub, Parallel):
            shared = operations(sub.left) & operations(sub.right)
            if shared:
                report.interference = False
                report.witnesses.append(
                    f"interference: operations {sorted(shared)} on both sides of {_render(sub)}")
            visit(sub.left, continuation)
            visit(sub.right, continuation)
        elif isinstance(sub, Choice):
            check_branches(sub.left, sub.right, f"branches of {_render(sub)}")
            visit(sub.left, continuation)
            visit(sub.right, continuation)

    visit(term, ONE)
    logger.info(f"Connectedness: seq={report.seq}, choice={report.choice}, "
                f"interference={report.interference}")
    return report


# ---------------------------------------------------------------------------
# Projection and well-formedness
# ---------------------------------------------------------------------------

def project(term: Choreography, role: str,
            types: Optional[Dict[str, Tuple[str, ...]]] = None):
    """
    Project a choreography onto one role.

    Args:
        term: Choreography, possibly with scopes and updates
        role: Target role
        types: Role list of every scope name (computed from `term` if None)

    Returns:
        Orchestration of the role
    """
    from .orchestration import OScope, OUpdate, Receive, Send

    if types is None:
        types = scope_types(term)

    if isinstance(term, Interaction):
        if term.sender == role:
            return Send(term.name, term.receiver)
        if term.receiver == role:
            return Receive(term.name)
        return ONE
    if isinstance(term, (One, Zero)):
        return term
    if isinstance(term, (Seq, Choice, Parallel)):
        return type(term)(project(term.left, role, types), project(term.right, role, types))
    if isinstance(term, Star):
        return Star(project(term.body, role, types))
    if isinstance(term, Scope):
        if role in term.roles:
            return OScope(term.name, project(term.body, role, types), False)
        return ONE
    if isinstance(term, UpdatePrefix):
        if role != term.role:
            return ONE
        scope_roles = types.get(term.name) or tuple(sorted(roles(term.body)))
        bodies = tuple(project(term.body, member, types) for member in scope_roles)
        return OUpdate(term.name, scope_roles, bodies)
    raise TypeError(f"not a choreography: {term!r}")


def project_system(term: Choreography):
    """Projection onto every role, in sorted role order"""
    from .orchestration import System

    types = scope_types(term)
    members = tuple((role, project(term, role, types)) for role in sorted(roles(term)))
    return System(members)


def check_well_formed(term: Choreography) -> Verdict:
    """The projection of a choreography implements it"""
    from .orchestration import check_implements

    if has_updates(term):
        raise UnsupportedConstruct("scopes and updates", "check_well_formed")
    verdict = check_implements(project_system(term), term)
    return verdict.model_copy(update={"property": "well-formed"})
