"""
Dynamic updates
Well-definedness of updatable choreographies, external updates injected by
the environment, scoped projection and systems, scripted simulation and the
exploratory trace correspondence check.
"""

import logging
from pathlib import Path
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from pydantic import BaseModel

from .automata import TraceAutomaton
from .choreography import (
    Choreography,
    Interaction,
    Parallel,
    Scope,
    Tick,
    UpdLabel,
    UpdatePrefix,
    choreo_transitions,
    located_subterms,
    project,
    project_system,
    roles,
    scope_types,
    simplify,
    substitute_scope,
    subterms,
)
from .errors import EvoVerifyError, InvalidUpdate, NoSuchTransition
from .orchestration import (
    DEFAULT_SYSTEM_STATE_CAP,
    SysTau,
    SysUpdate,
    System,
    closed_transitions,
    scope_holders,
    substitute_oscope,
    system_transitions,
)

logger = logging.getLogger(__name__)

DEFAULT_AUTO_LIMIT = 1000

Subject = Union[Choreography, System]


# ---------------------------------------------------------------------------
# Well-definedness
# ---------------------------------------------------------------------------

class UpdateProblem(BaseModel):
    """One violation, located by the dotted path of the offending subterm"""
    path: str
    message: str

    def __str__(self) -> str:
        return f"at {self.path}: {self.message}"


class UpdateValidationReport(BaseModel):
    """Problems preventing an updatable choreography from being well defined"""
    valid: bool = True
    problems: List[UpdateProblem] = []

    def add(self, path: str, message: str):
        self.valid = False
        self.problems.append(UpdateProblem(path=path, message=message))

    @property
    def messages(self) -> List[str]:
        return [problem.message for problem in self.problems]


def _scope_names(term: Choreography) -> Set[str]:
    return {sub.name for sub in subterms(term) if isinstance(sub, Scope)}


def validate_updatable(term: Choreography) -> UpdateValidationReport:
    """
    Check that scopes and updates are used consistently.

    Every scope with the same name declares the same roles and interacts
    only among them, update bodies mention only the roles of their scope,
    and two scopes with the same name can never be active together.
    Update bodies are validated as choreographies in their own right.
    Each problem carries the path of the scope, parallel or update at fault.
    """
    from .printer import render

    report = UpdateValidationReport()
    declared: Dict[str, FrozenSet[str]] = {}

    for path, sub in located_subterms(term, enter_updates=True):
        if isinstance(sub, Scope):
            scope_roles = frozenset(sub.roles)
            if sub.name in declared and declared[sub.name] != scope_roles:
                report.add(path, f"scope {sub.name} declared with roles {sorted(scope_roles)} "
                                 f"and {sorted(declared[sub.name])}")
            declared.setdefault(sub.name, scope_roles)
            outside = roles(sub.body) - scope_roles
            if outside:
                report.add(path, f"scope {render(sub)} involves roles {sorted(outside)} outside its type")
            if sub.name in _scope_names(sub.body):
                report.add(path, f"scope {sub.name} is nested inside itself in {render(sub)}")
        elif isinstance(sub, Parallel):
            both = _scope_names(sub.left) & _scope_names(sub.right)
            for name in sorted(both):
                report.add(path, f"scope {name} may be active twice in {render(sub)}")

    for path, sub in located_subterms(term, enter_updates=True):
        if isinstance(sub, UpdatePrefix):
            if sub.name not in declared:
                report.add(path, f"update {render(sub)} targets scope {sub.name}, which does not occur")
                continue
            outside = roles(sub.body) - declared[sub.name]
            if outside:
                report.add(path, f"update {render(sub)} involves roles {sorted(outside)} "
                                 f"outside type({sub.name}) = {sorted(declared[sub.name])}")

    if report.valid:
        logger.info("Updatable choreography is well defined")
    else:
        logger.info(f"Updatable choreography has {len(report.problems)} problem(s)")
    return report


# ---------------------------------------------------------------------------
# Choreography level
# ---------------------------------------------------------------------------

def uchoreo_transitions(term: Choreography):
    """Transitions of a choreography with scopes and updates"""
    return choreo_transitions(term)


def apply_external_update(term: Choreography, scope: str, body: Choreography,
                          role: str = "env") -> Tuple[UpdLabel, Choreography]:
    """
    Update coming from the environment: replace the body of every scope
    named `scope` at the root.

    Raises:
        InvalidUpdate: if no such scope occurs or the body involves roles
            outside the scope type
    """
    types = {sub.name: frozenset(sub.roles) for sub in subterms(term) if isinstance(sub, Scope)}
    if scope not in types:
        raise InvalidUpdate(scope, "no scope with this name occurs")
    outside = roles(body) - types[scope]
    if outside:
        raise InvalidUpdate(scope, f"roles {sorted(outside)} are outside type({scope}) = {sorted(types[scope])}")
    logger.info(f"External update on scope {scope} by {role}")
    return UpdLabel(scope, role, body), substitute_scope(term, scope, body)


def uproject(term: Choreography, role: str):
    """Projection of an updatable choreography onto one role"""
    return project(term, role, scope_types(term))


# ---------------------------------------------------------------------------
# System level
# ---------------------------------------------------------------------------

def usystem_transitions(system: System):
    """Transitions of a system with scopes and updates"""
    return system_transitions(system)


def apply_external_system_update(system: System, scope: str, scope_roles: Sequence[str],
                                 bodies: Sequence, role: str = "env") -> Tuple[SysUpdate, System]:
    """
    Environment update of scope `scope`, atomically at every listed role.

    Raises:
        InvalidUpdate: if no role holds the scope or the roles differ from its holders
    """
    holders = scope_holders(system, scope)
    if not holders:
        raise InvalidUpdate(scope, "no role holds a scope with this name")
    if set(scope_roles) != set(holders):
        raise InvalidUpdate(scope, f"roles {sorted(scope_roles)} differ from the holders {sorted(holders)}")
    if len(scope_roles) != len(bodies):
        raise InvalidUpdate(scope, "one body per role is required")
    changes = {member: substitute_oscope(system.term_of(member), scope, body)
               for member, body in zip(scope_roles, bodies)}
    logger.info(f"External update on scope {scope} at roles {list(scope_roles)}")
    return SysUpdate(scope, role, tuple(scope_roles), tuple(bodies)), system.replace(changes)


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------

class RunLogEntry(BaseModel):
    step: int
    state: str
    label: Optional[str] = None


class RunLog(BaseModel):
    """States and labels visited by a simulation, initial state first"""
    kind: str
    entries: List[RunLogEntry] = []

    @property
    def final_state(self) -> str:
        return self.entries[-1].state

    def labels(self) -> List[str]:
        return [entry.label for entry in self.entries if entry.label is not None]

    def to_json(self) -> List[Dict]:
        return [{"state": entry.state, "label": entry.label} for entry in self.entries]

    def to_text(self) -> str:
        lines = []
        for entry in self.entries:
            if entry.label is None:
                lines.append(f"[{entry.step}] {entry.state}")
            else:
                lines.append(f"  --{entry.label}-->")
                lines.append(f"[{entry.step}] {entry.state}")
        return "\n".join(lines)


def enabled_transitions(subject: Subject) -> List[Tuple[object, Subject]]:
    """Enabled transitions in a fixed order (closed transitions for systems)"""
    from .printer import render, render_label

    if isinstance(subject, System):
        return closed_transitions(subject)
    moves = list(uchoreo_transitions(subject))
    moves.sort(key=lambda move: (render_label(move[0]), render(move[1])))
    return moves


def _matches(label, selector: str) -> bool:
    if isinstance(label, Interaction):
        return label.name == selector
    if isinstance(label, (UpdLabel, SysUpdate)):
        return label.scope == selector
    if isinstance(label, Tick):
        return selector in ("√", "tick")
    if isinstance(label, SysTau):
        return selector == "tau"
    return False


class Simulator:
    """
    Replays simulation directives against a choreography or a system.

    Directives, one per line (`#` starts a comment):
        step <n|name>                   take the n-th enabled transition (1-based)
                                        or the first whose operation or scope is `name`
        update <X> <r1[,r2..]> <term>   external update; `@path` reads the term from a file
        auto [k]                        take the first enabled transition k times,
                                        or until termination
    """

    def __init__(self, subject: Subject, auto_limit: int = DEFAULT_AUTO_LIMIT,
                 normalize: bool = False, base_dir: Optional[Path] = None,
                 parse_choreography: Optional[Callable[[str], Choreography]] = None):
        if parse_choreography is None:
            from .grammar import parse_choreography
        self.state = subject
        self.auto_limit = auto_limit
        self.normalize = normalize
        self.base_dir = base_dir or Path(".")
        self.parse_choreography = parse_choreography
        self.finished = False
        self.log = RunLog(kind="system" if isinstance(subject, System) else "choreography")
        self._record(None)

    def _render_state(self) -> str:
        from .printer import render, render_system

        state = self.state
        if self.normalize:
            state = _normalize(state)
        if isinstance(state, System):
            return render_system(state)
        return render(state)

    def _record(self, label):
        from .printer import render_label

        self.log.entries.append(RunLogEntry(
            step=len(self.log.entries),
            state=self._render_state(),
            label=None if label is None else render_label(label),
        ))

    def _take(self, label, target):
        self.state = target
        if isinstance(label, Tick):
            self.finished = True
        self._record(label)

    def step(self, selector: str):
        moves = [] if self.finished else enabled_transitions(self.state)
        if selector.isdigit():
            position = int(selector)
            if not 1 <= position <= len(moves):
                raise NoSuchTransition(f"step {selector}", len(moves))
            self._take(*moves[position - 1])
            return
        for label, target in moves:
            if _matches(label, selector):
                self._take(label, target)
                return
        raise NoSuchTransition(f"step {selector}", len(moves))

    def auto(self, count: Optional[int] = None):
        limit = self.auto_limit if count is None else count
        for _ in range(limit):
            if self.finished:
                return
            moves = enabled_transitions(self.state)
            if not moves:
                return
            self._take(*moves[0])
        if count is None and not self.finished and enabled_transitions(self.state):
            logger.warning(f"auto stopped after {limit} steps without terminating")

    def update(self, scope: str, scope_roles: List[str], text: str):
        if text.startswith("@"):
            text = (self.base_dir / text[1:]).read_text(encoding="utf-8")
        body = self.parse_choreography(text)
        if isinstance(self.state, System):
            types = scope_types(body)
            bodies = [project(body, member, types) for member in scope_roles]
            label, target = apply_external_system_update(self.state, scope, scope_roles, bodies,
                                                         role=scope_roles[0])
        else:
            label, target = apply_external_update(self.state, scope, body, role=scope_roles[0])
        self._take(label, target)

    def run(self, script: Sequence[str]) -> RunLog:
        for number, raw in enumerate(script, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            words = line.split(None, 3)
            command = words[0]
            if command == "step" and len(words) == 2:
                self.step(words[1])
            elif command == "auto" and len(words) <= 2:
                if len(words) == 2 and not words[1].isdigit():
                    raise EvoVerifyError(f"script line {number}: auto expects a step count")
                self.auto(int(words[1]) if len(words) == 2 else None)
            elif command == "update" and len(words) == 4:
                self.update(words[1], words[2].split(","), words[3])
            else:
                raise EvoVerifyError(f"script line {number}: cannot interpret '{line}'")
        return self.log


def _normalize(subject: Subject) -> Subject:
    if isinstance(subject, System):
        return System(tuple((role, simplify(term)) for role, term in subject.members))
    return simplify(subject)


def simulate(subject: Subject, script: Sequence[str], auto_limit: int = DEFAULT_AUTO_LIMIT,
             normalize: bool = False, base_dir: Optional[Path] = None) -> RunLog:
    """
    Replay a script of directives and log every state and label.

    Args:
        subject: Choreography or system to simulate
        script: Directive lines
        auto_limit: Steps taken by `auto` without a count
        normalize: Log states after unit elimination
        base_dir: Directory against which `@path` update terms are read

    Returns:
        RunLog starting with the initial state
    """
    simulator = Simulator(subject, auto_limit=auto_limit, normalize=normalize, base_dir=base_dir)
    log = simulator.run(script)
    logger.info(f"Simulation finished after {len(log.entries) - 1} step(s)")
    return log


# ---------------------------------------------------------------------------
# Trace correspondence
# ---------------------------------------------------------------------------

class CorrespondenceReport(BaseModel):
    """Outcome of comparing the projected system with its choreography"""
    included: bool
    counterexample: Optional[List[str]] = None
    states: int = 0


def trace_correspondence(term: Choreography, cap: int = DEFAULT_SYSTEM_STATE_CAP) -> CorrespondenceReport:
    """
    Check that every complete trace of the projected system, updates
    included, is a trace of the choreography. Exploratory: a counterexample
    is reported as a finding, not raised.
    """
    from .printer import render_label

    system = project_system(term)
    implementation = TraceAutomaton.from_system(system, cap)
    specification = TraceAutomaton.from_choreography(term, cap)
    word = implementation.counterexample(specification)
    if word is None:
        return CorrespondenceReport(included=True, states=len(implementation.moves))
    trace = [render_label(symbol) for symbol in word]
    logger.warning(f"Trace correspondence finding: {' '.join(trace)}")
    return CorrespondenceReport(included=False, counterexample=trace, states=len(implementation.moves))
