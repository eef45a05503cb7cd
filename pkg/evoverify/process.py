"""
E-calculus terms
Process ASTs, the fill operation, update-pattern classification,
canonical forms and barbs.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Iterator, List, Optional, Tuple, Union

from pydantic import BaseModel

logger = logging.getLogger(__name__)

# (polarity, name) with polarity "in" or "out"
Barb = Tuple[str, str]


class Process:
    """Base class of E-calculus terms"""

    __slots__ = ()


@dataclass(frozen=True)
class Nil(Process):
    pass


@dataclass(frozen=True)
class Hole(Process):
    """Update-pattern hole, written `@`"""


@dataclass(frozen=True)
class Placeholder(Process):
    """Transient placeholder left behind by a located process offering its state"""


@dataclass(frozen=True)
class Located(Process):
    name: str
    body: Process


@dataclass(frozen=True)
class Par(Process):
    parts: Tuple[Process, ...]


@dataclass(frozen=True)
class Input:
    name: str


@dataclass(frozen=True)
class Output:
    name: str


@dataclass(frozen=True)
class Update:
    name: str
    pattern: Process


Prefix = Union[Input, Output, Update]


@dataclass(frozen=True)
class Repl(Process):
    prefix: Prefix
    body: Process


@dataclass(frozen=True)
class Sum(Process):
    branches: Tuple[Tuple[Prefix, Process], ...]


NIL = Nil()
HOLE = Hole()
PLACEHOLDER = Placeholder()


def guarded(prefix: Prefix, body: Process) -> Sum:
    """Single-summand prefix term `prefix.body`"""
    return Sum(((prefix, body),))


class VariantClass(BaseModel):
    """Update-pattern discipline flags"""
    e1: bool = True
    e2: bool = True
    e3: bool = True
    static_ok: bool = True

    def meet(self, other: "VariantClass") -> "VariantClass":
        return VariantClass(
            e1=self.e1 and other.e1,
            e2=self.e2 and other.e2,
            e3=self.e3 and other.e3,
            static_ok=self.static_ok and other.static_ok,
        )

    def strongest(self) -> str:
        if self.e3:
            return "E3"
        if self.e2:
            return "E2"
        return "E1"


# ---------------------------------------------------------------------------
# Ordering and canonical forms
# ---------------------------------------------------------------------------

_TAGS = {Nil: 0, Hole: 1, Placeholder: 2, Located: 3, Par: 4, Repl: 5, Sum: 6}


def prefix_key(prefix: Prefix) -> tuple:
    if isinstance(prefix, Input):
        return (0, prefix.name, ())
    if isinstance(prefix, Output):
        return (1, prefix.name, ())
    return (2, prefix.name, (sort_key(prefix.pattern),))


@lru_cache(maxsize=65536)
def sort_key(process: Process) -> tuple:
    """
    Total order on terms: (constructor tag, name, children)

    Every key has the shape (int, str, tuple-of-keys) so keys of
    different constructors compare without type errors.
    """
    if isinstance(process, Located):
        return (3, process.name, (sort_key(process.body),))
    if isinstance(process, Par):
        return (4, "", tuple(sort_key(part) for part in process.parts))
    if isinstance(process, Repl):
        return (5, "", (prefix_key(process.prefix), sort_key(process.body)))
    if isinstance(process, Sum):
        children = []
        for prefix, body in process.branches:
            children.append(prefix_key(prefix))
            children.append(sort_key(body))
        return (6, "", tuple(children))
    return (_TAGS[type(process)], "", ())


def _canonical_prefix(prefix: Prefix) -> Prefix:
    if isinstance(prefix, Update):
        return Update(prefix.name, canonicalize(prefix.pattern))
    return prefix


@lru_cache(maxsize=65536)
def canonicalize(process: Process) -> Process:
    """
    Canonical representative used as state identity.

    Parallel compositions are flattened, nil components dropped, identical
    replicated components folded and the rest sorted. Sums drop duplicate
    summands and are sorted. Replication is never unfolded.
    """
    if isinstance(process, Located):
        return Located(process.name, canonicalize(process.body))
    if isinstance(process, Par):
        parts: List[Process] = []
        for part in process.parts:
            canonical = canonicalize(part)
            if isinstance(canonical, Par):
                parts.extend(canonical.parts)
            elif not isinstance(canonical, Nil):
                parts.append(canonical)
        folded: List[Process] = []
        seen_replicas = set()
        for part in parts:
            if isinstance(part, Repl):
                if part in seen_replicas:
                    continue
                seen_replicas.add(part)
            folded.append(part)
        folded.sort(key=sort_key)
        if not folded:
            return NIL
        if len(folded) == 1:
            return folded[0]
        return Par(tuple(folded))
    if isinstance(process, Repl):
        return Repl(_canonical_prefix(process.prefix), canonicalize(process.body))
    if isinstance(process, Sum):
        branches = {(_canonical_prefix(prefix), canonicalize(body)) for prefix, body in process.branches}
        if not branches:
            return NIL
        ordered = sorted(branches, key=lambda branch: (prefix_key(branch[0]), sort_key(branch[1])))
        return Sum(tuple(ordered))
    return process


# ---------------------------------------------------------------------------
# Holes, fill and the placeholder
# ---------------------------------------------------------------------------

def _children(process: Process) -> Iterator[Process]:
    """Direct subterms, not descending into update patterns"""
    if isinstance(process, Located):
        yield process.body
    elif isinstance(process, Par):
        yield from process.parts
    elif isinstance(process, Repl):
        yield process.body
    elif isinstance(process, Sum):
        for _, body in process.branches:
            yield body


def _prefixes(process: Process) -> Iterator[Prefix]:
    if isinstance(process, Repl):
        yield process.prefix
    elif isinstance(process, Sum):
        for prefix, _ in process.branches:
            yield prefix


def free_holes(pattern: Process) -> int:
    """Number of holes not nested under an update prefix"""
    if isinstance(pattern, Hole):
        return 1
    return sum(free_holes(child) for child in _children(pattern))


def fill(pattern: Process, filler: Process) -> Process:
    """Replace every hole of `pattern` not under an update prefix by `filler`"""
    if isinstance(pattern, Hole):
        return filler
    if isinstance(pattern, Located):
        return Located(pattern.name, fill(pattern.body, filler))
    if isinstance(pattern, Par):
        return Par(tuple(fill(part, filler) for part in pattern.parts))
    if isinstance(pattern, Repl):
        return Repl(pattern.prefix, fill(pattern.body, filler))
    if isinstance(pattern, Sum):
        return Sum(tuple((prefix, fill(body, filler)) for prefix, body in pattern.branches))
    return pattern


def contains_placeholder(process: Process) -> bool:
    if isinstance(process, Placeholder):
        return True
    return any(contains_placeholder(child) for child in _children(process))


def replace_placeholder(process: Process, replacement: Process) -> Process:
    """Substitute the placeholder left by a located-state transition"""
    if isinstance(process, Placeholder):
        return replacement
    if isinstance(process, Located):
        return Located(process.name, replace_placeholder(process.body, replacement))
    if isinstance(process, Par):
        return Par(tuple(replace_placeholder(part, replacement) for part in process.parts))
    return process


def contains_location(process: Process) -> bool:
    """True if a Located constructor occurs anywhere, update patterns included"""
    if isinstance(process, Located):
        return True
    for prefix in _prefixes(process):
        if isinstance(prefix, Update) and contains_location(prefix.pattern):
            return True
    return any(contains_location(child) for child in _children(process))


def update_prefixes(process: Process) -> Iterator[Update]:
    """Outermost update prefixes of a term (patterns are not entered)"""
    for prefix in _prefixes(process):
        if isinstance(prefix, Update):
            yield prefix
    for child in _children(process):
        yield from update_prefixes(child)


def is_user_facing(process: Process) -> bool:
    return free_holes(process) == 0 and not contains_placeholder(process)


# ---------------------------------------------------------------------------
# Variant classification
# ---------------------------------------------------------------------------

def _par_components(process: Process) -> List[Process]:
    if isinstance(process, Par):
        components: List[Process] = []
        for part in process.parts:
            components.extend(_par_components(part))
        return components
    return [process]


def _fits_e2(pattern: Process) -> bool:
    # U ::= P | a[U] | U | U | @
    if free_holes(pattern) == 0:
        return True
    if isinstance(pattern, Hole):
        return True
    if isinstance(pattern, Located):
        return _fits_e2(pattern.body)
    if isinstance(pattern, Par):
        return all(_fits_e2(part) for part in pattern.parts)
    return False


def _fits_e3(pattern: Process) -> bool:
    # U ::= a[U] | U | P | @, exactly one hole
    if isinstance(pattern, Hole):
        return True
    if isinstance(pattern, Located):
        return _fits_e3(pattern.body)
    if isinstance(pattern, Par):
        holed = [part for part in _par_components(pattern) if free_holes(part) > 0]
        return len(holed) == 1 and _fits_e3(holed[0])
    return False


def _static_shape(pattern: Process, target: Optional[str]) -> bool:
    """The pattern re-creates the updated locality and only adds location-free behaviour"""
    if not isinstance(pattern, Located):
        return False
    if target is not None and pattern.name != target:
        return False
    components = _par_components(pattern.body)
    holes = [part for part in components if isinstance(part, Hole)]
    others = [part for part in components if not isinstance(part, Hole)]
    if len(holes) != 1:
        return False
    return all(free_holes(part) == 0 and not contains_location(part) for part in others)


def classify_pattern(pattern: Process, target: Optional[str] = None) -> VariantClass:
    """
    Classify an update pattern under the E1/E2/E3 disciplines.

    Args:
        pattern: Pattern, possibly containing holes
        target: Name of the update prefix carrying the pattern, used by the
            static check; None accepts any re-created locality name

    Returns:
        VariantClass, already met with every nested update pattern
    """
    e2 = _fits_e2(pattern)
    e3 = e2 and _fits_e3(pattern)
    static_ok = e3 and _static_shape(pattern, target)
    result = VariantClass(e1=True, e2=e2, e3=e3, static_ok=static_ok)
    for nested in update_prefixes(pattern):
        result = result.meet(classify_pattern(nested.pattern, nested.name))
    return result


def classify_process(process: Process) -> VariantClass:
    """Meet of the classification of every update prefix in a process"""
    result = VariantClass()
    for update in update_prefixes(process):
        result = result.meet(classify_pattern(update.pattern, update.name))
    logger.debug(f"Classified process: {result.model_dump()}")
    return result


# ---------------------------------------------------------------------------
# Barbs
# ---------------------------------------------------------------------------

def _prefix_barb(prefix: Prefix) -> Optional[Barb]:
    if isinstance(prefix, Input):
        return ("in", prefix.name)
    if isinstance(prefix, Output):
        return ("out", prefix.name)
    return None


def barbs(process: Process) -> FrozenSet[Barb]:
    """
    Input and output actions the term can perform right now.

    Localities are transparent; agrees with the In/Out labels produced by
    the transition relation.
    """
    found = set()
    for prefix in _prefixes(process):
        barb = _prefix_barb(prefix)
        if barb is not None:
            found.add(barb)
    if isinstance(process, Located):
        found |= barbs(process.body)
    elif isinstance(process, Par):
        for part in process.parts:
            found |= barbs(part)
    return frozenset(found)


def format_barb(barb: Barb) -> str:
    polarity, name = barb
    return f"^{name}" if polarity == "out" else name


def parse_barb(text: str) -> Barb:
    """`^e` is an output barb, `e` an input barb"""
    text = text.strip()
    if text.startswith("^"):
        return ("out", text[1:])
    return ("in", text)
