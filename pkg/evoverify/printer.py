"""
Pretty printer
Renders every AST and label in the concrete text syntax with the fewest
parentheses that still parse back to the same tree.
"""

from typing import Dict

from . import choreography as ch
from . import lts
from . import orchestration as orc
from .logic import And, Atom, Ev, Formula, Next, Not, Or, Truth, postorder
from .process import Hole, Input, Located, Nil, Output, Par, Placeholder, Prefix, Process, Repl, Sum, Update

PLACEHOLDER_SYMBOL = "⋆"


# ---------------------------------------------------------------------------
# E processes
# ---------------------------------------------------------------------------

def render_prefix(prefix: Prefix) -> str:
    if isinstance(prefix, Input):
        return prefix.name
    if isinstance(prefix, Output):
        return f"^{prefix.name}"
    return f"{prefix.name}{{{render_process(prefix.pattern)}}}"


def _render_unit(process: Process) -> str:
    """Body of a prefix: sums of several branches and parallels need parentheses"""
    if isinstance(process, Par) or (isinstance(process, Sum) and len(process.branches) > 1):
        return f"({render_process(process)})"
    return render_process(process)


def _render_component(process: Process) -> str:
    if isinstance(process, Par):
        return f"({render_process(process)})"
    return render_process(process)


def render_process(process: Process) -> str:
    """Render a process or pattern"""
    if isinstance(process, Nil):
        return "0"
    if isinstance(process, Hole):
        return "@"
    if isinstance(process, Placeholder):
        return PLACEHOLDER_SYMBOL
    if isinstance(process, Located):
        return f"{process.name}[{render_process(process.body)}]"
    if isinstance(process, Par):
        if not process.parts:
            return "0"
        return " | ".join(_render_component(part) for part in process.parts)
    if isinstance(process, Repl):
        return f"!{render_prefix(process.prefix)}.{_render_unit(process.body)}"
    if isinstance(process, Sum):
        if not process.branches:
            return "0"
        return " + ".join(f"{render_prefix(prefix)}.{_render_unit(body)}" for prefix, body in process.branches)
    raise TypeError(f"not a process: {process!r}")


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

_FORMULA_LEVEL = {Or: 1, And: 2}


def _formula_level(formula: Formula) -> int:
    return _FORMULA_LEVEL.get(type(formula), 3)


def _render_formula_node(formula: Formula, texts: Dict[int, str]) -> str:
    if isinstance(formula, Truth):
        return "tt"
    if isinstance(formula, Atom):
        return f"^{formula.name}" if formula.polarity == "out" else formula.name
    if isinstance(formula, (Or, And)):
        level = _formula_level(formula)
        left = texts[id(formula.left)]
        if _formula_level(formula.left) < level:
            left = f"({left})"
        right = texts[id(formula.right)]
        if _formula_level(formula.right) <= level:
            right = f"({right})"
        keyword = "or" if isinstance(formula, Or) else "and"
        return f"{left} {keyword} {right}"
    keyword = {Not: "not", Next: "<>", Ev: "ev"}[type(formula)]
    body = texts[id(formula.body)]
    if _formula_level(formula.body) < 3:
        body = f"({body})"
    return f"{keyword} {body}"


def render_formula(formula: Formula) -> str:
    # bottom-up, schema instances nest thousands deep
    texts: Dict[int, str] = {}
    for node in postorder(formula):
        texts[id(node)] = _render_formula_node(node, texts)
    return texts[id(formula)]


# ---------------------------------------------------------------------------
# Choreographies and orchestrations
# ---------------------------------------------------------------------------

_TERM_LEVEL = {ch.Parallel: 1, ch.Choice: 2, ch.Seq: 3, ch.Star: 4}
_OPERATOR = {ch.Parallel: "|", ch.Choice: "+", ch.Seq: ";"}


def _term_level(term) -> int:
    return _TERM_LEVEL.get(type(term), 5)


def _render_leaf(term) -> str:
    if isinstance(term, ch.One):
        return "1"
    if isinstance(term, ch.Zero):
        return "0"
    if isinstance(term, ch.Interaction):
        return f"{term.name}:{term.sender}->{term.receiver}"
    if isinstance(term, ch.Scope):
        return f"{term.name}:{{{','.join(term.roles)}}}[{render(term.body)}]"
    if isinstance(term, ch.UpdatePrefix):
        return f"{term.name}{{{term.role}: {render(term.body)}}}"
    if isinstance(term, orc.TauAction):
        return "tau"
    if isinstance(term, orc.Receive):
        return f"{term.name}?"
    if isinstance(term, orc.Send):
        return f"{term.name}!{term.to}"
    if isinstance(term, orc.OScope):
        flag = "@A" if term.active else ""
        return f"{term.name}[{render(term.body)}]{flag}"
    if isinstance(term, orc.OUpdate):
        bodies = ", ".join(render(body) for body in term.bodies)
        return f"{term.name}{{({','.join(term.roles)}): {bodies}}}"
    raise TypeError(f"not a choreography or orchestration: {term!r}")


def render(term) -> str:
    """Render a choreography or an orchestration"""
    if isinstance(term, ch.Star):
        body = render(term.body)
        if _term_level(term.body) < 4:
            body = f"({body})"
        return f"{body}*"
    if isinstance(term, (ch.Seq, ch.Choice, ch.Parallel)):
        level = _term_level(term)
        left = render(term.left)
        if _term_level(term.left) < level:
            left = f"({left})"
        right = render(term.right)
        if _term_level(term.right) <= level:
            right = f"({right})"
        return f"{left} {_OPERATOR[type(term)]} {right}"
    return _render_leaf(term)


render_choreography = render
render_orchestration = render


def render_system(system: orc.System) -> str:
    return " || ".join(f"[{render(term)}]@{role}" for role, term in system.members)


# ---------------------------------------------------------------------------
# Labels
# ---------------------------------------------------------------------------

def render_label(label) -> str:
    """Render a transition label of any of the calculi"""
    from .automata import UpdateSymbol

    # E calculus
    if isinstance(label, lts.In):
        return label.name
    if isinstance(label, lts.Out):
        return f"^{label.name}"
    if isinstance(label, lts.Tau):
        return "tau"
    if isinstance(label, lts.LocState):
        return f"{label.name}[{render_process(label.state)}]"
    if isinstance(label, lts.UpdOffer):
        return f"{label.name}{{{render_process(label.pattern)}}}"

    # choreographies and systems
    if isinstance(label, ch.Interaction):
        return f"{label.name}:{label.sender}->{label.receiver}"
    if isinstance(label, ch.Tick):
        return "√"
    if isinstance(label, ch.UpdLabel):
        return f"{label.scope}{{{label.role}: {render(label.body)}}}"
    if isinstance(label, orc.SysTau):
        return "tau"
    if isinstance(label, orc.PendingIn):
        return f"{label.name}@{label.role}"
    if isinstance(label, orc.PendingOut):
        return f"^{label.name}@{label.sender}->{label.receiver}"
    if isinstance(label, orc.SysUpdate):
        bodies = ", ".join(render(body) for body in label.bodies)
        return f"{label.scope}{{({','.join(label.roles)}): {bodies}}}@{label.role}"
    if isinstance(label, UpdateSymbol):
        return f"{label.scope}{{{label.role}}}"

    # orchestrations
    if isinstance(label, orc.LocalTau):
        return "tau"
    if isinstance(label, orc.LocalIn):
        return f"{label.name}?"
    if isinstance(label, orc.LocalOut):
        return f"{label.name}!{label.to}"
    if isinstance(label, orc.ScopeStart):
        return f"start {label.scope}"
    if isinstance(label, orc.ScopeEnd):
        return f"end {label.scope}"
    if isinstance(label, orc.LocalUpdate):
        bodies = ", ".join(render(body) for body in label.bodies)
        return f"{label.scope}{{({','.join(label.roles)}): {bodies}}}"
    raise TypeError(f"not a label: {label!r}")
