"""
Parsers for the concrete syntax
E processes and update patterns, logic formulas, choreographies,
orchestrations and systems, each with its own LALR grammar.
"""

import logging
from functools import lru_cache
from typing import Callable, Dict

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from . import choreography as ch
from . import orchestration as orc
from .errors import EvoVerifyError, HoleOutsidePattern, ReservedSymbol, TermSyntaxError
from .logic import And, Atom, Ev, Formula, Next, Not, Or, TT
from .process import HOLE, NIL, Input, Located, Output, Par, Process, Repl, Sum, Update, free_holes

logger = logging.getLogger(__name__)

PROCESS_GRAMMAR = r"""
?start: par

?par: choice ("|" choice)*
?choice: guarded ("+" guarded)+ -> sum
       | unit
?unit: guarded
     | repl
     | atom
guarded: prefix "." unit
repl: "!" prefix "." unit
?atom: "0"                 -> nil
     | "@"                 -> hole
     | NAME "[" par "]"    -> located
     | "(" par ")"
?prefix: NAME              -> input
       | "^" NAME          -> output
       | NAME "{" par "}"  -> update

NAME: /[a-z][A-Za-z0-9_]*/

%import common.WS
%ignore WS
"""

FORMULA_GRAMMAR = r"""
?start: disj

?disj: disj "or" conj      -> or_
     | conj
?conj: conj "and" unary    -> and_
     | unary
?unary: "not" unary        -> not_
      | "<>" unary         -> next_
      | "ev" unary         -> ev
      | fatom
?fatom: "tt"               -> truth
      | NAME               -> in_atom
      | "^" NAME           -> out_atom
      | "(" disj ")"

NAME: /[a-z][A-Za-z0-9_]*/

%import common.WS
%ignore WS
"""

# Operation names may start upper-case; scope names are checked by the transformer
CHOREOGRAPHY_GRAMMAR = r"""
?start: chor

?chor: chor "|" cchoice                                 -> parallel
     | cchoice
?cchoice: cchoice "+" cseq                              -> choice
        | cseq
?cseq: cseq ";" cstar                                   -> seq
     | cstar
?cstar: cstar "*"                                       -> star
      | catom
?catom: IDENT ":" IDENT "->" IDENT                      -> interaction
      | IDENT ":" "{" IDENT ("," IDENT)* "}" "[" chor "]" -> scope
      | IDENT "{" IDENT ":" chor "}"                    -> update
      | "1"                                             -> one
      | "0"                                             -> zero
      | "(" chor ")"

IDENT: /[A-Za-z][A-Za-z0-9_]*/

%import common.WS
%ignore WS
"""

ORCHESTRATION_GRAMMAR = r"""
?start: orch

system: member ("||" member)*
member: "[" orch "]" "@" IDENT

?orch: orch "|" ochoice                                 -> parallel
     | ochoice
?ochoice: ochoice "+" oseq                              -> choice
        | oseq
?oseq: oseq ";" ostar                                   -> seq
     | ostar
?ostar: ostar "*"                                       -> star
      | oatom
?oatom: "0"                                             -> zero
      | "1"                                             -> one
      | "tau"                                           -> tau
      | IDENT "?"                                       -> receive
      | IDENT "!" IDENT                                 -> send
      | IDENT "[" orch "]" ACTIVE?                      -> oscope
      | IDENT "{" "(" IDENT ("," IDENT)* ")" ":" orch ("," orch)* "}" -> oupdate
      | "(" orch ")"

ACTIVE: /@[ \t]*A(?![A-Za-z0-9_])/
IDENT: /[A-Za-z][A-Za-z0-9_]*/

%import common.WS
%ignore WS
"""


def _scope_name(token) -> str:
    if not token[0].isupper():
        raise TermSyntaxError(token.start_pos, ["scope name"], f"scope name '{token}' must start upper-case")
    return str(token)


@v_args(inline=True)
class ProcessBuilder(Transformer):
    """Turns process parse trees into Process ASTs"""

    def par(self, *parts):
        return Par(tuple(parts))

    def sum(self, *branches):
        return Sum(tuple(branch.branches[0] for branch in branches))

    def guarded(self, prefix, body):
        return Sum(((prefix, body),))

    def repl(self, prefix, body):
        return Repl(prefix, body)

    def nil(self):
        return NIL

    def hole(self):
        return HOLE

    def located(self, name, body):
        return Located(str(name), body)

    def input(self, name):
        return Input(str(name))

    def output(self, name):
        return Output(str(name))

    def update(self, name, pattern):
        return Update(str(name), pattern)


@v_args(inline=True)
class FormulaBuilder(Transformer):
    def or_(self, left, right):
        return Or(left, right)

    def and_(self, left, right):
        return And(left, right)

    def not_(self, body):
        return Not(body)

    def next_(self, body):
        return Next(body)

    def ev(self, body):
        return Ev(body)

    def truth(self):
        return TT

    def in_atom(self, name):
        return Atom("in", str(name))

    def out_atom(self, name):
        return Atom("out", str(name))


@v_args(inline=True)
class TermBuilder(Transformer):
    """Choreography, orchestration and system ASTs"""

    def parallel(self, left, right):
        return ch.Parallel(left, right)

    def choice(self, left, right):
        return ch.Choice(left, right)

    def seq(self, left, right):
        return ch.Seq(left, right)

    def star(self, body):
        return ch.Star(body)

    def one(self):
        return ch.ONE

    def zero(self):
        return ch.ZERO

    def interaction(self, name, sender, receiver):
        if sender == receiver:
            raise TermSyntaxError(receiver.start_pos, ["role"],
                                  f"interaction '{name}' has the same sender and receiver")
        return ch.Interaction(str(name), str(sender), str(receiver))

    def scope(self, name, *rest):
        *roles, body = rest
        return ch.Scope(_scope_name(name), tuple(str(role) for role in roles), body)

    def update(self, name, role, body):
        return ch.UpdatePrefix(_scope_name(name), str(role), body)

    def tau(self):
        return orc.TAU_ACTION

    def receive(self, name):
        return orc.Receive(str(name))

    def send(self, name, to):
        return orc.Send(str(name), str(to))

    def oscope(self, name, body, active=None):
        return orc.OScope(_scope_name(name), body, active is not None)

    def oupdate(self, name, *rest):
        roles = [str(item) for item in rest if isinstance(item, Token)]
        bodies = [item for item in rest if not isinstance(item, Token)]
        if len(roles) != len(bodies):
            raise TermSyntaxError(name.start_pos, ["one body per role"],
                                  f"update on {name} lists {len(roles)} roles and {len(bodies)} bodies")
        return orc.OUpdate(_scope_name(name), tuple(roles), tuple(bodies))

    def member(self, term, role):
        return (str(role), term)

    def system(self, *members):
        return orc.System(tuple(members))


@lru_cache(maxsize=None)
def _parser(grammar: str, start: str = "start") -> Lark:
    return Lark(grammar, start=start, parser="lalr", lexer="contextual", maybe_placeholders=False)


def _parse(grammar: str, text: str, builder: Transformer, start: str = "start"):
    try:
        tree = _parser(grammar, start).parse(text)
        return builder.transform(tree)
    except UnexpectedEOF as error:
        raise TermSyntaxError(len(text), error.expected, "unexpected end of input") from None
    except UnexpectedCharacters as error:
        raise TermSyntaxError(error.pos_in_stream, error.allowed or ()) from None
    except UnexpectedInput as error:
        position = error.pos_in_stream if error.pos_in_stream is not None and error.pos_in_stream >= 0 else len(text)
        raise TermSyntaxError(position, getattr(error, "expected", None) or ()) from None
    except VisitError as error:
        if isinstance(error.orig_exc, EvoVerifyError):
            raise error.orig_exc from None
        raise


def _reject_reserved(text: str):
    for position, char in enumerate(text):
        if char in ("⋆", "*"):
            raise ReservedSymbol(position, char)


def _first_free_hole(text: str) -> int:
    """Position of the first `@` outside every `{...}`"""
    depth = 0
    for position, char in enumerate(text):
        if char == "{":
            depth += 1
        elif char == "}":
            depth -= 1
        elif char == "@" and depth == 0:
            return position
    return 0


def parse_pattern(text: str) -> Process:
    """Parse an update pattern: a process that may contain holes `@`"""
    _reject_reserved(text)
    return _parse(PROCESS_GRAMMAR, text, ProcessBuilder())


def parse_process(text: str) -> Process:
    """
    Parse an E process.

    Raises:
        TermSyntaxError: text outside the grammar
        HoleOutsidePattern: a hole outside every update-prefix pattern
        ReservedSymbol: the placeholder symbol in user input
    """
    process = parse_pattern(text)
    if free_holes(process) > 0:
        raise HoleOutsidePattern(_first_free_hole(text))
    return process


def parse_formula(text: str) -> Formula:
    return _parse(FORMULA_GRAMMAR, text, FormulaBuilder())


def parse_choreography(text: str):
    return _parse(CHOREOGRAPHY_GRAMMAR, text, TermBuilder())


def parse_orchestration(text: str):
    return _parse(ORCHESTRATION_GRAMMAR, text, TermBuilder())


def parse_system(text: str) -> orc.System:
    """
    Parse a system `[C]@r || ...`.

    Raises:
        DuplicateRole: two members at the same role
        SelfAddressedOutput: an output addressed to the role it occurs at
    """
    system = _parse(ORCHESTRATION_GRAMMAR, text, TermBuilder(), start="system")
    return orc.validate_system(system)


PARSERS: Dict[str, Callable[[str], object]] = {
    "process": parse_process,
    "pattern": parse_pattern,
    "formula": parse_formula,
    "choreography": parse_choreography,
    "orchestration": parse_orchestration,
    "system": parse_system,
}


def parse(text: str, kind: str):
    """Parse `text` as a term of the given kind"""
    try:
        parser = PARSERS[kind]
    except KeyError:
        raise EvoVerifyError(f"unknown term kind '{kind}', expected one of {sorted(PARSERS)}") from None
    logger.debug(f"Parsing {kind}: {text[:60]}")
    return parser(text)
