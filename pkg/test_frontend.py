"""
Tests for the parsers and the pretty printer
"""

import pytest

from evoverify import choreography as ch
from evoverify import orchestration as orc
from evoverify.errors import (
    DuplicateRole,
    EvoVerifyError,
    HoleOutsidePattern,
    ReservedSymbol,
    SelfAddressedOutput,
    TermSyntaxError,
)
from evoverify.grammar import (
    parse,
    parse_choreography,
    parse_formula,
    parse_orchestration,
    parse_pattern,
    parse_process,
    parse_system,
)
from evoverify.logic import And, Atom, Ev, Next, Not, Or
from evoverify.lts import TAU, In, LocState, Out, UpdOffer
from evoverify.printer import render, render_formula, render_label, render_process, render_system
from evoverify.process import HOLE, NIL, PLACEHOLDER, Input, Located, Output, Par, Repl, Sum, Update


@pytest.mark.parametrize("text", [
    "0",
    "a.b.0 + ^c.0",
    "!a.(b.0 | c.0)",
    "a.(b.0 + c.0)",
    "l[a.0 | ^b.0]",
    "a{l[@ | ^x.0]}.0",
    "a[b.0] | a{0}.c.0",
    "(a.0 | b.0) | c.0",
])
def test_process_round_trip(text):
    assert render_process(parse_process(text)) == text


def test_process_structure():
    assert parse_process("a.0 | ^b.0") == Par((Sum(((Input("a"), NIL),)), Sum(((Output("b"), NIL),))))
    assert parse_process("!a.0") == Repl(Input("a"), NIL)
    assert parse_process("l{@}.0") == Sum(((Update("l", HOLE), NIL),))
    assert parse_process("l[0]") == Located("l", NIL)


def test_process_syntax_errors():
    with pytest.raises(TermSyntaxError):
        parse_process("a.")
    with pytest.raises(TermSyntaxError):
        parse_process("a.0 |")
    with pytest.raises(TermSyntaxError):
        parse_process("A.0")


def test_hole_outside_pattern():
    with pytest.raises(HoleOutsidePattern) as error:
        parse_process("a.0 | @")
    assert error.value.position == 6
    with pytest.raises(HoleOutsidePattern):
        parse_process("l[@]")
    assert parse_pattern("l[@]") == Located("l", HOLE)


def test_reserved_placeholder():
    with pytest.raises(ReservedSymbol) as error:
        parse_process("a.⋆")
    assert error.value.position == 2
    with pytest.raises(ReservedSymbol):
        parse_pattern("*")


def test_formula_precedence():
    assert parse_formula("a or b and c") == Or(Atom("in", "a"), And(Atom("in", "b"), Atom("in", "c")))
    assert parse_formula("not a and ^b") == And(Not(Atom("in", "a")), Atom("out", "b"))
    assert parse_formula("ev <> ^e") == Ev(Next(Atom("out", "e")))
    assert parse_formula("eve") == Atom("in", "eve")


@pytest.mark.parametrize("text", [
    "tt",
    "not ev (^e and <> ^e)",
    "not ev (e and <> ev (not e and <> ev e))",
    "a or b or c",
    "a and (b or c)",
    "a or (b or c)",
])
def test_formula_round_trip(text):
    assert render_formula(parse_formula(text)) == text


def test_choreography_precedence():
    a, b, c = ch.Interaction("a", "r", "s"), ch.Interaction("b", "s", "t"), ch.Interaction("c", "t", "r")
    assert parse_choreography("a:r->s ; b:s->t | c:t->r") == ch.Parallel(ch.Seq(a, b), c)
    assert parse_choreography("a:r->s + b:s->t ; c:t->r") == ch.Choice(a, ch.Seq(b, c))
    assert parse_choreography("(a:r->s ; b:s->t)*") == ch.Star(ch.Seq(a, b))
    assert parse_choreography("a:r->s ; b:s->t ; c:t->r") == ch.Seq(ch.Seq(a, b), c)


def test_choreography_scopes_and_updates():
    scope = parse_choreography("X:{r,s}[a:r->s]")
    assert scope == ch.Scope("X", ("r", "s"), ch.Interaction("a", "r", "s"))
    update = parse_choreography("X{r: b:r->s ; 1}")
    assert update == ch.UpdatePrefix("X", "r", ch.Seq(ch.Interaction("b", "r", "s"), ch.ONE))


def test_choreography_errors():
    with pytest.raises(TermSyntaxError):
        parse_choreography("x:{r,s}[a:r->s]")
    with pytest.raises(TermSyntaxError):
        parse_choreography("a:r->r")
    with pytest.raises(TermSyntaxError):
        parse_choreography("a:r->s ;")


@pytest.mark.parametrize("text", [
    "Request:Buyer->Seller ; (Offer:Seller->Buyer | PayDescr:Seller->Bank)",
    "a:r->s ; (b:s->r ; c:r->s)",
    "(a:r->s + b:r->s)* | 1",
    "X:{Buyer,Bank}[Payment:Buyer->Bank] ; 0",
    "X{r: a:r->s + b:r->s}",
])
def test_choreography_round_trip(text):
    assert render(parse_choreography(text)) == text


def test_orchestration_terms():
    buyer = parse_orchestration("Request!Seller ; Offer? ; X[Payment!Bank] ; Receipt?")
    assert buyer == ch.Seq(
        ch.Seq(ch.Seq(orc.Send("Request", "Seller"), orc.Receive("Offer")),
               orc.OScope("X", orc.Send("Payment", "Bank"))),
        orc.Receive("Receipt"),
    )
    assert parse_orchestration("X[a?]@A") == orc.OScope("X", orc.Receive("a"), True)
    assert parse_orchestration("tau ; 1") == ch.Seq(orc.TAU_ACTION, ch.ONE)


def test_orchestration_update():
    text = "X{(Buyer,Bank): VISAcode!Bank ; VISAok?, VISAcode? ; VISAok!Buyer}"
    update = parse_orchestration(text)
    assert isinstance(update, orc.OUpdate)
    assert update.roles == ("Buyer", "Bank")
    assert update.bodies[1] == ch.Seq(orc.Receive("VISAcode"), orc.Send("VISAok", "Buyer"))
    assert render(update) == text


def test_orchestration_update_arity():
    with pytest.raises(TermSyntaxError):
        parse_orchestration("X{(r,s): a!s}")


def test_system(bsb_system):
    assert bsb_system.roles == ("Buyer", "Seller", "Bank")
    assert render_system(bsb_system).startswith("[Request!Seller ; Offer? ; Payment!Bank ; Receipt?]@Buyer || ")
    active = parse_system("[X[a!s]@A]@r || [X[a?]]@s")
    assert active.term_of("r") == orc.OScope("X", orc.Send("a", "s"), True)
    assert render_system(active) == "[X[a!s]@A]@r || [X[a?]]@s"


def test_system_errors():
    with pytest.raises(DuplicateRole):
        parse_system("[a!s]@r || [a?]@r")
    with pytest.raises(SelfAddressedOutput):
        parse_system("[a!r]@r")


def test_parse_by_kind():
    assert parse("a.0", "process") == parse_process("a.0")
    assert parse("tt", "formula") == parse_formula("tt")
    with pytest.raises(EvoVerifyError):
        parse("a.0", "lambda")


def test_render_labels():
    assert render_label(In("a")) == "a"
    assert render_label(Out("a")) == "^a"
    assert render_label(TAU) == "tau"
    assert render_label(LocState("l", parse_process("b.0"))) == "l[b.0]"
    assert render_label(UpdOffer("l", parse_pattern("l[@]"))) == "l{l[@]}"
    assert render_label(ch.Interaction("a", "r", "s")) == "a:r->s"
    assert render_label(ch.TICK) == "√"
    assert render_label(ch.UpdLabel("X", "r", ch.Interaction("b", "r", "s"))) == "X{r: b:r->s}"
    assert render_label(orc.SysTau("start X")) == "tau"
    assert render_label(orc.PendingOut("a", "r", "s")) == "^a@r->s"
    assert render_label(orc.PendingIn("a", "s")) == "a@s"
    assert render_process(Par((PLACEHOLDER, NIL))) == "⋆ | 0"


def test_templates_parse():
    from templates import ProcessTemplates, ProtocolTemplates

    for name, text in ProtocolTemplates.get_choreographies().items():
        assert render(parse_choreography(text)), name
    for name, text in ProcessTemplates.get_processes().items():
        assert render_process(parse_process(text)), name
