"""
Tests for trace automata
"""

from evoverify.automata import TraceAutomaton, UpdateSymbol, symbol_key
from evoverify.choreography import TICK, Interaction
from evoverify.grammar import parse_choreography, parse_system

A = Interaction("a", "r", "s")
B = Interaction("b", "t", "u")


def automaton(text):
    return TraceAutomaton.from_choreography(parse_choreography(text))


def test_words_end_with_termination():
    sequence = automaton("a:r->s ; b:t->u")
    assert sequence.words(3) == {(A, B, TICK)}
    assert sequence.words(2) == set()


def test_accepts():
    sequence = automaton("a:r->s ; b:t->u")
    assert sequence.accepts([A, B, TICK])
    assert not sequence.accepts([A, TICK])
    assert not sequence.accepts([B])


def test_inclusion_and_shortest_counterexample():
    sequence = automaton("a:r->s ; b:t->u")
    parallel = automaton("a:r->s | b:t->u")
    assert sequence.is_included_in(parallel)
    assert not parallel.is_included_in(sequence)
    assert parallel.counterexample(sequence) == [B, A, TICK]


def test_symbol_order():
    update = UpdateSymbol("X", "r")
    assert sorted([TICK, update, B, A], key=symbol_key) == [A, B, update, TICK]


def test_projection_traces_are_choreography_traces(bsb, bsb_system):
    implementation = TraceAutomaton.from_system(bsb_system)
    assert implementation.is_included_in(TraceAutomaton.from_choreography(bsb))


def test_system_words_end_with_termination():
    implementation = TraceAutomaton.from_system(parse_system("[a!s]@r || [a?]@s"))
    interaction = Interaction("a", "r", "s")
    assert implementation.accepts([interaction, TICK])
    assert not implementation.accepts([interaction])
    assert not implementation.accepts([TICK])
