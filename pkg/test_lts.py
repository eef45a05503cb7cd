"""
Tests for the E-calculus transition relation and state-graph exploration
One hand-derived example per rule, then exploration bounds.
"""

import pytest

from evoverify.errors import PlaceholderLeak
from evoverify.generators import TermGenerator
from evoverify.grammar import parse_process
from evoverify.lts import TAU, In, LocState, Out, UpdOffer, explore, tau_successors, transitions
from evoverify.process import NIL, PLACEHOLDER, Located, canonicalize, contains_placeholder, parse_barb
from templates import ProcessTemplates


def canonical(text):
    return canonicalize(parse_process(text))


def test_sum_rule():
    assert transitions(parse_process("a.b.0 + ^c.0")) == frozenset({
        (In("a"), canonical("b.0")),
        (Out("c"), NIL),
    })


def test_replication_rule():
    assert transitions(parse_process("!a.b.0")) == frozenset({
        (In("a"), canonical("b.0 | !a.b.0")),
    })


def test_comp_and_loc_rules():
    assert transitions(parse_process("l[a.0]")) == frozenset({
        (LocState("l", parse_process("a.0")), PLACEHOLDER),
        (In("a"), Located("l", NIL)),
    })


def test_act_rule():
    assert transitions(parse_process("a.0 | b.0")) == frozenset({
        (In("a"), canonical("b.0")),
        (In("b"), canonical("a.0")),
    })


def test_act_rule_keeps_placeholder_of_state_offers():
    moves = transitions(parse_process("l[a.0] | b.0"))
    offers = [target for label, target in moves if isinstance(label, LocState)]
    assert len(offers) == 1
    assert contains_placeholder(offers[0])


@pytest.mark.parametrize("text", ["a.0 | ^a.0", "^a.0 | a.0"])
def test_communication_rules(text):
    assert transitions(parse_process(text)) == frozenset({
        (In("a"), canonical("^a.0")),
        (Out("a"), canonical("a.0")),
        (TAU, NIL),
    })


def test_update_rule():
    process = parse_process("l[b.0] | l{l[@ | @]}.0")
    assert tau_successors(process) == [canonical("l[b.0 | b.0]")]
    offers = {label for label, _ in transitions(process) if isinstance(label, UpdOffer)}
    assert offers == {UpdOffer("l", parse_process("l{l[@ | @]}.0").branches[0][0].pattern)}


def test_update_rule_symmetric():
    assert tau_successors(parse_process("l{0}.c.0 | l[b.0]")) == [canonical("c.0")]


def test_update_discards_locality():
    assert tau_successors(parse_process(ProcessTemplates.discard_update())) == [canonical("c.0")]


def test_update_extends_locality():
    assert tau_successors(parse_process(ProcessTemplates.extend_update())) == [canonical("a[b.0 | ^x.0]")]


def test_update_reaches_nested_locality():
    assert tau_successors(parse_process("l[m[a.0] | b.0] | m{0}.0")) == [canonical("l[b.0]")]


def test_no_placeholder_leaks_on_random_processes():
    generator = TermGenerator(seed=2024)
    for process in generator.processes(1000):
        try:
            moves = transitions(process)
        except PlaceholderLeak as leak:
            pytest.fail(f"placeholder leaked: {leak}")
        for label, target in moves:
            if not isinstance(label, LocState):
                assert not contains_placeholder(target)


def test_explore_complete_graph():
    graph = explore(parse_process("a.0 | ^a.0"))
    assert len(graph.states) == 2
    assert graph.edges == [(0, 1)]
    assert graph.complete
    assert graph.bounds_hit == "none"
    assert graph.deadlocks() == [1]
    assert graph.barbs[0] == frozenset({("in", "a"), ("out", "a")})


def test_explore_state_bound():
    graph = explore(parse_process(ProcessTemplates.recurring_error()), max_states=100)
    assert len(graph.states) == 100
    assert not graph.complete
    assert graph.bounds_hit == "max_states"
    assert graph.frontier == [99]
    assert graph.depth[99] == 99
    # the frontier state is not a deadlock
    assert graph.deadlocks() == []


def test_explore_depth_bound():
    graph = explore(parse_process(ProcessTemplates.recurring_error()), max_depth=3)
    assert len(graph.states) == 4
    assert graph.frontier == [3]
    assert graph.bounds_hit == "max_depth"
    assert graph.bounds() == {"max_states": 100000, "max_depth": 3}


def test_explore_is_thread_independent():
    process = parse_process("!a.^e.0 | !^a.0 | f[^e.0] | f{f[@ | ^ok.0]}.0")
    sequential = explore(process, max_states=60)
    parallel = explore(process, max_states=60, threads=4)
    assert sequential.states == parallel.states
    assert sequential.edges == parallel.edges
    assert sequential.frontier == parallel.frontier


def test_explore_rejects_empty_bound():
    with pytest.raises(ValueError):
        explore(parse_process("0"), max_states=0)


def test_graph_exports():
    graph = explore(parse_process(ProcessTemplates.error_then_fix()))
    data = graph.to_json()
    assert [state["barbs"] for state in data["states"]] == [["^e"], ["^ok"]]
    assert data["edges"] == [[0, 1]]
    assert data["complete"] is True
    dot = graph.to_dot()
    assert "digraph" in dot
    assert "->" in dot
    assert parse_barb("^e") in graph.barbs[0]
