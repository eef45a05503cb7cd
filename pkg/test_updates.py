"""
Tests for dynamic updates: validation, internal and external updates,
scoped projection, simulation and trace correspondence
"""

import pytest

from evoverify.choreography import (
    ONE,
    Interaction,
    Parallel,
    UpdatePrefix,
    UpdLabel,
    choreo_transitions,
    project_system,
    simplify,
    substitute_scope,
)
from evoverify.errors import EvoVerifyError, InvalidUpdate, NoSuchTransition
from evoverify.grammar import parse_choreography
from evoverify.orchestration import SysUpdate, system_transitions
from evoverify.printer import render
from evoverify.reports import format_validation
from evoverify.updates import (
    UpdateProblem,
    apply_external_system_update,
    apply_external_update,
    simulate,
    trace_correspondence,
    uchoreo_transitions,
    uproject,
    usystem_transitions,
    validate_updatable,
)
from templates import ProtocolTemplates

UPDATED_CHOREOGRAPHY = (
    "(Offer:Seller->Buyer | PayDescr:Seller->Bank) ; "
    "X:{Buyer,Bank}[VISAcode:Buyer->Bank ; VISAok:Bank->Buyer] ; "
    "(Confirm:Bank->Seller | Receipt:Bank->Buyer)"
)
UPDATED_SYSTEM = (
    "[PayDescr? ; X[VISAcode? ; VISAok!Buyer] ; (Confirm!Seller | Receipt!Buyer)]@Bank || "
    "[Offer? ; X[VISAcode!Bank ; VISAok?] ; Receipt?]@Buyer || "
    "[(Offer!Buyer | PayDescr!Bank) ; Confirm?]@Seller"
)


def script(text):
    return text.splitlines()


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def test_adaptable_protocol_is_well_defined(adaptable_bsb):
    report = validate_updatable(adaptable_bsb)
    assert report.valid
    assert report.problems == []


@pytest.mark.parametrize("text,path,problem", [
    ("X:{r,s}[a:r->t]", "root", "scope X:{r,s}[a:r->t] involves roles ['t'] outside its type"),
    ("X:{r,s}[a:r->s] ; X:{r,t}[b:r->t]", "root.right", "scope X declared with roles ['r', 't'] and ['r', 's']"),
    ("X:{r,s}[a:r->s] | X:{r,s}[b:r->s]", "root", "scope X may be active twice in X:{r,s}[a:r->s] | X:{r,s}[b:r->s]"),
    ("a:r->s ; Y{r: b:r->s}", "root.right", "update Y{r: b:r->s} targets scope Y, which does not occur"),
    ("X:{r,s}[a:r->s] | X{r: b:r->t}", "root.right", "update X{r: b:r->t} involves roles ['t'] outside type(X) = ['r', 's']"),
    ("c:r->s ; (X:{r,s}[a:r->s] + d:s->r)* ; X{r: Y{s: b:r->s}}", "root.right.body",
     "update Y{s: b:r->s} targets scope Y, which does not occur"),
])
def test_validation_problems(text, path, problem):
    report = validate_updatable(parse_choreography(text))
    assert not report.valid
    assert UpdateProblem(path=path, message=problem) in report.problems
    assert problem in report.messages


def test_validation_problems_are_listed_with_their_paths():
    report = validate_updatable(parse_choreography("a:r->s ; X:{r,s}[b:r->t]"))
    assert format_validation(report) == (
        "invalid\n  - root.right: scope X:{r,s}[b:r->t] involves roles ['t'] outside its type"
    )


def test_substitution_is_idempotent(adaptable_bsb, visa):
    once = substitute_scope(adaptable_bsb, "X", visa)
    assert substitute_scope(once, "X", visa) == once
    assert substitute_scope(adaptable_bsb, "Y", visa) == adaptable_bsb


# ---------------------------------------------------------------------------
# Choreography level
# ---------------------------------------------------------------------------

def test_internal_update(adaptable_bsb, visa):
    term = Parallel(adaptable_bsb, UpdatePrefix("X", "Buyer", visa))
    updates = [(label, target) for label, target in uchoreo_transitions(term) if isinstance(label, UpdLabel)]
    assert len(updates) == 1
    assert updates[0][0] == UpdLabel("X", "Buyer", visa)

    log = simulate(term, ["step Request", "step X"], normalize=True)
    assert log.final_state == UPDATED_CHOREOGRAPHY
    assert log.labels()[-1] == "X{Buyer: VISAcode:Buyer->Bank ; VISAok:Bank->Buyer}"


def test_update_inside_a_loop_renews_the_body():
    loop = parse_choreography("(X:{r,s}[a:r->s] ; X{r: b:r->s})*")
    assert not any(isinstance(label, UpdLabel) for label, _ in choreo_transitions(loop))
    after_a = next(target for label, target in choreo_transitions(loop) if label == Interaction("a", "r", "s"))
    renewed = [render(target) for label, target in choreo_transitions(after_a) if isinstance(label, UpdLabel)]
    assert renewed == ["1 ; (X:{r,s}[b:r->s] ; X{r: b:r->s})*"]


def test_external_update(adaptable_bsb, visa):
    label, updated = apply_external_update(adaptable_bsb, "X", visa)
    assert label == UpdLabel("X", "env", visa)
    assert updated == substitute_scope(adaptable_bsb, "X", visa)


def test_external_update_errors(adaptable_bsb, visa):
    with pytest.raises(InvalidUpdate):
        apply_external_update(adaptable_bsb, "Y", visa)
    with pytest.raises(InvalidUpdate) as error:
        apply_external_update(adaptable_bsb, "X", parse_choreography("c:Buyer->Seller"))
    assert "Seller" in str(error.value)


def test_scoped_projection(adaptable_bsb):
    assert render(simplify(uproject(adaptable_bsb, "Buyer"))) == "Request!Seller ; Offer? ; X[Payment!Bank] ; Receipt?"
    assert "X[" not in render(uproject(adaptable_bsb, "Seller"))
    assert uproject(parse_choreography("X{r: a:r->s}"), "s") == ONE


def test_projected_update_carries_one_body_per_scope_role():
    term = parse_choreography("X:{r,s}[a:r->s] | X{r: b:r->s}")
    projected = uproject(term, "r")
    assert render(projected) == "X[a!s] | X{(r,s): b!s, b?}"


# ---------------------------------------------------------------------------
# System level
# ---------------------------------------------------------------------------

def test_external_system_update(adaptable_bsb, visa):
    system = project_system(adaptable_bsb)
    bodies = [uproject(visa, "Buyer"), uproject(visa, "Bank")]
    label, updated = apply_external_system_update(system, "X", ["Buyer", "Bank"], bodies, role="Buyer")
    assert label == SysUpdate("X", "Buyer", ("Buyer", "Bank"), tuple(bodies))
    assert render(simplify(updated.term_of("Bank"))) == "PayDescr? ; X[VISAcode? ; VISAok!Buyer] ; (Confirm!Seller | Receipt!Buyer)"
    assert updated.term_of("Seller") == system.term_of("Seller")


def test_external_system_update_errors(adaptable_bsb, visa):
    system = project_system(adaptable_bsb)
    bodies = [uproject(visa, "Buyer"), uproject(visa, "Bank")]
    with pytest.raises(InvalidUpdate):
        apply_external_system_update(system, "Y", ["Buyer", "Bank"], bodies)
    with pytest.raises(InvalidUpdate):
        apply_external_system_update(system, "X", ["Buyer"], bodies[:1])
    with pytest.raises(InvalidUpdate):
        apply_external_system_update(system, "X", ["Buyer", "Bank"], bodies[:1])


def test_system_transitions_are_shared(adaptable_bsb):
    system = project_system(adaptable_bsb)
    assert usystem_transitions(system) == system_transitions(system)


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------

def test_choreography_run(adaptable_bsb):
    log = simulate(adaptable_bsb, script(ProtocolTemplates.visa_script()), normalize=True)
    assert log.kind == "choreography"
    assert log.labels() == [
        "Request:Buyer->Seller",
        "X{Buyer: VISAcode:Buyer->Bank ; VISAok:Bank->Buyer}",
        "Offer:Seller->Buyer",
        "PayDescr:Seller->Bank",
        "VISAcode:Buyer->Bank",
        "VISAok:Bank->Buyer",
        "Confirm:Bank->Seller",
        "Receipt:Bank->Buyer",
        "√",
    ]
    assert log.entries[2].state == UPDATED_CHOREOGRAPHY
    assert log.entries[0].label is None


def test_system_run(adaptable_bsb):
    log = simulate(project_system(adaptable_bsb), script(ProtocolTemplates.visa_script()), normalize=True)
    assert log.kind == "system"
    labels = log.labels()
    assert labels[0] == "Request:Buyer->Seller"
    assert labels[1] == "X{(Buyer,Bank): VISAcode!Bank ; VISAok?, VISAcode? ; VISAok!Buyer}@Buyer"
    assert log.entries[2].state == UPDATED_SYSTEM
    assert "VISAok:Bank->Buyer" in labels
    assert labels[-1] == "√"


def test_run_log_output(adaptable_bsb):
    log = simulate(adaptable_bsb, ["step 1"])
    assert "  --Request:Buyer->Seller-->" in log.to_text()
    assert log.to_json()[0] == {"state": render(adaptable_bsb), "label": None}


def test_empty_script(adaptable_bsb):
    log = simulate(adaptable_bsb, ["", "# nothing to do"])
    assert len(log.entries) == 1
    assert log.final_state == render(adaptable_bsb)


def test_auto_with_count_and_limit(adaptable_bsb):
    assert simulate(adaptable_bsb, ["auto 2"]).labels() == ["Request:Buyer->Seller", "Offer:Seller->Buyer"]
    assert len(simulate(adaptable_bsb, ["auto"], auto_limit=3).labels()) == 3


def test_update_body_from_file(adaptable_bsb, tmp_path):
    (tmp_path / "visa.ch").write_text(ProtocolTemplates.visa_payment(), encoding="utf-8")
    log = simulate(adaptable_bsb, ["step Request", "update X Buyer,Bank @visa.ch"], base_dir=tmp_path,
                   normalize=True)
    assert log.final_state == UPDATED_CHOREOGRAPHY


def test_simulation_errors(adaptable_bsb):
    with pytest.raises(NoSuchTransition):
        simulate(adaptable_bsb, ["step Payment"])
    with pytest.raises(NoSuchTransition):
        simulate(adaptable_bsb, ["step 2"])
    with pytest.raises(EvoVerifyError):
        simulate(adaptable_bsb, ["jump 3"])
    with pytest.raises(EvoVerifyError):
        simulate(adaptable_bsb, ["auto soon"])
    with pytest.raises(InvalidUpdate):
        simulate(adaptable_bsb, ["update Y Buyer a:Buyer->Bank"])


def test_no_steps_after_termination():
    with pytest.raises(NoSuchTransition):
        simulate(parse_choreography("a:r->s"), ["auto", "step 1"])


# ---------------------------------------------------------------------------
# Trace correspondence
# ---------------------------------------------------------------------------

def test_trace_correspondence(adaptable_bsb):
    report = trace_correspondence(adaptable_bsb)
    assert report.included
    assert report.counterexample is None
    assert report.states > 0


def test_trace_correspondence_with_an_update():
    report = trace_correspondence(parse_choreography("X:{r,s}[a:r->s] | X{r: b:r->s}"))
    assert report.included
