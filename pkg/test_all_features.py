"""
End-to-end tests of the command line, settings and report exports
"""

import io
import json
import logging
from pathlib import Path

import pytest

from app import EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE, EXIT_VIOLATED, run
from evoverify.adaptation import check_EA
from evoverify.config import load_settings
from evoverify.grammar import parse_process
from evoverify.lts import explore
from evoverify.process import parse_barb
from evoverify.reports import format_verdict, generate_markdown_graph, to_html
from templates import ProcessTemplates, ProtocolTemplates
from utils import export_all_formats, setup_logging


def write(name, text):
    Path(name).write_text(text, encoding="utf-8")
    return name


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def test_help(capsys):
    assert run(["--help"]) == EXIT_OK
    assert "choreo" in capsys.readouterr().out


def test_usage_errors(capsys):
    assert run(["frobnicate"]) == EXIT_USAGE
    assert run(["check", "ba", "^e.0", "--error", "^e"]) == EXIT_USAGE
    assert run(["mc", "a.0"]) == EXIT_USAGE
    assert "error:" in capsys.readouterr().err


def test_parse(capsys):
    assert run(["parse", "a.0 | ^b.0", "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["kind"] == "process"
    assert data["term"] == "a.0 | ^b.0"

    assert run(["parse", "not ev (^e and <> ^e)", "--kind", "formula"]) == EXIT_OK
    assert "class: restricted_negation" in capsys.readouterr().out


def test_parse_error(capsys):
    assert run(["parse", "a.("]) == EXIT_USAGE
    assert "syntax error at position" in capsys.readouterr().err


def test_parse_from_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("^e.0\n"))
    assert run(["parse", "-"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("^e.0")


def test_kind_from_extension(capsys):
    write("protocol.ch", ProtocolTemplates.buyer_seller_bank())
    assert run(["parse", "protocol.ch"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == ProtocolTemplates.buyer_seller_bank()


def test_kind_mismatch():
    assert run(["check", "ba", "a:r->s", "--kind", "choreography", "--error", "e", "--k", "1"]) == EXIT_USAGE


def test_lts(capsys):
    assert run(["lts", ProcessTemplates.error_then_fix(), "--dot"]) == EXIT_OK
    assert "digraph" in capsys.readouterr().out

    assert run(["lts", ProcessTemplates.error_then_fix(), "--json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["edges"] == [[0, 1]]

    assert run(["lts", ProcessTemplates.error_then_fix()]) == EXIT_OK
    assert "| Id | Depth | Term | Barbs | Successors |" in capsys.readouterr().out


def test_bounded_adaptation(capsys):
    assert run(["check", "ba", "^e.0", "--error", "^e", "--k", "1"]) == EXIT_OK
    assert "BA(^e, k=1): HOLDS" in capsys.readouterr().out

    assert run(["check", "ba", ProcessTemplates.error_then_fix(), "--error", "^e", "--k", "0"]) == EXIT_VIOLATED
    out = capsys.readouterr().out
    assert "witness states:" in out
    assert "f[^e.0]" in out


def test_eventual_adaptation_json(capsys):
    assert run(["check", "ea", "^e.0", "--error", "^e", "--format", "json"]) == EXIT_VIOLATED
    data = json.loads(capsys.readouterr().out)
    assert data["property"] == "EA(^e)"
    assert data["status"] == "violated"
    assert data["witness"] == [0]
    assert data["complete"] is True


def test_unknown_within_bounds():
    recurring = ProcessTemplates.recurring_error()
    bound = ["--max-states", "100"]
    assert run(["check", "ba", recurring, "--error", "^e", "--k", "500", *bound]) == EXIT_UNKNOWN
    assert run(["check", "ea", recurring, "--error", "^e", *bound]) == EXIT_UNKNOWN
    assert run(["mc", recurring, "--formula", "ev ^f", *bound]) == EXIT_UNKNOWN


def test_bounds_from_environment(monkeypatch):
    monkeypatch.setenv("EVOVERIFY_MAX_STATES", "100")
    assert run(["check", "ea", ProcessTemplates.recurring_error(), "--error", "^e"]) == EXIT_UNKNOWN


def test_model_checking(capsys):
    assert run(["mc", "a.0", "--formula", "tt", "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["sat"] == [0]
    assert data["status"] == "holds"

    assert run(["mc", ProcessTemplates.error_then_fix(), "--schema", "CB", "--error", "^e",
                "--k", "2", "--classify"]) == EXIT_OK
    assert "class: restricted_negation" in capsys.readouterr().out

    write("never_ok.phi", "not ev ^ok")
    assert run(["mc", ProcessTemplates.error_then_fix(), "--formula", "never_ok.phi"]) == EXIT_VIOLATED


def test_choreography_commands(capsys):
    bsb = ProtocolTemplates.buyer_seller_bank()
    assert run(["choreo", "connected", bsb]) == EXIT_OK
    assert run(["choreo", "wf", bsb]) == EXIT_OK
    capsys.readouterr()

    assert run(["choreo", "project", bsb, "--role", "Buyer"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "Request!Seller ; Offer? ; Payment!Bank ; Receipt?"

    assert run(["choreo", "project", bsb, "--format", "json"]) == EXIT_OK
    roles = json.loads(capsys.readouterr().out)["roles"]
    assert list(roles) == ["Bank", "Buyer", "Seller"]


def test_unordered_choreography(capsys):
    unordered = ProtocolTemplates.unordered_sequence()
    assert run(["choreo", "connected", unordered]) == EXIT_VIOLATED
    assert "seq: False" in capsys.readouterr().out
    assert run(["choreo", "wf", unordered]) == EXIT_VIOLATED
    assert "trace: b:t->u a:r->s √" in capsys.readouterr().out


def test_orchestration_commands():
    write("bsb.sys", ProtocolTemplates.buyer_seller_bank_system())
    write("bsb.ch", ProtocolTemplates.buyer_seller_bank())
    assert run(["orch", "correct", "bsb.sys"]) == EXIT_OK
    assert run(["orch", "implements", "bsb.sys", "bsb.ch"]) == EXIT_OK
    assert run(["orch", "correct", "[a!s]@r || [b?]@s"]) == EXIT_VIOLATED
    assert run(["orch", "correct", "bsb.sys", "--cap", "1"]) == EXIT_UNKNOWN


def test_update_commands(capsys):
    write("adaptable.ch", ProtocolTemplates.adaptable_buyer_seller_bank())
    write("visa.script", ProtocolTemplates.visa_script())

    assert run(["upd", "validate", "adaptable.ch"]) == EXIT_OK
    assert run(["upd", "validate", "X:{r,s}[a:r->t]"]) == EXIT_VIOLATED
    assert run(["upd", "correspond", "adaptable.ch"]) == EXIT_OK
    capsys.readouterr()

    assert run(["upd", "simulate", "adaptable.ch", "--script", "visa.script", "--normalize",
                "--format", "json"]) == EXIT_OK
    entries = json.loads(capsys.readouterr().out)
    assert entries[0]["label"] is None
    assert entries[-1]["label"] == "√"

    assert run(["upd", "simulate", "adaptable.ch"]) == EXIT_USAGE
    write("bad.script", "step Payment\n")
    assert run(["upd", "simulate", "adaptable.ch", "--script", "bad.script"]) == EXIT_USAGE


def test_export(tmp_path):
    assert run(["check", "ea", "^e.0", "--error", "^e", "--export", "reports"]) == EXIT_VIOLATED
    exported = sorted(path.name for path in (tmp_path / "reports").iterdir())
    assert exported == ["EA.html", "EA.json", "EA.md"]

    assert run(["lts", "a.0 | ^a.0", "--export", "graphs"]) == EXIT_OK
    assert (tmp_path / "graphs" / "lts.dot").read_text(encoding="utf-8").startswith("digraph")


# ---------------------------------------------------------------------------
# Settings
# ---------------------------------------------------------------------------

def test_default_settings():
    settings = load_settings()
    assert settings.max_states == 100000
    assert settings.max_depth is None
    assert settings.threads == 1
    assert settings.log_dir is None


def test_environment_and_overrides(monkeypatch):
    monkeypatch.setenv("EVOVERIFY_MAX_STATES", "50")
    monkeypatch.setenv("EVOVERIFY_LOG_LEVEL", "debug")
    settings = load_settings()
    assert settings.max_states == 50
    assert settings.log_level == "DEBUG"
    assert load_settings(max_states=7, max_depth=None).max_states == 7


def test_bad_environment_value(monkeypatch):
    monkeypatch.setenv("EVOVERIFY_THREADS", "many")
    with pytest.raises(ValueError, match="EVOVERIFY_THREADS"):
        load_settings()
    assert run(["parse", "0"]) == EXIT_USAGE


def test_settings_are_validated():
    with pytest.raises(ValueError):
        load_settings(max_states=0)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def test_reports():
    graph = explore(parse_process("^e.0"))
    text = format_verdict(check_EA(graph, parse_barb("^e")))
    assert text.startswith("EA(^e): VIOLATED")
    assert "witness: 0" in text

    html = to_html(generate_markdown_graph(graph), "graph")
    assert "<table>" in html
    assert "<title>graph</title>" in html


def test_export_all_formats(tmp_path):
    exports = export_all_formats({"ok": True}, "# Title", "<p>x</p>", "report",
                                 export_dir=str(tmp_path), dot_content="digraph {}")
    assert set(exports) == {"json", "markdown", "html", "dot"}
    assert json.loads(Path(exports["json"]).read_text(encoding="utf-8")) == {"ok": True}


def test_run_log(tmp_path):
    root = logging.getLogger()
    saved = list(root.handlers), root.level
    try:
        setup_logging(str(tmp_path / "logs"), console_level=logging.ERROR)
        logging.getLogger("evoverify.lts").debug("explored 3 states")
        for handler in root.handlers:
            handler.flush()
        (run_log,) = (tmp_path / "logs").iterdir()
        lines = run_log.read_text(encoding="utf-8").splitlines()
        assert lines[0].endswith(f"EvoVerify run started, run log at {run_log}")
        assert " - evoverify.lts - DEBUG - " in lines[1]
    finally:
        for handler in root.handlers:
            handler.close()
        root.handlers[:] = saved[0]
        root.setLevel(saved[1])
