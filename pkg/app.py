"""
EvoVerify - command line interface
Parses terms from files, runs the checkers and reports verdicts with exit codes
0 (holds/valid), 1 (violated/invalid), 2 (unknown within the bounds) and 3
(usage or input error).
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from evoverify.adaptation import check_BA, check_EA
from evoverify.choreography import check_connectedness, check_well_formed, project, project_system, simplify
from evoverify.config import VerifierSettings, load_settings
from evoverify.errors import EvoVerifyError, StateBound
from evoverify.grammar import parse
from evoverify.logic import Formula, classify_formula, model_check
from evoverify.lts import explore
from evoverify.orchestration import System, check_correct_composition, check_implements
from evoverify.printer import render, render_formula, render_process, render_system
from evoverify.process import classify_process, parse_barb
from evoverify.reports import (
    format_connectedness,
    format_validation,
    format_verdict,
    generate_markdown_graph,
    generate_markdown_run,
    generate_markdown_verdicts,
    to_html,
)
from evoverify.updates import simulate, trace_correspondence, validate_updatable
from evoverify.verdict import Verdict
from templates import FormulaSchemas
from utils import export_all_formats, setup_logging

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_VIOLATED, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3

EXTENSION_KINDS = {
    ".ev": "process",
    ".pat": "pattern",
    ".phi": "formula",
    ".ltl": "formula",
    ".ch": "choreography",
    ".orc": "orchestration",
    ".sys": "system",
}


class UsageError(EvoVerifyError):
    """Command line arguments that argparse accepts but the command cannot use"""


class _ArgumentParser(argparse.ArgumentParser):
    """Raises instead of exiting so `run` can map usage errors to exit code 3"""

    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# Input
# ---------------------------------------------------------------------------

def read_source(source: str) -> Tuple[str, Optional[Path]]:
    """
    Text of a command-line term argument.

    `-` reads standard input, an existing path is read as a file and
    anything else is taken as the term itself.
    """
    if source == "-":
        return sys.stdin.read(), None
    path = Path(source)
    try:
        is_file = path.is_file()
    except OSError:
        # inline terms longer than a file name
        is_file = False
    if is_file:
        return path.read_text(encoding="utf-8"), path
    return source, None


def load_term(source: str, kind: Optional[str] = None, default: str = "process"):
    """Parse a term argument; the kind comes from --kind, then the file extension"""
    text, path = read_source(source)
    if kind is None:
        kind = EXTENSION_KINDS.get(path.suffix, default) if path is not None else default
    logger.info(f"Loading {kind} from {path or 'command line'}")
    return kind, parse(text.strip(), kind)


def _expect(kind: str, allowed: Tuple[str, ...], command: str):
    if kind not in allowed:
        raise UsageError(f"{command} expects a {' or '.join(allowed)}, got a {kind}")


def render_term(term, kind: str) -> str:
    if kind in ("process", "pattern"):
        return render_process(term)
    if kind == "formula":
        return render_formula(term)
    if kind == "system":
        return render_system(term)
    return render(term)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def emit(args, text: str, data):
    if args.format == "json":
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print(text)


def export(args, name: str, data, markdown_content: str, dot_content: Optional[str] = None):
    if not args.export:
        return
    exports = export_all_formats(data, markdown_content, to_html(markdown_content, name),
                                 base_filename=name, export_dir=args.export, dot_content=dot_content)
    for format_name, filepath in exports.items():
        logger.info(f"Exported {format_name}: {filepath}")


def emit_verdict(args, verdict: Verdict, graph=None, extra: Optional[dict] = None) -> int:
    data = verdict.to_json()
    text = format_verdict(verdict)
    if graph is not None and verdict.witness:
        text += "\n  witness states:"
        for state in verdict.witness:
            text += f"\n    {state}: {render_process(graph.states[state])}"
    if extra:
        data.update(extra)
        for key, value in extra.items():
            text += f"\n  {key}: {value}"
    emit(args, text, data)
    export(args, verdict.property.split("(")[0], data, generate_markdown_verdicts(verdict.property, [verdict], graph))
    return verdict.exit_code


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _explore(args, settings: VerifierSettings):
    kind, process = load_term(args.file, args.kind)
    _expect(kind, ("process",), args.command)
    return explore(process, max_states=settings.max_states, max_depth=settings.max_depth,
                   threads=settings.threads)


def cmd_parse(args, settings: VerifierSettings) -> int:
    kind, term = load_term(args.file, args.kind)
    data = {"kind": kind, "term": render_term(term, kind)}
    text = render_term(term, kind)
    if kind in ("process", "pattern"):
        variant = classify_process(term)
        data["variant"] = variant.model_dump()
        text += f"\n  class: {variant.strongest()}{' (static)' if variant.static_ok else ''}"
    elif kind == "formula":
        data["class"] = classify_formula(term)
        text += f"\n  class: {data['class']}"
    emit(args, text, data)
    return EXIT_OK


def cmd_lts(args, settings: VerifierSettings) -> int:
    graph = _explore(args, settings)
    dot_content = graph.to_dot()
    if args.dot:
        print(dot_content)
    elif args.json or args.format == "json":
        print(json.dumps(graph.to_json(), indent=2, ensure_ascii=False))
    else:
        print(generate_markdown_graph(graph))
    export(args, "lts", graph.to_json(), generate_markdown_graph(graph), dot_content)
    return EXIT_OK


def cmd_check(args, settings: VerifierSettings) -> int:
    graph = _explore(args, settings)
    error = parse_barb(args.error)
    if args.property == "ba":
        verdict = check_BA(graph, error, args.k)
    else:
        verdict = check_EA(graph, error)
    return emit_verdict(args, verdict, graph)


def _formula(args) -> Formula:
    if args.schema:
        return FormulaSchemas.schema(args.schema, args.error or "^e", k=args.k, ok=args.ok)
    if not args.formula:
        raise UsageError("mc needs --formula or --schema")
    _, formula = load_term(args.formula, "formula")
    return formula


def cmd_mc(args, settings: VerifierSettings) -> int:
    formula = _formula(args)
    graph = _explore(args, settings)
    sat, verdict = model_check(graph, formula)
    extra = {"sat": sorted(sat)}
    if args.classify:
        extra["class"] = classify_formula(formula)
    return emit_verdict(args, verdict, graph, extra)


def _choreography(args):
    kind, term = load_term(args.file, args.kind, default="choreography")
    _expect(kind, ("choreography",), f"choreo {args.action}")
    return term


def cmd_choreo(args, settings: VerifierSettings) -> int:
    term = _choreography(args)

    if args.action == "project":
        tidy = (lambda orchestration: orchestration) if args.raw else simplify
        if args.role:
            orchestration = tidy(project(term, args.role))
            emit(args, render(orchestration), {"role": args.role, "term": render(orchestration)})
            return EXIT_OK
        system = project_system(term)
        members = {role: render(tidy(orchestration)) for role, orchestration in system.members}
        text = "\n".join(f"[{body}]@{role}" for role, body in members.items())
        emit(args, text, {"roles": members})
        return EXIT_OK

    if args.action == "wf":
        return emit_verdict(args, check_well_formed(term))

    report = check_connectedness(term)
    emit(args, format_connectedness(report), {**report.model_dump(), "connected": report.connected})
    return EXIT_OK if report.connected else EXIT_VIOLATED


def cmd_orch(args, settings: VerifierSettings) -> int:
    kind, system = load_term(args.file, args.kind, default="system")
    _expect(kind, ("system",), f"orch {args.action}")
    if args.action == "correct":
        return emit_verdict(args, check_correct_composition(system, settings.system_state_cap))
    _, choreography = load_term(args.choreography, None, default="choreography")
    return emit_verdict(args, check_implements(system, choreography, settings.system_state_cap))


def cmd_upd(args, settings: VerifierSettings) -> int:
    kind, subject = load_term(args.file, args.kind, default="choreography")

    if args.action == "validate":
        _expect(kind, ("choreography",), "upd validate")
        report = validate_updatable(subject)
        emit(args, format_validation(report), report.model_dump())
        return EXIT_OK if report.valid else EXIT_VIOLATED

    if args.action == "correspond":
        _expect(kind, ("choreography",), "upd correspond")
        report = trace_correspondence(subject, settings.system_state_cap)
        text = "included" if report.included else "finding: " + " ".join(report.counterexample)
        emit(args, text, report.model_dump())
        return EXIT_OK if report.included else EXIT_VIOLATED

    _expect(kind, ("choreography", "system"), "upd simulate")
    if not args.script:
        raise UsageError("upd simulate needs --script")
    script_text, script_path = read_source(args.script)
    base_dir = script_path.parent if script_path is not None else Path(".")
    log = simulate(subject, script_text.splitlines(), auto_limit=settings.auto_limit,
                   normalize=args.normalize, base_dir=base_dir)
    emit(args, log.to_text(), log.to_json())
    export(args, "simulation", log.to_json(), generate_markdown_run(log))
    return EXIT_OK


COMMANDS = {
    "parse": cmd_parse,
    "lts": cmd_lts,
    "check": cmd_check,
    "mc": cmd_mc,
    "choreo": cmd_choreo,
    "orch": cmd_orch,
    "upd": cmd_upd,
}


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text", help="Output format")
    common.add_argument("--kind", choices=sorted(set(EXTENSION_KINDS.values())),
                        help="Term kind, overriding the file extension")
    common.add_argument("--max-states", type=int, help="State bound of E-process exploration")
    common.add_argument("--max-depth", type=int, help="Depth bound of E-process exploration")
    common.add_argument("--cap", type=int, help="Safety cap of system exploration")
    common.add_argument("--threads", type=int, help="Worker threads used to expand states")
    common.add_argument("--log-level", help="Level of the file log (DEBUG, INFO, ...)")
    common.add_argument("--export", metavar="DIR", help="Also write JSON, Markdown and HTML reports to DIR")

    parser = _ArgumentParser(prog="evoverify", description="Verification of adaptable processes "
                                                            "and choreographies with dynamic updates")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    sub = commands.add_parser("parse", parents=[common], help="Parse a term and print it back")
    sub.add_argument("file")

    sub = commands.add_parser("lts", parents=[common], help="Explore the tau-graph of a process")
    sub.add_argument("file")
    output = sub.add_mutually_exclusive_group()
    output.add_argument("--dot", action="store_true", help="Print Graphviz DOT")
    output.add_argument("--json", action="store_true", help="Print the graph as JSON")

    check = commands.add_parser("check", help="Adaptation properties")
    properties = check.add_subparsers(dest="property", required=True, parser_class=_ArgumentParser)
    sub = properties.add_parser("ba", parents=[common], help="Bounded Adaptation")
    sub.add_argument("file")
    sub.add_argument("--error", required=True, help="Error barb, `e` or `^e`")
    sub.add_argument("--k", type=int, required=True, help="Tolerated consecutive error states")
    sub = properties.add_parser("ea", parents=[common], help="Eventual Adaptation")
    sub.add_argument("file")
    sub.add_argument("--error", required=True, help="Error barb, `e` or `^e`")

    sub = commands.add_parser("mc", parents=[common], help="Model check a formula")
    sub.add_argument("file")
    sub.add_argument("--formula", help="Formula file or inline formula")
    sub.add_argument("--schema", choices=["CB", "MC", "MCr", "MCrk"], help="Use a formula schema instead")
    sub.add_argument("--error", help="Error barb of the schema")
    sub.add_argument("--ok", default="ok", help="Correctness barb of MCr and MCrk")
    sub.add_argument("--k", type=int, default=1, help="Parameter of CB and MCrk")
    sub.add_argument("--classify", action="store_true", help="Report the fragment of the formula")

    choreo = commands.add_parser("choreo", help="Choreography checks")
    actions = choreo.add_subparsers(dest="action", required=True, parser_class=_ArgumentParser)
    sub = actions.add_parser("project", parents=[common], help="Project onto roles")
    sub.add_argument("file")
    sub.add_argument("--role", help="Project onto this role only")
    sub.add_argument("--raw", action="store_true", help="Keep unit terms `1`")
    for action, text in (("wf", "Semantic well-formedness"), ("connected", "Syntactic connectedness")):
        sub = actions.add_parser(action, parents=[common], help=text)
        sub.add_argument("file")

    orch = commands.add_parser("orch", help="System checks")
    actions = orch.add_subparsers(dest="action", required=True, parser_class=_ArgumentParser)
    sub = actions.add_parser("correct", parents=[common], help="Correct composition")
    sub.add_argument("file")
    sub = actions.add_parser("implements", parents=[common], help="System implements a choreography")
    sub.add_argument("file")
    sub.add_argument("choreography")

    upd = commands.add_parser("upd", help="Dynamic updates")
    actions = upd.add_subparsers(dest="action", required=True, parser_class=_ArgumentParser)
    sub = actions.add_parser("validate", parents=[common], help="Well-definedness of scopes and updates")
    sub.add_argument("file")
    sub = actions.add_parser("simulate", parents=[common], help="Replay a directive script")
    sub.add_argument("file")
    sub.add_argument("--script", help="Directive file (`-` for stdin)")
    sub.add_argument("--normalize", action="store_true", help="Log states without unit terms")
    sub.add_argument("--auto-limit", type=int, help="Steps taken by a bare `auto`")
    sub = actions.add_parser("correspond", parents=[common],
                             help="Compare projected-system traces with the choreography")
    sub.add_argument("file")

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """
    Execute one command.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Exit code
    """
    try:
        args = build_parser().parse_args(argv)
        settings = load_settings(
            max_states=args.max_states,
            max_depth=args.max_depth,
            system_state_cap=args.cap,
            threads=args.threads,
            auto_limit=getattr(args, "auto_limit", None),
            log_level=args.log_level.upper() if args.log_level else None,
        )
        setup_logging(log_dir=settings.log_dir, log_level=settings.log_level)
        logger.info(f"Running command: {' '.join(argv if argv is not None else sys.argv[1:])}")
        return COMMANDS[args.command](args, settings)
    except StateBound as e:
        logger.warning(str(e))
        print(f"unknown: {e}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (ValueError, OSError) as e:
        logger.error(f"Command failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help and --version
        return EXIT_OK if not e.code else EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
