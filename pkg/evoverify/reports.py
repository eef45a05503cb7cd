"""
Report generation
Markdown, HTML and plain-text renderings of verdicts, state graphs,
connectedness reports and simulation logs.
"""

import logging
from typing import Dict, List, Optional

import markdown2

from .choreography import ConnectednessReport
from .lts import StateGraph
from .updates import RunLog, UpdateValidationReport
from .verdict import Verdict

logger = logging.getLogger(__name__)

_STATUS_MARK = {"holds": "✅", "violated": "❌", "unknown": "❔"}


def format_bounds(bounds: Dict[str, Optional[int]]) -> str:
    if not bounds:
        return "none"
    return ", ".join(f"{key}={'unbounded' if value is None else value}" for key, value in bounds.items())


def format_verdict(verdict: Verdict) -> str:
    """
    Plain-text summary of a verdict

    Args:
        verdict: Verdict to summarise

    Returns:
        Multi-line string
    """
    lines = [
        f"{verdict.property}: {verdict.status.upper()}",
        f"  reason: {verdict.reason}",
        f"  states explored: {verdict.states_explored} ({'complete' if verdict.complete else 'incomplete'})",
        f"  bounds: {format_bounds(verdict.bounds)}",
    ]
    if verdict.witness:
        lines.append(f"  witness: {' -> '.join(str(state) for state in verdict.witness)}")
    if verdict.trace:
        lines.append(f"  trace: {' '.join(verdict.trace)}")
    return "\n".join(lines)


def generate_markdown_verdicts(title: str, verdicts: List[Verdict],
                               graph: Optional[StateGraph] = None) -> str:
    """Markdown report of several verdicts, with the witness states spelled out"""
    from .printer import render_process

    md = f"# {title}\n\n"
    md += "| Property | Status | States | Complete | Bounds |\n"
    md += "|---|---|---|---|---|\n"
    for verdict in verdicts:
        md += (f"| `{verdict.property}` | {_STATUS_MARK[verdict.status]} {verdict.status} "
               f"| {verdict.states_explored} | {'yes' if verdict.complete else 'no'} "
               f"| {format_bounds(verdict.bounds)} |\n")

    for verdict in verdicts:
        md += f"\n## {verdict.property}\n\n**Reason:** {verdict.reason}\n"
        if verdict.trace:
            md += f"\n**Trace:** `{' '.join(verdict.trace)}`\n"
        if verdict.witness:
            md += "\n**Witness:**\n\n"
            for position, state in enumerate(verdict.witness, 1):
                term = ""
                if graph is not None and state < len(graph.states):
                    term = f": `{render_process(graph.states[state])}`"
                md += f"{position}. state {state}{term}\n"
    return md


def generate_markdown_graph(graph: StateGraph) -> str:
    """Markdown table of explored states"""
    from .printer import render_process
    from .process import format_barb

    md = "# State graph\n\n"
    md += (f"**States:** {len(graph.states)}  \n**Edges:** {len(graph.edges)}  \n"
           f"**Complete:** {'yes' if graph.complete else 'no'} ({graph.bounds_hit})\n\n")
    md += "| Id | Depth | Term | Barbs | Successors |\n|---|---|---|---|---|\n"
    for index, state in enumerate(graph.states):
        barbs = ", ".join(sorted(format_barb(barb) for barb in graph.barbs[index]))
        successors = ", ".join(str(target) for target in graph.successors(index))
        if index in graph.frontier:
            successors += " …"
        md += f"| {index} | {graph.depth[index]} | `{render_process(state)}` | {barbs} | {successors} |\n"
    return md


def format_connectedness(report: ConnectednessReport) -> str:
    lines = [
        f"seq: {report.seq}",
        f"choice: {report.choice}",
        f"interference: {report.interference}",
    ]
    lines.extend(f"  - {witness}" for witness in report.witnesses)
    return "\n".join(lines)


def format_validation(report: UpdateValidationReport) -> str:
    if report.valid:
        return "valid"
    return "invalid\n" + "\n".join(f"  - {problem.path}: {problem.message}" for problem in report.problems)


def generate_markdown_run(log: RunLog) -> str:
    md = f"# Simulation of a {log.kind}\n\n"
    for entry in log.entries:
        if entry.label is not None:
            md += f"\n**{entry.step}.** `{entry.label}`\n\n"
        md += f"```\n{entry.state}\n```\n"
    return md


def to_html(markdown_content: str, title: str = "EvoVerify report") -> str:
    """Wrap rendered markdown in a standalone HTML page"""
    body = markdown2.markdown(markdown_content, extras=["tables", "fenced-code-blocks"])
    logger.debug(f"Rendered {len(markdown_content)} characters of markdown to HTML")
    return f"""<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <title>{title}</title>
    <style>
        body {{
            font-family: 'Segoe UI', Tahoma, Geneva, Verdana, sans-serif;
            line-height: 1.6;
            max-width: 1000px;
            margin: 0 auto;
            padding: 20px;
        }}
        table {{
            border-collapse: collapse;
        }}
        th, td {{
            border: 1px solid #ccc;
            padding: 4px 8px;
        }}
        code {{
            background-color: #f5f5f5;
        }}
    </style>
</head>
<body>
{body}
</body>
</html>
"""
