"""
Writers for verification artifacts
Verdicts, state graphs and simulation runs are saved under `exports/`
as JSON, Markdown, HTML and Graphviz DOT.
"""

import os
import json
from typing import Dict, Optional
from datetime import datetime

EXPORT_DIR = "exports"


def _run_stem() -> str:
    return f"evoverify_{datetime.now().strftime('%Y%m%d_%H%M%S')}"


def ensure_export_dir(export_dir: str = EXPORT_DIR) -> str:
    """
    Create the artifact directory if needed

    Args:
        export_dir: Artifact directory, relative paths resolve against the working directory

    Returns:
        Absolute artifact directory
    """
    if not os.path.isabs(export_dir):
        export_dir = os.path.join(os.getcwd(), export_dir)

    os.makedirs(export_dir, exist_ok=True)
    return export_dir


def _target(filename: Optional[str], extension: str, export_dir: str) -> str:
    if filename is None:
        filename = f"{_run_stem()}.{extension}"
    return os.path.join(ensure_export_dir(export_dir), filename)


def _write_text(content: str, filename: Optional[str], extension: str, export_dir: str) -> str:
    filepath = _target(filename, extension, export_dir)
    with open(filepath, 'w', encoding='utf-8') as f:
        f.write(content)
    return filepath


def export_json(data, filename: Optional[str] = None, export_dir: str = EXPORT_DIR) -> str:
    """
    Save a verdict, an explored graph or a run log as JSON

    Args:
        data: `model_dump()` of the result, or a list of them
        filename: File name inside `export_dir`, timestamped when None
        export_dir: Artifact directory

    Returns:
        Path of the written file
    """
    filepath = _target(filename, "json", export_dir)
    with open(filepath, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2, ensure_ascii=False)
    return filepath


def export_markdown(markdown_content: str, filename: Optional[str] = None, export_dir: str = EXPORT_DIR) -> str:
    return _write_text(markdown_content, filename, "md", export_dir)


def export_html(html_content: str, filename: Optional[str] = None, export_dir: str = EXPORT_DIR) -> str:
    return _write_text(html_content, filename, "html", export_dir)


def export_dot(dot_content: str, filename: Optional[str] = None, export_dir: str = EXPORT_DIR) -> str:
    """Save a state graph rendered by `to_dot`"""
    return _write_text(dot_content, filename, "dot", export_dir)


def export_all_formats(data, markdown_content: str, html_content: str,
                       base_filename: Optional[str] = None, export_dir: str = EXPORT_DIR,
                       dot_content: Optional[str] = None) -> Dict[str, str]:
    """
    Save one verification result as a JSON record, a Markdown report and its
    HTML rendering, plus the DOT graph for exploration commands

    Args:
        data: JSON form of the verdict, graph or run
        markdown_content: Report from `evoverify.reports`
        html_content: The same report as HTML
        base_filename: Shared stem of the files, timestamped when None
        export_dir: Artifact directory
        dot_content: State graph, only for commands that explore one

    Returns:
        Format name (json, markdown, html, dot) to written path
    """
    stem = base_filename or _run_stem()

    exports = {
        "json": export_json(data, f"{stem}.json", export_dir),
        "markdown": export_markdown(markdown_content, f"{stem}.md", export_dir),
        "html": export_html(html_content, f"{stem}.html", export_dir),
    }
    if dot_content is not None:
        exports["dot"] = export_dot(dot_content, f"{stem}.dot", export_dir)

    return exports
