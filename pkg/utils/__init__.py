"""Run logs and artifact writers shared by the CLI and the example scripts"""

from .export import export_json, export_markdown, export_html, export_dot, export_all_formats
from .logger_config import setup_logging, get_logger

__all__ = [
    'export_json',
    'export_markdown',
    'export_html',
    'export_dot',
    'export_all_formats',
    'setup_logging',
    'get_logger',
]
