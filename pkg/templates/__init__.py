"""Templates package initialization"""

from .formula_schemas import FormulaSchemas
from .protocol_templates import ProcessTemplates, ProtocolTemplates

__all__ = [
    'FormulaSchemas',
    'ProcessTemplates',
    'ProtocolTemplates',
]
