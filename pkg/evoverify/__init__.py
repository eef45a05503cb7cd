"""EvoVerify package initialization"""

from .adaptation import check_BA, check_EA
from .choreography import (
    check_connectedness,
    check_well_formed,
    choreo_transitions,
    project,
    project_system,
    simplify,
)
from .config import VerifierSettings, load_settings
from .errors import EvoVerifyError
from .grammar import (
    parse,
    parse_choreography,
    parse_formula,
    parse_orchestration,
    parse_pattern,
    parse_process,
    parse_system,
)
from .logic import classify_formula, model_check
from .lts import StateGraph, explore, transitions
from .orchestration import check_correct_composition, check_implements, system_transitions
from .printer import render, render_formula, render_label, render_process, render_system
from .updates import (
    apply_external_update,
    simulate,
    trace_correspondence,
    uchoreo_transitions,
    uproject,
    usystem_transitions,
    validate_updatable,
)
from .verdict import Verdict

__all__ = [
    'check_BA',
    'check_EA',
    'check_connectedness',
    'check_well_formed',
    'choreo_transitions',
    'project',
    'project_system',
    'simplify',
    'VerifierSettings',
    'load_settings',
    'EvoVerifyError',
    'parse',
    'parse_choreography',
    'parse_formula',
    'parse_orchestration',
    'parse_pattern',
    'parse_process',
    'parse_system',
    'classify_formula',
    'model_check',
    'StateGraph',
    'explore',
    'transitions',
    'check_correct_composition',
    'check_implements',
    'system_transitions',
    'render',
    'render_formula',
    'render_label',
    'render_process',
    'render_system',
    'apply_external_update',
    'simulate',
    'trace_correspondence',
    'uchoreo_transitions',
    'uproject',
    'usystem_transitions',
    'validate_updatable',
    'Verdict',
]
