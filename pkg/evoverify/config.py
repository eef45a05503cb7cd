"""
Verifier settings
Exploration bounds and logging options, read from the environment
(and a local .env file) with command-line overrides applied on top.
"""

import os
import logging
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from .lts import DEFAULT_MAX_STATES
from .orchestration import DEFAULT_SYSTEM_STATE_CAP
from .updates import DEFAULT_AUTO_LIMIT

logger = logging.getLogger(__name__)


class VerifierSettings(BaseModel):
    """Bounds and options shared by every command"""
    max_states: int = Field(default=DEFAULT_MAX_STATES, ge=1)
    max_depth: Optional[int] = Field(default=None, ge=0)
    system_state_cap: int = Field(default=DEFAULT_SYSTEM_STATE_CAP, ge=1)
    auto_limit: int = Field(default=DEFAULT_AUTO_LIMIT, ge=0)
    threads: int = Field(default=1, ge=1)
    log_dir: Optional[str] = "logs"
    log_level: str = "INFO"


def _int_from_env(name: str) -> Optional[int]:
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return None
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got '{value}'") from None


def load_settings(env_file: Optional[str] = None, **overrides) -> VerifierSettings:
    """
    Build settings from EVOVERIFY_* environment variables.

    Args:
        env_file: Optional .env file loaded before reading the environment
        **overrides: Values that win over the environment (None values are ignored)

    Returns:
        VerifierSettings
    """
    load_dotenv(env_file)

    values = {}
    for field, variable in (
        ("max_states", "EVOVERIFY_MAX_STATES"),
        ("max_depth", "EVOVERIFY_MAX_DEPTH"),
        ("system_state_cap", "EVOVERIFY_SYSTEM_STATE_CAP"),
        ("auto_limit", "EVOVERIFY_AUTO_LIMIT"),
        ("threads", "EVOVERIFY_THREADS"),
    ):
        value = _int_from_env(variable)
        if value is not None:
            values[field] = value

    log_dir = os.getenv("EVOVERIFY_LOG_DIR")
    if log_dir is not None:
        values["log_dir"] = log_dir or None
    log_level = os.getenv("EVOVERIFY_LOG_LEVEL")
    if log_level:
        values["log_level"] = log_level.upper()

    values.update({key: value for key, value in overrides.items() if value is not None})
    settings = VerifierSettings(**values)
    logger.debug(f"Settings: {settings.model_dump()}")
    return settings
