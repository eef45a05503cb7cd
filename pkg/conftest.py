"""Shared fixtures for the EvoVerify test suite"""

import pytest

from evoverify.grammar import parse_choreography, parse_system
from templates import ProtocolTemplates


@pytest.fixture(autouse=True)
def quiet_environment(monkeypatch, tmp_path):
    """No log files, no stray exports, no bounds leaking in from the shell"""
    monkeypatch.setenv("EVOVERIFY_LOG_DIR", "")
    for variable in ("EVOVERIFY_MAX_STATES", "EVOVERIFY_MAX_DEPTH", "EVOVERIFY_SYSTEM_STATE_CAP",
                     "EVOVERIFY_AUTO_LIMIT", "EVOVERIFY_THREADS", "EVOVERIFY_LOG_LEVEL"):
        monkeypatch.delenv(variable, raising=False)
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def bsb():
    return parse_choreography(ProtocolTemplates.buyer_seller_bank())


@pytest.fixture
def bsb_system():
    return parse_system(ProtocolTemplates.buyer_seller_bank_system())


@pytest.fixture
def adaptable_bsb():
    return parse_choreography(ProtocolTemplates.adaptable_buyer_seller_bank())


@pytest.fixture
def visa():
    return parse_choreography(ProtocolTemplates.visa_payment())
