"""
Error types raised by the EvoVerify engine
All errors are ValueErrors so callers can treat them as bad input.
"""

from typing import Iterable, Optional


class EvoVerifyError(ValueError):
    """Base class for every domain error"""


class TermSyntaxError(EvoVerifyError):
    """Text does not conform to the concrete grammar"""

    def __init__(self, position: int, expected: Iterable[str] = (), detail: Optional[str] = None):
        self.position = position
        self.expected = sorted(set(expected))
        message = f"syntax error at position {position}"
        if self.expected:
            message += f", expected one of: {', '.join(self.expected)}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class HoleOutsidePattern(EvoVerifyError):
    """A hole `@` appears outside every update-prefix body"""

    def __init__(self, position: int):
        self.position = position
        super().__init__(f"hole '@' at position {position} is only allowed inside an update pattern")


class ReservedSymbol(EvoVerifyError):
    """User input mentions the transient placeholder"""

    def __init__(self, position: int, symbol: str):
        self.position = position
        self.symbol = symbol
        super().__init__(f"reserved symbol '{symbol}' at position {position}")


class DuplicateRole(EvoVerifyError):
    """Two orchestrations of a system are located at the same role"""

    def __init__(self, role: str):
        self.role = role
        super().__init__(f"role '{role}' occurs more than once in the system")


class SelfAddressedOutput(EvoVerifyError):
    """An orchestration at role r sends to r itself"""

    def __init__(self, role: str, operation: str):
        self.role = role
        self.operation = operation
        super().__init__(f"output '{operation}!{role}' occurs inside the orchestration of role '{role}'")


class PlaceholderLeak(EvoVerifyError):
    """A derived successor still contains the placeholder (internal bug signal)"""

    def __init__(self, term: str):
        self.term = term
        super().__init__(f"placeholder leaked into successor {term}")


class BadArity(EvoVerifyError):
    """A formula schema was instantiated with an invalid parameter"""

    def __init__(self, schema: str, parameter: str, value):
        self.schema = schema
        self.parameter = parameter
        self.value = value
        super().__init__(f"schema {schema} requires {parameter} >= 1, got {value}")


class UnsupportedConstruct(EvoVerifyError):
    """An operation restricted to the base language met a scope or update"""

    def __init__(self, construct: str, operation: str):
        self.construct = construct
        self.operation = operation
        super().__init__(f"{operation} does not support {construct}")


class StateBound(EvoVerifyError):
    """Closed-system exploration exceeded its safety cap"""

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"system exploration exceeded the safety cap of {cap} states")


class RoleMismatch(EvoVerifyError):
    """An orchestration update names a role list different from the scope's holders"""

    def __init__(self, scope: str, expected: Iterable[str], offered: Iterable[str]):
        self.scope = scope
        self.expected = sorted(expected)
        self.offered = sorted(offered)
        super().__init__(
            f"update on scope {scope} lists roles {self.offered}, but the scope is held by {self.expected}"
        )


class NoSuchTransition(EvoVerifyError):
    """A simulation directive selects a transition that is not enabled"""

    def __init__(self, directive: str, enabled: int):
        self.directive = directive
        self.enabled = enabled
        super().__init__(f"directive '{directive}' matches none of the {enabled} enabled transitions")


class InvalidUpdate(EvoVerifyError):
    """An external update cannot be applied"""

    def __init__(self, scope: str, reason: str):
        self.scope = scope
        self.reason = reason
        super().__init__(f"invalid update on scope {scope}: {reason}")
