"""Exception hierarchy for pendlab.

Library code raises these; only the scripts catch them and turn them into
log lines and exit codes.
"""
from typing import Optional


class PendlabError(Exception):
    """Base class for all pendlab errors"""


class ContractViolation(PendlabError, ValueError):
    """Inputs do not satisfy an operation's preconditions (e.g. dimension mismatch)"""


class DomainError(PendlabError, ValueError):
    """Numeric input outside the domain where the quantity is defined"""


class ConfigError(PendlabError, ValueError):
    """Invalid integration or campaign configuration"""


class SolverError(PendlabError):
    """The equations-of-motion matrix could not be solved reliably"""

    def __init__(self, message: str, condition: float):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


class IntegrationError(PendlabError):
    """Integration produced a non-finite state"""

    def __init__(self, message: str, time: float):
        super().__init__(f"{message} at t={time:.6f} s")
        self.time = time


class UndefinedOrderError(PendlabError):
    """Richardson estimate is undefined (successive solutions coincide)"""


class EstimationError(PendlabError):
    """No complete oscillation cycle could be detected"""

    def __init__(self, message: str, bob_index: Optional[int] = None):
        if bob_index is not None:
            message = f"bob {bob_index}: {message}"
        super().__init__(message)
        self.bob_index = bob_index


class OutputError(PendlabError, OSError):
    """Writing an artifact failed"""

    def __init__(self, path, cause: Exception):
        super().__init__(f"failed to write {path}: {cause}")
        self.path = path
