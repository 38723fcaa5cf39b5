"""
Exception types shared by every escrit module.

All of them derive from ValueError so callers that only care about "bad input"
can catch that; the CLI maps EscritError to exit code 2.
"""

from typing import Iterable, List


class EscritError(ValueError):
    """Base class for all escrit errors"""


class GraphFormatError(EscritError):
    """graph6 or edge-list text that cannot be decoded"""


class InvalidGraphError(EscritError):
    """Self-loops, out-of-range endpoints and similar simple-graph violations"""


class PreconditionError(EscritError):
    """An operation was called outside its documented domain"""


class BoundExceededError(EscritError):
    """A configured search or enumeration bound was exceeded"""


class CycleLimitExceeded(BoundExceededError):
    """Cycle enumeration hit its limit, so a cycle-based answer is indeterminate"""


class ConfigError(EscritError):
    """Unreadable or malformed configuration file"""


class InvalidSpecError(EscritError):
    """A family spec that violates its own constraints"""

    def __init__(self, violations: Iterable[str]):
        self.violations: List[str] = list(violations)
        super().__init__('; '.join(self.violations) or 'invalid family spec')
