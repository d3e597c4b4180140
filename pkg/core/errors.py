"""Exceptions raised by the kernel workbench.

Everything derives from ValueError so callers that only guard against bad input
keep working.
"""

from typing import Optional


class UnknownGalleryError(ValueError):
    """Gallery name not present in the registry"""


class ResolutionError(ValueError):
    """Non-positive mesh/depth or mismatched resolutions"""


class SpaceMismatchError(ValueError):
    """Objects defined on different net spaces were combined"""


class SectionError(ValueError):
    """A proposed section violates j o alpha = id beyond tolerance"""


class KernelError(ValueError):
    """Operation requires a different kind of kernel (e.g. normalized)"""


class SurjectivityError(ValueError):
    """The map misses a codomain point beyond tolerance"""

    def __init__(self, message: str, witness: Optional[object] = None):
        super().__init__(message)
        self.witness = witness


class ProblemFormatError(ValueError):
    """Problem-definition file could not be parsed or validated"""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        location = []
        if field:
            location.append(f"field {field}")
        if line is not None:
            location.append(f"line {line}")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(f"{message}{suffix}")
        self.field = field
        self.line = line


class MassBoundError(ValueError):
    """The Cantor mass-bound linear program could not be solved"""
