"""
Error hierarchy for the engine. Every failure an operation can signal is one of these.
"""

from typing import Any, Dict, Optional


class TateForgeError(Exception):
    """Base class; carries structured details for logging and JSON reports."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.__class__.__name__, "message": self.message, "details": self.details}


class CompositionNonzero(TateForgeError):
    """A declared square-zero composite (d_out ∘ d_in) is not zero."""


class CapTooLarge(TateForgeError):
    """A degree's monomial basis exceeds the configured size bound."""


class OutOfCap(TateForgeError):
    """A requested degree lies outside the enumerated window."""


class UnsupportedId(TateForgeError):
    """Unknown or malformed space id."""


class UnsupportedModel(TateForgeError):
    """The operation is not defined on this model."""


class QmNotWellDefined(TateForgeError):
    """Q_m does not preserve the image of d², so it does not descend to the quotient."""


class CoactionNotWellDefined(TateForgeError):
    """A coaction right factor is not a d²-cycle on the page it lands in."""


class SizeGuard(TateForgeError):
    """Oracle input exceeds its size guard."""


class InvalidRunConfig(TateForgeError):
    """Command-line input rejected before any computation."""
