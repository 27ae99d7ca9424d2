"""Exceptions raised by the ldpcForge code modules.

Every error derives from LdpcForgeError so callers (the CLI in particular) can
catch the whole family at once. Input-shaped failures are ValueErrors, failures
that happen while running an algorithm are RuntimeErrors.
"""

from typing import Optional


class LdpcForgeError(Exception):
    """Base class for all ldpcForge errors."""


class InvalidParams(LdpcForgeError, ValueError):
    """Raised when (n, m, r) violates the existence condition of the code family."""

    def __init__(self, message: str, inequality: str):
        super().__init__(message)
        self.inequality = inequality


class DegenerateRun(LdpcForgeError, ValueError):
    """Raised when a consecutive run is requested between a row and itself."""


class LengthMismatch(LdpcForgeError, ValueError):
    """Raised when a word, message or syndrome has the wrong length."""


class MalformedAlist(LdpcForgeError, ValueError):
    """Raised when an alist file cannot be parsed or is inconsistent."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class MalformedCertificate(LdpcForgeError, ValueError):
    """Raised when a certificate file cannot be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ParityObstruction(LdpcForgeError, ValueError):
    """Raised when M·message has odd weight, so no C-part solves the accumulator."""


class SizeMismatch(LdpcForgeError, ValueError):
    """Raised when two multisupports of different sizes are paired."""


class HypothesisViolated(LdpcForgeError, ValueError):
    """Raised when a counting bound is evaluated outside t > 2k."""


class InvalidChain(LdpcForgeError, ValueError):
    """Raised by the chain validator when a chain breaks one of its invariants."""


class SamplingFailed(LdpcForgeError, RuntimeError):
    """Raised when the sampler runs out of resample attempts."""


class ChainStuck(LdpcForgeError, RuntimeError):
    """Raised when chain building cannot find a free position or a fresh column."""


class DegenerateZero(LdpcForgeError, RuntimeError):
    """Raised when two chains cancel to the all-zero word."""


class CertificationFailed(LdpcForgeError, RuntimeError):
    """Raised when an assembled word fails its own certification."""


class TooLarge(LdpcForgeError, RuntimeError):
    """Raised when exhaustive enumeration is requested on a code that is too big."""
