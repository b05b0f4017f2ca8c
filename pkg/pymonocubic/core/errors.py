# -----------------------------------------------------------------------------
# error hierarchy; every class knows the exit code the cli reports for it
# -----------------------------------------------------------------------------
from __future__ import annotations


class MonoCubicError(RuntimeError):
    exit_code: int = 2


class UsageError(MonoCubicError):
    exit_code = 1


class DomainError(MonoCubicError, ValueError):
    """An operation was called outside of its domain (zero input, composite
    prime, singular matrix, off-curve point and so on)."""
    exit_code = 2


class DualKernelPoint(DomainError):
    def __init__(self, n: int):
        super().__init__(f'Point (0, {-9 * n}) generates the kernel of the dual isogeny; '
                         f'its field is Q(cbrt(D)), not given by the ratio formula')
        self.n = n


class SupportViolation(DomainError):
    def __init__(self, prime: int, support: list[int]):
        super().__init__(f'Prime {prime} has nonzero F3 exponent but is outside the support {support}')
        self.prime = prime
        self.support = support


class IngestionError(MonoCubicError):
    exit_code = 2


class InternalError(MonoCubicError):
    exit_code = 2


class VerificationMismatch(MonoCubicError):
    exit_code = 3
