"""
Exception hierarchy for mbqaoa.

Every error raised on purpose by the package derives from MbqaoaError, so callers
(the CLI in particular) can map failures to exit codes without string matching.
"""

from typing import Optional


class MbqaoaError(Exception):
    """Base class for all mbqaoa errors."""


class ResourceGuardError(MbqaoaError):
    """A size guard (ports, qubits, window, branches) was exceeded."""

    def __init__(self, what: str, limit: int, actual: int, hint: Optional[str] = None):
        self.what = what
        self.limit = limit
        self.actual = actual
        self.hint = hint
        message = f"{what} exceeds guard: {actual} > {limit}"
        if hint:
            message += f" ({hint})"
        super().__init__(message)


class MalformedDiagramError(MbqaoaError):
    """ZX diagram is structurally broken (dangling edge, bad boundary, zero scalar)."""


class RuleNotApplicableError(MbqaoaError):
    """A rewrite rule's structural precondition failed at the requested site."""

    def __init__(self, rule: str, check: str):
        self.rule = rule
        self.check = check
        super().__init__(f"rule {rule} not applicable: {check}")


class DerivationError(MbqaoaError):
    """A derivation step could not be replayed."""

    def __init__(self, step: int, cause: Exception):
        self.step = step
        self.cause = cause
        super().__init__(f"derivation aborted at step {step}: {cause}")


class ContractViolation(MbqaoaError, ValueError):
    """Caller broke an operation precondition (shape or length mismatch)."""


class InvalidInputError(MbqaoaError, ValueError):
    """Input data is well-formed but semantically invalid."""


class InvalidGraphError(InvalidInputError):
    """Graph has self-loops, out-of-range vertices or similar defects."""


class CompilerStateError(MbqaoaError):
    """Compiler fragment context was asked to extend a wire it does not hold."""


class PatternValidationError(MbqaoaError):
    """Operation requires a valid measurement pattern."""

    def __init__(self, violations: list):
        self.violations = list(violations)
        joined = "; ".join(self.violations[:5])
        more = "" if len(self.violations) <= 5 else f" (+{len(self.violations) - 5} more)"
        super().__init__(f"invalid pattern: {joined}{more}")
