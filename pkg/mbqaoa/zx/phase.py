"""
Spider phases and measurement angles.

A Phase is an angle in [0, 2pi). When it is a rational multiple of pi it is kept
as an exact Fraction of pi, so repeated fusion never drifts; anything else falls
back to a float in radians.
"""

import math
from fractions import Fraction
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict

_TWO = Fraction(2)

PhaseLike = Union["Phase", int, float, Fraction]


class Phase(BaseModel):
    """Angle in [0, 2pi), exact as a multiple of pi when possible."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pi_multiple: Optional[Fraction] = None  # exact: angle = pi_multiple * pi
    radians_value: Optional[float] = None  # fallback for arbitrary reals

    @classmethod
    def zero(cls) -> "Phase":
        return cls(pi_multiple=Fraction(0))

    @classmethod
    def pi(cls) -> "Phase":
        return cls(pi_multiple=Fraction(1))

    @classmethod
    def from_pi(cls, numerator: Union[int, Fraction], denominator: int = 1) -> "Phase":
        """Exact phase numerator/denominator * pi, normalized to [0, 2pi)."""
        return cls(pi_multiple=Fraction(numerator, denominator) % _TWO)

    @classmethod
    def from_radians(cls, value: float) -> "Phase":
        """Floating phase in radians, normalized to [0, 2pi)."""
        wrapped = math.fmod(float(value), 2.0 * math.pi)
        if wrapped < 0.0:
            wrapped += 2.0 * math.pi
        if wrapped >= 2.0 * math.pi:
            wrapped = 0.0
        return cls(radians_value=wrapped)

    @classmethod
    def coerce(cls, value: PhaseLike) -> "Phase":
        """Build a Phase: Fractions and ints are pi-multiples, floats are radians."""
        if isinstance(value, Phase):
            return value
        if isinstance(value, (Fraction, int)):
            return cls.from_pi(Fraction(value))
        return cls.from_radians(float(value))

    @property
    def is_exact(self) -> bool:
        return self.pi_multiple is not None

    @property
    def radians(self) -> float:
        if self.pi_multiple is not None:
            return float(self.pi_multiple) * math.pi
        assert self.radians_value is not None
        return self.radians_value

    def is_zero(self, tol: float = 1e-12) -> bool:
        if self.pi_multiple is not None:
            return self.pi_multiple == 0
        return _near(self.radians, 0.0, tol)

    def is_pi(self, tol: float = 1e-12) -> bool:
        if self.pi_multiple is not None:
            return self.pi_multiple == 1
        return _near(self.radians, math.pi, tol)

    def is_pauli(self, tol: float = 1e-12) -> bool:
        """True for 0 or pi."""
        return self.is_zero(tol) or self.is_pi(tol)

    def __add__(self, other: PhaseLike) -> "Phase":
        other = Phase.coerce(other)
        if self.pi_multiple is not None and other.pi_multiple is not None:
            return Phase.from_pi(self.pi_multiple + other.pi_multiple)
        return Phase.from_radians(self.radians + other.radians)

    def __radd__(self, other: PhaseLike) -> "Phase":
        return self.__add__(other)

    def __neg__(self) -> "Phase":
        if self.pi_multiple is not None:
            return Phase.from_pi(-self.pi_multiple)
        return Phase.from_radians(-self.radians)

    def __sub__(self, other: PhaseLike) -> "Phase":
        return self + (-Phase.coerce(other))

    def scaled(self, sign: int) -> "Phase":
        """Return sign * self for sign in {+1, -1}."""
        return self if sign > 0 else -self

    def close_to(self, other: "Phase", tol: float = 1e-12) -> bool:
        """Compare on the circle (2pi wraps to 0)."""
        if self.pi_multiple is not None and other.pi_multiple is not None:
            return self.pi_multiple == other.pi_multiple
        diff = abs(self.radians - other.radians)
        return min(diff, 2.0 * math.pi - diff) <= tol

    def to_json(self, prefix: str = "phase") -> dict:
        """Serialize as {prefix_num, prefix_den_pi} or {prefix: radians}."""
        if self.pi_multiple is not None:
            return {
                f"{prefix}_num": self.pi_multiple.numerator,
                f"{prefix}_den_pi": self.pi_multiple.denominator,
            }
        return {prefix: self.radians}

    @classmethod
    def from_json(cls, doc: dict, prefix: str = "phase") -> "Phase":
        if f"{prefix}_num" in doc:
            return cls.from_pi(int(doc[f"{prefix}_num"]), int(doc.get(f"{prefix}_den_pi", 1)))
        if prefix in doc:
            return cls.from_radians(float(doc[prefix]))
        return cls.zero()

    def __str__(self) -> str:
        if self.pi_multiple is not None:
            if self.pi_multiple == 0:
                return "0"
            return f"{self.pi_multiple}π"
        return f"{self.radians:.6g}"


def _near(a: float, b: float, tol: float) -> bool:
    diff = abs(a - b) % (2.0 * math.pi)
    return min(diff, 2.0 * math.pi - diff) <= tol
