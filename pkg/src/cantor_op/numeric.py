"""Extended-precision helpers built on gmpy2.

Every positive scale quantity in the package (r_s, squared norms, capacity,
products of recurrence coefficients) is carried as a :class:`LogScalar` so
that doubly exponential decay never underflows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

DEFAULT_PRECISION = 256


def working(bits: int):
    """Context manager setting the mpfr mantissa size to ``bits``."""
    return gmpy2.context(gmpy2.get_context(), precision=int(bits))


def tolerance(bits: int) -> mpfr:
    """Default relative tolerance 2^-(bits/2) for a given precision."""
    with working(bits):
        return mpfr(2) ** (-(int(bits) // 2))


def decimal_digits(bits: int) -> int:
    """Number of decimal digits emitted so output round-trips at ``bits``."""
    return math.ceil(int(bits) * 0.3011) + 2


def to_decimal(x, bits: int) -> str:
    digits = decimal_digits(bits)
    with working(bits):
        x = mpfr(x)
        if gmpy2.is_zero(x):
            return "0"
        return format(x, f".{digits}g")


@dataclass(frozen=True, order=True)
class LogScalar:
    """A strictly positive number stored as its natural logarithm."""

    log_value: mpfr

    def __post_init__(self):
        if not gmpy2.is_finite(self.log_value):
            raise ValueError(f"LogScalar needs a finite logarithm, got {self.log_value}")

    @classmethod
    def from_value(cls, x) -> "LogScalar":
        x = mpfr(x)
        if x <= 0:
            raise ValueError(f"LogScalar needs a positive value, got {x}")
        return cls(gmpy2.log(x))

    @classmethod
    def one(cls) -> "LogScalar":
        return cls(mpfr(0))

    @property
    def value(self) -> mpfr:
        return gmpy2.exp(self.log_value)

    @property
    def log2(self) -> mpfr:
        return self.log_value / gmpy2.const_log2()

    def __mul__(self, other: "LogScalar") -> "LogScalar":
        return LogScalar(self.log_value + other.log_value)

    def __truediv__(self, other: "LogScalar") -> "LogScalar":
        return LogScalar(self.log_value - other.log_value)

    def __pow__(self, exponent) -> "LogScalar":
        return LogScalar(self.log_value * exponent)

    def sqrt(self) -> "LogScalar":
        return LogScalar(self.log_value / 2)

    def __float__(self) -> float:
        return float(self.value)
