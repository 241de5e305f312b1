"""Arbitrary-precision scalars paired with an absolute error bound.

Arithmetic propagates the bound with worst-case (interval style) rules and
adds one unit of rounding at the precision of the result. Every operation
runs with at least prec + GUARD_DIGITS digits, whatever the caller's mpmath
context, so values never pass through the 15-digit default.
"""
from dataclasses import dataclass
from typing import Union

import mpmath

from zeta_laplace_lab.utils import to_decimal_string

Number = Union[int, float, str, "mpmath.mpf", "mpmath.mpc"]

GUARD_DIGITS = 10


def rounding_bound(magnitude, prec: int):
    """Absolute rounding bound for a value of the given magnitude at prec digits."""
    return mpmath.mpf(magnitude) * mpmath.mpf(10) ** (-prec)


def working_digits(prec: int) -> int:
    return max(mpmath.mp.dps, prec + GUARD_DIGITS)


@dataclass(frozen=True)
class HPBase:
    value: object
    err: mpmath.mpf
    prec: int

    def __post_init__(self):
        if not mpmath.isfinite(self.err) or self.err < 0:
            raise ValueError(f"error bound must be finite and non-negative, got {self.err}")

    @classmethod
    def exact(cls, value: Number, prec: int):
        with mpmath.workdps(working_digits(prec)):
            return cls(cls._coerce(value), mpmath.mpf(0), prec)

    @staticmethod
    def _coerce(value):
        raise NotImplementedError

    @classmethod
    def _wrap(cls, value, err, prec):
        """Result of an operation; callers hold the working precision."""
        if isinstance(value, mpmath.mpc) and value.imag != 0:
            return HPComplexValue(value, mpmath.mpf(err), prec)
        if isinstance(value, mpmath.mpc):
            value = value.real
        if not isinstance(value, mpmath.mpf):
            value = mpmath.mpf(value)
        if cls is HPComplexValue:
            return HPComplexValue(mpmath.mpc(value), mpmath.mpf(err), prec)
        return HPValue(value, mpmath.mpf(err), prec)

    def _operands(self, other):
        if isinstance(other, HPBase):
            return other.value, other.err, min(self.prec, other.prec)
        return other, mpmath.mpf(0), self.prec

    def _working(self, other=None) -> int:
        prec = self.prec
        if isinstance(other, HPBase):
            prec = max(prec, other.prec)
        return working_digits(prec)

    def __add__(self, other):
        with mpmath.workdps(self._working(other)):
            value, err, prec = self._operands(other)
            result = self.value + value
            return self._wrap(result, self.err + err + rounding_bound(abs(result), prec), prec)

    __radd__ = __add__

    def __neg__(self):
        with mpmath.workdps(self._working()):
            return self._wrap(mpmath.fneg(self.value, exact=True), self.err, self.prec)

    def __sub__(self, other):
        with mpmath.workdps(self._working(other)):
            value, err, prec = self._operands(other)
            result = self.value - value
            return self._wrap(result, self.err + err + rounding_bound(abs(result), prec), prec)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        with mpmath.workdps(self._working(other)):
            value, err, prec = self._operands(other)
            result = self.value * value
            err = abs(self.value) * err + abs(value) * self.err + self.err * err
            return self._wrap(result, err + rounding_bound(abs(result), prec), prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        with mpmath.workdps(self._working(other)):
            value, err, prec = self._operands(other)
            denominator = abs(value)
            if denominator <= err:
                raise ZeroDivisionError("divisor is not separated from zero by its error bound")
            result = self.value / value
            err = (abs(self.value) * err + denominator * self.err) / (denominator * (denominator - err))
            return self._wrap(result, err + rounding_bound(abs(result), prec), prec)

    def __rtruediv__(self, other):
        if isinstance(self, HPComplexValue):
            return HPComplexValue.exact(other, self.prec) / self
        return HPValue.exact(other, self.prec) / self

    def __abs__(self):
        with mpmath.workdps(self._working()):
            return HPValue(abs(self.value), self.err, self.prec)

    def contains(self, other, slack=0) -> bool:
        """True when other lies within err (plus slack and other's err) of this value."""
        with mpmath.workdps(self._working(other)):
            value, err, _ = self._operands(other)
            return abs(self.value - value) <= self.err + err + slack

    def relative_err(self):
        if self.value == 0:
            return mpmath.inf
        with mpmath.workdps(self._working()):
            return self.err / abs(self.value)

    def with_err(self, err):
        with mpmath.workdps(self._working()):
            return self._wrap(self.value, err, self.prec)

    def to_dict(self, digits: int = 30) -> dict:
        return {
            "value": to_decimal_string(self.value, min(digits, self.prec)),
            "err": mpmath.nstr(self.err, 6),
        }

    def __str__(self) -> str:
        return f"{to_decimal_string(self.value, min(self.prec, 20))} ± {mpmath.nstr(self.err, 3)}"


@dataclass(frozen=True)
class HPValue(HPBase):
    value: mpmath.mpf

    def __post_init__(self):
        if isinstance(self.value, mpmath.mpc):
            raise TypeError("HPValue holds a real value; use HPComplexValue for mpc")
        super().__post_init__()

    @staticmethod
    def _coerce(value):
        if isinstance(value, mpmath.mpc):
            return mpmath.mpf(value.real)
        return mpmath.mpf(value)


@dataclass(frozen=True)
class HPComplexValue(HPBase):
    value: mpmath.mpc

    @staticmethod
    def _coerce(value):
        return mpmath.mpc(value)

    @property
    def real(self) -> HPValue:
        return HPValue(self.value.real, self.err, self.prec)

    @property
    def imag(self) -> HPValue:
        return HPValue(self.value.imag, self.err, self.prec)

    def conjugate(self) -> "HPComplexValue":
        with mpmath.workdps(self._working()):
            return HPComplexValue(mpmath.conj(self.value), self.err, self.prec)


def as_complex(value, prec: int) -> HPComplexValue:
    """Coerce a number or HP value to an HPComplexValue."""
    if isinstance(value, HPComplexValue):
        return value
    if isinstance(value, HPBase):
        with mpmath.workdps(working_digits(value.prec)):
            return HPComplexValue(mpmath.mpc(value.value), value.err, value.prec)
    return HPComplexValue.exact(value, prec)


def as_real(value, prec: int) -> HPValue:
    if isinstance(value, HPValue):
        return value
    if isinstance(value, HPBase):
        return HPValue(mpmath.re(value.value), value.err, value.prec)
    return HPValue.exact(value, prec)
