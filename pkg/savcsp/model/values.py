import re

from fractions import Fraction
from functools import total_ordering
from typing import Optional, Union

from ..utils import format_fraction

_RATIONAL_REG = re.compile(r"^[+-]?\d+(/\d+)?$")

Number = Union[int, Fraction, "ExtRational"]


@total_ordering
class ExtRational:
    """An exact rational number, or positive infinity.
    Infinity absorbs addition and compares greater than every finite value; multiplying it by zero is an error."""

    __slots__ = ("_value",)

    def __init__(self, value: Optional[Number] = 0) -> None:
        """Initialise class.
        :param value: int, Fraction or ExtRational; None means positive infinity"""
        if isinstance(value, ExtRational):
            value = value._value
        elif value is not None:
            if isinstance(value, float):
                raise TypeError("ExtRational() refuses floating point input, pass an int, Fraction or string")

            value = Fraction(value)

        object.__setattr__(self, "_value", value)

    def __setattr__(self, name, value):
        raise AttributeError("ExtRational is immutable")

    @classmethod
    def parse(cls, text: str) -> "ExtRational":
        """Parse 'inf', an integer, or 'p/q'.
        :param text: string representation"""
        text = text.strip()

        if text == "inf":
            return INF

        if not _RATIONAL_REG.match(text):
            raise ValueError(f"malformed rational {text!r}")

        num, _, den = text.partition("/")

        if den and int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")

        return cls(Fraction(int(num), int(den) if den else 1))

    @property
    def is_finite(self) -> bool:
        return self._value is not None

    @property
    def fraction(self) -> Fraction:
        """The finite value as a Fraction."""
        if self._value is None:
            raise ValueError("infinite value has no rational representation")

        return self._value

    def _coerce(self, other) -> Optional["ExtRational"]:
        if isinstance(other, ExtRational):
            return other

        if isinstance(other, (int, Fraction)):
            return ExtRational(other)

        return None

    def __add__(self, other) -> "ExtRational":
        other = self._coerce(other)

        if other is None:
            return NotImplemented

        if self._value is None or other._value is None:
            return INF

        return ExtRational(self._value + other._value)

    __radd__ = __add__

    def __sub__(self, other) -> "ExtRational":
        other = self._coerce(other)

        if other is None:
            return NotImplemented

        if other._value is None:
            raise ArithmeticError("subtracting infinity is undefined")

        return INF if self._value is None else ExtRational(self._value - other._value)

    def __neg__(self) -> "ExtRational":
        if self._value is None:
            raise ArithmeticError("negative infinity is not representable")

        return ExtRational(-self._value)

    def __mul__(self, other) -> "ExtRational":
        if isinstance(other, ExtRational):
            if other._value is None:
                return INF if self._value is None else other.__mul__(self)

            other = other._value

        if not isinstance(other, (int, Fraction)):
            return NotImplemented

        if self._value is None:
            if other == 0:
                raise ArithmeticError("infinity multiplied by zero")

            if other < 0:
                raise ArithmeticError("negative infinity is not representable")

            return INF

        return ExtRational(self._value * other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = self._coerce(other)

        if other is None:
            return NotImplemented

        return self._value == other._value

    def __lt__(self, other) -> bool:
        other = self._coerce(other)

        if other is None:
            return NotImplemented

        if self._value is None:
            return False

        return other._value is None or self._value < other._value

    def __hash__(self) -> int:
        # finite values hash like the equal int or Fraction
        return hash(self._value) if self._value is not None else hash(("ExtRational", "inf"))

    def __str__(self) -> str:
        return "inf" if self._value is None else format_fraction(self._value)

    def __repr__(self) -> str:
        return f"ExtRational({str(self)!r})"


INF = object.__new__(ExtRational)
object.__setattr__(INF, "_value", None)
ZERO = ExtRational(0)


def ext(value: Union[Number, str]) -> ExtRational:
    """Coerce ints, Fractions, strings ('inf', 'p/q') and ExtRationals to ExtRational.
    :param value: value to coerce"""
    if isinstance(value, ExtRational):
        return value

    if isinstance(value, str):
        return ExtRational.parse(value)

    return ExtRational(value)


def ext_sum(values) -> ExtRational:
    """Exact sum of an iterable of ExtRational values; the empty sum is 0.
    :param values: iterable of values"""
    total = Fraction(0)

    for v in values:
        v = ext(v)

        if not v.is_finite:
            return INF

        total += v.fraction

    return ExtRational(total)
