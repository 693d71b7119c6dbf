"""Exact rational scalars and their string form.

Every scalar in the library is a :class:`fractions.Fraction`.  Fractions are
always kept reduced with a positive denominator, which is exactly the
invariant the configurations and wall-crossing code relies on.
"""
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

__all__ = [
    "as_rational",
    "format_rational",
    "as_vector",
    "format_vector",
    "RationalParseError",
]


class RationalParseError(ValueError):
    pass


def as_rational(value) -> Fraction:
    """Convert an int, Fraction or string ("a/b", "a", "-1.5") to a Fraction.

    Binary floats are refused: they would silently carry representation error
    into sign decisions.
    """
    if isinstance(value, bool):
        raise RationalParseError(f"booleans are not rationals: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, float):
        raise RationalParseError(f"floats are not accepted, pass a string such as '{value}' instead")
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise RationalParseError(f"cannot parse rational {value!r}") from exc
    raise RationalParseError(f"cannot interpret {value!r} as a rational")


def format_rational(q: Fraction) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_vector(values: Iterable) -> tuple:
    return tuple(as_rational(v) for v in values)


def format_vector(values: Sequence) -> list:
    return [format_rational(v) for v in values]
