"""Exact rational parsing and "p/q" serialization."""
from __future__ import annotations

from fractions import Fraction


def parse_rational(value) -> Fraction:
    """Parse an int or a ``"p/q"`` string. Floats are rejected to keep inputs exact."""
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise ValueError(f"not a rational: {value!r} (use an int or a 'p/q' string)")


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_vector(v) -> list[str]:
    return [format_rational(x) for x in v]


def parse_vector(v) -> tuple:
    return tuple(parse_rational(x) for x in v)
