"""Exact rational helpers shared by every module."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["Fraction", "ValidationError", "as_rational", "fmt"]


class ValidationError(ValueError):
    """Raised when an input violates a type invariant or precondition."""


def as_rational(value) -> Fraction:
    """Coerce ``value`` to a Fraction without losing exactness.

    Accepts ints, Fractions and strings such as ``"3/4"``, ``"-2"`` or
    ``"0.125"``. Floats are rejected because they silently carry binary
    rounding into the exact predicates.
    """
    if isinstance(value, bool):
        raise ValidationError(f"expected a rational, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"malformed rational {value!r}") from exc
    raise ValidationError(
        f"expected an exact rational (int or 'p/q' string), got {type(value).__name__} {value!r}"
    )


def fmt(q: Fraction) -> str:
    """Render a rational as ``"p/q"`` (or ``"p"`` when integral)."""
    return str(q)
