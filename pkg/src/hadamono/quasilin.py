"""Quasilinearization: the surrogate inner product on bound vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .report import CheckReport
from .spaces import Point, Space, dist_sq, validate_point

__all__ = ["BoundVector", "qlin", "norm_sq", "check_cauchy_schwarz", "exact_sqrt"]


@dataclass(frozen=True)
class BoundVector:
    tail: Point
    head: Point

    def __repr__(self) -> str:
        return f"{self.tail!r}->{self.head!r}"

    def reversed(self) -> "BoundVector":
        return BoundVector(self.head, self.tail)

    @property
    def is_zero(self) -> bool:
        return self.tail == self.head


def qlin(space: Space, v: BoundVector, w: BoundVector) -> Fraction:
    """<ab, cd> = (d(a,d)^2 + d(b,c)^2 - d(a,c)^2 - d(b,d)^2) / 2 for v = ab, w = cd."""
    a, b, c, d = v.tail, v.head, w.tail, w.head
    return (dist_sq(space, a, d) + dist_sq(space, b, c) - dist_sq(space, a, c) - dist_sq(space, b, d)) / 2


def norm_sq(space: Space, v: BoundVector) -> Fraction:
    return dist_sq(space, v.tail, v.head)


def exact_sqrt(q: Fraction) -> Fraction | None:
    """Square root of ``q`` if it is a perfect rational square, else None."""
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def check_cauchy_schwarz(space: Space, v: BoundVector, w: BoundVector) -> CheckReport:
    """Exact test of <v, w> <= |v| |w| by sign-aware squared comparison."""
    for p in (v.tail, v.head, w.tail, w.head):
        validate_point(space, p)
    q = qlin(space, v, w)
    bound_sq = norm_sq(space, v) * norm_sq(space, w)
    passed = q <= 0 or q * q <= bound_sq
    bound = exact_sqrt(bound_sq)
    if bound is None:
        bound = math.sqrt(bound_sq.numerator / bound_sq.denominator)
    return CheckReport(
        "cauchy-schwarz",
        passed,
        q,
        bound,
        witness=None if passed else {"v": v, "w": w},
        details={"bound_sq": bound_sq},
    )
