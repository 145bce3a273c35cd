"""Concrete Hadamard spaces: the spoke R-tree and flat Euclidean space.

Every distance and geodesic here is computed in exact rationals. The spoke
tree is the quotient of N x [0,1] that glues all radius-0 points into a
single root; two points on one spoke are |t - s| apart, points on distinct
spokes are t + s apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .rational import ValidationError, as_rational
from .report import CheckReport

__all__ = [
    "SpokeTree",
    "Euclidean",
    "SpokePoint",
    "EuclidPoint",
    "Space",
    "Point",
    "ROOT",
    "tree_point",
    "euclid_point",
    "validate_point",
    "dist_sq",
    "dist",
    "geodesic_point",
    "check_cn",
]


@dataclass(frozen=True)
class SpokeTree:
    kind: str = "SpokeTree"

    def __repr__(self) -> str:
        return "SpokeTree()"


@dataclass(frozen=True)
class Euclidean:
    dim: int
    kind: str = "Euclidean"

    def __post_init__(self):
        if not isinstance(self.dim, int) or isinstance(self.dim, bool) or self.dim < 1:
            raise ValidationError(f"Euclidean dim must be a positive integer, got {self.dim!r}")

    def __repr__(self) -> str:
        return f"Euclidean({self.dim})"


Space = Union[SpokeTree, Euclidean]


@dataclass(frozen=True)
class SpokePoint:
    spoke: int
    radius: Fraction

    def __repr__(self) -> str:
        return f"[({self.spoke},{self.radius})]"

    @property
    def is_root(self) -> bool:
        return self.radius == 0


@dataclass(frozen=True)
class EuclidPoint:
    coords: tuple[Fraction, ...]

    def __repr__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


Point = Union[SpokePoint, EuclidPoint]

ROOT = SpokePoint(0, Fraction(0))


def tree_point(spoke: int, radius) -> SpokePoint:
    """Build a canonical spoke-tree point; any radius-0 point becomes the root."""
    r = as_rational(radius)
    if not 0 <= r <= 1:
        raise ValidationError(f"radius {r} outside [0,1]")
    if not isinstance(spoke, int) or isinstance(spoke, bool) or spoke < 0:
        raise ValidationError(f"spoke index must be a nonnegative integer, got {spoke!r}")
    if r == 0:
        return ROOT
    return SpokePoint(spoke, r)


def euclid_point(*coords) -> EuclidPoint:
    if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
        coords = tuple(coords[0])
    return EuclidPoint(tuple(as_rational(c) for c in coords))


def validate_point(space: Space, p) -> None:
    if isinstance(space, SpokeTree):
        if not isinstance(p, SpokePoint):
            raise ValidationError(f"{p!r} is not a spoke-tree point")
        if not isinstance(p.radius, Fraction) or not 0 <= p.radius <= 1:
            raise ValidationError(f"radius of {p!r} outside [0,1]")
        if p.spoke < 0:
            raise ValidationError(f"negative spoke index in {p!r}")
        if p.radius == 0 and p.spoke != 0:
            raise ValidationError(f"non-canonical root point {p!r}: radius 0 requires spoke 0")
    elif isinstance(space, Euclidean):
        if not isinstance(p, EuclidPoint):
            raise ValidationError(f"{p!r} is not a Euclidean point")
        if len(p.coords) != space.dim:
            raise ValidationError(f"dimension mismatch: {p!r} in {space!r}")
    else:
        raise ValidationError(f"unknown space {space!r}")


def _tree_dist(p: SpokePoint, q: SpokePoint) -> Fraction:
    if p.spoke == q.spoke:
        return abs(p.radius - q.radius)
    return p.radius + q.radius


def dist_sq(space: Space, p: Point, q: Point) -> Fraction:
    """Exact squared distance d(p, q)^2."""
    validate_point(space, p)
    validate_point(space, q)
    if isinstance(space, SpokeTree):
        d = _tree_dist(p, q)
        return d * d
    return sum(((a - b) ** 2 for a, b in zip(p.coords, q.coords)), Fraction(0))


def tree_dist(space: SpokeTree, p: SpokePoint, q: SpokePoint) -> Fraction:
    """Exact (unsquared) distance; spoke-tree distances are always rational."""
    validate_point(space, p)
    validate_point(space, q)
    return _tree_dist(p, q)


def dist(space: Space, p: Point, q: Point) -> float:
    if isinstance(space, SpokeTree):
        return float(tree_dist(space, p, q))
    return _sqrt_fraction(dist_sq(space, p, q))


def _sqrt_fraction(q: Fraction) -> float:
    # int / int true division is correctly rounded even for huge operands
    return math.sqrt(q.numerator / q.denominator)


def geodesic_point(space: Space, x: Point, y: Point, lam) -> Point:
    """The point (1 - lam) x (+) lam y on the unique geodesic from x to y."""
    lam = as_rational(lam)
    if not 0 <= lam <= 1:
        raise ValidationError(f"geodesic parameter {lam} outside [0,1]")
    validate_point(space, x)
    validate_point(space, y)
    if x == y or lam == 0:
        return x
    if lam == 1:
        return y
    if isinstance(space, Euclidean):
        return EuclidPoint(tuple((1 - lam) * a + lam * b for a, b in zip(x.coords, y.coords)))
    t, s = x.radius, y.radius
    if x.spoke == y.spoke or x.is_root or y.is_root:
        # same spoke or through the root endpoint: the geodesic is the straight segment
        spoke = y.spoke if x.is_root else x.spoke
        return tree_point(spoke, (1 - lam) * t + lam * s)
    if lam <= t / (t + s):
        return tree_point(x.spoke, (1 - lam) * t - lam * s)
    return tree_point(y.spoke, (lam - 1) * t + lam * s)


def check_cn(space: Space, x: Point, y: Point, z: Point, t) -> CheckReport:
    """Exact CN-inequality check at the geodesic point c(t) between x and y."""
    t = as_rational(t)
    c = geodesic_point(space, x, y, t)
    lhs = dist_sq(space, z, c)
    rhs = (1 - t) * dist_sq(space, z, x) + t * dist_sq(space, z, y) - t * (1 - t) * dist_sq(space, x, y)
    return CheckReport(
        "cn-inequality",
        lhs <= rhs,
        lhs,
        rhs,
        witness=None if lhs <= rhs else {"x": x, "y": y, "z": z, "t": t},
        details={"equality": lhs == rhs},
    )
