"""Linear-dual elements as formal sums of scaled bound vectors.

A dual element is kept as the list of terms ``alpha * [t * ab]`` it was
built from; nothing is quotiented. Two elements are compared either on a
finite witness set (any space) or through their Euclidean reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .quasilin import BoundVector, qlin
from .rational import ValidationError, as_rational
from .spaces import Euclidean, Point, Space, dist, validate_point

__all__ = [
    "Term",
    "DualElement",
    "ZERO",
    "bracket",
    "evaluate",
    "coupling",
    "norm_single",
    "norm_lower_bound",
    "equiv_on_witnesses",
    "reduce_euclidean",
]


@dataclass(frozen=True)
class Term:
    alpha: Fraction
    t: Fraction
    tail: Point
    head: Point

    @property
    def weight(self) -> Fraction:
        return self.alpha * self.t

    @property
    def vector(self) -> BoundVector:
        return BoundVector(self.tail, self.head)


@dataclass(frozen=True)
class DualElement:
    terms: tuple[Term, ...] = ()

    def __add__(self, other: "DualElement") -> "DualElement":
        if not isinstance(other, DualElement):
            return NotImplemented
        return DualElement(self.terms + other.terms)

    def __neg__(self) -> "DualElement":
        return self.scaled(-1)

    def __sub__(self, other: "DualElement") -> "DualElement":
        if not isinstance(other, DualElement):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, c) -> "DualElement":
        return self.scaled(c)

    def scaled(self, c) -> "DualElement":
        c = as_rational(c)
        return DualElement(tuple(Term(c * tm.alpha, tm.t, tm.tail, tm.head) for tm in self.terms))

    def pruned(self) -> "DualElement":
        """Drop terms that evaluate to zero everywhere (zero weight or zero vector)."""
        return DualElement(tuple(tm for tm in self.terms if tm.weight != 0 and tm.tail != tm.head))

    def points(self) -> list[Point]:
        out: list[Point] = []
        for tm in self.terms:
            for p in (tm.tail, tm.head):
                if p not in out:
                    out.append(p)
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{tm.alpha}[{tm.t}*{tm.tail!r}{tm.head!r}]" for tm in self.terms)


ZERO = DualElement()


def bracket(tail: Point, head: Point, alpha=1, t=1) -> DualElement:
    """Single-term element ``alpha * [t * (tail -> head)]``."""
    return DualElement((Term(as_rational(alpha), as_rational(t), tail, head),))


def combination(pairs: Iterable[tuple[object, DualElement]]) -> DualElement:
    """Termwise formal combination sum(c_i * phi_i)."""
    out = ZERO
    for c, phi in pairs:
        out = out + phi.scaled(c)
    return out


def evaluate(space: Space, phi: DualElement, v: BoundVector) -> Fraction:
    """<phi, v> = sum_i alpha_i t_i <a_i b_i, v>, exact."""
    total = Fraction(0)
    for tm in phi.terms:
        w = tm.weight
        if w == 0:
            validate_point(space, tm.tail)
            validate_point(space, tm.head)
            continue
        total += w * qlin(space, tm.vector, v)
    return total


def coupling(space: Space, p: Point, x: Point, phi: DualElement) -> Fraction:
    """The p-coupling pi_p(x, phi) = <phi, px>."""
    return evaluate(space, phi, BoundVector(p, x))


def norm_single(space: Space, alpha, t, a: Point, b: Point) -> float:
    """Dual norm of a single-term element: |alpha t| d(a, b)."""
    return float(abs(as_rational(alpha) * as_rational(t))) * dist(space, a, b)


def norm_lower_bound(space: Space, phi: DualElement, witnesses: Sequence[Point]) -> float:
    """Certified lower bound on the dual norm from witness quadruples.

    Maximises |<phi,ab> - <phi,cd>| / (d(a,b) + d(c,d)) over all a, b, c, d
    drawn from ``witnesses`` with a != b or c != d.
    """
    pts = list(dict.fromkeys(witnesses))
    if len(pts) < 2:
        raise ValidationError("dual norm sup is undefined on fewer than two distinct witnesses")
    pairs = list(product(pts, repeat=2))
    vals = np.array([float(evaluate(space, phi, BoundVector(a, b))) for a, b in pairs])
    lens = np.array([dist(space, a, b) for a, b in pairs])
    num = np.abs(vals[:, None] - vals[None, :])
    den = lens[:, None] + lens[None, :]
    ok = den > 0
    return float(np.max(np.where(ok, num / np.where(ok, den, 1.0), 0.0)))


def equiv_on_witnesses(space: Space, phi: DualElement, psi: DualElement, witnesses: Sequence[Point]) -> bool:
    """True iff phi and psi agree on every bound vector xy with x, y in ``witnesses``."""
    if not witnesses:
        raise ValidationError("witness set must be nonempty")
    pts = list(dict.fromkeys(witnesses))
    return all(
        evaluate(space, phi, BoundVector(x, y)) == evaluate(space, psi, BoundVector(x, y))
        for x, y in product(pts, repeat=2)
    )


def reduce_euclidean(space: Space, phi: DualElement) -> tuple[Fraction, ...]:
    """Canonical vector sum alpha_i t_i (b_i - a_i) of a Euclidean dual element."""
    if not isinstance(space, Euclidean):
        raise ValidationError("reduce_euclidean needs a Euclidean space")
    acc = [Fraction(0)] * space.dim
    for tm in phi.terms:
        validate_point(space, tm.tail)
        validate_point(space, tm.head)
        w = tm.weight
        for i in range(space.dim):
            acc[i] += w * (tm.head.coords[i] - tm.tail.coords[i])
    return tuple(acc)
