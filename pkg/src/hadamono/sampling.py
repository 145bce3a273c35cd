"""Seeded random generators for points, dual elements and pair sets."""

from __future__ import annotations

import random
from fractions import Fraction

from .dual import DualElement, Term
from .spaces import Point, Space, SpokeTree, euclid_point, tree_point

__all__ = ["random_rational", "random_point", "random_dual", "random_pair", "random_ground"]


def random_rational(rng: random.Random, lo=-2, hi=2, max_den: int = 6) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_point(space: Space, rng: random.Random, spokes: int = 4, max_den: int = 6) -> Point:
    if isinstance(space, SpokeTree):
        den = rng.randint(1, max_den)
        return tree_point(rng.randint(1, spokes), Fraction(rng.randint(0, den), den))
    return euclid_point([random_rational(rng, max_den=max_den) for _ in range(space.dim)])


def random_dual(space: Space, rng: random.Random, max_terms: int = 2, points=None) -> DualElement:
    terms = []
    for _ in range(rng.randint(0, max_terms)):
        if points:
            a, b = rng.choice(points), rng.choice(points)
        else:
            a, b = random_point(space, rng), random_point(space, rng)
        terms.append(Term(Fraction(rng.randint(-2, 2)), Fraction(rng.choice((1, 1, 2)), rng.choice((1, 2))), a, b))
    return DualElement(tuple(terms))


def random_pair(space: Space, rng: random.Random, points=None):
    from .monotone import Pair

    x = rng.choice(points) if points else random_point(space, rng)
    return Pair(x, random_dual(space, rng, points=points))


def random_ground(space: Space, rng: random.Random, size: int, n_points: int = 5):
    """A pair set of exactly ``size`` pairs drawn over a small shared point pool."""
    from .monotone import PairSet

    pool = list(dict.fromkeys(random_point(space, rng) for _ in range(n_points)))
    pairs: dict = {}
    while len(pairs) < size:
        pairs.setdefault(random_pair(space, rng, pool), None)
    return PairSet(space, pairs)
