"""Monotone relatedness, monotone polars and maximal monotone extensions.

The product X x X-dual is infinite, so every polar, closure and maximality
notion here is taken relative to an explicit finite ground set ``G``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .dual import DualElement, combination, evaluate
from .quasilin import BoundVector
from .rational import ValidationError, as_rational
from .report import CheckReport
from .spaces import Point, Space, validate_point

__all__ = [
    "Pair",
    "PairSet",
    "ContractError",
    "SizeLimitError",
    "mu_value",
    "mu_related",
    "is_monotone",
    "mu_related_to_set",
    "polar",
    "mu_closure",
    "is_maximal_in",
    "extend_maximal",
    "enumerate_maximal_extensions",
    "slice_duals",
    "check_slice_convex",
    "antagonist",
    "polarity_law_reports",
]

DEFAULT_ENUM_LIMIT = 14


class ContractError(ValueError):
    """A documented precondition (e.g. monotonicity of the input) is violated."""


class SizeLimitError(ValueError):
    """Exhaustive enumeration refused because the ground set is too large."""


@dataclass(frozen=True)
class Pair:
    point: Point
    dual: DualElement

    def __repr__(self) -> str:
        return f"({self.point!r}, {self.dual!r})"


class PairSet:
    """Finite, duplicate-free, insertion-ordered collection of pairs in one space.

    Duplicates are detected structurally (termwise), not up to equivalence of
    dual elements. Equality ignores order.
    """

    __slots__ = ("space", "pairs", "_members")

    def __init__(self, space: Space, pairs: Iterable[Pair] = ()):
        self.space = space
        seen: dict[Pair, None] = {}
        for p in pairs:
            if not isinstance(p, Pair):
                raise ValidationError(f"{p!r} is not a Pair")
            validate_point(space, p.point)
            for tm in p.dual.terms:
                validate_point(space, tm.tail)
                validate_point(space, tm.head)
            seen.setdefault(p, None)
        self.pairs: tuple[Pair, ...] = tuple(seen)
        self._members = frozenset(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, p) -> bool:
        return p in self._members

    def __getitem__(self, i):
        return self.pairs[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PairSet):
            return NotImplemented
        return self.space == other.space and self._members == other._members

    def __hash__(self) -> int:
        return hash((self.space, self._members))

    def __repr__(self) -> str:
        return f"PairSet({self.space!r}, {list(self.pairs)!r})"

    def issubset(self, other: "PairSet") -> bool:
        return self._members <= other._members

    def __le__(self, other: "PairSet") -> bool:
        return self.issubset(other)

    def union(self, *others: "PairSet") -> "PairSet":
        pairs = list(self.pairs)
        for o in others:
            _same_space(self, o)
            pairs.extend(o.pairs)
        return PairSet(self.space, pairs)

    def intersection(self, other: "PairSet") -> "PairSet":
        _same_space(self, other)
        return PairSet(self.space, [p for p in self.pairs if p in other])

    def with_pair(self, p: Pair) -> "PairSet":
        return PairSet(self.space, self.pairs + (p,))

    def subset(self, indices: Iterable[int]) -> "PairSet":
        return PairSet(self.space, [self.pairs[i] for i in sorted(indices)])

    def domain(self) -> list[Point]:
        return list(dict.fromkeys(p.point for p in self.pairs))

    def range(self) -> list[DualElement]:
        return list(dict.fromkeys(p.dual for p in self.pairs))


def _same_space(a: PairSet, b: PairSet) -> None:
    if a.space != b.space:
        raise ValidationError(f"space mismatch: {a.space!r} vs {b.space!r}")


@lru_cache(maxsize=1 << 16)
def _mu_value(space: Space, p1: Pair, p2: Pair) -> Fraction:
    yx = BoundVector(p2.point, p1.point)
    return evaluate(space, p1.dual, yx) - evaluate(space, p2.dual, yx)


def mu_value(space: Space, p1: Pair, p2: Pair) -> Fraction:
    """<x* - y*, yx> for p1 = (x, x*), p2 = (y, y*)."""
    return _mu_value(space, p1, p2)


def mu_related(space: Space, p1: Pair, p2: Pair) -> bool:
    return _mu_value(space, p1, p2) >= 0


def is_monotone(space: Space, M: PairSet) -> CheckReport:
    pairs = M.pairs
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            v = _mu_value(space, pairs[i], pairs[j])
            if v < 0:
                return CheckReport("monotone", False, v, Fraction(0), ">=", witness=(pairs[i], pairs[j]))
    flags = ("vacuous",) if len(pairs) < 2 else ()
    return CheckReport("monotone", True, None, None, ">=", flags=flags, details={"size": len(pairs)})


def mu_related_to_set(space: Space, p: Pair, M: PairSet) -> bool:
    return all(_mu_value(space, p, m) >= 0 for m in M)


def _check_ground(M: PairSet, G: PairSet) -> None:
    _same_space(M, G)
    if not M.issubset(G):
        missing = [p for p in M if p not in G]
        raise ValidationError(f"ground set does not contain {missing[0]!r}")


def polar(space: Space, M: PairSet, G: PairSet) -> PairSet:
    """Pairs of ``G`` that are monotonically related to every pair of ``M``."""
    _check_ground(M, G)
    return PairSet(space, [g for g in G if mu_related_to_set(space, g, M)])


def mu_closure(space: Space, M: PairSet, G: PairSet) -> PairSet:
    return polar(space, polar(space, M, G), G)


def _require_monotone(space: Space, M: PairSet) -> None:
    rep = is_monotone(space, M)
    if not rep.passed:
        raise ContractError(f"input set is not monotone: {rep.witness!r}")


def is_maximal_in(space: Space, M: PairSet, G: PairSet) -> bool:
    _check_ground(M, G)
    _require_monotone(space, M)
    return polar(space, M, G) == M


def extend_maximal(space: Space, M: PairSet, G: PairSet, order: Sequence[int] | None = None) -> PairSet:
    """Greedy maximal monotone extension of ``M`` inside ``G``.

    ``order`` is a permutation of ``range(len(G))``; the default scans ``G`` in
    insertion order. A single pass suffices: a rejected pair is unrelated to a
    member that stays in the result.
    """
    _check_ground(M, G)
    _require_monotone(space, M)
    if order is None:
        order = range(len(G))
    order = list(order)
    if sorted(order) != list(range(len(G))):
        raise ValidationError(f"order must be a permutation of 0..{len(G) - 1}")
    current = list(M.pairs)
    for i in order:
        g = G[i]
        if g in M:
            continue
        if all(_mu_value(space, g, m) >= 0 for m in current):
            current.append(g)
    return PairSet(space, current)


def enumerate_maximal_extensions(space: Space, M: PairSet, G: PairSet, limit: int = DEFAULT_ENUM_LIMIT) -> list[PairSet]:
    """Every maximal monotone M~ with M <= M~ <= G.

    Candidates are the pairs of G outside M related to all of M; the
    extensions are exactly M joined with the maximal cliques of the
    relatedness graph on the candidates (Bron-Kerbosch with pivoting).
    """
    if len(G) > limit:
        raise SizeLimitError(f"ground set has {len(G)} pairs; exhaustive limit is {limit}")
    _check_ground(M, G)
    _require_monotone(space, M)
    cand = [g for g in G if g not in M and mu_related_to_set(space, g, M)]
    n = len(cand)
    nbr = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if _mu_value(space, cand[i], cand[j]) >= 0:
                nbr[i] |= 1 << j
                nbr[j] |= 1 << i

    cliques: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if p == 0 and x == 0:
            cliques.append(r)
            return
        px = p | x
        pivot = max(_bits(px), key=lambda u: bin(p & nbr[u]).count("1"))
        for v in _bits(p & ~nbr[pivot]):
            bit = 1 << v
            expand(r | bit, p & nbr[v], x & nbr[v])
            p &= ~bit
            x |= bit

    expand(0, (1 << n) - 1, 0)
    cliques.sort(key=lambda r: [i for i in range(n) if r >> i & 1])
    return [PairSet(space, list(M.pairs) + [cand[i] for i in range(n) if r >> i & 1]) for r in cliques]


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def slice_duals(space: Space, M: PairSet, u: Point) -> list[DualElement]:
    validate_point(space, u)
    return [p.dual for p in M if p.point == u]


def check_slice_convex(space: Space, M: PairSet, u: Point, lambdas: Sequence) -> CheckReport:
    """Combinations (1-lam) u* + lam v* of slice duals at ``u`` stay related to ``M``.

    Holds for any monotone ``M``; for a maximal ``M`` this certifies that the
    combinations belong to ``M`` again.
    """
    _require_monotone(space, M)
    duals = slice_duals(space, M, u)
    lams = [as_rational(l) for l in lambdas]
    checked = 0
    for i, ud in enumerate(duals):
        for vd in duals[i + 1 :]:
            for lam in lams:
                if not 0 <= lam <= 1:
                    raise ValidationError(f"lambda {lam} outside [0,1]")
                combo = Pair(u, combination([(1 - lam, ud), (lam, vd)]))
                checked += 1
                for m in M:
                    v = _mu_value(space, combo, m)
                    if v < 0:
                        return CheckReport("slice-convex", False, v, Fraction(0), ">=",
                                           witness={"combination": combo, "against": m, "lambda": lam})
    flags = ("vacuous",) if checked == 0 else ()
    return CheckReport("slice-convex", True, None, None, ">=", flags=flags, details={"combinations": checked})


def antagonist(space: Space, pair: Pair, other: Point) -> Pair:
    """A pair at ``other`` that is not monotonically related to ``pair``.

    (y, x* + [yx]) gives <x* - y*, yx> = -<yx, yx> = -d(x,y)^2 < 0.
    """
    if other == pair.point:
        raise ValidationError("antagonist needs a point distinct from the pair's point")
    from .dual import bracket

    return Pair(other, pair.dual + bracket(other, pair.point))


def _rand_subset(G: PairSet, rng: random.Random) -> PairSet:
    return PairSet(G.space, [g for g in G if rng.random() < 0.5])


def _random_monotone_subset(space: Space, G: PairSet, rng: random.Random) -> PairSet:
    order = list(range(len(G)))
    rng.shuffle(order)
    keep = rng.randint(0, len(G))
    full = extend_maximal(space, PairSet(space), G, order)
    return PairSet(space, full.pairs[:keep])


def polarity_law_reports(space: Space, G: PairSet, rng: random.Random, rounds: int = 3) -> list[CheckReport]:
    """Exercise every G-relative polarity, closure and extension law on random subsets of ``G``."""
    reports: list[CheckReport] = []

    def law(name: str, ok: bool, witness=None) -> None:
        reports.append(CheckReport(name, bool(ok), relation="==", witness=None if ok else witness))

    empty = PairSet(space)
    law("polar-of-empty-is-ground", polar(space, empty, G) == G)
    for _ in range(rounds):
        m1 = _rand_subset(G, rng)
        m2 = m1.union(_rand_subset(G, rng))
        p1, p2 = polar(space, m1, G), polar(space, m2, G)
        c1, c2 = mu_closure(space, m1, G), mu_closure(space, m2, G)
        law("polar-antitone", p2 <= p1, (m1, m2))
        law("closure-extensive", m1 <= c1, m1)
        law("closure-monotone", c1 <= c2, (m1, m2))
        law("closure-idempotent", mu_closure(space, c1, G) == c1, m1)
        law("polar-of-closure", polar(space, c1, G) == p1, m1)
        fam = [_rand_subset(G, rng) for _ in range(rng.randint(1, 3))]
        inter = G
        for f in fam:
            inter = inter.intersection(polar(space, f, G))
        law("polar-union-law", polar(space, fam[0].union(*fam[1:]), G) == inter, fam)

        mono = is_monotone(space, m1).passed
        equiv = (mono, m1 <= p1, c1 <= p1, is_monotone(space, c1).passed)
        law("monotone-equivalences", len(set(equiv)) == 1, {"set": m1, "values": equiv})

        mm = _random_monotone_subset(space, G, rng)
        pm = polar(space, mm, G)
        exts = enumerate_maximal_extensions(space, mm, G)
        union = empty.union(*exts) if exts else empty
        inter = exts[0] if exts else empty
        for e in exts[1:]:
            inter = inter.intersection(e)
        law("extensions-nonempty", len(exts) >= 1, mm)
        law("polar-is-union-of-extensions", union == pm, mm)
        law("closure-is-intersection-of-extensions", inter == mu_closure(space, mm, G), mm)
        law("extensions-are-maximal", all(is_maximal_in(space, e, G) for e in exts), mm)
        brute = not any(g not in mm and is_monotone(space, mm.with_pair(g)).passed for g in G)
        law("maximal-iff-equals-polar", brute == is_maximal_in(space, mm, G), mm)
        greedy = extend_maximal(space, mm, G, rng.sample(range(len(G)), len(G)))
        law("greedy-extension-enumerated", greedy in exts, mm)

    if len(G) and len(G.domain()) > 1:
        pts = G.domain()
        anti = [antagonist(space, g, next(q for q in pts if q != g.point)) for g in G]
        g2 = G.union(PairSet(space, anti))
        law("polar-of-antagonised-ground-is-empty", len(polar(space, g2, g2)) == 0, g2)
    return reports
