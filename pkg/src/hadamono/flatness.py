"""Flatness and F_l-property checks.

Nothing here proves flatness; checks either certify a violation with an
exact witness or report consistency on the sampled tuples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .dual import DualElement, bracket, coupling
from .monotone import Pair, PairSet
from .quasilin import BoundVector, qlin
from .rational import ValidationError, as_rational
from .report import CheckReport
from .sampling import random_point
from .spaces import Point, Space, SpokeTree, geodesic_point, tree_point, validate_point

__all__ = [
    "DEFAULT_LAMBDAS",
    "FlSample",
    "check_flat_identity",
    "test_flatness",
    "check_fl_property",
    "check_fl_base_independence",
    "check_pi_convexity",
    "flat_violation_to_fl",
    "SPOKE_FLAT_WITNESS",
]

DEFAULT_LAMBDAS = tuple(Fraction(s) for s in ("0", "1/4", "1/3", "1/2", "2/3", "3/4", "1"))

# x, y, a, b, lambda on the spoke tree for which the flat identity breaks
SPOKE_FLAT_WITNESS = (
    tree_point(2, "1/2"),
    tree_point(1, "1/2"),
    tree_point(3, "1/3"),
    tree_point(2, "1/2"),
    Fraction(1, 4),
)


@dataclass(frozen=True)
class FlSample:
    """Quantified data for an F_l check.

    With ``tuples`` unset the check ranges over Dom(M) x Dom(M) x ``lambdas``;
    otherwise only over the listed (x, y, lambda) tuples.
    """

    base: Point
    lambdas: tuple[Fraction, ...] = DEFAULT_LAMBDAS
    base2: Point | None = None
    tuples: tuple[tuple[Point, Point, Fraction], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(as_rational(l) for l in self.lambdas))
        for lam in self.lambdas:
            if not 0 <= lam <= 1:
                raise ValidationError(f"lambda {lam} outside [0,1]")
        if self.tuples is not None:
            tups = tuple((x, y, as_rational(l)) for x, y, l in self.tuples)
            for _, _, lam in tups:
                if not 0 <= lam <= 1:
                    raise ValidationError(f"lambda {lam} outside [0,1]")
            object.__setattr__(self, "tuples", tups)


def check_flat_identity(space: Space, x: Point, y: Point, a: Point, b: Point, lam) -> CheckReport:
    """<x c, ab> == lam <xy, ab> where c = (1-lam) x (+) lam y."""
    lam = as_rational(lam)
    c = geodesic_point(space, x, y, lam)
    ab = BoundVector(a, b)
    lhs = qlin(space, BoundVector(x, c), ab)
    rhs = lam * qlin(space, BoundVector(x, y), ab)
    ok = lhs == rhs
    return CheckReport(
        "flat-identity",
        ok,
        lhs,
        rhs,
        "==",
        witness=None if ok else {"x": x, "y": y, "a": a, "b": b, "lambda": lam},
        details={"geodesic_point": c},
    )


def test_flatness(space: Space, seed: int = 0, n_samples: int = 200, inject: bool = True) -> CheckReport:
    """Search for a flat-identity violation on seeded random tuples.

    On the spoke tree the known counterexample tuple is tried first when
    ``inject`` is set.
    """
    rng = random.Random(seed)
    tuples = []
    if inject and isinstance(space, SpokeTree):
        tuples.append(SPOKE_FLAT_WITNESS)
    for _ in range(n_samples):
        pts = [random_point(space, rng) for _ in range(4)]
        tuples.append((*pts, DEFAULT_LAMBDAS[rng.randrange(len(DEFAULT_LAMBDAS))]))
    for tup in tuples:
        rep = check_flat_identity(space, *tup)
        if not rep.passed:
            return CheckReport("flatness", False, rep.lhs, rep.rhs, "==", witness=rep.witness,
                               details={"tuples_checked": tuples.index(tup) + 1})
    flags = ("vacuous", "inconclusive") if not tuples else ("sampled",)
    return CheckReport("flatness", True, None, None, "==", flags=flags, details={"tuples_checked": len(tuples)})


def _fl_sides(space: Space, phi: DualElement, p: Point, x: Point, y: Point, lam: Fraction):
    c = geodesic_point(space, x, y, lam)
    lhs = coupling(space, p, c, phi)
    rhs = (1 - lam) * coupling(space, p, x, phi) + lam * coupling(space, p, y, phi)
    return lhs, rhs, c


def _fl_tuples(M: PairSet, sample: FlSample):
    if sample.tuples is not None:
        dom = set(M.domain())
        for x, y, lam in sample.tuples:
            if x not in dom or y not in dom:
                raise ValidationError(f"sample tuple point outside Dom(M): {x!r}, {y!r}")
        return list(sample.tuples)
    dom = M.domain()
    return [(x, y, lam) for x in dom for y in dom for lam in sample.lambdas]


def check_fl_property(space: Space, M: PairSet, sample: FlSample) -> CheckReport:
    """Exact F_l test over Range(M) x sampled (x, y, lambda) with base ``sample.base``."""
    return _check_fl(space, M, sample, sample.base)


def _check_fl(space: Space, M: PairSet, sample: FlSample, base: Point) -> CheckReport:
    validate_point(space, base)
    if len(M) == 0:
        return CheckReport("fl-property", True, flags=("vacuous",))
    tuples = _fl_tuples(M, sample)
    checked = 0
    for phi in M.range():
        for x, y, lam in tuples:
            lhs, rhs, c = _fl_sides(space, phi, base, x, y, lam)
            checked += 1
            if lhs > rhs:
                return CheckReport(
                    "fl-property", False, lhs, rhs,
                    witness={"dual": phi, "x": x, "y": y, "lambda": lam, "base": base, "geodesic_point": c},
                    details={"tuples_checked": checked},
                )
    return CheckReport("fl-property", True, None, None, flags=("sampled",), details={"tuples_checked": checked})


def check_fl_base_independence(space: Space, M: PairSet, p: Point, q: Point, sample: FlSample) -> CheckReport:
    """The F_l verdict, and every per-tuple slack rhs - lhs, agree at bases ``p`` and ``q``."""
    at_p = _check_fl(space, M, sample, p)
    at_q = _check_fl(space, M, sample, q)
    slack_equal = True
    if len(M):
        for phi in M.range():
            for x, y, lam in _fl_tuples(M, sample):
                lp, rp, _ = _fl_sides(space, phi, p, x, y, lam)
                lq, rq, _ = _fl_sides(space, phi, q, x, y, lam)
                if rp - lp != rq - lq:
                    slack_equal = False
                    break
    ok = at_p.passed == at_q.passed and slack_equal
    return CheckReport(
        "fl-base-independence", ok, at_p.passed, at_q.passed, "==",
        details={"at_p": at_p.to_json(), "at_q": at_q.to_json(), "slack_equal": slack_equal},
    )


def check_pi_convexity(space: Space, phi: DualElement, p: Point, triples: Sequence) -> CheckReport:
    """pi_p((1-lam) a (+) lam b, phi) <= (1-lam) pi_p(a, phi) + lam pi_p(b, phi) per triple.

    The F_l verdict of {a, b : triples} x {phi} on the same triples is
    reported alongside in ``details['fl_passed']``; the two always agree.
    """
    triples = [(a, b, as_rational(l)) for a, b, l in triples]
    failure = None
    for a, b, lam in triples:
        if not 0 <= lam <= 1:
            raise ValidationError(f"lambda {lam} outside [0,1]")
        c = geodesic_point(space, a, b, lam)
        lhs = coupling(space, p, c, phi)
        rhs = (1 - lam) * coupling(space, p, a, phi) + lam * coupling(space, p, b, phi)
        if lhs > rhs and failure is None:
            failure = (lhs, rhs, {"a": a, "b": b, "lambda": lam, "geodesic_point": c})
    pts = list(dict.fromkeys(pt for a, b, _ in triples for pt in (a, b)))
    fl = check_fl_property(space, PairSet(space, [Pair(pt, phi) for pt in pts]), FlSample(p, tuples=tuple(triples)))
    details = {"fl_passed": fl.passed, "triples": len(triples)}
    if failure:
        return CheckReport("pi-convexity", False, failure[0], failure[1], witness=failure[2], details=details)
    return CheckReport("pi-convexity", True, flags=("sampled",) if triples else ("vacuous",), details=details)


def flat_violation_to_fl(space: Space, x: Point, y: Point, a: Point, b: Point, lam) -> tuple[PairSet, FlSample]:
    """Turn a flat-identity violation into an F_l violation.

    Uses base p = x and dual +[ab] or -[ab] = [ba], whichever side of the
    broken identity is larger.
    """
    rep = check_flat_identity(space, x, y, a, b, lam)
    if rep.passed:
        raise ValidationError("flat identity holds on this tuple; nothing to convert")
    phi = bracket(a, b) if rep.lhs > rep.rhs else bracket(b, a)
    M = PairSet(space, [Pair(x, phi), Pair(y, phi)])
    return M, FlSample(x, tuples=((x, y, as_rational(lam)),))
