"""Convex objectives, the I_f functional, M^f membership and the proximal step.

Objectives are small expression trees that evaluate exactly at any point:

    SqDist(q, s)   z -> s d(z, q)^2          (s > 0)
    Coupling(p, f) z -> pi_p(z, f)
    Const(c)       z -> c
    Add(args, w)   z -> sum_i w_i args_i(z)   (w_i >= 0)

On Euclidean space every tree is a quadratic A|z|^2 + <B, z> + C with
A >= 0, which gives closed forms for I_f and for the proximal minimizer.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .dual import ZERO, DualElement, coupling, evaluate, reduce_euclidean
from .flatness import FlSample, check_fl_property
from .monotone import Pair, PairSet, is_monotone
from .quasilin import BoundVector
from .rational import ValidationError, as_rational
from .report import CheckReport
from .spaces import (
    ROOT,
    Euclidean,
    EuclidPoint,
    Point,
    Space,
    SpokeTree,
    dist_sq,
    tree_point,
    validate_point,
)

__all__ = [
    "SqDist",
    "Coupling",
    "Const",
    "Add",
    "Objective",
    "Membership",
    "ProxResult",
    "UnboundedError",
    "eval_objective",
    "I_f",
    "mf_membership",
    "mf_translate_check",
    "monotonicity_of_mf",
    "prox_step",
    "check_cn_half_sqdist",
]

POSITION_TOL = 1e-10
CERT_TOL = 1e-8
CERT_SAMPLES = 100
GOLDEN = (math.sqrt(5) - 1) / 2


class UnboundedError(ValueError):
    """The objective keeps decreasing past the search boundary."""


@dataclass(frozen=True)
class SqDist:
    anchor: Point
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "scale", as_rational(self.scale))
        if self.scale <= 0:
            raise ValidationError(f"sqdist scale must be positive, got {self.scale}")


@dataclass(frozen=True)
class Coupling:
    base: Point
    dual: DualElement


@dataclass(frozen=True)
class Const:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_rational(self.value))


@dataclass(frozen=True)
class Add:
    args: tuple
    weights: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if self.weights is not None:
            w = tuple(as_rational(x) for x in self.weights)
            if len(w) != len(self.args):
                raise ValidationError("add: weights and args differ in length")
            if any(x < 0 for x in w):
                raise ValidationError("add: weights must be nonnegative")
            object.__setattr__(self, "weights", w)

    def weighted(self):
        ws = self.weights or (Fraction(1),) * len(self.args)
        return zip(ws, self.args)


Objective = Union[SqDist, Coupling, Const, Add]


def eval_objective(space: Space, f: Objective, z: Point) -> Fraction:
    if isinstance(f, SqDist):
        return f.scale * dist_sq(space, z, f.anchor)
    if isinstance(f, Coupling):
        return coupling(space, f.base, z, f.dual)
    if isinstance(f, Const):
        validate_point(space, z)
        return f.value
    if isinstance(f, Add):
        validate_point(space, z)
        return sum((w * eval_objective(space, g, z) for w, g in f.weighted()), Fraction(0))
    raise ValidationError(f"unknown objective node {f!r}")


def _has_coupling(f: Objective) -> bool:
    if isinstance(f, Coupling):
        return True
    if isinstance(f, Add):
        return any(_has_coupling(g) for g in f.args)
    return False


def _objective_points(f: Objective) -> list[Point]:
    if isinstance(f, SqDist):
        return [f.anchor]
    if isinstance(f, Coupling):
        return [f.base, *f.dual.points()]
    if isinstance(f, Add):
        return [p for g in f.args for p in _objective_points(g)]
    return []


def _quadratic(space: Euclidean, f: Objective):
    """Coefficients (A, B, C) with f(z) = A|z|^2 + <B, z> + C."""
    n = space.dim
    if isinstance(f, SqDist):
        q = f.anchor.coords
        return f.scale, tuple(-2 * f.scale * c for c in q), f.scale * _dot(q, q)
    if isinstance(f, Coupling):
        r = reduce_euclidean(space, f.dual)
        return Fraction(0), r, -_dot(r, f.base.coords)
    if isinstance(f, Const):
        return Fraction(0), (Fraction(0),) * n, f.value
    if isinstance(f, Add):
        A, B, C = Fraction(0), [Fraction(0)] * n, Fraction(0)
        for w, g in f.weighted():
            a, b, c = _quadratic(space, g)
            A += w * a
            B = [bi + w * x for bi, x in zip(B, b)]
            C += w * c
        return A, tuple(B), C
    raise ValidationError(f"unknown objective node {f!r}")


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


# --- I_f and M^f membership -------------------------------------------------


def I_f(space: Space, f: Objective, x: Point, xd: DualElement, yd: DualElement, grid: Sequence[Point]):
    """Grid minimum of y -> f(y) + <xd + yd, yx>; an upper bound on the true infimum.

    Returns ``(value, argmin)``; ties go to the earliest grid point.
    """
    if not grid:
        raise ValidationError("I_f needs a nonempty grid")
    phi = xd + yd
    best = None
    for y in grid:
        v = eval_objective(space, f, y) + evaluate(space, phi, BoundVector(y, x))
        if best is None or v < best[0]:
            best = (v, y)
    return best


class Membership(enum.Enum):
    CERTIFIED_OUT = "CertifiedOut"
    CONSISTENT = "Consistent"
    EXACT_IN = "ExactIn"

    def __str__(self) -> str:
        return self.value


def _exact_inf(space: Euclidean, f: Objective, x: EuclidPoint, phi: DualElement):
    """Exact inf_y f(y) + <phi, yx> on Euclidean space; None for -infinity."""
    A, B, C = _quadratic(space, f)
    r = reduce_euclidean(space, phi)
    lin = tuple(b - ri for b, ri in zip(B, r))
    const = C + _dot(r, x.coords)
    if A > 0:
        return const - _dot(lin, lin) / (4 * A)
    if any(lin):
        return None
    return const


def mf_membership(space: Space, f: Objective, pair: Pair, yd: DualElement, grid: Sequence[Point]) -> Membership:
    """Three-valued test of I_f(x, x*, y*) >= f(x).

    The grid value over-estimates the infimum, so a grid value below f(x)
    certifies exclusion. On Euclidean space the infimum is exact.
    """
    x = pair.point
    fx = eval_objective(space, f, x)
    val, _ = I_f(space, f, x, pair.dual, yd, grid)
    if val < fx:
        return Membership.CERTIFIED_OUT
    if isinstance(space, Euclidean):
        inf = _exact_inf(space, f, x, pair.dual + yd)
        if inf is None or inf < fx:
            return Membership.CERTIFIED_OUT
        return Membership.EXACT_IN
    return Membership.CONSISTENT


def mf_translate_check(space: Space, f: Objective, pair: Pair, yd: DualElement, p: Point, grid: Sequence[Point]) -> CheckReport:
    """Translation identity for M^f on a grid, exactly.

    With g = f - pi_p(., y*): I_g(x, x* - y*, y*) - g(x) == I_f(x, x*, y*) - f(x),
    and membership of (x, x* - y*) in M^f_{y*} matches (x, x*) in M^f_0, as does
    (x, x*) in M^f_{y*} against (x, x*) in M^g_0.
    """
    x, xd = pair.point, pair.dual
    g = Add((f, Coupling(p, -yd)))
    lhs = I_f(space, g, x, xd - yd, yd, grid)[0] - eval_objective(space, g, x)
    rhs = I_f(space, f, x, xd, yd, grid)[0] - eval_objective(space, f, x)
    v1 = mf_membership(space, f, Pair(x, xd - yd), yd, grid)
    v2 = mf_membership(space, f, pair, ZERO, grid)
    v3 = mf_membership(space, f, pair, yd, grid)
    v4 = mf_membership(space, g, pair, ZERO, grid)
    ok = lhs == rhs and v1 == v2 and v3 == v4
    return CheckReport(
        "mf-translation", ok, lhs, rhs, "==",
        witness=None if ok else {"pair": pair, "ydual": yd},
        details={"shifted_in_Mf_y": str(v1), "in_Mf_0": str(v2), "in_Mf_y": str(v3), "in_Mg_0": str(v4)},
    )


def monotonicity_of_mf(space: Space, f: Objective, candidates: Sequence[Pair], yd: DualElement, grid: Sequence[Point]) -> CheckReport:
    survivors = [c for c in candidates if mf_membership(space, f, c, yd, grid) is Membership.EXACT_IN]
    rep = is_monotone(space, PairSet(space, survivors))
    return CheckReport("mf-monotone", rep.passed, rep.lhs, rep.rhs, ">=", witness=rep.witness,
                       flags=rep.flags, details={"survivors": len(survivors), "candidates": len(candidates)})


# --- proximal step ------------------------------------------------------------


@dataclass(frozen=True)
class ProxResult:
    minimizer: Point
    value: float
    certificate: CheckReport
    method: str
    flags: tuple[str, ...] = ()
    exact_value: Fraction | None = field(default=None, compare=False)


def _prox_objective(f: Objective, y: Point, yd: DualElement, p: Point) -> Add:
    return Add((f, Coupling(p, yd), SqDist(y, Fraction(1, 2))))


def _to_rational(v: float) -> Fraction:
    return Fraction(v).limit_denominator(10**12)


def _golden(phi, lo: float, hi: float, tol: float = POSITION_TOL, max_iter: int = 200) -> float:
    """Golden-section minimisation of a unimodal ``phi`` on [lo, hi]."""
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = phi(c), phi(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = phi(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = phi(d)
    cands = [(phi(a), a), (fc, c), (fd, d), (phi(b), b)]
    return min(cands, key=lambda t: t[0])[1]


def _bracket(phi, s0: float, step: float = 1.0, max_span: float = 2.0**40):
    """Expand around ``s0`` until a convex ``phi`` rises on both sides."""
    f0 = phi(s0)
    if phi(s0 + step) >= f0 and phi(s0 - step) >= f0:
        return s0 - step, s0 + step
    direction = 1.0 if phi(s0 + step) < f0 else -1.0
    prev, cur, fcur = s0, s0 + direction * step, phi(s0 + direction * step)
    while True:
        step *= 2
        nxt = cur + direction * step
        fn = phi(nxt)
        if fn >= fcur:
            return (min(prev, nxt), max(prev, nxt))
        if step > max_span:
            raise UnboundedError("objective still decreasing at the search boundary")
        prev, cur, fcur = cur, nxt, fn


def _prox_euclid_grid(space: Euclidean, h: Objective, start: EuclidPoint, sweeps: int = 50) -> EuclidPoint:
    z = [float(c) for c in start.coords]
    for _ in range(sweeps):
        moved = 0.0
        for i in range(space.dim):
            fixed = [_to_rational(c) for c in z]

            def line(s, i=i, fixed=fixed):
                coords = list(fixed)
                coords[i] = Fraction(s)
                return eval_objective(space, h, EuclidPoint(tuple(coords)))

            lo, hi = _bracket(line, z[i])
            grid = [lo + (hi - lo) * k / 16 for k in range(17)]
            vals = [line(s) for s in grid]
            k = min(range(17), key=vals.__getitem__)
            s = _golden(line, grid[max(k - 1, 0)], grid[min(k + 1, 16)])
            moved = max(moved, abs(s - z[i]))
            z[i] = s
        # golden section resolves positions to POSITION_TOL, so smaller moves are noise
        if moved <= POSITION_TOL:
            break
    return EuclidPoint(tuple(_to_rational(c) for c in z))


def _candidate_spokes(points: Sequence[Point]) -> list[int]:
    used = sorted({p.spoke for p in points if not p.is_root})
    fresh = (max(used) + 1) if used else 1
    return used + [fresh]


def _prox_tree_grid(space: SpokeTree, h: Objective, points: Sequence[Point], n_grid: int = 64) -> Point:
    best_val, best = None, ROOT
    for n in _candidate_spokes(points):
        breaks = {p.radius for p in points if p.spoke == n and not p.is_root}
        radii = sorted({Fraction(k, n_grid) for k in range(n_grid + 1)} | breaks)

        def along(r, n=n):
            return eval_objective(space, h, tree_point(n, _clip(Fraction(r))))

        vals = [along(r) for r in radii]
        k = min(range(len(radii)), key=vals.__getitem__)
        lo, hi = float(radii[max(k - 1, 0)]), float(radii[min(k + 1, len(radii) - 1)])
        r = _golden(along, lo, hi)
        cand = tree_point(n, _clip(_to_rational(r)))
        v = eval_objective(space, h, cand)
        if vals[k] < v:
            cand, v = tree_point(n, radii[k]), vals[k]
        if best_val is None or v < best_val:
            best_val, best = v, cand
    return best


def _clip(r: Fraction) -> Fraction:
    return min(max(r, Fraction(0)), Fraction(1))


def _cert_samples(space: Space, center: Point, points: Sequence[Point], seed: int, n: int) -> list[Point]:
    rng = random.Random(seed)
    out = [center]
    if isinstance(space, Euclidean):
        while len(out) < n:
            scale = rng.choice((Fraction(1, 100), Fraction(1, 10), Fraction(1), Fraction(4)))
            off = [Fraction(rng.randint(-64, 64), 64) * scale for _ in range(space.dim)]
            out.append(EuclidPoint(tuple(c + o for c, o in zip(center.coords, off))))
    else:
        spokes = _candidate_spokes([*points, center])
        while len(out) < n:
            out.append(tree_point(rng.choice(spokes), Fraction(rng.randint(0, 64), 64)))
    return out


def _strong_convexity_certificate(space: Space, h: Objective, xstar: Point, samples: Sequence[Point]) -> CheckReport:
    hx = eval_objective(space, h, xstar)
    worst, wpt = None, None
    for z in samples:
        margin = eval_objective(space, h, z) - hx - dist_sq(space, xstar, z) / 2
        if worst is None or margin < worst:
            worst, wpt = margin, z
    worst_f = float(worst)
    ok = worst_f >= -CERT_TOL
    return CheckReport(
        "strong-convexity-certificate", ok, worst_f, -CERT_TOL, ">=",
        witness=None if ok else {"z": wpt},
        details={"samples": len(samples)},
    )


def prox_step(space: Space, f: Objective, y: Point, yd: DualElement, p: Point,
              method: str = "auto", seed: int = 0) -> ProxResult:
    """Minimise h(z) = f(z) + pi_p(z, y*) + d(z, y)^2 / 2.

    ``method`` is "auto", "closed-form" (Euclidean only) or "grid+refine".
    The certificate checks h(z) >= h(x*) + d(x*, z)^2 / 2 - 1e-8 on 100
    deterministic samples.
    """
    for pt in (y, p):
        validate_point(space, pt)
    h = _prox_objective(f, y, yd, p)
    flags: list[str] = []
    if method not in ("auto", "closed-form", "grid+refine"):
        raise ValidationError(f"unknown prox method {method!r}")
    if isinstance(space, Euclidean):
        if method in ("auto", "closed-form"):
            A, B, _ = _quadratic(space, h)
            xstar = EuclidPoint(tuple(-b / (2 * A) for b in B))
            used = "closed-form"
        else:
            xstar = _prox_euclid_grid(space, h, y)
            used = "grid+refine"
    else:
        if method == "closed-form":
            raise ValidationError("closed-form prox is only available on Euclidean space")
        pts = [y, p, *yd.points(), *_objective_points(f)]
        xstar = _prox_tree_grid(space, h, pts)
        used = "grid+refine"
        if not _fl_sampled(space, yd, pts):
            flags.append("heuristic")
        if _has_coupling(f):
            flags.append("objective-coupling-convexity-unverified")
    pts = [y, p, *yd.points(), *_objective_points(f)]
    cert = _strong_convexity_certificate(space, h, xstar, _cert_samples(space, xstar, pts, seed, CERT_SAMPLES))
    hv = eval_objective(space, h, xstar)
    return ProxResult(xstar, float(hv), cert, used, tuple(flags), exact_value=hv)


def _fl_sampled(space: SpokeTree, yd: DualElement, points: Sequence[Point]) -> bool:
    dom = [ROOT] + [tree_point(n, r) for n in _candidate_spokes(points) for r in (Fraction(1, 2), Fraction(1))]
    dom += [pt for pt in points if pt not in dom]
    M = PairSet(space, [Pair(x, yd) for x in dom])
    return check_fl_property(space, M, FlSample(ROOT)).passed


def check_cn_half_sqdist(space: Space, y: Point, a: Point, b: Point, lam) -> CheckReport:
    """Strong convexity of z -> d(z, y)^2 / 2 along the geodesic from a to b, exactly."""
    from .spaces import geodesic_point

    lam = as_rational(lam)
    c = geodesic_point(space, a, b, lam)
    lhs = dist_sq(space, c, y) / 2
    rhs = (1 - lam) * dist_sq(space, a, y) / 2 + lam * dist_sq(space, b, y) / 2 - lam * (1 - lam) * dist_sq(space, a, b) / 2
    return CheckReport("half-sqdist-strong-convexity", lhs <= rhs, lhs, rhs)
