"""The worked spoke-tree examples, rebuilt and checked with exact rationals."""

from __future__ import annotations

from fractions import Fraction

from .dual import bracket, coupling, evaluate
from .flatness import FlSample, check_fl_property, check_flat_identity
from .monotone import Pair, PairSet, is_maximal_in, is_monotone, mu_value, polar
from .quasilin import BoundVector
from .report import CheckReport
from .spaces import SpokeTree, geodesic_point, tree_point

TREE = SpokeTree()


def half_spoke_set(n_max: int = 5) -> PairSet:
    """{(x_n, [y_{n+1} y_n]) : n <= n_max} with x_n = [(n, 1/2)], y_n = [(n, 1/n)]."""
    x = lambda n: tree_point(n, Fraction(1, 2))
    y = lambda n: tree_point(n, Fraction(1, n))
    return PairSet(TREE, [Pair(x(n), bracket(y(n + 1), y(n))) for n in range(1, n_max + 1)])


def tip_set(n_max: int = 20) -> PairSet:
    """{(x_n, [x_{n+1} y_n]) : n <= n_max} with x_n = [(n, 1)], y_n the root."""
    x = lambda n: tree_point(n, 1)
    return PairSet(TREE, [Pair(x(n), bracket(x(n + 1), tree_point(n, 0))) for n in range(1, n_max + 1)])


def outside_pair() -> Pair:
    """(z, z*) with z the root and z* = [[(1,1/2)] [(1,1)]]."""
    return Pair(tree_point(1, 0), bracket(tree_point(1, Fraction(1, 2)), tree_point(1, 1)))


def _expect(name: str, got, want, relation: str = "==") -> CheckReport:
    return CheckReport(name, got == want, got, want, relation)


def reproduce(n_max: int = 20) -> list[CheckReport]:
    """Every worked value, each as an exact comparison against the published number."""
    out: list[CheckReport] = []
    x, y, a, b = tree_point(2, "1/2"), tree_point(1, "1/2"), tree_point(3, "1/3"), tree_point(2, "1/2")
    for lam in (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)):
        rep = check_flat_identity(TREE, x, y, a, b, lam)
        out.append(CheckReport(
            f"flat-identity lambda={lam}",
            rep.lhs == -5 * lam / 6 and rep.rhs == -lam / 2 and not rep.passed,
            rep.lhs, rep.rhs, "!=",
            details={"expected_lhs": -5 * lam / 6, "expected_rhs": -lam / 2},
        ))

    M = half_spoke_set(5)
    p = tree_point(1, 1)
    x1, x3 = tree_point(1, "1/2"), tree_point(3, "1/2")
    phi = bracket(tree_point(5, "1/5"), tree_point(4, "1/4"))
    lam = Fraction(1, 3)
    c = geodesic_point(TREE, x1, x3, lam)
    out.append(_expect("fl geodesic point", c, tree_point(1, "1/6")))
    lhs = evaluate(TREE, phi, BoundVector(p, c))
    rhs = (1 - lam) * coupling(TREE, p, x1, phi) + lam * coupling(TREE, p, x3, phi)
    out.append(CheckReport("fl witness", lhs == Fraction(1, 24) and rhs == Fraction(1, 40), lhs, rhs, ">",
                           details={"expected_lhs": Fraction(1, 24), "expected_rhs": Fraction(1, 40)}))
    fl = check_fl_property(TREE, M, FlSample(p, (lam,)))
    out.append(CheckReport("fl-property fails on the half-spoke set", not fl.passed, fl.lhs, fl.rhs, ">",
                           witness=fl.witness))

    T = tip_set(n_max)
    bad = None
    seen: set[Fraction] = set()
    for i, pi in enumerate(T):
        for j, pj in enumerate(T):
            n, m = i + 1, j + 1
            want = 2 if n in (m - 1, m + 1) else 0
            got = mu_value(TREE, pi, pj)
            seen.add(got)
            if got != want and bad is None:
                bad = {"n": n, "m": m, "value": got}
    out.append(CheckReport(f"tip-set mu values (n,m <= {n_max})", bad is None,
                           ",".join(str(v) for v in sorted(seen, reverse=True)), "2,0", "==", witness=bad))
    mono = is_monotone(TREE, T)
    out.append(CheckReport("tip-set monotone", mono.passed, witness=mono.witness))

    z = outside_pair()
    vals = [mu_value(TREE, z, t) for t in T]
    want = [Fraction(1, 2)] + [Fraction(3, 2)] * (len(T) - 1)
    out.append(CheckReport("outside pair mu values", vals == want, ",".join(map(str, vals[:2])), "1/2,3/2", "==",
                           details={"n=1": vals[0], "n!=1": vals[1] if len(vals) > 1 else None}))
    G = T.with_pair(z)
    out.append(CheckReport("outside pair in polar", z in polar(TREE, T, G)))
    out.append(CheckReport("tip-set not maximal", not is_maximal_in(TREE, T, G)))
    return out
