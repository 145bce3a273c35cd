from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hadamono.dual import (
    ZERO,
    bracket,
    coupling,
    equiv_on_witnesses,
    evaluate,
    norm_lower_bound,
    norm_single,
    reduce_euclidean,
)
from hadamono.quasilin import BoundVector
from hadamono.rational import ValidationError
from hadamono.spaces import Euclidean, dist, euclid_point, tree_point

from conftest import E2, TREE, points_of, small_rationals, spaces_st

F = Fraction
BV = BoundVector
y5, y4 = tree_point(5, "1/5"), tree_point(4, "1/4")
p = tree_point(1, 1)


def test_worked_evaluation_and_coupling():
    phi = bracket(y5, y4)
    assert evaluate(TREE, phi, BV(p, tree_point(1, "1/6"))) == F(1, 24)
    assert coupling(TREE, p, tree_point(1, "1/2"), phi) == F(1, 40)
    assert coupling(TREE, p, tree_point(3, "1/2"), phi) == F(1, 40)


def test_zero_element_vanishes():
    a, b = tree_point(2, 1), tree_point(3, "1/2")
    assert evaluate(TREE, ZERO, BV(a, b)) == 0
    assert evaluate(TREE, bracket(a, b), BV(a, a)) == 0
    assert coupling(TREE, a, a, bracket(y5, y4)) == 0


def test_norm_single():
    a, b = tree_point(2, "1/2"), tree_point(3, "1/3")
    assert norm_single(TREE, 1, 3, a, b) == pytest.approx(2.5, abs=1e-15)
    assert norm_single(TREE, 1, 0, a, b) == 0
    assert norm_single(TREE, -2, 1, tree_point(1, 1), tree_point(1, 0)) == 2


def test_norm_lower_bound_matches_quadruple_oracle():
    a, b = tree_point(2, "1/2"), tree_point(3, "1/3")
    phi = bracket(a, b)
    # quadruple (a, b, b, a): |d^2 - (-d^2)| / 2d = d
    oracle = abs(float(evaluate(TREE, phi, BV(a, b)) - evaluate(TREE, phi, BV(b, a)))) / (2 * dist(TREE, a, b))
    lb = norm_lower_bound(TREE, phi, [a, b])
    assert lb >= oracle - 1e-15
    assert lb <= norm_single(TREE, 1, 1, a, b) + 1e-15
    assert lb == pytest.approx(5 / 6, abs=1e-12)
    assert norm_lower_bound(TREE, ZERO, [a, b]) == 0
    assert norm_lower_bound(TREE, phi.scaled(2), [a, b]) == pytest.approx(2 * lb, abs=1e-15)


def test_norm_lower_bound_needs_two_points():
    a = tree_point(1, 1)
    with pytest.raises(ValidationError):
        norm_lower_bound(TREE, bracket(a, a), [a, a])


def test_equivalence_examples():
    a, b = tree_point(1, "1/2"), tree_point(3, 1)
    W = [a, b, tree_point(2, "1/3"), tree_point(1, 1)]
    assert equiv_on_witnesses(TREE, bracket(a, a), bracket(b, b), W)
    assert equiv_on_witnesses(TREE, bracket(y5, y4), bracket(y5, y4), W)
    assert not equiv_on_witnesses(TREE, bracket(a, b), bracket(b, a), W)
    o, e1, e2 = euclid_point(0, 0), euclid_point(1, 0), euclid_point(0, 1)
    e12 = euclid_point(1, 1)
    assert equiv_on_witnesses(E2, bracket(o, e1), bracket(e2, e12), [o, e1, e2, euclid_point(-3, 5)])


def test_reduce_euclidean():
    o, e1, e12 = euclid_point(0, 0), euclid_point(1, 0), euclid_point(1, 1)
    phi = bracket(o, e1) + bracket(e1, e12)
    # oracle: evaluate on the basis bound vectors 0->e1, 0->e2
    basis = [evaluate(E2, phi, BV(o, e)) for e in (euclid_point(1, 0), euclid_point(0, 1))]
    assert reduce_euclidean(E2, phi) == tuple(basis) == (1, 1)
    assert reduce_euclidean(E2, ZERO) == (0, 0)
    assert reduce_euclidean(E2, bracket(o, e1, alpha=2) - bracket(o, euclid_point(2, 0))) == (0, 0)
    with pytest.raises(ValidationError):
        reduce_euclidean(TREE, ZERO)


def _duals(space):
    pts = points_of(space)
    term = st.tuples(small_rationals, small_rationals, pts, pts).map(lambda t: bracket(t[2], t[3], t[0], t[1]))
    return st.lists(term, max_size=3).map(lambda ts: sum(ts, ZERO))


@given(spaces_st.flatmap(lambda s: st.tuples(st.just(s), _duals(s), _duals(s), *[points_of(s)] * 3, small_rationals, small_rationals)))
def test_dual_laws(args):
    space, phi, psi, x, y, z, al, be = args
    assert evaluate(space, phi, BV(x, z)) == evaluate(space, phi, BV(x, y)) + evaluate(space, phi, BV(y, z))
    # base change of the coupling
    assert coupling(space, y, x, phi) == evaluate(space, phi, BV(y, z)) + coupling(space, z, x, phi)
    lin = coupling(space, z, x, phi.scaled(al) + psi.scaled(be))
    assert lin == al * coupling(space, z, x, phi) + be * coupling(space, z, x, psi)


@given(spaces_st.flatmap(lambda s: st.tuples(st.just(s), _duals(s), st.lists(points_of(s), min_size=2, max_size=4), points_of(s))))
def test_norm_lower_bound_monotone_in_witnesses(args):
    space, phi, W, extra = args
    if len(set(W)) < 2:
        return
    assert norm_lower_bound(space, phi, W + [extra]) >= norm_lower_bound(space, phi, W) - 1e-15


@given(st.sampled_from([Euclidean(1), E2, Euclidean(3)]).flatmap(lambda s: st.tuples(st.just(s), _duals(s), _duals(s))))
def test_euclid_equivalence_agrees_with_reduction(args):
    space, phi, psi = args
    n = space.dim
    basis = [euclid_point([F(int(i == j)) for j in range(n)]) for i in range(n)]
    W = [euclid_point([F(0)] * n)] + basis
    assert equiv_on_witnesses(space, phi, psi, W) == (reduce_euclidean(space, phi) == reduce_euclidean(space, psi))
