import random
from fractions import Fraction
from itertools import combinations

import pytest

from hadamono.dual import ZERO, bracket
from hadamono.monotone import (
    ContractError,
    Pair,
    PairSet,
    SizeLimitError,
    antagonist,
    check_slice_convex,
    enumerate_maximal_extensions,
    extend_maximal,
    is_maximal_in,
    is_monotone,
    mu_closure,
    mu_related,
    mu_related_to_set,
    mu_value,
    polar,
    polarity_law_reports,
    slice_duals,
)
from hadamono.rational import ValidationError
from hadamono.repro import outside_pair, tip_set
from hadamono.sampling import random_ground
from hadamono.spaces import Euclidean, dist_sq, euclid_point, tree_point

from conftest import TREE

F = Fraction
E1 = Euclidean(1)
O = euclid_point(0)


def grad_pair(x, c):
    """(x, [c * (0 -> 1)]) on the line; mu-value is (c - c')(x - x')."""
    return Pair(euclid_point(x), bracket(O, euclid_point(1), alpha=c))


def test_tip_set_mu_values():
    T = tip_set(20)
    for i, a in enumerate(T):
        for j, b in enumerate(T):
            n, m = i + 1, j + 1
            assert mu_value(TREE, a, b) == (2 if n in (m - 1, m + 1) else 0)
    assert is_monotone(TREE, T).passed


def test_mu_reflexive_and_symmetric():
    T = tip_set(4)
    for a in T:
        assert mu_value(TREE, a, a) == 0 and mu_related(TREE, a, a)
        for b in T:
            assert mu_value(TREE, a, b) == mu_value(TREE, b, a)


def test_outside_pair_values():
    z = outside_pair()
    T = tip_set(20)
    vals = [mu_value(TREE, z, t) for t in T]
    assert vals[0] == F(1, 2) and set(vals[1:]) == {F(3, 2)}
    assert mu_related_to_set(TREE, z, T)
    G = T.with_pair(z)
    assert z in polar(TREE, T, G)
    assert not is_maximal_in(TREE, T, G)
    assert extend_maximal(TREE, T, G) == G


def test_antimonotone_pair():
    a, b = tree_point(1, 1), tree_point(2, "1/2")
    M = PairSet(TREE, [Pair(a, bracket(a, b)), Pair(b, bracket(b, b))])
    rep = is_monotone(TREE, M)
    assert not rep.passed and rep.lhs == -dist_sq(TREE, a, b)
    assert not mu_related_to_set(TREE, Pair(a, bracket(a, b)), PairSet(TREE, [Pair(b, ZERO)]))
    assert len(polar(TREE, M, M)) == 0


def test_vacuous_cases():
    empty = PairSet(TREE)
    single = PairSet(TREE, [Pair(tree_point(1, 1), ZERO)])
    assert is_monotone(TREE, empty).passed and is_monotone(TREE, single).passed
    assert mu_related_to_set(TREE, single[0], empty)
    assert polar(TREE, empty, single) == single
    assert is_maximal_in(TREE, single, single)
    assert extend_maximal(TREE, empty, single) == single
    assert mu_closure(TREE, empty, single) == polar(TREE, single, single)


def test_polar_requires_ground_superset():
    M = PairSet(TREE, [Pair(tree_point(1, 1), ZERO)])
    with pytest.raises(ValidationError):
        polar(TREE, M, PairSet(TREE))
    with pytest.raises(ValidationError):
        polar(TREE, M, PairSet(E1, [grad_pair(0, 0)]))


def test_contract_errors():
    a, b = tree_point(1, 1), tree_point(2, "1/2")
    bad = PairSet(TREE, [Pair(a, bracket(a, b)), Pair(b, bracket(b, b))])
    with pytest.raises(ContractError):
        is_maximal_in(TREE, bad, bad)
    with pytest.raises(ContractError):
        extend_maximal(TREE, bad, bad)
    big = random_ground(TREE, random.Random(1), 15, n_points=8)
    with pytest.raises(SizeLimitError):
        enumerate_maximal_extensions(TREE, PairSet(TREE), big)


def _brute_maximal(G: PairSet, M: PairSet):
    """All maximal monotone M <= S <= G by subset enumeration (independent of Bron-Kerbosch)."""
    idx = range(len(G))
    mono = []
    for k in range(len(G) + 1):
        for sub in combinations(idx, k):
            S = G.subset(sub)
            if M <= S and all(mu_value(G.space, a, b) >= 0 for a, b in combinations(S, 2)):
                mono.append(S)
    return [S for S in mono if not any(S != T and S <= T for T in mono)]


# line pairs: P0=(0,0), P1=(1,-1), P2=(2,2), P3=(-1,5); maximal sets {P0,P2}, {P1,P2}, {P3}
LINE_G = PairSet(E1, [grad_pair(0, 0), grad_pair(1, -1), grad_pair(2, 2), grad_pair(-1, 5)])


def test_order_dependent_extensions_by_exhaustion():
    brute = _brute_maximal(LINE_G, PairSet(E1))
    assert sorted(len(s) for s in brute) == [1, 2, 2]
    a = extend_maximal(E1, PairSet(E1), LINE_G, [0, 1, 2, 3])
    b = extend_maximal(E1, PairSet(E1), LINE_G, [1, 0, 2, 3])
    assert a != b
    assert a == LINE_G.subset([0, 2]) and b == LINE_G.subset([1, 2])
    assert is_maximal_in(E1, a, LINE_G) and is_maximal_in(E1, b, LINE_G)
    enum = enumerate_maximal_extensions(E1, PairSet(E1), LINE_G)
    assert set(enum) == set(brute)


def test_extension_identities_on_line_example():
    M = LINE_G.subset([2])
    exts = enumerate_maximal_extensions(E1, M, LINE_G)
    assert set(exts) == {LINE_G.subset([0, 2]), LINE_G.subset([1, 2])}
    assert PairSet(E1).union(*exts) == polar(E1, M, LINE_G)
    assert exts[0].intersection(exts[1]) == mu_closure(E1, M, LINE_G) == M


def test_monotone_ground_has_single_extension():
    G = PairSet(E1, [grad_pair(x, x) for x in range(-2, 3)])
    assert enumerate_maximal_extensions(E1, PairSet(E1), G) == [G]


@pytest.mark.parametrize("seed", range(12))
def test_enumeration_matches_brute_force(seed):
    rng = random.Random(seed)
    space = TREE if seed % 2 else Euclidean(2)
    G = random_ground(space, rng, rng.randint(1, 8))
    full = extend_maximal(space, PairSet(space), G)
    M = PairSet(space, full.pairs[: rng.randint(0, len(full))])
    assert set(enumerate_maximal_extensions(space, M, G)) == set(_brute_maximal(G, M))


def test_slice_duals_and_convexity():
    u = euclid_point(1)
    M = PairSet(E1, [grad_pair(1, 1), grad_pair(1, 2), grad_pair(0, 0), grad_pair(3, 3)])
    assert len(slice_duals(E1, M, u)) == 2
    rep = check_slice_convex(E1, M, u, [0, F(1, 2), 1])
    assert rep.passed and rep.details["combinations"] == 3
    single = PairSet(E1, [grad_pair(1, 1)])
    assert check_slice_convex(E1, single, u, [F(1, 2)]).vacuous


def test_slice_convex_tree_hand_example():
    # two duals at the root, both related to a tip pair
    r = tree_point(1, 0)
    t = Pair(tree_point(1, 1), ZERO)
    d1, d2 = bracket(tree_point(1, 1), r), bracket(tree_point(1, "1/2"), r)
    M = PairSet(TREE, [Pair(r, d1), Pair(r, d2), t])
    assert is_monotone(TREE, M).passed
    assert check_slice_convex(TREE, M, r, [F(1, 2)]).passed


def test_antagonist_is_unrelated():
    g = Pair(tree_point(1, 1), bracket(tree_point(2, "1/2"), tree_point(1, 1)))
    a = antagonist(TREE, g, tree_point(3, "1/3"))
    assert mu_value(TREE, g, a) == -dist_sq(TREE, g.point, a.point)


@pytest.mark.parametrize("seed", range(6))
def test_polarity_laws_random(seed):
    rng = random.Random(100 + seed)
    space = TREE if seed % 2 == 0 else Euclidean(2)
    G = random_ground(space, rng, rng.randint(1, 10))
    reps = polarity_law_reports(space, G, rng)
    failed = [r.name for r in reps if not r.passed]
    assert not failed
