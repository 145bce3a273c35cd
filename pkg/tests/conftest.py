import pytest
from hypothesis import strategies as st
from fractions import Fraction

from hadamono.spaces import Euclidean, SpokeTree, euclid_point, tree_point

TREE = SpokeTree()
E2 = Euclidean(2)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


small_rationals = st.builds(Fraction, st.integers(-12, 12), st.integers(1, 6))
unit_rationals = st.integers(1, 8).flatmap(lambda d: st.builds(Fraction, st.integers(0, d), st.just(d)))

tree_points = st.builds(tree_point, st.integers(1, 4), unit_rationals)


def euclid_points(dim):
    return st.lists(small_rationals, min_size=dim, max_size=dim).map(euclid_point)


def points_of(space):
    return tree_points if isinstance(space, SpokeTree) else euclid_points(space.dim)


spaces_st = st.sampled_from([TREE, Euclidean(1), E2, Euclidean(3)])
