import math

import pytest

from corevol import (
    Circle,
    Pairing,
    SchottkyData,
    cyclic_group,
    pairing_from_circles,
    surface_invariants,
    validate,
)


def make_cyclic(s: float):
    """Genus-1 group whose generator is [[cosh s, sinh s], [sinh s, cosh s]];
    both quotient ends have length 2s."""
    return validate(cyclic_group(-1.0, 1.0, 2.0 * s))


def make_row_group(centers, radius, pairs):
    """Disjoint circles in a row on the real line, paired as requested."""
    circles = tuple(Circle(float(c), radius) for c in centers)
    pairings = tuple(
        Pairing(i, j, pairing_from_circles(circles[i], circles[j])) for i, j in pairs
    )
    return validate(SchottkyData(circles, pairings))


@pytest.fixture(scope="session")
def cyclic_s1():
    return make_cyclic(1.0)


@pytest.fixture(scope="session")
def g2_adjacent():
    return make_row_group((-3.0, -1.0, 1.0, 3.0), 0.4, [(0, 1), (2, 3)])


@pytest.fixture(scope="session")
def g2_crossed():
    return make_row_group((-3.0, -1.0, 1.0, 3.0), 0.4, [(0, 2), (1, 3)])


@pytest.fixture(scope="session")
def g3_row():
    return make_row_group((-5.0, -3.0, -1.0, 1.0, 3.0, 5.0), 0.4,
                          [(0, 1), (2, 3), (4, 5)])


@pytest.fixture(scope="session")
def surface_s1(cyclic_s1):
    return surface_invariants(cyclic_s1)


@pytest.fixture(scope="session")
def surface_adjacent(g2_adjacent):
    return surface_invariants(g2_adjacent)


@pytest.fixture(scope="session")
def surface_crossed(g2_crossed):
    return surface_invariants(g2_crossed)


def assert_close(actual, expected, tol=1e-12, rel=0.0):
    bound = max(tol, rel * abs(expected))
    assert abs(actual - expected) <= bound, f"{actual} != {expected} (tol {bound})"


EXP = math.exp(1.0)
