import random
from fractions import Fraction

import pytest

from walkclass.model import WeightTable, pattern_class, PatternKind
from walkclass.kernel import GenusTag, genus

F = Fraction

# Canonical weight tables used throughout the suite. Keys are (i, j) steps.
CANON = {
    "simple": {(1, 0): F(1, 4), (-1, 0): F(1, 4), (0, 1): F(1, 4),
               (0, -1): F(1, 4)},
    "kreweras": {(-1, 0): F(1, 3), (0, -1): F(1, 3), (1, 1): F(1, 3)},
    "gessel": {(1, 0): F(1, 4), (1, 1): F(1, 4), (-1, 0): F(1, 4),
               (-1, -1): F(1, 4)},
    # the reverse-L shaped table used for the slow-t plots
    "fig2": {(0, 1): F(1, 4), (1, 1): F(1, 4), (-1, 0): F(1, 4),
             (0, -1): F(1, 4)},
    # the three transcendence showcases, one per criterion
    "fig5_left": {(-1, 1): F(1, 2), (1, 1): F(1, 6), (-1, 0): F(1, 6),
                  (0, -1): F(1, 6)},
    "fig5_mid": {(-1, 1): F(1, 6), (1, 0): F(1, 6), (-1, 0): F(1, 6),
                 (0, -1): F(1, 6), (0, 1): F(1, 3)},
    "fig5_right": {(-1, 1): F(1, 3), (1, 0): F(1, 6), (1, -1): F(1, 6),
                   (-1, 0): F(1, 6), (0, -1): F(1, 6)},
    # order-10 algebraic family
    "fig6_1": {(-1, 1): F(1, 9), (1, 1): F(1, 9), (1, 0): F(2, 9),
               (1, -1): F(1, 9), (-1, 0): F(1, 9), (0, -1): F(1, 9),
               (0, 1): F(2, 9)},
    "fig6_2": {(-1, 1): F(1, 9), (-1, -1): F(1, 9), (1, 0): F(1, 9),
               (1, -1): F(1, 9), (-1, 0): F(2, 9), (0, -1): F(2, 9),
               (0, 1): F(1, 9)},
    "fig6_3": {(-1, 1): F(1, 9), (1, 1): F(1, 9), (1, 0): F(1, 9),
               (-1, -1): F(1, 9), (-1, 0): F(2, 9), (0, -1): F(1, 9),
               (0, 1): F(2, 9)},
    "diagonal": {(1, 1): F(1, 2), (-1, -1): F(1, 2)},
    # support inside x + y >= 0: nondegenerate, double discriminant root
    "genus_zero": {(-1, 1): F(1, 5), (0, 1): F(1, 5), (1, 1): F(1, 5),
                   (1, 0): F(1, 5), (1, -1): F(1, 5)},
    # drifted table with closed-form critical point t0 = 4 - 2*sqrt(2)
    "biased": {(1, 0): F(1, 2), (0, 1): F(1, 4), (-1, 0): F(1, 8),
               (0, -1): F(1, 8)},
}

STEPS = [(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)]
COMPASS = [s for s in STEPS if s != (0, 0)]


def model(name):
    return WeightTable(CANON[name])


@pytest.fixture
def simple():
    return model("simple")


@pytest.fixture
def kreweras():
    return model("kreweras")


@pytest.fixture
def gessel():
    return model("gessel")


@pytest.fixture
def fig2():
    return model("fig2")


def random_table(rng, max_support=9, allow_stationary=True, max_num=6):
    """Random weight table: uniform support choice, small integer
    numerators, rescaled by the WeightTable constructor."""
    pool = STEPS if allow_stationary else COMPASS
    size = rng.randint(2, min(max_support, len(pool)))
    support = rng.sample(pool, size)
    weights = {s: Fraction(rng.randint(1, max_num)) for s in support}
    return WeightTable(weights)


def random_elliptic(rng, max_support=9, allow_stationary=True, max_num=6):
    """Rejection-sample until the kernel curve has genus one."""
    while True:
        w = random_table(rng, max_support, allow_stationary, max_num)
        if genus(w) is GenusTag.ELLIPTIC:
            return w


def seeded(seed):
    return random.Random(seed)
