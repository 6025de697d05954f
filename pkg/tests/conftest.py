import random

import pytest

from emk.core import SetFamily


@pytest.fixture
def rng():
    return random.Random(20240611)


def brute_nu(F: SetFamily) -> int:
    """Largest pairwise disjoint subfamily, by plain recursion over members."""
    members = list(F)

    def go(i, used):
        if i == len(members):
            return 0
        best = go(i + 1, used)
        x = members[i]
        if x & used == 0:
            best = max(best, 1 + go(i + 1, used | x))
        return best

    # the empty set is disjoint from everything, including itself only once
    return go(0, 0)


def random_family(rng, n, density, allow_empty=True):
    masks = [x for x in range(0 if allow_empty else 1, 1 << n) if rng.random() < density]
    return SetFamily(n, masks)
