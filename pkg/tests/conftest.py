import random

import pytest

from intervalgames.liminf import integerize


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def pm_has_finite_endpoint(iu) -> bool:
    """Usable by the total-sum reduction: empty objectives short-circuit,
    otherwise some region boundary must be finite."""
    pm = integerize(iu)
    if pm.is_empty:
        return True
    return any(isinstance(x, int) for lo_hi in pm.intervals for x in lo_hi)


@pytest.fixture
def rng():
    return make_rng(0xC0FFEE)
