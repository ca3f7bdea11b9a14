import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nildegen.linalg import det  # noqa: E402
from nildegen.scalars import GaussianRational  # noqa: E402


def random_invertible(n: int, rng: random.Random, lo: int = -3, hi: int = 3, gaussian: bool = False):
    while True:
        P = [
            [GaussianRational(rng.randint(lo, hi), rng.randint(lo, hi) if gaussian else 0) for _ in range(n)]
            for _ in range(n)
        ]
        if det(P):
            return P


@pytest.fixture
def rng():
    return random.Random(20240611)
