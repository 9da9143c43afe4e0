import itertools

import numpy as np
import pytest

from agpir.curve import HyperellipticCurve
from agpir.field import GF

F256_MODULUS = [1, 0, 1, 1, 1, 0, 0, 0, 1]  # a^8 + a^4 + a^3 + a^2 + 1


@pytest.fixture(scope="session")
def f13():
    return GF(13)


@pytest.fixture(scope="session")
def f11():
    return GF(11)


@pytest.fixture(scope="session")
def f256():
    return GF(2, 8, F256_MODULUS)


@pytest.fixture(scope="session")
def g2_curve(f13):
    return HyperellipticCurve(f13, [1, 2, 4, 0, 1, 1])


@pytest.fixture(scope="session")
def f11_curves(f11):
    return HyperellipticCurve(f11, [3, 1, 0, 1]), HyperellipticCurve(f11, [4, 2, 0, 1])


@pytest.fixture(scope="session")
def f256_curve(f256):
    a = 2
    return HyperellipticCurve(f256, [0, 0, 0, 1], [f256.add(f256.pow(a, 6), f256.pow(a, 4)), a])


def brute_rank(F, M):
    """Rank by brute force: largest r such that some r rows and r columns give a
    nonsingular minor, using exhaustive search over scalar combinations. Only for tiny inputs."""
    M = np.asarray(M, dtype=np.int64)
    k, n = M.shape
    rows = [tuple(r) for r in M]
    span = {tuple([0] * n)}
    r = 0
    for row in rows:
        new = set(span)
        for v in span:
            for c in range(1, F.q):
                new.add(tuple(F.add(a, F.mul(c, b)) for a, b in zip(v, row)))
        if len(new) > len(span):
            r += 1
        span = new
    return r


def subset_sigma_bruteforce(F, G, U):
    """Insecure U-subsets by direct span-size computation on each column subset."""
    n = G.shape[1]
    bad = 0
    for cols in itertools.combinations(range(n), U):
        if brute_rank(F, G[:, cols]) < U:
            bad += 1
    return bad
