import numpy as np
import pytest

from agpir.curve import ResourceGuardError
from agpir.funcspace import FunctionElement
from agpir.lincode import dual_distance, min_distance
from agpir.lsss import (
    Lsss,
    chen_cramer,
    combine,
    reconstruct,
    reconstruct_vector,
    shamir,
    share,
    verify_security,
)
from agpir.poly import Poly


@pytest.fixture(scope="module")
def g2_scheme(g2_curve):
    pts = [P for P in g2_curve.affine_points if P.y]
    return chen_cramer(g2_curve, 4, FunctionElement.y(g2_curve), pts)


def test_shamir_example(f13):
    s = shamir(f13, 5, 2, [1, 2, 3, 4, 5])
    assert dual_distance(s.noise_code) == 3
    assert verify_security(s, 2).passed
    assert not verify_security(s, 3).passed


def test_shamir_validation(f13):
    with pytest.raises(ValueError):
        shamir(f13, 3, 1, [1, 1, 2])
    with pytest.raises(ValueError):
        shamir(f13, 3, 1, [0, 1, 2])
    with pytest.raises(ValueError):
        shamir(f13, 4, 1, [1, 2, 3])


def test_t0_shares_equal_secret(f13):
    s = shamir(f13, 4, 0, [1, 2, 3, 4])
    assert s.noise_gen.shape[0] == 0
    assert s.share(9).tolist() == [9] * 4


def test_round_trip(f13):
    s = shamir(f13, 7, 3, range(1, 8))
    rng = np.random.default_rng(0)
    for _ in range(100):
        secret = int(rng.integers(0, 13))
        assert reconstruct(s, share(s, secret, rng)) == secret


def test_zero_noise(f13):
    s = shamir(f13, 5, 2, range(1, 6))
    assert s.share(7, noise_coefficients=[0, 0]).tolist() == [7] * 5


def test_fresh_randomness(f13):
    s = shamir(f13, 5, 2, range(1, 6))
    base = s.share(4, seed=0)
    assert any(not np.array_equal(base, s.share(4, seed=k)) for k in range(1, 101))


def test_reconstruct_edge_cases(f13):
    s = shamir(f13, 5, 2, range(1, 6))
    assert reconstruct(s, [0] * 5) == 0
    v = f13.vadd(s.share(6, seed=1), s.noise_gen[1])
    assert reconstruct(s, v) == 6
    with pytest.raises(ValueError):
        reconstruct(s, [1, 0, 0, 0, 0])
    with pytest.raises(ValueError):
        reconstruct(s, [1, 2, 3])


def test_linear_combination(f13):
    s = shamir(f13, 5, 2, range(1, 6))
    a, b = s.share(3, seed=1), s.share(11, seed=2)
    assert reconstruct(s, combine(f13, [a, b], [1, 1])) == 1
    assert reconstruct(s, combine(f13, [a, b], [1, 0])) == 3


def test_two_secret_variant(f13):
    # secrets ride on 1 and x, noise on x^2 * F[x]^{<T}
    T = 2
    secret = [FunctionElement(Poly.monomial(f13, i)) for i in range(2)]
    noise = [FunctionElement(Poly.monomial(f13, i + 2)) for i in range(T)]
    s = Lsss(f13, secret, noise, range(1, 7))
    v = share(s, [5, 9], seed=3)
    assert reconstruct_vector(s, v).tolist() == [5, 9]


def test_genus2_chen_cramer(g2_scheme):
    assert g2_scheme.N == 24 and g2_scheme.noise_gen.shape[0] == 6
    assert min_distance(g2_scheme.noise_code) == 17
    assert verify_security(g2_scheme, 4).passed
    assert not verify_security(g2_scheme, 5).passed


def test_genus0_chen_cramer_is_scaled_shamir(f13):
    alphas = list(range(1, 8))
    cc = chen_cramer(f13, 3, FunctionElement(Poly.x(f13)), alphas)
    sh = shamir(f13, 7, 3, alphas)
    assert np.array_equal(cc.noise_gen, sh.noise_gen)
    assert np.array_equal(cc.secret_gen, sh.secret_gen)


def test_chen_cramer_rejects_zero_of_h(g2_curve):
    with pytest.raises(ValueError):
        chen_cramer(g2_curve, 2, FunctionElement.y(g2_curve), g2_curve.affine_points)


def test_genus2_zero_noise_shares_constant(g2_scheme):
    assert g2_scheme.share(8, noise_coefficients=[0] * 6).tolist() == [8] * 24
    assert g2_scheme.reconstruct(g2_scheme.share(8, seed=5)) == 8


@pytest.mark.parametrize("N", range(3, 9))
def test_security_modes_agree(f13, N):
    for T in range(0, N):
        s = shamir(f13, N, T, range(1, N + 1))
        for claim in range(0, T + 2):
            if claim > N:
                continue
            a = verify_security(s, claim).passed
            b = verify_security(s, claim, mode="exhaustive_rank").passed
            assert a == b


def test_exhaustive_guard(f256):
    s = shamir(f256, 200, 3, range(1, 201))
    with pytest.raises(ResourceGuardError):
        verify_security(s, 100, mode="exhaustive_rank")
