import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from agpir.field import GF, FieldError, FieldSpec, is_prime, make_field

from conftest import F256_MODULUS


def test_f256_is_valid(f256):
    assert f256.q == 256
    assert len(list(f256.elements())) == 256


def test_prime_field_size(f13):
    assert f13.q == 13 and f13.m == 1


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        GF(2, 8, [1, 0, 0, 0, 0, 0, 0, 0, 1])


@pytest.mark.parametrize(
    "args",
    [(12, 1), (2, 0), (3, 2, [1, 0, 1]), (2, 4, None), (2, 4, [1, 1, 1])],
    ids=["composite", "m0", "odd-ext", "no-modulus", "wrong-degree"],
)
def test_bad_parameters(args):
    with pytest.raises(FieldError):
        GF(*args)


def test_order_guard():
    with pytest.raises(FieldError):
        GF(2, 21, [1, 0, 1] + [0] * 18 + [1])


def test_alpha_times_alpha7(f256):
    # a^8 = a^4 + a^3 + a^2 + 1
    assert f256.mul(2, f256.pow(2, 7)) == 0b11101
    assert f256.pretty(0b11101) == "α^4+α^3+α^2+1"


@pytest.mark.parametrize("field", ["f13", "f256"])
def test_inverse_matches_brute_force(field, request):
    F = request.getfixturevalue(field)
    for a in range(1, F.q):
        want = [b for b in range(1, F.q) if F.mul(a, b) == 1]
        assert want == [F.inv(a)]
    assert F.inv(1) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@pytest.mark.parametrize("field", ["f13", "f256"])
def test_vector_ops_match_scalar(field, request):
    F = request.getfixturevalue(field)
    a = np.arange(F.q)
    b = (a * 7 + 3) % F.q
    assert F.vmul(a, b).tolist() == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert F.vadd(a, b).tolist() == [F.add(int(x), int(y)) for x, y in zip(a, b)]
    assert F.vsub(a, b).tolist() == [F.sub(int(x), int(y)) for x, y in zip(a, b)]
    nz = a[1:]
    assert F.vinv(nz).tolist() == [F.inv(int(x)) for x in nz]


def test_matmul_binary(f256):
    rng = np.random.default_rng(0)
    A = rng.integers(0, 256, (3, 4))
    B = rng.integers(0, 256, (4, 2))
    want = [[0] * 2 for _ in range(3)]
    for i in range(3):
        for j in range(2):
            acc = 0
            for k in range(4):
                acc = f256.add(acc, f256.mul(int(A[i, k]), int(B[k, j])))
            want[i][j] = acc
    assert f256.matmul(A, B).tolist() == want


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_field_axioms_f256(a, b, c):
    F = GF(2, 8, F256_MODULUS)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0


def test_generator_is_primitive(f13, f256):
    for F in (f13, f256):
        g = F.generator
        assert len({F.pow(g, i) for i in range(F.q - 1)}) == F.q - 1


def test_spec_round_trip(f256):
    spec = f256.spec
    assert FieldSpec.from_dict(spec.to_dict()) == spec
    assert make_field(spec.to_dict()) == f256
    assert is_prime(61) and not is_prime(1)
