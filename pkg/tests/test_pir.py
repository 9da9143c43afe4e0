import itertools
import warnings
from fractions import Fraction

import numpy as np
import pytest

from agpir import linalg
from agpir.pir import (
    InfeasibleParameters,
    decode,
    encode_storage,
    make_queries,
    max_rate,
    plan_scheme,
    rate,
    respond_all,
    run_protocol,
    select_gammas,
    server_respond,
    verify_scheme,
)


@pytest.fixture(scope="module")
def genus0_scheme(f13):
    return plan_scheme(f13, None, 2, 2, L=4, M=3)


@pytest.fixture(scope="module")
def f13_genus2_pir(f13, g2_curve):
    return plan_scheme(f13, g2_curve, 1, 1, L=2, M=2)


def test_genus0_f256_plan(f256):
    s = plan_scheme(f256, None, 50, 50, M=2)
    assert (s.L, s.N) == (78, 178)
    assert s.rate == Fraction(78, 178)


def test_f256_curve_plan(f256, f256_curve):
    sel = select_gammas(f256_curve, 50, 50)
    assert (sel.J, sel.L, sel.N) == (89, 177, 285)
    assert sel.free_x == 112


def test_f11_plans(f11, f11_curves):
    a, b = f11_curves
    sa = plan_scheme(f11, a, 1, 1)
    sb = plan_scheme(f11, b, 1, 1)
    assert (sa.params.J, sa.L, sa.N) == (2, 3, 13)
    assert (sb.params.J, sb.L, sb.N) == (3, 5, 15)
    assert rate(sa.params) == Fraction(3, 13)
    assert float(sb.rate) == pytest.approx(1 / 3)


def test_f11_greedy_stops(f11_curves):
    a, b = f11_curves
    with pytest.raises(InfeasibleParameters):
        select_gammas(a, 1, 1, L=5)
    sel = select_gammas(b, 1, 1)
    assert sel.free_x == 3 and sel.J == 3
    assert all(not any(P.x == g for P in b.affine_points) for g in sel.gammas)


def test_infeasible(f11, f11_curves, f13):
    with pytest.raises(InfeasibleParameters):
        plan_scheme(f11, f11_curves[0], 5, 5)
    with pytest.raises(InfeasibleParameters):
        plan_scheme(f13, None, 6, 6)
    with pytest.raises(InfeasibleParameters):
        plan_scheme(f13, None, 2, 2, L=5)
    assert max_rate(f13, None, 7, 7) is None


def test_structural_rate_formulas(genus0_scheme, f13_genus2_pir):
    s = genus0_scheme
    assert s.N - s.L == 4 and len(s.noise) == 4
    g = 2
    p = f13_genus2_pir.params
    assert p.N - p.L == 1 + 1 + 6 * g + 2
    assert len(f13_genus2_pir.noise) == 1 + 1 + 5 * g + 2
    assert p.L + len(f13_genus2_pir.noise) == p.N - g


def test_hyper_points_avoid_bad_points(f13_genus2_pir, g2_curve):
    pts = f13_genus2_pir.points
    assert len(set(pts)) == f13_genus2_pir.N
    assert all(P.y != 0 and P.x not in f13_genus2_pir.params.gammas for P in pts)


def test_round_trips(genus0_scheme, f13_genus2_pir):
    rng = np.random.default_rng(11)
    for s in (genus0_scheme, f13_genus2_pir):
        F = s.field
        for _ in range(30):
            files = F.random(rng, (s.M, s.L))
            mu = int(rng.integers(1, s.M + 1))
            assert np.array_equal(run_protocol(s, files, mu, rng).decoded, files[mu - 1])


@pytest.mark.parametrize("which", ["genus0_scheme", "f13_genus2_pir"])
def test_privacy_and_security_ranks(which, request):
    s = request.getfixturevalue(which)
    F, p = s.field, s.params
    for cols in itertools.combinations(range(s.N), p.T):
        assert linalg.rank(F, s.query_gen[:, cols]) == p.T
    for G in s.storage_gens:
        for cols in itertools.combinations(range(s.N), p.X):
            assert linalg.rank(F, G[:, cols]) == p.X


def test_zero_noise_storage(genus0_scheme):
    s = genus0_scheme
    files = np.arange(12).reshape(3, 4)
    k = s.storage_gens[0].shape[0]
    st = encode_storage(s, files, noise_coefficients=np.zeros((3, 4, k), dtype=np.int64))
    assert np.array_equal(st, np.repeat(files[:, :, None], s.N, axis=2))


def test_storage_in_secret_plus_noise_span(f13_genus2_pir):
    s = f13_genus2_pir
    F = s.field
    files = F.random(np.random.default_rng(0), (s.M, s.L))
    st = encode_storage(s, files, seed=4)
    ones = np.ones((1, s.N), dtype=np.int64)
    for l in range(s.L):
        basis = np.vstack([ones, s.storage_gens[l]])
        assert linalg.in_row_space(F, basis, st[:, l, :])


def test_queries_differ_only_in_information_part(genus0_scheme):
    s = genus0_scheme
    k = s.query_gen.shape[0]
    zero = np.zeros((s.M, s.L, k), dtype=np.int64)
    q1 = make_queries(s, 1, noise_coefficients=zero)
    q2 = make_queries(s, 2, noise_coefficients=zero)
    assert np.array_equal(q1[0], s.info_gen) and not q1[1].any()
    assert np.array_equal(q2[1], s.info_gen) and not q2[0].any()


def test_generalized_queries(genus0_scheme):
    s = genus0_scheme
    delta = np.zeros((s.M, s.L), dtype=np.int64)
    delta[0] = 1
    assert np.array_equal(make_queries(s, 1, seed=5), make_queries(s, coefficients=delta, seed=5))


def test_query_validation(genus0_scheme):
    with pytest.raises(ValueError):
        make_queries(genus0_scheme, 0)
    with pytest.raises(ValueError):
        make_queries(genus0_scheme, 4)


def test_single_file_single_fragment(f13):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        s = plan_scheme(f13, None, 0, 0, L=1, M=1)
    st = encode_storage(s, [[5]])
    q = make_queries(s, 1)
    for n in range(s.N):
        assert server_respond(s, n, st, q) == f13.mul(5, int(q[0, 0, n]))


def test_degenerate_parameters_warn(f13):
    with pytest.warns(UserWarning):
        s = plan_scheme(f13, None, 0, 2, L=3, M=2)
    assert all(G.shape[0] == 0 for G in s.storage_gens)


def test_response_in_decoder_span(f13_genus2_pir):
    s = f13_genus2_pir
    F = s.field
    files = F.random(np.random.default_rng(1), (s.M, s.L))
    st = encode_storage(s, files, seed=2)
    r = respond_all(s, st, make_queries(s, 2, seed=3))
    assert linalg.in_row_space(F, s.decoder, r[None, :])


def test_bilinearity(genus0_scheme):
    s = genus0_scheme
    F = s.field
    rng = np.random.default_rng(2)
    q = make_queries(s, 2, rng)
    a = encode_storage(s, F.random(rng, (3, 4)), rng)
    b = encode_storage(s, F.random(rng, (3, 4)), rng)
    ra, rb = respond_all(s, a, q), respond_all(s, b, q)
    assert np.array_equal(respond_all(s, F.vadd(a, b), q), F.vadd(ra, rb))


def test_decode_edge_cases(genus0_scheme):
    s = genus0_scheme
    assert not decode(s, np.zeros(s.N, dtype=np.int64)).any()
    with pytest.raises(ValueError):
        decode(s, np.zeros(s.N + 1, dtype=np.int64))


def test_decode_linear_in_files(f13_genus2_pir):
    s = f13_genus2_pir
    F = s.field
    rng = np.random.default_rng(8)
    f1, f2 = F.random(rng, (2, 2)), F.random(rng, (2, 2))
    q = make_queries(s, 1, seed=1)
    d1 = decode(s, respond_all(s, encode_storage(s, f1, seed=1), q))
    d2 = decode(s, respond_all(s, encode_storage(s, f2, seed=2), q))
    d12 = decode(s, respond_all(s, encode_storage(s, F.vadd(f1, f2), seed=3), q))
    assert np.array_equal(d12, F.vadd(d1, d2))


def test_threads_do_not_change_responses(f13_genus2_pir):
    s = f13_genus2_pir
    st = encode_storage(s, [[1, 2], [3, 4]], seed=0)
    q = make_queries(s, 1, seed=0)
    assert np.array_equal(respond_all(s, st, q, n_jobs=1), respond_all(s, st, q, n_jobs=3))


def test_transcript_determinism(f13_genus2_pir):
    files = [[1, 2], [3, 4]]
    a = run_protocol(f13_genus2_pir, files, 2, seed=9).to_csv()
    b = run_protocol(f13_genus2_pir, files, 2, seed=9).to_csv()
    assert a == b and a.startswith("server,kind,m,l,value\n")


def test_verify_f11(f11, f11_curves):
    rep = verify_scheme(plan_scheme(f11, f11_curves[0], 1, 1))
    assert rep.passed


def test_verify_genus0_exact(genus0_scheme):
    rep = verify_scheme(genus0_scheme)
    assert rep.passed and (rep.X_achieved, rep.T_achieved) == (2, 2)


def test_verify_duplicated_point(genus0_scheme, f13_genus2_pir):
    for s in (genus0_scheme, f13_genus2_pir):
        pts = list(s.points)
        pts[1] = pts[0]
        assert not verify_scheme(s, points=pts).passed


def test_verify_sigma(f13_genus2_pir):
    rep = verify_scheme(f13_genus2_pir, sigma=True)
    assert [v.U for v in rep.sigma_query] == [2, 3]
    assert all(0 < v.sigma < 1 for v in rep.sigma_query)
