"""X-secure, T-private information retrieval from cross-subspace alignment codes.

Genus 0 uses the projective line (evaluation points are field elements);
genus g >= 1 uses a hyperelliptic curve with a single point at infinity.
"""

from __future__ import annotations

import io
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .curve import HyperellipticCurve, y_zero_points
from .field import GF
from .funcspace import (
    CsaBasis,
    FunctionElement,
    csa_basis_genus0,
    csa_basis_hyper,
    evaluation_matrix,
    noise_basis,
    rr_basis,
)
from .lincode import LinearCode, dual_distance, information_set, sigma_profile
from .lsss import make_rng
from .poly import Poly


class InfeasibleParameters(ValueError):
    """No scheme exists for the requested field/curve and parameters."""


@dataclass(frozen=True)
class PirParams:
    field: GF
    curve: HyperellipticCurve | None
    L: int
    X: int
    T: int
    M: int
    gammas: tuple[int, ...]
    N: int
    delta: int

    @property
    def genus(self) -> int:
        return 0 if self.curve is None else self.curve.g

    @property
    def J(self) -> int:
        return len(self.gammas)

    @property
    def rate(self) -> Fraction:
        return rate(self)


def rate(params: PirParams) -> Fraction:
    """Download rate L/N in lowest terms."""
    return Fraction(params.L, params.N)


# -- gamma selection ------------------------------------------------------------


@dataclass(frozen=True)
class GammaSelection:
    gammas: tuple[int, ...]
    L: int
    N: int
    usable_points: int
    free_x: int

    @property
    def J(self) -> int:
        return len(self.gammas)


def _hyper_N(L: int, X: int, T: int, g: int) -> int:
    return L + X + T + 6 * g + 2


def select_gammas(curve: HyperellipticCurve, X: int, T: int, L: int | None = None) -> GammaSelection:
    """Greedy choice of the roots of h that maximizes L.

    Candidates are x-values with no rational point first (they cost no usable
    points), then x-values of rational points ordered by how many usable
    points they remove. J grows while at least N + g usable points remain
    outside P_inf, the rational zeros of y and the zeros of h. With ``L``
    given, the configuration for J = (L + g) / 2 is returned if feasible.
    """
    g = curve.g
    Fq = curve.field
    yz = set(y_zero_points(curve))
    usable = [P for P in curve.affine_points if P not in yz]
    per_x: dict[int, int] = {}
    for P in usable:
        per_x[P.x] = per_x.get(P.x, 0) + 1
    xbar = {P.x for P in curve.affine_points}
    free = [x for x in range(Fq.q) if x not in xbar]
    taken = sorted((per_x.get(x, 0), x) for x in xbar if curve.F(x) != 0)
    order = free + [x for _, x in taken]
    cost = [0] * len(free) + [c for c, _ in taken]

    def feasible(J: int) -> bool:
        if J > len(order):
            return False
        N = _hyper_N(2 * J - g, X, T, g)
        return len(usable) - sum(cost[:J]) >= N + g

    if L is not None:
        if L < g or (L - g) % 2:
            raise InfeasibleParameters(f"L = {L} must satisfy L >= g = {g} and L = g (mod 2)")
        J = (L + g) // 2
        if not feasible(J):
            raise InfeasibleParameters(f"not enough usable rational points for L = {L}")
    else:
        J = g
        if not feasible(J):
            raise InfeasibleParameters(f"curve has too few usable points for X = {X}, T = {T}")
        while feasible(J + 1):
            J += 1
    L = 2 * J - g
    return GammaSelection(tuple(order[:J]), L, _hyper_N(L, X, T, g), len(usable) - sum(cost[:J]), len(free))


def genus0_max_L(q: int, X: int, T: int) -> int:
    return (q - (X + T)) // 2


# -- scheme -------------------------------------------------------------------


@dataclass
class PirScheme:
    """A planned scheme with its evaluation points and precomputed decoder."""

    params: PirParams
    csa: CsaBasis
    noise: list[FunctionElement]
    points: tuple
    storage_basis: list[FunctionElement] = dc_field(repr=False)
    query_basis: list[FunctionElement] = dc_field(repr=False)
    decoder: np.ndarray = dc_field(init=False, repr=False)
    decoder_cols: list[int] = dc_field(init=False, repr=False)
    decoder_inv: np.ndarray = dc_field(init=False, repr=False)
    info_gen: np.ndarray = dc_field(init=False, repr=False)
    storage_gens: list[np.ndarray] = dc_field(init=False, repr=False)
    query_gen: np.ndarray = dc_field(init=False, repr=False)

    def __post_init__(self) -> None:
        pts = self.points
        self.info_gen = evaluation_matrix(self.csa.h_list, pts)
        self.decoder = np.vstack([self.info_gen, evaluation_matrix(self.noise, pts)])
        # for g >= 1 the response space has dimension N - g inside L(D);
        # decode from an information set of it
        self.decoder_cols = information_set(LinearCode(self.field, self.decoder))
        self.decoder_inv = linalg.inverse(self.field, self.decoder[:, self.decoder_cols])
        self.storage_gens, self.query_gen = _noise_generators(self, pts)

    @property
    def field(self) -> GF:
        return self.params.field

    @property
    def storage_noise(self) -> list[list[FunctionElement]]:
        """Per fragment l: f_noise_l * L((X + 2g - 1) P_inf)."""
        return [[f * u for u in self.storage_basis] for f in self.csa.f_noise_list]

    @property
    def query_noise(self) -> list[FunctionElement]:
        """h * L((T + 2g - 1) P_inf)."""
        return [self.csa.h_function * u for u in self.query_basis]

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def L(self) -> int:
        return self.params.L

    @property
    def M(self) -> int:
        return self.params.M

    @property
    def rate(self) -> Fraction:
        return rate(self.params)

    def storage_noise_code(self, l: int) -> LinearCode:
        return LinearCode(self.field, self.storage_gens[l], self.points)

    def query_noise_code(self) -> LinearCode:
        return LinearCode(self.field, self.query_gen, self.points)


def _noise_bases(space, X: int, T: int, g: int):
    storage = list(rr_basis(space, X + 2 * g - 1)) if X > 0 else []
    query = list(rr_basis(space, T + 2 * g - 1)) if T > 0 else []
    return storage, query


def _noise_generators(scheme: "PirScheme", pts) -> tuple[list[np.ndarray], np.ndarray]:
    # evaluate the products factor-wise: (f * u)(P) = f(P) u(P)
    F = scheme.field
    Sb = evaluation_matrix(scheme.storage_basis, pts)
    storage = [F.vmul(f.eval_many(pts)[None, :], Sb) for f in scheme.csa.f_noise_list]
    Qb = evaluation_matrix(scheme.query_basis, pts)
    query = F.vmul(scheme.csa.h_function.eval_many(pts)[None, :], Qb)
    return storage, query


def plan_scheme(
    field: GF,
    curve: HyperellipticCurve | None,
    X: int,
    T: int,
    L: int | None = None,
    M: int = 4,
) -> PirScheme:
    """Choose L (maximal unless given), gammas and evaluation points; build the decoder."""
    if X < 0 or T < 0:
        raise ValueError("X and T must be nonnegative")
    if M < 1:
        raise ValueError("need at least one file")
    if X == 0 or T == 0:
        warnings.warn("X = 0 or T = 0: the scheme is not secure/private in that parameter", stacklevel=2)
    if curve is None:
        return _plan_genus0(field, X, T, L, M)
    if curve.field != field:
        raise ValueError("curve is defined over a different field")
    return _plan_hyper(curve, X, T, L, M)


def _plan_genus0(field: GF, X: int, T: int, L: int | None, M: int) -> PirScheme:
    q = field.q
    if L is None:
        L = genus0_max_L(q, X, T)
    if L < 1:
        raise InfeasibleParameters(f"field of size {q} is too small for X = {X}, T = {T}")
    N = L + X + T
    if q < N + L:
        raise InfeasibleParameters(f"need q >= N + L = {N + L}, field has {q} elements")
    gammas = tuple(range(L))
    points = tuple(range(L, L + N))
    csa = csa_basis_genus0(field, L, gammas)
    noise = noise_basis(field, X, T, csa)
    storage, query = _noise_bases(field, X, T, 0)
    params = PirParams(field, None, L, X, T, M, gammas, N, csa.delta)
    return PirScheme(params, csa, noise, points, storage, query)


def ambient_basis(curve: HyperellipticCurve, L: int, X: int, T: int) -> list[FunctionElement]:
    """Basis of L(D), D = (L+X+T+5g) P_inf + (y)_0, as y^-1 L((L+X+T+7g+1) P_inf); size N."""
    inv_y = FunctionElement(Poly.one(curve.field), e=1, curve=curve)
    return [inv_y * u for u in rr_basis(curve, L + X + T + 7 * curve.g + 1)]


def _plan_hyper(curve: HyperellipticCurve, X: int, T: int, L: int | None, M: int) -> PirScheme:
    g = curve.g
    sel = select_gammas(curve, X, T, L)
    csa = csa_basis_hyper(curve, sel.L, sel.gammas)
    noise = noise_basis(curve, X, T, csa)
    N = sel.N
    roots = set(sel.gammas)
    yz = set(y_zero_points(curve))
    candidates = [P for P in curve.affine_points if P not in yz and P.x not in roots][: N + g]
    ambient = ambient_basis(curve, sel.L, X, T)
    cols = information_set(LinearCode(curve.field, evaluation_matrix(ambient, candidates)), N)
    points = tuple(candidates[j] for j in cols)
    storage, query = _noise_bases(curve, X, T, g)
    params = PirParams(curve.field, curve, sel.L, X, T, M, sel.gammas, N, csa.delta)
    return PirScheme(params, csa, noise, points, storage, query)


# -- protocol -------------------------------------------------------------------


def encode_storage(scheme: PirScheme, files, seed=None, noise_coefficients=None) -> np.ndarray:
    """Secret-share every fragment s[m, l]; returns an M x L x N array.

    Server n stores the slice ``[:, :, n]``.
    """
    F = scheme.field
    files = F.asarray(files)
    M, L, N = scheme.M, scheme.L, scheme.N
    if files.shape != (M, L):
        raise ValueError(f"files must have shape ({M}, {L}), got {files.shape}")
    if np.any((files < 0) | (files >= F.q)):
        raise ValueError("file fragments must be canonical field elements")
    out = np.repeat(files[:, :, None], N, axis=2)
    dims = {g.shape[0] for g in scheme.storage_gens}
    k = dims.pop() if dims else 0
    if k:
        if noise_coefficients is None:
            noise_coefficients = F.random(make_rng(seed), (M, L, k))
        coef = F.asarray(noise_coefficients)
        for l in range(L):
            out[:, l, :] = F.vadd(out[:, l, :], F.matmul(coef[:, l, :], scheme.storage_gens[l]))
    return out


def make_queries(scheme: PirScheme, mu: int | None = None, seed=None, coefficients=None,
                 noise_coefficients=None) -> np.ndarray:
    """Query shares q[m, l] * h_l + h * (random element of L((T + 2g - 1) P_inf)).

    ``mu`` is the 1-based index of the wanted file (q[m, l] = delta(m, mu)).
    ``coefficients`` (M x L) replaces the Kronecker delta to retrieve arbitrary
    linear combinations. Returns an M x L x N array.
    """
    F = scheme.field
    M, L = scheme.M, scheme.L
    if coefficients is None:
        if mu is None or not 1 <= mu <= M:
            raise ValueError(f"file index mu = {mu} is out of range 1..{M}")
        coefficients = np.zeros((M, L), dtype=np.int64)
        coefficients[mu - 1, :] = 1
    coef = F.asarray(coefficients)
    if coef.shape != (M, L):
        raise ValueError(f"query coefficients must have shape ({M}, {L})")
    out = F.vmul(coef[:, :, None], scheme.info_gen[None, :, :])
    k = scheme.query_gen.shape[0]
    if k:
        if noise_coefficients is None:
            noise_coefficients = F.random(make_rng(seed), (M, L, k))
        nc = F.asarray(noise_coefficients).reshape(M * L, k)
        out = F.vadd(out, F.matmul(nc, scheme.query_gen).reshape(M, L, -1))
    return out


def server_respond(scheme: PirScheme, n: int, storage, queries) -> int:
    """Server n's answer: sum over (m, l) of stored share times query share."""
    if not 0 <= n < scheme.N:
        raise ValueError(f"server index {n} out of range")
    F = scheme.field
    return int(F.vsum(F.vmul(storage[:, :, n], queries[:, :, n]).reshape(-1)))


def respond_all(scheme: PirScheme, storage, queries, n_jobs: int = 1) -> np.ndarray:
    """Responses of all N servers; the result does not depend on ``n_jobs``."""
    servers = range(scheme.N)
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            vals = list(pool.map(lambda n: server_respond(scheme, n, storage, queries), servers))
    else:
        vals = [server_respond(scheme, n, storage, queries) for n in servers]
    return np.array(vals, dtype=np.int64)


def decode(scheme: PirScheme, responses) -> np.ndarray:
    """Coefficients of h_1..h_L in the response vector: the wanted fragments."""
    F = scheme.field
    r = F.asarray(responses)
    if r.shape != (scheme.N,):
        raise ValueError(f"expected {scheme.N} responses, got shape {r.shape}")
    return F.matmul(r[scheme.decoder_cols], scheme.decoder_inv)[: scheme.L]


@dataclass
class Transcript:
    storage: np.ndarray
    queries: np.ndarray
    responses: np.ndarray
    decoded: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("server,kind,m,l,value\n")
        M, L, N = self.storage.shape
        for n in range(N):
            for m in range(M):
                for l in range(L):
                    buf.write(f"{n},store,{m + 1},{l + 1},{self.storage[m, l, n]}\n")
            for m in range(M):
                for l in range(L):
                    buf.write(f"{n},query,{m + 1},{l + 1},{self.queries[m, l, n]}\n")
            buf.write(f"{n},response,,,{self.responses[n]}\n")
        return buf.getvalue()


def run_protocol(scheme: PirScheme, files, mu: int, seed: int = 0, n_jobs: int = 1) -> Transcript:
    """Encode, query file ``mu``, collect all responses and decode."""
    rng = make_rng(seed)
    storage = encode_storage(scheme, files, rng)
    queries = make_queries(scheme, mu, rng)
    responses = respond_all(scheme, storage, queries, n_jobs=n_jobs)
    return Transcript(storage, queries, responses, decode(scheme, responses))


# -- verification -------------------------------------------------------------


@dataclass
class VerificationReport:
    decoder_rank: int
    decoder_rows: int
    N: int
    ambient_rank: int
    distinct_points: bool
    X_claim: int
    T_claim: int
    X_achieved: int
    T_achieved: int
    sigma_storage: list = dc_field(default_factory=list)
    sigma_query: list = dc_field(default_factory=list)

    @property
    def decodable(self) -> bool:
        return self.distinct_points and self.ambient_rank == self.N and self.decoder_rank == self.decoder_rows

    @property
    def passed(self) -> bool:
        return self.decodable and self.X_achieved >= self.X_claim and self.T_achieved >= self.T_claim

    def lines(self) -> list[str]:
        out = [
            f"distinct evaluation points: {'ok' if self.distinct_points else 'FAIL'}",
            f"evaluation rank on L(D): {self.ambient_rank}/{self.N}",
            f"decoder rank {self.decoder_rank}/{self.decoder_rows} (N = {self.N}): {'ok' if self.decodable else 'FAIL'}",
            f"security X: claimed {self.X_claim}, achieved {self.X_achieved}",
            f"privacy T: claimed {self.T_claim}, achieved {self.T_achieved}",
        ]
        for name, vals in (("storage", self.sigma_storage), ("query", self.sigma_query)):
            for v in vals:
                out.append(f"sigma[{name}]({v.U}) = {v.insecure}/{v.total} = {float(v.sigma):.4f}")
        return out


def _achieved(gen: np.ndarray, F: GF, points) -> int:
    if gen.shape[0] == 0:
        return 0
    return dual_distance(LinearCode(F, gen, points)) - 1


def verify_scheme(scheme: PirScheme, sigma: bool = False, points: Sequence | None = None) -> VerificationReport:
    """Recompute decodability and dual distances from the scheme's functions and points.

    ``points`` replaces the planned evaluation points (to audit a modified
    server assignment).

    With ``sigma=True`` also profile U in [X+1, X+g] (storage) and [T+1, T+g]
    (queries); for genus 0 these ranges are empty.
    """
    F, p = scheme.field, scheme.params
    pts = tuple(scheme.points if points is None else points)
    if len(pts) != p.N:
        raise ValueError(f"expected {p.N} evaluation points, got {len(pts)}")
    D = np.vstack([evaluation_matrix(scheme.csa.h_list, pts), evaluation_matrix(scheme.noise, pts)])
    drank = linalg.rank(F, D)
    if p.curve is None:
        arank = drank
    else:
        arank = linalg.rank(F, evaluation_matrix(ambient_basis(p.curve, p.L, p.X, p.T), pts))
    storage, query = _noise_generators(scheme, pts)
    X_ach = min((_achieved(G, F, pts) for G in storage), default=0)
    T_ach = _achieved(query, F, pts)
    report = VerificationReport(drank, D.shape[0], p.N, arank, len(set(pts)) == len(pts), p.X, p.T, X_ach, T_ach)
    if sigma:
        g = p.genus
        for U in range(p.X + 1, p.X + g + 1):
            report.sigma_storage.append(max((sigma_profile(LinearCode(F, G, pts), U, check_interval=False)
                                             for G in storage), key=lambda v: v.insecure))
        for U in range(p.T + 1, p.T + g + 1):
            report.sigma_query.append(sigma_profile(LinearCode(F, query, pts), U, check_interval=False))
    return report


def max_rate(field: GF, curve: HyperellipticCurve | None, X: int, T: int) -> tuple[int, int] | None:
    """(L, N) of the highest-rate scheme, or None when nothing fits."""
    if curve is None:
        L = genus0_max_L(field.q, X, T)
        return (L, L + X + T) if L >= 1 else None
    try:
        sel = select_gammas(curve, X, T)
    except InfeasibleParameters:
        return None
    return sel.L, sel.N
