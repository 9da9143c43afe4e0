"""Linear secret sharing schemes given by a pair of evaluation codes (C, C_noise)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Sequence

import numpy as np

from . import linalg
from .curve import HyperellipticCurve, ResourceGuardError
from .field import GF
from .funcspace import FunctionElement, evaluation_matrix, rr_basis
from .lincode import SUBSET_GUARD, LinearCode, dual_distance
from .poly import Poly

RNG_ALGORITHM = "numpy.PCG64"


def make_rng(seed) -> np.random.Generator:
    """Seeded PCG64 generator; passes an existing Generator through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


@dataclass
class Lsss:
    """Secret functions span C, noise functions span C_noise; C and C_noise meet in 0."""

    field: GF
    secret_functions: list[FunctionElement]
    noise_functions: list[FunctionElement]
    points: tuple
    curve: HyperellipticCurve | None = None
    secret_gen: np.ndarray = dc_field(init=False, repr=False)
    noise_gen: np.ndarray = dc_field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.points = tuple(self.points)
        self.secret_gen = evaluation_matrix(self.secret_functions, self.points)
        self.noise_gen = evaluation_matrix(self.noise_functions, self.points)
        joint = np.vstack([self.secret_gen, self.noise_gen])
        r = linalg.rank(self.field, joint) if joint.size else 0
        if r != joint.shape[0]:
            raise ValueError(f"secret and noise evaluations are not jointly independent (rank {r} < {joint.shape[0]})")

    @property
    def N(self) -> int:
        return len(self.points)

    @property
    def noise_code(self) -> LinearCode:
        return LinearCode(self.field, self.noise_gen, self.points)

    @property
    def secret_code(self) -> LinearCode:
        return LinearCode(self.field, self.secret_gen, self.points)

    def share(self, secret, seed=None, noise_coefficients=None) -> np.ndarray:
        return share(self, secret, seed, noise_coefficients)

    def reconstruct(self, shares) -> int:
        return reconstruct(self, shares)


def shamir(field: GF, N: int, T: int, alphas: Sequence[int]) -> Lsss:
    """C = RS_1(alpha), C_noise = GRS_T(alpha, alpha) from the functions x, ..., x^T."""
    alphas = tuple(int(a) for a in alphas)
    if len(alphas) != N:
        raise ValueError(f"need N = {N} evaluation points, got {len(alphas)}")
    if len(set(alphas)) != N:
        raise ValueError("evaluation points must be distinct")
    if 0 in alphas:
        raise ValueError("evaluation points must be nonzero")
    secret = [FunctionElement(Poly.one(field))]
    noise = [FunctionElement(Poly.monomial(field, i)) for i in range(1, T + 1)]
    return Lsss(field, secret, noise, alphas)


def chen_cramer(curve: HyperellipticCurve | GF, T: int, h: FunctionElement, points: Sequence) -> Lsss:
    """C = constants, C_noise = h * L((T + 2g - 1) P_inf) evaluated at ``points``.

    Passing a field instead of a curve gives the genus-0 variant, where
    C_noise = h * F_q[x]^{<T}.
    """
    if isinstance(curve, GF):
        field, g, geom = curve, 0, None
    else:
        field, g, geom = curve.field, curve.g, curve
    if h.a.degree <= 0 and h.b.is_zero() and h.d.degree <= 0 and not h.e:
        raise ValueError("h must be nonconstant")
    points = tuple(points)
    if len(points) < T + 2 * g:
        raise ValueError(f"need at least T + 2g = {T + 2 * g} points, got {len(points)}")
    hv = h.eval_many(points)
    if np.any(hv == 0):
        raise ValueError("evaluation points must avoid the zeros of h")
    noise = [h * u for u in rr_basis(geom if geom is not None else field, T + 2 * g - 1)] if T > 0 else []
    secret = [FunctionElement(Poly.one(field), curve=geom)]
    return Lsss(field, secret, noise, points, geom)


def share(scheme: Lsss, secret, seed=None, noise_coefficients=None) -> np.ndarray:
    """secret * (secret row) + random combination of the noise rows.

    ``secret`` is a scalar or, for multi-dimensional C, a coefficient vector.
    """
    F = scheme.field
    s = F.asarray(secret).reshape(-1)
    if s.size != scheme.secret_gen.shape[0]:
        raise ValueError(f"secret has {s.size} coordinates, scheme expects {scheme.secret_gen.shape[0]}")
    out = F.matmul(s, scheme.secret_gen)
    k = scheme.noise_gen.shape[0]
    if k:
        if noise_coefficients is None:
            noise_coefficients = F.random(make_rng(seed), k)
        out = F.vadd(out, F.matmul(F.asarray(noise_coefficients), scheme.noise_gen))
    return out


def reconstruct_vector(scheme: Lsss, shares) -> np.ndarray:
    """Coefficients of all secret functions; raises ValueError on inconsistent shares."""
    F = scheme.field
    shares = F.asarray(shares)
    if shares.shape != (scheme.N,):
        raise ValueError(f"expected {scheme.N} shares, got shape {shares.shape}")
    G = np.vstack([scheme.secret_gen, scheme.noise_gen])
    try:
        c = linalg.solve_left(F, G, shares)
    except ValueError:
        raise ValueError("share vector is not consistent with the scheme") from None
    return c[: scheme.secret_gen.shape[0]]


def reconstruct(scheme: Lsss, shares) -> int:
    return int(reconstruct_vector(scheme, shares)[0])


def combine(field: GF, shares: Sequence, coefficients: Sequence[int]) -> np.ndarray:
    """Coordinatewise linear combination of share vectors."""
    if len(shares) != len(coefficients):
        raise ValueError("need one coefficient per share vector")
    arrs = [field.asarray(s) for s in shares]
    if len({a.shape for a in arrs}) > 1:
        raise ValueError("share vectors have different lengths")
    out = np.zeros_like(arrs[0])
    for a, c in zip(arrs, coefficients):
        out = field.vadd(out, field.vmul(a, int(c)))
    return out


@dataclass(frozen=True)
class SecurityReport:
    passed: bool
    T_claim: int
    mode: str
    detail: str
    achieved: int | None = None


def verify_security(scheme: Lsss, T_claim: int, mode: str = "dual_distance") -> SecurityReport:
    """Check T_claim-security via d_perp(C_noise) - 1 or exhaustively via subset ranks."""
    F = scheme.field
    G = scheme.noise_gen
    k = G.shape[0]
    if T_claim == 0:
        return SecurityReport(True, 0, mode, "trivially secure against the empty set", None)
    if mode == "dual_distance":
        if k == 0:
            return SecurityReport(False, T_claim, mode, "empty noise code", 0)
        achieved = dual_distance(LinearCode(F, G)) - 1
        return SecurityReport(achieved >= T_claim, T_claim, mode, f"d_perp - 1 = {achieved}", achieved)
    if mode == "exhaustive_rank":
        total = math.comb(scheme.N, T_claim)
        if total > SUBSET_GUARD:
            raise ResourceGuardError(f"C({scheme.N}, {T_claim}) = {total} exceeds the subset guard")
        if k < T_claim:
            return SecurityReport(False, T_claim, mode, f"noise dimension {k} < {T_claim}")
        for subset in combinations(range(scheme.N), T_claim):
            if linalg.rank(F, G[:, subset]) < T_claim:
                return SecurityReport(False, T_claim, mode, f"rank deficient on {subset}")
        return SecurityReport(True, T_claim, mode, f"all {total} subsets have full rank")
    raise ValueError(f"unknown mode {mode!r}")
