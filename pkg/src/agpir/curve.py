"""Hyperelliptic curves y^2 + H(x) y = F(x) over F_q with one point at infinity."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .field import GF, FieldSpec, make_field
from .poly import Poly, is_squarefree, poly_gcd


class ResourceGuardError(RuntimeError):
    """An exhaustive computation would exceed its enumeration budget."""


class Point(NamedTuple):
    x: int
    y: int


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "P_inf"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def _as_poly(field: GF, p) -> Poly:
    if isinstance(p, Poly):
        return p
    return Poly(field, p if p is not None else ())


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    genus: int
    reasons: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.valid


class HyperellipticCurve:
    """The curve y^2 + H(x) y = F(x) with F monic of degree 2g+1."""

    def __init__(self, field: GF, F, H=None, g: int | None = None):
        self.field = field
        self.F = _as_poly(field, F)
        self.H = _as_poly(field, H)
        if g is None:
            g = max(self.F.degree - 1, 0) // 2
        self.g = int(g)

    @classmethod
    def from_config(cls, field: GF, cfg: dict) -> "HyperellipticCurve":
        return cls(field, cfg["F"], cfg.get("H", []), cfg.get("g"))

    def to_config(self) -> dict:
        return {"F": self.F.to_list(), "H": self.H.to_list(), "g": self.g}

    def __repr__(self) -> str:
        lhs = "y^2" if self.H.is_zero() else f"y^2 + ({self.H})*y"
        return f"HyperellipticCurve({lhs} = {self.F} over {self.field!r})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, HyperellipticCurve)
            and self.field == other.field
            and (self.F, self.H, self.g) == (other.F, other.H, other.g)
        )

    def __hash__(self) -> int:
        return hash((self.field, self.F.coeffs, self.H.coeffs, self.g))

    def contains(self, P) -> bool:
        if P is INFINITY:
            return True
        Fq = self.field
        x, y = P
        lhs = Fq.add(Fq.mul(y, y), Fq.mul(self.H(x), y))
        return lhs == self.F(x)

    @cached_property
    def points(self) -> list:
        return enumerate_points(self)

    @property
    def affine_points(self) -> list[Point]:
        return self.points[1:]

    @cached_property
    def num_points(self) -> int:
        return len(self.points)

    @property
    def y_zero_degree(self) -> int:
        """Degree of the zero divisor of y (= order of its pole at infinity)."""
        return 2 * self.g + 1

    def hasse_weil_bound(self) -> int:
        q = self.field.q
        return q + 1 + math.isqrt(4 * self.g * self.g * q)

    def point_bound(self) -> int:
        return min(self.hasse_weil_bound(), 2 * self.field.q + 1)


def validate(curve: HyperellipticCurve) -> ValidationReport:
    """Check degree constraints and smoothness of the affine model."""
    Fq, F, H, g = curve.field, curve.F, curve.H, curve.g
    reasons: list[str] = []
    warnings: list[str] = []
    if g < 1:
        reasons.append(f"genus must be at least 1, got {g}")
    if F.degree != 2 * g + 1:
        reasons.append(f"deg F = {F.degree}, expected 2g+1 = {2 * g + 1}")
    elif not F.is_monic():
        reasons.append("F is not monic")
    if H.degree > g + 1:
        reasons.append(f"deg H = {H.degree} exceeds g+1 = {g + 1}")
    elif H.degree == g + 1:
        warnings.append(f"deg H = g+1 = {g + 1}; only deg H <= g is guaranteed to give a single point at infinity")
    if reasons:
        return ValidationReport(False, g, tuple(reasons), tuple(warnings))

    if Fq.p != 2:
        # complete the square: (2y + H)^2 = 4F + H^2
        disc = F.scale(Fq.from_int(4)) + H * H
        if not is_squarefree(disc):
            reasons.append("curve is singular: 4F + H^2 is not squarefree")
    else:
        # singular point <=> H(x0) = 0 and F'(x0)^2 = F(x0) H'(x0)^2 for some x0
        # in the algebraic closure; detected by a common factor
        dF, dH = F.derivative(), H.derivative()
        S = dF * dF - F * dH * dH
        common = poly_gcd(H, S)
        if common.degree != 0:
            reasons.append("curve is singular: gcd(H, F'^2 - F H'^2) is nontrivial")
    return ValidationReport(not reasons, g, tuple(reasons), tuple(warnings))


def _sqr_plus_hy_table(Fq: GF, hs: np.ndarray) -> np.ndarray:
    ys = np.arange(Fq.q, dtype=np.int64)
    return Fq.vadd(Fq.vmul(ys, ys)[None, :], Fq.vmul(hs[:, None], ys[None, :]))


def enumerate_points(curve: HyperellipticCurve) -> list:
    """All rational points: P_inf first, then affine points sorted by (x, y)."""
    Fq = curve.field
    xs = np.arange(Fq.q, dtype=np.int64)
    Fx = curve.F.eval_many(xs)
    Hx = curve.H.eval_many(xs)
    pts: list = [INFINITY]
    step = max(1, (1 << 20) // Fq.q)
    for lo in range(0, Fq.q, step):
        hi = min(lo + step, Fq.q)
        lhs = _sqr_plus_hy_table(Fq, Hx[lo:hi])
        rows, ys = np.nonzero(lhs == Fx[lo:hi, None])
        pts.extend(Point(int(lo + r), int(y)) for r, y in zip(rows, ys))
    return pts


def involution(P, curve: HyperellipticCurve):
    """(x, y) -> (x, -y - H(x)); fixes the point at infinity."""
    if P is INFINITY:
        return INFINITY
    if not curve.contains(P):
        raise ValueError(f"{P} is not on {curve!r}")
    Fq = curve.field
    x, y = P
    return Point(x, Fq.sub(Fq.neg(y), curve.H(x)))


def y_zero_points(curve: HyperellipticCurve) -> list[Point]:
    """Rational points where the function y vanishes.

    The zero divisor of y has degree ``curve.y_zero_degree`` = 2g+1; only its
    rational support is returned here.
    """
    return [P for P in curve.affine_points if P.y == 0]


def x_coordinates(curve: HyperellipticCurve) -> set[int]:
    return {P.x for P in curve.affine_points}


# -- curve search -----------------------------------------------------------


@dataclass
class SearchResult:
    curve: HyperellipticCurve
    num_points: int
    num_y_zeros: int = dc_field(default=0)

    def csv_line(self) -> str:
        fs = ",".join(map(str, self.curve.F.coeffs))
        hs = ",".join(map(str, self.curve.H.coeffs))
        return f"{fs};{hs};{self.num_points};{self.num_y_zeros}"


def _digits(idx: np.ndarray, base: int, width: int) -> np.ndarray:
    out = np.empty((idx.size, width), dtype=np.int64)
    for i in range(width):
        out[:, i] = idx % base
        idx = idx // base
    return out


def _eval_coeff_rows(Fq: GF, coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Evaluate many polynomials (rows of low-first coefficients) at all xs."""
    acc = np.zeros((coeffs.shape[0], xs.size), dtype=np.int64)
    for j in reversed(range(coeffs.shape[1])):
        acc = Fq.vadd(Fq.vmul(acc, xs[None, :]), coeffs[:, j, None])
    return acc


def _count_points(Fq: GF, count_table: np.ndarray, Fc: np.ndarray, Hc: np.ndarray) -> np.ndarray:
    xs = np.arange(Fq.q, dtype=np.int64)
    monic = np.hstack([Fc, np.ones((Fc.shape[0], 1), dtype=np.int64)])
    Fv = _eval_coeff_rows(Fq, monic, xs)
    Hv = _eval_coeff_rows(Fq, Hc, xs)
    return 1 + count_table[Hv, Fv].sum(axis=1)


def curve_search(
    field: GF | FieldSpec,
    g: int,
    min_points: int,
    budget: int = 1 << 22,
    mode: str = "exhaustive",
    seed: int = 0,
) -> list[SearchResult]:
    """Find smooth genus-g curves with at least ``min_points`` rational points.

    Exhaustive mode walks every monic F of degree 2g+1 (and, in characteristic
    2, every H of degree <= g; otherwise H = 0) and refuses to start if that
    exceeds ``budget`` candidates. Random mode draws ``budget`` candidates
    from a seeded PCG64 generator. Results are sorted by point count
    (descending), ties broken by enumeration order.
    """
    Fq = field if isinstance(field, GF) else make_field(field)
    q = Fq.q
    if mode not in ("exhaustive", "random"):
        raise ValueError(f"unknown search mode {mode!r}")
    if min_points > 2 * q + 1:
        return []
    nF = 2 * g + 1
    nH = g + 1 if Fq.p == 2 else 0
    ys = np.arange(q, dtype=np.int64)
    table = np.zeros((q, q), dtype=np.int64)
    vals = _sqr_plus_hy_table(Fq, ys)
    for h in range(q):
        table[h] = np.bincount(vals[h], minlength=q)

    chunk = max(1, (1 << 20) // q)
    found: list[tuple[int, int, HyperellipticCurve]] = []

    def consider(order_base: int, Fc: np.ndarray, Hc: np.ndarray) -> None:
        counts = _count_points(Fq, table, Fc, Hc)
        for i in np.nonzero(counts >= min_points)[0]:
            F = list(Fc[i]) + [1]
            H = list(Hc[i]) if nH else []
            c = HyperellipticCurve(Fq, F, H, g)
            if validate(c).valid:
                found.append((int(counts[i]), order_base + int(i), c))

    if mode == "exhaustive":
        total = q ** (nF + nH)
        if total > budget:
            raise ResourceGuardError(f"exhaustive search needs {total} candidates, budget is {budget}")
        for lo in range(0, total, chunk):
            idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
            digits = _digits(idx, q, nF + nH)
            consider(lo, digits[:, :nF], digits[:, nF:])
    else:
        rng = np.random.Generator(np.random.PCG64(seed))
        seen: set[tuple] = set()
        for lo in range(0, budget, chunk):
            n = min(chunk, budget - lo)
            digits = Fq.random(rng, (n, nF + nH))
            keep = []
            for i, row in enumerate(map(tuple, digits)):
                if row not in seen:
                    seen.add(row)
                    keep.append(i)
            digits = digits[keep]
            consider(lo, digits[:, :nF], digits[:, nF:])

    found.sort(key=lambda t: (-t[0], t[1]))
    out = []
    for count, _, c in found:
        out.append(SearchResult(c, count, len(y_zero_points(c))))
    return out
