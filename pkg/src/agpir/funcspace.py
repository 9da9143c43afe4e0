"""Rational functions (a(x) + b(x) y) / (d(x) y^e) and the bases built from them.

``curve=None`` stands for the projective line: functions are then plain
polynomials in x and evaluation points are field elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .curve import INFINITY, HyperellipticCurve
from .field import GF
from .poly import Poly, from_roots, poly_gcd


class PoleError(ValueError):
    """A function was evaluated at one of its poles."""


class FunctionElement:
    """The function (a + b*y) / (d * y^e) on a hyperelliptic curve (or P^1)."""

    __slots__ = ("a", "b", "d", "e", "curve")

    def __init__(self, a: Poly, b: Poly | None = None, d: Poly | None = None, e: int = 0,
                 curve: HyperellipticCurve | None = None):
        F = a.field
        b = b if b is not None else Poly.zero(F)
        d = d if d is not None else Poly.one(F)
        if d.is_zero():
            raise ZeroDivisionError("denominator is the zero polynomial")
        if e not in (0, 1):
            raise ValueError("e must be 0 or 1")
        if curve is None and (e or not b.is_zero()):
            raise ValueError("functions on the projective line cannot involve y")
        # (b y) / (d y) == b / d
        if e == 1 and a.is_zero() and not b.is_zero():
            a, b, e = b, Poly.zero(F), 0
        if a.is_zero() and b.is_zero():
            d, e = Poly.one(F), 0
        else:
            g = poly_gcd(poly_gcd(a, b), d) if d.degree > 0 else d
            if g.degree > 0:
                a, b, d = a // g, b // g, d // g
            lead = d.lead
            if lead != 1:
                inv = F.inv(lead)
                a, b, d = a.scale(inv), b.scale(inv), d.scale(inv)
        self.a, self.b, self.d, self.e, self.curve = a, b, d, e, curve

    @classmethod
    def poly(cls, p: Poly, curve: HyperellipticCurve | None = None) -> "FunctionElement":
        return cls(p, curve=curve)

    @classmethod
    def y(cls, curve: HyperellipticCurve) -> "FunctionElement":
        F = curve.field
        return cls(Poly.zero(F), Poly.one(F), curve=curve)

    @classmethod
    def monomial(cls, field: GF, i: int, j: int, curve: HyperellipticCurve | None = None) -> "FunctionElement":
        xi = Poly.monomial(field, i)
        if j == 0:
            return cls(xi, curve=curve)
        return cls(Poly.zero(field), xi, curve=curve)

    @property
    def field(self) -> GF:
        return self.a.field

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FunctionElement):
            return NotImplemented
        return (self.a, self.b, self.d, self.e) == (other.a, other.b, other.d, other.e) and self.curve == other.curve

    def __hash__(self) -> int:
        return hash((self.a.coeffs, self.b.coeffs, self.d.coeffs, self.e))

    def __repr__(self) -> str:
        num = f"{self.a}" if self.b.is_zero() else f"({self.a}) + ({self.b})*y"
        den = []
        if self.d.degree > 0:
            den.append(f"({self.d})")
        if self.e:
            den.append("y")
        return num if not den else f"[{num}] / {'*'.join(den)}"

    def to_row(self) -> str:
        """``a;b;d;e`` with comma-separated coefficient lists."""
        parts = [",".join(map(str, p.coeffs)) for p in (self.a, self.b, self.d)]
        return ";".join(parts + [str(self.e)])

    # -- arithmetic ---------------------------------------------------------

    def _check_compatible(self, other: "FunctionElement") -> None:
        if self.curve != other.curve:
            raise ValueError("functions live on different curves")

    def __add__(self, other: "FunctionElement") -> "FunctionElement":
        self._check_compatible(other)
        u, v = self, other
        if u.e < v.e:
            u = u._lift_e()
        elif v.e < u.e:
            v = v._lift_e()
        # common denominator d_u d_v y^e
        return FunctionElement(u.a * v.d + v.a * u.d, u.b * v.d + v.b * u.d, u.d * v.d, u.e, self.curve)

    def __neg__(self) -> "FunctionElement":
        return FunctionElement(-self.a, -self.b, self.d, self.e, self.curve)

    def __sub__(self, other: "FunctionElement") -> "FunctionElement":
        return self + (-other)

    def _lift_e(self) -> "FunctionElement":
        """Rewrite with e = 1 without changing the function: multiply through by y."""
        a, b = _times_y(self.curve, self.a, self.b)
        return _raw(a, b, self.d, 1, self.curve)

    def __mul__(self, other) -> "FunctionElement":
        if isinstance(other, Poly):
            other = FunctionElement(other, curve=self.curve)
        if isinstance(other, int):
            other = FunctionElement(Poly.constant(self.field, other), curve=self.curve)
        self._check_compatible(other)
        return ff_mul(self, other)

    __rmul__ = __mul__

    # -- evaluation ---------------------------------------------------------

    def __call__(self, P) -> int:
        return ff_eval(self, P)

    def eval_many(self, points: Sequence) -> np.ndarray:
        """Evaluate at every point; raises PoleError if any point is a pole."""
        F = self.field
        if self.curve is None:
            xs = F.asarray(list(points))
            ys = None
        else:
            if any(P is INFINITY for P in points):
                raise PoleError("cannot evaluate at the point at infinity")
            xs = F.asarray([P[0] for P in points])
            ys = F.asarray([P[1] for P in points])
        num = self.a.eval_many(xs)
        if not self.b.is_zero():
            num = F.vadd(num, F.vmul(self.b.eval_many(xs), ys))
        den = self.d.eval_many(xs)
        if self.e:
            den = F.vmul(den, ys)
        if np.any(den == 0):
            bad = int(np.nonzero(den == 0)[0][0])
            raise PoleError(f"pole at evaluation point {list(points)[bad]}")
        return F.vmul(num, F.vinv(den))


def _raw(a, b, d, e, curve) -> FunctionElement:
    f = object.__new__(FunctionElement)
    f.a, f.b, f.d, f.e, f.curve = a, b, d, e, curve
    return f


def _times_y(curve: HyperellipticCurve, a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """(a + b y) * y = b F + (a - b H) y."""
    return b * curve.F, a - b * curve.H


def ff_mul(u: FunctionElement, v: FunctionElement) -> FunctionElement:
    """Product, reduced with y^2 = F - H y and 1/y = (y + H) / F."""
    curve = u.curve
    if curve is None:
        return FunctionElement(u.a * v.a, d=u.d * v.d)
    F, H = curve.F, curve.H
    bb = u.b * v.b
    a = u.a * v.a + bb * F
    b = u.a * v.b + u.b * v.a - bb * H
    d = u.d * v.d
    e = u.e + v.e
    if e == 2:
        # 1/y^2 = (y + H) / (F y) since y (y + H) = F;
        # (a + b y)(y + H) = (a H + b F) + a y
        a, b = a * H + b * F, a
        d = d * F
        e = 1
    return FunctionElement(a, b, d, e, curve)


def ff_eval(u: FunctionElement, P) -> int:
    return int(u.eval_many([P])[0])


# -- Riemann-Roch bases -----------------------------------------------------


@dataclass(frozen=True)
class RRBasis:
    m: int
    elements: tuple[FunctionElement, ...]

    @property
    def dim(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def rr_basis(space: HyperellipticCurve | GF, m: int) -> RRBasis:
    """Monomial basis of L(m P_inf): x^i y^j with 2i + (2g+1) j <= m, j in {0, 1}.

    Ordered with all j = 0 monomials first, each group by ascending i. Passing a
    field instead of a curve gives the genus-0 space {1, x, ..., x^m}.
    """
    if m < 0:
        return RRBasis(m, ())
    if isinstance(space, GF):
        return RRBasis(m, tuple(FunctionElement.monomial(space, i, 0) for i in range(m + 1)))
    curve = space
    g = curve.g
    F = curve.field
    out = [FunctionElement.monomial(F, i, 0, curve) for i in range(m // 2 + 1)]
    if m >= 2 * g + 1:
        out += [FunctionElement.monomial(F, i, 1, curve) for i in range((m - 2 * g - 1) // 2 + 1)]
    return RRBasis(m, tuple(out))


# -- CSA bases ----------------------------------------------------------------


@dataclass(frozen=True)
class CsaBasis:
    """Information-space basis h_1..h_L, alignment polynomial h and h/h_l."""

    h_list: tuple[FunctionElement, ...]
    h: Poly
    f_noise_list: tuple[FunctionElement, ...]
    gammas: tuple[int, ...]
    delta: int
    curve: HyperellipticCurve | None = None

    @property
    def L(self) -> int:
        return len(self.h_list)

    @property
    def h_function(self) -> FunctionElement:
        return FunctionElement(self.h, curve=self.curve)


def _check_distinct(gammas: Sequence[int]) -> None:
    if len(set(gammas)) != len(gammas):
        raise ValueError("interpolation points gamma must be distinct")


def csa_basis_genus0(field: GF, L: int, gammas: Sequence[int]) -> CsaBasis:
    """Lagrange-style basis h_l = prod_{l' != l} (x - gamma_l'); h/h_l = x - gamma_l."""
    gammas = tuple(int(g) for g in gammas)
    if len(gammas) != L:
        raise ValueError(f"need exactly L = {L} gammas, got {len(gammas)}")
    _check_distinct(gammas)
    h = from_roots(field, gammas)
    h_list = tuple(FunctionElement(from_roots(field, gammas[:i] + gammas[i + 1 :])) for i in range(L))
    f_noise = tuple(FunctionElement(from_roots(field, [g])) for g in gammas)
    return CsaBasis(h_list, h, f_noise, gammas, 1)


def csa_basis_hyper(curve: HyperellipticCurve, L: int, gammas: Sequence[int]) -> CsaBasis:
    """Basis of L((L+g-1) P_inf) aligned on h = prod_j (x - gamma_j).

    With J = (L+g)/2, the type-1 elements are h / (x - gamma_j) for all j and
    the type-2 elements are y * prod_{j' <= J-g, j' != j} (x - gamma_j') for
    j <= J-g. The matching h/h_l are (x - gamma_j) and
    (x - gamma_j) * prod_{j' > J-g} (x - gamma_j') / y.
    """
    g = curve.g
    Fq = curve.field
    if L < g or (L - g) % 2:
        raise ValueError(f"L = {L} must satisfy L >= g = {g} and L = g (mod 2)")
    J = (L + g) // 2
    gammas = tuple(int(c) for c in gammas)
    if len(gammas) != J:
        raise ValueError(f"need J = (L+g)/2 = {J} gammas, got {len(gammas)}")
    _check_distinct(gammas)
    for c in gammas:
        if curve.F(c) == 0:
            raise ValueError(f"F(gamma) = 0 for gamma = {c}")
    zero = Poly.zero(Fq)
    h = from_roots(Fq, gammas)
    head, tail = gammas[: J - g], gammas[J - g :]
    tail_poly = from_roots(Fq, tail)
    h_list = [FunctionElement(from_roots(Fq, gammas[:j] + gammas[j + 1 :]), curve=curve) for j in range(J)]
    h_list += [FunctionElement(zero, from_roots(Fq, head[:j] + head[j + 1 :]), curve=curve) for j in range(J - g)]
    f_noise = [FunctionElement(from_roots(Fq, [c]), curve=curve) for c in gammas]
    f_noise += [FunctionElement(from_roots(Fq, [c]) * tail_poly, e=1, curve=curve) for c in head]
    return CsaBasis(tuple(h_list), h, tuple(f_noise), gammas, 2 * g + 3, curve)


def noise_basis(space: HyperellipticCurve | GF, X: int, T: int, csa: CsaBasis) -> list[FunctionElement]:
    """Basis of the response noise space.

    Genus 0: h * x^i for i < X+T. Hyperelliptic: h * u / y for u in the
    monomial basis of L((X+T+6g+1) P_inf), which spans
    h * L((X+T+4g) P_inf + (y)_0) and has dimension X+T+5g+2.
    """
    if isinstance(space, GF):
        return [FunctionElement(csa.h.shift(i)) for i in range(X + T)]
    curve = space
    m = X + T + 6 * curve.g + 1
    hy = FunctionElement(csa.h, e=1, curve=curve)
    return [hy * u for u in rr_basis(curve, m)]


def evaluation_matrix(functions: Sequence[FunctionElement], points: Sequence) -> np.ndarray:
    """Rows are the evaluation vectors of ``functions`` at ``points``."""
    if not functions:
        return np.zeros((0, len(points)), dtype=np.int64)
    return np.vstack([f.eval_many(points) for f in functions])


def basis_csv(functions: Sequence[FunctionElement]) -> str:
    return "".join(f.to_row() + "\n" for f in functions)
