"""Dense univariate polynomials over a finite field."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .field import GF


class Poly:
    """Polynomial with coefficients low-degree-first and no trailing zeros.

    The zero polynomial has an empty coefficient tuple and degree ``-1``
    (``Poly.ZERO_DEGREE``), which stands in for minus infinity.
    """

    ZERO_DEGREE = -1
    __slots__ = ("field", "coeffs")

    def __init__(self, field: GF, coeffs: Iterable[int] = ()):
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs: tuple[int, ...] = tuple(c)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: GF) -> "Poly":
        return cls(field)

    @classmethod
    def one(cls, field: GF) -> "Poly":
        return cls(field, (1,))

    @classmethod
    def constant(cls, field: GF, c: int) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def x(cls, field: GF) -> "Poly":
        return cls(field, (0, 1))

    @classmethod
    def monomial(cls, field: GF, degree: int, coeff: int = 1) -> "Poly":
        return cls(field, (0,) * degree + (coeff,))

    # -- basic properties ---------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.lead == 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Poly.constant(self.field, other)
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in reversed(range(len(self.coeffs))):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else "x" if i == 1 else f"x^{i}"
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)

    def to_list(self) -> list[int]:
        return list(self.coeffs)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field != self.field:
                raise ValueError("polynomials over different fields")
            return other
        if isinstance(other, (int, np.integer)):
            return Poly.constant(self.field, int(other))
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(F, (F.add(self[i], other[i]) for i in range(n)))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.field, (self.field.neg(c) for c in self.coeffs))

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return Poly(self.field)
        F = self.field
        a = np.array(self.coeffs, dtype=np.int64)
        b = np.array(other.coeffs, dtype=np.int64)
        if F.m == 1:
            # integer convolution stays below 2^63 for degrees in the thousands
            return Poly(F, np.convolve(a, b) % F.p)
        if len(a) > len(b):
            a, b = b, a
        out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
        for i, c in enumerate(a):
            if c:
                out[i : i + len(b)] ^= F.vmul(c, b)
        return Poly(F, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        return Poly(self.field, (self.field.mul(c, a) for a in self.coeffs))

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Poly(self.field, (0,) * k + self.coeffs)

    def __pow__(self, e: int) -> "Poly":
        result = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        return divrem(self, other)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divrem(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divrem(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead))

    def derivative(self) -> "Poly":
        F = self.field
        return Poly(F, (F.mul(F.from_int(i), self.coeffs[i]) for i in range(1, len(self.coeffs))))

    # -- evaluation ---------------------------------------------------------

    def __call__(self, a: int) -> int:
        return poly_eval(self, a)

    def eval_many(self, xs) -> np.ndarray:
        """Horner evaluation at every entry of the array ``xs``."""
        F = self.field
        xs = F.asarray(xs)
        acc = np.zeros_like(xs)
        for c in reversed(self.coeffs):
            acc = F.vadd(F.vmul(acc, xs), c)
        return acc


def divrem(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Return ``(q, r)`` with ``a = q*b + r`` and ``deg r < deg b``."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    F = a.field
    r = list(a.coeffs)
    db = b.degree
    if len(r) - 1 < db:
        return Poly(F), a
    inv_lead = F.inv(b.lead)
    q = [0] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c == 0:
            continue
        t = F.mul(c, inv_lead)
        q[i - db] = t
        for j, bj in enumerate(b.coeffs):
            if bj:
                r[i - db + j] = F.sub(r[i - db + j], F.mul(t, bj))
    return Poly(F, q), Poly(F, r[:db])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, divrem(a, b)[1]
    return a.monic()


def from_roots(field: GF, roots: Sequence[int]) -> Poly:
    """Monic polynomial prod (x - r) over the multiset of roots."""
    out = np.zeros(len(roots) + 1, dtype=np.int64)
    out[0] = 1
    for k, r in enumerate(roots):
        # multiply the degree-k prefix by (x - r)
        low = field.vmul(out[: k + 1], field.neg(int(r)))
        out[1 : k + 2] = field.vadd(out[: k + 1], np.r_[low[1:], 0])
        out[0] = low[0]
    return Poly(field, out)


def poly_eval(f: Poly, a: int) -> int:
    F = f.field
    acc = 0
    for c in reversed(f.coeffs):
        acc = F.add(F.mul(acc, a), c)
    return acc


def is_squarefree(f: Poly) -> bool:
    if f.degree <= 0:
        return True
    return poly_gcd(f, f.derivative()).degree == 0
