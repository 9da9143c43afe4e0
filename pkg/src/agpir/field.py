"""Finite fields F_p and F_{2^m}.

Elements are plain Python ints holding the canonical representative: the
residue for prime fields, and the coefficient bit-vector of the residue
polynomial for binary extension fields (bit i is the coefficient of x^i).
Scalar methods take and return ints; the ``v*`` methods are the numpy
equivalents used by the linear-algebra kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

MAX_ORDER = 2**20


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _gf2_polymod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _gf2_irreducible(modulus: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2 over F_2."""
    deg = modulus.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in range(1 << d):
            if _gf2_polymod(modulus, (1 << d) | low) == 0:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Configuration of F_q, q = p^m.

    ``modulus`` is the coefficient list (low degree first) of a degree-m
    irreducible polynomial over F_p; required iff m > 1.
    """

    p: int
    m: int = 1
    modulus: tuple[int, ...] | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "FieldSpec":
        mod = d.get("modulus")
        return cls(int(d["p"]), int(d.get("m", 1)), tuple(int(c) for c in mod) if mod is not None else None)

    def to_dict(self) -> dict:
        out: dict = {"p": self.p, "m": self.m}
        if self.modulus is not None:
            out["modulus"] = list(self.modulus)
        return out


class GF:
    """Handle for the field F_q. Immutable after construction."""

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if m < 1:
            raise FieldError("extension degree must be positive")
        if p**m > MAX_ORDER:
            raise FieldError(f"field order {p}^{m} exceeds supported maximum {MAX_ORDER}")
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus: tuple[int, ...] | None = None
        self._mod_bits = 0
        if m > 1:
            if p != 2:
                raise FieldError("extension fields are only supported in characteristic 2")
            if modulus is None:
                raise FieldError("an explicit modulus polynomial is required for m > 1")
            coeffs = [int(c) % 2 for c in modulus]
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
            if len(coeffs) - 1 != m:
                raise FieldError(f"modulus must have degree {m}, got {len(coeffs) - 1}")
            bits = sum(c << i for i, c in enumerate(coeffs))
            if not _gf2_irreducible(bits):
                raise FieldError("modulus polynomial is reducible")
            self.modulus = tuple(coeffs)
            self._mod_bits = bits
        elif modulus is not None and len(modulus) > 1:
            raise FieldError("a modulus is only meaningful for extension fields")

    @classmethod
    def from_spec(cls, spec: FieldSpec) -> "GF":
        return cls(spec.p, spec.m, spec.modulus)

    @property
    def spec(self) -> FieldSpec:
        return FieldSpec(self.p, self.m, self.modulus)

    @property
    def is_binary(self) -> bool:
        return self.m > 1

    def __repr__(self) -> str:
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF(2^{self.m}, modulus={list(self.modulus)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF) and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __len__(self) -> int:
        return self.q

    def elements(self) -> Iterator[int]:
        """All elements in canonical order 0, 1, ..., q-1."""
        return iter(range(self.q))

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not a canonical element of {self!r}")
        return a

    # -- scalar arithmetic ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m > 1:
            return a ^ b
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        if self.m > 1:
            return a ^ b
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        if self.m > 1:
            return a
        return -a % self.p

    def mul(self, a: int, b: int) -> int:
        if self.m > 1:
            return _gf2_polymod(_clmul(a, b), self._mod_bits)
        return a * b % self.p

    def inv(self, a: int) -> int:
        """Inverse via the extended Euclidean algorithm."""
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            r0, r1, s0, s1 = self.p, a % self.p, 0, 1
            while r1:
                qt = r0 // r1
                r0, r1 = r1, r0 - qt * r1
                s0, s1 = s1, s0 - qt * s1
            return s0 % self.p
        # polynomial extended Euclid over F_2
        r0, r1, s0, s1 = self._mod_bits, a, 0, 1
        while r1:
            shift = r0.bit_length() - r1.bit_length()
            if shift < 0:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            r0 ^= r1 << shift
            s0 ^= s1 << shift
            if r0.bit_length() < r1.bit_length():
                r0, r1, s0, s1 = r1, r0, s1, s0
        return _gf2_polymod(s0, self._mod_bits)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_q."""
        return n % self.p

    # -- tables for vectorized arithmetic ---------------------------------

    @cached_property
    def generator(self) -> int:
        """Smallest primitive element."""
        if self.q == 2:
            return 1
        factors = _prime_factors(self.q - 1)
        for g in range(2, self.q):
            if all(self.pow(g, (self.q - 1) // r) != 1 for r in factors):
                return g
        raise FieldError("no primitive element found")  # pragma: no cover

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        # log(0) points into a zero-padded tail of exp, so products with 0 vanish
        exp = np.zeros(4 * self.q + 1, dtype=np.int64)
        log = np.full(self.q, 2 * self.q, dtype=np.int64)
        g = self.generator
        x = 1
        for i in range(self.q - 1):
            exp[i] = x
            log[x] = i
            x = self.mul(x, g)
        exp[self.q - 1 : 2 * self.q - 2] = exp[: self.q - 1]
        return exp, log

    # -- vectorized arithmetic --------------------------------------------

    def asarray(self, a) -> np.ndarray:
        return np.asarray(a, dtype=np.int64)

    def vadd(self, a, b) -> np.ndarray:
        a, b = self.asarray(a), self.asarray(b)
        if self.m > 1:
            return a ^ b
        return (a + b) % self.p

    def vsub(self, a, b) -> np.ndarray:
        a, b = self.asarray(a), self.asarray(b)
        if self.m > 1:
            return a ^ b
        return (a - b) % self.p

    def vneg(self, a) -> np.ndarray:
        a = self.asarray(a)
        if self.m > 1:
            return a.copy()
        return -a % self.p

    def vmul(self, a, b) -> np.ndarray:
        a, b = self.asarray(a), self.asarray(b)
        if self.m == 1:
            return a * b % self.p
        exp, log = self._tables
        return exp[log[a] + log[b]]

    def vinv(self, a) -> np.ndarray:
        a = self.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        exp, log = self._tables
        return exp[(self.q - 1 - log[a]) % (self.q - 1)]

    def vsum(self, a, axis: int = 0) -> np.ndarray:
        a = self.asarray(a)
        if self.m > 1:
            return np.bitwise_xor.reduce(a, axis=axis)
        return a.sum(axis=axis) % self.p

    def matmul(self, a, b) -> np.ndarray:
        """Matrix product over F_q."""
        a, b = self.asarray(a), self.asarray(b)
        if self.m == 1:
            # entries < 2^20, so chunks of 2^20 products cannot overflow int64
            k = a.shape[-1]
            if k <= 1 << 20:
                return (a @ b) % self.p
        if a.ndim == 1:
            return self.matmul(a[None, :], b)[0]
        out = np.zeros((a.shape[0],) + b.shape[1:], dtype=np.int64)
        for i in range(a.shape[1]):
            out = self.vadd(out, self.vmul(a[:, i, None], b[i][None, ...]))
        return out

    def random(self, rng: np.random.Generator, size=None) -> np.ndarray:
        return rng.integers(0, self.q, size=size, dtype=np.int64)

    # -- display ------------------------------------------------------------

    def pretty(self, a: int, symbol: str = "α") -> str:
        """Render an element as a polynomial in the generator symbol."""
        if self.m == 1:
            return str(a)
        if a == 0:
            return "0"
        terms = []
        for i in reversed(range(self.m)):
            if a >> i & 1:
                terms.append("1" if i == 0 else symbol if i == 1 else f"{symbol}^{i}")
        return "+".join(terms)


def make_field(spec: FieldSpec | dict) -> GF:
    if isinstance(spec, dict):
        spec = FieldSpec.from_dict(spec)
    return GF.from_spec(spec)

