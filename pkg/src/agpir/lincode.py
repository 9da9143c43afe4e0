"""Linear codes from function evaluations and their security-relevant invariants."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .curve import ResourceGuardError
from .field import GF
from .funcspace import FunctionElement, PoleError, evaluation_matrix

MIN_DISTANCE_GUARD = 2**26
SUBSET_GUARD = 2**24
DFS_NODE_GUARD = 2**22


class RankDeficiencyError(ValueError):
    pass


@dataclass
class LinearCode:
    """A k x n generator matrix over F_q with full row rank.

    ``points`` records the ordered evaluation points that produced the columns,
    when the code came from function evaluations.
    """

    field: GF
    generator: np.ndarray
    points: tuple = dc_field(default=())

    def __post_init__(self) -> None:
        self.generator = self.field.asarray(self.generator)
        if self.generator.ndim != 2:
            raise ValueError("generator must be a 2-d matrix")
        self.points = tuple(self.points)

    @classmethod
    def from_rows(cls, field: GF, rows, points: Sequence = ()) -> "LinearCode":
        """Code spanned by ``rows`` (which may be dependent)."""
        rows = field.asarray(rows)
        return cls(field, linalg.row_basis(field, rows), points)

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    def __repr__(self) -> str:
        return f"LinearCode([{self.n}, {self.k}] over {self.field!r})"

    def encode(self, message) -> np.ndarray:
        return self.field.matmul(self.field.asarray(message), self.generator)

    def project(self, coords: Sequence[int]) -> np.ndarray:
        return self.generator[:, list(coords)]

    def dual(self) -> "LinearCode":
        return LinearCode(self.field, linalg.nullspace(self.field, self.generator), self.points)

    def contains(self, other: "LinearCode") -> bool:
        return linalg.in_row_space(self.field, self.generator, other.generator)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearCode):
            return NotImplemented
        return (
            self.field == other.field
            and self.n == other.n
            and self.k == other.k
            and linalg.same_row_space(self.field, self.generator, other.generator)
        )


def code_from_functions(functions: Sequence[FunctionElement], points: Sequence, field: GF | None = None) -> LinearCode:
    """Evaluation code: row i is the evaluation of ``functions[i]`` at ``points``."""
    if not functions and field is None:
        raise ValueError("field is required for an empty function list")
    F = field if field is not None else functions[0].field
    try:
        G = evaluation_matrix(functions, points)
    except PoleError as exc:
        raise PoleError(f"cannot build code: {exc}") from None
    r = linalg.rank(F, G) if G.size else 0
    if r < len(functions):
        raise RankDeficiencyError(f"evaluation rows have rank {r} < {len(functions)} functions")
    return LinearCode(F, G, tuple(points))


def repetition_code(field: GF, n: int) -> LinearCode:
    return LinearCode(field, np.ones((1, n), dtype=np.int64))


def grs_code(field: GF, alphas: Sequence[int], k: int, nu: Sequence[int] | None = None) -> LinearCode:
    """GRS_k(alpha, nu) via an explicit (scaled) Vandermonde matrix."""
    alphas = field.asarray(alphas)
    rows = [np.ones_like(alphas)]
    for _ in range(1, k):
        rows.append(field.vmul(rows[-1], alphas))
    G = np.vstack(rows[:k]) if k else np.zeros((0, alphas.size), dtype=np.int64)
    if nu is not None:
        G = field.vmul(G, field.asarray(nu)[None, :])
    return LinearCode(field, G, tuple(int(a) for a in alphas))


# -- minimum distance ---------------------------------------------------------

_SPAN_CHUNK = 1 << 18


def _span(F: GF, rows: np.ndarray) -> np.ndarray:
    n = rows.shape[1]
    S = np.zeros((1, n), dtype=np.int64)
    scalars = np.arange(F.q, dtype=np.int64)[:, None]
    for r in rows:
        mults = F.vmul(scalars, r[None, :])
        S = F.vadd(S[None, :, :], mults[:, None, :]).reshape(-1, n)
    return S


def _min_weight_coset(F: GF, base: np.ndarray, rows: np.ndarray) -> int:
    if F.q ** len(rows) <= _SPAN_CHUNK:
        words = F.vadd(_span(F, rows), base[None, :])
        return int(np.count_nonzero(words, axis=1).min())
    best = base.size
    for c in range(F.q):
        shifted = F.vadd(base, F.vmul(c, rows[0]))
        best = min(best, _min_weight_coset(F, shifted, rows[1:]))
    return best


def min_distance(code: LinearCode) -> int:
    """Exact minimum distance by enumerating codewords up to scaling."""
    F, G = code.field, code.generator
    if code.k == 0:
        raise ValueError("minimum distance of the zero code is undefined")
    if F.q**code.k > MIN_DISTANCE_GUARD:
        raise ResourceGuardError(f"q^k = {F.q}^{code.k} exceeds the enumeration guard {MIN_DISTANCE_GUARD}")
    # every nonzero codeword is a scalar multiple of one whose leading coefficient is 1
    return min(_min_weight_coset(F, G[i], G[i + 1 :]) for i in range(code.k))


# -- column-subset search -------------------------------------------------------


def _eliminate(F: GF, R: np.ndarray, j: int) -> np.ndarray:
    """Reduce the columns after j modulo the (nonzero) column j."""
    v = R[:, j]
    r = int(np.nonzero(v)[0][0])
    rest = R[:, j + 1 :]
    coef = F.vmul(rest[r], F.inv(int(v[r])))
    return F.vsub(rest, F.vmul(v[:, None], coef[None, :]))


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise ResourceGuardError(f"subset search exceeded {self.limit} nodes")


def _count_independent(F: GF, R: np.ndarray, depth: int, budget: _Budget) -> int:
    """Number of ``depth``-subsets of columns of R that are linearly independent
    modulo the span already factored out of R."""
    if depth == 0:
        return 1
    nonzero = np.flatnonzero(R.any(axis=0))
    if depth == 1:
        return int(nonzero.size)
    total = 0
    for j in nonzero:
        if R.shape[1] - j - 1 < depth - 1:
            break
        budget.tick()
        total += _count_independent(F, _eliminate(F, R, int(j)), depth - 1, budget)
    return total


def _count_branch(args) -> int:
    F, R, j, depth = args
    return _count_independent(F, _eliminate(F, R, j), depth - 1, _Budget(DFS_NODE_GUARD))


def count_independent_subsets(code: LinearCode, size: int, n_jobs: int = 1) -> int:
    """Number of column subsets of the given size with full rank ``size``."""
    F, R = code.field, code.generator
    if size > code.k:
        return 0
    if size <= 1 or n_jobs <= 1:
        return _count_independent(F, R, size, _Budget(DFS_NODE_GUARD))
    starts = [int(j) for j in np.flatnonzero(R.any(axis=0))]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return sum(pool.map(_count_branch, [(F, R, j, size) for j in starts]))


def dual_distance(code: LinearCode, node_budget: int = DFS_NODE_GUARD) -> int:
    """Smallest number of linearly dependent columns of the generator.

    Branch-and-bound over independent column sets in lexicographic order; any
    k+1 columns are dependent, so the answer is at most k+1. A code equal to
    the whole space has no dependent columns; ``n + 1`` is returned then.
    """
    F, G = code.field, code.generator
    n, k = code.n, code.k
    if k == 0:
        return 1
    if not G.any(axis=0).all():
        return 1
    best = k + 1 if n > k else n + 1
    budget = _Budget(node_budget)

    def search(R: np.ndarray, size: int) -> None:
        nonlocal best
        # size = columns already chosen; a zero column in R closes a dependent set
        if R.shape[1] and not R.any(axis=0).all():
            best = min(best, size + 1)
        if size + 2 >= best:
            return
        for j in np.flatnonzero(R.any(axis=0)):
            budget.tick()
            search(_eliminate(F, R, int(j)), size + 1)
            if size + 2 >= best:
                return

    search(G, 0)
    return best


def star_product(c1: LinearCode, c2: LinearCode) -> LinearCode:
    """Span of all coordinatewise products of generator rows."""
    if c1.field != c2.field:
        raise ValueError("codes over different fields")
    if c1.n != c2.n:
        raise ValueError(f"length mismatch: {c1.n} != {c2.n}")
    if c1.points and c2.points and c1.points != c2.points:
        raise ValueError("codes are evaluated at different point lists")
    F = c1.field
    prods = F.vmul(c1.generator[:, None, :], c2.generator[None, :, :]).reshape(-1, c1.n)
    return LinearCode.from_rows(F, prods, c1.points or c2.points)


def information_set(code: LinearCode, size: int | None = None) -> list[int]:
    """Lexicographically first set of ``size`` columns with full rank."""
    size = code.k if size is None else size
    if size > code.n:
        raise ValueError(f"size {size} exceeds length {code.n}")
    F = code.field
    chosen: list[int] = []
    basis: list[tuple[int, np.ndarray]] = []  # (pivot row, normalized column)
    for j in range(code.n):
        if len(chosen) == size:
            break
        v = code.generator[:, j].copy()
        for r, b in basis:
            if v[r]:
                v = F.vsub(v, F.vmul(int(v[r]), b))
        nz = np.flatnonzero(v)
        if nz.size:
            r = int(nz[0])
            basis.append((r, F.vmul(v, F.inv(int(v[r])))))
            chosen.append(j)
    if len(chosen) < size:
        raise RankDeficiencyError(f"no information set of size {size}: column rank is {len(chosen)}")
    return chosen


@dataclass(frozen=True)
class SigmaValue:
    U: int
    insecure: int
    total: int

    @property
    def sigma(self) -> Fraction:
        return Fraction(self.insecure, self.total)

    def csv_row(self) -> str:
        return f"{self.U},{self.insecure},{self.total},{float(self.sigma):.6f}"


SIGMA_CSV_HEADER = "U,insecure,total,sigma"


def sigma_profile(noise_code: LinearCode, U: int, n_jobs: int = 1, check_interval: bool = True) -> SigmaValue:
    """Count U-subsets of coordinates on which the noise code has rank < U.

    The meaningful range is d_perp - 1 <= U <= dim; for U > dim every subset
    is insecure. ``check_interval=False`` skips the lower-end check (useful
    when d_perp itself would be expensive).
    """
    n, k = noise_code.n, noise_code.k
    total = math.comb(n, U)
    if total > SUBSET_GUARD:
        raise ResourceGuardError(f"C({n}, {U}) = {total} exceeds the subset guard {SUBSET_GUARD}")
    if check_interval and U < dual_distance(noise_code) - 1:
        raise ValueError(f"U = {U} is below d_perp - 1; every U-subset is secure")
    if U > k:
        return SigmaValue(U, total, total)
    good = count_independent_subsets(noise_code, U, n_jobs=n_jobs)
    return SigmaValue(U, total - good, total)


def sigma_csv(values: Sequence[SigmaValue]) -> str:
    return SIGMA_CSV_HEADER + "\n" + "".join(v.csv_row() + "\n" for v in values)
