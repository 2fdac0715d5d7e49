"""Exact rational lattices in R^d and the operations built on them.

A lattice is stored by a basis matrix whose *columns* are the generators.
All entries are ``fractions.Fraction``; nothing here touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import BadOrder, DimensionMismatch, InputError, SingularBasis
from .exact import LogReal, as_fraction, format_rational, parse_rational

__all__ = [
    "Lattice",
    "ThetaMatrix",
    "compound",
    "compound_index",
    "det",
    "dual",
    "format_lattice",
    "format_theta",
    "identity_lattice",
    "inverse",
    "make_lattice",
    "mat_mul",
    "parse_lattice",
    "parse_theta",
    "rank_of",
    "theta_lattice",
    "transpose",
]

Matrix = tuple[tuple[Fraction, ...], ...]


# ---------------------------------------------------------------------------
# Rational linear algebra
# ---------------------------------------------------------------------------

def _as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(as_fraction(x) for x in row) for row in rows)


def transpose(a: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*a)) if a else ()


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def _echelon(a: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], int, int]:
    """Gaussian elimination; returns (reduced rows, rank, sign of row swaps)."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rank, sign = 0, 1
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][c] != 0), None)
        if piv is None:
            continue
        if piv != rank:
            m[rank], m[piv] = m[piv], m[rank]
            sign = -sign
        p = m[rank][c]
        for r in range(rank + 1, rows):
            if m[r][c]:
                f = m[r][c] / p
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return m, rank, sign


def det(a: Sequence[Sequence]) -> Fraction:
    a = _as_matrix(a)
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    m, rank, sign = _echelon(a)
    if rank < n:
        return Fraction(0)
    out = Fraction(sign)
    for i in range(n):
        out *= m[i][i]
    return out


def rank_of(vectors: Sequence[Sequence]) -> int:
    """Rank of a family of rational vectors (given as rows)."""
    if not vectors:
        return 0
    return _echelon(_as_matrix(vectors))[1]


def inverse(a: Sequence[Sequence]) -> Matrix:
    a = _as_matrix(a)
    n = len(a)
    m = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise SingularBasis("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Lattice:
    """Full-rank lattice ``basis . Z^d``; generators are the columns of ``basis``.

    When ``normalized`` is set, every log quantity computed for this lattice
    is shifted by ``-(1/d) log covolume``, which is the same as working with
    the covolume-one rescaling of the lattice.
    """

    basis: Matrix
    inv_basis: Matrix
    covolume: Fraction
    normalized: bool = False

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def generators(self) -> Matrix:
        return transpose(self.basis)

    @property
    def log_covolume(self) -> LogReal:
        return LogReal(self.covolume)

    @property
    def log_shift(self) -> LogReal:
        """Additive correction applied to every log minimum."""
        if not self.normalized or self.covolume == 1:
            return LogReal()
        return -self.log_covolume / self.dim

    def point(self, coeffs: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(sum((b * c for b, c in zip(row, coeffs)), Fraction(0)) for row in self.basis)

    def coefficients(self, z: Sequence) -> tuple[Fraction, ...]:
        """Coefficients of ``z`` in the basis; integral iff ``z`` is in the lattice."""
        return tuple(sum((b * as_fraction(c) for b, c in zip(row, z)), Fraction(0)) for row in self.inv_basis)

    def contains(self, z: Sequence) -> bool:
        return all(c.denominator == 1 for c in self.coefficients(z))

    def integer_form(self) -> tuple[int, list[list[int]]]:
        """``(Q, M)`` with ``M = Q * basis`` integral and ``Q`` the least such scale."""
        q = 1
        for row in self.basis:
            for x in row:
                q = math.lcm(q, x.denominator)
        return q, [[int(x * q) for x in row] for row in self.basis]

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.basis == other.basis and self.normalized == other.normalized

    def __hash__(self):
        return hash((self.basis, self.normalized))


def make_lattice(basis: Sequence[Sequence], normalize: bool = False) -> Lattice:
    """Build a lattice from a square rational basis (columns are generators)."""
    b = _as_matrix(basis)
    d = len(b)
    if d == 0 or any(len(row) != d for row in b):
        raise DimensionMismatch("basis must be a non-empty square matrix")
    dt = det(b)
    if dt == 0:
        raise SingularBasis("basis vectors are linearly dependent")
    return Lattice(b, inverse(b), abs(dt), bool(normalize))


def identity_lattice(d: int) -> Lattice:
    return make_lattice([[int(i == j) for j in range(d)] for i in range(d)])


def dual(lattice: Lattice) -> Lattice:
    """Dual lattice, basis ``(B^T)^{-1}``."""
    b = transpose(lattice.inv_basis)
    return Lattice(b, transpose(lattice.basis), 1 / lattice.covolume, lattice.normalized)


@dataclass(frozen=True)
class ThetaMatrix:
    """An ``n x m`` rational matrix (``n`` linear forms in ``m`` variables)."""

    m: int
    n: int
    entries: Matrix

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise DimensionMismatch("Theta needs m, n >= 1")
        if len(self.entries) != self.n or any(len(row) != self.m for row in self.entries):
            raise DimensionMismatch(f"Theta must have {self.n} rows of {self.m} entries")

    @classmethod
    def of(cls, rows: Sequence[Sequence]) -> "ThetaMatrix":
        e = _as_matrix(rows)
        return cls(len(e[0]) if e else 0, len(e), e)

    @property
    def d(self) -> int:
        return self.m + self.n

    def transpose(self) -> "ThetaMatrix":
        return ThetaMatrix(self.n, self.m, transpose(self.entries))

    def reversed_rows(self) -> "ThetaMatrix":
        return ThetaMatrix(self.m, self.n, tuple(reversed(self.entries)))


def theta_lattice(theta: ThetaMatrix) -> Lattice:
    """``Lambda(Theta) = [[I_m, 0], [-Theta, I_n]] Z^d`` (covolume one)."""
    m, n = theta.m, theta.n
    rows = []
    for i in range(m):
        rows.append([int(i == j) for j in range(m + n)])
    for i in range(n):
        rows.append([-x for x in theta.entries[i]] + [int(i == j) for j in range(n)])
    return make_lattice(rows)


def compound_index(d: int, k: int) -> list[tuple[int, ...]]:
    """k-subsets of ``range(d)`` in lexicographic order (coordinate labels of the compound)."""
    if not 1 <= k <= d:
        raise BadOrder(f"compound order must satisfy 1 <= k <= d, got k={k}, d={d}")
    return list(combinations(range(d), k))


def compound(lattice: Lattice, k: int) -> Lattice:
    """k-th exterior power: basis is the matrix of k x k minors, lexicographically indexed."""
    idx = compound_index(lattice.dim, k)
    b = lattice.basis
    rows = [[det([[b[i][j] for j in cols] for i in rows_]) for cols in idx] for rows_ in idx]
    out = make_lattice(rows)
    return Lattice(out.basis, out.inv_basis, out.covolume, False)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

def _data_lines(text: str) -> list[list[str]]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line.replace(",", " ").split())
    return out


def parse_lattice(text: str, normalize: bool = False) -> Lattice:
    """Parse ``d`` on the first line followed by ``d`` rows of the basis matrix."""
    lines = _data_lines(text)
    if not lines:
        raise InputError("empty lattice file")
    try:
        d = int(lines[0][0])
        rows = [[parse_rational(x) for x in line] for line in lines[1:]]
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if len(rows) != d or any(len(r) != d for r in rows):
        raise DimensionMismatch(f"expected {d} rows of {d} entries")
    return make_lattice(rows, normalize)


def format_lattice(lattice: Lattice) -> str:
    lines = [str(lattice.dim)]
    lines += [" ".join(format_rational(x) for x in row) for row in lattice.basis]
    return "\n".join(lines) + "\n"


def parse_theta(text: str) -> ThetaMatrix:
    """Parse ``m n`` on the first line followed by ``n`` rows of ``m`` entries."""
    lines = _data_lines(text)
    if not lines or len(lines[0]) != 2:
        raise InputError("theta file must start with 'm n'")
    try:
        m, n = int(lines[0][0]), int(lines[0][1])
        rows = [[parse_rational(x) for x in line] for line in lines[1:]]
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return ThetaMatrix(m, n, tuple(tuple(r) for r in rows))


def format_theta(theta: ThetaMatrix) -> str:
    lines = [f"{theta.m} {theta.n}"]
    lines += [" ".join(format_rational(x) for x in row) for row in theta.entries]
    return "\n".join(lines) + "\n"
