"""Exact linear algebra over the rationals.

Thin helpers around :class:`flint.fmpq_mat`.  Matrices are passed around as
lists of rows of :class:`fractions.Fraction` (or ints); conversion to flint
happens only inside these functions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import flint

Row = Sequence[Fraction | int]


def to_fmpq(x: Fraction | int) -> flint.fmpq:
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    return flint.fmpq(x)


def to_fraction(x: flint.fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def matrix(rows: Sequence[Row], ncols: int | None = None) -> flint.fmpq_mat:
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    entries = [to_fmpq(x) for row in rows for x in row]
    return flint.fmpq_mat(nrows, ncols, entries)


def integer_row(row: Row) -> list[int]:
    """The row scaled by the lcm of its denominators (same span, integer entries)."""
    den = 1
    for x in row:
        if x and isinstance(x, Fraction) and x.denominator != 1:
            den = math.lcm(den, x.denominator)
    if den == 1:
        return [int(x) for x in row]
    return [int(x * den) if x else 0 for x in row]


def rank(rows: Sequence[Row], ncols: int | None = None) -> int:
    """Exact rank; rows are cleared of denominators and ranked over the integers."""
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    if ncols == 0:
        return 0
    return flint.fmpz_mat([integer_row(r) for r in rows]).rank()


def row_basis(rows: Sequence[Row], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon basis of the row space, with pivot columns."""
    if not rows or ncols == 0:
        return [], []
    r, rk = matrix(rows, ncols).rref()
    basis = []
    pivots = []
    for i in range(rk):
        row = [to_fraction(r[i, j]) for j in range(ncols)]
        pivots.append(next(j for j, x in enumerate(row) if x != 0))
        basis.append(row)
    return basis, pivots


def nullspace(rows: Sequence[Row], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}, one vector per free column."""
    if ncols == 0:
        return []
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    basis, pivots = row_basis(rows, ncols)
    free = [j for j in range(ncols) if j not in set(pivots)]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(basis, pivots):
            v[p] = -row[f]
        out.append(v)
    return out


def inverse(rows: Sequence[Row]) -> list[list[Fraction]]:
    m = matrix(rows)
    inv = m.inv()
    n = m.nrows()
    return [[to_fraction(inv[i, j]) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Row], b: Sequence[Row], inner: int | None = None) -> list[list[Fraction]]:
    if not a:
        return []
    if inner is None:
        inner = len(b)
    ncols = len(b[0]) if b else 0
    if inner == 0:
        return [[Fraction(0)] * ncols for _ in a]
    p = matrix(a, inner) * matrix(b, ncols)
    return [[to_fraction(p[i, j]) for j in range(ncols)] for i in range(len(a))]


def coordinates(basis: list[list[Fraction]], pivots: list[int], vector: Row) -> list[Fraction] | None:
    """Coordinates of ``vector`` in an RREF ``basis``; None if not in the span."""
    coords = [Fraction(vector[p]) for p in pivots]
    recon = [Fraction(0)] * len(vector)
    for c, row in zip(coords, basis):
        if c:
            for j, x in enumerate(row):
                if x:
                    recon[j] += c * x
    if any(Fraction(v) != r for v, r in zip(vector, recon)):
        return None
    return coords


def transpose(rows: Sequence[Row], ncols: int) -> list[list[Fraction]]:
    return [[Fraction(rows[i][j]) for i in range(len(rows))] for j in range(ncols)]
