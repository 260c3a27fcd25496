"""Small dense matrices over a :class:`RingSpec`, with unit-pivot elimination.

Matrices are lists of rows of :class:`RingElem`.  Every matrix that gets
inverted or reduced here is congruent modulo the nilradical to a triangular
matrix with unit diagonal, so the diagonal pivot is always a unit and no
pivot search is done: a non-unit pivot is reported as an error.
"""

from __future__ import annotations

from typing import List, Sequence

from .nilring import NotUnitError, RingElem, RingSpec, invert_unit

Matrix = List[List[RingElem]]


class PivotError(NotUnitError):
    """A diagonal pivot was not a unit."""


def zeros(ring: RingSpec, rows: int, cols: int) -> Matrix:
    z = ring.zero
    return [[z] * cols for _ in range(rows)]


def identity(ring: RingSpec, n: int) -> Matrix:
    m = zeros(ring, n, n)
    for i in range(n):
        m[i][i] = ring.one
    return m


def mat_mul(a: Sequence[Sequence[RingElem]], b: Sequence[Sequence[RingElem]], ring: RingSpec) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError("matrix shapes do not match")
    cols = len(b[0]) if b else 0
    zero = ring.zero
    # row-sparse products: skip zero entries of a
    out = []
    for row in a:
        acc = [zero] * cols
        for l, x in enumerate(row):
            if not x:
                continue
            brow = b[l]
            for k in range(cols):
                y = brow[k]
                if y:
                    acc[k] = acc[k] + x * y
        out.append(acc)
    return out


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_inverse(a: Sequence[Sequence[RingElem]], ring: RingSpec) -> Matrix:
    """Gauss-Jordan inverse with diagonal unit pivots."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("only square matrices can be inverted")
    m = [list(r) for r in a]
    inv = identity(ring, n)
    for p in range(n):
        piv = m[p][p]
        if not piv.is_unit():
            raise PivotError(f"pivot {p} is not a unit: {piv}")
        ip = invert_unit(piv)
        if ip != 1:
            m[p] = [x * ip if x else x for x in m[p]]
            inv[p] = [x * ip if x else x for x in inv[p]]
        prow, pinv = m[p], inv[p]
        for r in range(n):
            if r == p:
                continue
            f = m[r][p]
            if not f:
                continue
            row, irow = m[r], inv[r]
            for k in range(n):
                if prow[k]:
                    row[k] = row[k] - f * prow[k]
                if pinv[k]:
                    irow[k] = irow[k] - f * pinv[k]
    return inv


def mat_det(a: Sequence[Sequence[RingElem]], ring: RingSpec) -> RingElem:
    """Determinant by elimination with diagonal unit pivots (empty -> 1)."""
    n = len(a)
    m = [list(r) for r in a]
    det = ring.one
    for p in range(n):
        piv = m[p][p]
        if not piv.is_unit():
            raise PivotError(f"pivot {p} is not a unit: {piv}")
        det = det * piv
        ip = invert_unit(piv)
        prow = m[p]
        for r in range(p + 1, n):
            f = m[r][p]
            if not f:
                continue
            f = f * ip
            row = m[r]
            for k in range(p, n):
                if prow[k]:
                    row[k] = row[k] - f * prow[k]
    return det


def is_identity_block(m: Matrix, rows: range, cols: range) -> bool:
    for j in rows:
        for k in cols:
            x = m[j][k]
            if j == k:
                if x != 1:
                    return False
            elif x:
                return False
    return True


def minor(m: Matrix, n: int) -> Matrix:
    return [row[:n] for row in m[:n]]


def format_matrix(m: Matrix) -> str:
    cells = [[str(x) for x in row] for row in m]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("[" + ", ".join(c.rjust(width) for c in row) + "]" for row in cells)
