"""Thin helpers around flint's exact rational matrices.

Vectors are column matrices; subspaces are represented by a matrix whose
columns form a basis.
"""

from __future__ import annotations

import random
from typing import Sequence

from flint import fmpq, fmpq_mat

Mat = fmpq_mat


def zeros(r: int, c: int) -> fmpq_mat:
    return fmpq_mat(r, c)


def identity(n: int) -> fmpq_mat:
    M = fmpq_mat(n, n)
    for i in range(n):
        M[i, i] = 1
    return M


def from_rows(rows: Sequence[Sequence], ncols: int | None = None) -> fmpq_mat:
    r = len(rows)
    c = len(rows[0]) if rows else (ncols or 0)
    if ncols is not None:
        c = ncols
    return fmpq_mat(r, c, [fmpq(x) if not isinstance(x, fmpq) else x for row in rows for x in row])


def from_columns(cols: Sequence[Sequence], nrows: int) -> fmpq_mat:
    M = fmpq_mat(nrows, len(cols))
    for j, col in enumerate(cols):
        for i, x in enumerate(col):
            if x:
                M[i, j] = x
    return M


def shape(M: fmpq_mat) -> tuple:
    return M.nrows(), M.ncols()


def is_zero(M: fmpq_mat) -> bool:
    return all(x == 0 for x in M.entries())


def rank(M: fmpq_mat) -> int:
    if M.nrows() == 0 or M.ncols() == 0:
        return 0
    return M.rank()


def rref(M: fmpq_mat):
    """Reduced row echelon form and pivot column list."""
    if M.nrows() == 0 or M.ncols() == 0:
        return fmpq_mat(M.nrows(), M.ncols()), []
    R, rk = M.rref()
    pivots = []
    c = 0
    for i in range(rk):
        while R[i, c] == 0:
            c += 1
        pivots.append(c)
        c += 1
    return R, pivots


def kernel(M: fmpq_mat) -> fmpq_mat:
    """Columns form a basis of {x : M x = 0}."""
    n = M.ncols()
    R, pivots = rref(M)
    free = [j for j in range(n) if j not in set(pivots)]
    K = fmpq_mat(n, len(free))
    for col, f in enumerate(free):
        K[f, col] = 1
        for i, p in enumerate(pivots):
            K[p, col] = -R[i, f]
    return K


def image(M: fmpq_mat) -> fmpq_mat:
    """Columns of M at pivot positions: a basis of the column space."""
    _, pivots = rref(M)
    return select_columns(M, pivots)


def select_columns(M: fmpq_mat, cols: Sequence[int]) -> fmpq_mat:
    out = fmpq_mat(M.nrows(), len(cols))
    for j, c in enumerate(cols):
        for i in range(M.nrows()):
            out[i, j] = M[i, c]
    return out


def select_rows(M: fmpq_mat, rows: Sequence[int]) -> fmpq_mat:
    out = fmpq_mat(len(rows), M.ncols())
    for i, r in enumerate(rows):
        for j in range(M.ncols()):
            out[i, j] = M[r, j]
    return out


def hstack(mats: Sequence[fmpq_mat], nrows: int | None = None) -> fmpq_mat:
    mats = list(mats)
    if not mats:
        return fmpq_mat(nrows or 0, 0)
    r = mats[0].nrows()
    out = fmpq_mat(r, sum(m.ncols() for m in mats))
    c0 = 0
    for m in mats:
        if m.nrows() != r:
            raise ValueError("hstack row mismatch")
        for i in range(r):
            for j in range(m.ncols()):
                x = m[i, j]
                if x:
                    out[i, c0 + j] = x
        c0 += m.ncols()
    return out


def vstack(mats: Sequence[fmpq_mat], ncols: int | None = None) -> fmpq_mat:
    mats = list(mats)
    if not mats:
        return fmpq_mat(0, ncols or 0)
    c = mats[0].ncols()
    out = fmpq_mat(sum(m.nrows() for m in mats), c)
    r0 = 0
    for m in mats:
        if m.ncols() != c:
            raise ValueError("vstack column mismatch")
        for i in range(m.nrows()):
            for j in range(c):
                x = m[i, j]
                if x:
                    out[r0 + i, j] = x
        r0 += m.nrows()
    return out


def block(rows: Sequence[Sequence[fmpq_mat]]) -> fmpq_mat:
    return vstack([hstack(r) for r in rows])


def block_diag(mats: Sequence[fmpq_mat]) -> fmpq_mat:
    R = sum(m.nrows() for m in mats)
    C = sum(m.ncols() for m in mats)
    out = fmpq_mat(R, C)
    r0 = c0 = 0
    for m in mats:
        for i in range(m.nrows()):
            for j in range(m.ncols()):
                x = m[i, j]
                if x:
                    out[r0 + i, c0 + j] = x
        r0 += m.nrows()
        c0 += m.ncols()
    return out


def set_block(target: fmpq_mat, r0: int, c0: int, m: fmpq_mat) -> None:
    for i in range(m.nrows()):
        for j in range(m.ncols()):
            target[r0 + i, c0 + j] = m[i, j]


def get_block(M: fmpq_mat, r0: int, r1: int, c0: int, c1: int) -> fmpq_mat:
    out = fmpq_mat(r1 - r0, c1 - c0)
    for i in range(r0, r1):
        for j in range(c0, c1):
            out[i - r0, j - c0] = M[i, j]
    return out


def kron(A: fmpq_mat, B: fmpq_mat) -> fmpq_mat:
    ra, ca, rb, cb = A.nrows(), A.ncols(), B.nrows(), B.ncols()
    out = fmpq_mat(ra * rb, ca * cb)
    bent = [(i, j, B[i, j]) for i in range(rb) for j in range(cb) if B[i, j] != 0]
    for i in range(ra):
        for j in range(ca):
            a = A[i, j]
            if a != 0:
                for k, l, b in bent:
                    out[i * rb + k, j * cb + l] = a * b
    return out


def mul(A: fmpq_mat, B: fmpq_mat) -> fmpq_mat:
    if A.ncols() != B.nrows():
        raise ValueError("shape mismatch %s x %s" % (shape(A), shape(B)))
    if A.ncols() == 0:
        return fmpq_mat(A.nrows(), B.ncols())
    return A * B


def complement(basis: fmpq_mat, rng: random.Random | None = None) -> fmpq_mat:
    """Columns completing the independent columns of basis to a basis of the ambient space.

    With rng given, the complement is a random one (random vectors added greedily),
    otherwise standard unit vectors are used.
    """
    n = basis.nrows()
    cur = basis
    r = rank(cur)
    added = []
    if rng is None:
        candidates = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    else:
        candidates = []
    idx = 0
    while r < n:
        if rng is None:
            v = candidates[idx]
            idx += 1
        else:
            v = [rng.randint(-3, 3) for _ in range(n)]
        col = from_columns([v], n)
        test = hstack([cur, col]) if cur.ncols() else col
        rr = rank(test)
        if rr > r:
            cur, r = test, rr
            added.append(v)
    return from_columns(added, n)


def solve_in_basis(basis: fmpq_mat, vecs: fmpq_mat) -> fmpq_mat:
    """Coordinates X with basis * X = vecs; basis must have independent columns."""
    k = basis.ncols()
    if vecs.ncols() == 0:
        return fmpq_mat(k, 0)
    if k == 0:
        if not is_zero(vecs):
            raise ValueError("vector not in the zero subspace")
        return fmpq_mat(0, vecs.ncols())
    aug = hstack([basis, vecs])
    R, pivots = rref(aug)
    if any(p >= k for p in pivots):
        raise ValueError("vectors not in the span of the basis")
    if pivots != list(range(k)):
        raise ValueError("basis columns are dependent")
    return get_block(R, 0, k, k, k + vecs.ncols())


def inverse(M: fmpq_mat) -> fmpq_mat:
    if M.nrows() == 0:
        return fmpq_mat(0, 0)
    return M.inv()


def random_combination(basis: fmpq_mat, rng: random.Random, lo: int = -5, hi: int = 5) -> fmpq_mat:
    coeffs = from_columns([[rng.randint(lo, hi) for _ in range(basis.ncols())]], basis.ncols())
    return mul(basis, coeffs)


def to_str_rows(M: fmpq_mat) -> list:
    return [" ".join(str(M[i, j]) for j in range(M.ncols())) for i in range(M.nrows())]
