"""Exact integer linear algebra on the lattices N and M.

Vectors are tuples of Python ints and matrices are tuples of row tuples,
so every computation is arbitrary precision by construction; there is no
floating point anywhere in this package.  All functions are pure and all
values immutable, hence safe for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

Vec = tuple
Mat = tuple


def vec(values: Iterable) -> Vec:
    return tuple(int(x) for x in values)


def mat(rows: Iterable[Iterable]) -> Mat:
    out = tuple(vec(r) for r in rows)
    if len({len(r) for r in out}) > 1:
        raise ValueError("matrix rows have unequal lengths")
    return out


def zero_vec(n: int) -> Vec:
    return (0,) * n


def vec_add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vec_neg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def vec_scale(a: Vec, c: int) -> Vec:
    return tuple(c * x for x in a)


def pairing(p: Sequence[int], m: Sequence[int]) -> int:
    """Duality pairing <p, m> of a vector in N with a vector in M."""
    if len(p) != len(m):
        raise ValueError(f"rank mismatch: {len(p)} vs {len(m)}")
    return sum(a * b for a, b in zip(p, m))


def gcd_vec(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> Vec:
    """Divide a nonzero integer vector by the gcd of its coordinates."""
    v = vec(v)
    g = gcd_vec(v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    return gcd_vec(v) == 1


def identity_matrix(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a: Mat, ncols: Optional[int] = None) -> Mat:
    if not a:
        return tuple(() for _ in range(ncols)) if ncols else ()
    return tuple(zip(*a))


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(pairing(ra, cb) for cb in bt) for ra in a)


def vec_mat(v: Vec, a: Mat) -> Vec:
    """Row vector times matrix."""
    if len(v) != len(a):
        raise ValueError("dimension mismatch in vec_mat")
    return tuple(sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0]) if a else 0))


def det(a: Mat) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def is_unimodular(a: Mat) -> bool:
    """Membership test for GL(n, Z)."""
    a = mat(a)
    if any(len(r) != len(a) for r in a):
        raise ValueError("unimodularity is defined for square matrices only")
    return abs(det(a)) == 1


def hermite_normal_form(a: Mat) -> tuple[Mat, Mat]:
    """Row-style Hermite normal form.

    Returns (H, U) with U unimodular and H = U*A, where H has positive
    pivots on strictly increasing columns, entries above each pivot reduced
    into [0, pivot), and zero rows last.  The convention is fixed so that
    golden outputs stay stable.
    """
    a = mat(a)
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    h = [list(r) for r in a]
    u = [list(r) for r in identity_matrix(nrows)]
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = [r for r in range(row, nrows) if h[r][col] != 0]
        if not nz:
            continue
        # Euclid on the rows at/below `row` until one nonzero entry remains.
        while len(nz) > 1 or nz[0] != row:
            r0 = min(nz, key=lambda r: (abs(h[r][col]), r))
            if r0 != row:
                h[row], h[r0] = h[r0], h[row]
                u[row], u[r0] = u[r0], u[row]
            for r in range(row + 1, nrows):
                if h[r][col] != 0:
                    q = h[r][col] // h[row][col]
                    h[r] = [x - q * y for x, y in zip(h[r], h[row])]
                    u[r] = [x - q * y for x, y in zip(u[r], u[row])]
            nz = [r for r in range(row, nrows) if h[r][col] != 0]
        if h[row][col] < 0:
            h[row] = [-x for x in h[row]]
            u[row] = [-x for x in u[row]]
        p = h[row][col]
        for r in range(row):
            q = h[r][col] // p
            if q:
                h[r] = [x - q * y for x, y in zip(h[r], h[row])]
                u[r] = [x - q * y for x, y in zip(u[r], u[row])]
        row += 1
    return mat(h), mat(u)


def rank_of(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 0
    h, _ = hermite_normal_form(mat(rows))
    return sum(1 for r in h if any(r))


def left_kernel_basis(a: Mat) -> Mat:
    """Basis of the saturated lattice {x : x*A = 0}."""
    a = mat(a)
    if not a:
        return ()
    h, u = hermite_normal_form(a)
    return tuple(u[i] for i in range(len(a)) if not any(h[i]))


def right_kernel_basis(rows: Sequence[Sequence[int]], n: int) -> Mat:
    """Basis of the saturated lattice of x in Z^n orthogonal to every row."""
    rows = mat(rows)
    if not rows:
        return identity_matrix(n)
    if any(len(r) != n for r in rows):
        raise ValueError("row length does not match ambient rank")
    return left_kernel_basis(transpose(rows, n))


def span_saturation_basis(rows: Sequence[Sequence[int]], n: int) -> Mat:
    """Basis of span(rows) intersected with Z^n (a saturated sublattice)."""
    orth = right_kernel_basis(rows, n)
    return right_kernel_basis(orth, n)


def sublattice_direct_sum(bases: Sequence[Sequence[Sequence[int]]], n: int) -> bool:
    """Do the concatenated basis vectors form a basis of Z^n?

    Counts off by the wrong total are reported as False, not an error.
    """
    stacked = []
    for b in bases:
        for v in b:
            if len(v) != n:
                raise ValueError("basis vector of wrong rank")
            stacked.append(vec(v))
    if len(stacked) != n:
        return False
    return abs(det(mat(stacked))) == 1


def solve_left(a: Mat, b: Mat) -> Optional[Mat]:
    """Solve A*X = B exactly over the rationals; None if A is singular.

    A must be square; the result is a matrix of Fractions.
    """
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("solve_left needs a square matrix")
    width = len(b[0]) if b else 0
    if len(b) != n:
        raise ValueError("right-hand side has wrong height")
    aug = [[Fraction(x) for x in list(a[i]) + list(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(aug[i][n:]) for i in range(n))


def mat_is_integral(a) -> bool:
    return all(Fraction(x).denominator == 1 for r in a for x in r)


def mat_to_int(a) -> Mat:
    return tuple(tuple(int(x) for x in r) for r in a)


def invert_unimodular(u: Mat) -> Mat:
    inv = solve_left(u, identity_matrix(len(u)))
    if inv is None or not mat_is_integral(inv):
        raise ValueError("matrix is not unimodular")
    return mat_to_int(inv)


def minors_gcd(rows: Mat, k: int) -> int:
    """gcd of all k x k minors (0 if there are none or all vanish)."""
    rows = mat(rows)
    if k == 0:
        return 1
    g = 0
    n = len(rows[0]) if rows else 0
    for ri in combinations(range(len(rows)), k):
        for ci in combinations(range(n), k):
            sub = tuple(tuple(rows[i][j] for j in ci) for i in ri)
            g = math.gcd(g, det(sub))
            if g == 1:
                return 1
    return g


def extends_to_lattice_basis(rows: Sequence[Sequence[int]], n: int) -> bool:
    """Can the given independent vectors be completed to a basis of Z^n?"""
    rows = mat(rows)
    if not rows:
        return True
    k = len(rows)
    if rank_of(rows) != k:
        return False
    return minors_gcd(rows, k) == 1


def complete_to_unimodular(rows: Mat, n: int) -> Mat:
    """Extend a basis of a saturated sublattice to an n x n unimodular matrix.

    The given rows come first.  Raises if the rows do not generate a
    saturated sublattice of full row rank.
    """
    rows = mat(rows)
    d = len(rows)
    if d == 0:
        return identity_matrix(n)
    if any(len(r) != n for r in rows):
        raise ValueError("wrong ambient rank")
    h, u = hermite_normal_form(transpose(rows, n))
    if sum(1 for r in h if any(r)) != d:
        raise ValueError("rows are not linearly independent")
    v = invert_unimodular(transpose(u))
    t = tuple(tuple(h[i][j] for j in range(d)) for i in range(d))
    if abs(det(t)) != 1:
        raise ValueError("rows do not generate a saturated sublattice")
    top = mat_mul(transpose(t), tuple(v[i] for i in range(d)))
    assert top == rows
    return top + tuple(v[i] for i in range(d, n))
