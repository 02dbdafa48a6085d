"""Exact rank and nullspace computations over the supported fields.

Rank is the hot path (it is called repeatedly while locating the minimal
degree of a derivation), so it clears denominators row by row and runs
fraction-free (Bareiss) elimination on integer data: plain machine-assisted
big integers for the rationals, integer pairs for quadratic extensions, and
residues for prime fields.  Nullspace bases are only needed once a degree is
pinned down, so they use straightforward exact Gauss-Jordan over the field.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Sequence

from .errors import InternalInconsistency
from .field import FieldSpec, ModInt, QuadElem, Scalar


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _clear_row_rational(row) -> List[int]:
    den = 1
    for c in row:
        den = _lcm(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in row]


def _clear_row_quadratic(row) -> List[tuple]:
    den = 1
    for c in row:
        den = _lcm(den, _lcm(c.a.denominator, c.b.denominator))
    out = []
    for c in row:
        a = c.a.numerator * (den // c.a.denominator)
        b = c.b.numerator * (den // c.b.denominator)
        out.append((a, b))
    return out


def _rank_bareiss_int(mat: List[List[int]], ncols: int) -> int:
    prev = 1
    r = 0
    nrows = len(mat)
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pr = mat[r]
        for i in range(r + 1, nrows):
            ri = mat[i]
            if ri[c]:
                f = ri[c]
                for k in range(c + 1, ncols):
                    ri[k] = (pr[c] * ri[k] - f * pr[k]) // prev
                ri[c] = 0
            else:
                # Sylvester identity with a zero pivot entry still rescales
                for k in range(c + 1, ncols):
                    ri[k] = pr[c] * ri[k] // prev
        prev = pr[c]
        r += 1
    return r


def _qmul(u: tuple, v: tuple, d: int) -> tuple:
    return (u[0] * v[0] + d * u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _qdivexact(u: tuple, v: tuple, d: int) -> tuple:
    n = v[0] * v[0] - d * v[1] * v[1]
    a = u[0] * v[0] - d * u[1] * v[1]
    b = u[1] * v[0] - u[0] * v[1]
    if a % n or b % n:
        raise InternalInconsistency("fraction-free elimination lost exactness")
    return (a // n, b // n)


def _rank_bareiss_quadratic(mat: List[List[tuple]], ncols: int, d: int) -> int:
    prev = (1, 0)
    r = 0
    nrows = len(mat)
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if mat[i][c] != (0, 0):
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pr = mat[r]
        for i in range(r + 1, nrows):
            ri = mat[i]
            f = ri[c]
            if f != (0, 0):
                for k in range(c + 1, ncols):
                    t1 = _qmul(pr[c], ri[k], d)
                    t2 = _qmul(f, pr[k], d)
                    ri[k] = _qdivexact((t1[0] - t2[0], t1[1] - t2[1]), prev, d)
                ri[c] = (0, 0)
            else:
                for k in range(c + 1, ncols):
                    ri[k] = _qdivexact(_qmul(pr[c], ri[k], d), prev, d)
        prev = pr[c]
        r += 1
    return r


def _rank_modp(mat: List[List[int]], ncols: int, p: int) -> int:
    r = 0
    nrows = len(mat)
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if mat[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][c], -1, p)
        pr = [v * inv % p for v in mat[r]]
        mat[r] = pr
        for i in range(r + 1, nrows):
            f = mat[i][c] % p
            if f:
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], pr)]
        r += 1
    return r


def rank(rows: Sequence[Sequence[Scalar]], fs: FieldSpec, ncols: int) -> int:
    """Rank of the row list, exactly, over the given field."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    if fs.kind == "rational":
        mat = [_clear_row_rational(r) for r in rows]
        return _rank_bareiss_int(mat, ncols)
    if fs.kind == "quadratic":
        mat = [_clear_row_quadratic(r) for r in rows]
        return _rank_bareiss_quadratic(mat, ncols, fs.d)
    mat = [[c.v for c in r] for r in rows]
    return _rank_modp(mat, ncols, fs.p)


def _echelon_int(mat: List[List[int]], ncols: int):
    """Bareiss forward elimination; returns (echelon rows, pivot columns)."""
    prev = 1
    r = 0
    nrows = len(mat)
    pivcols = []
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pr = mat[r]
        for i in range(r + 1, nrows):
            ri = mat[i]
            if ri[c]:
                f = ri[c]
                for k in range(c + 1, ncols):
                    ri[k] = (pr[c] * ri[k] - f * pr[k]) // prev
                ri[c] = 0
            else:
                for k in range(c + 1, ncols):
                    ri[k] = pr[c] * ri[k] // prev
        prev = pr[c]
        pivcols.append(c)
        r += 1
    return mat[:r], pivcols


def _echelon_quad(mat: List[List[tuple]], ncols: int, d: int):
    prev = (1, 0)
    r = 0
    nrows = len(mat)
    pivcols = []
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if mat[i][c] != (0, 0):
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pr = mat[r]
        for i in range(r + 1, nrows):
            ri = mat[i]
            f = ri[c]
            if f != (0, 0):
                for k in range(c + 1, ncols):
                    t1 = _qmul(pr[c], ri[k], d)
                    t2 = _qmul(f, pr[k], d)
                    ri[k] = _qdivexact((t1[0] - t2[0], t1[1] - t2[1]), prev, d)
                ri[c] = (0, 0)
            else:
                for k in range(c + 1, ncols):
                    ri[k] = _qdivexact(_qmul(pr[c], ri[k], d), prev, d)
        prev = pr[c]
        pivcols.append(c)
        r += 1
    return mat[:r], pivcols


def _nullspace_from_echelon(ech, pivcols, ncols, fs: FieldSpec, conv):
    """Back-substitute one basis vector per free column (in column order)."""
    zero, one = fs.zero(), fs.one()
    pivset = set(pivcols)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [zero] * ncols
        v[free] = one
        for i in range(len(pivcols) - 1, -1, -1):
            pc = pivcols[i]
            row = ech[i]
            s = zero
            for j in range(pc + 1, ncols):
                if v[j] and row[j]:
                    s = s + conv(row[j]) * v[j]
            if s:
                v[pc] = -s / conv(row[pc])
        basis.append(v)
    return basis


def nullspace(rows: Sequence[Sequence[Scalar]], fs: FieldSpec, ncols: int) -> List[List[Scalar]]:
    """Deterministic nullspace basis (free variables in column order).

    Characteristic-0 fields go through fraction-free echelon reduction on
    cleared-integer rows, with exact back-substitution only for the (few)
    basis vectors; prime fields use plain Gauss-Jordan.
    """
    if fs.kind == "rational":
        mat = [_clear_row_rational(r) for r in rows if any(r)]
        ech, pivcols = _echelon_int(mat, ncols)
        return _nullspace_from_echelon(ech, pivcols, ncols, fs, Fraction)
    if fs.kind == "quadratic":
        mat = [_clear_row_quadratic(r) for r in rows if any(r)]
        ech, pivcols = _echelon_quad(mat, ncols, fs.d)
        conv = lambda v: QuadElem(Fraction(v[0]), Fraction(v[1]), fs.d)
        return _nullspace_from_echelon(ech, pivcols, ncols, fs, conv)
    zero, one = fs.zero(), fs.one()
    mat = [list(r) for r in rows if any(r)]
    nrows = len(mat)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c] if isinstance(mat[r][c], Fraction) else mat[r][c].inverse()
        mat[r] = [v * inv for v in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [zero] * ncols
        v[free] = one
        for row_idx, pc in enumerate(pivots):
            v[pc] = -mat[row_idx][free]
        basis.append(v)
    return basis


def invert_matrix(rows: Sequence[Sequence[Scalar]], fs: FieldSpec) -> List[List[Scalar]]:
    """Inverse of a square matrix via Gauss-Jordan; raises if singular."""
    n = len(rows)
    zero, one = fs.zero(), fs.one()
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = None
        for i in range(c, n):
            if aug[i][c]:
                piv = i
                break
        if piv is None:
            raise InternalInconsistency("singular basis-change matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c] if isinstance(aug[c][c], Fraction) else aug[c][c].inverse()
        aug[c] = [v * inv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]
