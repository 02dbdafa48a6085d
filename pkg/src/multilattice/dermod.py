"""The derivation-module solver.

A derivation theta = P*dx + Q*dy of degree d belongs to the module of an
arrangement with multiplicity mu iff for every hyperplane H the polynomial
theta(alpha_H) is divisible by alpha_H**mu_H.  Each divisibility requirement
is linear in the 2*(d+1) unknown coefficients of P and Q, so the graded
piece of the module at degree d is the nullspace of a stacked constraint
system.  Exponents come out of a search for the minimal degree with a
nonzero nullspace; the degree-sum identity pins the second exponent.

Two independent constraint constructions are provided:

* ``basis``: expand theta(alpha_H) in the basis {alpha**i * beta**(d-i)}
  for a fixed complementary form beta and kill the low alpha-coordinates;
* ``division``: run the exact synthetic division of theta(alpha_H) by
  alpha_H symbolically and kill the remainders.

They must always agree; the second serves as a differential-testing oracle
for the first.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import lattice
from .errors import BadReduction, InternalInconsistency, LengthMismatch, ProportionalForms
from .field import FieldSpec, Projection, Scalar, is_prime
from .linalg import invert_matrix, nullspace, rank
from .poly import (
    Arrangement,
    Derivation,
    HomogPoly,
    LinearForm,
    apply_derivation,
    defining_polynomial,
    linear_form_multiplicity,
    saito_determinant,
)

Multiplicity = Tuple[int, ...]


def _complementary_form(fs: FieldSpec, lf: LinearForm) -> LinearForm:
    # beta = y unless alpha is proportional to y, then beta = x
    if lf.a:
        return LinearForm.make(fs, 0, 1)
    return LinearForm.make(fs, 1, 0)


@functools.lru_cache(maxsize=4096)
def _alpha_basis_rows(fs: FieldSpec, lf: LinearForm, d: int) -> Tuple[Tuple[Scalar, ...], ...]:
    """Rows of the inverse of the basis-change matrix to {alpha^i beta^(d-i)}.

    Row i applied to a monomial coefficient vector yields the coordinate of
    alpha**i * beta**(d-i).
    """
    beta = _complementary_form(fs, lf)
    ap = HomogPoly.from_linear_form(lf)
    bp = HomogPoly.from_linear_form(beta)
    cols = []
    for i in range(d + 1):
        poly = ap.pow(i, fs) * bp.pow(d - i, fs)
        cols.append(poly.coeffs)
    # matrix with entry [j][i] = coefficient of x^j y^(d-j) in alpha^i beta^(d-i)
    mat = [[cols[i][j] for i in range(d + 1)] for j in range(d + 1)]
    inv = invert_matrix(mat, fs)
    return tuple(tuple(row) for row in inv)


def _constraint_rows_basis(A: Arrangement, mu: Sequence[int], d: int) -> List[List[Scalar]]:
    fs = A.field
    zero = fs.zero()
    rows: List[List[Scalar]] = []
    for lf, m in zip(A.forms, mu):
        m = min(m, d + 1)
        if m <= 0:
            continue
        inv_rows = _alpha_basis_rows(fs, lf, d)
        a, b = lf.a, lf.b
        for i in range(m):
            r = inv_rows[i]
            left = [a * v if a else zero for v in r]
            right = [b * v if b else zero for v in r]
            rows.append(left + right)
    return rows


def _constraint_rows_division(A: Arrangement, mu: Sequence[int], d: int) -> List[List[Scalar]]:
    fs = A.field
    zero, one = fs.zero(), fs.one()
    ncols = 2 * (d + 1)
    rows: List[List[Scalar]] = []
    for hi, (lf, m) in enumerate(zip(A.forms, mu)):
        m = min(m, d + 1)
        if m <= 0:
            continue
        a, b = lf.a, lf.b
        # coefficient j of theta(alpha) as a functional of the unknowns
        funcs: List[List[Scalar]] = []
        for j in range(d + 1):
            row = [zero] * ncols
            row[j] = a
            row[d + 1 + j] = b
            funcs.append(row)
        for _ in range(m):
            deg = len(funcs) - 1
            if not lf.a:
                # alpha = y: remainder is the x^deg coefficient
                rows.append(funcs[deg])
                funcs = funcs[:deg]
            else:
                r = -lf.b
                acc = funcs[deg]
                quot: List[Optional[List[Scalar]]] = [None] * deg
                for j in range(deg - 1, -1, -1):
                    quot[j] = acc
                    acc = [fj + r * aj for fj, aj in zip(funcs[j], acc)]
                rows.append(acc)
                funcs = quot
    return rows


def graded_dimension(A: Arrangement, mu: Sequence[int], d: int, method: str = "basis") -> int:
    """Dimension of the degree-d piece of the derivation module."""
    if len(mu) != len(A):
        raise LengthMismatch("multiplicity length does not match arrangement")
    if d < 0:
        return 0
    if method == "basis":
        rows = _constraint_rows_basis(A, mu, d)
    elif method == "division":
        rows = _constraint_rows_division(A, mu, d)
    else:
        raise ValueError(f"unknown method {method!r}")
    ncols = 2 * (d + 1)
    return ncols - rank(rows, A.field, ncols)


def _nullspace_derivations(A: Arrangement, mu: Sequence[int], d: int) -> List[Derivation]:
    rows = _constraint_rows_basis(A, mu, d)
    basis = nullspace(rows, A.field, 2 * (d + 1))
    out = []
    for v in basis:
        P = HomogPoly.make(tuple(v[: d + 1]))
        Q = HomogPoly.make(tuple(v[d + 1:]))
        out.append(Derivation(P, Q).canonical())
    return out


@dataclass(frozen=True)
class ExponentResult:
    """Exponents (d1 <= d2), their gap, and the minimal-degree generator.

    theta_min is canonical and unique up to scalar only when delta > 0;
    when delta == 0 it is one of several minimal generators and carries
    the non_unique flag.
    """

    d1: int
    d2: int
    delta: int
    theta_min: Derivation
    non_unique: bool

    def as_pair(self) -> Tuple[int, int]:
        return (self.d1, self.d2)


_GOOD_PRIME_CACHE: dict = {}


def _heuristic_prime(A: Arrangement) -> Optional[int]:
    """A deterministic good-reduction prime for the arrangement, if any.

    Derived from the canonical hash so repeated runs (and parallel
    workers) always pick the same prime.
    """
    key = A.canonical_hash()
    if key not in _GOOD_PRIME_CACHE:
        rng = random.Random(key)
        found = None
        for _ in range(50):
            p = random_good_prime(rng, bits=31)
            try:
                project_arrangement(A, p)
            except (BadReduction, ValueError):
                continue
            found = p
            break
        _GOOD_PRIME_CACHE[key] = found
    return _GOOD_PRIME_CACHE[key]


def _minimal_degree(A: Arrangement, mu: Multiplicity, hi: int) -> int:
    """Least degree with a nonzero graded piece, over [0, hi].

    Nonemptiness is monotone in the degree (multiply by x or y), so a
    binary search suffices.  The search is first run over a good-reduction
    prime field as an accelerator: rank can only drop mod p, so a zero
    modular dimension certifies a zero exact dimension, while positive
    modular dimensions are confirmed in characteristic 0.
    """
    if A.field.kind != "prime":
        p = _heuristic_prime(A)
        if p is not None:
            Ap = project_arrangement(A, p)
            lo, h = 0, hi
            while lo < h:
                mid = (lo + h) // 2
                if graded_dimension(Ap, mu, mid) > 0:
                    h = mid
                else:
                    lo = mid + 1
            # degrees below lo are certified empty; confirm positivity exactly
            c = lo
            while c < hi and graded_dimension(A, mu, c) == 0:
                c += 1  # bad reduction inflated the modular dimension; rare
            return c
    lo = 0
    while lo < hi:
        mid = (lo + hi) // 2
        if graded_dimension(A, mu, mid) > 0:
            hi = mid
        else:
            lo = mid + 1
    return lo


def exponents(A: Arrangement, mu: Sequence[int], cache=None) -> ExponentResult:
    """Exponents of the multiarrangement, by minimal-degree search.

    The search runs over d in [0, |mu|/2] (the lower exponent cannot
    exceed half the size).
    """
    mu = tuple(mu)
    if len(mu) != len(A):
        raise LengthMismatch("multiplicity length does not match arrangement")
    if cache is not None:
        hit = cache.get(A, mu)
        if hit is not None:
            return hit
    total = sum(mu)
    hi = total // 2
    if graded_dimension(A, mu, hi) == 0:
        raise InternalInconsistency(
            f"no derivation of degree <= |mu|/2 for mu={mu}; solver bug")
    d1 = _minimal_degree(A, mu, hi)
    d2 = total - d1
    if mu and total > 0 and d1 > total - max(mu):
        raise InternalInconsistency(
            f"d1={d1} exceeds the constructive bound |mu|-max(mu) for mu={mu}")
    gens = _nullspace_derivations(A, mu, d1)
    delta = d2 - d1
    if delta > 0 and len(gens) != 1:
        raise InternalInconsistency(
            f"degree-{d1} piece has dimension {len(gens)}, expected 1, mu={mu}")
    result = ExponentResult(d1, d2, delta, gens[0], non_unique=(delta == 0))
    if cache is not None:
        cache.put(A, mu, result)
    return result


def delta(A: Arrangement, mu: Sequence[int], cache=None) -> int:
    return exponents(A, mu, cache=cache).delta


def min_derivation(A: Arrangement, mu: Sequence[int], cache=None) -> Derivation:
    return exponents(A, mu, cache=cache).theta_min


def full_basis(A: Arrangement, mu: Sequence[int], cache=None) -> Tuple[Derivation, Derivation]:
    """A Saito-verified homogeneous basis with degrees (d1, d2)."""
    res = exponents(A, mu, cache=cache)
    t1 = res.theta_min
    for cand in _nullspace_derivations(A, mu, res.d2):
        if not saito_determinant(t1, cand).is_zero:
            verdict = verify_saito(A, mu, t1, cand)
            if not verdict.accepted:
                raise InternalInconsistency(
                    f"independent partner failed Saito verification: {verdict.reason}")
            return (t1, cand)
    raise InternalInconsistency(f"no independent partner at degree {res.d2} for mu={mu}")


@dataclass(frozen=True)
class SaitoVerdict:
    accepted: bool
    reason: Optional[str] = None
    scalar: Optional[Scalar] = None


def in_module(A: Arrangement, mu: Sequence[int], theta: Derivation) -> bool:
    """Membership test by exact linear-form multiplicity."""
    for lf, m in zip(A.forms, mu):
        if m <= 0:
            continue
        f = apply_derivation(theta, lf)
        if f.is_zero:
            continue
        if linear_form_multiplicity(f, lf) < m:
            return False
    return True


def verify_saito(A: Arrangement, mu: Sequence[int], t1: Derivation, t2: Derivation) -> SaitoVerdict:
    """Accept iff {t1, t2} is a basis of the derivation module at mu.

    Checks, in order: membership of both derivations, the degree-sum
    identity, and that the determinant is a nonzero scalar multiple of
    the defining polynomial.
    """
    mu = tuple(mu)
    for label, t in (("theta1", t1), ("theta2", t2)):
        if t.is_zero:
            return SaitoVerdict(False, f"membership: {label} is zero")
        if not in_module(A, mu, t):
            return SaitoVerdict(False, f"membership: {label} not in the module")
    if t1.degree + t2.degree != sum(mu):
        return SaitoVerdict(
            False, f"degree: {t1.degree}+{t2.degree} != |mu|={sum(mu)}")
    det = saito_determinant(t1, t2)
    if det.is_zero:
        return SaitoVerdict(False, "dependent: determinant is zero")
    q = defining_polynomial(A, mu)
    lead_idx = next(i for i, c in enumerate(q.coeffs) if c)
    c = det.coeffs[lead_idx] / q.coeffs[lead_idx] if isinstance(q.coeffs[lead_idx], Fraction) \
        else det.coeffs[lead_idx] * q.coeffs[lead_idx].inverse()
    if det != q.scale(c):
        return SaitoVerdict(False, "determinant is not a scalar multiple of the defining polynomial")
    return SaitoVerdict(True, None, c)


# -- heuristic modular cross-checks ------------------------------------------


def project_arrangement(A: Arrangement, p: int) -> Arrangement:
    """Reduce a characteristic-0 arrangement mod p (good reduction only)."""
    proj = Projection(A.field, p)
    target = proj.target
    pairs = []
    for lf in A.forms:
        a, b = proj(lf.a), proj(lf.b)
        if not a and not b:
            raise BadReduction(f"form collapses mod {p}")
        pairs.append((a, b))
    try:
        return Arrangement.make(target, pairs, names=A.names)
    except ProportionalForms as exc:
        raise BadReduction(f"forms collide mod {p}") from exc


def modular_exponents(A: Arrangement, mu: Sequence[int], p: int) -> Tuple[int, int]:
    Ap = project_arrangement(A, p)
    res = exponents(Ap, tuple(mu))
    return res.as_pair()


def random_good_prime(rng: random.Random, bits: int = 40) -> int:
    while True:
        p = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if is_prime(p):
            return p


def modular_consistency(A: Arrangement, mus: Sequence[Multiplicity], rng: random.Random,
                        bits: int = 40, cache=None) -> dict:
    """Compare prime-field exponents with characteristic-0 exponents.

    Mismatches are collected, never silently dropped; the caller decides
    what rate is acceptable (bad reduction makes rare mismatches possible).
    """
    matches = 0
    mismatches = []
    for mu in mus:
        expected = exponents(A, mu, cache=cache).as_pair()
        for _ in range(20):
            p = random_good_prime(rng, bits)
            try:
                got = modular_exponents(A, mu, p)
                break
            except (BadReduction, ValueError):
                continue
        else:
            mismatches.append({"mu": mu, "error": "no good prime found"})
            continue
        if got == expected:
            matches += 1
        else:
            mismatches.append({"mu": mu, "p": p, "expected": expected, "got": got})
    return {"total": len(mus), "matches": matches, "mismatches": mismatches}
