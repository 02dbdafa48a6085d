"""Homogeneous bivariate polynomials, linear forms, arrangements, derivations.

Coefficient convention: a homogeneous polynomial of degree d is stored as
the tuple (c_0, ..., c_d) meaning sum(c_i * x**i * y**(d - i)).  The zero
polynomial is the empty tuple and carries no degree.
"""

from __future__ import annotations

import functools as _functools
import hashlib
import json
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence, Tuple

from .errors import (
    ExactDivisionError,
    FieldMismatch,
    ProportionalForms,
    ZeroPolynomial,
)
from .field import FieldSpec, Scalar, invert


@dataclass(frozen=True)
class LinearForm:
    """alpha = a*x + b*y, normalized so the first nonzero of (a, b) is 1."""

    a: Scalar
    b: Scalar

    @classmethod
    def make(cls, fs: FieldSpec, a, b) -> "LinearForm":
        a = fs.coerce(a)
        b = fs.coerce(b)
        if not a and not b:
            raise ValueError("linear form must be nonzero")
        lead = a if a else b
        inv = invert(lead)
        return cls(a * inv, b * inv)

    def proportional(self, other: "LinearForm") -> bool:
        # both normalized, so proportional means equal
        return self.a == other.a and self.b == other.b

    def perp(self) -> Tuple[Scalar, Scalar]:
        """A direction annihilated by the form: alpha(b, -a) = 0."""
        return (self.b, -self.a)


@dataclass(frozen=True)
class Arrangement:
    """An ordered set of pairwise distinct lines through the origin."""

    field: FieldSpec
    forms: Tuple[LinearForm, ...]
    names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if len(self.forms) < 1:
            raise ValueError("arrangement needs at least one form")
        for i in range(len(self.forms)):
            for j in range(i + 1, len(self.forms)):
                if self.forms[i].proportional(self.forms[j]):
                    raise ProportionalForms(f"forms {i} and {j} define the same line")
        if self.names is not None and len(self.names) != len(self.forms):
            raise ValueError("names must match forms")

    @classmethod
    def make(cls, fs: FieldSpec, coeff_pairs: Sequence[Tuple], names=None) -> "Arrangement":
        forms = tuple(LinearForm.make(fs, a, b) for a, b in coeff_pairs)
        return cls(fs, forms, tuple(names) if names else None)

    def __len__(self) -> int:
        return len(self.forms)

    def name_of(self, i: int) -> str:
        if self.names:
            return self.names[i]
        return f"H{i}"

    def to_json(self) -> dict:
        obj = {
            "field": self.field.to_json(),
            "forms": [
                [self.field.format_scalar(f.a), self.field.format_scalar(f.b)]
                for f in self.forms
            ],
        }
        if self.names:
            obj["names"] = list(self.names)
        return obj

    def canonical_hash(self) -> str:
        return _arrangement_hash(self)


@_functools.lru_cache(maxsize=256)
def _arrangement_hash(A: "Arrangement") -> str:
    payload = json.dumps(A.to_json(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class HomogPoly:
    """Dense homogeneous polynomial; () is the canonical zero."""

    coeffs: Tuple[Scalar, ...] = ()

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> Optional[int]:
        if self.is_zero:
            return None
        return len(self.coeffs) - 1

    @classmethod
    def make(cls, coeffs: Sequence[Scalar]) -> "HomogPoly":
        if all(not c for c in coeffs):
            return cls(())
        return cls(tuple(coeffs))

    @classmethod
    def zero(cls) -> "HomogPoly":
        return cls(())

    @classmethod
    def one(cls, fs: FieldSpec) -> "HomogPoly":
        return cls((fs.one(),))

    @classmethod
    def from_linear_form(cls, lf: LinearForm) -> "HomogPoly":
        return cls.make((lf.b, lf.a))  # c_0*y + c_1*x

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add homogeneous polynomials of different degrees")
        return HomogPoly.make(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "HomogPoly") -> "HomogPoly":
        return self + (-other)

    def __neg__(self) -> "HomogPoly":
        return HomogPoly(tuple(-c for c in self.coeffs))

    def scale(self, s: Scalar) -> "HomogPoly":
        if not s:
            return HomogPoly.zero()
        return HomogPoly.make(tuple(c * s for c in self.coeffs))

    def __mul__(self, other: "HomogPoly") -> "HomogPoly":
        if self.is_zero or other.is_zero:
            return HomogPoly.zero()
        da, db = self.degree, other.degree
        out = [None] * (da + db + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                t = a * b
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        return HomogPoly.make(tuple(out))

    def pow(self, n: int, fs: FieldSpec) -> "HomogPoly":
        result = HomogPoly.one(fs)
        for _ in range(n):
            result = result * self
        return result

    def format(self, fs: FieldSpec, vars=("x", "y")) -> str:
        if self.is_zero:
            return "0"
        d = self.degree
        terms = []
        for i in range(d, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = []
            if i:
                mono.append(vars[0] if i == 1 else f"{vars[0]}^{i}")
            if d - i:
                mono.append(vars[1] if d - i == 1 else f"{vars[1]}^{d - i}")
            cs = fs.format_scalar(c)
            if isinstance(cs, dict):
                cs = f"({cs['a']}+{cs['b']}*sqrt({fs.d}))"
            if mono and cs == "1":
                terms.append("*".join(mono))
            elif mono and cs == "-1":
                terms.append("-" + "*".join(mono))
            elif mono:
                terms.append(cs + "*" + "*".join(mono))
            else:
                terms.append(cs)
        return " + ".join(terms).replace("+ -", "- ")


def divide_by_linear_form(f: HomogPoly, lf: LinearForm) -> HomogPoly:
    """Exact quotient f / alpha; raises ExactDivisionError if not divisible."""
    if f.is_zero:
        return HomogPoly.zero()
    d = f.degree
    if d == 0:
        raise ExactDivisionError("degree-0 polynomial has no linear factor")
    c = f.coeffs
    if not lf.a:
        # alpha = y (normalized): divisible iff the x^d coefficient vanishes
        if c[d]:
            raise ExactDivisionError("not divisible")
        return HomogPoly.make(c[:d])
    # alpha = x + b*y: dehomogenize in t = x/y and do synthetic division
    # by (t - r) with r = -b; remainder is p(r).
    r = -lf.b
    q = [None] * d
    acc = c[d]
    for j in range(d - 1, -1, -1):
        q[j] = acc
        acc = c[j] + r * acc
    if acc:
        raise ExactDivisionError("not divisible")
    return HomogPoly.make(tuple(q))


def poly_divisible(f: HomogPoly, lf: LinearForm) -> bool:
    if f.is_zero:
        return True
    d = f.degree
    if d == 0:
        return False
    if not lf.a:
        return not f.coeffs[d]
    r = -lf.b
    acc = f.coeffs[d]
    for j in range(d - 1, -1, -1):
        acc = f.coeffs[j] + r * acc
    return not acc


def linear_form_multiplicity(f: HomogPoly, lf: LinearForm) -> int:
    """Largest m with alpha**m dividing f (f nonzero)."""
    if f.is_zero:
        raise ZeroPolynomial("multiplicity of the zero polynomial is infinite")
    m = 0
    while not f.is_zero:
        try:
            f = divide_by_linear_form(f, lf)
        except ExactDivisionError:
            break
        m += 1
    return m


@dataclass(frozen=True)
class Derivation:
    """theta = P*dx + Q*dy with P, Q homogeneous of a common degree."""

    P: HomogPoly = dc_field(default_factory=HomogPoly.zero)
    Q: HomogPoly = dc_field(default_factory=HomogPoly.zero)

    def __post_init__(self):
        if not self.P.is_zero and not self.Q.is_zero and self.P.degree != self.Q.degree:
            raise ValueError("P and Q must have the same degree")

    @property
    def is_zero(self) -> bool:
        return self.P.is_zero and self.Q.is_zero

    @property
    def degree(self) -> Optional[int]:
        if not self.P.is_zero:
            return self.P.degree
        return self.Q.degree

    @classmethod
    def zero(cls) -> "Derivation":
        return cls()

    @classmethod
    def euler(cls, fs: FieldSpec) -> "Derivation":
        one, z = fs.one(), fs.zero()
        return cls(HomogPoly((z, one)), HomogPoly((one, z)))

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.P + other.P, self.Q + other.Q)

    def __sub__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.P - other.P, self.Q - other.Q)

    def __neg__(self) -> "Derivation":
        return Derivation(-self.P, -self.Q)

    def scale(self, s: Scalar) -> "Derivation":
        return Derivation(self.P.scale(s), self.Q.scale(s))

    def mul_poly(self, g: HomogPoly) -> "Derivation":
        return Derivation(g * self.P, g * self.Q)

    def _flat(self):
        # P then Q, each listed from the highest x-power down
        d = self.degree
        if d is None:
            return ()
        z = None
        pc = self.P.coeffs if not self.P.is_zero else None
        qc = self.Q.coeffs if not self.Q.is_zero else None
        out = []
        for cs in (pc, qc):
            if cs is None:
                out.extend([z] * (d + 1))
            else:
                out.extend(reversed(cs))
        return tuple(out)

    def canonical(self) -> "Derivation":
        """Scale so the first nonzero flattened coefficient is 1."""
        if self.is_zero:
            return self
        for c in self._flat():
            if c is not None and c:
                return self.scale(invert(c))
        return self  # pragma: no cover

    def format(self, fs: FieldSpec) -> str:
        if self.is_zero:
            return "0"
        parts = []
        if not self.P.is_zero:
            parts.append(f"({self.P.format(fs)})*dx")
        if not self.Q.is_zero:
            parts.append(f"({self.Q.format(fs)})*dy")
        return " + ".join(parts)


def apply_derivation(theta: Derivation, lf: LinearForm) -> HomogPoly:
    """theta(alpha) = P*a + Q*b, homogeneous of degree deg(theta) or zero."""
    out = HomogPoly.zero()
    if not theta.P.is_zero and lf.a:
        out = out + theta.P.scale(lf.a)
    if not theta.Q.is_zero and lf.b:
        out = out + theta.Q.scale(lf.b)
    return out


def saito_determinant(t1: Derivation, t2: Derivation) -> HomogPoly:
    """P1*Q2 - P2*Q1; nonzero iff {t1, t2} is independent over the ring."""
    return t1.P * t2.Q - t2.P * t1.Q


def proportional_derivations(t1: Derivation, t2: Derivation) -> bool:
    """True if one is a scalar multiple of the other (zero counts)."""
    if t1.is_zero or t2.is_zero:
        return True
    if t1.degree != t2.degree:
        return False
    f1, f2 = t1._flat(), t2._flat()
    lead = None
    for a, b in zip(f1, f2):
        av = a if a is not None else None
        bv = b if b is not None else None
        an = bool(av) if av is not None else False
        bn = bool(bv) if bv is not None else False
        if an != bn:
            return False
        if an and lead is None:
            lead = av * invert(bv)
        elif an and av != lead * bv:
            return False
    return True


def defining_polynomial(A: Arrangement, mu: Sequence[int]) -> HomogPoly:
    """Product of alpha_H ** mu_H over the arrangement; degree |mu|."""
    if len(mu) != len(A):
        raise FieldMismatch("multiplicity length does not match arrangement")
    out = HomogPoly.one(A.field)
    for lf, m in zip(A.forms, mu):
        if m:
            out = out * HomogPoly.from_linear_form(lf).pow(m, A.field)
    return out
