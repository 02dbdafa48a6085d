"""Exact scalar arithmetic for the supported coefficient domains.

Three domains are available:

* rationals, represented by :class:`fractions.Fraction`;
* real quadratic extensions of the rationals, ``a + b*sqrt(d)`` with
  ``a, b`` rational and ``d`` a squarefree integer > 1, represented by
  :class:`QuadElem`;
* prime fields, used only as a heuristic accelerator for cross-checks,
  represented by :class:`ModInt`.

All arithmetic is exact; there is no floating-point fallback anywhere in a
correctness path.  ``float()`` conversions exist purely for sanity tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import BadReduction, DivisionByZero, FieldMismatch, ParseError, ZeroDenominator

Scalar = Union[Fraction, "QuadElem", "ModInt"]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (valid far beyond 64-bit inputs)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    i = 2
    while i * i <= n:
        if n % (i * i) == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class QuadElem:
    """``a + b*sqrt(d)`` with rational a, b; always in canonical form."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def _check(self, other: "QuadElem") -> None:
        if self.d != other.d:
            raise FieldMismatch(f"cannot mix sqrt({self.d}) and sqrt({other.d})")

    def _coerce(self, other):
        if isinstance(other, QuadElem):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadElem(self.a + other.a, self.b + other.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadElem(self.a - other.a, self.b - other.b, self.d)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadElem(other.a - self.a, other.b - self.b, self.d)

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.d)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadElem(
            self.a * other.a + self.d * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.d,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.d)

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            # d squarefree > 1 makes sqrt(d) irrational, so norm 0 <=> element 0
            raise DivisionByZero("inverse of zero")
        return QuadElem(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadElem):
            return self.d == other.d and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.d}))"


@dataclass(frozen=True)
class ModInt:
    """Residue in [0, p); heuristic cross-check domain only."""

    v: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "v", self.v % self.p)

    def _coerce(self, other):
        if isinstance(other, ModInt):
            if self.p != other.p:
                raise FieldMismatch("mixed moduli")
            return other
        if isinstance(other, int):
            return ModInt(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ModInt(self.v + other.v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ModInt(self.v - other.v, self.p)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ModInt(other.v - self.v, self.p)

    def __neg__(self):
        return ModInt(-self.v, self.p)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ModInt(self.v * other.v, self.p)

    __rmul__ = __mul__

    def inverse(self) -> "ModInt":
        if self.v == 0:
            raise DivisionByZero("inverse of zero")
        return ModInt(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self.v == other % self.p
        if isinstance(other, ModInt):
            return self.p == other.p and self.v == other.v
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"{self.v} (mod {self.p})"


@dataclass(frozen=True)
class FieldSpec:
    """Which coefficient domain an arrangement lives over.

    kind is one of "rational", "quadratic" (with squarefree d > 1) or
    "prime" (with an odd prime p).  Prime fields are heuristic only:
    any result obtained over one must be confirmable in characteristic 0.
    """

    kind: str
    d: int = 0
    p: int = 0

    RECOMMENDED_PRIME_BITS = 32  # collisions of bad reduction should be rare

    def __post_init__(self):
        if self.kind == "rational":
            pass
        elif self.kind == "quadratic":
            if self.d <= 1 or not is_squarefree(self.d):
                raise FieldMismatch(f"quadratic d must be squarefree and > 1, got {self.d}")
        elif self.kind == "prime":
            if self.p <= 2 or not is_prime(self.p):
                raise FieldMismatch(f"p must be an odd prime, got {self.p}")
        else:
            raise FieldMismatch(f"unknown field kind {self.kind!r}")

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls("rational")

    @classmethod
    def quadratic(cls, d: int) -> "FieldSpec":
        return cls("quadratic", d=d)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", p=p)

    # -- element construction ------------------------------------------------

    def zero(self) -> Scalar:
        return self.from_int(0)

    def one(self) -> Scalar:
        return self.from_int(1)

    def from_int(self, n: int) -> Scalar:
        if self.kind == "rational":
            return Fraction(n)
        if self.kind == "quadratic":
            return QuadElem(Fraction(n), Fraction(0), self.d)
        return ModInt(n, self.p)

    def coerce(self, x) -> Scalar:
        """Bring ints/Fractions (and matching elements) into this field."""
        if isinstance(x, int):
            return self.from_int(x)
        if self.kind == "rational":
            if isinstance(x, Fraction):
                return x
        elif self.kind == "quadratic":
            if isinstance(x, QuadElem):
                if x.d != self.d:
                    raise FieldMismatch(f"element over sqrt({x.d}) in field sqrt({self.d})")
                return x
            if isinstance(x, Fraction):
                return QuadElem(x, Fraction(0), self.d)
        elif self.kind == "prime":
            if isinstance(x, ModInt):
                if x.p != self.p:
                    raise FieldMismatch("modulus mismatch")
                return x
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise BadReduction(f"denominator divisible by {self.p}")
                return ModInt(x.numerator * pow(x.denominator, -1, self.p), self.p)
        raise FieldMismatch(f"cannot coerce {x!r} into {self}")

    def sqrt_element(self) -> Scalar:
        """The canonical square root of d (quadratic fields only)."""
        if self.kind != "quadratic":
            raise FieldMismatch("sqrt element only exists in quadratic fields")
        return QuadElem(Fraction(0), Fraction(1), self.d)

    # -- textual form --------------------------------------------------------

    def format_scalar(self, x: Scalar):
        x = self.coerce(x)
        if self.kind == "rational":
            return _format_fraction(x)
        if self.kind == "quadratic":
            return {"a": _format_fraction(x.a), "b": _format_fraction(x.b)}
        return str(x.v)

    def parse_scalar(self, obj) -> Scalar:
        try:
            if self.kind == "rational":
                return _parse_fraction(obj)
            if self.kind == "quadratic":
                if isinstance(obj, dict):
                    return QuadElem(_parse_fraction(obj.get("a", "0")),
                                    _parse_fraction(obj.get("b", "0")), self.d)
                return QuadElem(_parse_fraction(obj), Fraction(0), self.d)
            return ModInt(int(obj), self.p)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ParseError(f"bad scalar {obj!r}: {exc}") from exc

    def to_json(self):
        if self.kind == "rational":
            return {"type": "rational"}
        if self.kind == "quadratic":
            return {"type": "quadratic", "d": self.d}
        return {"type": "prime", "p": self.p}

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        if not isinstance(obj, dict) or "type" not in obj:
            raise ParseError(f"bad field spec {obj!r}")
        t = obj["type"]
        if t == "rational":
            return cls.rational()
        if t == "quadratic":
            return cls.quadratic(int(obj["d"]))
        if t == "prime":
            return cls.prime(int(obj["p"]))
        raise ParseError(f"unknown field type {t!r}")


def _format_fraction(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _parse_fraction(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, Fraction):
        return s
    if isinstance(s, str):
        return Fraction(s.strip())
    raise ParseError(f"bad rational {s!r}")


def make_rational(num: int, den: int = 1) -> Fraction:
    """Reduced rational with canonical sign; den must be nonzero."""
    if den == 0:
        raise ZeroDenominator("zero denominator")
    return Fraction(num, den)


def reduce_scalar(s: Scalar) -> Scalar:
    """Re-canonicalize a scalar.  Idempotent and value-preserving.

    All element constructors already produce canonical forms, so this
    mostly re-runs the normalization; it exists so callers holding raw
    components can funnel them through one choke point.
    """
    if isinstance(s, Fraction):
        if s.denominator == 0:  # pragma: no cover - Fraction forbids this
            raise ZeroDenominator("zero denominator")
        return Fraction(s.numerator, s.denominator)
    if isinstance(s, QuadElem):
        return QuadElem(reduce_scalar(s.a), reduce_scalar(s.b), s.d)
    if isinstance(s, ModInt):
        return ModInt(s.v, s.p)
    if isinstance(s, int):
        return Fraction(s)
    raise FieldMismatch(f"not a scalar: {s!r}")


def invert(s: Scalar) -> Scalar:
    """Multiplicative inverse; raises DivisionByZero on zero."""
    if isinstance(s, Fraction):
        if s == 0:
            raise DivisionByZero("inverse of zero")
        return 1 / s
    if isinstance(s, (QuadElem, ModInt)):
        return s.inverse()
    if isinstance(s, int):
        if s == 0:
            raise DivisionByZero("inverse of zero")
        return Fraction(1, s)
    raise FieldMismatch(f"not a scalar: {s!r}")


# -- modular projection ------------------------------------------------------


def sqrt_mod(a: int, p: int) -> int:
    """Tonelli-Shanks; returns a square root of a mod p or raises ValueError."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise ValueError(f"{a} is not a quadratic residue mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


class Projection:
    """Map scalars of a characteristic-0 field into F_p.

    For a quadratic field, d must be a quadratic residue mod p; the
    smaller of the two square roots is the canonical image of sqrt(d).
    """

    def __init__(self, source: FieldSpec, p: int):
        if source.kind == "prime":
            raise FieldMismatch("source must be characteristic 0")
        if not is_prime(p) or p <= 2:
            raise FieldMismatch(f"p must be an odd prime, got {p}")
        self.source = source
        self.target = FieldSpec.prime(p)
        self.sqrt_image = 0
        if source.kind == "quadratic":
            r = sqrt_mod(source.d % p, p)
            self.sqrt_image = min(r, p - r)

    def __call__(self, s: Scalar) -> ModInt:
        p = self.target.p
        if isinstance(s, int):
            return ModInt(s, p)
        if isinstance(s, Fraction):
            if s.denominator % p == 0:
                raise BadReduction(f"denominator divisible by {p}")
            return ModInt(s.numerator * pow(s.denominator, -1, p), p)
        if isinstance(s, QuadElem):
            if s.d != self.source.d:
                raise FieldMismatch("wrong quadratic field")
            a = self(s.a)
            b = self(s.b)
            return ModInt(a.v + b.v * self.sqrt_image, p)
        raise FieldMismatch(f"cannot project {s!r}")
