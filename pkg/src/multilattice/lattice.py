"""The multiplicity lattice: order, distance, balls, cones and chains.

Multiplicities are plain tuples of nonnegative ints, indexed in the
arrangement's hyperplane order.  A box is a tuple of inclusive per-coordinate
upper bounds; it truncates the (infinite) lattice to a finite scan window.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import LengthMismatch, NotComparable
from .poly import Arrangement, HomogPoly

Multiplicity = Tuple[int, ...]
Box = Tuple[int, ...]


def _check_lengths(mu: Sequence[int], nu: Sequence[int]) -> None:
    if len(mu) != len(nu):
        raise LengthMismatch(f"lengths {len(mu)} and {len(nu)} differ")


def size(mu: Multiplicity) -> int:
    return sum(mu)


def distance(mu: Multiplicity, nu: Multiplicity) -> int:
    _check_lengths(mu, nu)
    return sum(abs(a - b) for a, b in zip(mu, nu))


def leq(mu: Multiplicity, nu: Multiplicity) -> bool:
    _check_lengths(mu, nu)
    return all(a <= b for a, b in zip(mu, nu))


def meet_join(mu: Multiplicity, nu: Multiplicity) -> Tuple[Multiplicity, Multiplicity]:
    _check_lengths(mu, nu)
    return (tuple(min(a, b) for a, b in zip(mu, nu)),
            tuple(max(a, b) for a, b in zip(mu, nu)))


def in_box(mu: Multiplicity, box: Box) -> bool:
    _check_lengths(mu, box)
    return all(0 <= a <= b for a, b in zip(mu, box))


def box_points(box: Box) -> Iterator[Multiplicity]:
    """All lattice points of the box in lexicographic order."""
    return product(*(range(b + 1) for b in box))


def covering_neighbors(mu: Multiplicity, box: Box) -> List[Tuple[Multiplicity, int, int]]:
    """Neighbors of mu in the Hasse graph restricted to the box.

    Returns (nu, index, direction) with direction +1 for mu covered by nu
    and -1 for nu covered by mu.
    """
    out = []
    for i, (m, b) in enumerate(zip(mu, box)):
        if m + 1 <= b:
            out.append((mu[:i] + (m + 1,) + mu[i + 1:], i, +1))
        if m - 1 >= 0:
            out.append((mu[:i] + (m - 1,) + mu[i + 1:], i, -1))
    return out


def cone_index(mu: Multiplicity) -> Optional[int]:
    """Index of the hyperplane carrying more than half the weight, if any."""
    total = sum(mu)
    for i, m in enumerate(mu):
        if 2 * m > total:
            return i
    return None


def classify_point(mu: Multiplicity) -> Tuple[str, Optional[int]]:
    """("cone", H) if one hyperplane dominates, else ("balanced", None)."""
    h = cone_index(mu)
    return ("balanced", None) if h is None else ("cone", h)


def is_balanced(mu: Multiplicity) -> bool:
    return cone_index(mu) is None


def ball(mu: Multiplicity, radius: int, box: Box) -> List[Multiplicity]:
    """Lattice points of the box at distance strictly less than radius."""
    if radius <= 0:
        return []
    n = len(mu)
    out: List[Multiplicity] = []

    def rec(i: int, budget: int, acc: Tuple[int, ...]):
        if i == n:
            out.append(acc)
            return
        lo = max(0, mu[i] - budget)
        hi = min(box[i], mu[i] + budget)
        for v in range(lo, hi + 1):
            rec(i + 1, budget - abs(v - mu[i]), acc + (v,))

    rec(0, radius - 1, ())
    return out


def saturated_chain(mu: Multiplicity, nu: Multiplicity) -> List[Multiplicity]:
    """The chain from mu up to nu raising the lowest index first."""
    _check_lengths(mu, nu)
    if not leq(mu, nu):
        raise NotComparable(f"{mu} is not below {nu}")
    chain = [mu]
    cur = list(mu)
    for i in range(len(mu)):
        while cur[i] < nu[i]:
            cur[i] += 1
            chain.append(tuple(cur))
    return chain


def chain_steps(chain: Sequence[Multiplicity]) -> List[int]:
    """The raised coordinate of each covering step; validates the chain."""
    steps = []
    for a, b in zip(chain, chain[1:]):
        _check_lengths(a, b)
        diff = [j for j in range(len(a)) if a[j] != b[j]]
        if len(diff) != 1 or b[diff[0]] != a[diff[0]] + 1:
            raise NotComparable(f"{a} -> {b} is not a covering step")
        steps.append(diff[0])
    return steps


def downalpha(A: Arrangement, chain: Sequence[Multiplicity], delta_vals: Sequence[int]) -> HomogPoly:
    """Product of the step forms over the steps where delta decreases."""
    if len(delta_vals) != len(chain):
        raise LengthMismatch("one delta value per chain element required")
    steps = chain_steps(chain)
    out = HomogPoly.one(A.field)
    for idx, h in enumerate(steps):
        if delta_vals[idx] > delta_vals[idx + 1]:
            out = out * HomogPoly.from_linear_form(A.forms[h])
    return out


def parse_multiplicity(text: str, n: int) -> Multiplicity:
    """Comma-separated naturals in arrangement order."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise LengthMismatch(f"expected {n} entries, got {len(parts)}")
    vals = tuple(int(p) for p in parts)
    if any(v < 0 for v in vals):
        raise ValueError(f"multiplicities must be nonnegative: {text}")
    return vals


def format_multiplicity(mu: Multiplicity) -> str:
    return ",".join(str(v) for v in mu)


# re-exported for callers that only need the window machinery
__all__ = [
    "Multiplicity", "Box", "size", "distance", "leq", "meet_join", "in_box",
    "box_points", "covering_neighbors", "cone_index", "classify_point",
    "is_balanced", "ball", "saturated_chain", "chain_steps", "downalpha",
    "parse_multiplicity", "format_multiplicity",
]
