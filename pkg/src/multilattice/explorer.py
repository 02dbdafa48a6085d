"""Sweep the exponent gap over a box and dissect its support.

The scan tabulates (d1, d2, delta) over every point of a finite window of
the multiplicity lattice.  The support (points with delta > 0) restricted
to the window decomposes into connected components of the Hasse graph;
components are classified as certified finite balls, cone portions, or
boundary-undetermined when neither certificate applies.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from . import lattice
from .dermod import exponents
from .errors import NotUnimodal, ParseError, PointNotInComponent
from .field import FieldSpec
from .lattice import Box, Multiplicity
from .poly import Arrangement

SCAN_SCHEMA = 1


@dataclass(frozen=True)
class PointResult:
    d1: int
    d2: int
    delta: int
    estimated: bool = False


@dataclass
class ScanResult:
    arrangement: Arrangement
    box: Box
    table: Dict[Multiplicity, PointResult]
    timing: dict = dc_field(default_factory=dict)  # in-memory only, never serialized

    def delta(self, mu: Multiplicity) -> int:
        return self.table[mu].delta

    def support(self) -> List[Multiplicity]:
        return [mu for mu in sorted(self.table) if self.table[mu].delta > 0]

    def to_json(self) -> str:
        rows = []
        for mu in sorted(self.table):
            pr = self.table[mu]
            row = {"mu": list(mu), "d1": pr.d1, "d2": pr.d2, "delta": pr.delta}
            if pr.estimated:
                row["estimated"] = True
            rows.append(row)
        obj = {
            "schema": SCAN_SCHEMA,
            "arrangement": self.arrangement.to_json(),
            "arrangement_hash": self.arrangement.canonical_hash(),
            "box": list(self.box),
            "points": rows,
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ScanResult":
        obj = json.loads(text)
        if obj.get("schema") != SCAN_SCHEMA:
            raise ParseError(f"unsupported scan schema {obj.get('schema')!r}")
        arr_obj = obj["arrangement"]
        fs = FieldSpec.from_json(arr_obj["field"])
        pairs = [(fs.parse_scalar(a), fs.parse_scalar(b)) for a, b in arr_obj["forms"]]
        A = Arrangement.make(fs, pairs, names=arr_obj.get("names"))
        table = {}
        for row in obj["points"]:
            table[tuple(row["mu"])] = PointResult(
                row["d1"], row["d2"], row["delta"], row.get("estimated", False))
        return cls(A, tuple(obj["box"]), table)


_WORKER_ARRANGEMENT: Optional[Arrangement] = None


def _init_worker(A: Arrangement) -> None:
    global _WORKER_ARRANGEMENT
    _WORKER_ARRANGEMENT = A


def _solve_point(mu: Multiplicity) -> Tuple[Multiplicity, int, int, int]:
    res = exponents(_WORKER_ARRANGEMENT, mu)
    return (mu, res.d1, res.d2, res.delta)


def scan(A: Arrangement, box: Box, jobs: int = 1, balanced_only: bool = False,
         cache=None) -> ScanResult:
    """Tabulate exponents over the box.

    With balanced_only, cone points are not solved: their gap is recorded
    from the weight-dominance bound (2*mu_H - |mu|, flagged estimated),
    which is a lower bound guaranteed positive on every cone point.
    The output table is deterministic and independent of the job count.
    """
    if len(box) != len(A):
        raise ValueError("box length must match the arrangement")
    start = time.monotonic()
    to_solve: List[Multiplicity] = []
    table: Dict[Multiplicity, PointResult] = {}
    for mu in lattice.box_points(box):
        h = lattice.cone_index(mu)
        if balanced_only and h is not None:
            total = sum(mu)
            est = 2 * mu[h] - total
            d1_bound = total - mu[h]
            table[mu] = PointResult(d1_bound, total - d1_bound, est, estimated=True)
        else:
            table[mu] = None  # placeholder, filled below
            to_solve.append(mu)
    solved: List[Tuple[Multiplicity, int, int, int]] = []
    pending = []
    if cache is not None:
        for mu in to_solve:
            hit = cache.get(A, mu)
            if hit is not None:
                solved.append((mu, hit.d1, hit.d2, hit.delta))
            else:
                pending.append(mu)
    else:
        pending = to_solve
    if jobs <= 1 or len(pending) < 2:
        _init_worker(A)
        solved.extend(_solve_point(mu) for mu in pending)
    else:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(A,)) as pool:
            chunk = max(1, len(pending) // (4 * jobs))
            solved.extend(pool.map(_solve_point, pending, chunksize=chunk))
    for mu, d1, d2, dlt in solved:
        table[mu] = PointResult(d1, d2, dlt)
    if cache is not None:
        for mu in pending:
            if cache.get(A, mu) is None:
                exponents(A, mu, cache=cache)  # memoize theta too
    result = ScanResult(A, box, table)
    result.timing = {"seconds": time.monotonic() - start, "jobs": jobs,
                     "points": len(table), "solved": len(solved)}
    return result


@dataclass
class Component:
    """A connected component of the support within the scan window."""

    members: frozenset
    kind: str  # "ball" | "cone" | "undetermined"
    center: Optional[Multiplicity] = None
    radius: Optional[int] = None
    cone_h: Optional[int] = None
    maximizers: Tuple[Multiplicity, ...] = ()
    notes: Tuple[str, ...] = ()

    def sorted_members(self) -> List[Multiplicity]:
        return sorted(self.members)


def components(scan_result: ScanResult) -> List[Component]:
    """Partition the in-window support into Hasse-connected components."""
    box = scan_result.box
    table = scan_result.table
    support = set(scan_result.support())
    seen = set()
    out: List[Component] = []
    for start_mu in sorted(support):
        if start_mu in seen:
            continue
        queue = [start_mu]
        seen.add(start_mu)
        members = []
        while queue:
            mu = queue.pop()
            members.append(mu)
            for nu, _h, _dirn in lattice.covering_neighbors(mu, box):
                if nu in support and nu not in seen:
                    seen.add(nu)
                    queue.append(nu)
        out.append(_classify_component(scan_result, frozenset(members)))
    return out


def _classify_component(scan_result: ScanResult, members: frozenset) -> Component:
    table = scan_result.table
    box = scan_result.box
    cone_hs = sorted({h for mu in members
                      for h in [lattice.cone_index(mu)] if h is not None})
    if cone_hs:
        notes = ()
        if len(cone_hs) > 1:
            notes = (f"multiple cone directions {cone_hs}",)
        return Component(members, "cone", cone_h=cone_hs[0], notes=notes)
    max_delta = max(table[mu].delta for mu in members)
    maximizers = tuple(sorted(mu for mu in members if table[mu].delta == max_delta))
    center = maximizers[0]
    radius = max_delta
    notes = []
    if len(maximizers) > 1:
        notes.append("multiple maximizers")
    # the closed ball of the certificate radius must fit inside the box so
    # the zero shell is visible; only upper bounds can truncate
    fits = all(center[i] + radius <= box[i] for i in range(len(center)))
    if not fits:
        notes.append("ball certificate margin exceeds the box")
        return Component(members, "undetermined", maximizers=maximizers,
                         notes=tuple(notes))
    expected = frozenset(lattice.ball(center, radius, box))
    if members != expected:
        notes.append("ball_mismatch")  # structure violation; must surface in checks
        return Component(members, "undetermined", center=center, radius=radius,
                         maximizers=maximizers, notes=tuple(notes))
    return Component(members, "ball", center=center, radius=radius,
                     maximizers=maximizers, notes=tuple(notes))


@dataclass(frozen=True)
class CenterEntry:
    component: Component
    center: Optional[Multiplicity]
    delta: Optional[int]
    error: Optional[str] = None


def centers(scan_result: ScanResult, comps: Optional[List[Component]] = None) -> List[CenterEntry]:
    """Unique gap maximizer per certified finite component.

    A certified component with two maximizers contradicts the ball
    structure; it is reported as an error entry, never repaired.
    """
    if comps is None:
        comps = components(scan_result)
    out = []
    for comp in comps:
        if comp.kind != "ball":
            continue
        if len(comp.maximizers) != 1:
            out.append(CenterEntry(comp, None, None,
                                   error=f"non-unique maximizers {comp.maximizers}"))
        else:
            out.append(CenterEntry(comp, comp.center, comp.radius))
    return out


def section(comp: Component, mu: Multiplicity, h: int) -> List[Multiplicity]:
    """Members of the component agreeing with mu off h, ordered by mu_h."""
    if mu not in comp.members:
        raise PointNotInComponent(f"{mu} is not in the component")
    rest = mu[:h] + mu[h + 1:]
    picked = [nu for nu in comp.members if nu[:h] + nu[h + 1:] == rest]
    return sorted(picked, key=lambda nu: nu[h])


def peak_element(section_points: Sequence[Multiplicity], delta_vals: Sequence[int]) -> Multiplicity:
    """The unique maximizer along a section; the gap must be unimodal there."""
    if not section_points or len(section_points) != len(delta_vals):
        raise NotUnimodal("section and gap values must align and be nonempty")
    m = max(delta_vals)
    peaks = [i for i, v in enumerate(delta_vals) if v == m]
    if len(peaks) != 1:
        raise NotUnimodal(f"maximizer not unique: {delta_vals}")
    k = peaks[0]
    rising = list(delta_vals[: k + 1])
    falling = list(delta_vals[k:])
    if rising != sorted(rising) or falling != sorted(falling, reverse=True):
        raise NotUnimodal(f"gap values not unimodal: {delta_vals}")
    return section_points[k]


# -- emission ----------------------------------------------------------------

_DOT_PALETTE = [
    "lightblue", "lightpink", "palegreen", "khaki", "lightsalmon",
    "plum", "paleturquoise", "wheat", "lightgray", "mistyrose",
]


def to_dot(scan_result: ScanResult, comps: Optional[List[Component]] = None) -> str:
    """DOT rendering of the in-window support Hasse subgraph.

    Components are colored; certified centers are drawn as double circles.
    """
    if comps is None:
        comps = components(scan_result)
    box = scan_result.box
    table = scan_result.table
    color_of = {}
    center_set = set()
    for idx, comp in enumerate(comps):
        color = _DOT_PALETTE[idx % len(_DOT_PALETTE)]
        for mu in comp.members:
            color_of[mu] = color
        if comp.kind == "ball" and comp.center is not None:
            center_set.add(comp.center)
    lines = ["graph support {", "  node [style=filled];"]
    nodes = sorted(color_of)
    for mu in nodes:
        label = lattice.format_multiplicity(mu) + f"\\nd={table[mu].delta}"
        shape = "doublecircle" if mu in center_set else "ellipse"
        lines.append(
            f'  "{lattice.format_multiplicity(mu)}" '
            f'[label="{label}", fillcolor={color_of[mu]}, shape={shape}];')
    emitted = set()
    for mu in nodes:
        for nu, _h, dirn in lattice.covering_neighbors(mu, box):
            if dirn != +1 or nu not in color_of:
                continue
            key = (mu, nu)
            if key in emitted:
                continue
            emitted.add(key)
            lines.append(
                f'  "{lattice.format_multiplicity(mu)}" -- '
                f'"{lattice.format_multiplicity(nu)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_csv(scan_result: ScanResult, comps: Optional[List[Component]] = None) -> str:
    """CSV table: mu, d1, d2, delta, component id, classification."""
    if comps is None:
        comps = components(scan_result)
    comp_id = {}
    comp_kind = {}
    for idx, comp in enumerate(comps):
        for mu in comp.members:
            comp_id[mu] = idx
            comp_kind[mu] = comp.kind
    lines = ["mu,d1,d2,delta,component,classification"]
    for mu in sorted(scan_result.table):
        pr = scan_result.table[mu]
        cid = comp_id.get(mu, "")
        kind = comp_kind.get(mu, "")
        lines.append(
            f"\"{lattice.format_multiplicity(mu)}\",{pr.d1},{pr.d2},{pr.delta},{cid},{kind}")
    return "\n".join(lines) + "\n"
