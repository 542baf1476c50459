"""Reference-relative coordinates and fuzzy point descriptors.

Every spatial statement in this package is made in the frame of a reference
box: each axis of the reference spans exactly [-1, 1], so a relative
coordinate of -1 sits on the low edge (left/top), +1 on the high edge, and
magnitudes beyond 1 are measured in reference half-widths.  A relative
scalar is then fuzzified into at most two of ten point descriptors per axis
(far/near/close/edge/inside, low or high side) using an interlocking family
of trapezoids that always sums to one.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

from .errors import DegenerateBox, DegenerateReference

INF = math.inf

# Canonical per-axis descriptor names, ordered low side outermost-first,
# then high side innermost-first:  f=far n=near c=close e=edge i=inside,
# l/r = left/right, a/b = above/below.
POINT_NAMES = {
    "x": ("fl", "nl", "cl", "el", "il", "ir", "er", "cr", "nr", "fr"),
    "y": ("fa", "na", "ca", "ea", "ia", "ib", "eb", "cb", "nb", "fb"),
}
POINT_INDEX = {
    axis: {name: i for i, name in enumerate(names)}
    for axis, names in POINT_NAMES.items()
}

_ZONES = ("far", "near", "close", "edge", "inside")


def point_zone(index: int) -> str:
    """Zone of the canonical descriptor index (0..9)."""
    return _ZONES[index] if index <= 4 else _ZONES[9 - index]


def point_side(index: int) -> str:
    """Side of the canonical descriptor index: low = left/above."""
    return "low" if index <= 4 else "high"


def mirror_point_index(index: int) -> int:
    """Counterpart of a point descriptor under reflection (fl<->fr, ...)."""
    return 9 - index


# Default trapezoid knots (a, b, c, d) per descriptor, canonical order.
# They interlock exactly (next.a == prev.c, next.b == prev.d), so the
# memberships form an exact partition of unity; the edge plateau straddles
# u = -1 / +1 so a box relative to itself is crisp; close/near/far start at
# roughly 1-2, 2-4 and >4 reference widths from the center.
DEFAULT_KNOTS = (
    (-INF, -INF, -5.0, -4.0),
    (-5.0, -4.0, -3.0, -2.0),
    (-3.0, -2.0, -1.25, -1.05),
    (-1.25, -1.05, -0.95, -0.75),
    (-0.95, -0.75, -0.1, 0.1),
    (-0.1, 0.1, 0.75, 0.95),
    (0.75, 0.95, 1.05, 1.25),
    (1.05, 1.25, 2.0, 3.0),
    (2.0, 3.0, 4.0, 5.0),
    (4.0, 5.0, INF, INF),
)


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box; degenerate (zero-area) boxes are rejected outright."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        for v in (self.x_min, self.y_min, self.x_max, self.y_max):
            if not math.isfinite(v):
                raise DegenerateBox(f"non-finite coordinate in {self.as_tuple()}")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise DegenerateBox(
                f"box {self.as_tuple()} must satisfy x_min < x_max and y_min < y_max"
            )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.y_min, self.x_max, self.y_max)

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min


def relative_coordinate(p: float, lo: float, hi: float) -> float:
    """Map p into the [lo, hi] reference frame: lo -> -1, hi -> +1."""
    if not hi > lo:
        raise DegenerateReference(f"reference interval [{lo}, {hi}] has no width")
    return 2.0 * (p - lo) / (hi - lo) - 1.0


def relativize_box(
    b: BoundingBox, r: BoundingBox
) -> tuple[float, float, float, float]:
    """Corner coordinates of ``b`` in the frame of reference box ``r``.

    Returns (u, u', v, v') for the x-corners and y-corners respectively;
    u <= u' and v <= v' since box widths are strictly positive.
    """
    u = relative_coordinate(b.x_min, r.x_min, r.x_max)
    u2 = relative_coordinate(b.x_max, r.x_min, r.x_max)
    v = relative_coordinate(b.y_min, r.y_min, r.y_max)
    v2 = relative_coordinate(b.y_max, r.y_min, r.y_max)
    return (u, u2, v, v2)


def trapezoid_membership(u: float, knots) -> float:
    """Membership of u in one trapezoid (a, b, c, d); total on finite u."""
    a, b, c, d = knots
    if b <= u <= c:
        return 1.0
    if a < u < b:
        return (u - a) / (b - a)
    if c < u < d:
        return (d - u) / (d - c)
    return 0.0


@dataclass(frozen=True)
class FuzzyPartition:
    """Ten interlocking trapezoids over the relative-coordinate axis.

    ``trapezoids`` holds (a, b, c, d) knots in canonical descriptor order.
    Construction only checks shape; run :func:`validate_partition` to check
    the partition invariants (exact sum to one, mirror symmetry, shoulders).
    """

    trapezoids: tuple

    def __post_init__(self):
        traps = tuple(tuple(float(k) for k in t) for t in self.trapezoids)
        if len(traps) != 10 or any(len(t) != 4 for t in traps):
            raise ValueError("a partition needs exactly 10 (a, b, c, d) tuples")
        object.__setattr__(self, "trapezoids", traps)
        # Crossover boundaries c0,d0,c1,d1,...,c8,d8 for segment lookup.
        bounds = []
        for a, b, c, d in traps[:-1]:
            bounds.append(c)
            bounds.append(d)
        object.__setattr__(self, "_bounds", tuple(bounds))

    @classmethod
    def default(cls) -> "FuzzyPartition":
        return _DEFAULT_PARTITION

    @classmethod
    def from_named(cls, knots_by_name, axis: str = "x") -> "FuzzyPartition":
        """Build from a {descriptor-name: [a, b, c, d]} mapping."""
        names = POINT_NAMES[axis]
        missing = [n for n in names if n not in knots_by_name]
        if missing:
            raise ValueError(f"missing knots for descriptors: {missing}")
        return cls(tuple(tuple(knots_by_name[n]) for n in names))

    def to_named(self, axis: str = "x") -> dict:
        return {
            name: list(self.trapezoids[i])
            for i, name in enumerate(POINT_NAMES[axis])
        }


_DEFAULT_PARTITION = FuzzyPartition(DEFAULT_KNOTS)


def fuzzify_indexed(u: float, part: FuzzyPartition):
    """Fast path: ((index, membership), ...) with 1 or 2 entries, all > 0.

    Assumes a validated, interlocking partition; memberships are computed
    with the same rising/falling expressions as ``trapezoid_membership`` so
    both routes agree bit for bit.
    """
    k = bisect_right(part._bounds, u)
    if k % 2 == 0:
        return ((k // 2, 1.0),)
    i = k // 2
    lo = part.trapezoids[i]
    hi = part.trapezoids[i + 1]
    mu_lo = (lo[3] - u) / (lo[3] - lo[2])
    mu_hi = (u - hi[0]) / (hi[1] - hi[0])
    if mu_lo <= 0.0:
        return ((i + 1, mu_hi),)
    if mu_hi <= 0.0:
        return ((i, mu_lo),)
    return ((i, mu_lo), (i + 1, mu_hi))


def fuzzify_scalar(u: float, part: FuzzyPartition | None = None, axis: str = "x") -> dict:
    """Point-descriptor memberships of one relative coordinate.

    Returns a sparse {name: membership} map with at most two entries whose
    values are positive and sum to one.
    """
    if part is None:
        part = _DEFAULT_PARTITION
    names = POINT_NAMES[axis]
    return {names[i]: mu for i, mu in fuzzify_indexed(u, part)}


def validate_partition(
    part: FuzzyPartition, grid_points: int = 2001, tol: float = 1e-9
) -> list:
    """Check all partition invariants; returns a list of violation strings.

    An empty list means the partition is sound.  Checks are structural
    (knot order, open shoulders, exact interlocking, mirror symmetry) plus a
    numeric sweep over a dense grid and every knot (sum to one within
    ``tol``, never more than two active descriptors).
    """
    violations = []
    traps = part.trapezoids
    names = POINT_NAMES["x"]

    for i, (a, b, c, d) in enumerate(traps):
        if any(math.isnan(k) for k in (a, b, c, d)):
            violations.append(f"knot order: {names[i]} contains NaN")
        elif not (a <= b <= c <= d):
            violations.append(f"knot order: {names[i]} must satisfy a <= b <= c <= d")

    first, last = traps[0], traps[-1]
    if not (first[0] == first[1] == -INF):
        violations.append("open shoulder: first trapezoid must have a = b = -inf")
    if not (last[2] == last[3] == INF):
        violations.append("open shoulder: last trapezoid must have c = d = inf")
    for i, (a, b, c, d) in enumerate(traps):
        if 0 < i and not math.isfinite(a):
            violations.append(f"open shoulder: only {names[0]} may reach -inf ({names[i]})")
        if i < 9 and not math.isfinite(d):
            violations.append(f"open shoulder: only {names[9]} may reach inf ({names[i]})")

    for i in range(9):
        prev, nxt = traps[i], traps[i + 1]
        if nxt[0] > prev[2] or nxt[1] > prev[3]:
            violations.append(f"coverage gap between {names[i]} and {names[i + 1]}")
        elif (nxt[0], nxt[1]) != (prev[2], prev[3]):
            violations.append(f"support overlap between {names[i]} and {names[i + 1]}")

    for i in range(5):
        a, b, c, d = traps[i]
        mirrored = (-d, -c, -b, -a)
        if traps[9 - i] != mirrored:
            violations.append(f"mirror asymmetry: {names[9 - i]} is not {names[i]} reflected")

    if violations:
        return violations  # numeric sweep assumes basic structure

    finite = [k for t in traps for k in t if math.isfinite(k)]
    lo, hi = min(finite) - 2.0, max(finite) + 2.0
    span = hi - lo
    samples = [lo + span * i / (grid_points - 1) for i in range(grid_points)]
    samples.extend(finite)
    for u in samples:
        mus = [trapezoid_membership(u, t) for t in traps]
        total = sum(mus)
        if abs(total - 1.0) > tol:
            violations.append(f"membership sum {total!r} at u={u!r} deviates from 1")
            break
        if sum(1 for m in mus if m > 0.0) > 2:
            violations.append(f"more than two active descriptors at u={u!r}")
            break
    return violations
