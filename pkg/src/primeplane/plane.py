"""The affine plane over F_p: the rank-2 group and its dual as planes.

The p+1 order-p subgroups are the "directions", their cosets the
"lines".  Both the group and its dual are represented by the same Point
type with a side tag; the pairing <(a,b),(x,y)> = ax + by labels the
character (a,b) acting on (x,y) by zeta^(ax+by), which makes dual-side
lines literal lines.  Point sets are bitmaps over the p^2 point indices
(index = x*p + y), so the blocking-set and cover searches run on integer
masks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import FrozenSet, Iterable, Optional, Tuple

from .cyclotomic import check_prime

PRIMAL = "primal"
DUAL = "dual"
_SIDES = (PRIMAL, DUAL)

_PAIR_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def check_side(side: str) -> str:
    if side not in _SIDES:
        raise ValueError(f"side must be 'primal' or 'dual', got {side!r}")
    return side


def opposite_side(side: str) -> str:
    check_side(side)
    return DUAL if side == PRIMAL else PRIMAL


@dataclass(frozen=True)
class Point:
    """A point of F_p^2 or of its dual, tagged by side.

    A dual point (a, b) labels the character sending a primal point
    (x, y) to zeta^(ax + by).
    """

    p: int
    x: int
    y: int
    side: str = PRIMAL

    def __post_init__(self):
        check_prime(self.p)
        check_side(self.side)
        if not (0 <= self.x < self.p and 0 <= self.y < self.p):
            raise ValueError(f"coordinates out of range mod {self.p}: ({self.x}, {self.y})")

    @classmethod
    def of(cls, p: int, x: int, y: int, side: str = PRIMAL) -> "Point":
        return cls(p, x % p, y % p, side)

    @classmethod
    def from_index(cls, p: int, index: int, side: str = PRIMAL) -> "Point":
        return cls(p, index // p, index % p, side)

    @property
    def index(self) -> int:
        return self.x * self.p + self.y

    def is_origin(self) -> bool:
        return self.x == 0 and self.y == 0

    def _require_like(self, other: "Point"):
        if not isinstance(other, Point) or other.p != self.p or other.side != self.side:
            raise ValueError("points must share p and side")

    def __add__(self, other: "Point") -> "Point":
        self._require_like(other)
        return Point.of(self.p, self.x + other.x, self.y + other.y, self.side)

    def __sub__(self, other: "Point") -> "Point":
        self._require_like(other)
        return Point.of(self.p, self.x - other.x, self.y - other.y, self.side)

    def __neg__(self) -> "Point":
        return Point.of(self.p, -self.x, -self.y, self.side)

    def scaled(self, t: int) -> "Point":
        return Point.of(self.p, t * self.x, t * self.y, self.side)

    def pair(self, other: "Point") -> int:
        """<chi, g> mod p for one dual and one primal point, in either order."""
        if not isinstance(other, Point) or other.p != self.p or other.side == self.side:
            raise ValueError("pairing requires one primal and one dual point")
        return (self.x * other.x + self.y * other.y) % self.p


def orthogonal_direction(p: int, d: int) -> int:
    """Direction index of the orthogonal subgroup under the pairing ax + by."""
    check_prime(p)
    if not 0 <= d <= p:
        raise ValueError(f"direction must lie in [0, {p}], got {d}")
    if d == 0:
        return p
    if d == p:
        return 0
    return (-pow(d, p - 2, p)) % p


@dataclass(frozen=True)
class LineSubgroup:
    """One of the p+1 order-p subgroups: slope d for d < p (generated by
    (1, d)); direction index p is the vertical subgroup generated by (0, 1)."""

    p: int
    direction: int
    side: str = PRIMAL

    def __post_init__(self):
        check_prime(self.p)
        check_side(self.side)
        if not 0 <= self.direction <= self.p:
            raise ValueError(f"direction must lie in [0, {self.p}], got {self.direction}")

    @property
    def generator(self) -> Point:
        if self.direction == self.p:
            return Point(self.p, 0, 1, self.side)
        return Point(self.p, 1, self.direction, self.side)

    def members(self) -> Tuple[Point, ...]:
        g = self.generator
        return tuple(g.scaled(t) for t in range(self.p))

    def contains(self, pt: Point) -> bool:
        if pt.p != self.p or pt.side != self.side:
            raise ValueError("side or order mismatch")
        if self.direction == self.p:
            return pt.x == 0
        return pt.y == (self.direction * pt.x) % self.p

    def orthogonal(self) -> "LineSubgroup":
        return LineSubgroup(self.p, orthogonal_direction(self.p, self.direction),
                            opposite_side(self.side))


def all_subgroups(p: int, side: str = PRIMAL) -> Tuple[LineSubgroup, ...]:
    """The p+1 nonzero proper subgroups, indexed by direction."""
    check_prime(p)
    return tuple(LineSubgroup(p, d, side) for d in range(p + 1))


def orthogonal(subgroup: LineSubgroup) -> LineSubgroup:
    return subgroup.orthogonal()


def _canonical_rep(subgroup: LineSubgroup, point: Point) -> Tuple[int, int]:
    p, d = subgroup.p, subgroup.direction
    if d == p:
        return (point.x, 0)
    return (0, (point.y - d * point.x) % p)


@dataclass(frozen=True)
class Coset:
    """A line: a subgroup plus its lexicographically least member."""

    subgroup: LineSubgroup
    rep: Point

    def __post_init__(self):
        sub, rep = self.subgroup, self.rep
        if rep.p != sub.p or rep.side != sub.side:
            raise ValueError("representative must share p and side with the subgroup")
        canon = _canonical_rep(sub, rep)
        if (rep.x, rep.y) != canon:
            object.__setattr__(self, "rep", Point(sub.p, canon[0], canon[1], sub.side))

    @classmethod
    def through(cls, point: Point, subgroup: LineSubgroup) -> "Coset":
        return cls(subgroup, point)

    @property
    def p(self) -> int:
        return self.subgroup.p

    @property
    def side(self) -> str:
        return self.subgroup.side

    @property
    def direction(self) -> int:
        return self.subgroup.direction

    @property
    def coset_id(self) -> int:
        return self.rep.x if self.direction == self.p else self.rep.y

    def members(self) -> Tuple[Point, ...]:
        return tuple(self.rep + h for h in self.subgroup.members())

    def contains(self, pt: Point) -> bool:
        return self.subgroup.contains(pt - self.rep)

    def mask(self) -> int:
        return tables(self.p).coset_masks[self.direction][self.coset_id]


def coset_of(point: Point, subgroup: LineSubgroup) -> Coset:
    """The line through `point` in the given direction; sides must match."""
    return Coset.through(point, subgroup)


def coset_from_id(p: int, direction: int, coset_id: int, side: str = PRIMAL) -> Coset:
    sub = LineSubgroup(p, direction, side)
    if direction == p:
        return Coset(sub, Point(p, coset_id, 0, side))
    return Coset(sub, Point(p, 0, coset_id, side))


def lines_in_direction(subgroup: LineSubgroup) -> Tuple[Coset, ...]:
    """The p parallel lines of one direction, in canonical coset-id order."""
    p, d, side = subgroup.p, subgroup.direction, subgroup.side
    return tuple(coset_from_id(p, d, j, side) for j in range(p))


@dataclass(frozen=True)
class PointSet:
    """A subset of the p^2 points of one side, stored as a bitmap."""

    p: int
    side: str
    mask: int

    def __post_init__(self):
        check_prime(self.p)
        check_side(self.side)
        if not 0 <= self.mask < (1 << (self.p * self.p)):
            raise ValueError("mask out of range for this plane")

    @classmethod
    def empty(cls, p: int, side: str = PRIMAL) -> "PointSet":
        return cls(p, side, 0)

    @classmethod
    def full(cls, p: int, side: str = PRIMAL) -> "PointSet":
        return cls(p, side, (1 << (p * p)) - 1)

    @classmethod
    def from_points(cls, p: int, points: Iterable[Point], side: str = PRIMAL) -> "PointSet":
        mask = 0
        for pt in points:
            if pt.p != p or pt.side != side:
                raise ValueError("point does not match the set's p and side")
            mask |= 1 << pt.index
        return cls(p, side, mask)

    @classmethod
    def from_pairs(cls, p: int, pairs: Iterable[Tuple[int, int]], side: str = PRIMAL) -> "PointSet":
        mask = 0
        for x, y in pairs:
            if not (0 <= x < p and 0 <= y < p):
                raise ValueError(f"coordinates out of range mod {p}: ({x}, {y})")
            mask |= 1 << (x * p + y)
        return cls(p, side, mask)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def contains(self, pt: Point) -> bool:
        if pt.p != self.p or pt.side != self.side:
            raise ValueError("point does not match the set's p and side")
        return bool(self.mask >> pt.index & 1)

    def indices(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.p * self.p) if self.mask >> i & 1)

    def points(self) -> Tuple[Point, ...]:
        return tuple(Point.from_index(self.p, i, self.side) for i in self.indices())

    def pairs(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((i // self.p, i % self.p) for i in self.indices())

    def _require_like(self, other: "PointSet"):
        if not isinstance(other, PointSet) or other.p != self.p or other.side != self.side:
            raise ValueError("point sets must share p and side")

    def __or__(self, other: "PointSet") -> "PointSet":
        self._require_like(other)
        return PointSet(self.p, self.side, self.mask | other.mask)

    def __and__(self, other: "PointSet") -> "PointSet":
        self._require_like(other)
        return PointSet(self.p, self.side, self.mask & other.mask)

    def __sub__(self, other: "PointSet") -> "PointSet":
        self._require_like(other)
        return PointSet(self.p, self.side, self.mask & ~other.mask)

    def complement(self) -> "PointSet":
        return PointSet(self.p, self.side, ~self.mask & ((1 << (self.p * self.p)) - 1))

    def literal(self) -> str:
        body = ",".join(f"({x},{y})" for x, y in self.pairs())
        return f"{self.p}; {body}" if body else f"{self.p};"

    def to_json(self) -> dict:
        return {"p": self.p, "side": self.side, "points": [list(xy) for xy in self.pairs()]}


def parse_pointset(text: str, side: str = PRIMAL) -> PointSet:
    """Parse the literal 'p; (x1,y1),(x2,y2),...'."""
    head, sep, body = text.partition(";")
    if not sep:
        raise ValueError(f"malformed point-set literal {text!r}")
    try:
        p = int(head.strip())
    except ValueError as exc:
        raise ValueError(f"malformed point-set literal {text!r}") from exc
    check_prime(p)
    pairs = [(int(a), int(b)) for a, b in _PAIR_RE.findall(body)]
    leftover = _PAIR_RE.sub("", body).replace(",", "").strip()
    if leftover:
        raise ValueError(f"malformed point-set literal {text!r}")
    return PointSet.from_pairs(p, pairs, side)


# -- precomputed line tables -------------------------------------------------


class _Tables:
    __slots__ = ("p", "coset_masks", "coset_id", "lines_through", "all_lines", "full_mask")

    def __init__(self, p, coset_masks, coset_id, lines_through, all_lines, full_mask):
        self.p = p
        self.coset_masks = coset_masks
        self.coset_id = coset_id
        self.lines_through = lines_through
        self.all_lines = all_lines
        self.full_mask = full_mask


@lru_cache(maxsize=None)
def tables(p: int) -> _Tables:
    """Per-prime line tables shared by every search in this module."""
    check_prime(p)
    n = p * p
    coset_masks = []
    coset_id = []
    for d in range(p + 1):
        masks = [0] * p
        ids = [0] * n
        for x in range(p):
            for y in range(p):
                idx = x * p + y
                c = x if d == p else (y - d * x) % p
                masks[c] |= 1 << idx
                ids[idx] = c
        coset_masks.append(tuple(masks))
        coset_id.append(tuple(ids))
    coset_masks = tuple(coset_masks)
    coset_id = tuple(coset_id)
    lines_through = tuple(
        tuple((d, coset_masks[d][coset_id[d][idx]]) for d in range(p + 1))
        for idx in range(n)
    )
    all_lines = tuple(
        (d, j, coset_masks[d][j]) for d in range(p + 1) for j in range(p)
    )
    return _Tables(p, coset_masks, coset_id, lines_through, all_lines, (1 << n) - 1)


# -- directions determined by a point set ------------------------------------


def direction_through(a: Point, b: Point) -> int:
    """Direction index of the unique line through two distinct points."""
    a._require_like(b)
    if a == b:
        raise ValueError("need two distinct points")
    p = a.p
    dx = (b.x - a.x) % p
    dy = (b.y - a.y) % p
    if dx == 0:
        return p
    return (dy * pow(dx, p - 2, p)) % p


def _direction_of_indices(p: int, i: int, j: int) -> int:
    dx = (j // p - i // p) % p
    dy = (j % p - i % p) % p
    if dx == 0:
        return p
    return (dy * pow(dx, p - 2, p)) % p


def directions_determined(P: PointSet) -> FrozenSet[int]:
    """The directions of lines through two distinct points of P."""
    if P.size < 2:
        raise ValueError("need at least two points to determine a direction")
    T = tables(P.p)
    out = set()
    for d in range(P.p + 1):
        for m in T.coset_masks[d]:
            if (m & P.mask).bit_count() >= 2:
                out.add(d)
                break
    return frozenset(out)


# -- blocking sets ------------------------------------------------------------


def is_blocking_set(P: PointSet) -> bool:
    """True iff P meets every one of the p(p+1) lines."""
    T = tables(P.p)
    return all(m & P.mask for _, _, m in T.all_lines)


def min_blocking_size(p: int) -> Tuple[int, PointSet]:
    """Exact minimum blocking-set size with one witness, by branch and bound.

    The union of two nonparallel lines (2p-1 points) seeds the upper
    bound; the search then proves that nothing smaller blocks every line.
    """
    check_prime(p)
    T = tables(p)
    line_masks = tuple(m for _, _, m in T.all_lines)
    init_mask = T.coset_masks[0][0] | T.coset_masks[p][0]
    best_size = init_mask.bit_count()
    best_mask = init_mask
    n = p * p
    per_point = p + 1
    point_lines = T.lines_through

    def dfs(chosen: int, count: int):
        nonlocal best_size, best_mask
        first_mask = 0
        unmet = 0
        for m in line_masks:
            if not (m & chosen):
                unmet += 1
                if not first_mask:
                    first_mask = m
        if unmet == 0:
            if count < best_size:
                best_size, best_mask = count, chosen
            return
        need = -(-unmet // per_point)
        if count + need >= best_size:
            return
        pts = [i for i in range(n) if first_mask >> i & 1]

        def gain(i):
            return sum(1 for _, lm in point_lines[i] if not (lm & chosen))

        for i in sorted(pts, key=lambda i: (-gain(i), i)):
            dfs(chosen | (1 << i), count + 1)

    dfs(0, 0)
    return best_size, PointSet(p, PRIMAL, best_mask)


@dataclass(frozen=True)
class PencilReport:
    """Stability data for an almost-blocking set.

    k counts the directions with at least one unblocked line, m is the
    largest number of unblocked lines within one such pencil, and the
    bound is 2p - k - m (the Jamison floor 2p - 1 when P blocks
    everything, in which case k = m = 0)."""

    size: int
    k: int
    m: int
    bound: int
    holds: bool
    is_blocking: bool


def pencil_stability(P: PointSet) -> PencilReport:
    T = tables(P.p)
    p = P.p
    k = 0
    m = 0
    for d in range(p + 1):
        u = sum(1 for mask in T.coset_masks[d] if not (mask & P.mask))
        if u:
            k += 1
            if u > m:
                m = u
    bound = 2 * p - 1 if k == 0 else 2 * p - k - m
    return PencilReport(size=P.size, k=k, m=m, bound=bound,
                        holds=P.size >= bound, is_blocking=(k == 0))


# -- direction lemmas ----------------------------------------------------------


def bounded_line_direction(P: PointSet) -> Optional[int]:
    """A determined direction whose lines all carry fewer than
    sqrt(|P|) + max(1, |P|/2p) points of P, or None if no direction works.

    The comparison is exact: with r the rational slack term, a count c
    qualifies iff c - r < 0 or (c - r)^2 < |P|.
    """
    p = P.p
    size = P.size
    if not 2 <= size <= 4 * p:
        raise ValueError(f"need 2 <= |P| <= 4p, got |P|={size}")
    slack = max(Fraction(1), Fraction(size, 2 * p))
    T = tables(p)
    for d in sorted(directions_determined(P)):
        worst = max((mask & P.mask).bit_count() for mask in T.coset_masks[d])
        excess = worst - slack
        if excess < 0 or excess * excess < size:
            return d
    return None


def rich_direction_search(P: PointSet) -> Optional[int]:
    """A direction with some line carrying >= 3 points of P while every
    line in it carries at most (p+5)/2, for (3p+7)/2 <= |P| <= 2p+7 and
    P not inside a union of two lines."""
    p = P.p
    if p < 3:
        raise ValueError("defined for p >= 3")
    size = P.size
    if not (3 * p + 7 <= 2 * size and size <= 2 * p + 7):
        raise ValueError(f"need (3p+7)/2 <= |P| <= 2p+7, got |P|={size}")
    if two_line_cover(P):
        raise ValueError("P must not be contained in a union of two lines")
    T = tables(p)
    for d in range(p + 1):
        worst = max((mask & P.mask).bit_count() for mask in T.coset_masks[d])
        if worst >= 3 and 2 * worst <= p + 5:
            return d
    return None


# -- line covers ---------------------------------------------------------------


def one_line_cover(P: PointSet) -> bool:
    """True iff some single line contains P."""
    if P.size <= 1:
        return True
    idx = P.indices()
    d = _direction_of_indices(P.p, idx[0], idx[1])
    T = tables(P.p)
    line = T.coset_masks[d][T.coset_id[d][idx[0]]]
    return not (P.mask & ~line)


def _cover_search(p: int, mask: int, budget: int, T: _Tables) -> bool:
    if mask == 0:
        return True
    if budget <= 0:
        return False
    if mask.bit_count() > budget * p:
        return False
    idx = (mask & -mask).bit_length() - 1
    options = sorted(T.lines_through[idx],
                     key=lambda dm: (-(dm[1] & mask).bit_count(), dm[0]))
    for _, line in options:
        if _cover_search(p, mask & ~line, budget - 1, T):
            return True
    return False


def covered_by_lines(P: PointSet, count: int) -> bool:
    """True iff some `count` lines (any directions) cover P."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    return _cover_search(P.p, P.mask, count, tables(P.p))


def two_line_cover(P: PointSet) -> bool:
    return covered_by_lines(P, 2)


def min_line_cover(P: PointSet, cap: Optional[int] = None) -> Optional[int]:
    """Exact minimum number of lines covering P, or None if above `cap`.

    Any set is covered by the p parallel lines of one direction, so the
    default cap p always yields an integer.
    """
    cap = P.p if cap is None else cap
    for m in range(cap + 1):
        if covered_by_lines(P, m):
            return m
    return None
