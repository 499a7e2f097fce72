"""Support profiles, the support-size bound evaluators with their
exception detection, and the structure classifier that recovers the
explicit shape of every exceptional function.

All verdicts come from exact rational comparisons; the irrational bounds
(square roots, p^(3/2), p^(4/3)) are decided by comparing integer powers.
An evaluator never reports "violated" for a function falling in the
stated exception class of its bound: the structural test runs first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cyclotomic import CycNum, check_prime, format_value, root_of_unity
from .fourier import (
    GFunc,
    fourier_transform,
    inverse_transform,
)
from .plane import (
    DUAL,
    PRIMAL,
    Coset,
    LineSubgroup,
    Point,
    PointSet,
    _direction_of_indices,
    coset_from_id,
    covered_by_lines,
    lines_in_direction,
    min_line_cover,
    orthogonal_direction,
    tables,
)

HOLDS = "holds"
EQUALITY = "holds-with-equality"
EXCEPTION = "exception"
VIOLATED = "violated"

#: checks meaningful for rank-2 functions, usable by name in sweeps
RANK2_CHECKS = ("product", "meshulam", "rational", "kp1", "kp2", "product3",
                "conjecture", "roots", "asym2", "asym3", "coset-counts")
#: checks meaningful for rank-1 functions
RANK1_CHECKS = ("product", "birotao")


# -- support profile ---------------------------------------------------------


@dataclass(frozen=True)
class DirectionStats:
    """Per-direction counting data: n_S/n_X are the smallest positive
    line intersections with the support and the transform support, K_S
    and K_X count the met lines."""

    direction: int
    n_S: int
    K_S: int
    n_X: int
    K_X: int


@dataclass(frozen=True)
class SupportProfile:
    p: int
    S: PointSet
    X: PointSet
    per_direction: Tuple[DirectionStats, ...]

    def stats(self, direction: int) -> DirectionStats:
        return self.per_direction[direction]

    def line_count(self, g: Point, direction: int) -> int:
        """Number of support points on the direction-d line through g."""
        T = tables(self.p)
        line = T.coset_masks[direction][T.coset_id[direction][g.index]]
        return (line & self.S.mask).bit_count()

    def isolated_count(self, direction: int) -> int:
        """Number of dual lines orthogonal to the given primal direction
        that contain exactly one point of the transform support."""
        od = orthogonal_direction(self.p, direction)
        T = tables(self.p)
        return sum(1 for m in T.coset_masks[od] if (m & self.X.mask).bit_count() == 1)


def support_profile(S: PointSet, X: PointSet) -> SupportProfile:
    if S.size == 0 or X.size == 0:
        raise ValueError("profile requires a nonzero function")
    p = S.p
    T = tables(p)
    per = []
    for d in range(p + 1):
        od = orthogonal_direction(p, d)
        s_counts = [(m & S.mask).bit_count() for m in T.coset_masks[d]]
        x_counts = [(m & X.mask).bit_count() for m in T.coset_masks[od]]
        per.append(DirectionStats(
            direction=d,
            n_S=min(c for c in s_counts if c),
            K_S=sum(1 for c in s_counts if c),
            n_X=min(c for c in x_counts if c),
            K_X=sum(1 for c in x_counts if c),
        ))
    return SupportProfile(p, S, X, tuple(per))


def profile(f: GFunc) -> SupportProfile:
    """Profile of a nonzero rank-2 function: supports plus all per-direction stats."""
    if f.rank != 2 or f.side != PRIMAL:
        raise ValueError("profile requires a rank-2 primal function")
    if f.is_zero_function():
        raise ValueError("zero function has no profile")
    return support_profile(f.support(), fourier_transform(f).support())


# -- reports -----------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, CycNum):
        return format_value(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (frozenset, set)):
        return sorted(_jsonable(v) for v in obj)
    return obj


@dataclass
class BoundReport:
    theorem: str
    verdict: str
    lhs: Fraction
    rhs: Fraction
    exception: Optional["ExceptionDescriptor"] = None
    witness: Optional[GFunc] = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict != VIOLATED

    def to_json(self) -> dict:
        out = {
            "theorem": self.theorem,
            "verdict": self.verdict,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
        }
        if self.exception is not None:
            out["exception"] = self.exception.to_json()
        if self.witness is not None:
            out["witness"] = self.witness.to_literal()
        if self.details:
            out["details"] = _jsonable(self.details)
        return out


def _ineq_verdict(lhs, rhs) -> str:
    if lhs == rhs:
        return EQUALITY
    return HOLDS if lhs > rhs else VIOLATED


def _sqrt_sum_ge(a: int, b: int, c: int) -> Tuple[bool, bool]:
    """Exact (holds, equality) for sqrt(a) + sqrt(b) >= c, a, b, c >= 0."""
    t = c * c - a - b
    if t < 0:
        return True, False
    if t == 0:
        return True, a * b == 0
    lhs = 4 * a * b
    return lhs >= t * t, lhs == t * t


# -- exception structure -------------------------------------------------------


KIND_SINGLE_COSET_CHARACTER = "single-coset-character"
KIND_TWO_CHARACTERS_ONE_COSET = "two-characters-one-coset"
KIND_CHARACTERS_ON_ONE_COSET = "characters-on-one-coset"
KIND_H_PERIODIC = "H-periodic"
KIND_ONE_CHARACTER_TWO_COSETS = "one-character-two-cosets"
KIND_CHARACTER_ON_COSETS = "character-on-cosets"
KIND_TWO_PARALLEL = "two-parallel-lines"
KIND_TWO_NONPARALLEL = "two-nonparallel-lines"


@dataclass(frozen=True)
class ExceptionDescriptor:
    """Explicit structure of a function whose support or transform
    support is covered by at most two lines.

    cover_side records where the line cover lives: "dual" means the
    lines cover the transform support (the descriptor rebuilds f
    directly), "primal" means they cover supp f (the descriptor rebuilds
    the transform, and reconstruction inverts it).
    """

    kind: str
    p: int
    cover_side: str = DUAL
    direction: Optional[int] = None
    directions: Tuple[int, ...] = ()
    offsets: Tuple[Point, ...] = ()
    characters: Tuple[Point, ...] = ()
    coefficients: Tuple[CycNum, ...] = ()
    components: Tuple[GFunc, ...] = ()
    details: Tuple[Tuple[str, object], ...] = ()

    def detail(self, key: str):
        for k, v in self.details:
            if k == key:
                return v
        return None

    def reconstruct(self) -> GFunc:
        p = self.p
        if self.kind in (KIND_SINGLE_COSET_CHARACTER, KIND_TWO_CHARACTERS_ONE_COSET,
                         KIND_CHARACTERS_ON_ONE_COSET):
            out = [CycNum.zero(p)] * (p * p)
            coset = Coset.through(self.offsets[0], LineSubgroup(p, self.direction, PRIMAL))
            for z in coset.members():
                total = CycNum.zero(p)
                for chi, c in zip(self.characters, self.coefficients):
                    total = total + c * root_of_unity(p, chi.pair(z))
                out[z.index] = total
            return GFunc(p, 2, PRIMAL, out)
        if self.kind == KIND_H_PERIODIC:
            out = [CycNum.zero(p)] * (p * p)
            sub = LineSubgroup(p, self.direction, PRIMAL)
            for g, c in zip(self.offsets, self.coefficients):
                for z in Coset.through(g, sub).members():
                    out[z.index] = c
            return GFunc(p, 2, PRIMAL, out)
        if self.kind in (KIND_ONE_CHARACTER_TWO_COSETS, KIND_CHARACTER_ON_COSETS):
            out = [CycNum.zero(p)] * (p * p)
            sub = LineSubgroup(p, self.direction, PRIMAL)
            chi = self.characters[0]
            for g, c in zip(self.offsets, self.coefficients):
                for z in Coset.through(g, sub).members():
                    out[z.index] = c * root_of_unity(p, chi.pair(z))
            return GFunc(p, 2, PRIMAL, out)
        if self.kind == KIND_TWO_PARALLEL:
            func = _rebuild_two_parallel(self)
        elif self.kind == KIND_TWO_NONPARALLEL:
            func = _rebuild_two_nonparallel(self)
        else:
            raise ValueError(f"unknown descriptor kind {self.kind!r}")
        if self.cover_side == PRIMAL:
            return inverse_transform(func)
        return func

    def to_json(self) -> dict:
        out = {"kind": self.kind, "p": self.p, "cover_side": self.cover_side}
        if self.direction is not None:
            out["direction"] = self.direction
        if self.directions:
            out["directions"] = list(self.directions)
        if self.offsets:
            out["offsets"] = [[g.x, g.y] for g in self.offsets]
        if self.characters:
            out["characters"] = [[c.x, c.y] for c in self.characters]
        if self.coefficients:
            out["coefficients"] = [format_value(c) for c in self.coefficients]
        if self.components:
            out["components"] = [comp.to_literal() for comp in self.components]
        if self.details:
            out["details"] = _jsonable(dict(self.details))
        return out


def _rebuild_two_parallel(desc: ExceptionDescriptor) -> GFunc:
    p = desc.p
    comp1, comp2 = desc.components
    chi1, chi2 = desc.characters
    vals = []
    for idx in range(p * p):
        g = Point.from_index(p, idx, comp1.side)
        v = comp1.values[idx] * root_of_unity(p, chi1.pair(g)) + \
            comp2.values[idx] * root_of_unity(p, chi2.pair(g))
        vals.append(v)
    return GFunc(p, 2, comp1.side, vals)


def _rebuild_two_nonparallel(desc: ExceptionDescriptor) -> GFunc:
    p = desc.p
    f1, f2 = desc.components
    chi = desc.characters[0]
    d1, d2 = desc.directions
    side = f1.side
    gen1 = LineSubgroup(p, d1, side).generator
    gen2 = LineSubgroup(p, d2, side).generator
    vals = [CycNum.zero(p)] * (p * p)
    for t1 in range(p):
        h1 = gen1.scaled(t1)
        v1 = f1.values[t1]
        for t2 in range(p):
            g = h1 + gen2.scaled(t2)
            vals[g.index] = (v1 + f2.values[t2]) * root_of_unity(p, chi.pair(g))
    return GFunc(p, 2, side, vals)


def _line_direction_containing(P: PointSet) -> Optional[int]:
    """Least direction whose single line contains P, or None."""
    T = tables(P.p)
    for d in range(P.p + 1):
        for m in T.coset_masks[d]:
            if not (P.mask & ~m):
                return d
    return None


def _full_line_split(P: PointSet, direction: int) -> List[int]:
    """Coset ids of the direction's lines meeting P; raises if P is not
    an exact union of full lines (which the coset lemmas guarantee)."""
    T = tables(P.p)
    ids = []
    union = 0
    for j, m in enumerate(T.coset_masks[direction]):
        if m & P.mask:
            ids.append(j)
            union |= m
    if union != P.mask:
        raise RuntimeError("support is not a union of full lines as the lemma requires")
    return ids


def _canonical_two_line_pair(P: PointSet) -> Optional[Tuple[Tuple[int, int], Tuple[int, int]]]:
    """Canonical pair of (direction, coset-id) lines covering P, with
    both lines meeting P; parallel covers are preferred, then lexicographic
    order.  Returns None if no two lines cover P."""
    if P.size == 0:
        return None
    p = P.p
    T = tables(p)
    x0 = (P.mask & -P.mask).bit_length() - 1
    pairs = set()
    for d1, line1 in T.lines_through[x0]:
        rest = P.mask & ~line1
        if rest == 0:
            continue
        j1 = T.coset_id[d1][x0]
        if rest.bit_count() == 1:
            y = (rest & -rest).bit_length() - 1
            for d2, line2 in T.lines_through[y]:
                j2 = T.coset_id[d2][y]
                if (d1, j1) != (d2, j2):
                    pairs.add(tuple(sorted(((d1, j1), (d2, j2)))))
        else:
            y1 = (rest & -rest).bit_length() - 1
            rest2 = rest & ~(1 << y1)
            y2 = (rest2 & -rest2).bit_length() - 1
            d2 = _direction_of_indices(p, y1, y2)
            j2 = T.coset_id[d2][y1]
            if not (rest & ~T.coset_masks[d2][j2]):
                pairs.add(tuple(sorted(((d1, j1), (d2, j2)))))
    if not pairs:
        return None
    parallel = [q for q in pairs if q[0][0] == q[1][0]]
    return min(parallel) if parallel else min(pairs)


def _line_rep_point(p: int, direction: int, coset_id: int, side: str) -> Point:
    return coset_from_id(p, direction, coset_id, side).rep


def _line_intersection(p: int, side: str, l1: Tuple[int, int], l2: Tuple[int, int]) -> Point:
    """The unique common point of two nonparallel lines."""
    (d1, j1), (d2, j2) = l1, l2
    if d1 == p:
        x = j1
        y = (j2 + d2 * x) % p
    elif d2 == p:
        x = j2
        y = (j1 + d1 * x) % p
    else:
        x = ((j2 - j1) * pow(d1 - d2, p - 2, p)) % p
        y = (j1 + d1 * x) % p
    return Point(p, x, y, side)


def _most_common_value(values: Sequence[CycNum]) -> CycNum:
    """The most frequent value; ties broken by first occurrence."""
    best = None
    best_count = -1
    seen = []
    for v in values:
        if any(v == s for s in seen):
            continue
        seen.append(v)
        count = sum(1 for w in values if w == v)
        if count > best_count:
            best, best_count = v, count
    return best


def _classify_one_primal_line(f: GFunc, fhat: GFunc, S: PointSet, X: PointSet,
                              d: int) -> ExceptionDescriptor:
    p = f.p
    g0 = Point.from_index(p, (S.mask & -S.mask).bit_length() - 1)
    coset = Coset.through(g0, LineSubgroup(p, d, PRIMAL))
    od = orthogonal_direction(p, d)
    ids = _full_line_split(X, od)
    chars = tuple(_line_rep_point(p, od, j, DUAL) for j in ids)
    coeffs = tuple(fhat.value(chi) * p for chi in chars)
    if any(c.is_zero() for c in coeffs):
        raise RuntimeError("vanishing coefficient in a coset-character recovery")
    kind = {1: KIND_SINGLE_COSET_CHARACTER, 2: KIND_TWO_CHARACTERS_ONE_COSET}.get(
        len(chars), KIND_CHARACTERS_ON_ONE_COSET)
    return ExceptionDescriptor(kind=kind, p=p, cover_side=DUAL, direction=d,
                               offsets=(coset.rep,), characters=chars, coefficients=coeffs)


def _classify_one_dual_line(f: GFunc, S: PointSet, X: PointSet, e: int) -> ExceptionDescriptor:
    p = f.p
    T = tables(p)
    w0 = (X.mask & -X.mask).bit_length() - 1
    chi = _line_rep_point(p, e, T.coset_id[e][w0], DUAL)
    d = orthogonal_direction(p, e)
    ids = _full_line_split(S, d)
    offsets = tuple(_line_rep_point(p, d, j, PRIMAL) for j in ids)
    if chi.is_origin():
        coeffs = tuple(f.value(g) for g in offsets)
        return ExceptionDescriptor(kind=KIND_H_PERIODIC, p=p, cover_side=DUAL, direction=d,
                                   offsets=offsets, coefficients=coeffs)
    coeffs = tuple(f.value(g) * root_of_unity(p, (p - chi.pair(g)) % p) for g in offsets)
    kind = KIND_ONE_CHARACTER_TWO_COSETS if len(offsets) == 2 else KIND_CHARACTER_ON_COSETS
    return ExceptionDescriptor(kind=kind, p=p, cover_side=DUAL, direction=d,
                               offsets=offsets, characters=(chi,), coefficients=coeffs)


def _classify_two_lines(func: GFunc, hat: GFunc, cover_side: str) -> Optional[ExceptionDescriptor]:
    """Structure of `func` whose transform support is covered by two lines;
    `hat` must be the transform of `func`."""
    p = func.p
    Xs = PointSet(p, hat.side, hat.support_mask)
    pair = _canonical_two_line_pair(Xs)
    if pair is None:
        return None
    (d1, j1), (d2, j2) = pair
    hat_side, func_side = hat.side, func.side
    if d1 == d2:
        prim_dir = orthogonal_direction(p, d1)
        chi1 = _line_rep_point(p, d1, j1, hat_side)
        chi2 = _line_rep_point(p, d2, j2, hat_side)
        psis = LineSubgroup(p, d1, hat_side).members()
        comps = []
        for chi in (chi1, chi2):
            vals = [None] * (p * p)
            for coset in lines_in_direction(LineSubgroup(p, prim_dir, func_side)):
                g0 = coset.rep
                total = CycNum.zero(p)
                for psi in psis:
                    hv = hat.values[(chi + psi).index]
                    if not hv.is_zero():
                        total = total + hv * root_of_unity(p, psi.pair(g0))
                for g in coset.members():
                    vals[g.index] = total
            comps.append(GFunc(p, 2, func_side, vals))
        rebuilt = _rebuild_two_parallel(ExceptionDescriptor(
            kind=KIND_TWO_PARALLEL, p=p, cover_side=cover_side, direction=prim_dir,
            characters=(chi1, chi2), components=tuple(comps)))
        if rebuilt != func:
            raise RuntimeError("two-parallel decomposition failed to rebuild the function")
        n_union = (comps[0].support_mask | comps[1].support_mask).bit_count()
        s = func.support_size
        if not (n_union * (p - 1) <= s * p and s <= n_union):
            raise RuntimeError("two-parallel support sandwich failed")
        return ExceptionDescriptor(kind=KIND_TWO_PARALLEL, p=p, cover_side=cover_side,
                                   direction=prim_dir, characters=(chi1, chi2),
                                   components=tuple(comps),
                                   details=(("support_union", n_union),
                                            ("support_size", s)))
    # nonparallel pair
    chi0 = _line_intersection(p, hat_side, (d1, j1), (d2, j2))
    dir1 = orthogonal_direction(p, d1)
    dir2 = orthogonal_direction(p, d2)
    F1 = LineSubgroup(p, d1, hat_side)
    F2 = LineSubgroup(p, d2, hat_side)
    gen1 = LineSubgroup(p, dir1, func_side).generator
    gen2 = LineSubgroup(p, dir2, func_side).generator
    f1_vals = []
    for t in range(p):
        h1 = gen1.scaled(t)
        total = CycNum.zero(p)
        for psi in F2.members():
            if psi.is_origin():
                continue
            hv = hat.values[(chi0 + psi).index]
            if not hv.is_zero():
                total = total + hv * root_of_unity(p, psi.pair(h1))
        f1_vals.append(total)
    f2_vals = []
    for t in range(p):
        h2 = gen2.scaled(t)
        total = CycNum.zero(p)
        for psi in F1.members():
            hv = hat.values[(chi0 + psi).index]
            if not hv.is_zero():
                total = total + hv * root_of_unity(p, psi.pair(h2))
        f2_vals.append(total)
    s = func.support_size
    details: List[Tuple[str, object]] = []
    if 2 * s < p * p:
        shift = _most_common_value(f1_vals)
        f1_vals = [v - shift for v in f1_vals]
        f2_vals = [v + shift for v in f2_vals]
        # zero must be among the most frequent values of the second component
        zero_count = sum(1 for v in f2_vals if v.is_zero())
        best_count = max(sum(1 for w in f2_vals if w == v) for v in f2_vals)
        if zero_count != best_count:
            raise RuntimeError("nonparallel translation did not zero the frequent value")
        n1 = sum(1 for v in f1_vals if not v.is_zero())
        n2 = sum(1 for v in f2_vals if not v.is_zero())
        middle = p * n1 + p * n2
        if not (s <= middle and Fraction(middle) <= s + Fraction(2 * s * s, p * p)):
            raise RuntimeError("two-nonparallel support sandwich failed")
        details = [("component_supports", (n1, n2)), ("support_size", s)]
    comps = (GFunc(p, 1, func_side, f1_vals), GFunc(p, 1, func_side, f2_vals))
    desc = ExceptionDescriptor(kind=KIND_TWO_NONPARALLEL, p=p, cover_side=cover_side,
                               directions=(dir1, dir2), characters=(chi0,),
                               components=comps, details=tuple(details))
    if _rebuild_two_nonparallel(desc) != func:
        raise RuntimeError("two-nonparallel decomposition failed to rebuild the function")
    return desc


def classify_exception(f: GFunc) -> Optional[ExceptionDescriptor]:
    """Recover the explicit structure of f when supp f or supp of the
    transform fits in one line or in a union of two lines; None otherwise.

    Priorities: one-line covers first, then two parallel lines, then two
    nonparallel ones; transform-side covers are preferred to function-side
    covers.  The returned descriptor always reconstructs f exactly.
    """
    if f.rank != 2 or f.side != PRIMAL:
        raise ValueError("classification requires a rank-2 primal function")
    if f.is_zero_function():
        raise ValueError("zero function cannot be classified")
    fhat = fourier_transform(f)
    S = f.support()
    X = fhat.support()
    # periodicity first: the transform support sits on a dual line through
    # the origin exactly when f is constant on the cosets of one direction
    e = _line_direction_containing(X)
    periodic = False
    if e is not None:
        T = tables(f.p)
        w0 = (X.mask & -X.mask).bit_length() - 1
        periodic = _line_rep_point(f.p, e, T.coset_id[e][w0], DUAL).is_origin()
    if periodic:
        desc = _classify_one_dual_line(f, S, X, e)
        _verify_reconstruction(desc, f)
        return desc
    d = _line_direction_containing(S)
    if d is not None:
        desc = _classify_one_primal_line(f, fhat, S, X, d)
        _verify_reconstruction(desc, f)
        return desc
    if e is not None:
        desc = _classify_one_dual_line(f, S, X, e)
        _verify_reconstruction(desc, f)
        return desc
    desc = _classify_two_lines(f, fhat, cover_side=DUAL)
    if desc is not None:
        _verify_reconstruction(desc, f)
        return desc
    fhh = fourier_transform(fhat)
    desc = _classify_two_lines(fhat, fhh, cover_side=PRIMAL)
    if desc is not None:
        _verify_reconstruction(desc, f)
        return desc
    return None


def _verify_reconstruction(desc: ExceptionDescriptor, f: GFunc):
    if desc.reconstruct() != f:
        raise RuntimeError(f"descriptor {desc.kind} failed to reconstruct the function")


# -- structural predicates shared by the evaluators ------------------------------


def _periodic_directions(p: int, X: PointSet) -> List[int]:
    """Primal directions d whose orthogonal dual subgroup contains X,
    i.e. the function is constant on the d-direction cosets."""
    T = tables(p)
    out = []
    for d in range(p + 1):
        sub_mask = T.coset_masks[orthogonal_direction(p, d)][0]
        if not (X.mask & ~sub_mask):
            out.append(d)
    return out


def _orthogonal_coset_pair(p: int, S: PointSet, X: PointSet) -> Optional[Tuple[int, int]]:
    """(d, orth(d)) when S is exactly one d-line and X exactly one line
    in the orthogonal direction."""
    T = tables(p)
    for d in range(p + 1):
        if S.mask in T.coset_masks[d]:
            od = orthogonal_direction(p, d)
            if X.mask in T.coset_masks[od]:
                return d, od
    return None


def _near_coset_pair(p: int, small: PointSet, large: PointSet) -> Optional[dict]:
    """small sits inside one line with at most one point missing, and
    large is exactly a union of one or two lines in the orthogonal
    direction."""
    if small.size < p - 1:
        return None
    T = tables(p)
    for d in range(p + 1):
        for line in T.coset_masks[d]:
            if small.mask & ~line:
                continue
            od = orthogonal_direction(p, d)
            ids = []
            union = 0
            for j, m in enumerate(T.coset_masks[od]):
                if large.mask & m:
                    ids.append(j)
                    union |= m
            if len(ids) <= 2 and union == large.mask:
                return {"small_direction": d, "large_direction": od, "large_cosets": ids}
    return None


def _coset_pair_exception(p: int, S: PointSet, X: PointSet) -> Optional[dict]:
    """The near-coset structure for whichever of S, X is smallest; on a
    tie both assignments are tried."""
    if S.size <= X.size:
        found = _near_coset_pair(p, S, X)
        if found is None and S.size == X.size:
            found = _near_coset_pair(p, X, S)
        return found
    return _near_coset_pair(p, X, S)


def _min_side_sets(S: PointSet, X: PointSet) -> List[PointSet]:
    if S.size < X.size:
        return [S]
    if X.size < S.size:
        return [X]
    return [S, X]


# -- evaluator cores --------------------------------------------------------------


def eval_product(p: int, rank: int, s_size: int, x_size: int) -> BoundReport:
    lhs = Fraction(s_size * x_size)
    rhs = Fraction(p**rank)
    return BoundReport("product", _ineq_verdict(lhs, rhs), lhs, rhs)


def eval_birotao(p: int, s_size: int, x_size: int) -> BoundReport:
    lhs = Fraction(s_size + x_size)
    rhs = Fraction(p + 1)
    return BoundReport("birotao", _ineq_verdict(lhs, rhs), lhs, rhs)


def eval_meshulam(p: int, s_size: int, x_size: int) -> BoundReport:
    lo, hi = min(s_size, x_size), max(s_size, x_size)
    lhs = lo + Fraction(hi, p)
    rhs = Fraction(p + 1)
    return BoundReport("meshulam", _ineq_verdict(lhs, rhs), lhs, rhs)


def eval_rational(p: int, S: PointSet, X: PointSet, rational: bool) -> BoundReport:
    if p < 3:
        raise ValueError("the rational bound is stated for p >= 3")
    if not rational:
        raise ValueError("the rational bound requires a rational-valued function")
    lo, hi = min(S.size, X.size), max(S.size, X.size)
    lhs = Fraction(lo, 2) + Fraction(hi, p - 1)
    rhs = Fraction(p + 1)
    periodic = _periodic_directions(p, X)
    if periodic:
        d = periodic[0]
        T = tables(p)
        sub_mask = T.coset_masks[orthogonal_direction(p, d)][0]
        origin_bit = 1
        if X.mask == origin_bit:
            matches = True
            note = "constant function; transform support is the principal character"
        elif X.mask & origin_bit:
            matches = X.mask == sub_mask
            note = "nonzero value sum; expected the full orthogonal subgroup"
        else:
            matches = X.mask == sub_mask & ~origin_bit
            note = "zero value sum; expected the punctured orthogonal subgroup"
        return BoundReport("rational", EXCEPTION, lhs, rhs, details={
            "periodic_directions": periodic,
            "stated_support_matches": matches,
            "note": note,
        })
    return BoundReport("rational", _ineq_verdict(lhs, rhs), lhs, rhs)


def eval_kp1(p: int, S: PointSet, X: PointSet) -> BoundReport:
    if p < 3:
        raise ValueError("the k = p-1 bound is stated for p >= 3")
    lo, hi = min(S.size, X.size), max(S.size, X.size)
    lhs = Fraction(lo, p - 1) + Fraction(hi, 2)
    rhs = Fraction(p + 1)
    pair = _orthogonal_coset_pair(p, S, X)
    if pair is not None:
        return BoundReport("kp1", EXCEPTION, lhs, rhs,
                           details={"orthogonal_pair_directions": list(pair)})
    return BoundReport("kp1", _ineq_verdict(lhs, rhs), lhs, rhs)


def eval_kp2(p: int, S: PointSet, X: PointSet) -> BoundReport:
    if p < 3:
        raise ValueError("the k = p-2 bound is stated for p >= 3")
    lo, hi = min(S.size, X.size), max(S.size, X.size)
    lhs = Fraction(lo, p - 2) + Fraction(hi, 3)
    rhs = Fraction(p + 1)
    alt_lhs = Fraction(lo)
    alt_rhs = Fraction(3 * (p - 1), 2)
    structure = _coset_pair_exception(p, S, X)
    if structure is not None:
        return BoundReport("kp2", EXCEPTION, lhs, rhs, details={"structure": structure})
    primary = _ineq_verdict(lhs, rhs)
    details = {"min_branch_lhs": alt_lhs, "min_branch_rhs": alt_rhs}
    if primary != VIOLATED:
        return BoundReport("kp2", primary, lhs, rhs, details=details)
    alt = _ineq_verdict(alt_lhs, alt_rhs)
    if alt != VIOLATED:
        return BoundReport("kp2", alt, alt_lhs, alt_rhs, details=details)
    return BoundReport("kp2", VIOLATED, lhs, rhs, details=details)


def eval_product3(p: int, S: PointSet, X: PointSet) -> BoundReport:
    if p < 3:
        raise ValueError("the strengthened product bound is stated for p >= 3")
    lhs = Fraction(S.size * X.size)
    rhs = Fraction(3 * p * (p - 2))
    details = {}
    if p == 3:
        details["advisory"] = "stated for p > 3; at p = 3 the bound equals p^2"
    lo = min(S.size, X.size)
    if lo <= 2:
        details["reason"] = "min support size at most 2"
        return BoundReport("product3", EXCEPTION, lhs, rhs, details=details)
    structure = _coset_pair_exception(p, S, X)
    if structure is not None:
        details["structure"] = structure
        return BoundReport("product3", EXCEPTION, lhs, rhs, details=details)
    return BoundReport("product3", _ineq_verdict(lhs, rhs), lhs, rhs, details=details)


def eval_conjecture(p: int, S: PointSet, X: PointSet, k: int) -> BoundReport:
    if not isinstance(k, int) or not 1 <= k <= p:
        raise ValueError(f"k must be an integer in [1, {p}], got {k!r}")
    lo, hi = min(S.size, X.size), max(S.size, X.size)
    lhs = Fraction(lo, k) + Fraction(hi, p + 1 - k)
    rhs = Fraction(p + 1)
    threshold = min(k, p + 1 - k)
    cover_s = min_line_cover(S)
    cover_x = min_line_cover(X)
    clause = cover_s < threshold or cover_x < threshold
    details = {"k": k, "cover_S": cover_s, "cover_X": cover_x,
               "cover_threshold": threshold, "cover_clause_applies": clause}
    verdict = _ineq_verdict(lhs, rhs)
    if verdict == VIOLATED and clause:
        verdict = EXCEPTION
    return BoundReport("conjecture", verdict, lhs, rhs, details=details)


def eval_roots(p: int, S: PointSet, X: PointSet) -> BoundReport:
    a, b = S.size, X.size
    c = p + 1
    holds, equal = _sqrt_sum_ge(a, b, c)
    t = c * c - a - b
    if t > 0:
        lhs, rhs = Fraction(4 * a * b), Fraction(t * t)
    else:
        lhs, rhs = Fraction(a + b), Fraction(c * c)
    limit = (p - 1) // 2
    cover_s = min_line_cover(S)
    cover_x = min_line_cover(X)
    clause = cover_s <= limit or cover_x <= limit
    details = {"S_size": a, "X_size": b, "cover_S": cover_s, "cover_X": cover_x,
               "cover_clause_applies": clause, "squared_compare": t > 0}
    if equal:
        verdict = EQUALITY
    elif holds:
        verdict = HOLDS
    elif clause:
        verdict = EXCEPTION
    else:
        verdict = VIOLATED
    return BoundReport("roots", verdict, lhs, rhs, details=details)


def _eval_asym(name: str, p: int, S: PointSet, X: PointSet, eps,
               coefficient: int, power_num: int, power_den: int,
               scale: Fraction, cover_lines: int, advisory_below: Optional[int]) -> BoundReport:
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    lo, hi = min(S.size, X.size), max(S.size, X.size)
    details = {"epsilon": eps}
    if advisory_below is not None and p < advisory_below:
        details["advisory"] = f"stated for p >= {advisory_below}"
    for small in _min_side_sets(S, X):
        if covered_by_lines(small, cover_lines):
            details["reason"] = f"min-side support within {cover_lines} line(s)"
            return BoundReport(name, EXCEPTION, Fraction(lo),
                               coefficient * (1 - eps) * p, details=details)
    b1_lhs = Fraction(lo)
    b1_rhs = coefficient * (1 - eps) * p
    # hi >= scale * eps * p^(num/den)  <=>  (hi/(scale*eps))^den >= p^num
    b2_lhs = Fraction(hi) ** power_den
    b2_rhs = (scale * eps) ** power_den * Fraction(p) ** power_num
    details["branch2_lhs"] = b2_lhs
    details["branch2_rhs"] = b2_rhs
    b1 = _ineq_verdict(b1_lhs, b1_rhs)
    b2 = _ineq_verdict(b2_lhs, b2_rhs)
    if b1 != VIOLATED:
        return BoundReport(name, b1, b1_lhs, b1_rhs, details=details)
    if b2 != VIOLATED:
        return BoundReport(name, b2, b2_lhs, b2_rhs, details=details)
    return BoundReport(name, VIOLATED, b1_lhs, b1_rhs, details=details)


def eval_asym2(p: int, S: PointSet, X: PointSet, eps) -> BoundReport:
    """min >= 2(1-eps)p or max >= eps p^(3/2), except when the min-side
    support sits inside one line; advisory below p = 31."""
    return _eval_asym("asym2", p, S, X, eps, coefficient=2, power_num=3, power_den=2,
                      scale=Fraction(1), cover_lines=1, advisory_below=31)


def eval_asym3(p: int, S: PointSet, X: PointSet, eps) -> BoundReport:
    """min >= 3(1-eps)p or max >= (eps/6) p^(4/3), except when the
    min-side support sits inside a union of two lines."""
    return _eval_asym("asym3", p, S, X, eps, coefficient=3, power_num=4, power_den=3,
                      scale=Fraction(1, 6), cover_lines=2, advisory_below=None)


def eval_coset_counts(p: int, S: PointSet, X: PointSet,
                      direction: Optional[int] = None) -> BoundReport:
    """The four met-line counting inequalities per direction:
    K_X >= p+1-n_S, |X| >= n_X (p+1-n_S), and their mirrored forms."""
    prof = support_profile(S, X)
    dirs = range(p + 1) if direction is None else [direction]
    rows = []
    all_hold = True
    tightest = None
    for d in dirs:
        st = prof.stats(d)
        checks = (
            ("K_X", st.K_X, p + 1 - st.n_S),
            ("X", X.size, st.n_X * (p + 1 - st.n_S)),
            ("K_S", st.K_S, p + 1 - st.n_X),
            ("S", S.size, st.n_S * (p + 1 - st.n_X)),
        )
        for label, lhs, rhs in checks:
            ok = lhs >= rhs
            all_hold = all_hold and ok
            slack = lhs - rhs
            if tightest is None or slack < tightest[0]:
                tightest = (slack, Fraction(lhs), Fraction(rhs))
            rows.append({"direction": d, "quantity": label, "lhs": lhs, "rhs": rhs, "ok": ok})
    verdict = HOLDS if all_hold else VIOLATED
    if all_hold and tightest[0] == 0:
        verdict = EQUALITY
    return BoundReport("coset-counts", verdict, tightest[1], tightest[2],
                       details={"inequalities": rows})


def evaluate(name: str, *, p: int, rank: int, s_size: int, x_size: int,
             S: Optional[PointSet] = None, X: Optional[PointSet] = None,
             rational: Optional[bool] = None, k: Optional[int] = None,
             eps=None) -> BoundReport:
    """Dispatch a named check against precomputed support data."""
    if name == "product":
        return eval_product(p, rank, s_size, x_size)
    if name == "birotao":
        if rank != 1:
            raise ValueError("the additive bound applies to rank-1 functions")
        return eval_birotao(p, s_size, x_size)
    if rank != 2 or S is None or X is None:
        raise ValueError(f"check {name!r} requires rank-2 support sets")
    if name == "meshulam":
        return eval_meshulam(p, s_size, x_size)
    if name == "rational":
        return eval_rational(p, S, X, bool(rational))
    if name == "kp1":
        return eval_kp1(p, S, X)
    if name == "kp2":
        return eval_kp2(p, S, X)
    if name == "product3":
        return eval_product3(p, S, X)
    if name == "conjecture":
        if k is None:
            raise ValueError("the conjecture check requires k")
        return eval_conjecture(p, S, X, k)
    if name == "roots":
        return eval_roots(p, S, X)
    if name == "asym2":
        if eps is None:
            raise ValueError("asym2 requires epsilon")
        return eval_asym2(p, S, X, eps)
    if name == "asym3":
        if eps is None:
            raise ValueError("asym3 requires epsilon")
        return eval_asym3(p, S, X, eps)
    if name == "coset-counts":
        return eval_coset_counts(p, S, X)
    raise ValueError(f"unknown check {name!r}")


# -- function-level wrappers -------------------------------------------------------


def _prepared(f: GFunc, need_rank2: bool = False):
    if f.is_zero_function():
        raise ValueError("bounds are stated for nonzero functions")
    if need_rank2 and (f.rank != 2 or f.side != PRIMAL):
        raise ValueError("this bound applies to rank-2 primal functions")
    fhat = fourier_transform(f)
    if f.rank == 2:
        S, X = f.support(), fhat.support()
        return fhat, S, X, S.size, X.size
    return fhat, None, None, f.support_size, fhat.support_size


def _finish(report: BoundReport, f: GFunc) -> BoundReport:
    if report.verdict == VIOLATED:
        report.witness = f
    elif report.verdict == EXCEPTION and f.rank == 2 and f.side == PRIMAL:
        # may legitimately stay None for cover-clause exceptions whose
        # supports need three or more lines
        report.exception = classify_exception(f)
    return report


def check_product(f: GFunc) -> BoundReport:
    _, _, _, s, x = _prepared(f)
    return _finish(eval_product(f.p, f.rank, s, x), f)


def check_birotao(f: GFunc) -> BoundReport:
    if f.rank != 1:
        raise ValueError("the additive bound applies to rank-1 functions")
    _, _, _, s, x = _prepared(f)
    return _finish(eval_birotao(f.p, s, x), f)


def check_meshulam(f: GFunc) -> BoundReport:
    _, _, _, s, x = _prepared(f, need_rank2=True)
    return _finish(eval_meshulam(f.p, s, x), f)


def check_rational(f: GFunc) -> BoundReport:
    _, S, X, _, _ = _prepared(f, need_rank2=True)
    return _finish(eval_rational(f.p, S, X, f.is_rational_valued()), f)


def check_kp1(f: GFunc) -> BoundReport:
    _, S, X, _, _ = _prepared(f, need_rank2=True)
    return _finish(eval_kp1(f.p, S, X), f)


def check_kp2(f: GFunc) -> BoundReport:
    _, S, X, _, _ = _prepared(f, need_rank2=True)
    return _finish(eval_kp2(f.p, S, X), f)


def check_product3(f: GFunc) -> BoundReport:
    _, S, X, _, _ = _prepared(f, need_rank2=True)
    return _finish(eval_product3(f.p, S, X), f)


def check_conjecture(f: GFunc, k: int) -> BoundReport:
    _, S, X, _, _ = _prepared(f, need_rank2=True)
    return _finish(eval_conjecture(f.p, S, X, k), f)


def check_roots(f: GFunc) -> BoundReport:
    _, S, X, _, _ = _prepared(f, need_rank2=True)
    return _finish(eval_roots(f.p, S, X), f)


def check_asym2(f: GFunc, eps) -> BoundReport:
    _, S, X, _, _ = _prepared(f, need_rank2=True)
    return _finish(eval_asym2(f.p, S, X, eps), f)


def check_asym3(f: GFunc, eps) -> BoundReport:
    _, S, X, _, _ = _prepared(f, need_rank2=True)
    return _finish(eval_asym3(f.p, S, X, eps), f)


def check_coset_counts(f: GFunc, H: Optional[LineSubgroup] = None) -> BoundReport:
    _, S, X, _, _ = _prepared(f, need_rank2=True)
    direction = None if H is None else H.direction
    return _finish(eval_coset_counts(f.p, S, X, direction), f)


def check_quasicharacter(h: GFunc, A: Iterable[int]) -> BoundReport:
    """For rank-1 h multiplicative on sums within A (|A| > 2p/3): its
    transform support has size 1 or at least |A|.  When the hypothesis
    fails the report carries verdict 'exception' and makes no claim."""
    if h.rank != 1:
        raise ValueError("the quasicharacter bound applies to rank-1 functions")
    if h.is_zero_function():
        raise ValueError("bounds are stated for nonzero functions")
    p = h.p
    A = sorted(set(A))
    if any(not 0 <= a < p for a in A):
        raise ValueError("A must consist of residues mod p")
    if 3 * len(A) <= 2 * p:
        raise ValueError(f"need |A| > 2p/3, got |A|={len(A)}")
    by_sum: Dict[int, CycNum] = {}
    hypothesis = True
    for i, a1 in enumerate(A):
        for a2 in A[i:]:
            s = (a1 + a2) % p
            prod = h.values[a1] * h.values[a2]
            if s in by_sum:
                if by_sum[s] != prod:
                    hypothesis = False
                    break
            else:
                by_sum[s] = prod
        if not hypothesis:
            break
    x = fourier_transform(h).support_size
    details = {"hypothesis_holds": hypothesis, "A_size": len(A), "transform_support": x}
    if not hypothesis:
        details["note"] = "hypothesis fails; no claim"
        return BoundReport("quasicharacter", EXCEPTION, Fraction(x), Fraction(len(A)),
                           details=details)
    if x == 1:
        return BoundReport("quasicharacter", HOLDS, Fraction(x), Fraction(1), details=details)
    verdict = _ineq_verdict(Fraction(x), Fraction(len(A)))
    report = BoundReport("quasicharacter", verdict, Fraction(x), Fraction(len(A)),
                         details=details)
    if verdict == VIOLATED:
        report.witness = h
    return report


def sumset_size(A: Iterable[int], B: Iterable[int], p: int) -> int:
    """|A + B| in F_p; asserts the Cauchy-Davenport floor min(p, |A|+|B|-1)."""
    check_prime(p)
    A = sorted({a % p for a in A})
    B = sorted({b % p for b in B})
    if not A or not B:
        raise ValueError("sumset requires nonempty sets")
    out = {(a + b) % p for a in A for b in B}
    floor = min(p, len(A) + len(B) - 1)
    if len(out) < floor:
        raise ArithmeticError("Cauchy-Davenport bound failed; arithmetic is broken")
    return len(out)
