"""Construction gallery for the extremal families, exhaustive and seeded
random sweeps over small value alphabets, violation hunting, and the
attained (|S|, |X|) frontier with witnesses.

Candidates are enumerated by a mixed-radix counter over the point index
(point 0 is the least significant digit), so witness identities are
reproducible and the lexicographically least witness is always found
first.  Sweeps over all-integer alphabets use the integer support kernel
from the fourier module; everything else goes through the exact CycNum
transform.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cyclotomic import CycNum, check_prime, format_value, parse_value, root_of_unity
from .fourier import GFunc, fourier_transform, int_support_masks
from .plane import (
    DUAL,
    PRIMAL,
    Coset,
    LineSubgroup,
    Point,
    PointSet,
    coset_from_id,
)
from . import bounds
from .bounds import (
    EQUALITY,
    EXCEPTION,
    VIOLATED,
    RANK1_CHECKS,
    RANK2_CHECKS,
)

DEFAULT_CEILING = 10**8


# -- construction gallery ------------------------------------------------------


@dataclass(frozen=True)
class Construction:
    """A gallery function together with its expected support sizes, when
    the family has a known exact (|S|, |X|) value."""

    name: str
    func: GFunc
    expected: Optional[Tuple[int, int]] = None


def _subgroup_indicator(p: int, direction: int) -> List[int]:
    vals = [0] * (p * p)
    for pt in LineSubgroup(p, direction, PRIMAL).members():
        vals[pt.index] = 1
    return vals


def character_coset(p: int, direction: int = 0, offset: Tuple[int, int] = (0, 0),
                    character: Tuple[int, int] = (1, 1), coefficient=1) -> Construction:
    """A scaled character restricted to one line; both supports have size p."""
    check_prime(p)
    chi = Point.of(p, character[0], character[1], DUAL)
    g0 = Point.of(p, offset[0], offset[1])
    vals = [CycNum.zero(p)] * (p * p)
    c = coefficient if isinstance(coefficient, CycNum) else CycNum.from_rational(p, coefficient)
    if c.is_zero():
        raise ValueError("coefficient must be nonzero")
    for z in Coset.through(g0, LineSubgroup(p, direction, PRIMAL)).members():
        vals[z.index] = c * root_of_unity(p, chi.pair(z))
    return Construction("character-coset", GFunc(p, 2, PRIMAL, vals), (p, p))


def diff_of_subgroups(p: int, d1: int = 0, d2: int = 1) -> Construction:
    """Difference of two distinct subgroup indicators; |S| = |X| = 2(p-1)."""
    check_prime(p)
    if d1 == d2:
        raise ValueError("subgroups must be distinct")
    vals = [a - b for a, b in zip(_subgroup_indicator(p, d1), _subgroup_indicator(p, d2))]
    return Construction("diff-of-subgroups", GFunc(p, 2, PRIMAL, vals),
                        (2 * (p - 1), 2 * (p - 1)))


def pm_two_cosets(p: int, direction: int = 0,
                  g1: Tuple[int, int] = (0, 0), g2: Tuple[int, int] = (0, 1)) -> Construction:
    """+1 on one line, -1 on a parallel line; |S| = 2p, |X| = p - 1."""
    check_prime(p)
    sub = LineSubgroup(p, direction, PRIMAL)
    c1 = Coset.through(Point.of(p, *g1), sub)
    c2 = Coset.through(Point.of(p, *g2), sub)
    if c1 == c2:
        raise ValueError("the two cosets must be distinct")
    vals = [0] * (p * p)
    for z in c1.members():
        vals[z.index] = 1
    for z in c2.members():
        vals[z.index] = -1
    return Construction("pm-two-cosets", GFunc(p, 2, PRIMAL, vals), (2 * p, p - 1))


def triple_subgroups(p: int, d1: int = 0, d2: int = 1, d3: int = 2) -> Construction:
    """1_{H1} + 1_{H2} - 2 * 1_{H3} for distinct subgroups; both supports 3(p-1)."""
    check_prime(p)
    if len({d1, d2, d3}) != 3:
        raise ValueError("subgroups must be pairwise distinct")
    i1 = _subgroup_indicator(p, d1)
    i2 = _subgroup_indicator(p, d2)
    i3 = _subgroup_indicator(p, d3)
    vals = [a + b - 2 * c for a, b, c in zip(i1, i2, i3)]
    return Construction("triple-subgroups", GFunc(p, 2, PRIMAL, vals),
                        (3 * (p - 1), 3 * (p - 1)))


def sharp_pair_1d(p: int, m: int) -> Construction:
    """A rank-1 function with |S| = m and |X| = p + 1 - m exactly.

    The values are the coefficients of prod_{j=1..m-1} (w - zeta^(-j)),
    so the transform is that polynomial evaluated at zeta^(-b): it
    vanishes exactly for b in {1, ..., m-1}.  All m coefficients are
    nonzero because the elementary symmetric functions of distinct
    p-th roots with fewer than p factors never vanish.
    """
    check_prime(p)
    if not 1 <= m <= p:
        raise ValueError(f"need 1 <= m <= p, got {m}")
    coeffs = [CycNum.one(p)]
    for j in range(1, m):
        rt = root_of_unity(p, (p - j) % p)
        nxt = [CycNum.zero(p)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * rt
        coeffs = nxt
    vals = coeffs + [CycNum.zero(p)] * (p - len(coeffs))
    return Construction("sharp1d", GFunc(p, 1, PRIMAL, vals), (m, p + 1 - m))


def sharp_pair_2d(p: int, m: int, n: int) -> Construction:
    """Tensor of two rank-1 sharp pairs: lands exactly on the lattice
    point (m(p+1-n), n(p+1-m))."""
    check_prime(p)
    if not (1 <= m <= p and 1 <= n <= p):
        raise ValueError("need 1 <= m, n <= p")
    f1 = sharp_pair_1d(p, m).func
    f2 = sharp_pair_1d(p, p + 1 - n).func
    vals = [CycNum.zero(p)] * (p * p)
    for x in range(p):
        for y in range(p):
            vals[x * p + y] = f1.values[x] * f2.values[y]
    return Construction("sharp2d", GFunc(p, 2, PRIMAL, vals),
                        (m * (p + 1 - n), n * (p + 1 - m)))


def coset_characters(p: int, direction: int, offset: Tuple[int, int],
                     characters: Sequence[Tuple[int, int]],
                     coefficients: Sequence) -> Construction:
    """Sum of scaled characters restricted to one line; the characters
    must come from pairwise distinct orthogonal-direction cosets."""
    check_prime(p)
    if len(characters) != len(coefficients) or not characters:
        raise ValueError("need matching nonempty characters and coefficients")
    sub = LineSubgroup(p, direction, PRIMAL)
    chis = [Point.of(p, a, b, DUAL) for a, b in characters]
    perp = sub.orthogonal()
    reps = {Coset.through(chi, LineSubgroup(p, perp.direction, DUAL)).rep for chi in chis}
    if len(reps) != len(chis):
        raise ValueError("characters must lie in distinct orthogonal cosets")
    cs = [c if isinstance(c, CycNum) else CycNum.from_rational(p, c) for c in coefficients]
    if any(c.is_zero() for c in cs):
        raise ValueError("coefficients must be nonzero")
    vals = [CycNum.zero(p)] * (p * p)
    for z in Coset.through(Point.of(p, *offset), sub).members():
        total = CycNum.zero(p)
        for chi, c in zip(chis, cs):
            total = total + c * root_of_unity(p, chi.pair(z))
        vals[z.index] = total
    return Construction("coset-characters", GFunc(p, 2, PRIMAL, vals))


def character_cosets(p: int, direction: int, offsets: Sequence[Tuple[int, int]],
                     character: Tuple[int, int], coefficients: Sequence) -> Construction:
    """One character scaled coset-by-coset on distinct parallel lines."""
    check_prime(p)
    if len(offsets) != len(coefficients) or not offsets:
        raise ValueError("need matching nonempty offsets and coefficients")
    sub = LineSubgroup(p, direction, PRIMAL)
    cosets = [Coset.through(Point.of(p, *g), sub) for g in offsets]
    if len({c.rep for c in cosets}) != len(cosets):
        raise ValueError("offsets must lie in distinct cosets")
    chi = Point.of(p, character[0], character[1], DUAL)
    cs = [c if isinstance(c, CycNum) else CycNum.from_rational(p, c) for c in coefficients]
    if any(c.is_zero() for c in cs):
        raise ValueError("coefficients must be nonzero")
    vals = [CycNum.zero(p)] * (p * p)
    for coset, c in zip(cosets, cs):
        for z in coset.members():
            vals[z.index] = c * root_of_unity(p, chi.pair(z))
    return Construction("character-cosets", GFunc(p, 2, PRIMAL, vals))


def two_parallel_lines_function(p: int, direction: int,
                                char1: Tuple[int, int], char2: Tuple[int, int],
                                coset_values1: Sequence, coset_values2: Sequence) -> Construction:
    """chi1 * f1 + chi2 * f2 with f1, f2 constant on the direction's
    cosets (given by per-coset values in canonical coset order); the
    transform support lies in two parallel dual lines."""
    check_prime(p)
    sub = LineSubgroup(p, direction, PRIMAL)
    chi1 = Point.of(p, *char1, side=DUAL)
    chi2 = Point.of(p, *char2, side=DUAL)
    perp_dir = sub.orthogonal().direction
    rep1 = Coset.through(chi1, LineSubgroup(p, perp_dir, DUAL)).rep
    rep2 = Coset.through(chi2, LineSubgroup(p, perp_dir, DUAL)).rep
    if rep1 == rep2:
        raise ValueError("characters must lie in distinct orthogonal cosets")
    if len(coset_values1) != p or len(coset_values2) != p:
        raise ValueError(f"need {p} per-coset values for each component")
    vals = [CycNum.zero(p)] * (p * p)
    for j in range(p):
        v1 = coset_values1[j] if isinstance(coset_values1[j], CycNum) \
            else CycNum.from_rational(p, coset_values1[j])
        v2 = coset_values2[j] if isinstance(coset_values2[j], CycNum) \
            else CycNum.from_rational(p, coset_values2[j])
        for z in coset_from_id(p, direction, j).members():
            vals[z.index] = v1 * root_of_unity(p, chi1.pair(z)) + \
                v2 * root_of_unity(p, chi2.pair(z))
    return Construction("two-parallel", GFunc(p, 2, PRIMAL, vals))


def two_nonparallel_lines_function(p: int, d1: int, d2: int, character: Tuple[int, int],
                                   values1: Sequence, values2: Sequence) -> Construction:
    """chi(h1+h2) * (f1(h1) + f2(h2)) over the decomposition into two
    distinct directions; the transform support lies in two nonparallel
    dual lines."""
    check_prime(p)
    if d1 == d2:
        raise ValueError("directions must be distinct")
    if len(values1) != p or len(values2) != p:
        raise ValueError(f"need {p} values per component")
    chi = Point.of(p, *character, side=DUAL)
    gen1 = LineSubgroup(p, d1, PRIMAL).generator
    gen2 = LineSubgroup(p, d2, PRIMAL).generator
    v1 = [v if isinstance(v, CycNum) else CycNum.from_rational(p, v) for v in values1]
    v2 = [v if isinstance(v, CycNum) else CycNum.from_rational(p, v) for v in values2]
    vals = [CycNum.zero(p)] * (p * p)
    for t1 in range(p):
        for t2 in range(p):
            g = gen1.scaled(t1) + gen2.scaled(t2)
            vals[g.index] = (v1[t1] + v2[t2]) * root_of_unity(p, chi.pair(g))
    return Construction("two-nonparallel", GFunc(p, 2, PRIMAL, vals))


GALLERY = {
    "character-coset": character_coset,
    "diff-of-subgroups": diff_of_subgroups,
    "pm-two-cosets": pm_two_cosets,
    "triple-subgroups": triple_subgroups,
    "sharp1d": sharp_pair_1d,
    "sharp2d": sharp_pair_2d,
}


def construct(name: str, p: int, **params) -> Construction:
    """Build a named gallery function."""
    if name not in GALLERY:
        raise ValueError(f"unknown construction {name!r}; choose from {sorted(GALLERY)}")
    return GALLERY[name](p, **params)


def attainable_lattice(p: int) -> Tuple[Tuple[int, int], ...]:
    """The lattice of support-size pairs (m(p+1-n), n(p+1-m)), 1 <= m, n <= p."""
    check_prime(p)
    out = {(m * (p + 1 - n), n * (p + 1 - m))
           for m in range(1, p + 1) for n in range(1, p + 1)}
    return tuple(sorted(out))


# -- candidate spaces -----------------------------------------------------------


@dataclass(frozen=True)
class SearchSpace:
    """A finite family of candidate functions over a value alphabet.

    Exhaustive mode enumerates alphabet^(p^rank) functions (times the
    number of characters when char_twist is set); random mode draws
    `budget` reproducible samples from the same family, derived from the
    seed and the sample ordinal only.
    """

    p: int
    rank: int = 2
    alphabet: Tuple[CycNum, ...] = ()
    mode: str = "exhaustive"
    seed: int = 0
    budget: int = 10000
    char_twist: bool = False
    ceiling: int = DEFAULT_CEILING

    def __post_init__(self):
        check_prime(self.p)
        if self.rank not in (1, 2):
            raise ValueError("rank must be 1 or 2")
        if not self.alphabet:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet entries must be distinct")
        for v in self.alphabet:
            if not isinstance(v, CycNum) or v.p != self.p:
                raise ValueError("alphabet entries must be CycNum values with matching p")
        if self.mode not in ("exhaustive", "random"):
            raise ValueError("mode must be 'exhaustive' or 'random'")
        if self.mode == "random" and self.budget < 1:
            raise ValueError("random mode needs a positive budget")
        if self.mode == "exhaustive" and self.candidate_count > self.ceiling:
            raise ValueError(
                f"exhaustive space of {self.candidate_count} candidates exceeds the "
                f"ceiling {self.ceiling}")

    @property
    def n_points(self) -> int:
        return self.p**self.rank

    @property
    def base_count(self) -> int:
        return len(self.alphabet) ** self.n_points

    @property
    def candidate_count(self) -> int:
        if self.mode == "random":
            return self.budget
        return self.base_count * (self.n_points if self.char_twist else 1)

    def int_alphabet(self) -> Optional[Tuple[int, ...]]:
        """Plain-integer view of the alphabet when one exists (and no twist)."""
        if self.char_twist:
            return None
        out = []
        for v in self.alphabet:
            if not v.is_rational():
                return None
            r = v.rational_value()
            if r.denominator != 1:
                return None
            out.append(int(r))
        return tuple(out)

    def all_rational(self) -> bool:
        return not self.char_twist and all(v.is_rational() for v in self.alphabet)

    def _digits(self, counter: int) -> List[int]:
        base = len(self.alphabet)
        return [(counter // base**i) % base for i in range(self.n_points)]

    def _twisted(self, digits: Sequence[int], chi_index: int) -> Tuple[CycNum, ...]:
        from .fourier import pair_exponents

        exps = pair_exponents(self.p, self.rank)[chi_index]
        return tuple(self.alphabet[d] * root_of_unity(self.p, exps[g])
                     for g, d in enumerate(digits))

    def values_at(self, ordinal: int) -> Tuple[CycNum, ...]:
        """Decode candidate `ordinal` into its value vector."""
        if not 0 <= ordinal < self.candidate_count:
            raise ValueError("candidate ordinal out of range")
        if self.mode == "random":
            rng = random.Random((self.seed << 32) ^ ordinal)
            digits = [rng.randrange(len(self.alphabet)) for _ in range(self.n_points)]
            chi_index = rng.randrange(self.n_points) if self.char_twist else 0
        else:
            chi_index, base_counter = divmod(ordinal, self.base_count) \
                if self.char_twist else (0, ordinal)
            digits = self._digits(base_counter)
        if self.char_twist:
            return self._twisted(digits, chi_index)
        return tuple(self.alphabet[d] for d in digits)

    def int_values_at(self, ordinal: int, ints: Tuple[int, ...]) -> Tuple[int, ...]:
        if self.mode == "random":
            rng = random.Random((self.seed << 32) ^ ordinal)
            return tuple(ints[rng.randrange(len(ints))] for _ in range(self.n_points))
        return tuple(ints[d] for d in self._digits(ordinal))

    def gfunc_at(self, ordinal: int) -> GFunc:
        return GFunc(self.p, self.rank, PRIMAL, self.values_at(ordinal))

    def literal_at(self, ordinal: int) -> str:
        return self.gfunc_at(ordinal).to_literal()

    def describe(self) -> dict:
        return {
            "p": self.p,
            "rank": self.rank,
            "alphabet": [format_value(v) for v in self.alphabet],
            "mode": self.mode,
            "seed": self.seed,
            "budget": self.budget if self.mode == "random" else None,
            "char_twist": self.char_twist,
            "candidates": self.candidate_count,
        }

    def to_json(self) -> dict:
        out = self.describe()
        out["ceiling"] = self.ceiling
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SearchSpace":
        return make_space(obj["p"], alphabet=obj["alphabet"], rank=obj["rank"],
                          mode=obj["mode"], seed=obj["seed"],
                          budget=obj.get("budget") or 10000,
                          char_twist=obj["char_twist"], ceiling=obj["ceiling"])


def make_space(p: int, alphabet: Iterable = (-1, 0, 1), rank: int = 2,
               mode: str = "exhaustive", seed: int = 0, budget: int = 10000,
               char_twist: bool = False, ceiling: int = DEFAULT_CEILING) -> SearchSpace:
    """Convenience constructor accepting ints, Fractions and value literals."""
    check_prime(p)
    entries = []
    for item in alphabet:
        if isinstance(item, CycNum):
            entries.append(item)
        elif isinstance(item, str):
            entries.append(parse_value(item, p))
        else:
            entries.append(CycNum.from_rational(p, item))
    return SearchSpace(p=p, rank=rank, alphabet=tuple(entries), mode=mode, seed=seed,
                       budget=budget, char_twist=char_twist, ceiling=ceiling)


# -- sweeps -----------------------------------------------------------------------


def _check_items(space: SearchSpace, checks: Sequence[str],
                 k: Optional[int], eps) -> List[Tuple[str, str, dict]]:
    allowed = RANK2_CHECKS if space.rank == 2 else RANK1_CHECKS
    items = []
    for name in checks:
        if name not in allowed:
            raise ValueError(f"check {name!r} is not available at rank {space.rank}")
        params: dict = {}
        label = name
        if name == "conjecture":
            if k is None:
                raise ValueError("the conjecture check requires k")
            params["k"] = k
            label = f"conjecture[k={k}]"
        elif name in ("asym2", "asym3"):
            if eps is None:
                raise ValueError(f"{name} requires epsilon")
            params["eps"] = Fraction(eps)
            label = f"{name}[eps={Fraction(eps)}]"
        elif name == "rational" and not space.all_rational():
            raise ValueError("the rational check needs an all-rational alphabet")
        items.append((label, name, params))
    return items


@dataclass
class SweepResult:
    space: dict
    checks: Tuple[str, ...]
    counts: Dict[str, Dict[str, int]]
    violations: List[Tuple[str, int, str]]
    equality_witnesses: Dict[str, Tuple[int, str]]
    exception_ordinals: Optional[Dict[str, List[int]]]
    n_candidates: int
    n_nonzero: int

    @property
    def violation_free(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        out = {
            "space": self.space,
            "checks": list(self.checks),
            "counts": {k: dict(v) for k, v in self.counts.items()},
            "violations": [
                {"check": c, "ordinal": o, "witness": w} for c, o, w in self.violations
            ],
            "equality_witnesses": {
                k: {"ordinal": o, "witness": w}
                for k, (o, w) in self.equality_witnesses.items()
            },
            "candidates": self.n_candidates,
            "nonzero": self.n_nonzero,
        }
        if self.exception_ordinals is not None:
            out["exception_ordinals"] = {k: list(v) for k, v in self.exception_ordinals.items()}
        return out


def _run_range(space: SearchSpace, items: Sequence[Tuple[str, str, dict]],
               start: int, stop: int, collect_exceptions: bool):
    p, rank = space.p, space.rank
    ints = space.int_alphabet()
    rational = space.all_rational()
    counts = {label: Counter() for label, _, _ in items}
    violations: List[Tuple[str, int, str]] = []
    equalities: Dict[str, Tuple[int, str]] = {}
    exceptions: Dict[str, List[int]] = {label: [] for label, _, _ in items} \
        if collect_exceptions else {}
    n_nonzero = 0
    for ordinal in range(start, stop):
        if ints is not None:
            int_values = space.int_values_at(ordinal, ints)
            if not any(int_values):
                continue
            s_mask, x_mask = int_support_masks(p, rank, int_values)
            is_rational = True
        else:
            values = space.values_at(ordinal)
            if all(v.is_zero() for v in values):
                continue
            func = GFunc(p, rank, PRIMAL, values)
            s_mask = func.support_mask
            x_mask = fourier_transform(func).support_mask
            is_rational = rational or func.is_rational_valued()
        n_nonzero += 1
        s_size = s_mask.bit_count()
        x_size = x_mask.bit_count()
        if rank == 2:
            S = PointSet(p, PRIMAL, s_mask)
            X = PointSet(p, DUAL, x_mask)
        else:
            S = X = None
        for label, name, params in items:
            report = bounds.evaluate(name, p=p, rank=rank, s_size=s_size, x_size=x_size,
                                     S=S, X=X, rational=is_rational, **params)
            counts[label][report.verdict] += 1
            if report.verdict == VIOLATED:
                violations.append((label, ordinal, space.literal_at(ordinal)))
            elif report.verdict == EQUALITY and label not in equalities:
                equalities[label] = (ordinal, space.literal_at(ordinal))
            elif report.verdict == EXCEPTION and collect_exceptions:
                exceptions[label].append(ordinal)
    return counts, violations, equalities, exceptions, n_nonzero


def _sweep_worker(args):
    space_json, checks, k, eps, start, stop, collect = args
    space = SearchSpace.from_json(space_json)
    items = _check_items(space, checks, k, eps)
    return _run_range(space, items, start, stop, collect)


def sweep(space: SearchSpace, checks: Sequence[str], *, k: Optional[int] = None,
          eps=None, jobs: int = 1, collect_exceptions: bool = False) -> SweepResult:
    """Evaluate the named checks over every candidate in the space.

    Deterministic for a fixed space: counts, violation witnesses and the
    first equality witness per check do not depend on the job count.
    """
    items = _check_items(space, checks, k, eps)
    total = space.candidate_count
    if jobs <= 1 or total < 4096:
        parts = [_run_range(space, items, 0, total, collect_exceptions)]
    else:
        from concurrent.futures import ProcessPoolExecutor

        chunk = -(-total // jobs)
        ranges = [(i, min(i + chunk, total)) for i in range(0, total, chunk)]
        args = [(space.to_json(), tuple(checks), k, eps, a, b, collect_exceptions)
                for a, b in ranges]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_sweep_worker, args))
    counts = {label: Counter() for label, _, _ in items}
    violations: List[Tuple[str, int, str]] = []
    equalities: Dict[str, Tuple[int, str]] = {}
    exceptions: Dict[str, List[int]] = {label: [] for label, _, _ in items}
    n_nonzero = 0
    for part_counts, part_viol, part_eq, part_exc, part_nonzero in parts:
        for label, counter in part_counts.items():
            counts[label].update(counter)
        violations.extend(part_viol)
        for label, pair in part_eq.items():
            if label not in equalities or pair[0] < equalities[label][0]:
                equalities[label] = pair
        for label, ords in part_exc.items():
            exceptions[label].extend(ords)
        n_nonzero += part_nonzero
    return SweepResult(
        space=space.describe(),
        checks=tuple(label for label, _, _ in items),
        counts={label: dict(c) for label, c in counts.items()},
        violations=violations,
        equality_witnesses=equalities,
        exception_ordinals=exceptions if collect_exceptions else None,
        n_candidates=total,
        n_nonzero=n_nonzero,
    )


# -- frontier ---------------------------------------------------------------------


@dataclass
class FrontierMap:
    """The attained (|S|, |X|) pairs of a space, each with its first witness."""

    space: dict
    attained: Dict[Tuple[int, int], Tuple[int, str]]

    def pairs(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(sorted(self.attained))

    def to_csv(self) -> str:
        lines = ["S_size,X_size,witness_literal"]
        for (s, x) in self.pairs():
            _, literal = self.attained[(s, x)]
            lines.append(f'{s},{x},"{literal}"')
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "space": self.space,
            "attained": [
                {"S_size": s, "X_size": x, "ordinal": o, "witness": w}
                for (s, x), (o, w) in sorted(self.attained.items())
            ],
        }


def frontier(space: SearchSpace) -> FrontierMap:
    """Map every attained (|S|, |X|) pair, keeping the first witness found."""
    p, rank = space.p, space.rank
    ints = space.int_alphabet()
    attained: Dict[Tuple[int, int], Tuple[int, str]] = {}
    for ordinal in range(space.candidate_count):
        if ints is not None:
            int_values = space.int_values_at(ordinal, ints)
            if not any(int_values):
                continue
            s_mask, x_mask = int_support_masks(p, rank, int_values)
        else:
            values = space.values_at(ordinal)
            if all(v.is_zero() for v in values):
                continue
            func = GFunc(p, rank, PRIMAL, values)
            s_mask = func.support_mask
            x_mask = fourier_transform(func).support_mask
        key = (s_mask.bit_count(), x_mask.bit_count())
        if key not in attained:
            attained[key] = (ordinal, space.literal_at(ordinal))
    return FrontierMap(space=space.describe(), attained=attained)


# -- hunting -----------------------------------------------------------------------


@dataclass
class HuntResult:
    check: str
    witness_ordinal: Optional[int]
    witness_literal: Optional[str]
    n_checked: int
    counts: Dict[str, int]
    clause_count: int
    clause_ordinals: List[int]

    @property
    def found(self) -> bool:
        return self.witness_ordinal is not None

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "witness": None if not self.found else
            {"ordinal": self.witness_ordinal, "literal": self.witness_literal},
            "checked": self.n_checked,
            "counts": dict(self.counts),
            "cover_clause_cases": self.clause_count,
            "cover_clause_ordinals": self.clause_ordinals,
        }


def hunt(name: str, space: SearchSpace, *, k: Optional[int] = None, eps=None,
         clause_cap: int = 100) -> HuntResult:
    """Scan the space for the first genuine violation of one check.

    For the conjecture-type checks the escape-clause cases (supports
    coverable by few lines) are counted separately and never claimed as
    violations.
    """
    items = _check_items(space, [name], k, eps)
    label, check_name, params = items[0]
    p, rank = space.p, space.rank
    ints = space.int_alphabet()
    counts: Counter = Counter()
    clause_ordinals: List[int] = []
    clause_count = 0
    n_checked = 0
    for ordinal in range(space.candidate_count):
        if ints is not None:
            int_values = space.int_values_at(ordinal, ints)
            if not any(int_values):
                continue
            s_mask, x_mask = int_support_masks(p, rank, int_values)
            is_rational = True
        else:
            values = space.values_at(ordinal)
            if all(v.is_zero() for v in values):
                continue
            func = GFunc(p, rank, PRIMAL, values)
            s_mask = func.support_mask
            x_mask = fourier_transform(func).support_mask
            is_rational = func.is_rational_valued()
        n_checked += 1
        if rank == 2:
            S = PointSet(p, PRIMAL, s_mask)
            X = PointSet(p, DUAL, x_mask)
        else:
            S = X = None
        report = bounds.evaluate(check_name, p=p, rank=rank,
                                 s_size=s_mask.bit_count(), x_size=x_mask.bit_count(),
                                 S=S, X=X, rational=is_rational, **params)
        counts[report.verdict] += 1
        if report.verdict == EXCEPTION and report.details.get("cover_clause_applies"):
            clause_count += 1
            if len(clause_ordinals) < clause_cap:
                clause_ordinals.append(ordinal)
        if report.verdict == VIOLATED:
            return HuntResult(label, ordinal, space.literal_at(ordinal), n_checked,
                              dict(counts), clause_count, clause_ordinals)
    return HuntResult(label, None, None, n_checked, dict(counts),
                      clause_count, clause_ordinals)
