"""Exact Fourier analysis on F_p and F_p^2 with values in Q(zeta_p).

Normalization: hat(f)(w) = (1/|G|) * sum_g f(g) * conj(chi_w(g)), with
inversion f(g) = sum_w hat(f)(w) * chi_w(g).  The primal-side convolution
carries the 1/|G| factor and the dual-side convolution does not; the two
are kept exactly in this asymmetric form so that the transform identities
hat(f1 * f2) = hat(f1) hat(f2) and hat(f1 f2) = hat(f1) * hat(f2) hold
with no rescaling.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import List, Optional, Sequence, Tuple, Union

from .cyclotomic import CycNum, check_prime, format_value, parse_value, root_of_unity
from .plane import (
    DUAL,
    PRIMAL,
    Coset,
    LineSubgroup,
    Point,
    PointSet,
    check_side,
    opposite_side,
)

ValueLike = Union[CycNum, int, Fraction]


@lru_cache(maxsize=None)
def pair_exponents(p: int, rank: int) -> Tuple[Tuple[int, ...], ...]:
    """exponents[w][g] = <w, g> mod p for the rank-1 or rank-2 pairing."""
    check_prime(p)
    if rank == 1:
        return tuple(tuple((w * g) % p for g in range(p)) for w in range(p))
    if rank == 2:
        n = p * p
        rows = []
        for w in range(n):
            a, b = divmod(w, p)
            rows.append(tuple((a * (g // p) + b * (g % p)) % p for g in range(n)))
        return tuple(rows)
    raise ValueError("rank must be 1 or 2")


def _add_index(p: int, rank: int, i: int, j: int) -> int:
    if rank == 1:
        return (i + j) % p
    return ((i // p + j // p) % p) * p + (i % p + j % p) % p


class GFunc:
    """A dense Q(zeta_p)-valued function on F_p (rank 1) or F_p^2 (rank 2),
    on either the primal or the dual side."""

    __slots__ = ("p", "rank", "side", "values")

    def __init__(self, p: int, rank: int, side: str, values: Sequence[ValueLike]):
        check_prime(p)
        if rank not in (1, 2):
            raise ValueError("rank must be 1 or 2")
        check_side(side)
        n = p**rank
        vals = []
        for v in values:
            if isinstance(v, CycNum):
                if v.p != p:
                    raise ValueError(f"value field order {v.p} does not match p={p}")
                vals.append(v)
            else:
                vals.append(CycNum.from_rational(p, v))
        if len(vals) != n:
            raise ValueError(f"need {n} values, got {len(vals)}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "side", side)
        object.__setattr__(self, "values", tuple(vals))

    def __setattr__(self, name, value):
        raise AttributeError("GFunc is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p: int, rank: int = 2, side: str = PRIMAL) -> "GFunc":
        return cls(p, rank, side, (0,) * p**rank)

    @classmethod
    def constant(cls, p: int, value: ValueLike, rank: int = 2, side: str = PRIMAL) -> "GFunc":
        return cls(p, rank, side, (value,) * p**rank)

    @classmethod
    def delta(cls, p: int, rank: int = 2, at: int = 0, side: str = PRIMAL) -> "GFunc":
        vals = [0] * p**rank
        vals[at] = 1
        return cls(p, rank, side, vals)

    @classmethod
    def indicator(cls, points: PointSet) -> "GFunc":
        vals = [1 if points.mask >> i & 1 else 0 for i in range(points.p**2)]
        return cls(points.p, 2, points.side, vals)

    @classmethod
    def from_literal(cls, text: str, side: str = PRIMAL) -> "GFunc":
        """Parse the literal 'p; rank; v0,v1,...' with cyclotomic value terms."""
        parts = text.split(";")
        if len(parts) != 3:
            raise ValueError(f"malformed function literal {text!r}")
        try:
            p = int(parts[0].strip())
            rank = int(parts[1].strip())
        except ValueError as exc:
            raise ValueError(f"malformed function literal {text!r}") from exc
        check_prime(p)
        if rank not in (1, 2):
            raise ValueError("rank must be 1 or 2")
        items = [s for s in parts[2].split(",")]
        values = [parse_value(s, p) for s in items]
        return cls(p, rank, side, values)

    def to_literal(self) -> str:
        return f"{self.p}; {self.rank}; " + ",".join(format_value(v) for v in self.values)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "rank": self.rank,
            "side": self.side,
            "values": [v.to_json() for v in self.values],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GFunc":
        values = [CycNum.from_json(v) for v in obj["values"]]
        return cls(obj["p"], obj["rank"], obj["side"], values)

    # -- access ------------------------------------------------------------

    def value_at(self, index: int) -> CycNum:
        return self.values[index]

    def value(self, point: Point) -> CycNum:
        if self.rank != 2:
            raise ValueError("point access requires rank 2")
        if point.p != self.p or point.side != self.side:
            raise ValueError("point does not match the function's p and side")
        return self.values[point.index]

    @property
    def support_mask(self) -> int:
        mask = 0
        for i, v in enumerate(self.values):
            if not v.is_zero():
                mask |= 1 << i
        return mask

    @property
    def support_size(self) -> int:
        return self.support_mask.bit_count()

    def support(self) -> PointSet:
        if self.rank != 2:
            raise ValueError("PointSet support requires rank 2")
        return PointSet(self.p, self.side, self.support_mask)

    def is_zero_function(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def is_rational_valued(self) -> bool:
        return all(v.is_rational() for v in self.values)

    # -- pointwise algebra ---------------------------------------------------

    def _require_like(self, other: "GFunc"):
        if not isinstance(other, GFunc):
            raise TypeError("expected a GFunc")
        if (other.p, other.rank, other.side) != (self.p, self.rank, self.side):
            raise ValueError("functions must share p, rank and side")

    def __add__(self, other: "GFunc") -> "GFunc":
        self._require_like(other)
        return GFunc(self.p, self.rank, self.side,
                     tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "GFunc") -> "GFunc":
        self._require_like(other)
        return GFunc(self.p, self.rank, self.side,
                     tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "GFunc":
        return GFunc(self.p, self.rank, self.side, tuple(-v for v in self.values))

    def __mul__(self, other):
        if isinstance(other, GFunc):
            self._require_like(other)
            return GFunc(self.p, self.rank, self.side,
                         tuple(a * b for a, b in zip(self.values, other.values)))
        return GFunc(self.p, self.rank, self.side, tuple(v * other for v in self.values))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GFunc):
            return NotImplemented
        return (self.p, self.rank, self.side, self.values) == \
            (other.p, other.rank, other.side, other.values)

    def __hash__(self):
        return hash((self.p, self.rank, self.side, self.values))

    def __repr__(self):
        return f"GFunc({self.side}, {self.to_literal()!r})"


def pointwise_mul(f1: GFunc, f2: GFunc) -> GFunc:
    return f1 * f2


def coset_indicator(coset: Coset) -> GFunc:
    vals = [0] * coset.p**2
    for pt in coset.members():
        vals[pt.index] = 1
    return GFunc(coset.p, 2, coset.side, vals)


# -- transforms ----------------------------------------------------------------


def _scaled_int_coeffs(values: Sequence[CycNum]) -> Tuple[List[Tuple[int, ...]], int]:
    """Coefficient vectors scaled by the common denominator, as exact ints.

    The hot loops below then run in plain integer arithmetic; the single
    denominator is divided back out when the results are reduced.
    """
    den = 1
    for v in values:
        for c in v.coeffs:
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
    if den == 1:
        return [v.coeffs for v in values], 1
    scaled = []
    for v in values:
        scaled.append(tuple(int(c * den) for c in v.coeffs))
    return scaled, den


def _reduced_over(p: int, acc: Sequence[int], divisor: int) -> CycNum:
    top = acc[p - 1]
    if divisor == 1:
        if top:
            return CycNum(p, tuple(c - top for c in acc[: p - 1]))
        return CycNum(p, tuple(acc[: p - 1]))
    return CycNum(p, tuple(Fraction(c - top, divisor) for c in acc[: p - 1]))


def fourier_transform(f: GFunc) -> GFunc:
    """Exact transform; the result lives on the opposite side.

    Each output value is accumulated as a length-p exponent vector of
    integers (the common denominator is factored out first) and reduced
    once, so the cost per coefficient stays linear in p.
    """
    p, n = f.p, len(f.values)
    exps = pair_exponents(p, f.rank)
    scaled, den = _scaled_int_coeffs(f.values)
    support = [(g, scaled[g]) for g in range(n) if any(scaled[g])]
    divisor = den * n
    out = []
    for w in range(n):
        row = exps[w]
        acc = [0] * p
        for g, coeffs in support:
            e = (p - row[g]) % p
            for t, c in enumerate(coeffs):
                if c:
                    s = t + e
                    acc[s - p if s >= p else s] += c
        out.append(_reduced_over(p, acc, divisor))
    return GFunc(p, f.rank, opposite_side(f.side), out)


def inverse_transform(u: GFunc) -> GFunc:
    """Inversion formula f(g) = sum_w u(w) chi_w(g); input must be dual-side."""
    if u.side != DUAL:
        raise ValueError("inverse transform expects a dual-side function")
    p, n = u.p, len(u.values)
    exps = pair_exponents(p, u.rank)
    scaled, den = _scaled_int_coeffs(u.values)
    support = [(w, scaled[w]) for w in range(n) if any(scaled[w])]
    out = []
    for g in range(n):
        acc = [0] * p
        for w, coeffs in support:
            e = exps[w][g]
            for t, c in enumerate(coeffs):
                if c:
                    s = t + e
                    acc[s - p if s >= p else s] += c
        out.append(_reduced_over(p, acc, den))
    return GFunc(p, u.rank, PRIMAL, out)


def int_support_masks(p: int, rank: int, values: Sequence[int]) -> Tuple[int, int]:
    """Support masks (function, transform) for an integer-valued function.

    The transform value at w collects the integer values by the exponent
    -<w, g> mod p; it vanishes exactly when all p collected coefficients
    coincide, so both supports come out of pure integer arithmetic.  This
    is an independent route from the CycNum transform and is checked
    against it in the test suite.
    """
    check_prime(p)
    exps = pair_exponents(p, rank)
    n = p**rank
    if len(values) != n:
        raise ValueError(f"need {n} values, got {len(values)}")
    s_mask = 0
    support = []
    for g, v in enumerate(values):
        if v:
            s_mask |= 1 << g
            support.append((g, v))
    x_mask = 0
    for w in range(n):
        row = exps[w]
        counts = [0] * p
        for g, v in support:
            counts[(p - row[g]) % p] += v
        c0 = counts[0]
        if any(c != c0 for c in counts):
            x_mask |= 1 << w
    return s_mask, x_mask


# -- convolution -----------------------------------------------------------------


def convolution(f1: GFunc, f2: GFunc) -> GFunc:
    """Primal-side convolution, normalized by 1/|G|."""
    f1._require_like(f2)
    if f1.side != PRIMAL:
        raise ValueError("convolution is defined on the primal side")
    return _convolve(f1, f2, normalize=True)


def dual_convolution(u1: GFunc, u2: GFunc) -> GFunc:
    """Dual-side convolution; deliberately carries no 1/|G| factor."""
    u1._require_like(u2)
    if u1.side != DUAL:
        raise ValueError("dual convolution is defined on the dual side")
    return _convolve(u1, u2, normalize=False)


def _convolve(f1: GFunc, f2: GFunc, normalize: bool) -> GFunc:
    p, rank = f1.p, f1.rank
    n = len(f1.values)
    scaled1, den1 = _scaled_int_coeffs(f1.values)
    scaled2, den2 = _scaled_int_coeffs(f2.values)
    supp1 = [(i, c) for i, c in enumerate(scaled1) if any(c)]
    supp2 = [(i, c) for i, c in enumerate(scaled2) if any(c)]
    acc = [[0] * p for _ in range(n)]
    for i1, c1 in supp1:
        for i2, c2 in supp2:
            row = acc[_add_index(p, rank, i1, i2)]
            for t1, a in enumerate(c1):
                if a:
                    for t2, b in enumerate(c2):
                        if b:
                            s = t1 + t2
                            row[s - p if s >= p else s] += a * b
    divisor = den1 * den2 * (n if normalize else 1)
    return GFunc(p, rank, f1.side, [_reduced_over(p, row, divisor) for row in acc])


# -- coset restriction ----------------------------------------------------------


def _require_plane_primal(f: GFunc):
    if f.rank != 2 or f.side != PRIMAL:
        raise ValueError("operation requires a rank-2 primal function")


def coset_restriction_transform(f: GFunc, g: Point, H: LineSubgroup,
                                fhat: Optional[GFunc] = None) -> GFunc:
    """Transform of f * 1_{g+H}, evaluated through the orthogonal subgroup:
    (1/|H^perp|) sum_{psi in H^perp} hat(f)(chi psi) psi(g)."""
    _require_plane_primal(f)
    if g.p != f.p or g.side != PRIMAL or H.p != f.p or H.side != PRIMAL:
        raise ValueError("offset and subgroup must be primal with matching p")
    if fhat is None:
        fhat = fourier_transform(f)
    p = f.p
    psis = H.orthogonal().members()
    inv = Fraction(1, p)
    out = []
    for w in range(p * p):
        chi = Point.from_index(p, w, DUAL)
        total = CycNum.zero(p)
        for psi in psis:
            val = fhat.value(chi + psi)
            if not val.is_zero():
                total = total + val * root_of_unity(p, psi.pair(g))
        out.append(total * inv)
    return GFunc(p, 2, DUAL, out)


def coset_sum_identity(f: GFunc, g: Point, H: LineSubgroup, chi: Point,
                       fhat: Optional[GFunc] = None) -> bool:
    """Check that the orthogonal-subgroup sum at chi equals the direct
    coset sum: sum_psi hat(f)(chi psi) psi(g) =
    (conj(chi)(g)/|H|) sum_h f(g+h) conj(chi)(h)."""
    _require_plane_primal(f)
    if chi.side != DUAL or chi.p != f.p:
        raise ValueError("chi must be a dual point with matching p")
    if fhat is None:
        fhat = fourier_transform(f)
    p = f.p
    lhs = CycNum.zero(p)
    for psi in H.orthogonal().members():
        val = fhat.value(chi + psi)
        if not val.is_zero():
            lhs = lhs + val * root_of_unity(p, psi.pair(g))
    rhs = CycNum.zero(p)
    for h in H.members():
        val = f.value(g + h)
        if not val.is_zero():
            rhs = rhs + val * root_of_unity(p, (p - chi.pair(h)) % p)
    rhs = rhs * root_of_unity(p, (p - chi.pair(g)) % p) * Fraction(1, p)
    return lhs == rhs


def restrict_to_coset(f: GFunc, g: Point, H: LineSubgroup) -> GFunc:
    """The rank-1 slice t -> f(g + t * gen(H)) along the generator of H."""
    _require_plane_primal(f)
    gen = H.generator
    vals = [f.value(g + gen.scaled(t)) for t in range(f.p)]
    return GFunc(f.p, 1, PRIMAL, vals)


# -- Galois action ---------------------------------------------------------------


def galois_twist(u: GFunc, j: int) -> GFunc:
    """Apply the Galois map zeta -> zeta^j to the values while relabeling
    each character by its j-th power; fixes the transform of any
    rational-valued function."""
    if u.side != DUAL:
        raise ValueError("galois_twist expects a dual-side function")
    p = u.p
    if j % p == 0:
        raise ValueError("Galois exponent must be a unit modulo p")
    n = len(u.values)
    out = [None] * n
    for w in range(n):
        if u.rank == 1:
            target = (j * w) % p
        else:
            a, b = divmod(w, p)
            target = ((j * a) % p) * p + (j * b) % p
        out[target] = u.values[w].galois(j)
    return GFunc(p, u.rank, DUAL, out)


def rational_support_closure(f: GFunc) -> bool:
    """For rational-valued f, the transform commutes with every Galois
    map, so its support is closed under chi -> chi^j; equivalently the
    support together with the principal character is a union of lines
    through the dual origin.  Returns True iff both facts hold."""
    if not f.is_rational_valued():
        raise ValueError("requires a rational-valued function")
    fh = fourier_transform(f)
    p = f.p
    for j in range(2, p):
        if galois_twist(fh, j) != fh:
            return False
    mask = fh.support_mask
    n = len(fh.values)
    for w in range(n):
        if not (mask >> w & 1):
            continue
        for j in range(2, p):
            if fh.rank == 1:
                target = (j * w) % p
            else:
                a, b = divmod(w, p)
                target = ((j * a) % p) * p + (j * b) % p
            if not (mask >> target & 1):
                return False
    return True


# -- diagnostic probes -------------------------------------------------------------


def line_diff_convolution(f: GFunc, H: LineSubgroup, g: Point, g0: Point) -> GFunc:
    """f convolved with f restricted to the difference of two parallel
    lines: f * (f . (1_{g+H} - 1_{g0+H}))."""
    _require_plane_primal(f)
    ind = coset_indicator(Coset.through(g, H)) - coset_indicator(Coset.through(g0, H))
    return convolution(f, f * ind)


def shifted_line_diff(f: GFunc, H: LineSubgroup, gamma: Point, g: Point) -> GFunc:
    """f restricted to the difference of a line and its gamma-shift:
    f . (1_{g+gamma+H} - 1_{g+H}); gamma must lie outside H."""
    _require_plane_primal(f)
    if H.contains(gamma):
        raise ValueError("gamma must lie outside the subgroup")
    ind = coset_indicator(Coset.through(g + gamma, H)) - coset_indicator(Coset.through(g, H))
    return f * ind


def quad_diff_convolution(f: GFunc, H: LineSubgroup, gamma: Point,
                          g1: Point, g2: Point, g3: Point, g4: Point) -> GFunc:
    """f * (F_{g1} * F_{g2} - F_{g3} * F_{g4}) for the shifted line
    differences F_g; requires g1 + g2 = g3 + g4."""
    if g1 + g2 != g3 + g4:
        raise ValueError("requires g1 + g2 = g3 + g4")
    F1 = shifted_line_diff(f, H, gamma, g1)
    F2 = shifted_line_diff(f, H, gamma, g2)
    F3 = shifted_line_diff(f, H, gamma, g3)
    F4 = shifted_line_diff(f, H, gamma, g4)
    return convolution(f, convolution(F1, F2) - convolution(F3, F4))
