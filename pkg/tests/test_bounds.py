"""Bound evaluators, support profiles and the exception classifier."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primeplane.bounds import (
    EQUALITY,
    EXCEPTION,
    HOLDS,
    VIOLATED,
    check_asym2,
    check_asym3,
    check_birotao,
    check_conjecture,
    check_coset_counts,
    check_kp1,
    check_kp2,
    check_meshulam,
    check_product,
    check_product3,
    check_quasicharacter,
    check_rational,
    check_roots,
    classify_exception,
    profile,
    support_profile,
    sumset_size,
)
from primeplane.cyclotomic import CycNum, root_of_unity
from primeplane.fourier import GFunc, coset_indicator, fourier_transform
from primeplane.plane import (
    DUAL,
    PRIMAL,
    Coset,
    LineSubgroup,
    Point,
    PointSet,
)
from primeplane.search import (
    character_cosets,
    character_coset,
    coset_characters,
    diff_of_subgroups,
    pm_two_cosets,
    triple_subgroups,
    two_nonparallel_lines_function,
    two_parallel_lines_function,
)


def subgroup_indicator(p, d=0):
    return coset_indicator(Coset.through(Point(p, 0, 0), LineSubgroup(p, d)))


# -- profile -------------------------------------------------------------------


def test_profile_of_subgroup_indicator():
    p = 5
    f = subgroup_indicator(p, 0)
    prof = profile(f)
    st = prof.stats(0)
    assert (st.n_S, st.K_S, st.n_X, st.K_X) == (p, 1, p, 1)


def test_profile_of_delta():
    p = 3
    prof = profile(GFunc.delta(p, 2, 0))
    assert prof.X.size == p * p
    for d in range(p + 1):
        st = prof.stats(d)
        assert (st.n_S, st.K_S, st.n_X, st.K_X) == (1, 1, p, p)


def test_profile_diff_sizes():
    for p in (3, 5):
        f = diff_of_subgroups(p).func
        prof = profile(f)
        assert prof.S.size == prof.X.size == 2 * (p - 1)


def test_profile_consistency_invariants():
    rng = random.Random(3)
    p = 5
    from primeplane.plane import tables

    for _ in range(10):
        vals = [rng.choice([-1, 0, 0, 1]) for _ in range(p * p)]
        if not any(vals):
            continue
        f = GFunc(p, 2, PRIMAL, vals)
        prof = profile(f)
        T = tables(p)
        for d in range(p + 1):
            st = prof.stats(d)
            counts = [(m & prof.S.mask).bit_count() for m in T.coset_masks[d]]
            assert sum(counts) == prof.S.size
            assert st.n_S >= 1
            assert st.K_S * p >= prof.S.size
            assert Fraction(st.n_S) <= Fraction(prof.S.size, st.K_S) <= prof.S.size
            assert prof.isolated_count(d) <= st.K_X


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 2**25 - 1))
def test_profile_invariants_hypothesis_p5(s_mask):
    from primeplane.plane import tables

    p = 5
    S = PointSet(p, PRIMAL, s_mask)
    X = PointSet(p, DUAL, s_mask)  # any nonempty dual set works for the stats
    prof = support_profile(S, X)
    T = tables(p)
    for d in range(p + 1):
        stats = prof.stats(d)
        counts = [(m & S.mask).bit_count() for m in T.coset_masks[d]]
        assert sum(counts) == S.size
        assert 1 <= stats.n_S <= min(c for c in counts if c)
        assert stats.K_S * p >= S.size
        assert Fraction(stats.n_S) <= Fraction(S.size, stats.K_S)
        assert prof.isolated_count(d) <= stats.K_X


def test_profile_line_count_and_isolated():
    p = 3
    f = subgroup_indicator(p, 0)
    prof = profile(f)
    assert prof.line_count(Point(p, 1, 0), 0) == p
    assert prof.line_count(Point(p, 0, 1), 0) == 0
    # X is one full orthogonal line: no isolated characters for d=0
    assert prof.isolated_count(0) == 0


def test_profile_rejects_zero():
    with pytest.raises(ValueError):
        profile(GFunc.zero(3, 2, PRIMAL))


# -- elementary bounds -----------------------------------------------------------


def test_product_bound_rank1_example():
    p = 5
    f = GFunc(p, 1, PRIMAL, [1, 1, 0, 0, 0])
    fh = fourier_transform(f)
    assert fh.support_size == p  # (1 + zeta^-a)/5 never vanishes for odd p
    rep = check_birotao(f)
    assert rep.verdict == HOLDS and rep.lhs == 7 and rep.rhs == 6


def test_product_equality_for_character_coset():
    p = 5
    rep = check_product(character_coset(p, direction=1, character=(2, 3)).func)
    assert rep.verdict == EQUALITY
    assert rep.lhs == p * p


def test_meshulam_examples():
    p = 3
    rep = check_meshulam(subgroup_indicator(p))
    assert rep.verdict == EQUALITY  # 3 + 3/3 = 4
    rep2 = check_meshulam(GFunc.delta(p, 2, 0))
    assert rep2.verdict == EQUALITY  # 1 + 9/3 = 4


def test_rational_equality_example():
    p = 3
    rep = check_rational(diff_of_subgroups(p).func)
    assert rep.verdict == EQUALITY
    assert rep.lhs == rep.rhs == p + 1


def test_rational_exception_branches():
    p = 5
    rep = check_rational(subgroup_indicator(p))
    assert rep.verdict == EXCEPTION
    assert rep.details["stated_support_matches"]
    assert "nonzero value sum" in rep.details["note"]

    # zero-sum periodic function: X is the punctured orthogonal subgroup
    sub = LineSubgroup(p, 0)
    f = coset_indicator(Coset.through(Point(p, 0, 0), sub)) - \
        coset_indicator(Coset.through(Point(p, 0, 1), sub))
    rep2 = check_rational(f)
    assert rep2.verdict == EXCEPTION
    assert rep2.details["stated_support_matches"]
    assert "zero value sum" in rep2.details["note"]

    rep3 = check_rational(GFunc.constant(p, 2, 2, PRIMAL))
    assert rep3.verdict == EXCEPTION
    assert rep3.details["stated_support_matches"]
    assert "constant" in rep3.details["note"]


def test_rational_rejects_nonrational():
    p = 3
    vals = [CycNum.zero(p)] * 9
    vals[0] = root_of_unity(p, 1)
    with pytest.raises(ValueError):
        check_rational(GFunc(p, 2, PRIMAL, vals))


def test_kp1_equality_and_exception():
    p = 5
    rep = check_kp1(pm_two_cosets(p).func)
    assert rep.verdict == EQUALITY
    assert rep.lhs == rep.rhs == p + 1

    rep2 = check_kp1(character_coset(p, character=(1, 2)).func)
    assert rep2.verdict == EXCEPTION
    assert rep2.exception is not None
    assert rep2.exception.kind == "single-coset-character"


def test_kp2_and_product3_exceptions():
    p = 5
    sub = LineSubgroup(p, 0)
    chi = Point(p, 1, 2, DUAL)
    # one character on two parallel cosets: near-coset structure
    f = character_cosets(p, 0, [(0, 0), (0, 1)], (1, 2), [1, 2]).func
    rep = check_kp2(f)
    assert rep.verdict == EXCEPTION
    assert rep.details["structure"]["large_cosets"]
    rep2 = check_product3(f)
    assert rep2.verdict == EXCEPTION

    rep3 = check_product3(GFunc.delta(p, 2, 0))
    assert rep3.verdict == EXCEPTION
    assert rep3.details["reason"] == "min support size at most 2"


def test_kp2_min_branch():
    # a function with both supports large: min >= 3(p-1)/2 branch applies
    p = 3
    f = GFunc(p, 2, PRIMAL, [1, 1, 1, 1, -1, 0, 0, 1, -1])
    rep = check_kp2(f)
    assert rep.verdict in (HOLDS, EQUALITY)


def test_product3_bound_values():
    p = 5
    f = triple_subgroups(p).func
    rep = check_product3(f)
    assert rep.verdict in (HOLDS, EQUALITY)
    assert rep.lhs == (3 * (p - 1)) ** 2
    assert rep.rhs == 3 * p * (p - 2)


def test_conjecture_reduces_to_meshulam_at_k1():
    rng = random.Random(9)
    p = 3
    for _ in range(10):
        vals = [rng.choice([-1, 0, 1]) for _ in range(9)]
        if not any(vals):
            continue
        f = GFunc(p, 2, PRIMAL, vals)
        r1 = check_conjecture(f, 1)
        r2 = check_meshulam(f)
        assert r1.lhs == r2.lhs and r1.rhs == r2.rhs


def test_conjecture_implication_low_to_high_k():
    # holds at k < p/2 forces holds at p+1-k on the same function
    rng = random.Random(13)
    p = 5
    for _ in range(30):
        vals = [rng.choice([-1, 0, 0, 1]) for _ in range(25)]
        if not any(vals):
            continue
        f = GFunc(p, 2, PRIMAL, vals)
        for k in range(1, (p + 1) // 2):
            rk = check_conjecture(f, k)
            if rk.verdict in (HOLDS, EQUALITY):
                rmirror = check_conjecture(f, p + 1 - k)
                assert rmirror.verdict in (HOLDS, EQUALITY)


def test_conjecture_implication_upper_range():
    # for k > p/2, holding at k forces holding at k+1 on the same function
    rng = random.Random(15)
    p = 5
    for _ in range(30):
        vals = [rng.choice([-1, 0, 0, 1]) for _ in range(25)]
        if not any(vals):
            continue
        f = GFunc(p, 2, PRIMAL, vals)
        for k in range((p + 1) // 2 + 1, p):
            rk = check_conjecture(f, k)
            if rk.verdict in (HOLDS, EQUALITY):
                rnext = check_conjecture(f, k + 1)
                assert rnext.verdict in (HOLDS, EQUALITY)


def test_conjecture_cover_details_and_k_validation():
    p = 5
    f = character_coset(p).func
    rep = check_conjecture(f, 2)
    assert rep.details["cover_S"] == 1
    assert rep.details["cover_X"] == 1
    assert rep.details["cover_clause_applies"]
    assert rep.verdict in (EXCEPTION, HOLDS, EQUALITY)
    with pytest.raises(ValueError):
        check_conjecture(f, 0)
    with pytest.raises(ValueError):
        check_conjecture(f, p + 1)


def test_conjecture_lattice_witnesses():
    from primeplane.search import sharp_pair_2d

    p = 5
    for m, n in ((1, 1), (2, 3), (4, 2)):
        c = sharp_pair_2d(p, m, n)
        f = c.func
        fh = fourier_transform(f)
        assert (f.support_size, fh.support_size) == c.expected


def test_roots_verdicts():
    p = 3
    # delta attains equality: sqrt(1) + sqrt(9) = 4 = p+1
    rep = check_roots(GFunc.delta(p, 2, 0))
    assert rep.verdict == EQUALITY
    # subgroup indicator fails the inequality but sits on one line
    rep2 = check_roots(subgroup_indicator(p))
    assert rep2.verdict == EXCEPTION
    assert rep2.details["cover_clause_applies"]
    # full plane holds comfortably
    rep3 = check_roots(GFunc.constant(p, 1, 2, PRIMAL))
    assert rep3.verdict in (HOLDS, EQUALITY)


def test_asym2_remark_and_exception():
    p = 5
    f = diff_of_subgroups(p).func
    # 2(p-1) < 2p shows the constant 2 is unreachable
    assert min(f.support_size, fourier_transform(f).support_size) == 2 * (p - 1) < 2 * p
    rep = check_asym2(f, Fraction(1, 2))
    assert rep.verdict in (HOLDS, EQUALITY)
    assert "advisory" in rep.details  # p < 31

    rep2 = check_asym2(character_coset(p).func, Fraction(1, 2))
    assert rep2.verdict == EXCEPTION

    with pytest.raises(ValueError):
        check_asym2(f, Fraction(3, 2))
    with pytest.raises(ValueError):
        check_asym2(f, 0)


def test_asym2_tight_at_eps_one_over_p():
    # min = 2(p-1) = 2(1 - 1/p)p: the coefficient 2 cannot be improved
    for p in (5, 13, 31):
        f = diff_of_subgroups(p).func
        rep = check_asym2(f, Fraction(1, p))
        assert rep.verdict == EQUALITY
        assert rep.lhs == 2 * (p - 1)


def test_asym3_remark_and_exception():
    p = 5
    f = triple_subgroups(p).func
    fh = fourier_transform(f)
    assert f.support_size == fh.support_size == 3 * (p - 1) < 3 * p
    rep = check_asym3(f, Fraction(1, 2))
    assert rep.verdict in (HOLDS, EQUALITY)

    two_lines = character_cosets(p, 0, [(0, 0), (0, 1)], (0, 0), [1, 1]).func
    rep2 = check_asym3(two_lines, Fraction(1, 2))
    assert rep2.verdict == EXCEPTION


def test_coset_counts_exhaustive_p3():
    # the four counting inequalities hold for every {-1,0,1}-valued f
    from primeplane.search import make_space, sweep

    result = sweep(make_space(3, alphabet=(-1, 0, 1)), ["coset-counts"])
    assert result.violations == []
    assert VIOLATED not in result.counts["coset-counts"]
    assert sum(result.counts["coset-counts"].values()) == 19682


def test_coset_counts_lemma():
    p = 3
    rng = random.Random(17)
    for _ in range(40):
        vals = [rng.choice([-1, 0, 1]) for _ in range(9)]
        if not any(vals):
            continue
        rep = check_coset_counts(GFunc(p, 2, PRIMAL, vals))
        assert rep.verdict != VIOLATED
    # subgroup indicator at its own direction: K_X = 1 >= p+1-p
    f = subgroup_indicator(p, 0)
    rep = check_coset_counts(f, LineSubgroup(p, 0))
    assert rep.verdict != VIOLATED
    rows = rep.details["inequalities"]
    kx = [r for r in rows if r["quantity"] == "K_X"][0]
    assert kx["lhs"] == 1 and kx["rhs"] == 1


def test_coset_counts_on_gallery_families():
    for p in (5, 7):
        for func in (diff_of_subgroups(p).func, pm_two_cosets(p).func,
                     triple_subgroups(p).func):
            rep = check_coset_counts(func)
            assert rep.verdict != VIOLATED


def test_zero_function_rejected():
    with pytest.raises(ValueError):
        check_product(GFunc.zero(3, 2, PRIMAL))


def test_rank1_rejected_by_plane_checks():
    h = GFunc(5, 1, PRIMAL, [1, 0, 0, 0, 0])
    for check in (check_meshulam, check_rational, check_kp1, check_kp2,
                  check_product3, check_roots, check_coset_counts):
        with pytest.raises(ValueError):
            check(h)
    with pytest.raises(ValueError):
        check_conjecture(h, 2)
    with pytest.raises(ValueError):
        check_asym2(h, Fraction(1, 2))
    # while the rank-agnostic product bound accepts rank 1
    assert check_product(h).verdict in (HOLDS, EQUALITY)


# -- classifier ------------------------------------------------------------------


def test_classify_coset_characters_round_trip():
    rng = random.Random(19)
    p = 5
    for k in (1, 2, 3):
        for _ in range(5):
            d = rng.randrange(p + 1)
            offset = (rng.randrange(p), rng.randrange(p))
            perp_dir = LineSubgroup(p, d).orthogonal().direction
            # pick characters in distinct orthogonal cosets
            chis = []
            seen = set()
            while len(chis) < k:
                chi = (rng.randrange(p), rng.randrange(p))
                rep = Coset.through(Point(p, *chi, side=DUAL),
                                    LineSubgroup(p, perp_dir, DUAL)).rep
                if rep not in seen:
                    seen.add(rep)
                    chis.append(chi)
            coeffs = [rng.choice([1, 2, -1]) for _ in range(k)]
            f = coset_characters(p, d, offset, chis, coeffs).func
            desc = classify_exception(f)
            assert desc is not None
            if k == 1 and LineSubgroup(p, d).orthogonal().contains(
                    Point(p, *chis[0], side=DUAL)):
                # the transform line passes through the origin, so the
                # periodicity branch wins
                expected_kind = "H-periodic"
            else:
                expected_kind = {1: "single-coset-character",
                                 2: "two-characters-one-coset"}.get(
                    k, "characters-on-one-coset")
            assert desc.kind == expected_kind
            assert desc.direction == d
            assert desc.reconstruct() == f


def test_classify_character_cosets_round_trip():
    rng = random.Random(23)
    p = 5
    for k in (2, 3):
        for _ in range(5):
            d = rng.randrange(p + 1)
            offsets = []
            seen = set()
            while len(offsets) < k:
                g = (rng.randrange(p), rng.randrange(p))
                rep = Coset.through(Point(p, *g), LineSubgroup(p, d)).rep
                if rep not in seen:
                    seen.add(rep)
                    offsets.append(g)
            chi = (rng.randrange(p), rng.randrange(p))
            coeffs = [rng.choice([1, -2, 3]) for _ in range(k)]
            f = character_cosets(p, d, offsets, chi, coeffs).func
            desc = classify_exception(f)
            assert desc is not None
            if chi == (0, 0):
                assert desc.kind == "H-periodic"
            else:
                assert desc.kind in ("H-periodic", "one-character-two-cosets",
                                     "character-on-cosets")
            assert desc.reconstruct() == f


def test_classify_h_periodic():
    p = 3
    sub = LineSubgroup(p, 1)
    f = coset_indicator(Coset.through(Point(p, 0, 0), sub)) * 2 - \
        coset_indicator(Coset.through(Point(p, 0, 1), sub))
    desc = classify_exception(f)
    assert desc.kind == "H-periodic"
    assert desc.direction == 1
    assert desc.reconstruct() == f


def test_classify_two_parallel_round_trip_and_sandwich():
    rng = random.Random(29)
    p = 5
    for _ in range(8):
        d = rng.randrange(p + 1)
        perp_dir = LineSubgroup(p, d).orthogonal().direction
        while True:
            c1 = (rng.randrange(p), rng.randrange(p))
            c2 = (rng.randrange(p), rng.randrange(p))
            r1 = Coset.through(Point(p, *c1, side=DUAL), LineSubgroup(p, perp_dir, DUAL)).rep
            r2 = Coset.through(Point(p, *c2, side=DUAL), LineSubgroup(p, perp_dir, DUAL)).rep
            if r1 != r2:
                break
        vals1 = [rng.choice([0, 1, 2]) for _ in range(p)]
        vals2 = [rng.choice([0, 1, -1]) for _ in range(p)]
        if not any(vals1) or not any(vals2):
            continue
        f = two_parallel_lines_function(p, d, c1, c2, vals1, vals2).func
        desc = classify_exception(f)
        assert desc is not None
        assert desc.kind in ("two-parallel-lines", "single-coset-character",
                             "two-characters-one-coset", "H-periodic",
                             "one-character-two-cosets", "character-on-cosets",
                             "characters-on-one-coset")
        assert desc.reconstruct() == f
        if desc.kind == "two-parallel-lines":
            n_union = desc.detail("support_union")
            s = desc.detail("support_size")
            assert n_union * (p - 1) <= s * p and s <= n_union


def test_classify_two_nonparallel_round_trip_and_sandwich():
    rng = random.Random(31)
    p = 5
    found_sandwich = False
    for _ in range(12):
        d1, d2 = rng.sample(range(p + 1), 2)
        chi = (rng.randrange(p), rng.randrange(p))
        vals1 = [0] * p
        vals2 = [0] * p
        for idx in rng.sample(range(p), 2):
            vals1[idx] = rng.choice([1, 2])
        vals2[rng.randrange(p)] = rng.choice([1, -1])
        f = two_nonparallel_lines_function(p, d1, d2, chi, vals1, vals2).func
        if f.is_zero_function():
            continue
        desc = classify_exception(f)
        assert desc is not None
        assert desc.reconstruct() == f
        if desc.kind == "two-nonparallel-lines" and desc.detail("component_supports"):
            n1, n2 = desc.detail("component_supports")
            s = desc.detail("support_size")
            assert s <= p * n1 + p * n2
            assert Fraction(p * n1 + p * n2) <= s + Fraction(2 * s * s, p * p)
            found_sandwich = True
    assert found_sandwich


def test_classify_primal_side_cover():
    # support on two nonparallel primal lines with generic values
    p = 5
    vals = [CycNum.zero(p)] * (p * p)
    coords = [(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (0, 1), (0, 2), (0, 3)]
    for i, (x, y) in enumerate(coords):
        vals[x * p + y] = CycNum.from_rational(p, i + 1)
    f = GFunc(p, 2, PRIMAL, vals)
    desc = classify_exception(f)
    assert desc is not None
    assert desc.cover_side == PRIMAL
    assert desc.reconstruct() == f


def test_classify_returns_none_for_spread_function():
    p = 3
    f = GFunc(p, 2, PRIMAL, [1, 1, 0, 1, -1, 1, 0, 1, 1])
    fh = fourier_transform(f)
    from primeplane.plane import two_line_cover

    if not two_line_cover(f.support()) and not two_line_cover(
            PointSet(p, DUAL, fh.support_mask)):
        assert classify_exception(f) is None


def test_classifier_total_on_p3_slice():
    # classification never errors and always reconstructs, across a
    # deterministic stride through the whole {-1,0,1} space at p=3
    from primeplane.search import make_space

    space = make_space(3, alphabet=(-1, 0, 1))
    structured = 0
    for ordinal in range(0, space.candidate_count, 7):
        f = space.gfunc_at(ordinal)
        if f.is_zero_function():
            continue
        desc = classify_exception(f)
        if desc is not None:
            structured += 1
            assert desc.reconstruct() == f
    assert structured > 1000


def test_classifier_rejects_zero_and_rank1():
    with pytest.raises(ValueError):
        classify_exception(GFunc.zero(3, 2, PRIMAL))
    with pytest.raises(ValueError):
        classify_exception(GFunc(3, 1, PRIMAL, [1, 0, 0]))


# -- rank-1 lemmas ------------------------------------------------------------------


def test_quasicharacter_scaled_character():
    p = 7
    chi_vals = [root_of_unity(p, (3 * x) % p) * 2 for x in range(p)]
    h = GFunc(p, 1, PRIMAL, chi_vals)
    A = range(5)  # |A| = 5 > 14/3
    rep = check_quasicharacter(h, A)
    assert rep.verdict == HOLDS
    assert rep.details["transform_support"] == 1


def test_quasicharacter_character_on_A_noise_off():
    p = 7
    vals = [root_of_unity(p, (2 * x) % p) for x in range(p)]
    vals[6] = CycNum.from_rational(p, 5)  # off A, arbitrary
    h = GFunc(p, 1, PRIMAL, vals)
    rep = check_quasicharacter(h, range(6))
    assert rep.verdict in (HOLDS, EQUALITY)
    x = rep.details["transform_support"]
    assert x == 1 or x >= 6


def test_quasicharacter_hypothesis_failure():
    p = 7
    h = GFunc(p, 1, PRIMAL, [1, 2, 4, 1, 1, 1, 1])
    rep = check_quasicharacter(h, range(5))
    assert rep.verdict == EXCEPTION
    assert not rep.details["hypothesis_holds"]


def test_quasicharacter_validation():
    p = 7
    h = GFunc(p, 1, PRIMAL, [1] * p)
    with pytest.raises(ValueError):
        check_quasicharacter(h, range(4))  # |A| = 4 <= 2p/3
    with pytest.raises(ValueError):
        check_quasicharacter(GFunc.zero(p, 1, PRIMAL), range(5))


def test_sumset_bound():
    assert sumset_size([0], [0], 5) == 1
    assert sumset_size([0, 1], [0, 1], 5) == 3
    assert sumset_size(range(5), [2], 5) == 5
    with pytest.raises(ValueError):
        sumset_size([], [1], 5)


def test_exhaustive_quasicharacter_p5():
    # every {0,1,2}-valued h on F_5 with hypothesis holding obeys the bound
    p = 5
    A = range(4)  # |A| = 4 > 10/3
    for counter in range(1, 3**p):
        vals = [(counter // 3**i) % 3 for i in range(p)]
        if not any(vals):
            continue
        rep = check_quasicharacter(GFunc(p, 1, PRIMAL, vals), A)
        assert rep.verdict != VIOLATED
