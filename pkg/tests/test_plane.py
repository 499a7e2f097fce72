"""Plane geometry: directions, lines, blocking sets, covers."""

import itertools

import pytest

from primeplane.plane import (
    DUAL,
    PRIMAL,
    LineSubgroup,
    Point,
    PointSet,
    all_subgroups,
    bounded_line_direction,
    coset_of,
    covered_by_lines,
    direction_through,
    directions_determined,
    is_blocking_set,
    lines_in_direction,
    min_blocking_size,
    min_line_cover,
    one_line_cover,
    orthogonal,
    orthogonal_direction,
    parse_pointset,
    pencil_stability,
    rich_direction_search,
    tables,
    two_line_cover,
)


def test_subgroup_count_and_partition():
    for p in (2, 3, 5, 7):
        subs = all_subgroups(p)
        assert len(subs) == p + 1
        seen = {}
        for sub in subs:
            for pt in sub.members():
                if pt.is_origin():
                    continue
                assert pt not in seen, "nonzero point in two subgroups"
                seen[pt] = sub.direction
        assert len(seen) == (p + 1) * (p - 1)


def test_p5_generators_up_to_scaling():
    gens = [sub.generator for sub in all_subgroups(5)]
    expected = [(1, 0), (1, 1), (1, 2), (1, 3), (1, 4), (0, 1)]
    assert [(g.x, g.y) for g in gens] == expected


def test_orthogonal_involution_and_size():
    for p in (3, 5, 7):
        for sub in all_subgroups(p):
            perp = orthogonal(sub)
            assert perp.side == DUAL
            assert orthogonal(perp) == sub
            assert len(perp.members()) == p
            # every pairing between the subgroup and its orthogonal vanishes
            for h in sub.members():
                for chi in perp.members():
                    assert chi.pair(h) == 0


def test_orthogonal_of_horizontal_is_vertical():
    H = LineSubgroup(5, 0)
    assert orthogonal(H).generator == Point(5, 0, 1, DUAL)


def test_lines_partition_plane():
    for p in (3, 5):
        for sub in all_subgroups(p):
            lines = lines_in_direction(sub)
            assert len(lines) == p
            seen = set()
            for line in lines:
                members = line.members()
                assert len(members) == p
                seen.update(members)
            assert len(seen) == p * p


def test_two_points_share_exactly_one_line():
    p = 3
    T = tables(p)
    pts = [Point.from_index(p, i) for i in range(p * p)]
    for a, b in itertools.combinations(pts, 2):
        shared = [
            (d, j)
            for d, j, m in T.all_lines
            if (m >> a.index & 1) and (m >> b.index & 1)
        ]
        assert len(shared) == 1
        assert shared[0][0] == direction_through(a, b)


def test_coset_of_example():
    got = coset_of(Point(3, 1, 2), LineSubgroup(3, 0))
    assert set(got.members()) == {Point(3, 0, 2), Point(3, 1, 2), Point(3, 2, 2)}
    assert got.rep == Point(3, 0, 2)


def test_coset_side_mismatch_rejected():
    with pytest.raises(ValueError):
        coset_of(Point(3, 1, 2, DUAL), LineSubgroup(3, 0))


def test_point_count_per_line():
    # each point lies on exactly p+1 lines
    for p in (3, 5):
        T = tables(p)
        for idx in range(p * p):
            assert len(T.lines_through[idx]) == p + 1
            for _, mask in T.lines_through[idx]:
                assert mask >> idx & 1


def test_directions_determined_examples():
    P = PointSet.from_pairs(3, [(0, 0), (1, 0)])
    assert directions_determined(P) == frozenset({0})
    with pytest.raises(ValueError):
        directions_determined(PointSet.from_pairs(3, [(0, 0)]))
    # any set with more than p points determines every direction
    big = PointSet.from_pairs(5, [(x, y) for x in range(3) for y in range(2)])
    assert directions_determined(big) == frozenset(range(6))


def test_blocking_examples():
    for p in (2, 3, 5):
        two_lines = PointSet(p, PRIMAL,
                             tables(p).coset_masks[0][0] | tables(p).coset_masks[p][0])
        assert two_lines.size == 2 * p - 1
        assert is_blocking_set(two_lines)
        one_line = PointSet(p, PRIMAL, tables(p).coset_masks[0][0])
        assert not is_blocking_set(one_line)


def test_min_blocking_small():
    for p in (2, 3):
        size, witness = min_blocking_size(p)
        assert size == 2 * p - 1
        assert witness.size == size
        assert is_blocking_set(witness)


def test_pencil_stability_full_line():
    p = 3
    P = PointSet(p, PRIMAL, tables(p).coset_masks[0][0])
    rep = pencil_stability(P)
    assert (rep.k, rep.m) == (1, 2)
    assert rep.bound == 2 * p - rep.k - rep.m == 3 == P.size
    assert rep.holds


def test_pencil_blocking_branch():
    p = 3
    blocking = PointSet(p, PRIMAL, tables(p).coset_masks[0][0] | tables(p).coset_masks[p][0])
    rep = pencil_stability(blocking)
    assert rep.is_blocking and (rep.k, rep.m) == (0, 0)
    assert rep.bound == 2 * p - 1
    assert rep.holds


def test_pencil_exhaustive_p3():
    p = 3
    for mask in range(1 << 9):
        assert pencil_stability(PointSet(p, PRIMAL, mask)).holds


def test_bounded_line_direction_examples():
    p = 5
    two = PointSet(p, PRIMAL, tables(p).coset_masks[0][0] | tables(p).coset_masks[p][0])
    assert two.size == 9
    d = bounded_line_direction(two)
    assert d is not None and d not in (0, p)
    counts = [
        (m & two.mask).bit_count() for m in tables(p).coset_masks[d]
    ]
    assert max(counts) < 4  # sqrt(9) + max(1, 9/10) = 4

    pair = PointSet.from_pairs(5, [(0, 0), (1, 1)])
    assert bounded_line_direction(pair) == 1

    with pytest.raises(ValueError):
        bounded_line_direction(PointSet.from_pairs(5, [(0, 0)]))


def test_bounded_line_direction_exhaustive_p3():
    # over all non-collinear P with 2 <= |P| <= 4p a witness direction exists
    p = 3
    for mask in range(1, 1 << 9):
        P = PointSet(p, PRIMAL, mask)
        if not 2 <= P.size <= 4 * p:
            continue
        if one_line_cover(P):
            continue
        assert bounded_line_direction(P) is not None


def test_rich_direction_exhaustive_p3():
    p = 3
    full = (1 << 9) - 1
    candidates = [full] + [full & ~(1 << i) for i in range(9)]
    for mask in candidates:
        P = PointSet(p, PRIMAL, mask)
        d = rich_direction_search(P)
        assert d is not None
        counts = [(m & P.mask).bit_count() for m in tables(p).coset_masks[d]]
        assert max(counts) >= 3 and 2 * max(counts) <= p + 5


def test_rich_direction_preconditions():
    p = 5
    small = PointSet.from_pairs(p, [(0, 0), (1, 1), (2, 2)])
    with pytest.raises(ValueError):
        rich_direction_search(small)
    # (3p+7)/2 = 11 points inside two lines -> precondition error
    two_lines = PointSet(p, PRIMAL, tables(p).coset_masks[0][0] | tables(p).coset_masks[p][0])
    extra = PointSet.from_pairs(p, [(1, 1), (2, 2)])
    P = two_lines | extra
    assert P.size == 11
    if two_line_cover(P):
        with pytest.raises(ValueError):
            rich_direction_search(P)


def test_line_covers():
    p = 3
    assert one_line_cover(PointSet.from_pairs(p, [(0, 0), (1, 1)]))
    assert two_line_cover(PointSet.from_pairs(p, [(0, 0), (1, 1)]))
    assert not two_line_cover(PointSet.full(p))
    parallel = PointSet(p, PRIMAL, tables(p).coset_masks[0][0] | tables(p).coset_masks[0][1])
    assert two_line_cover(parallel)
    assert min_line_cover(parallel) == 2
    assert min_line_cover(PointSet.full(p)) == p
    assert min_line_cover(PointSet.empty(p)) == 0
    assert covered_by_lines(PointSet.full(p), p)
    assert not covered_by_lines(PointSet.full(p), p - 1)


def test_min_line_cover_three_subgroups():
    p = 5
    mask = 0
    for d in (0, 1, 2):
        mask |= tables(p).coset_masks[d][0]
    P = PointSet(p, PRIMAL, mask)
    assert min_line_cover(P) == 3


def test_pointset_literal_round_trip():
    P = PointSet.from_pairs(5, [(0, 1), (3, 2), (4, 4)])
    assert parse_pointset(P.literal()) == P
    assert parse_pointset("3; (0,0),(2,1)").size == 2
    assert parse_pointset("3;").size == 0
    with pytest.raises(ValueError):
        parse_pointset("nonsense")
    with pytest.raises(ValueError):
        parse_pointset("3; (0,0),(5,1)")
    with pytest.raises(ValueError):
        parse_pointset("3; (0,0) junk")


def test_pointset_set_algebra():
    a = PointSet.from_pairs(3, [(0, 0), (1, 1)])
    b = PointSet.from_pairs(3, [(1, 1), (2, 2)])
    assert (a | b).size == 3
    assert (a & b).pairs() == ((1, 1),)
    assert (a - b).pairs() == ((0, 0),)
    assert a.complement().size == 7
    with pytest.raises(ValueError):
        a | PointSet.from_pairs(3, [(0, 0)], side=DUAL)


def test_orthogonal_direction_involution():
    for p in (3, 5, 7, 11):
        for d in range(p + 1):
            assert orthogonal_direction(p, orthogonal_direction(p, d)) == d


def test_line_intersection_cardinalities():
    # p(p+1) lines; distinct lines meet in exactly one point iff nonparallel
    for p in (3, 5):
        T = tables(p)
        lines = list(T.all_lines)
        assert len(lines) == p * (p + 1)
        for i, (d1, _, m1) in enumerate(lines):
            for d2, _, m2 in lines[i + 1:]:
                common = (m1 & m2).bit_count()
                assert common == (0 if d1 == d2 else 1)
