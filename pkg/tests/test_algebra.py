"""Core median algebra operations against brute-force oracles."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from median_forge.algebra import (
    MedianAlgebra,
    algebra_from_json,
    algebra_to_json,
    base_leq,
    base_meet,
    boundary_partner,
    cell_boundary,
    check_median_axioms,
    convex_hull,
    distance,
    folding_for,
    from_function,
    interval,
    is_convex,
    is_folding,
    is_locally_linear,
    median_closure,
)
from median_forge.bits import iter_bits, mask_of
from median_forge.fixtures import chain_table, grid_table, square_table, star_table

SQUARE = square_table()          # opposite pairs (0,2), (1,3)
CHAIN3 = chain_table(3)
STAR4 = star_table(4)            # center 0, leaves 1, 2, 3
FIXTURES = [chain_table(1), chain_table(2), CHAIN3, SQUARE, STAR4,
            chain_table(5), grid_table(2, 3)]


def brute_force_axioms(n, m):
    """Independent axiom oracle: direct loops over the definition."""
    from itertools import product

    for x, y, z in product(range(n), repeat=3):
        if m(x, y, z) != m(y, x, z) or m(x, y, z) != m(x, z, y):
            return False
    for x, y in product(range(n), repeat=2):
        if m(x, y, x) != x:
            return False
    for x, y, z, u, v in product(range(n), repeat=5):
        if m(m(x, y, z), u, v) != m(m(x, u, v), m(y, u, v), z):
            return False
    return True


class TestAxioms:
    def test_one_element_passes(self):
        assert check_median_axioms(1, (0,)).ok

    def test_square_passes_brute_force(self):
        assert brute_force_axioms(4, SQUARE.m)
        assert check_median_axioms(4, SQUARE.table).ok

    def test_symmetry_violation_reported(self):
        # m(0,1,2)=0 but m(0,2,1)=1; all other entries forced by absorption
        table = [[[None] * 3 for _ in range(3)] for _ in range(3)]
        for x in range(3):
            for y in range(3):
                table[x][x][y] = table[x][y][x] = table[y][x][x] = x
        table[0][1][2] = table[1][0][2] = table[2][1][0] = 0
        table[0][2][1] = table[2][0][1] = table[1][2][0] = 1
        flat = [table[x][y][z] for x in range(3) for y in range(3) for z in range(3)]
        rep = check_median_axioms(3, flat)
        assert not rep.ok
        assert rep.first()[0] == "M1"
        assert rep.first()[1] == (0, 1, 2)

    def test_malformed_rejected(self):
        with pytest.raises(ValueError):
            check_median_axioms(2, (0,) * 7)
        with pytest.raises(ValueError):
            check_median_axioms(2, (0, 0, 0, 0, 0, 0, 0, 5))


class TestInterval:
    def test_square_diagonal_is_everything(self):
        assert interval(SQUARE, 0, 2) == 0b1111
        assert interval(SQUARE, 1, 3) == 0b1111

    def test_degenerate(self):
        for M in FIXTURES:
            for x in range(M.size):
                assert interval(M, x, x) == 1 << x

    def test_chain_ends(self):
        assert interval(CHAIN3, 0, 2) == 0b111

    def test_symmetric_and_convex(self):
        for M in FIXTURES:
            for x in range(M.size):
                for y in range(M.size):
                    cell = interval(M, x, y)
                    assert cell == interval(M, y, x)
                    assert cell & (1 << x) and cell & (1 << y)
                    assert is_convex(M, cell)


class TestHull:
    def test_singleton(self):
        for M in FIXTURES:
            for x in range(M.size):
                assert convex_hull(M, 1 << x) == 1 << x

    def test_pair_is_interval(self):
        for M in FIXTURES:
            for x in range(M.size):
                for y in range(M.size):
                    assert convex_hull(M, (1 << x) | (1 << y)) == interval(M, x, y)

    def test_star_leaves(self):
        # brute-force closure oracle: saturate with medians of anchored pairs
        mask = 0b1110
        expected = mask
        while True:
            new = expected
            for x in iter_bits(expected):
                for y in iter_bits(expected):
                    for z in range(4):
                        new |= 1 << STAR4.m(x, y, z)
            if new == expected:
                break
            expected = new
        assert expected == 0b1111
        assert convex_hull(STAR4, mask) == 0b1111

    def test_empty(self):
        assert convex_hull(SQUARE, 0) == 0

    def test_monotone_idempotent_extensive(self):
        for M in FIXTURES:
            full = M.full_mask()
            for a in range(full + 1):
                h = convex_hull(M, a)
                assert h & a == a
                assert convex_hull(M, h) == h
                for b in range(full + 1):
                    if b & a == a:
                        assert convex_hull(M, b) & h == h


class TestMedianClosure:
    def test_singleton(self):
        assert median_closure(SQUARE, 0b1) == 0b1

    def test_square_three_corners_already_closed(self):
        # the median of three pairwise distinct square corners is a corner
        # among them, so nothing new is added
        assert median_closure(SQUARE, 0b0111) == 0b0111

    def test_star_leaves_add_center(self):
        assert median_closure(STAR4, 0b1110) == 0b1111

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            median_closure(SQUARE, 0)


class TestFolding:
    def test_whole_is_identity(self):
        for M in FIXTURES:
            assert folding_for(M, M.full_mask()) == tuple(range(M.size))

    def test_singleton_is_constant(self):
        for M in FIXTURES:
            for a in range(M.size):
                assert folding_for(M, 1 << a) == (a,) * M.size

    def test_square_edge(self):
        # oracle: the intersection of intervals to the edge must be the
        # interval up to the folded point
        phi = folding_for(SQUARE, 0b0011)
        assert phi == (0, 1, 1, 0)
        for x in range(4):
            inter = interval(SQUARE, x, 0) & interval(SQUARE, x, 1)
            assert inter == interval(SQUARE, x, phi[x])

    def test_folding_properties(self):
        for M in FIXTURES:
            for mask in range(1, M.full_mask() + 1):
                phi = folding_for(M, mask)
                assert is_folding(M, phi)
                assert all(phi[phi[x]] == phi[x] for x in range(M.size))
                assert mask_of(phi) == convex_hull(M, mask)
                for x in range(M.size):
                    inter = M.full_mask()
                    for a in iter_bits(mask):
                        inter &= interval(M, x, a)
                    assert inter == interval(M, x, phi[x])

    def test_is_folding_examples(self):
        assert is_folding(SQUARE, (0, 1, 2, 3))
        assert is_folding(SQUARE, (2, 2, 2, 2))
        assert not is_folding(SQUARE, (2, 1, 0, 3))

    def test_total_required(self):
        with pytest.raises(ValueError):
            is_folding(SQUARE, (0, 1))


class TestBoundaryAndDistance:
    def test_point_boundary(self):
        for M in FIXTURES:
            for x in range(M.size):
                assert cell_boundary(M, x, x) == 1 << x

    def test_square_boundary(self):
        assert cell_boundary(SQUARE, 0, 2) == 0b1111

    def test_chain_boundary(self):
        assert cell_boundary(CHAIN3, 0, 2) == 0b101

    def test_partner_involution(self):
        for M in FIXTURES:
            for x in range(M.size):
                for y in range(M.size):
                    pairing = boundary_partner(M, x, y)
                    for a, b in pairing.items():
                        assert pairing[b] == a

    def test_distance_values(self):
        assert distance(SQUARE, 0, 0) == 0
        assert distance(SQUARE, 0, 2) == 2
        assert distance(SQUARE, 0, 1) == 1
        assert distance(CHAIN3, 0, 2) == 2

    def test_distance_chain_oracle(self):
        # independent oracle: longest strictly increasing sequence in the
        # anchored order, by recursion over predecessors
        def longest_chain(M, x, y):
            cell = list(iter_bits(interval(M, x, y)))
            memo = {}

            def down(a):
                if a not in memo:
                    memo[a] = max(
                        (down(b) + 1 for b in cell if b != a and base_leq(M, x, b, a)),
                        default=0,
                    )
                return memo[a]

            return down(y)

        for M in FIXTURES:
            for x in range(M.size):
                for y in range(M.size):
                    assert distance(M, x, y) == longest_chain(M, x, y)

    def test_distance_metric_identity(self):
        for M in FIXTURES:
            for x in range(M.size):
                for y in range(M.size):
                    assert distance(M, x, y) == distance(M, y, x)
                    assert (distance(M, x, y) == 0) == (x == y)
                    for z in range(M.size):
                        lhs = 2 * distance(M, x, base_meet(M, x, y, z))
                        rhs = distance(M, x, y) + distance(M, x, z) - distance(M, y, z)
                        assert lhs == rhs

    def test_cell_size_on_locally_linear(self):
        for M in FIXTURES:
            if not is_locally_linear(M):
                continue
            for x in range(M.size):
                for y in range(M.size):
                    size = bin(interval(M, x, y)).count("1")
                    assert size == distance(M, x, y) + 1


class TestLocalLinearity:
    def test_chains_yes(self):
        for n in (1, 2, 3, 5):
            assert is_locally_linear(chain_table(n))

    def test_square_no(self):
        assert not is_locally_linear(SQUARE)

    def test_star_yes(self):
        assert is_locally_linear(STAR4)

    def test_matches_end_count(self):
        for M in FIXTURES:
            two_ends = all(
                bin(cell_boundary(M, x, y)).count("1") <= 2
                for x in range(M.size)
                for y in range(M.size)
            )
            assert two_ends == is_locally_linear(M)


class TestTripleIntersections:
    def test_median_is_triple_intersection(self):
        for M in FIXTURES:
            for a in range(M.size):
                for b in range(M.size):
                    for c in range(M.size):
                        inter = interval(M, a, b) & interval(M, b, c) & interval(M, c, a)
                        assert inter == 1 << M.m(a, b, c)

    def test_membership_criterion(self):
        for M in FIXTURES:
            for a in range(M.size):
                for b in range(M.size):
                    for c in range(M.size):
                        member = bool((interval(M, a, b) >> c) & 1)
                        crit = interval(M, a, c) & interval(M, b, c) == 1 << c
                        assert member == crit


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=63), st.integers(min_value=0, max_value=63))
def test_hull_union_monotone(a, b):
    M = grid_table(2, 3)
    ha = convex_hull(M, a)
    hb = convex_hull(M, b)
    hull_union = convex_hull(M, a | b)
    assert hull_union & (ha | hb) == (ha | hb)


class TestJson:
    def test_round_trip(self):
        for M in FIXTURES:
            again = algebra_from_json(algebra_to_json(M))
            assert again.table == M.table

    def test_symmetric_closure_on_load(self):
        data = {"size": 3, "triples": [[0, 1, 2, 1]]}
        M = algebra_from_json(data)
        assert M.m(2, 0, 1) == 1 and M.m(1, 2, 0) == 1

    def test_loader_rejects_non_median(self):
        data = {"size": 4, "triples": [[0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 3, 1], [1, 2, 3, 0]]}
        with pytest.raises(ValueError):
            algebra_from_json(data)
        M = algebra_from_json(data, checked=False)
        assert isinstance(M, MedianAlgebra)

    def test_conflicting_triples(self):
        data = {"size": 3, "triples": [[0, 1, 2, 1], [1, 0, 2, 2]]}
        with pytest.raises(ValueError):
            algebra_from_json(data)

    def test_missing_triples(self):
        with pytest.raises(ValueError):
            algebra_from_json({"size": 4, "triples": [[0, 1, 2, 1]]})
