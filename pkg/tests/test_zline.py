"""The three compatible medians on the integers."""

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from median_forge.zline import (
    QuotientReport,
    ZOp,
    WindowReport,
    window_verify,
    z_interval,
    z_median,
    z_quotient_check,
    z_retraction,
)

ints = st.integers(min_value=-40, max_value=40)


class TestValues:
    def test_reference_triple(self):
        assert z_median(ZOp.M0, 0, 1, 2) == 1
        assert z_median(ZOp.M1, 0, 1, 2) == 2
        assert z_median(ZOp.MM1, 0, 1, 2) == 0

    def test_ops_differ(self):
        vals = {op: z_median(op, 0, 1, 2) for op in ZOp}
        assert len(set(vals.values())) == 3

    def test_even_restriction(self):
        assert z_median(ZOp.M1, 0, 2, 4) == 2 == z_median(ZOp.M0, 0, 2, 4)


@settings(max_examples=200, deadline=None)
@given(ints, ints, ints)
def test_pointwise_properties(x, y, z):
    for op in ZOp:
        v = z_median(op, x, y, z)
        assert v in (x, y, z)
        assert v == z_median(op, y, x, z) == z_median(op, x, z, y)
        assert z_median(op, x, y, x) == x
    assert z_median(ZOp.MM1, x, y, z) == -z_median(ZOp.M1, -x, -y, -z)


class TestWindow:
    def test_all_ops_pass(self):
        for op in ZOp:
            rep = window_verify(op, 8)
            assert rep.ok, rep.violation

    def test_small_window_rejected(self):
        with pytest.raises(ValueError):
            window_verify(ZOp.M0, 1)

    def test_corrupted_order_fails_compatibility(self):
        # evens ascending and odds ascending is a total order whose
        # betweenness median is not translation compatible
        def corrupt(x, y, z):
            key = lambda t: (t & 1, t)
            return sorted((x, y, z), key=key)[1]

        found = None
        n = 6
        for x, y, z in product(range(-n, n), repeat=3):
            if corrupt(x + 1, y + 1, z + 1) != corrupt(x, y, z) + 1:
                found = (x, y, z)
                break
        assert found is not None


class TestRetraction:
    def test_clamp(self):
        assert z_retraction(ZOp.M0, -5) == 0
        assert z_retraction(ZOp.M0, 7) == 7

    def test_parity_split(self):
        assert z_retraction(ZOp.M1, -4) == 0
        assert z_retraction(ZOp.M1, -3) == 1

    def test_folding_identity(self):
        for n in range(-32, 33):
            assert z_retraction(ZOp.M1, n) == z_median(ZOp.M1, 0, n, 1)

    def test_conjugate_rejected(self):
        with pytest.raises(ValueError):
            z_retraction(ZOp.MM1, 3)

    def test_images_are_naturals(self):
        for n in range(-32, 33):
            assert z_retraction(ZOp.M0, n) >= 0
            assert z_retraction(ZOp.M1, n) >= 0
            if n >= 0:
                assert z_retraction(ZOp.M0, n) == n == z_retraction(ZOp.M1, n)


class TestQuotient:
    def test_window(self):
        rep = z_quotient_check(10)
        assert rep.ok, rep.violation

    def test_parity_majority_explicit(self):
        for x, y, z in product(range(-6, 7), repeat=3):
            par = z_median(ZOp.M1, x, y, z) & 1
            assert par == (((x & 1) + (y & 1) + (z & 1)) >> 1)

    def test_even_interval(self):
        assert z_interval(ZOp.M1, 0, 2, 8) == [0, 2]
        assert z_interval(ZOp.M1, -2, 4, 8) == [-2, 0, 2, 4]


class TestLocalLinearitySurrogate:
    def test_unit_cell_grows_with_window(self):
        # the cell between 0 and 1 meets every window in the naturals, so
        # its window trace grows without bound
        sizes = [len(z_interval(ZOp.M1, 0, 1, n)) for n in (4, 8, 16)]
        assert sizes == [5, 9, 17]
        for n in (4, 8, 16):
            assert z_interval(ZOp.M1, 0, 1, n) == list(range(0, n + 1))

    def test_intervals_are_chains(self):
        # every interval inside the window is totally ordered by the
        # anchored order
        for op in ZOp:
            for a in range(-4, 5):
                for b in range(-4, 5):
                    cell = [z for z in range(-8, 9) if z_median(op, a, b, z) == z]
                    for p in cell:
                        for q in cell:
                            assert (
                                z_median(op, p, a, q) == p or z_median(op, q, a, p) == q
                            )
