"""Tests for the truncated Chern-class calculus on projective space.

Expected integral values come from the independent series expansions in
tests/oracles.py (direct power-series coefficients and split exact
sequences), derived before this module was written.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckelab.chow import (
    BundleClass,
    ChowClass,
    check_bridge_identity,
    check_excess_integral,
    direct_sum,
    frobenius,
    kernel_bundle,
    tautological_sub,
    twist,
)
from heckelab.errors import DomainError
from heckelab.qcalc import LaurentPoly

from .oracles import excess_i1_value, excess_i2_value, excess_i3_value

small_coeffs = st.lists(st.integers(-4, 4), min_size=1, max_size=4)


def lines(dim, ks):
    """Direct sum of the line bundles O(k) for k in ks, on P^dim."""
    total = BundleClass.trivial(dim, 0)
    for k in ks:
        total = direct_sum(total, BundleClass.line(dim, k))
    return total


class TestChowClass:
    def test_construction_pads_and_truncates(self):
        assert ChowClass(2, [1, 2]) == ChowClass(2, [1, 2, 0])
        assert ChowClass(1, [1, 2, 99]) == ChowClass(1, [1, 2])
        assert ChowClass(0, 7).coefficient(0) == 7

    def test_negative_dimension_rejected(self):
        with pytest.raises(DomainError):
            ChowClass(-1, [1])

    def test_hyperplane_powers_truncate(self):
        eta = ChowClass.hyperplane(2)
        assert eta**2 == ChowClass(2, [0, 0, 1])
        assert eta**3 == ChowClass(2, 0)

    def test_arithmetic(self):
        eta = ChowClass.hyperplane(2)
        square = (1 + eta) * (1 + eta)
        assert square == ChowClass(2, [1, 2, 1])
        assert square - 2 * eta == ChowClass(2, [1, 0, 1])
        assert (1 + eta) ** 2 == square

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(DomainError):
            ChowClass.one(2) + ChowClass.one(3)
        with pytest.raises(DomainError):
            ChowClass.one(2) * ChowClass.one(3)

    def test_coefficient_bounds(self):
        x = ChowClass(2, [5, 6, 7])
        assert x.coefficient(2) == 7
        assert x.coefficient(9) == 0
        with pytest.raises(DomainError):
            x.coefficient(-1)

    def test_integrate_reads_top_coefficient(self):
        eta = ChowClass.hyperplane(3)
        assert (eta**3).integrate() == 1
        assert ChowClass.one(3).integrate() == 0
        assert (2 + 5 * eta**3).integrate() == 5

    def test_inverse(self):
        eta = ChowClass.hyperplane(4)
        inv = (1 + eta).inverse()
        assert inv == ChowClass(4, [1, -1, 1, -1, 1])
        assert inv * (1 + eta) == ChowClass.one(4)

    def test_inverse_needs_unit_constant(self):
        eta = ChowClass.hyperplane(2)
        with pytest.raises(DomainError):
            (2 + eta).inverse()
        with pytest.raises(DomainError):
            (eta + eta**2).inverse()

    @given(small_coeffs, small_coeffs, small_coeffs)
    @settings(max_examples=60)
    def test_ring_laws(self, a, b, c):
        x, y, z = (ChowClass(3, v) for v in (a, b, c))
        assert (x + y) * z == x * z + y * z
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)

    @given(small_coeffs, small_coeffs)
    @settings(max_examples=60)
    def test_units_invert_exactly(self, tail, other):
        u = ChowClass(3, [-1] + tail)
        assert u * u.inverse() == ChowClass.one(3)

    def test_hash_consistency(self):
        assert hash(ChowClass(2, [1, 2])) == hash(ChowClass(2, [1, 2, 0]))


class TestBundleClass:
    def test_trivial_and_line(self):
        t = BundleClass.trivial(3, 2)
        assert t.rank == 2 and t.total == ChowClass.one(3)
        o5 = BundleClass.line(3, 5)
        assert o5.rank == 1 and o5.total == ChowClass(3, [1, 5])

    def test_validation(self):
        with pytest.raises(DomainError):
            BundleClass(-1, ChowClass.one(2))
        with pytest.raises(DomainError):
            BundleClass(1, ChowClass(2, [2, 1]))
        # A nonzero c_2 on a rank-1 bundle violates the rank bound.
        with pytest.raises(DomainError):
            BundleClass(1, ChowClass(2, [1, 1, 1]))

    def test_chern_accessor(self):
        e = BundleClass.line(2, 3)
        assert e.chern(0) == 1
        assert e.chern(1) == 3
        assert e.chern(2) == 0

    def test_direct_sum_is_whitney(self):
        a = BundleClass.line(3, 1)
        b = BundleClass.line(3, 2)
        s = direct_sum(a, b)
        assert s.rank == 2
        assert s.total == a.total * b.total

    def test_direct_sum_dimension_mismatch(self):
        with pytest.raises(DomainError):
            direct_sum(BundleClass.line(2, 1), BundleClass.line(3, 1))


class TestKernelBundle:
    def test_tautological_small_cases(self):
        t2 = tautological_sub(2)
        assert t2.rank == 1
        assert t2.total == ChowClass(1, [1, -1])
        t3 = tautological_sub(3)
        assert t3.rank == 2
        assert t3.total == ChowClass(2, [1, -1, 1])

    def test_tautological_point_case(self):
        t1 = tautological_sub(1)
        assert t1.rank == 0
        assert t1.total == ChowClass.one(0)

    def test_tautological_rejects_empty(self):
        with pytest.raises(DomainError):
            tautological_sub(0)

    def test_chern_vanishes_at_and_above_n(self):
        for n in (2, 3, 5):
            sub = tautological_sub(n)
            for j in range(n, n + 3):
                assert sub.chern(j) == 0

    @given(
        st.lists(st.integers(-3, 3), min_size=2, max_size=4),
        st.integers(-3, 3),
    )
    @settings(max_examples=60)
    def test_whitney_reconstruction(self, ks, k0):
        middle = lines(3, ks + [k0])
        quotient = BundleClass.line(3, k0)
        sub = kernel_bundle(middle, quotient)
        assert sub.rank == len(ks)
        assert sub.total * quotient.total == middle.total

    def test_impossible_kernel_rejected(self):
        # A line quotient of the trivial line bundle with a different
        # degree leaves a "kernel" whose classes violate the rank bound.
        with pytest.raises(DomainError):
            kernel_bundle(BundleClass.trivial(2, 1), BundleClass.line(2, 1))

    def test_rank_deficit_rejected(self):
        with pytest.raises(DomainError):
            kernel_bundle(BundleClass.line(2, 1), BundleClass.trivial(2, 2))


class TestTwist:
    def test_twisted_trivial_line(self):
        e = twist(BundleClass.trivial(3, 1), 5)
        assert e.rank == 1
        assert e.total == ChowClass(3, [1, 5])

    def test_first_chern_shift(self):
        e = lines(4, [2, -1, 3])
        for k in (-2, 0, 1, 4):
            assert twist(e, k).chern(1) == e.chern(1) + e.rank * k

    @given(st.lists(st.integers(-3, 3), min_size=1, max_size=3), st.integers(-4, 4))
    @settings(max_examples=60)
    def test_involution(self, ks, k):
        e = lines(3, ks)
        assert twist(twist(e, k), -k) == e

    @given(
        st.lists(st.integers(-2, 2), min_size=1, max_size=3),
        st.integers(-3, 3),
        st.integers(-3, 3),
    )
    @settings(max_examples=60)
    def test_composition_adds_degrees(self, ks, a, b):
        e = lines(3, ks)
        assert twist(twist(e, a), b) == twist(e, a + b)

    def test_twist_agrees_with_line_products(self):
        # Twisting a sum of lines is the sum of twisted lines.
        e = lines(3, [1, -2])
        got = twist(e, 3)
        want = lines(3, [4, 1])
        assert got == want


class TestFrobenius:
    def test_tautological_pullback(self):
        for p in (2, 3, 7):
            e = frobenius(tautological_sub(2), p)
            assert e.total == ChowClass(1, [1, -p])

    def test_trivial_fixed(self):
        t = BundleClass.trivial(3, 2)
        assert frobenius(t, 5) == t

    def test_composition_multiplies(self):
        e = lines(3, [1, -2, 3])
        assert frobenius(frobenius(e, 2), 3) == frobenius(e, 6)

    def test_rank_preserved(self):
        e = lines(2, [1, 1])
        assert frobenius(e, 3).rank == e.rank

    def test_small_characteristic_rejected(self):
        with pytest.raises(DomainError):
            frobenius(BundleClass.line(2, 1), 1)
        with pytest.raises(DomainError):
            frobenius(BundleClass.line(2, 1), 0)


class TestExcessIntegrals:
    def test_point_case(self):
        for p in (2, 3, 5, 7):
            assert check_excess_integral("I1", 1, p) == (1, 1)

    def test_twisted_line_case(self):
        for p in (2, 3, 5, 7):
            assert check_excess_integral("I2", 2, p) == (-p, -p)

    def test_projective_line_case(self):
        for p in (2, 3, 5, 7):
            assert check_excess_integral("I3", 1, p) == (1 - p, 1 - p)

    def test_full_sweep_matches_oracles(self):
        for p in (2, 3, 5, 7):
            for r in range(1, 9):
                computed, expected = check_excess_integral("I1", r, p)
                assert computed == expected == excess_i1_value(r, p)
                computed, expected = check_excess_integral("I2", r, p)
                assert computed == expected == excess_i2_value(r, p)
            for d in range(9):
                computed, expected = check_excess_integral("I3", d, p)
                assert computed == expected == excess_i3_value(d, p)

    def test_bad_inputs(self):
        with pytest.raises(DomainError):
            check_excess_integral("I9", 2, 3)
        with pytest.raises(DomainError):
            check_excess_integral("I1", 0, 3)
        with pytest.raises(DomainError):
            check_excess_integral("I3", -1, 3)
        with pytest.raises(DomainError):
            check_excess_integral("I1", 2, 1)


class TestBridgeIdentity:
    def test_vanishes_through_rank_eight(self):
        for r in range(9):
            assert check_bridge_identity(r) == LaurentPoly(0)

    def test_negative_rank_rejected(self):
        with pytest.raises(DomainError):
            check_bridge_identity(-1)
