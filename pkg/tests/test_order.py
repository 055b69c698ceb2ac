"""
Tests for prefspace.core.order.

Covers weak orders, utility vectors, the representation map, monotone maps
and enumeration of P, P* and P^s.
"""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from prefspace.core.errors import DimensionError, DomainError, PreconditionError, SizeError
from prefspace.core.order import (
    Ambient,
    Family,
    MonotoneMap,
    UtilityVector,
    WeakOrder,
    apply_monotone,
    enumerate_preferences,
    normalize_bounded,
    opposite,
    realize,
    refinements,
    refines,
    represent,
    require_strict_on,
    tied_pairs,
)
from tests.conftest import vec


# ==============================================================================
# WeakOrder
# ==============================================================================


class TestWeakOrder:
    """Construction, parsing and relations."""

    def test_parse_and_label(self):
        """label() is the inverse of parse()."""
        p = WeakOrder.parse("2>0~1")
        assert p.classes == ((2,), (0, 1))
        assert p.label() == "2>0~1"
        assert str(p) == "2>0~1"

    def test_relations(self):
        p = WeakOrder.parse("0>1~2>3")
        assert p.strict(0, 1)
        assert not p.strict(1, 2)
        assert p.weak(1, 2) and p.weak(2, 1)
        assert p.indifferent(1, 2)
        assert p.upper(1) == {0}
        assert p.lower(1) == {3}
        assert p.interval(0, 3) == {1, 2}
        assert p.interval(1, 3) == frozenset()

    def test_ranks_round_trip(self):
        p = WeakOrder.parse("1>0~2")
        assert WeakOrder.from_ranks(p.ranks) == p

    def test_extremes(self):
        p = WeakOrder.parse("0~1>2")
        assert p.is_maximal(0) and p.is_maximal(1)
        assert p.is_minimal(2)
        assert not p.is_minimal(0)

    def test_family_membership(self):
        assert WeakOrder.total_indifference(3).member_of(Family.P)
        assert not WeakOrder.total_indifference(3).member_of(Family.P_STAR)
        assert WeakOrder.parse("0~1>2").member_of(Family.P_STAR)
        assert not WeakOrder.parse("0~1>2").member_of(Family.P_STRICT)
        assert WeakOrder.linear([2, 0, 1]).member_of(Family.P_STRICT)

    def test_strict_pairs(self):
        assert set(WeakOrder.parse("0>1~2").strict_pairs()) == {(0, 1), (0, 2)}

    def test_overlapping_classes_rejected(self):
        with pytest.raises(DomainError):
            WeakOrder(3, ((0,), (0, 1, 2)))

    def test_missing_alternative_rejected(self):
        with pytest.raises(DomainError):
            WeakOrder(3, ((0,), (1,)))

    def test_empty_class_rejected(self):
        with pytest.raises(DomainError):
            WeakOrder(2, ((0, 1), ()))

    def test_opposite(self):
        assert opposite(WeakOrder.parse("0>1~2")) == WeakOrder.parse("1~2>0")

    def test_tied_pairs(self):
        assert tied_pairs(WeakOrder.parse("0~1~2>3")) == [(0, 1), (0, 2), (1, 2)]


# ==============================================================================
# Utility vectors and the representation map
# ==============================================================================


class TestRepresent:
    """F(u): ties iff equal values, better iff larger value."""

    def test_represent(self):
        assert represent(vec(3, 1, 1)) == WeakOrder.parse("0>1~2")
        assert represent(vec(0, 0, 0)).is_total_indifference

    def test_realize_represents(self):
        for p in enumerate_preferences(3, Family.P):
            assert represent(realize(p)) == p

    def test_realize_gap(self):
        u = realize(WeakOrder.parse("1>0"), gap=Fraction(1, 4))
        assert u.values == (0, Fraction(1, 4))

    def test_ambient_membership(self):
        assert vec(1, 1).in_ambient(Ambient.U)
        assert not vec(1, 1).in_ambient(Ambient.U_STAR)
        assert vec(1, 1, 2).in_ambient(Ambient.U_STAR)
        assert not vec(1, 1, 2).in_ambient(Ambient.U_STRICT)

    def test_non_finite_rejected(self):
        with pytest.raises(DomainError):
            vec(1.0, float("nan"))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            vec(1, 2) + vec(1, 2, 3)

    def test_normalize_bounded_keeps_order(self):
        u = vec(-5, 0, 3, 100)
        bounded = normalize_bounded(u)
        assert represent(bounded) == represent(u)
        assert all(abs(v) < np.pi / 2 for v in bounded)


class TestMonotoneMaps:
    """The group acting on U* leaves F invariant."""

    def test_table_must_increase(self):
        with pytest.raises(DomainError):
            MonotoneMap(((0, 5), (1, 4)))

    def test_uncovered_value(self):
        with pytest.raises(DomainError):
            MonotoneMap.identity([0, 1])(2)

    def test_inverse(self):
        u = vec(4, 1, 4, 2)
        f = MonotoneMap.random(u.values, np.random.default_rng(3))
        assert apply_monotone(f.inverse(), apply_monotone(f, u)) == u

    @given(
        st.lists(st.integers(min_value=-20, max_value=20), min_size=1, max_size=6),
        st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_action_preserves_preference(self, values, seed):
        """F(f ∘ u) = F(u) for every strictly increasing f."""
        u = UtilityVector(tuple(values))
        f = MonotoneMap.random(u.values, np.random.default_rng(seed))
        assert represent(apply_monotone(f, u)) == represent(u)


# ==============================================================================
# Enumeration and refinement
# ==============================================================================


class TestEnumeration:
    """Counts are ordered Bell numbers (P), one fewer (P*) and n! (P^s)."""

    @pytest.mark.parametrize("n,total", [(1, 1), (2, 3), (3, 13), (4, 75), (5, 541)])
    def test_ordered_bell(self, n, total):
        assert len(enumerate_preferences(n, Family.P)) == total

    @pytest.mark.parametrize("n,total", [(2, 2), (3, 12), (4, 74)])
    def test_p_star(self, n, total):
        assert len(enumerate_preferences(n, Family.P_STAR)) == total

    @pytest.mark.parametrize("n,total", [(1, 1), (2, 2), (3, 6), (4, 24)])
    def test_p_strict(self, n, total):
        assert len(enumerate_preferences(n, Family.P_STRICT)) == total

    def test_duplicate_free(self):
        orders = enumerate_preferences(4, Family.P)
        assert len(set(orders)) == len(orders)

    def test_cap(self):
        with pytest.raises(SizeError):
            enumerate_preferences(4, Family.P, cap=3)

    def test_zero_alternatives(self):
        with pytest.raises(DomainError):
            enumerate_preferences(0)


class TestRefinement:
    def test_linear_refines_coarser(self):
        assert refines(WeakOrder.parse("0>1>2"), WeakOrder.parse("0>1~2"))
        assert not refines(WeakOrder.parse("0>1~2"), WeakOrder.parse("0>1>2"))

    def test_everything_refines_indifference(self):
        bottom = WeakOrder.total_indifference(3)
        assert all(refines(p, bottom) for p in enumerate_preferences(3))

    def test_refinements_of_indifference(self):
        assert len(refinements(WeakOrder.total_indifference(3))) == 13

    def test_refinements_refine(self):
        p = WeakOrder.parse("0~1>2~3")
        found = refinements(p)
        assert len(found) == 9
        assert p in found
        assert all(refines(q, p) for q in found)

    def test_require_strict_on(self):
        p = WeakOrder.parse("0>1~2")
        assert require_strict_on(p, [1, 0]) == (0, 1)
        with pytest.raises(PreconditionError):
            require_strict_on(p, [1, 2])
