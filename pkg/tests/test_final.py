"""
Tests for prefspace.core.final: the final topology on P, P* and P^s, the
B-sets and images of boxes under the representation map.
"""
from fractions import Fraction

import numpy as np
import pytest

from prefspace.core.errors import DomainError, PreconditionError
from prefspace.core.final import (
    Box,
    basis_element,
    basis_family,
    final_topology,
    image_of_box,
    lemma_box_prediction,
    pairwise_intersection_identity,
    pattern_feasible,
    pattern_feasible_lp,
    realize_in_box,
    refinement_closed,
)
from prefspace.core.order import Ambient, Family, WeakOrder, enumerate_preferences, represent

W = WeakOrder.parse


# ==============================================================================
# PrefSpace
# ==============================================================================


class TestFinalTopology:
    """Open sets are exactly the refinement-closed subsets of the family."""

    @pytest.mark.parametrize("family,size", [(Family.P, 13), (Family.P_STAR, 12), (Family.P_STRICT, 6)])
    def test_sizes(self, family, size):
        assert final_topology(family, 3).size == size

    def test_accepts_family_names(self):
        assert final_topology("P*", 3) is final_topology(Family.P_STAR, 3)

    def test_strict_singleton_open_in_p(self):
        space = final_topology(Family.P, 3)
        assert space.is_open([W("0>1>2")])
        assert not space.is_open([W("0>1~2")])

    def test_indifference_in_every_closure(self):
        space = final_topology(Family.P, 3)
        bottom = WeakOrder.total_indifference(3)
        for p in space.family:
            assert bottom in space.closure([p])

    def test_closure_of_linear_order(self):
        closure = final_topology(Family.P, 3).closure([W("0>1>2")])
        assert set(closure) == {W("0>1>2"), W("0>1~2"), W("0~1>2"), WeakOrder.total_indifference(3)}

    def test_neighbourhood(self):
        space = final_topology(Family.P_STAR, 3)
        assert set(space.neighbourhood(W("0>1~2"))) == {W("0>1~2"), W("0>1>2"), W("0>2>1")}

    def test_strict_family_is_discrete(self):
        space = final_topology(Family.P_STRICT, 3)
        assert all(space.preorder.up[i] == 1 << i for i in range(space.size))

    def test_foreign_member(self):
        with pytest.raises(DomainError):
            final_topology(Family.P_STAR, 3).is_open([WeakOrder.total_indifference(3)])

    def test_custom_family(self):
        space = final_topology([W("0~1"), W("0>1")], 2)
        assert space.size == 2
        assert space.is_open([W("0>1")])

    def test_restrict(self):
        space = final_topology(Family.P, 3)
        sub = space.restrict([W("0>1>2"), W("0~1>2")])
        assert sub.is_open([W("0>1>2")])
        assert not sub.is_open([W("0~1>2")])

    def test_refinement_closed_matches_preorder(self):
        space = final_topology(Family.P_STAR, 3)
        for mask in range(0, 1 << space.size, 97):
            orders = space.orders(mask)
            assert refinement_closed(orders, Family.P_STAR) == space.preorder.is_open(mask)


# ==============================================================================
# B-sets
# ==============================================================================


class TestBasisElements:
    def test_members(self):
        space = final_topology(Family.P_STAR, 3)
        element = basis_element(W("0>1>2"), (0, 1), space)
        orders = element.orders(space)
        assert len(orders) == 5
        assert all(q.strict(0, 1) for q in orders)

    def test_empty_subset_is_whole_space(self):
        space = final_topology(Family.P_STAR, 3)
        assert basis_element(W("0>1~2"), (), space).members == (1 << space.size) - 1

    def test_indifferent_subset_rejected(self):
        with pytest.raises(PreconditionError):
            basis_element(W("0>1~2"), (1, 2), final_topology(Family.P_STAR, 3))

    def test_elements_are_open(self):
        space = final_topology(Family.P_STAR, 3)
        assert all(space.preorder.is_open(e.members) for e in basis_family(space))

    @pytest.mark.parametrize("family", [Family.P_STAR, Family.P_STRICT])
    def test_pairwise_intersection(self, family):
        space = final_topology(family, 4)
        assert pairwise_intersection_identity(W("3>1>0>2"), (0, 1, 2, 3), space)


# ==============================================================================
# Boxes
# ==============================================================================


class TestBoxes:
    """Images of products of open intervals under F."""

    def test_empty_interval_rejected(self):
        with pytest.raises(DomainError):
            Box(((Fraction(1), Fraction(1)),))

    def test_unconstrained_image(self):
        assert image_of_box(Box.unconstrained(3), 3) == frozenset(enumerate_preferences(3, Family.P_STAR))

    def test_disjoint_intervals_force_one_order(self):
        box = Box(((0, 1), (2, 3), (4, 5)))
        assert image_of_box(box, 3) == {W("2>1>0")}
        assert lemma_box_prediction(box, 3) == {W("2>1>0")}

    def test_overlapping_intervals_give_everything(self):
        box = Box(((0, 2), (1, 3), None))
        assert image_of_box(box, 3) == frozenset(enumerate_preferences(3, Family.P_STAR))
        assert lemma_box_prediction(box, 3) == image_of_box(box, 3)

    def test_one_interval_above_two_equal_ones(self):
        box = Box(((2, 3), (0, 1), (0, 1)))
        image = image_of_box(box, 3)
        assert image == {W("0>1>2"), W("0>2>1"), W("0>1~2")}
        # the greedy chain picks 1 below 0 and leaves 2 free, so it over-predicts
        prediction = lemma_box_prediction(box, 3)
        assert image < prediction
        assert prediction == {p for p in enumerate_preferences(3, Family.P_STAR) if p.strict(0, 1)}

    def test_identical_intervals_in_u(self):
        box = Box(((0, 1), (0, 1)))
        everything = frozenset(enumerate_preferences(2, Family.P))
        assert image_of_box(box, 2, Ambient.U) == everything
        assert lemma_box_prediction(box, 2, Ambient.U) == everything

    def test_realize_in_box(self):
        box = Box(((0, 2), (1, 3), None))
        for p in image_of_box(box, 3):
            u = realize_in_box(p, box)
            assert box.contains(u)
            assert represent(u) == p

    def test_infeasible_pattern(self):
        box = Box(((0, 1), (2, 3), (4, 5)))
        assert not pattern_feasible(W("0>1>2"), box)
        assert realize_in_box(W("0>1>2"), box) is None

    def test_slack_program_agrees_with_sweep(self):
        rng = np.random.default_rng(11)
        for _ in range(15):
            box = Box.random(3, rng)
            for p in enumerate_preferences(3, Family.P_STAR):
                assert pattern_feasible_lp(p, box) == pattern_feasible(p, box)
