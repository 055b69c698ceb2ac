"""
Tests for prefspace.core.exogenous: contour topologies, continuity, local
strictness and the finite-X results.
"""
import pytest

from prefspace.core.errors import DimensionError
from prefspace.core.exogenous import (
    CONTROL_OPENS,
    CONTROL_ORDER,
    check_lemma_locally_strict,
    check_prop3_finite,
    check_theorem4,
    contour_topology,
    convergence_gloss_holds,
    is_continuous_pref,
    is_isolated,
    is_locally_strict,
    is_locally_strict_exhaustive,
    minimal_neighborhood,
    neighborhood_from_intervals,
    open_class_subset,
    pci_membership,
    pcls_family,
    sweep_topologies,
    theorem4_sweep,
)
from prefspace.core.order import WeakOrder, enumerate_preferences
from prefspace.core.topology import enumerate_topologies, generate_from_subbasis
from prefspace.schemas.reports import Verdict

W = WeakOrder.parse


def discrete(n: int):
    return generate_from_subbasis(n, [[i] for i in range(n)])


class TestContourTopology:
    def test_control_order(self):
        assert contour_topology(W(CONTROL_ORDER)).sorted_opens() == CONTROL_OPENS

    def test_indifference_is_indiscrete(self):
        assert contour_topology(WeakOrder.total_indifference(3)).sorted_opens() == [[], [0, 1, 2]]

    def test_preference_continuous_in_own_topology(self):
        for p in enumerate_preferences(3):
            assert is_continuous_pref(p, contour_topology(p))

    def test_size_mismatch(self):
        with pytest.raises(DimensionError):
            is_continuous_pref(W("0>1"), discrete(3))


class TestLocalStrictness:
    def test_top_class_never_locally_strict(self):
        p = W("0>1>2")
        assert not is_locally_strict(p, contour_topology(p))

    def test_off_diagonal_in_discrete_topology(self):
        assert is_locally_strict(W("0>1>2"), discrete(3), include_diagonal=False)
        assert not is_locally_strict(W("0~1>2"), discrete(3), include_diagonal=False)

    def test_minimal_neighbourhoods_suffice(self):
        for p in enumerate_preferences(3):
            for t_x in enumerate_topologies(3):
                assert is_locally_strict(p, t_x, False) == is_locally_strict_exhaustive(p, t_x, False)

    def test_pcls_with_discrete_topology(self):
        assert set(pcls_family(2, discrete(2), include_diagonal=False)) == {W("0>1"), W("1>0")}
        assert pcls_family(2, discrete(2)) == []


class TestIndifferenceClasses:
    """P^ci is empty on a finite set."""

    def test_no_member(self):
        assert not any(pci_membership(p) for p in enumerate_preferences(4))

    def test_open_class_subset(self):
        assert open_class_subset(W(CONTROL_ORDER)) == (0, 1)

    def test_isolation(self):
        assert is_isolated(1, W("0>1>2"))
        assert not is_isolated(0, W("0>1>2"))

    def test_neighbourhoods_from_intervals(self):
        for p in enumerate_preferences(4):
            for x in range(4):
                assert minimal_neighborhood(x, p) == neighborhood_from_intervals(x, p)

    def test_convergence_gloss(self):
        assert all(convergence_gloss_holds(p) for p in enumerate_preferences(3))


class TestClaimCheckers:
    def test_prop3_finite(self, params):
        report = check_prop3_finite(3, params)
        assert report.verdict is Verdict.CONFIRMED
        assert report.subverdicts["pci_size"] == 0
        assert report.invariants["control_opens_reproduced"]

    def test_lemma_locally_strict(self, params):
        report = check_lemma_locally_strict(3, params)
        assert report.verdict is Verdict.CONFIRMED
        assert report.subverdicts["vacuous"]
        assert report.subverdicts["converse_holds"]
        assert report.invariants_passed

    def test_theorem4_single_topology(self, params):
        report = check_theorem4(2, discrete(2), params, include_diagonal=False)
        assert report.verdict is Verdict.CONFIRMED
        assert report.subverdicts["pcls_size"] == 2
        assert report.invariants_passed

    def test_theorem4_sweep(self, params):
        report, entries = theorem4_sweep(2, params)
        assert len(entries) == 4
        assert report.verdict is Verdict.CONFIRMED
        assert report.subverdicts["nonvacuous"] == 0
        assert report.invariants_passed

    def test_sweep_sample_at_four(self, params):
        chosen = sweep_topologies(4, params)
        assert len(chosen) == params.sweep_sample
        assert chosen == sweep_topologies(4, params)
