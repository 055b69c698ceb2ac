"""
Tests for prefspace.core.oracle: numeric openness probes cross-checked
against the refinement criterion.
"""
import pytest

from prefspace.core.errors import DomainError, ScopeError
from prefspace.core.oracle import (
    REACHABLE_CACHE,
    CheckParams,
    _reachable,
    openness_oracle_numeric,
    probe_count,
    reaches,
    validate_open,
    validate_witness,
)
from prefspace.core.order import Ambient, WeakOrder, refines

W = WeakOrder.parse
FAST = {"samples": 4, "epsilon_schedule": (0.1, 0.01), "seed": 3}


class TestOpennessOracle:
    def test_strict_singleton_open_in_u(self):
        verdict = openness_oracle_numeric([W("0>1>2")], Ambient.U, 3, **FAST)
        assert verdict.open
        assert verdict.agrees
        assert verdict.witness is None

    def test_tied_singleton_not_open(self):
        verdict = openness_oracle_numeric([W("0>1~2")], Ambient.U_STAR, 3, **FAST)
        assert not verdict.numeric_open
        assert not verdict.criterion_open
        assert verdict.agrees
        assert refines(verdict.witness.reached, W("0>1~2"))
        assert verdict.witness.reached != W("0>1~2")

    def test_neighbourhood_is_open(self):
        orders = [W("0>1~2"), W("0>1>2"), W("0>2>1")]
        assert validate_open(orders, Ambient.U_STAR, 3, **FAST)
        assert validate_witness([W("0>1~2")], Ambient.U_STAR, 3, **FAST)

    def test_evidence(self):
        verdict = openness_oracle_numeric([W("0>1")], Ambient.U_STRICT, 2, **FAST)
        assert verdict.evidence["ambient"] == "U^s"
        assert verdict.probes == probe_count(2, 4, (0.1, 0.01))

    def test_u_star_needs_two_alternatives(self):
        with pytest.raises(ScopeError):
            openness_oracle_numeric([], Ambient.U_STAR, 1, **FAST)

    def test_member_outside_family(self):
        with pytest.raises(DomainError):
            openness_oracle_numeric([WeakOrder.total_indifference(3)], Ambient.U_STAR, 3, **FAST)

    @pytest.mark.parametrize("schedule", [(), (0.1, 0.1), (0.01, 0.1), (0.1, -0.01)])
    def test_bad_schedule(self, schedule):
        with pytest.raises(DomainError):
            openness_oracle_numeric([W("0>1")], Ambient.U, 2, samples=4, epsilon_schedule=schedule)

    def test_no_samples(self):
        with pytest.raises(DomainError):
            openness_oracle_numeric([W("0>1")], Ambient.U, 2, samples=0, epsilon_schedule=(0.1,))


class TestReaches:
    """Small perturbations break ties and never create them."""

    def test_coarse_reaches_refinement(self):
        probe = reaches(W("0>1~2"), W("0>1>2"), Ambient.U_STAR, **FAST)
        assert probe is not None
        assert probe.as_witness()["reached"] == "0>1>2"

    def test_fine_never_reaches_coarse(self):
        assert reaches(W("0>1>2"), W("0>1~2"), Ambient.U_STAR, **FAST) is None

    def test_ambient_filters_probes(self):
        assert reaches(W("0~1"), W("0~1"), Ambient.U_STRICT, **FAST) is None

    def test_reachability_cache_is_bounded(self):
        reaches(W("0~1"), W("1>0"), Ambient.U, **FAST)
        info = _reachable.cache_info()
        assert info.maxsize == REACHABLE_CACHE
        assert info.currsize <= REACHABLE_CACHE


class TestCheckParams:
    def test_rng_is_deterministic(self):
        params = CheckParams(seed=5, claim_index=2)
        assert params.rng(3).integers(1 << 30) == params.rng(3).integers(1 << 30)

    def test_streams_differ_by_claim(self):
        a = CheckParams(seed=5, claim_index=1).rng(3).integers(1 << 30)
        b = CheckParams(seed=5, claim_index=2).rng(3).integers(1 << 30)
        assert a != b

    def test_oracle_kwargs(self):
        params = CheckParams(seed=9, samples=3, epsilons=(0.5,))
        assert params.oracle_kwargs == {"samples": 3, "epsilon_schedule": (0.5,), "seed": 9}
