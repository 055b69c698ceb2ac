"""
Tests for prefspace.core.claims and the claim catalog.

Verdicts are the checkers' findings; invariants are their own consistency
checks and must always pass.
"""
import pytest

from prefspace.core.catalog import claim_ids, claim_index, get_claim, list_claims
from prefspace.core.claims import (
    check_box_image,
    check_flattening,
    check_homotopy,
    check_lemma_fopen,
    check_lemma_opensets,
    check_pairwise_intersection,
    check_prop1,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    run_lemma_opensets,
)
from prefspace.core.errors import ScopeError, UsageError
from prefspace.core.final import final_topology
from prefspace.core.order import Family, WeakOrder
from prefspace.schemas.reports import Verdict

W = WeakOrder.parse


# ==============================================================================
# Final topology on P, P*, P^s
# ==============================================================================


class TestTrivialityOnP:
    """Strict orders form proper open sets, so P is not trivial."""

    def test_refuted_with_witness(self, params):
        report = check_theorem1(3, params)
        assert report.verdict is Verdict.REFUTED
        assert len(report.witness["open_set"]) == 1
        assert W(report.witness["open_set"][0]).is_strict

    def test_indifference_glues_everything(self, params):
        report = check_theorem1(3, params)
        assert report.subverdicts["indifference_in_every_closure"]
        assert report.subverdicts["scan"]["mode"] == "exhaustive"
        assert report.invariants_passed

    def test_sampled_scan_above_exhaustive_limit(self, params):
        assert check_theorem1(4, params).subverdicts["scan"]["mode"] == "sampled"

    def test_scope(self, params):
        with pytest.raises(ScopeError):
            check_theorem1(1, params)


class TestPStar:
    def test_n3(self, params):
        report = check_theorem2(3, params)
        assert report.verdict is Verdict.REFUTED
        assert report.subverdicts["basis"]["ok"] is False
        assert report.subverdicts["hausdorff"]["t2"] is False
        assert report.subverdicts["hausdorff"]["mechanism"]["in_closure"]
        assert report.subverdicts["connectivity"]["path_connected"]
        assert report.subverdicts["critical_instance"]["open"]
        assert not report.subverdicts["critical_instance"]["covered_by_basis"]
        assert report.invariants_passed

    def test_scope(self, params):
        with pytest.raises(ScopeError):
            check_theorem2(2, params)


class TestPStrict:
    @pytest.mark.parametrize("n,points", [(2, 2), (3, 6)])
    def test_discrete(self, params, n, points):
        report = check_theorem3(n, params)
        assert report.verdict is Verdict.CONFIRMED
        assert report.subverdicts["points"] == points
        assert report.subverdicts["components"] == points
        assert report.subverdicts["separation"] == {"t0": True, "t1": True, "t2": True}
        assert report.invariants_passed


class TestProp1:
    """Adding one non-strict order to P^s always breaks T1."""

    def test_n3(self, params):
        report = check_prop1(3, params)
        assert report.verdict is Verdict.CONFIRMED
        assert report.subverdicts["non_strict_checked"] == 7
        assert all(e["fails_t1"] for e in report.subverdicts["evidence"])
        assert report.invariants_passed

    def test_reached_order_refines(self, params):
        report = check_prop1(2, params)
        (entry,) = report.subverdicts["evidence"]
        assert entry["preference"] == "0~1"
        assert W(entry["strict_refinement_in_closure"]).is_strict


class TestOpenSets:
    def test_exhaustive_n2(self, params):
        report = run_lemma_opensets(2, params)
        assert report.verdict is Verdict.CONFIRMED
        assert report.oracle.disagreements == 0
        assert report.subverdicts["P"] == {"tested": 8, "open": 5, "mode": "exhaustive"}

    def test_single_set(self, params):
        space = final_topology(Family.P_STAR, 3)
        report = check_lemma_opensets([W("0>1~2"), W("0>1>2"), W("0>2>1")], space, params)
        assert report.verdict is Verdict.CONFIRMED
        assert report.subverdicts["open"]

    def test_single_non_open_set(self, params):
        space = final_topology(Family.P_STAR, 3)
        report = check_lemma_opensets([W("0>1~2")], space, params)
        assert report.verdict is Verdict.CONFIRMED
        assert report.subverdicts == {"open": False, "agree": True}


class TestOpenMap:
    def test_lemma_fopen(self, params):
        report = check_lemma_fopen(3, params)
        assert report.verdict is Verdict.CONFIRMED
        assert report.subverdicts["U*"]["group_actions"] == params.random_subsets
        assert report.invariants_passed

    def test_box_image_invariants(self, params):
        report = check_box_image(3, params)
        assert report.subverdicts["boxes"] == params.random_subsets
        assert report.invariants["images_realized_exactly"]
        assert report.invariants["sweep_matches_slack_program"]
        assert report.invariants_passed

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_pairwise_intersection(self, params, n):
        report = check_pairwise_intersection(n, params)
        assert report.verdict is Verdict.CONFIRMED
        assert report.subverdicts["checked"] > 0


# ==============================================================================
# Paths and sequences
# ==============================================================================


class TestHomotopy:
    def test_two_alternatives_split(self, params):
        report = check_homotopy(2, params)
        assert report.verdict is Verdict.CONFIRMED
        assert report.subverdicts["two_alternatives"] == {"components": 2, "line_hits_constant": True}

    def test_three_step_paths(self, params):
        report = check_homotopy(3, params)
        assert report.verdict is Verdict.CONFIRMED
        assert report.subverdicts["injective_pairs"] > 0


class TestFlattening:
    @pytest.mark.parametrize("n", [2, 3])
    def test_limits_in_closure(self, params, n):
        report = check_flattening(n, params)
        assert report.verdict is Verdict.CONFIRMED
        assert report.invariants_passed

    def test_counts_n3(self, params):
        counts = check_flattening(3, params).subverdicts
        assert counts["flatten_global"] == 12
        assert counts["flatten_middle"] == 6
        assert counts["prop3"] == 12


# ==============================================================================
# Catalog
# ==============================================================================


class TestCatalog:
    def test_ids_unique(self):
        ids = claim_ids()
        assert len(ids) == len(set(ids)) == 14

    def test_index_follows_order(self):
        assert claim_index("theorem1") == 0
        assert claim_index("pairwise_intersection") == 13

    def test_unknown_claim(self):
        with pytest.raises(UsageError):
            get_claim("theorem99")

    def test_module_filter(self):
        entries = list_claims("exogenous-topology")
        assert {e.claim for e in entries} == {"prop3_finite", "theorem4_sweep", "lemma_locally_strict"}

    def test_run_normalizes_outcome(self, params):
        report, sweep = get_claim("theorem3").run(2, params)
        assert report.claim == "theorem3"
        assert sweep is None
        report, sweep = get_claim("theorem4_sweep").run(1, params)
        assert len(sweep) == 1
