"""
Tests for prefspace.core.paths: convergent utility sequences and paths
through the nonconstant vectors.
"""
from fractions import Fraction

import pytest

from prefspace.core.errors import DomainError, PreconditionError, ScopeError
from prefspace.core.order import WeakOrder, represent
from prefspace.core.paths import (
    flatten_global,
    flatten_middle,
    isolated_case,
    path_rows,
    prop1_sequence,
    prop1_sequences,
    prop3_case_sequence,
    straight_line,
    strict_crossing,
    three_step_path,
    trace_rows,
    verify_sequence,
)
from tests.conftest import vec

W = WeakOrder.parse


# ==============================================================================
# Sequences
# ==============================================================================


class TestFlattenGlobal:
    def test_converges_to_indifference(self):
        seq = flatten_global(vec(3, 1, 2))
        report = verify_sequence(seq, tolerance=1e-2, depth=10)
        assert report.passed
        assert seq.promised_limit.is_total_indifference

    def test_order_constant_along_sequence(self):
        seq = flatten_global(vec(3, 1, 1))
        assert all(represent(seq(k)) == W("0>1~2") for k in (1, 2, 7, 100))

    def test_index_starts_at_one(self):
        with pytest.raises(PreconditionError):
            flatten_global(vec(1, 2))(0)


class TestFlattenMiddle:
    def test_pulls_middle_onto_lower_end(self):
        seq = flatten_middle(vec(4, 3, 2, 1), 0, 3)
        assert seq.declared_limit.values == (4, 1, 1, 1)
        assert seq.promised_limit == W("0>1~2~3")
        assert verify_sequence(seq, tolerance=1e-2, depth=10).passed

    def test_needs_strict_pair(self):
        with pytest.raises(PreconditionError):
            flatten_middle(vec(1, 1, 0), 0, 1)

    def test_needs_middle(self):
        with pytest.raises(PreconditionError):
            flatten_middle(vec(3, 2, 1), 0, 1)

    def test_boundary_ties_flagged(self):
        seq = flatten_middle(vec(4, 4, 3, 1), 0, 3)
        assert "boundary_ties" in seq.flags


class TestProp1Sequence:
    """Splitting a tie converges back to the tied preference."""

    def test_split(self):
        seq = prop1_sequence(vec(1, 1, 0), 0, 1)
        assert seq(1).values == (-1, 3, -2)
        assert seq.promised_order == W("1>0>2")
        assert seq.promised_limit == W("0~1>2")
        assert verify_sequence(seq, tolerance=1e-2, depth=10).passed

    def test_needs_tie(self):
        with pytest.raises(PreconditionError):
            prop1_sequence(vec(2, 1, 0), 0, 1)

    @pytest.mark.parametrize("y", [9, -2])
    def test_alternative_outside_ground_set(self, y):
        with pytest.raises(DomainError):
            prop1_sequence(vec(1, 1, 0), 0, y)

    def test_one_sequence_per_tied_pair(self):
        assert len(prop1_sequences(vec(1, 1, 1))) == 3

    def test_wrong_limit_fails(self):
        seq = prop1_sequence(vec(1, 1, 0), 0, 1).with_limit(vec(5, 5, 5))
        report = verify_sequence(seq, tolerance=1e-2, depth=10)
        assert not report.converged
        assert not report.passed


class TestProp3Sequence:
    def test_lower_case(self):
        seq = prop3_case_sequence(vec(3, 2, 1), 1, "lower")
        assert seq.declared_limit.values == (3, 2, 2)
        assert verify_sequence(seq, tolerance=1e-2, depth=10).passed

    def test_upper_case(self):
        seq = prop3_case_sequence(vec(3, 2, 1), 1, "upper")
        assert seq.promised_limit == W("0~1>2")

    def test_extreme_alternative(self):
        with pytest.raises(PreconditionError):
            prop3_case_sequence(vec(3, 2, 1), 0, "lower")

    def test_alternative_outside_ground_set(self):
        with pytest.raises(DomainError):
            prop3_case_sequence(vec(3, 2, 1), 3, "lower")
        with pytest.raises(DomainError):
            isolated_case(-1, W("0>1>2"))

    def test_unknown_case(self):
        with pytest.raises(PreconditionError):
            prop3_case_sequence(vec(3, 2, 1), 1, "sideways")

    def test_isolated(self):
        assert isolated_case(1, W("0>1>2")) == "isolated"
        with pytest.raises(PreconditionError):
            isolated_case(0, W("0>1>2"))


class TestVerification:
    def test_non_positive_tolerance(self):
        with pytest.raises(PreconditionError):
            verify_sequence(flatten_global(vec(1, 2)), tolerance=0)

    def test_trace_rows(self):
        report = verify_sequence(prop1_sequence(vec(1, 1, 0), 0, 1), tolerance=1e-2, depth=3)
        rows = trace_rows(report)
        assert rows[0] == ["n", "u0", "u1", "u2", "weak_order"]
        assert [r[0] for r in rows[1:]] == ["1", "2", "4", "8", "inf"]
        assert rows[-1][-1] == "0~1>2"


# ==============================================================================
# Paths
# ==============================================================================


class TestThreeStepPath:
    """Every point of the path is nonconstant."""

    def test_endpoints_and_waypoints(self):
        u, v = vec(0, 1, 2), vec(5, 5, 1)
        path = three_step_path(u, v)
        assert path(0) == u
        assert path(1) == v
        assert path(Fraction(1, 3)) == path.waypoints[1]
        assert path(Fraction(2, 3)) == path.waypoints[2]

    def test_nonconstant_everywhere(self):
        path = three_step_path(vec(0, 1, 2, 2), vec(3, 3, 3, 0))
        assert all(not path(Fraction(k, 300)).is_constant for k in range(301))

    def test_equal_endpoints_give_constant_path(self):
        path = three_step_path(vec(1, 2, 3), vec(1, 2, 3))
        assert path.anchors is None
        assert path(Fraction(1, 2)) == vec(1, 2, 3)

    def test_needs_three_alternatives(self):
        with pytest.raises(ScopeError):
            three_step_path(vec(0, 1), vec(1, 0))

    def test_constant_endpoint(self):
        with pytest.raises(PreconditionError):
            three_step_path(vec(1, 1, 1), vec(0, 1, 2))

    def test_parameter_range(self):
        with pytest.raises(PreconditionError):
            three_step_path(vec(0, 1, 2), vec(2, 1, 0))(2)

    def test_path_rows(self):
        rows = path_rows(three_step_path(vec(0, 1, 2), vec(2, 1, 0)), samples=5)
        assert len(rows) == 6
        assert rows[1][0] == "0"
        assert rows[-1][0] == "1"


class TestStrictCrossing:
    def test_reversal_crosses(self):
        crossing = strict_crossing(straight_line(vec(0, 1, 2), vec(2, 1, 0)))
        assert crossing is not None
        x, y, before, after = crossing
        assert (x, y) in {(0, 1), (0, 2), (1, 2)}
        assert before < after

    def test_same_order_never_crosses(self):
        assert strict_crossing(straight_line(vec(0, 1, 2), vec(0, 5, 9))) is None

    def test_two_alternatives_hit_constant(self):
        line = straight_line(vec(1, 0), vec(0, 1))
        assert line(Fraction(1, 2)).is_constant
