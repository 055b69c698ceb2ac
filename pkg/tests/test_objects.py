"""
Tests for the wire schemas of the core value types.
"""
from fractions import Fraction

import pytest
from pydantic import ValidationError

from prefspace.core.exogenous import contour_topology
from prefspace.core.final import Box
from prefspace.core.order import UtilityVector, WeakOrder, represent
from prefspace.core.topology import SpecPreorder
from prefspace.schemas.objects import (
    BoxSchema,
    FiniteTopologySchema,
    SpecPreorderSchema,
    UtilityVectorSchema,
    WeakOrderSchema,
)


def test_weak_order_classes_best_first():
    body = WeakOrderSchema.from_core(WeakOrder.parse("2>0~1")).model_dump()
    assert body == {"n": 3, "classes": [[2], [0, 1]]}
    assert WeakOrderSchema(**body).to_core() == WeakOrder.parse("2>0~1")


def test_utility_vector_as_floats():
    schema = UtilityVectorSchema.from_core(UtilityVector((Fraction(1, 2), 3)))
    assert schema.values == [0.5, 3.0]
    assert represent(schema.to_core()) == WeakOrder.parse("1>0")


def test_topology_opens():
    topology = contour_topology(WeakOrder.parse("0~1>2"))
    schema = FiniteTopologySchema.from_core(topology)
    assert schema.opens == [[], [2], [0, 1], [0, 1, 2]]
    assert schema.to_core() == topology


def test_preorder_pairs():
    preorder = SpecPreorder.from_pairs(3, [(0, 1), (1, 2)])
    schema = SpecPreorderSchema.from_core(preorder)
    assert (0, 2) in schema.leq
    assert schema.to_core() == preorder


class TestBoxSchema:
    def test_exact_endpoints(self):
        box = Box(((Fraction(1, 3), Fraction(3, 2)), None))
        schema = BoxSchema.from_core(box)
        assert schema.intervals == [("1/3", "3/2"), None]
        assert schema.to_core() == box

    def test_bad_endpoint(self):
        with pytest.raises(ValidationError):
            BoxSchema(intervals=[("one", "2")])
