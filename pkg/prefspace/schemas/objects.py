"""
prefspace/schemas/objects.py — Pydantic v2 wire shapes for the core value types.
"""
from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from prefspace.core.final import Box
from prefspace.core.order import UtilityVector, WeakOrder
from prefspace.core.topology import FiniteTopology, SpecPreorder, mask_of


class WeakOrderSchema(BaseModel):
    """Best class first."""
    n: int = Field(..., ge=1)
    classes: List[List[int]]

    @classmethod
    def from_core(cls, p: WeakOrder) -> "WeakOrderSchema":
        return cls(n=p.n, classes=[list(c) for c in p.classes])

    def to_core(self) -> WeakOrder:
        return WeakOrder(self.n, tuple(tuple(c) for c in self.classes))


class UtilityVectorSchema(BaseModel):
    values: List[float] = Field(..., min_length=1)

    @classmethod
    def from_core(cls, u: UtilityVector) -> "UtilityVectorSchema":
        return cls(values=list(u.as_floats()))

    def to_core(self) -> UtilityVector:
        return UtilityVector(tuple(self.values))


class FiniteTopologySchema(BaseModel):
    n: int = Field(..., ge=1)
    opens: List[List[int]]

    @classmethod
    def from_core(cls, t: FiniteTopology) -> "FiniteTopologySchema":
        return cls(n=t.size, opens=t.sorted_opens())

    def to_core(self) -> FiniteTopology:
        return FiniteTopology(self.n, frozenset(mask_of(o) for o in self.opens))


class SpecPreorderSchema(BaseModel):
    n: int = Field(..., ge=1)
    leq: List[Tuple[int, int]]

    @classmethod
    def from_core(cls, s: SpecPreorder) -> "SpecPreorderSchema":
        return cls(n=s.size, leq=s.pairs())

    def to_core(self) -> SpecPreorder:
        return SpecPreorder.from_pairs(self.n, self.leq)


class BoxSchema(BaseModel):
    """Endpoints as exact fraction strings such as ``"3/2"``; ``null`` leaves a coordinate unconstrained."""
    intervals: List[Optional[Tuple[str, str]]] = Field(..., min_length=1)

    @field_validator("intervals")
    @classmethod
    def endpoints_parse(cls, v: List[Optional[Tuple[str, str]]]) -> List[Optional[Tuple[str, str]]]:
        for interval in v:
            if interval is not None:
                for endpoint in interval:
                    Fraction(endpoint)
        return v

    @classmethod
    def from_core(cls, box: Box) -> "BoxSchema":
        return cls(intervals=[None if iv is None else (str(iv[0]), str(iv[1])) for iv in box.intervals])

    def to_core(self) -> Box:
        return Box(tuple(None if iv is None else (Fraction(iv[0]), Fraction(iv[1])) for iv in self.intervals))
