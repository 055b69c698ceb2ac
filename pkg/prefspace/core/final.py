"""
prefspace/core/final.py — The final (quotient) topology on a preference family.

A set G of preferences is open iff F^-1(G) is open in the ambient utility
subspace. Perturbing a utility vector slightly keeps every strict comparison and
may break any tie, so F^-1(G) is open exactly when G is closed under refinement
inside the family. The space is stored as the specialization preorder
(``leq(i, j)`` iff ``family[j]`` refines ``family[i]``), never as a list of opens.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linprog

from prefspace.core.errors import DimensionError, DomainError
from prefspace.core.order import (
    Ambient,
    Family,
    Real,
    UtilityVector,
    WeakOrder,
    enumerate_preferences,
    refinements,
    require_strict_on,
)
from prefspace.core.topology import SpecPreorder, mask_of, members

logger = logging.getLogger(__name__)


# ── Preference spaces ─────────────────────────────────────────────────────────

@dataclass(frozen=True)
class PrefSpace:
    """A preference family with the final topology, as a specialization preorder over family indices."""

    n: int
    name: str
    family: Tuple[WeakOrder, ...]
    preorder: SpecPreorder
    index: Dict[WeakOrder, int] = field(repr=False, compare=False, hash=False)

    @property
    def size(self) -> int:
        return len(self.family)

    def mask(self, orders: Iterable[WeakOrder]) -> int:
        try:
            return mask_of(self.index[p] for p in orders)
        except KeyError as e:
            raise DomainError(f"Preference {e.args[0]} is not a member of {self.name}.") from e

    def orders(self, mask: int) -> List[WeakOrder]:
        return [self.family[i] for i in members(mask)]

    def is_open(self, orders: Iterable[WeakOrder]) -> bool:
        return self.preorder.is_open(self.mask(orders))

    def closure(self, orders: Iterable[WeakOrder]) -> List[WeakOrder]:
        return self.orders(self.preorder.closure(self.mask(orders)))

    def neighbourhood(self, p: WeakOrder) -> List[WeakOrder]:
        """Smallest open set containing ``p``: its refinements inside the family."""
        return self.orders(self.preorder.up[self.index[p]])

    def restrict(self, orders: Sequence[WeakOrder], name: Optional[str] = None) -> "PrefSpace":
        """Subspace topology on ``orders``."""
        points = [self.index[p] for p in orders]
        sub = self.preorder.subspace(points)
        family = tuple(self.family[i] for i in points)
        return PrefSpace(self.n, name or f"{self.name}|{len(family)}", family, sub, {p: k for k, p in enumerate(family)})


def _build_space(n: int, name: str, family: Sequence[WeakOrder]) -> PrefSpace:
    family = tuple(family)
    for p in family:
        if p.n != n:
            raise DimensionError(f"Preference {p.label()} has {p.n} alternatives, expected {n}.")
    index = {p: i for i, p in enumerate(family)}
    up = []
    for p in family:
        up.append(mask_of(index[q] for q in refinements(p) if q in index))
    logger.debug(f"Final topology on {name} at n={n}: {len(family)} points")
    return PrefSpace(n, name, family, SpecPreorder(len(family), tuple(up)), index)


@lru_cache(maxsize=32)
def _family_space(n: int, family: Family) -> PrefSpace:
    return _build_space(n, family.value, enumerate_preferences(n, family))


def final_topology(family: Union[Family, str, Iterable[WeakOrder]], n: int) -> PrefSpace:
    """Final topology on P, P*, P^s or on an arbitrary subset of preferences over ``n`` alternatives."""
    if isinstance(family, (Family, str)):
        return _family_space(n, Family(family))
    orders = sorted(set(family), key=lambda p: p.ranks)
    if orders:
        enumerate_preferences(n, Family.P)  # enforces the size cap
    return _build_space(n, "custom", orders)


def refinement_closed(orders: Iterable[WeakOrder], family: Family) -> bool:
    """Combinatorial openness criterion, computed without a PrefSpace."""
    chosen = set(orders)
    for p in chosen:
        for q in refinements(p):
            if q.member_of(family) and q not in chosen:
                return False
    return True


def ambient_family(ambient: Ambient) -> Family:
    return Ambient(ambient).family


# ── Basis elements B(anchor, A) ───────────────────────────────────────────────

@dataclass(frozen=True)
class BasisElement:
    anchor: WeakOrder
    subset: Tuple[int, ...]
    members: int          # mask over the space's family

    def orders(self, space: PrefSpace) -> List[WeakOrder]:
        return space.orders(self.members)


def basis_element(anchor: WeakOrder, subset: Iterable[int], space: PrefSpace) -> BasisElement:
    """Every member of the family that agrees with ``anchor`` (strictly) on ``subset``."""
    if anchor.n != space.n:
        raise DimensionError(f"Anchor has {anchor.n} alternatives, space has {space.n}.")
    chosen = require_strict_on(anchor, subset)
    target = anchor.restrict(chosen)
    mask = mask_of(i for i, q in enumerate(space.family) if q.restrict(chosen) == target)
    return BasisElement(anchor, chosen, mask)


def basis_family(space: PrefSpace, anchors: Optional[Iterable[WeakOrder]] = None) -> List[BasisElement]:
    """All B(anchor, A) with anchors from the family and A of size 0 or at least 2, deduplicated by members."""
    anchors = list(space.family if anchors is None else anchors)
    seen: Dict[int, BasisElement] = {}
    for size in [0] + list(range(2, space.n + 1)):
        for subset in itertools.combinations(range(space.n), size):
            groups: Dict[frozenset, int] = {}
            for i, q in enumerate(space.family):
                key = q.restrict(subset)
                groups[key] = groups.get(key, 0) | 1 << i
            for anchor in anchors:
                if any(anchor.indifferent(x, y) for x, y in itertools.combinations(subset, 2)):
                    continue
                mask = groups.get(anchor.restrict(subset), 0)
                seen.setdefault(mask, BasisElement(anchor, subset, mask))
    return [seen[m] for m in sorted(seen)]


def pairwise_intersection_identity(anchor: WeakOrder, subset: Iterable[int], space: PrefSpace) -> bool:
    """B(anchor, A) equals the intersection of B(anchor, {x, y}) over pairs of A."""
    whole = basis_element(anchor, subset, space)
    meet = (1 << space.size) - 1
    for x, y in itertools.combinations(whole.subset, 2):
        meet &= basis_element(anchor, (x, y), space).members
    return meet == whole.members


# ── Boxes and their images under F ────────────────────────────────────────────

Interval = Optional[Tuple[Fraction, Fraction]]


def _fraction(value: Real) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class Box:
    """Product of open intervals, one per alternative; ``None`` means unconstrained."""

    intervals: Tuple[Interval, ...]

    def __post_init__(self) -> None:
        cleaned = []
        for i, interval in enumerate(self.intervals):
            if interval is None:
                cleaned.append(None)
                continue
            lo, hi = (_fraction(v) for v in interval)
            if not lo < hi:
                raise DomainError(f"Interval {i} is empty: ({lo}, {hi}).")
            cleaned.append((lo, hi))
        if not cleaned:
            raise DomainError("A box needs at least one coordinate.")
        object.__setattr__(self, "intervals", tuple(cleaned))

    @property
    def n(self) -> int:
        return len(self.intervals)

    @classmethod
    def unconstrained(cls, n: int) -> "Box":
        return cls(tuple([None] * n))

    @classmethod
    def random(cls, n: int, rng, constrained: float = 0.75, grid: int = 8) -> "Box":
        """Random box with endpoints on a small integer grid so endpoints collide often."""
        intervals: List[Interval] = []
        for _ in range(n):
            if rng.random() >= constrained:
                intervals.append(None)
                continue
            lo, hi = sorted(int(v) for v in rng.choice(grid + 1, size=2, replace=False))
            intervals.append((Fraction(lo), Fraction(hi)))
        return cls(tuple(intervals))

    def contains(self, u: UtilityVector) -> bool:
        return all(iv is None or iv[0] < v < iv[1] for iv, v in zip(self.intervals, u.values))


def _sweep_bounds(p: WeakOrder, box: Box) -> Optional[List[Tuple[Optional[Fraction], Optional[Fraction]]]]:
    """Worst-to-best sweep; per class the strict lower bound and the upper endpoint, or None if infeasible."""
    bounds = []
    lower: Optional[Fraction] = None
    for members_ in reversed(p.classes):
        lo, hi = lower, None
        for x in members_:
            interval = box.intervals[x]
            if interval is None:
                continue
            a, b = interval
            lo = a if lo is None else max(lo, a)
            hi = b if hi is None else min(hi, b)
        if lo is not None and hi is not None and not lo < hi:
            return None
        bounds.append((lo, hi))
        lower = lo
    return bounds


def _between(lo: Optional[Fraction], hi: Optional[Fraction]) -> Fraction:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def pattern_feasible(p: WeakOrder, box: Box) -> bool:
    if p.n != box.n:
        raise DimensionError(f"Box has {box.n} coordinates, preference has {p.n} alternatives.")
    return _sweep_bounds(p, box) is not None


def realize_in_box(p: WeakOrder, box: Box) -> Optional[UtilityVector]:
    """Exact rational vector inside ``box`` representing ``p``, or None when the pattern is infeasible."""
    bounds = _sweep_bounds(p, box)
    if bounds is None:
        return None
    values: Dict[int, Fraction] = {}
    ceiling: Optional[Fraction] = None
    for members_, (lo, hi) in zip(p.classes, reversed(bounds)):
        top = hi if ceiling is None else (ceiling if hi is None else min(hi, ceiling))
        value = _between(lo, top)
        for x in members_:
            values[x] = value
        ceiling = value
    return UtilityVector(tuple(values[x] for x in range(p.n)))


def image_of_box(box: Box, n: int, ambient: Ambient = Ambient.U_STAR) -> FrozenSet[WeakOrder]:
    """``{F(u) : u in box ∩ ambient}`` computed pattern by pattern."""
    if box.n != n:
        raise DimensionError(f"Box has {box.n} coordinates, expected {n}.")
    family = ambient_family(ambient)
    return frozenset(p for p in enumerate_preferences(n, family) if _sweep_bounds(p, box) is not None)


def lemma_box_prediction(box: Box, n: int, ambient: Ambient = Ambient.U_STAR) -> FrozenSet[WeakOrder]:
    """Image predicted by the two-case open-map argument.

    Common point in every constrained interval: the whole ambient family.
    Otherwise: preferences ranking a greedily chosen pairwise-disjoint set of
    constrained coordinates in the order of their intervals.
    """
    family = enumerate_preferences(n, ambient_family(ambient))
    constrained = [(x, iv) for x, iv in enumerate(box.intervals) if iv is not None]
    if not constrained:
        return frozenset(family)
    if max(iv[0] for _, iv in constrained) < min(iv[1] for _, iv in constrained):
        return frozenset(family)
    chosen: List[int] = []
    last_hi: Optional[Fraction] = None
    for x, (lo, hi) in sorted(constrained, key=lambda item: (item[1][1], item[0])):
        if last_hi is None or lo >= last_hi:
            chosen.append(x)
            last_hi = hi
    chain = list(zip(chosen, chosen[1:]))     # increasing interval order
    return frozenset(p for p in family if all(p.strict(high, low) for low, high in chain))


def pattern_feasible_lp(p: WeakOrder, box: Box, slack_tol: float = 1e-9) -> bool:
    """Independent feasibility test: maximize the common slack of every strict inequality with a linear program."""
    if p.n != box.n:
        raise DimensionError(f"Box has {box.n} coordinates, preference has {p.n} alternatives.")
    k = len(p.classes)
    t = k                      # slack variable index
    rows, rhs = [], []
    for c, members_ in enumerate(p.classes):
        for x in members_:
            interval = box.intervals[x]
            if interval is None:
                continue
            a, b = (float(v) for v in interval)
            row = np.zeros(k + 1)
            row[c], row[t] = -1.0, 1.0
            rows.append(row)
            rhs.append(-a)
            row = np.zeros(k + 1)
            row[c], row[t] = 1.0, 1.0
            rows.append(row)
            rhs.append(b)
    for c in range(k - 1):
        row = np.zeros(k + 1)
        row[c + 1], row[c], row[t] = 1.0, -1.0, 1.0
        rows.append(row)
        rhs.append(0.0)
    if not rows:
        return True
    objective = np.zeros(k + 1)
    objective[t] = -1.0
    bounds = [(None, None)] * k + [(None, 1.0)]
    result = linprog(objective, A_ub=np.array(rows), b_ub=np.array(rhs), bounds=bounds, method="highs")
    if result.status != 0:
        logger.warning(f"Slack program for {p.label()} ended with status {result.status}: {result.message}")
        return False
    return -result.fun > slack_tol
