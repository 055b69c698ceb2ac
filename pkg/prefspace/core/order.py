"""
prefspace/core/order.py — Alternatives, weak orders, utility vectors and the
representation map F together with its monotone-transformation group action.

A preference over ``n`` alternatives ``0..n-1`` is stored in canonical form: an
ordered partition into indifference classes, best class first, every class
sorted ascending. Two weak orders are equal iff their canonical forms are.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from prefspace.config import settings
from prefspace.core.errors import DimensionError, DomainError, PreconditionError, SizeError

logger = logging.getLogger(__name__)

Real = Union[int, float, Fraction]


# ── Families ──────────────────────────────────────────────────────────────────

class Family(str, Enum):
    """Preference families and the utility subspace each one is the image of."""

    P = "P"               # every weak order; ambient U
    P_STAR = "P*"         # P without total indifference; ambient U*
    P_STRICT = "P^s"      # linear orders; ambient U^s

    @property
    def ambient(self) -> "Ambient":
        return {Family.P: Ambient.U, Family.P_STAR: Ambient.U_STAR, Family.P_STRICT: Ambient.U_STRICT}[self]


class Ambient(str, Enum):
    U = "U"
    U_STAR = "U*"
    U_STRICT = "U^s"

    @property
    def family(self) -> Family:
        return {Ambient.U: Family.P, Ambient.U_STAR: Family.P_STAR, Ambient.U_STRICT: Family.P_STRICT}[self]


# ── Weak orders ───────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class WeakOrder:
    """Ordered partition of ``{0..n-1}`` into indifference classes, best first."""

    n: int
    classes: Tuple[Tuple[int, ...], ...]
    _rank: Tuple[int, ...] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"A weak order needs at least one alternative, got n={self.n}.")
        classes = tuple(tuple(sorted(c)) for c in self.classes)
        rank: List[Optional[int]] = [None] * self.n
        for position, members in enumerate(classes):
            if not members:
                raise DomainError("Indifference classes must be nonempty.")
            for x in members:
                if not 0 <= x < self.n or rank[x] is not None:
                    raise DomainError(f"Classes {self.classes!r} do not partition 0..{self.n - 1}.")
                rank[x] = position
        if any(r is None for r in rank):
            raise DomainError(f"Classes {self.classes!r} do not cover 0..{self.n - 1}.")
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "_rank", tuple(rank))

    # ── Constructors ──────────────────────────────────────────────────────────
    @classmethod
    def from_ranks(cls, ranks: Sequence[int]) -> "WeakOrder":
        """Build from per-alternative ranks where a smaller rank is better."""
        levels = sorted(set(ranks))
        classes = [tuple(x for x, r in enumerate(ranks) if r == level) for level in levels]
        return cls(len(ranks), tuple(classes))

    @classmethod
    def total_indifference(cls, n: int) -> "WeakOrder":
        return cls(n, (tuple(range(n)),))

    @classmethod
    def linear(cls, best_first: Sequence[int]) -> "WeakOrder":
        return cls(len(best_first), tuple((x,) for x in best_first))

    @classmethod
    def parse(cls, text: str) -> "WeakOrder":
        """Inverse of :meth:`label`, e.g. ``"2>0~1"``."""
        classes = [tuple(int(x) for x in block.split("~")) for block in text.strip().split(">")]
        return cls(sum(len(c) for c in classes), tuple(classes))

    # ── Relations ─────────────────────────────────────────────────────────────
    def rank(self, x: int) -> int:
        return self._rank[x]

    @property
    def ranks(self) -> Tuple[int, ...]:
        return self._rank

    def strict(self, x: int, y: int) -> bool:
        """``x`` strictly preferred to ``y``."""
        return self._rank[x] < self._rank[y]

    def weak(self, x: int, y: int) -> bool:
        """``x`` at least as good as ``y``."""
        return self._rank[x] <= self._rank[y]

    def indifferent(self, x: int, y: int) -> bool:
        return self._rank[x] == self._rank[y]

    def class_of(self, x: int) -> Tuple[int, ...]:
        return self.classes[self._rank[x]]

    def upper(self, x: int) -> frozenset:
        """Strict upper contour set ``{y : y > x}``."""
        return frozenset(y for y in range(self.n) if self._rank[y] < self._rank[x])

    def lower(self, x: int) -> frozenset:
        """Strict lower contour set ``{y : x > y}``."""
        return frozenset(y for y in range(self.n) if self._rank[y] > self._rank[x])

    def interval(self, y: int, z: int) -> frozenset:
        """Open interval ``I(y, z) = {x : y > x > z}``."""
        return frozenset(x for x in range(self.n) if self._rank[y] < self._rank[x] < self._rank[z])

    def strict_pairs(self) -> Iterator[Tuple[int, int]]:
        for x in range(self.n):
            for y in range(self.n):
                if self._rank[x] < self._rank[y]:
                    yield x, y

    @property
    def is_total_indifference(self) -> bool:
        return len(self.classes) == 1

    @property
    def is_strict(self) -> bool:
        return len(self.classes) == self.n

    def member_of(self, family: Family) -> bool:
        if family is Family.P:
            return True
        if family is Family.P_STAR:
            return not self.is_total_indifference
        return self.is_strict

    def is_maximal(self, x: int) -> bool:
        return self._rank[x] == 0

    def is_minimal(self, x: int) -> bool:
        return self._rank[x] == len(self.classes) - 1

    def restrict(self, subset: Iterable[int]) -> frozenset:
        """Strict part restricted to ``subset`` as a set of ordered pairs."""
        members = sorted(set(subset))
        return frozenset((x, y) for x in members for y in members if self._rank[x] < self._rank[y])

    def label(self) -> str:
        return ">".join("~".join(str(x) for x in c) for c in self.classes)

    def __str__(self) -> str:
        return self.label()


# ── Utility vectors ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class UtilityVector:
    """A point of U: one real value per alternative."""

    values: Tuple[Real, ...]

    def __post_init__(self) -> None:
        values = tuple(self.values)
        if not values:
            raise DomainError("A utility vector needs at least one alternative.")
        for v in values:
            if isinstance(v, bool) or not isinstance(v, (int, float, Fraction)):
                raise DomainError(f"Utility entries must be real numbers, got {v!r}.")
            if isinstance(v, float) and not math.isfinite(v):
                raise DomainError(f"Utility entries must be finite, got {v!r}.")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return len(self.values)

    def __getitem__(self, x: int) -> Real:
        return self.values[x]

    def __iter__(self) -> Iterator[Real]:
        return iter(self.values)

    def __add__(self, other: "UtilityVector") -> "UtilityVector":
        _same_dimension(self.n, other.n)
        return UtilityVector(tuple(a + b for a, b in zip(self.values, other.values)))

    def scaled(self, factor: Real) -> "UtilityVector":
        return UtilityVector(tuple(factor * v for v in self.values))

    def max_abs_diff(self, other: "UtilityVector") -> float:
        _same_dimension(self.n, other.n)
        return max(abs(float(a - b)) for a, b in zip(self.values, other.values))

    @property
    def is_constant(self) -> bool:
        return len(set(self.values)) == 1

    @property
    def is_injective(self) -> bool:
        return len(set(self.values)) == self.n

    def in_ambient(self, ambient: Ambient) -> bool:
        if ambient is Ambient.U:
            return True
        if ambient is Ambient.U_STAR:
            return not self.is_constant
        return self.is_injective

    def as_floats(self) -> Tuple[float, ...]:
        return tuple(float(v) for v in self.values)


def _same_dimension(n: int, m: int) -> None:
    if n != m:
        raise DimensionError(f"Ground sets differ: {n} vs {m} alternatives.")


# ── Monotone maps (the group acting on U*) ────────────────────────────────────

@dataclass(frozen=True)
class MonotoneMap:
    """Strictly increasing map stored as a finite table over the values it is applied to."""

    table: Tuple[Tuple[Real, Real], ...]

    def __post_init__(self) -> None:
        table = tuple(sorted(self.table, key=lambda kv: kv[0]))
        for (k0, v0), (k1, v1) in zip(table, table[1:]):
            if not k0 < k1:
                raise DomainError(f"Duplicate key {k1!r} in monotone map table.")
            if not v0 < v1:
                raise DomainError(f"Table is not strictly increasing at {k0!r} -> {k1!r}.")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_dict(cls, mapping: Dict[Real, Real]) -> "MonotoneMap":
        return cls(tuple(mapping.items()))

    @classmethod
    def identity(cls, values: Iterable[Real]) -> "MonotoneMap":
        return cls(tuple((v, v) for v in sorted(set(values))))

    @classmethod
    def random(cls, values: Iterable[Real], rng) -> "MonotoneMap":
        """Random strictly increasing table: sorted keys mapped to cumulative positive steps."""
        keys = sorted(set(values))
        steps = rng.uniform(0.01, 10.0, size=len(keys))
        start = float(rng.uniform(-100.0, 100.0))
        images = [start + float(s) for s in itertools.accumulate(steps)]
        return cls(tuple(zip(keys, images)))

    def __call__(self, value: Real) -> Real:
        for key, image in self.table:
            if key == value:
                return image
        raise DomainError(f"Monotone map table does not cover the value {value!r}.")

    def inverse(self) -> "MonotoneMap":
        return MonotoneMap(tuple((v, k) for k, v in self.table))

    def compose(self, inner: "MonotoneMap") -> "MonotoneMap":
        """``self ∘ inner`` on the keys of ``inner``."""
        return MonotoneMap(tuple((k, self(v)) for k, v in inner.table))


# ── Operations ────────────────────────────────────────────────────────────────

def represent(u: UtilityVector) -> WeakOrder:
    """The representation map F: ties iff equal values, better iff larger value."""
    levels = sorted(set(u.values), reverse=True)
    position = {v: i for i, v in enumerate(levels)}
    return WeakOrder.from_ranks([position[v] for v in u.values])


def realize(p: WeakOrder, gap: Real = 1, base: Real = 0) -> UtilityVector:
    """A preimage of ``p``: tied classes share a value, adjacent classes differ by ``gap``."""
    top = len(p.classes) - 1
    return UtilityVector(tuple(base + (top - p.rank(x)) * gap for x in range(p.n)))


def apply_monotone(f: MonotoneMap, u: UtilityVector) -> UtilityVector:
    """Group action ``(f, u) -> f ∘ u``; the represented preference is unchanged."""
    return UtilityVector(tuple(f(v) for v in u.values))


def normalize_bounded(u: UtilityVector) -> UtilityVector:
    """Compose with arctan so every entry lies in (-pi/2, pi/2)."""
    return UtilityVector(tuple(math.atan(float(v)) for v in u.values))


def refines(fine: WeakOrder, coarse: WeakOrder) -> bool:
    """True iff every strict comparison of ``coarse`` also holds in ``fine``."""
    _same_dimension(fine.n, coarse.n)
    fr, cr = fine.ranks, coarse.ranks
    n = fine.n
    for x in range(n):
        for y in range(n):
            if cr[x] < cr[y] and not fr[x] < fr[y]:
                return False
    return True


def opposite(p: WeakOrder) -> WeakOrder:
    return WeakOrder(p.n, tuple(reversed(p.classes)))


@lru_cache(maxsize=None)
def _surjective_rankings(m: int) -> Tuple[Tuple[int, ...], ...]:
    """Every canonical ranking pattern of ``m`` items (ranks form 0..k-1), lexicographic."""
    patterns = []
    for ranks in itertools.product(range(m), repeat=m):
        used = set(ranks)
        if used == set(range(len(used))):
            patterns.append(ranks)
    return tuple(patterns)


@lru_cache(maxsize=None)
def _enumerate(n: int, family: Family) -> Tuple[WeakOrder, ...]:
    orders = (WeakOrder.from_ranks(r) for r in _surjective_rankings(n))
    return tuple(p for p in orders if p.member_of(family))


def enumerate_preferences(n: int, family: Family = Family.P, cap: Optional[int] = None) -> List[WeakOrder]:
    """Every weak order of ``family`` over ``n`` alternatives, duplicate-free, lexicographic by ranks."""
    cap = settings.ENUMERATION_CAP if cap is None else cap
    if n < 1:
        raise DomainError(f"Need at least one alternative, got n={n}.")
    if n > cap:
        raise SizeError(f"n={n} exceeds the enumeration cap of {cap}.")
    family = Family(family)
    orders = list(_enumerate(n, family))
    logger.debug(f"Enumerated {len(orders)} preferences in {family.value} at n={n}")
    return orders


def refinements(p: WeakOrder) -> List[WeakOrder]:
    """Every weak order obtained from ``p`` by breaking ties inside its classes (``p`` included)."""
    per_class = [_surjective_rankings(len(c)) for c in p.classes]
    result = []
    for choice in itertools.product(*per_class):
        ranks = [0] * p.n
        offset = 0
        for members, pattern in zip(p.classes, choice):
            for x, r in zip(members, pattern):
                ranks[x] = offset + r
            offset += max(pattern) + 1
        result.append(WeakOrder.from_ranks(ranks))
    return result


def tied_pairs(p: WeakOrder) -> List[Tuple[int, int]]:
    return [(x, y) for c in p.classes for i, x in enumerate(c) for y in c[i + 1:]]


def require_strict_on(p: WeakOrder, subset: Iterable[int]) -> Tuple[int, ...]:
    members = tuple(sorted(set(subset)))
    for i, x in enumerate(members):
        if not 0 <= x < p.n:
            raise DomainError(f"Alternative {x} is outside 0..{p.n - 1}.")
        for y in members[i + 1:]:
            if p.indifferent(x, y):
                raise PreconditionError(f"Alternatives {x} and {y} are indifferent under {p.label()}.")
    return members
