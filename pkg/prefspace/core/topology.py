"""
prefspace/core/topology.py — Finite topological spaces.

Two concrete representations share one query interface:

  FiniteTopology  explicit family of open sets (bitmasks) over at most
                  EXPLICIT_GROUND_CAP points
  SpecPreorder    the specialization preorder, which determines an Alexandrov
                  topology implicitly; used for spaces far too large to list

Convention: ``leq(i, j)`` iff ``i`` lies in the closure of ``{j}``, i.e. every
open set containing ``i`` contains ``j``. Open sets are the up-sets.
Subsets are passed around as int bitmasks (bit ``i`` set iff point ``i`` is in).
"""
import itertools
import logging
from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache
from typing import Callable, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from prefspace.config import settings
from prefspace.core.errors import DomainError, SizeError

logger = logging.getLogger(__name__)


# ── Bitmask helpers ───────────────────────────────────────────────────────────

def mask_of(points: Iterable[int]) -> int:
    mask = 0
    for p in points:
        mask |= 1 << p
    return mask


def members(mask: int) -> List[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _as_mask(subset: Union[int, Iterable[int]], size: int) -> int:
    mask = subset if isinstance(subset, int) else mask_of(subset)
    if mask < 0 or mask >> size:
        raise DomainError(f"Subset {members(mask) if mask >= 0 else subset} is outside the ground set 0..{size - 1}.")
    return mask


class _FiniteSpace:
    """Queries shared by both representations; subclasses provide ``size`` and ``up``."""

    size: int
    up: Tuple[int, ...]

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def minimal_open(self, i: int) -> int:
        """Smallest open set containing ``i``."""
        return self.up[i]

    def is_open(self, subset: Union[int, Iterable[int]]) -> bool:
        mask = _as_mask(subset, self.size)
        for i in members(mask):
            if self.up[i] & ~mask:
                return False
        return True

    def closure(self, subset: Union[int, Iterable[int]]) -> int:
        mask = _as_mask(subset, self.size)
        return mask_of(i for i in range(self.size) if self.up[i] & mask)

    def is_closed(self, subset: Union[int, Iterable[int]]) -> bool:
        mask = _as_mask(subset, self.size)
        return self.closure(mask) == mask

    def up_closure(self, subset: Union[int, Iterable[int]]) -> int:
        """Smallest open set containing ``subset``."""
        out = 0
        for i in members(_as_mask(subset, self.size)):
            out |= self.up[i]
        return out

    def subspace(self, points: Sequence[int]) -> "SpecPreorder":
        """Restriction to ``points``; point ``k`` of the result is ``points[k]``."""
        index = {p: k for k, p in enumerate(points)}
        up = []
        for p in points:
            up.append(mask_of(index[q] for q in members(self.up[p]) if q in index))
        return SpecPreorder(len(points), tuple(up))


# ── Explicit topologies ───────────────────────────────────────────────────────

@dataclass(frozen=True)
class FiniteTopology(_FiniteSpace):
    """A topology on ``0..size-1`` given by its open sets."""

    size: int
    opens: FrozenSet[int]
    up: Tuple[int, ...] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.size < 1:
            raise DomainError(f"Ground set needs at least one point, got {self.size}.")
        if self.size > settings.EXPLICIT_GROUND_CAP:
            raise SizeError(
                f"Explicit topologies are limited to {settings.EXPLICIT_GROUND_CAP} points, got {self.size}."
            )
        opens = frozenset(_as_mask(o, self.size) for o in self.opens)
        full = (1 << self.size) - 1
        if 0 not in opens or full not in opens:
            raise DomainError("A topology must contain the empty set and the whole ground set.")
        for a, b in itertools.combinations(opens, 2):
            if a | b not in opens or a & b not in opens:
                raise DomainError(f"Open sets {members(a)} and {members(b)} break union/intersection closure.")
        up = []
        for i in range(self.size):
            smallest = full
            for o in opens:
                if o >> i & 1:
                    smallest &= o
            up.append(smallest)
        object.__setattr__(self, "opens", opens)
        object.__setattr__(self, "up", tuple(up))

    def is_open(self, subset: Union[int, Iterable[int]]) -> bool:
        return _as_mask(subset, self.size) in self.opens

    def sorted_opens(self) -> List[List[int]]:
        return sorted((members(o) for o in self.opens), key=lambda s: (len(s), s))


@dataclass(frozen=True)
class SpecPreorder(_FiniteSpace):
    """Reflexive-transitive relation stored as up-set bitmasks: ``up[i]`` holds every ``j`` with ``leq(i, j)``."""

    size: int
    up: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.up) != self.size:
            raise DomainError(f"Expected {self.size} up-sets, got {len(self.up)}.")

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[Tuple[int, int]]) -> "SpecPreorder":
        """Reflexive-transitive closure of a relation given as ``(i, j)`` pairs meaning ``leq(i, j)``."""
        graph = nx.DiGraph()
        graph.add_nodes_from(range(size))
        graph.add_edges_from(pairs)
        closure = nx.transitive_closure(graph, reflexive=True)
        return cls(size, tuple(mask_of(closure.successors(i)) for i in range(size)))

    def pairs(self) -> List[Tuple[int, int]]:
        return [(i, j) for i in range(self.size) for j in members(self.up[i])]

    def validate(self) -> None:
        for i in range(self.size):
            if not self.up[i] >> i & 1:
                raise DomainError(f"Preorder is not reflexive at {i}.")
            for j in members(self.up[i]):
                if self.up[j] & ~self.up[i]:
                    raise DomainError(f"Preorder is not transitive through {i} <= {j}.")


Space = Union[FiniteTopology, SpecPreorder]


# ── Sierpinski space ──────────────────────────────────────────────────────────

class SierpinskiPoint(IntEnum):
    CLOSED = 0
    OPEN = 1


def sierpinski_space() -> FiniteTopology:
    """``{0, 1}`` with opens ``∅, {1}, {0, 1}``."""
    return FiniteTopology(2, frozenset({0, 0b10, 0b11}))


# ── Operations ────────────────────────────────────────────────────────────────

def generate_from_subbasis(size: int, subbasis: Iterable[Union[int, Iterable[int]]]) -> FiniteTopology:
    """Smallest topology containing ``subbasis``: finite intersections, then unions."""
    full = (1 << size) - 1
    masks = [_as_mask(s, size) for s in subbasis]
    # In a finite space the union-closure of the finite intersections is generated
    # by each point's smallest basic neighbourhood.
    neighbourhoods = []
    for i in range(size):
        smallest = full
        for m in masks:
            if m >> i & 1:
                smallest &= m
        neighbourhoods.append(smallest)
    return FiniteTopology(size, frozenset(_unions(neighbourhoods)))


def _unions(generators: Sequence[int]) -> set:
    opens = {0}
    for g in set(generators):
        opens |= {o | g for o in opens}
    return opens


def alexandrov_topology(preorder: SpecPreorder) -> FiniteTopology:
    """Explicit topology whose opens are the up-sets of ``preorder``."""
    return FiniteTopology(preorder.size, frozenset(_unions(preorder.up)))


@lru_cache(maxsize=None)
def _topologies(n: int) -> Tuple[FiniteTopology, ...]:
    off_diagonal = [(i, j) for i in range(n) for j in range(n) if i != j]
    found = []
    for chosen in itertools.product((False, True), repeat=len(off_diagonal)):
        up = [1 << i for i in range(n)]
        for (i, j), keep in zip(off_diagonal, chosen):
            if keep:
                up[i] |= 1 << j
        if all(up[j] & ~up[i] == 0 for i in range(n) for j in members(up[i])):
            found.append(alexandrov_topology(SpecPreorder(n, tuple(up))))
    return tuple(found)


def enumerate_topologies(n: int) -> List[FiniteTopology]:
    """Every topology on ``n`` labelled points (1, 4, 29, 355 for n = 1..4)."""
    if n < 1:
        raise DomainError(f"Need at least one point, got n={n}.")
    if n > settings.TOPOLOGY_CAP:
        raise SizeError(f"Topology enumeration is limited to n <= {settings.TOPOLOGY_CAP}, got {n}.")
    return list(_topologies(n))


def specialization(t: Space) -> SpecPreorder:
    if isinstance(t, SpecPreorder):
        return t
    return SpecPreorder(t.size, t.up)


@dataclass(frozen=True)
class Separation:
    t0: bool
    t1: bool
    t2: bool


def separation_axioms(space: Space) -> Separation:
    """For finite spaces T1 and T2 both reduce to the preorder being equality."""
    t0 = all(not (space.leq(i, j) and space.leq(j, i)) for i in range(space.size) for j in range(i + 1, space.size))
    discrete = all(space.up[i] == 1 << i for i in range(space.size))
    return Separation(t0=t0, t1=discrete, t2=discrete)


@dataclass(frozen=True)
class Connectivity:
    connected: bool
    components: Tuple[Tuple[int, ...], ...]
    path_connected: bool

    @property
    def totally_path_disconnected(self) -> bool:
        return all(len(c) == 1 for c in self.components)


def comparability_graph(space: Space) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(space.size))
    for i in range(space.size):
        graph.add_edges_from((i, j) for j in members(space.up[i]) if j != i)
    return graph


def connectivity(space: Space) -> Connectivity:
    """Components of the comparability graph; connected finite spaces are path-connected."""
    graph = comparability_graph(space)
    components = tuple(sorted(tuple(sorted(c)) for c in nx.connected_components(graph)))
    connected = len(components) == 1
    return Connectivity(connected=connected, components=components, path_connected=connected)


def specialization_path(space: Space, start: int, end: int) -> Callable[[float], int]:
    """Continuous path ``[0, 1] -> space`` between two comparable points.

    The more generic point (the one whose closure holds the other) is taken on
    ``[0, 1)`` or ``(0, 1]`` so preimages of opens stay open in the interval.
    """
    if space.leq(end, start):
        return lambda s: start if s < 1 else end
    if space.leq(start, end):
        return lambda s: start if s <= 0 else end
    raise DomainError(f"Points {start} and {end} are not comparable.")


def path_between(space: Space, start: int, end: int) -> Optional[List[int]]:
    """Chain of pairwise comparable points joining ``start`` to ``end`` (None when disconnected)."""
    graph = comparability_graph(space)
    try:
        return nx.shortest_path(graph, start, end)
    except nx.NetworkXNoPath:
        return None


def is_open(space: Space, subset: Union[int, Iterable[int]]) -> bool:
    return space.is_open(subset)


def closure(space: Space, subset: Union[int, Iterable[int]]) -> int:
    return space.closure(subset)


@dataclass(frozen=True)
class BasisCheck:
    ok: bool
    witness: Optional[Tuple[int, int]] = None   # (open set mask, point)
    reason: str = ""


def is_basis(family: Iterable[Union[int, Iterable[int]]], space: Space) -> BasisCheck:
    """Every open set is a union of members iff each point's smallest open set is a member containing it."""
    masks = sorted({_as_mask(b, space.size) for b in family})
    for b in masks:
        for i in members(b):
            if space.up[i] & ~b:
                return BasisCheck(ok=False, witness=(b, i), reason="member is not open")
    for p in range(space.size):
        smallest = space.up[p]
        if not any(b >> p & 1 and b & ~smallest == 0 for b in masks):
            return BasisCheck(ok=False, witness=(smallest, p), reason="no member between point and its smallest open set")
    return BasisCheck(ok=True)


def is_continuous_map(mapping: Sequence[int], domain: Space, codomain: FiniteTopology) -> bool:
    """``mapping[i]`` is the image of domain point ``i``; continuous iff preimages of opens are open."""
    if len(mapping) != domain.size:
        raise DomainError(f"Map has {len(mapping)} images for {domain.size} domain points.")
    for o in codomain.opens:
        preimage = mask_of(i for i, image in enumerate(mapping) if o >> image & 1)
        if not domain.is_open(preimage):
            return False
    return True
