"""
prefspace/core/exogenous.py — Topologies on the alternatives themselves.

Either an exogenous topology T_X is fixed, or each preference carries the
topology generated by its own contour sets. Continuity, local strictness, the
families P^cls and P^ci, the Hausdorff check on P^cls and the finite-X results
about P^ci live here.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from prefspace.core.errors import DimensionError
from prefspace.core.final import final_topology
from prefspace.core.oracle import reaches
from prefspace.core.order import Ambient, Family, WeakOrder, enumerate_preferences
from prefspace.core.topology import (
    FiniteTopology,
    enumerate_topologies,
    generate_from_subbasis,
    mask_of,
    members,
)
from prefspace.schemas.reports import ClaimReport, SweepEntry, Verdict

logger = logging.getLogger(__name__)


# ── Contour sets ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ContourSets:
    """Strict upper and lower contour sets of every alternative, as bitmasks."""

    n: int
    upper: Tuple[int, ...]
    lower: Tuple[int, ...]

    @classmethod
    def of(cls, p: WeakOrder) -> "ContourSets":
        return cls(p.n, tuple(mask_of(p.upper(x)) for x in range(p.n)), tuple(mask_of(p.lower(x)) for x in range(p.n)))

    def interval(self, y: int, z: int) -> int:
        """``I(y, z) = lower(y) ∩ upper(z)``."""
        return self.lower[y] & self.upper[z]

    def subbasis(self) -> List[int]:
        return sorted(set(self.upper) | set(self.lower))


@dataclass(frozen=True)
class XTopologyContext:
    """An exogenous topology on X, or ``None`` for each preference's own contour topology."""

    n: int
    t_x: Optional[FiniteTopology] = None

    def __post_init__(self) -> None:
        if self.t_x is not None and self.t_x.size != self.n:
            raise DimensionError(f"Topology has {self.t_x.size} points, expected {self.n}.")

    def topology_for(self, p: WeakOrder) -> FiniteTopology:
        return contour_topology(p) if self.t_x is None else self.t_x


def contour_topology(p: WeakOrder) -> FiniteTopology:
    """Topology on X generated by every upper and lower contour set of ``p``."""
    return generate_from_subbasis(p.n, ContourSets.of(p).subbasis())


def _same_size(p: WeakOrder, t_x: FiniteTopology) -> None:
    if p.n != t_x.size:
        raise DimensionError(f"Preference has {p.n} alternatives, topology has {t_x.size} points.")


def is_continuous_pref(p: WeakOrder, t_x: FiniteTopology) -> bool:
    _same_size(p, t_x)
    contours = ContourSets.of(p)
    return all(t_x.is_open(m) for m in contours.upper + contours.lower)


def _weak_pairs(p: WeakOrder, include_diagonal: bool):
    for x in range(p.n):
        for y in range(p.n):
            if p.weak(x, y) and (include_diagonal or x != y):
                yield x, y


def _has_strict_pair(p: WeakOrder, left: int, right: int) -> bool:
    return any(p.strict(a, b) for a in members(left) for b in members(right))


def is_locally_strict(p: WeakOrder, t_x: FiniteTopology, include_diagonal: bool = True) -> bool:
    """Every weak pair has a strict pair in its smallest product neighbourhood ``N(x) x N(y)``."""
    _same_size(p, t_x)
    for x, y in _weak_pairs(p, include_diagonal):
        if not _has_strict_pair(p, t_x.minimal_open(x), t_x.minimal_open(y)):
            return False
    return True


def is_locally_strict_exhaustive(p: WeakOrder, t_x: FiniteTopology, include_diagonal: bool = True) -> bool:
    """Same predicate over every basic product-open neighbourhood ``O1 x O2``; small spaces only."""
    _same_size(p, t_x)
    opens = sorted(t_x.opens)
    for x, y in _weak_pairs(p, include_diagonal):
        for left in (o for o in opens if o >> x & 1):
            for right in (o for o in opens if o >> y & 1):
                if not _has_strict_pair(p, left, right):
                    return False
    return True


def pcls_family(n: int, t_x: FiniteTopology, include_diagonal: bool = True) -> List[WeakOrder]:
    """Continuous and locally strict preferences for ``t_x``."""
    if t_x.size != n:
        raise DimensionError(f"Topology has {t_x.size} points, expected {n}.")
    return [
        p
        for p in enumerate_preferences(n, Family.P)
        if is_continuous_pref(p, t_x) and is_locally_strict(p, t_x, include_diagonal)
    ]


# ── Indifference classes, isolation, neighbourhoods ──────────────────────────

def pci_membership(p: WeakOrder) -> bool:
    """No nonempty subset of any indifference class is open in ``p``'s own contour topology."""
    t = contour_topology(p)
    for cls in p.classes:
        for size in range(1, len(cls) + 1):
            for subset in itertools.combinations(cls, size):
                if t.is_open(mask_of(subset)):
                    return False
    return True


def open_class_subset(p: WeakOrder) -> Optional[Tuple[int, ...]]:
    """A nonempty open subset of some indifference class, found by scanning the explicit opens."""
    t = contour_topology(p)
    for o in sorted(t.opens):
        if o and any(o & ~mask_of(cls) == 0 for cls in p.classes):
            return tuple(members(o))
    return None


def is_isolated(x: int, p: WeakOrder) -> bool:
    """Some ``a > x > b`` with nothing strictly between ``a`` and ``x`` nor between ``x`` and ``b``."""
    above = [a for a in range(p.n) if p.strict(a, x) and not p.interval(a, x)]
    below = [b for b in range(p.n) if p.strict(x, b) and not p.interval(x, b)]
    return bool(above and below)


def minimal_neighborhood(x: int, p: WeakOrder) -> FrozenSet[int]:
    return frozenset(members(contour_topology(p).minimal_open(x)))


def neighborhood_from_intervals(x: int, p: WeakOrder) -> FrozenSet[int]:
    """Intersection of the intervals ``I(z, z')`` with ``z > x > z'``, and one-sided contour sets at the ends."""
    contours = ContourSets.of(p)
    above = [z for z in range(p.n) if p.strict(z, x)]
    below = [z for z in range(p.n) if p.strict(x, z)]
    mask = (1 << p.n) - 1
    if above and below:
        for z, z2 in itertools.product(above, below):
            mask &= contours.interval(z, z2)
    elif above:
        for z in above:
            mask &= contours.lower[z]
    elif below:
        for z2 in below:
            mask &= contours.upper[z2]
    return frozenset(members(mask))


def convergence_gloss_holds(p: WeakOrder) -> bool:
    """Interval neighbourhoods match the topology, and the constant sequence at ``w`` converges to ``x`` iff ``x ∈ cl{w}``."""
    t = contour_topology(p)
    for x in range(p.n):
        n_x = minimal_neighborhood(x, p)
        if n_x != neighborhood_from_intervals(x, p):
            return False
        for w in range(p.n):
            if (w in n_x) != bool(t.closure(1 << w) >> x & 1):
                return False
    return True


# ── Claim checkers ────────────────────────────────────────────────────────────

def _comparable_pair(space) -> Optional[Tuple[int, int]]:
    for i in range(space.size):
        for j in members(space.preorder.up[i]):
            if j != i:
                return i, j
    return None


def check_theorem4(n: int, t_x: FiniteTopology, params, include_diagonal: bool = True) -> ClaimReport:
    """P^cls for ``t_x`` is Hausdorff (discrete) in the subspace of the final topology on P*."""
    family = pcls_family(n, t_x, include_diagonal)
    vacuous = not family
    in_star = [p for p in family if p.member_of(Family.P_STAR)]
    star_space = final_topology(Family.P_STAR, n).restrict(in_star, name="P^cls") if in_star else None
    pair = _comparable_pair(star_space) if star_space else None
    p_space = final_topology(Family.P, n).restrict(family, name="P^cls") if family else None
    p_pair = _comparable_pair(p_space) if p_space else None

    witness = None
    invariants: Dict[str, bool] = {}
    if n >= 2:
        # at n=1 the off-diagonal reading admits the lone indifferent order vacuously
        invariants["pcls_within_pstar"] = len(in_star) == len(family)
    if pair is not None:
        coarse, fine = star_space.family[pair[0]], star_space.family[pair[1]]
        probe = reaches(coarse, fine, Ambient.U_STAR, **params.oracle_kwargs)
        witness = {"coarse": coarse.label(), "fine": fine.label(), "probe": probe.as_witness() if probe else None}
        invariants["witness_oracle_validated"] = probe is not None
    report = ClaimReport.build(
        claim="theorem4",
        n=n,
        family="P^cls",
        confirmed=pair is None,
        params=params,
        subverdicts={
            "pcls": [p.label() for p in family],
            "pcls_size": len(family),
            "vacuous": vacuous,
            "include_diagonal": include_diagonal,
            "hausdorff_in_p": p_pair is None,
        },
        witness=witness,
        invariants=invariants,
    )
    if report.verdict is Verdict.REFUTED:
        logger.warning(f"P^cls Hausdorff check refuted at n={n}: {witness}")
    return report


def sweep_topologies(n: int, params) -> List[Tuple[int, FiniteTopology]]:
    """All topologies for n <= 3; a seeded sample at n = 4 unless ``params.full_sweep``."""
    topologies = enumerate_topologies(n)
    indexed = list(enumerate(topologies))
    if n >= 4 and not params.full_sweep and params.sweep_sample < len(indexed):
        chosen = params.rng(n).choice(len(indexed), size=params.sweep_sample, replace=False)
        indexed = [indexed[int(i)] for i in sorted(chosen)]
    return indexed


def theorem4_sweep(n: int, params) -> Tuple[ClaimReport, List[SweepEntry]]:
    entries: List[SweepEntry] = []
    invariants: Dict[str, bool] = {}
    refuted: Optional[dict] = None
    for index, t_x in sweep_topologies(n, params):
        diagonal = check_theorem4(n, t_x, params, include_diagonal=True)
        offdiagonal = check_theorem4(n, t_x, params, include_diagonal=False)
        entries.append(
            SweepEntry(
                topology_index=index,
                opens=t_x.sorted_opens(),
                pcls_size=diagonal.subverdicts["pcls_size"],
                verdict=diagonal.verdict,
                vacuous=diagonal.subverdicts["vacuous"],
                pcls_size_offdiagonal=offdiagonal.subverdicts["pcls_size"],
                verdict_offdiagonal=offdiagonal.verdict,
                vacuous_offdiagonal=offdiagonal.subverdicts["vacuous"],
            )
        )
        invariants[f"topology_{index}"] = diagonal.invariants_passed and offdiagonal.invariants_passed
        if refuted is None:
            for report in (diagonal, offdiagonal):
                if report.verdict is Verdict.REFUTED:
                    refuted = {"topology_index": index, "opens": t_x.sorted_opens(), **report.witness}
                    break
    report = ClaimReport.build(
        claim="theorem4_sweep",
        n=n,
        family="P^cls",
        confirmed=refuted is None,
        params=params,
        subverdicts={
            "topologies": len(entries),
            "nonvacuous": sum(not e.vacuous for e in entries),
            "nonvacuous_offdiagonal": sum(not e.vacuous_offdiagonal for e in entries),
            "refuted": sum(e.verdict is Verdict.REFUTED for e in entries),
            "refuted_offdiagonal": sum(e.verdict_offdiagonal is Verdict.REFUTED for e in entries),
        },
        witness=refuted,
        invariants={"all_topologies_consistent": all(invariants.values())},
    )
    logger.info(f"P^cls sweep at n={n}: {len(entries)} topologies, {report.subverdicts['nonvacuous']} non-vacuous")
    return report, entries


CONTROL_ORDER = "0~1>2"
CONTROL_OPENS = [[], [2], [0, 1], [0, 1, 2]]


def check_prop3_finite(n: int, params) -> ClaimReport:
    """P^ci is empty on a finite set of alternatives."""
    members_ = [p for p in enumerate_preferences(n, Family.P) if pci_membership(p)]
    invariants = {}
    witness = None
    if members_:
        found = open_class_subset(members_[0])
        witness = {"preference": members_[0].label(), "open_class_subset": found}
        invariants["witness_rechecked"] = found is None
    subverdicts: Dict[str, object] = {"pci_size": len(members_), "checked": len(enumerate_preferences(n, Family.P))}
    if n == 3:
        opens = contour_topology(WeakOrder.parse(CONTROL_ORDER)).sorted_opens()
        subverdicts["control_opens"] = opens
        invariants["control_opens_reproduced"] = opens == CONTROL_OPENS
    return ClaimReport.build("prop3_finite", n, "P", not members_, params, subverdicts, witness, invariants)


def check_lemma_locally_strict(n: int, params) -> ClaimReport:
    """P^ci members are locally strict in their own contour topology; others are not."""
    forward_failures: List[str] = []
    converse_failures: List[str] = []
    offdiagonal_locally_strict = 0
    pci_count = 0
    for p in enumerate_preferences(n, Family.P):
        t = contour_topology(p)
        in_pci = pci_membership(p)
        strict_here = is_locally_strict(p, t)
        pci_count += in_pci
        offdiagonal_locally_strict += is_locally_strict(p, t, include_diagonal=False)
        if in_pci and not strict_here:
            forward_failures.append(p.label())
        if not in_pci and strict_here:
            converse_failures.append(p.label())

    invariants: Dict[str, bool] = {}
    subverdicts: Dict[str, object] = {
        "vacuous": pci_count == 0,
        "pci_size": pci_count,
        "converse_holds": not converse_failures,
        "locally_strict_offdiagonal": offdiagonal_locally_strict,
    }
    if n == 3:
        control = WeakOrder.parse(CONTROL_ORDER)
        t = contour_topology(control)
        ok = not pci_membership(control) and not is_locally_strict(control, t)
        subverdicts["negative_control"] = ok
        invariants["negative_control"] = ok
    if n <= 3:
        invariants["minimal_neighbourhood_reduction"] = all(
            is_locally_strict(p, t_x, d) == is_locally_strict_exhaustive(p, t_x, d)
            for p in enumerate_preferences(n, Family.P)
            for t_x in [contour_topology(p), *enumerate_topologies(n)]
            for d in (True, False)
        )
    witness = None
    if forward_failures:
        p = WeakOrder.parse(forward_failures[0])
        witness = {"preference": forward_failures[0], "exhaustive_recheck": is_locally_strict_exhaustive(p, contour_topology(p))}
        invariants["witness_rechecked"] = not witness["exhaustive_recheck"]
    return ClaimReport.build("lemma_locally_strict", n, "P", not forward_failures, params, subverdicts, witness, invariants)
