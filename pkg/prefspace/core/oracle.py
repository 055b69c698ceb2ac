"""
prefspace/core/oracle.py — Numeric openness oracle.

Decides whether F^-1(G) is open in the pointwise topology by probing: every
preference in G is realized by several utility vectors (unit gaps, gaps equal to
each epsilon, random gaps) and each realization is perturbed by vectors smaller
than half its smallest gap. A perturbed vector that stays in the ambient set but
represents a preference outside G is a witness that the preimage is not open.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from prefspace.config import settings
from prefspace.core.errors import DomainError, ScopeError
from prefspace.core.final import refinement_closed
from prefspace.core.order import Ambient, UtilityVector, WeakOrder, realize, represent

logger = logging.getLogger(__name__)

LEVEL_GRID_MAX_N = 4     # above this, three levels per coordinate plus uniform samples
REACHABLE_CACHE = 4096   # probe results kept per process, keyed by (order, ambient, schedule)


@dataclass(frozen=True)
class Probe:
    base: Tuple[float, ...]
    perturbation: Tuple[float, ...]
    reached: WeakOrder

    def as_witness(self) -> dict:
        return {"u": list(self.base), "perturbation": list(self.perturbation), "reached": self.reached.label()}


@dataclass(frozen=True)
class OracleVerdict:
    open: bool
    numeric_open: bool
    criterion_open: bool
    probes: int
    witness: Optional[Probe] = None
    evidence: Dict[str, object] = field(default_factory=dict)

    @property
    def agrees(self) -> bool:
        return self.numeric_open == self.criterion_open


def _check_schedule(samples: int, epsilons: Sequence[float]) -> Tuple[float, ...]:
    if samples < 1:
        raise DomainError(f"Oracle needs at least one sample, got {samples}.")
    schedule = tuple(float(e) for e in epsilons)
    if not schedule:
        raise DomainError("Epsilon schedule must not be empty.")
    if any(e <= 0 for e in schedule):
        raise DomainError(f"Epsilons must be positive, got {list(schedule)}.")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise DomainError(f"Epsilon schedule must be strictly decreasing, got {list(schedule)}.")
    return schedule


def _realizations(p: WeakOrder, schedule: Tuple[float, ...], samples: int, rng) -> List[Tuple[np.ndarray, float]]:
    """Utility vectors realizing ``p`` with the perturbation radius each one tolerates."""
    out: List[Tuple[np.ndarray, float]] = []
    unit = np.array(realize(p, gap=1).as_floats())
    for eps in schedule:
        out.append((unit, min(eps / 2, 1 / 3)))
    for eps in schedule:
        out.append((np.array(realize(p, gap=eps).as_floats()), eps / 3))
    k = len(p.classes)
    for _ in range(samples):
        gaps = rng.uniform(schedule[-1], 1.0, size=max(k - 1, 0))
        levels = np.concatenate(([0.0], np.cumsum(gaps)))[::-1] + rng.uniform(-1.0, 1.0)
        u = np.array([levels[p.rank(x)] for x in range(p.n)])
        radius = float(gaps.min()) / 3 if k > 1 else schedule[-1] / 2
        out.append((u, radius))
    return out


def _patterns(n: int, radius: float, samples: int, rng) -> np.ndarray:
    levels = n if n <= LEVEL_GRID_MAX_N else 3
    grid = np.linspace(-radius, radius, levels)
    rows = np.array(list(itertools.product(grid, repeat=n)))
    extra = rng.uniform(-radius, radius, size=(samples, n))
    return np.vstack([rows, extra])


@lru_cache(maxsize=REACHABLE_CACHE)
def _reachable(p: WeakOrder, ambient: Ambient, samples: int, schedule: Tuple[float, ...], seed: int) -> Tuple[Tuple[WeakOrder, Probe], ...]:
    """Every preference reached by a probe around ``p``, each with the first probe reaching it."""
    rng = np.random.default_rng([seed, p.n, *p.ranks])
    found: Dict[WeakOrder, Probe] = {}
    for u, radius in _realizations(p, schedule, samples, rng):
        for delta in _patterns(p.n, radius, samples, rng):
            moved = UtilityVector(tuple(float(v) for v in u + delta))
            if not moved.in_ambient(ambient):
                continue
            q = represent(moved)
            if q not in found:
                found[q] = Probe(tuple(float(v) for v in u), tuple(float(d) for d in delta), q)
    logger.debug(f"Oracle around {p.label()} in {ambient.value}: {len(found)} preferences reached")
    return tuple(sorted(found.items(), key=lambda item: item[0].ranks))


def probe_count(n: int, samples: int, epsilons: Sequence[float]) -> int:
    """Probes per preference, for evidence summaries."""
    levels = n if n <= LEVEL_GRID_MAX_N else 3
    realizations = 2 * len(epsilons) + samples
    return realizations * (levels ** n + samples)


def openness_oracle_numeric(
    orders: Iterable[WeakOrder],
    ambient: Ambient,
    n: int,
    samples: Optional[int] = None,
    epsilon_schedule: Optional[Sequence[float]] = None,
    seed: Optional[int] = None,
) -> OracleVerdict:
    """Probe whether the preimage of ``orders`` is open in ``ambient``."""
    ambient = Ambient(ambient)
    samples = settings.ORACLE_SAMPLES if samples is None else samples
    schedule = _check_schedule(samples, settings.oracle_epsilons if epsilon_schedule is None else epsilon_schedule)
    seed = settings.DEFAULT_SEED if seed is None else seed
    if ambient is Ambient.U_STAR and n == 1:
        raise ScopeError("U* is empty with one alternative: every utility vector is constant.")

    chosen = frozenset(orders)
    family = ambient.family
    for p in chosen:
        if p.n != n:
            raise DomainError(f"Preference {p.label()} has {p.n} alternatives, expected {n}.")
        if not p.member_of(family):
            raise DomainError(f"Preference {p.label()} has no preimage in {ambient.value}.")

    witness: Optional[Probe] = None
    for p in sorted(chosen, key=lambda q: q.ranks):
        for q, probe in _reachable(p, ambient, samples, schedule, seed):
            if q not in chosen:
                witness = probe
                break
        if witness is not None:
            break

    numeric_open = witness is None
    criterion_open = refinement_closed(chosen, family)
    if numeric_open != criterion_open:
        logger.warning(f"Oracle disagreement in {ambient.value} at n={n}: numeric={numeric_open} criterion={criterion_open}")
    per_order = probe_count(n, samples, schedule)
    return OracleVerdict(
        open=numeric_open and criterion_open,
        numeric_open=numeric_open,
        criterion_open=criterion_open,
        probes=per_order * len(chosen),
        witness=witness,
        evidence={"samples": samples, "epsilons": list(schedule), "ambient": ambient.value, "probes_per_order": per_order},
    )


def validate_witness(orders: Iterable[WeakOrder], ambient: Ambient, n: int, **kwargs) -> bool:
    """True when the oracle independently confirms ``orders`` is NOT open (a non-open witness is genuine)."""
    verdict = openness_oracle_numeric(orders, ambient, n, **kwargs)
    return not verdict.numeric_open


def validate_open(orders: Iterable[WeakOrder], ambient: Ambient, n: int, **kwargs) -> bool:
    """True when both numeric probes and the refinement criterion agree ``orders`` is open."""
    return openness_oracle_numeric(orders, ambient, n, **kwargs).open


def reaches(
    start: WeakOrder,
    target: WeakOrder,
    ambient: Ambient,
    samples: Optional[int] = None,
    epsilon_schedule: Optional[Sequence[float]] = None,
    seed: Optional[int] = None,
) -> Optional[Probe]:
    """A probe moving a realization of ``start`` onto ``target``: numeric evidence that ``start`` lies in cl{target}."""
    samples = settings.ORACLE_SAMPLES if samples is None else samples
    schedule = _check_schedule(samples, settings.oracle_epsilons if epsilon_schedule is None else epsilon_schedule)
    seed = settings.DEFAULT_SEED if seed is None else seed
    for q, probe in _reachable(start, Ambient(ambient), samples, schedule, seed):
        if q == target:
            return probe
    return None


# ── Parameters shared by every claim checker ──────────────────────────────────

@dataclass(frozen=True)
class CheckParams:
    seed: int = field(default_factory=lambda: settings.DEFAULT_SEED)
    samples: int = field(default_factory=lambda: settings.ORACLE_SAMPLES)
    epsilons: Tuple[float, ...] = field(default_factory=lambda: settings.oracle_epsilons)
    random_subsets: int = field(default_factory=lambda: settings.RANDOM_SUBSETS)
    sweep_sample: int = field(default_factory=lambda: settings.SWEEP_SAMPLE)
    full_sweep: bool = False
    tolerance: float = 1e-9
    claim_index: int = 0

    def rng(self, n: int) -> np.random.Generator:
        """The single named stream for one (claim, n) cell: PCG64 seeded with ``[seed, claim_index, n]``."""
        return np.random.default_rng([self.seed, self.claim_index, n])

    @property
    def oracle_kwargs(self) -> Dict[str, object]:
        return {"samples": self.samples, "epsilon_schedule": self.epsilons, "seed": self.seed}
