"""
prefspace/core/paths.py — Explicit utility sequences and the three-step path.

Every construction keeps the represented preference fixed along the sequence and
lands, in the limit, on a coarser preference. Affine formulas are evaluated in
exact rational arithmetic (floats convert to Fractions exactly), so constancy of
``represent`` along a sequence is checked without rounding.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from prefspace.core.errors import DomainError, PreconditionError, ScopeError
from prefspace.core.exogenous import is_isolated
from prefspace.core.order import (
    UtilityVector,
    WeakOrder,
    normalize_bounded,
    refines,
    represent,
    tied_pairs,
)

logger = logging.getLogger(__name__)


def _exact(u: UtilityVector) -> Tuple[Fraction, ...]:
    return tuple(v if isinstance(v, Fraction) else Fraction(v) for v in u.values)


# ── Types ─────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class UtilitySequence:
    """``generator(k)`` for ``k >= 1`` converging pointwise to ``declared_limit``."""

    name: str
    generator: Callable[[int], UtilityVector] = field(repr=False, compare=False)
    declared_limit: UtilityVector
    promised_order: Optional[WeakOrder] = None
    promised_limit: Optional[WeakOrder] = None
    flags: Tuple[str, ...] = ()

    def __call__(self, k: int) -> UtilityVector:
        if k < 1:
            raise PreconditionError(f"Sequence indices start at 1, got {k}.")
        return self.generator(k)

    def with_limit(self, limit: UtilityVector) -> "UtilitySequence":
        """Same generator, different declared limit (negative controls)."""
        return UtilitySequence(self.name, self.generator, limit, self.promised_order, self.promised_limit, self.flags)


@dataclass(frozen=True)
class UtilityPath:
    evaluator: Callable[[Fraction], UtilityVector] = field(repr=False, compare=False)
    waypoints: Tuple[UtilityVector, ...]
    anchors: Optional[Tuple[int, int, int]]
    segment_count: int = 3

    def __call__(self, s) -> UtilityVector:
        s = Fraction(s)
        if not 0 <= s <= 1:
            raise PreconditionError(f"Path parameter must lie in [0, 1], got {s}.")
        return self.evaluator(s)


# ── Constructions ─────────────────────────────────────────────────────────────

def flatten_global(u: UtilityVector) -> UtilitySequence:
    """``u_k = normalize_bounded(u) / k``: every preference converges to total indifference."""
    bounded = _exact(normalize_bounded(u))
    order = represent(u)
    if represent(normalize_bounded(u)) != order:
        logger.warning(f"arctan rounding merged values of {u.values}; constancy is judged against the raw order")
    zero = UtilityVector(tuple(Fraction(0) for _ in bounded))
    return UtilitySequence(
        name="flatten_global",
        generator=lambda k: UtilityVector(tuple(v / k for v in bounded)),
        declared_limit=zero,
        promised_order=order,
        promised_limit=WeakOrder.total_indifference(u.n),
    )


def _on_ground(p: WeakOrder, *alternatives: int) -> None:
    for x in alternatives:
        if not 0 <= x < p.n:
            raise DomainError(f"Alternative {x} is outside 0..{p.n - 1}.")


def flatten_middle(u: UtilityVector, x: int, y: int) -> UtilitySequence:
    """Pull every alternative strictly between ``x`` and ``y`` down onto ``y``."""
    p = represent(u)
    _on_ground(p, x, y)
    if not p.strict(x, y):
        raise PreconditionError(f"flatten_middle needs {x} strictly above {y} in {p.label()}.")
    middle = p.interval(x, y)
    if not middle:
        raise PreconditionError(f"No alternative lies strictly between {x} and {y} in {p.label()}.")
    values = _exact(u)
    low = values[y]

    def generator(k: int) -> UtilityVector:
        return UtilityVector(tuple((1 - Fraction(1, k)) * low + v / k if z in middle else v for z, v in enumerate(values)))

    limit = UtilityVector(tuple(low if z in middle else v for z, v in enumerate(values)))
    boundary = [z for z in range(p.n) if z not in (x, y) and (p.indifferent(z, x) or p.indifferent(z, y))]
    flags = ("boundary_ties",) if boundary else ()
    return UtilitySequence("flatten_middle", generator, limit, p, represent(limit), flags)


def prop1_sequence(u: UtilityVector, x: int, y: int) -> UtilitySequence:
    """Split the tie ``x ~ y`` by shifting ``x``'s side down and ``y``'s side up by ``2/k``.

    Other members of the tied class move down with ``x``, so ``y`` alone leaves the class.
    """
    p = represent(u)
    _on_ground(p, x, y)
    if x == y or not p.indifferent(x, y):
        raise PreconditionError(f"prop1_sequence needs {x} ~ {y} with {x} != {y} under {p.label()}.")
    values = _exact(u)
    up = [z == y or p.strict(z, y) for z in range(p.n)]

    def generator(k: int) -> UtilityVector:
        step = Fraction(2, k)
        return UtilityVector(tuple(v + step if up[z] else v - step for z, v in enumerate(values)))

    promised = represent(generator(1))
    return UtilitySequence("prop1_sequence", generator, UtilityVector(values), promised, p)


def prop1_sequences(u: UtilityVector) -> List[UtilitySequence]:
    """One sequence per tied pair."""
    return [prop1_sequence(u, x, y) for x, y in tied_pairs(represent(u))]


def prop3_case_sequence(u: UtilityVector, x: int, case: str) -> UtilitySequence:
    """Compress the weak lower (``case="lower"``) or weak upper (``"upper"``) contour of ``x`` toward ``u(x)``."""
    p = represent(u)
    _on_ground(p, x)
    if p.is_maximal(x) or p.is_minimal(x):
        raise PreconditionError(f"Alternative {x} is maximal or minimal in {p.label()}.")
    if case not in ("lower", "upper"):
        raise PreconditionError(f"Unknown case {case!r}; expected 'lower' or 'upper'.")
    values = _exact(u)
    centre = values[x]
    moved = [p.weak(x, z) if case == "lower" else p.weak(z, x) for z in range(p.n)]

    def generator(k: int) -> UtilityVector:
        return UtilityVector(tuple(v / k + (1 - Fraction(1, k)) * centre if moved[z] else v for z, v in enumerate(values)))

    limit = UtilityVector(tuple(centre if moved[z] else v for z, v in enumerate(values)))
    return UtilitySequence(f"prop3_{case}", generator, limit, p, represent(limit))


def isolated_case(x: int, p: WeakOrder) -> str:
    """Which branch of the finite/infinite case split applies to ``x``: isolated, lower, upper or both."""
    _on_ground(p, x)
    if p.is_maximal(x) or p.is_minimal(x):
        raise PreconditionError(f"Alternative {x} is maximal or minimal in {p.label()}.")
    if is_isolated(x, p):
        return "isolated"
    gap_below = any(p.strict(x, z) and not p.interval(x, z) for z in range(p.n))
    gap_above = any(p.strict(z, x) and not p.interval(z, x) for z in range(p.n))
    if gap_below:
        return "lower"
    if gap_above:
        return "upper"
    return "both"


def _anchors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Tuple[int, int, int]:
    n = len(u)
    for x in range(n):
        for y in range(n):
            if y == x or u[x] == u[y]:
                continue
            for c in range(n):
                if c != y and v[x] != v[c]:
                    return x, y, c
    raise PreconditionError("No anchors satisfy the path conditions.")


def three_step_path(u: UtilityVector, v: UtilityVector) -> UtilityPath:
    """Path from ``u`` to ``v`` inside the nonconstant vectors, built in three affine steps."""
    if u.n != v.n:
        raise PreconditionError(f"Endpoints differ in size: {u.n} vs {v.n}.")
    if u.n < 3:
        raise ScopeError(f"The three-step path needs at least three alternatives, got {u.n}.")
    if u.is_constant or v.is_constant:
        raise PreconditionError("Both endpoints must be nonconstant.")
    a, b = _exact(u), _exact(v)
    if a == b:
        start = UtilityVector(a)
        return UtilityPath(lambda s: start, (start, start, start, start), None)

    x, y, c = _anchors(a, b)
    w1 = tuple(a[z] if z in (x, y) else b[z] for z in range(u.n))
    w2 = tuple(b[x] if z == y else b[z] for z in range(u.n))

    def t1(s: Fraction) -> Tuple[Fraction, ...]:
        return tuple(a[z] if z in (x, y) else (1 - s) * a[z] + s * b[z] for z in range(u.n))

    def t2(s: Fraction) -> Tuple[Fraction, ...]:
        out = list(w1)
        out[x] = (1 - s) * a[x] + s * b[x]
        out[y] = (1 - s) * a[y] + s * b[x]
        return tuple(out)

    def t3(s: Fraction) -> Tuple[Fraction, ...]:
        out = list(w2)
        out[y] = (1 - s) * w2[y] + s * b[y]
        return tuple(out)

    def evaluator(s: Fraction) -> UtilityVector:
        third = Fraction(1, 3)
        if s <= third:
            return UtilityVector(t1(3 * s))
        if s <= 2 * third:
            return UtilityVector(t2(3 * s - 1))
        return UtilityVector(t3(3 * s - 2))

    return UtilityPath(evaluator, (UtilityVector(a), UtilityVector(w1), UtilityVector(w2), UtilityVector(b)), (x, y, c))


def strict_crossing(path: Callable[[Fraction], UtilityVector], resolution: int = 100) -> Optional[Tuple[int, int, Fraction, Fraction]]:
    """First sampled parameter interval where some pair of coordinates changes order along ``path``.

    Returns ``(x, y, s_before, s_after)``; the pair is tied somewhere in between,
    so the path leaves the injective vectors.
    """
    previous = path(Fraction(0))
    n = previous.n
    last_s = Fraction(0)
    for step in range(1, resolution + 1):
        s = Fraction(step, resolution)
        current = path(s)
        for x in range(n):
            for y in range(x + 1, n):
                before = previous[x] - previous[y]
                after = current[x] - current[y]
                if before == 0 or after == 0 or (before > 0) != (after > 0):
                    return x, y, last_s, s
        previous, last_s = current, s
    return None


def straight_line(u: UtilityVector, v: UtilityVector) -> Callable[[Fraction], UtilityVector]:
    a, b = _exact(u), _exact(v)
    return lambda s: UtilityVector(tuple((1 - s) * p + s * q for p, q in zip(a, b)))


# ── Verification ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class TraceRow:
    index: int
    values: Tuple[float, ...]
    weak_order: str


@dataclass(frozen=True)
class SequenceReport:
    name: str
    converged: bool
    monotone: bool
    constant: bool
    limit_ok: bool
    coarsening: bool
    max_deviation: float
    trace: Tuple[TraceRow, ...]
    flags: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.converged and self.constant and self.limit_ok and self.coarsening


def verify_sequence(seq: UtilitySequence, tolerance: float = 1e-6, depth: int = 10) -> SequenceReport:
    """Probe ``seq`` at ``k = 1, 2, 4, ..., 2**depth`` and at its limit."""
    if tolerance <= 0:
        raise PreconditionError(f"Tolerance must be positive, got {tolerance}.")
    limit = seq.declared_limit
    deviations: List[float] = []
    trace: List[TraceRow] = []
    constant = True
    for step in range(depth + 1):
        k = 2 ** step
        u_k = seq(k)
        p_k = represent(u_k)
        deviations.append(u_k.max_abs_diff(limit))
        trace.append(TraceRow(k, u_k.as_floats(), p_k.label()))
        if seq.promised_order is not None and p_k != seq.promised_order:
            constant = False
    limit_order = represent(limit)
    trace.append(TraceRow(0, limit.as_floats(), limit_order.label()))   # index 0 marks the limit row
    limit_ok = seq.promised_limit is None or limit_order == seq.promised_limit
    coarsening = refines(represent(seq(1)), limit_order)
    monotone = all(b <= a for a, b in zip(deviations, deviations[1:]))
    report = SequenceReport(
        name=seq.name,
        converged=deviations[-1] <= tolerance,
        monotone=monotone,
        constant=constant,
        limit_ok=limit_ok,
        coarsening=coarsening,
        max_deviation=deviations[-1],
        trace=tuple(trace),
        flags=seq.flags,
    )
    if not report.passed:
        logger.warning(f"Sequence {seq.name} failed verification: deviation={report.max_deviation:.3e} constant={constant} limit_ok={limit_ok}")
    return report


def trace_rows(report: SequenceReport, parameter: str = "n") -> List[List[str]]:
    """CSV rows: header, one row per probed index, limit last (index written as ``inf``)."""
    width = len(report.trace[0].values) if report.trace else 0
    rows = [[parameter] + [f"u{i}" for i in range(width)] + ["weak_order"]]
    for row in report.trace:
        index = "inf" if row.index == 0 else str(row.index)
        rows.append([index] + [repr(v) for v in row.values] + [row.weak_order])
    return rows


def path_rows(path: UtilityPath, samples: int = 101) -> List[List[str]]:
    """CSV rows for ``path`` sampled at ``s = k/(samples-1)``."""
    first = path(0)
    rows = [["s"] + [f"u{i}" for i in range(first.n)] + ["weak_order"]]
    for k in range(samples):
        s = Fraction(k, samples - 1)
        u = path(s)
        rows.append([str(s)] + [repr(v) for v in u.as_floats()] + [represent(u).label()])
    return rows
