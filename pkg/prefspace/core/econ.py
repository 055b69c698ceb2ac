"""
prefspace/core/econ.py — Two-good CES, Cobb-Douglas and Leontief utilities and demands.

CES is parametrized by the elasticity of substitution ``sigma``; ``rho = 1/sigma - 1``.
The singular parameters sigma = 1 and sigma = 0 are the explicit Cobb-Douglas and
Leontief kinds, never the CES formula.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import logsumexp

from prefspace.core.errors import DomainError, ScopeError
from prefspace.core.oracle import CheckParams
from prefspace.schemas.reports import ClaimReport

logger = logging.getLogger(__name__)

Bundle = Tuple[Real, Real]

CD_SCHEDULE = (1.5, 1.1, 1.01, 1.001)
LEONTIEF_SCHEDULE = (0.5, 0.1, 0.01, 0.001)
LIMIT_TOLERANCE = 1e-2          # final deviation on the default grid, both targets
ORACLE_RTOL = 1e-8
MONOTONE_SLACK = 1e-12
ORACLE_TIE = 1e-13             # relative utility gap below which the slope root wins


# ── Parameters ────────────────────────────────────────────────────────────────

def _interior(alpha: Real) -> None:
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie strictly between 0 and 1, got {alpha}.")


@dataclass(frozen=True)
class CesParams:
    alpha: Real
    sigma: float

    def __post_init__(self) -> None:
        _interior(self.alpha)
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}.")
        if self.sigma == 1:
            raise DomainError("sigma = 1 is the Cobb-Douglas kind, not a CES parameter.")

    @classmethod
    def from_rho(cls, alpha: Real, rho: float) -> "CesParams":
        if not rho > -1 or rho == 0:
            raise DomainError(f"rho must exceed -1 and differ from 0, got {rho}.")
        return cls(alpha, 1 / (1 + rho))

    @property
    def rho(self) -> float:
        return 1 / self.sigma - 1


@dataclass(frozen=True)
class Budget:
    p1: Real
    p2: Real
    w: Real

    def __post_init__(self) -> None:
        if not (self.p1 > 0 and self.p2 > 0 and self.w > 0):
            raise DomainError(f"Prices and wealth must be positive, got p=({self.p1}, {self.p2}) w={self.w}.")

    def cost(self, bundle: Bundle) -> Real:
        return self.p1 * bundle[0] + self.p2 * bundle[1]

    def scaled(self, factor: Real) -> "Budget":
        return Budget(self.p1 * factor, self.p2 * factor, self.w * factor)


# ── Utility kinds ─────────────────────────────────────────────────────────────

def _check_bundle(bundle: Bundle) -> Tuple[Real, Real]:
    x1, x2 = bundle
    if x1 < 0 or x2 < 0:
        raise DomainError(f"Bundles must be nonnegative, got ({x1}, {x2}).")
    return x1, x2


class Utility(ABC):
    """A two-good utility with a closed-form Marshallian demand."""

    name: str = ""

    def __init__(self, alpha: Real):
        _interior(alpha)
        self.alpha = alpha

    @abstractmethod
    def calculate(self, bundle: Bundle) -> Real:
        """Utility of ``bundle``."""

    @abstractmethod
    def grid(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        """Vectorised utility over strictly positive arrays."""

    @abstractmethod
    def demand(self, budget: Budget) -> Bundle:
        """Closed-form utility maximizer on the budget line."""

    def __repr__(self) -> str:
        return f"{self.name}(alpha={self.alpha})"


class CES(Utility):
    name = "ces"

    def __init__(self, params: CesParams):
        super().__init__(params.alpha)
        self.params = params

    def calculate(self, bundle: Bundle) -> float:
        x1, x2 = _check_bundle(bundle)
        if self.params.rho > 0 and (x1 == 0 or x2 == 0):
            raise DomainError(f"CES with sigma={self.params.sigma} < 1 needs a strictly positive bundle.")
        return float(self.grid(np.asarray(float(x1)), np.asarray(float(x2))))

    def grid(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        # log-space so large |rho| neither overflows nor underflows
        rho = self.params.rho
        alpha = float(self.alpha)
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.stack([np.log(np.asarray(x1, dtype=float)), np.log(np.asarray(x2, dtype=float))])
            weights = np.array([alpha, 1 - alpha]).reshape((2,) + (1,) * (logs.ndim - 1))
            return np.exp(logsumexp(-rho * logs, axis=0, b=weights) / -rho)

    def demand(self, budget: Budget) -> Bundle:
        s = self.params.sigma
        a = float(self.alpha)
        p1, p2, w = float(budget.p1), float(budget.p2), float(budget.w)
        denominator = a ** s * p1 ** (1 - s) + (1 - a) ** s * p2 ** (1 - s)
        return w * a ** s * p1 ** -s / denominator, w * (1 - a) ** s * p2 ** -s / denominator

    def __repr__(self) -> str:
        return f"ces(alpha={self.alpha}, sigma={self.params.sigma})"


class CobbDouglas(Utility):
    name = "cobb_douglas"

    def calculate(self, bundle: Bundle) -> float:
        x1, x2 = _check_bundle(bundle)
        return float(x1) ** float(self.alpha) * float(x2) ** (1 - float(self.alpha))

    def grid(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        a = float(self.alpha)
        return x1 ** a * x2 ** (1 - a)

    def demand(self, budget: Budget) -> Bundle:
        return self.alpha * budget.w / budget.p1, (1 - self.alpha) * budget.w / budget.p2


class Leontief(Utility):
    """``min(alpha * x1, (1 - alpha) * x2)``."""

    name = "leontief"

    def calculate(self, bundle: Bundle) -> Real:
        x1, x2 = _check_bundle(bundle)
        return min(self.alpha * x1, (1 - self.alpha) * x2)

    def grid(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        a = float(self.alpha)
        return np.minimum(a * x1, (1 - a) * x2)

    def demand(self, budget: Budget) -> Bundle:
        # kink: alpha * x1 = (1 - alpha) * x2 on the budget line
        t = budget.w / (budget.p1 / self.alpha + budget.p2 / (1 - self.alpha))
        return t / self.alpha, t / (1 - self.alpha)


def ces(alpha: Real, sigma: float) -> CES:
    return CES(CesParams(alpha, sigma))


def cobb_douglas(alpha: Real) -> CobbDouglas:
    return CobbDouglas(alpha)


def leontief(alpha: Real) -> Leontief:
    return Leontief(alpha)


def utility(kind: Utility, bundle: Bundle) -> Real:
    return kind.calculate(bundle)


def demand(kind: Utility, budget: Budget) -> Bundle:
    return kind.demand(budget)


def expenditure_share(kind: Utility, budget: Budget) -> Real:
    """Share of wealth spent on good 1; exact when the inputs are Fractions."""
    x1, _ = kind.demand(budget)
    return budget.p1 * x1 / budget.w


# ── Numeric demand oracle ─────────────────────────────────────────────────────

def demand_numeric(kind: Utility, budget: Budget) -> Tuple[float, float]:
    """Maximize ``kind.grid`` along the budget line; the closed-form demand is never consulted.

    A bounded golden-section search over good 1 locates the optimum to about
    sqrt(eps). Two polishes run inside a small bracket around it: a second bounded
    search on the offset, and a root of the central-difference slope of log utility.
    The slope root is exact to rounding for smooth utilities; the offset search is
    exact at kinks. The slope root is kept unless the offset search finds strictly
    more utility.
    """
    p1, p2, w = float(budget.p1), float(budget.p2), float(budget.w)
    top = w / p1

    def along(x1: float) -> float:
        x2 = max((w - p1 * x1) / p2, 0.0)
        return float(kind.grid(np.asarray(x1), np.asarray(x2)))

    coarse = minimize_scalar(lambda x: -along(x), bounds=(0.0, top), method="bounded", options={"xatol": 1e-12 * top})
    x0 = float(coarse.x)
    edge = min(x0, top - x0)
    room = min(max(1e-4 * edge, 1e-11 * top), edge / 2)
    candidates = [x0]
    if room > 0:
        # on the offset, the search's relative tolerance no longer scales with x0
        fine = minimize_scalar(lambda t: -along(x0 + t), bounds=(-room, room), method="bounded", options={"xatol": 1e-9 * room})
        candidates.insert(0, x0 + float(fine.x))
        h = room / 20

        def slope(x: float) -> float:
            return (np.log(along(x + h)) - np.log(along(x - h))) / (2 * h)

        lo, hi = x0 - room + h, x0 + room - h
        if slope(lo) > 0 > slope(hi):
            candidates.insert(0, brentq(slope, lo, hi, xtol=1e-15 * top, rtol=4 * np.finfo(float).eps, maxiter=500))
    best = max(along(x) for x in candidates)
    x1 = next(x for x in candidates if along(x) >= best * (1 - ORACLE_TIE))
    if abs(x1 - x0) > 1e-6 * top:
        logger.debug(f"Golden search for {kind!r} stopped at {x0}, polished to {x1}")
    return x1, max((w - p1 * x1) / p2, 0.0)


def relative_error(closed: Bundle, numeric: Bundle) -> float:
    """Normwise: max coordinate error over the larger coordinate."""
    scale = max(abs(float(closed[0])), abs(float(closed[1])))
    return max(abs(float(a) - float(b)) for a, b in zip(closed, numeric)) / scale


# ── Limits and compensation ───────────────────────────────────────────────────

def default_grid(low: float = 0.1, high: float = 10.0, points: int = 21) -> Tuple[np.ndarray, np.ndarray]:
    axis = np.geomspace(low, high, points)
    return np.meshgrid(axis, axis, indexing="ij")


@dataclass(frozen=True)
class LimitReport:
    target: str
    alpha: float
    sigmas: Tuple[float, ...]
    deviations: Tuple[float, ...]
    monotone: bool
    converged: bool
    unweighted_deviations: Optional[Tuple[float, ...]] = None
    unweighted_converged: Optional[bool] = None


def _monotone(values: Sequence[float]) -> bool:
    return all(b <= a + MONOTONE_SLACK for a, b in zip(values, values[1:]))


def limit_check(
    target: str,
    alpha: Real,
    grid: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    sigma_schedule: Optional[Sequence[float]] = None,
    tolerance: float = LIMIT_TOLERANCE,
) -> LimitReport:
    """Max deviation between CES and the target over ``grid`` for each sigma in the schedule.

    For the Leontief target the deviation from the unweighted ``min(x1, x2)`` is
    reported too: it is the pointwise limit of the weighted CES family.
    """
    if target not in ("cobb_douglas", "leontief"):
        raise DomainError(f"Unknown limit target {target!r}.")
    x1, x2 = default_grid() if grid is None else (np.asarray(grid[0], float), np.asarray(grid[1], float))
    if np.any(x1 <= 0) or np.any(x2 <= 0):
        raise DomainError("Limit grids must hold strictly positive bundles.")
    schedule = tuple(sigma_schedule or (CD_SCHEDULE if target == "cobb_douglas" else LEONTIEF_SCHEDULE))
    reference = (cobb_douglas(alpha) if target == "cobb_douglas" else leontief(alpha)).grid(x1, x2)
    deviations, unweighted = [], []
    for s in schedule:
        values = ces(alpha, s).grid(x1, x2)
        deviations.append(float(np.max(np.abs(values - reference))))
        if target == "leontief":
            unweighted.append(float(np.max(np.abs(values - np.minimum(x1, x2)))))
    report = LimitReport(
        target=target,
        alpha=float(alpha),
        sigmas=schedule,
        deviations=tuple(deviations),
        monotone=_monotone(deviations),
        converged=deviations[-1] <= tolerance,
        unweighted_deviations=tuple(unweighted) if unweighted else None,
        unweighted_converged=(unweighted[-1] <= tolerance and _monotone(unweighted)) if unweighted else None,
    )
    if not report.converged:
        logger.warning(f"CES does not approach {target}(alpha={alpha}): final deviation {deviations[-1]:.6g}")
    return report


@dataclass(frozen=True)
class CompensationReport:
    alpha: Real
    before: Budget
    after: Budget
    leontief_before: Bundle
    leontief_after: Bundle
    ces_deviation: Dict[float, float] = field(default_factory=dict)

    @property
    def leontief_exact(self) -> bool:
        return self.leontief_before == self.leontief_after


def compensation_check(
    alpha: Real,
    budget: Budget,
    new_prices: Tuple[Real, Real],
    sigmas: Sequence[float] = (0.5, 0.1, 0.01),
) -> CompensationReport:
    """Move prices, compensate wealth so the old Leontief optimum stays affordable, compare demands."""
    kind = leontief(alpha)
    original = kind.demand(budget)
    p1, p2 = new_prices
    after = Budget(p1, p2, p1 * original[0] + p2 * original[1])
    deviation = {}
    for s in sigmas:
        before_ces, after_ces = ces(alpha, s).demand(budget), ces(alpha, s).demand(after)
        deviation[s] = max(abs(float(a) - float(b)) for a, b in zip(before_ces, after_ces))
    return CompensationReport(alpha, budget, after, original, kind.demand(after), deviation)


def limit_rows(report: LimitReport) -> List[List[str]]:
    header = ["sigma", "max_abs_deviation"] + (["max_abs_deviation_unweighted"] if report.unweighted_deviations else [])
    rows = [header]
    for k, s in enumerate(report.sigmas):
        row = [repr(s), repr(report.deviations[k])]
        if report.unweighted_deviations:
            row.append(repr(report.unweighted_deviations[k]))
        rows.append(row)
    return rows


def compensation_rows(report: CompensationReport) -> List[List[str]]:
    rows = [["scenario", "p1", "p2", "w", "x1", "x2"]]
    for label, budget, bundle in (("before", report.before, report.leontief_before), ("after", report.after, report.leontief_after)):
        rows.append([label] + [str(v) for v in (budget.p1, budget.p2, budget.w, *bundle)])
    rows.append(["sigma", "ces_demand_shift"])
    rows.extend([repr(s), repr(d)] for s, d in report.ces_deviation.items())
    return rows


# ── Claim checker ─────────────────────────────────────────────────────────────

def _random_budget(rng) -> Budget:
    p1, p2, w = (Fraction(int(rng.integers(1, 100)), int(rng.integers(1, 20))) for _ in range(3))
    return Budget(p1, p2, w)


def check_ces_limits(n: int, params: CheckParams) -> ClaimReport:
    """CES approaches Cobb-Douglas as sigma -> 1 and the weighted Leontief utility as sigma -> 0."""
    if n != 2:
        raise ScopeError(f"The demand demo has two goods, got n={n}.")
    rng = params.rng(n)
    invariants: Dict[str, bool] = {}

    budgets = [_random_budget(rng) for _ in range(1000)]
    alphas = [Fraction(int(rng.integers(1, 99)), 100) for _ in range(1000)]
    invariants["cobb_douglas_share_exact"] = all(
        expenditure_share(cobb_douglas(a), b) == a for a, b in zip(alphas, budgets)
    )

    worst = 0.0
    lattice_budgets = budgets[:10]
    for a in np.linspace(0.05, 0.95, 10):
        kinds: List[Utility] = [ces(float(a), float(s)) for s in np.geomspace(0.1, 10.0, 10)]
        kinds += [cobb_douglas(float(a)), leontief(float(a))]
        for kind in kinds:
            for b in lattice_budgets:
                worst = max(worst, relative_error(kind.demand(b), demand_numeric(kind, b)))
    invariants["oracle_agreement"] = worst <= ORACLE_RTOL

    walras = homogeneous = True
    for a, b in zip(alphas[:100], budgets[:100]):
        for kind in (cobb_douglas(a), leontief(a)):
            walras &= b.cost(kind.demand(b)) == b.w
            homogeneous &= all(kind.demand(b.scaled(Fraction(lam))) == kind.demand(b) for lam in (Fraction(1, 2), 2, 10))
        smooth = ces(float(a), 0.5 + float(rng.uniform(0, 3)))
        x = smooth.demand(b)
        walras &= abs(float(b.cost(x)) - float(b.w)) <= 1e-10 * float(b.w)
        homogeneous &= all(
            relative_error(x, smooth.demand(b.scaled(lam))) <= 1e-12 for lam in (Fraction(1, 2), 2, 10)
        )
    invariants["walras_law"] = walras
    invariants["demand_homogeneous"] = homogeneous

    half = Fraction(1, 2)
    to_cd = limit_check("cobb_douglas", 0.5)
    to_leontief = limit_check("leontief", 0.5)
    invariants["limits_monotone"] = to_cd.monotone and to_leontief.monotone and bool(to_leontief.unweighted_converged)
    compensation = compensation_check(half, Budget(1, 1, 10), (2, 1))
    invariants["leontief_compensation_exact"] = compensation.leontief_exact

    witness = None
    if not (to_cd.converged and to_leontief.converged):
        diagonal = ces(0.5, LEONTIEF_SCHEDULE[-1]).calculate((10, 10))
        witness = {
            "target": "leontief" if not to_leontief.converged else "cobb_douglas",
            "final_deviation": to_leontief.deviations[-1] if not to_leontief.converged else to_cd.deviations[-1],
            "bundle": [10, 10],
            "ces_value": diagonal,
            "target_value": float(leontief(half).calculate((10, 10))),
            "unweighted_final_deviation": to_leontief.unweighted_deviations[-1],
        }
        invariants["witness_diagonal_exact"] = abs(diagonal - 10) <= 1e-9
    return ClaimReport.build(
        "ces_limits",
        n,
        "econ",
        to_cd.converged and to_leontief.converged,
        params,
        subverdicts={
            "cobb_douglas": {"sigmas": list(to_cd.sigmas), "deviations": list(to_cd.deviations), "converged": to_cd.converged},
            "leontief": {
                "sigmas": list(to_leontief.sigmas),
                "deviations": list(to_leontief.deviations),
                "converged": to_leontief.converged,
                "unweighted_deviations": list(to_leontief.unweighted_deviations or ()),
                "unweighted_converged": to_leontief.unweighted_converged,
            },
            "oracle_max_relative_error": worst,
            "compensation_ces_shift": {repr(s): d for s, d in compensation.ces_deviation.items()},
        },
        witness=witness,
        invariants=invariants,
    )
