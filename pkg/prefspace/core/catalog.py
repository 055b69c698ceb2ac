"""
prefspace/core/catalog.py — Registry of claim checkers: ids, anchors, size ranges, runners.
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple, Union

from prefspace.core import claims, econ, exogenous
from prefspace.core.errors import UsageError
from prefspace.core.oracle import CheckParams
from prefspace.schemas.reports import CatalogEntry, ClaimReport, SweepEntry

Outcome = Union[ClaimReport, Tuple[ClaimReport, List[SweepEntry]]]


@dataclass(frozen=True)
class ClaimSpec:
    claim: str
    anchor: str
    module: str
    n_min: int
    n_max: int
    description: str
    runner: Callable[[int, CheckParams], Outcome]

    def covers(self, n: int) -> bool:
        return self.n_min <= n <= self.n_max

    def run(self, n: int, params: CheckParams) -> Tuple[ClaimReport, Optional[List[SweepEntry]]]:
        outcome = self.runner(n, params)
        if isinstance(outcome, tuple):
            return outcome
        return outcome, None

    def entry(self) -> CatalogEntry:
        return CatalogEntry(
            claim=self.claim,
            anchor=self.anchor,
            module=self.module,
            n_min=self.n_min,
            n_max=self.n_max,
            description=self.description,
        )


# Order fixes claim_index, and with it each claim's random stream.
CLAIMS: Tuple[ClaimSpec, ...] = (
    ClaimSpec("theorem1", "Theorem 1", "final-topology", 2, 4,
              "The final topology on P is trivial.", claims.check_theorem1),
    ClaimSpec("theorem2", "Theorem 2", "final-topology", 3, 4,
              "B-sets form a basis of P*; P* is not Hausdorff and is path-connected.", claims.check_theorem2),
    ClaimSpec("theorem3", "Theorem 3", "final-topology", 2, 5,
              "P^s is discrete, Hausdorff and totally path-disconnected; B-sets form a basis.", claims.check_theorem3),
    ClaimSpec("prop1", "Proposition 1", "final-topology", 2, 4,
              "No Hausdorff family lies strictly between P^s and P.", claims.check_prop1),
    ClaimSpec("prop3_finite", "Proposition 3", "exogenous-topology", 2, 5,
              "For finite X no preference has an open indifference-class subset in its contour topology.",
              exogenous.check_prop3_finite),
    ClaimSpec("theorem4_sweep", "Theorem 4", "exogenous-topology", 1, 4,
              "Continuous locally strict preferences form a Hausdorff space, over every topology on X.",
              exogenous.theorem4_sweep),
    ClaimSpec("lemma_opensets", "Lemma (open sets)", "final-topology", 1, 4,
              "Open sets are the refinement-closed sets: oracle, criterion and Sierpinski indicator agree.",
              claims.run_lemma_opensets),
    ClaimSpec("lemma_locally_strict", "Lemma (locally strict)", "exogenous-topology", 2, 4,
              "Locally strict in the contour topology iff no indifference-class subset is open.",
              exogenous.check_lemma_locally_strict),
    ClaimSpec("box_image", "Lemma (F is open), boxes", "final-topology", 2, 5,
              "Images of open boxes match the two-case description.", claims.check_box_image),
    ClaimSpec("homotopy", "Lemma (paths in U*)", "utility-paths", 2, 6,
              "Three-step paths stay nonconstant; injective vectors admit no path between orders.",
              claims.check_homotopy),
    ClaimSpec("flatten", "Flattening sequences", "utility-paths", 2, 5,
              "Flattening sequences keep their preference and land in its closure.", claims.check_flattening),
    ClaimSpec("ces_limits", "CES limits", "econ-demo", 2, 2,
              "CES approaches Cobb-Douglas as sigma -> 1 and weighted Leontief as sigma -> 0.",
              econ.check_ces_limits),
    ClaimSpec("lemma_fopen", "Lemma (F is open)", "final-topology", 2, 4,
              "Monotone maps preserve F, and F sends open boxes to open sets.", claims.check_lemma_fopen),
    ClaimSpec("pairwise_intersection", "Corollary (pairwise B-sets)", "final-topology", 2, 4,
              "B(anchor, A) is the intersection of its pairwise B-sets.", claims.check_pairwise_intersection),
)

_BY_ID: Dict[str, ClaimSpec] = {c.claim: c for c in CLAIMS}


def claim_ids() -> List[str]:
    return [c.claim for c in CLAIMS]


def claim_index(claim: str) -> int:
    return claim_ids().index(get_claim(claim).claim)


def get_claim(claim: str) -> ClaimSpec:
    try:
        return _BY_ID[claim]
    except KeyError:
        raise UsageError(f"Unknown claim {claim!r}; known claims: {', '.join(claim_ids())}.")


def list_claims(module: Optional[str] = None) -> List[CatalogEntry]:
    return [c.entry() for c in CLAIMS if module is None or c.module == module]
