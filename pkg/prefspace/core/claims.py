"""
prefspace/core/claims.py — Claim checkers for the final topology and the utility-path constructions.

Each checker returns a ClaimReport. The verdict says whether the claim holds at
this size; ``invariants`` says whether the tool itself stayed consistent
(oracle agreement, witnesses re-validated, constructions behaving as built).
"""
import itertools
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from prefspace.core.errors import DomainError, ScopeError
from prefspace.core.final import (
    Box,
    PrefSpace,
    basis_element,
    basis_family,
    final_topology,
    image_of_box,
    lemma_box_prediction,
    pairwise_intersection_identity,
    pattern_feasible_lp,
    realize_in_box,
    refinement_closed,
)
from prefspace.core.oracle import LEVEL_GRID_MAX_N, CheckParams, openness_oracle_numeric, reaches, validate_open
from prefspace.core.order import (
    Ambient,
    Family,
    MonotoneMap,
    UtilityVector,
    WeakOrder,
    apply_monotone,
    realize,
    represent,
    tied_pairs,
)
from prefspace.core.paths import (
    flatten_global,
    flatten_middle,
    prop1_sequence,
    prop3_case_sequence,
    straight_line,
    strict_crossing,
    three_step_path,
    verify_sequence,
)
from prefspace.core.topology import (
    connectivity,
    is_basis,
    is_continuous_map,
    members,
    separation_axioms,
    sierpinski_space,
)
from prefspace.schemas.reports import ClaimReport

logger = logging.getLogger(__name__)

EXHAUSTIVE_SUBSETS_MAX = 13      # families up to |P| at n=3 are scanned subset by subset
HOMOTOPY_PAIRS = 1000
PATH_SAMPLES = 101
SEQUENCE_DEPTH = 20        # covers every index up to 2**10 and converges below SEQUENCE_TOLERANCE
SEQUENCE_TOLERANCE = 1e-5


def _labels(orders: Iterable[WeakOrder]) -> List[str]:
    return [p.label() for p in orders]


def _ambient_of(space: PrefSpace) -> Ambient:
    try:
        return Family(space.name).ambient
    except ValueError as e:
        raise DomainError(f"Space {space.name!r} has no ambient utility subspace.") from e


def _require_n(n: int, lowest: int, claim: str) -> None:
    if n < lowest:
        raise ScopeError(f"{claim} needs at least {lowest} alternatives, got n={n}.")


def _random_up_closed(space: PrefSpace, rng) -> int:
    seeds = rng.choice(space.size, size=int(rng.integers(1, 4)), replace=False)
    return space.preorder.up_closure(int(i) for i in seeds)


def _random_subset(space: PrefSpace, rng) -> int:
    bits = rng.integers(0, 2, size=space.size)
    return sum(1 << i for i, b in enumerate(bits) if b)


# ── Open sets: criterion, oracle and Sierpinski indicator ─────────────────────

def _opensets_triple(mask: int, space: PrefSpace, ambient: Ambient, params: CheckParams):
    criterion = space.preorder.is_open(mask)
    indicator = [1 if mask >> i & 1 else 0 for i in range(space.size)]
    continuous = is_continuous_map(indicator, space.preorder, sierpinski_space())
    verdict = openness_oracle_numeric(space.orders(mask), ambient, space.n, **params.oracle_kwargs)
    return criterion, verdict.numeric_open, continuous, verdict


def check_lemma_opensets(orders: Iterable[WeakOrder], space: PrefSpace, params: CheckParams) -> ClaimReport:
    """Refinement closure, numeric openness of the preimage and continuity of the indicator into Sierpinski agree."""
    ambient = _ambient_of(space)
    mask = space.mask(orders)
    criterion, numeric, continuous, verdict = _opensets_triple(mask, space, ambient, params)
    agree = criterion == numeric == continuous
    witness = {
        "set": _labels(space.orders(mask)),
        "criterion": criterion,
        "numeric": numeric,
        "indicator_continuous": continuous,
        "probe": verdict.witness.as_witness() if verdict.witness else None,
    }
    return ClaimReport.build(
        "lemma_opensets",
        space.n,
        space.name,
        agree,
        params,
        subverdicts={"open": criterion and numeric and continuous, "agree": agree},
        witness=witness,
        invariants={"oracle_agrees": verdict.agrees},
        disagreements=0 if agree else 1,
        probes=verdict.probes,
    )


def run_lemma_opensets(n: int, params: CheckParams) -> ClaimReport:
    """Three-way agreement over every subset (small families) or seeded random subsets."""
    rng = params.rng(n)
    families = [Family.P, Family.P_STRICT] + ([Family.P_STAR] if n >= 2 else [])
    disagreements = 0
    probes = 0
    witness = None
    counts: Dict[str, Dict[str, int]] = {}
    for family in families:
        space = final_topology(family, n)
        ambient = family.ambient
        if space.size <= EXHAUSTIVE_SUBSETS_MAX:
            masks: Iterable[int] = range(1 << space.size)
            mode = "exhaustive"
        else:
            half = params.random_subsets // 2
            masks = [_random_up_closed(space, rng) for _ in range(params.random_subsets - half)]
            masks += [_random_subset(space, rng) for _ in range(half)]
            mode = "sampled"
        tested = opened = 0
        for mask in masks:
            criterion, numeric, continuous, verdict = _opensets_triple(mask, space, ambient, params)
            tested += 1
            opened += criterion
            probes += verdict.probes
            if not criterion == numeric == continuous:
                disagreements += 1
                if witness is None:
                    witness = {
                        "family": family.value,
                        "set": _labels(space.orders(mask)),
                        "criterion": criterion,
                        "numeric": numeric,
                        "indicator_continuous": continuous,
                        "probe": verdict.witness.as_witness() if verdict.witness else None,
                    }
        counts[family.value] = {"tested": tested, "open": opened, "mode": mode}
    if disagreements:
        logger.warning(f"lemma_opensets at n={n}: {disagreements} disagreements")
    return ClaimReport.build(
        "lemma_opensets",
        n,
        "P,P*,P^s",
        disagreements == 0,
        params,
        subverdicts=counts,
        witness=witness,
        invariants={"zero_disagreements": disagreements == 0},
        disagreements=disagreements,
        probes=probes,
    )


# ── Triviality of the final topology on P ────────────────────────────────────────

def check_theorem1(n: int, params: CheckParams) -> ClaimReport:
    """Is the only open sets of P the empty set and P itself?"""
    _require_n(n, 2, "theorem1")
    space = final_topology(Family.P, n)
    full = space.preorder.full
    indifference = space.index[WeakOrder.total_indifference(n)]

    candidates = [i for i in range(space.size) if space.preorder.up[i] != full]
    witness_mask = min((space.preorder.up[i] for i in candidates), key=lambda m: (bin(m).count("1"), m), default=None)

    rng = params.rng(n)
    if space.size <= EXHAUSTIVE_SUBSETS_MAX:
        proper_open = sum(1 for m in range(1, full) if space.preorder.is_open(m))
        scan = {"mode": "exhaustive", "proper_open_sets": proper_open}
    else:
        sampled = {_random_up_closed(space, rng) for _ in range(params.random_subsets)}
        scan = {"mode": "sampled", "proper_open_sets": sum(1 for m in sampled if 0 < m < full)}

    glue = all(space.preorder.closure(1 << i) >> indifference & 1 for i in range(space.size))
    invariants = {"indifference_in_every_closure": bool(glue)}
    witness = None
    if witness_mask is not None:
        orders = space.orders(witness_mask)
        validated = validate_open(orders, Ambient.U, n, **params.oracle_kwargs)
        witness = {"open_set": _labels(orders)}
        invariants["witness_oracle_validated"] = validated
        logger.warning(f"theorem1 at n={n}: proper open set {witness['open_set']}")
    return ClaimReport.build(
        "theorem1",
        n,
        "P",
        witness_mask is None,
        params,
        subverdicts={"scan": scan, "indifference_in_every_closure": bool(glue)},
        witness=witness,
        invariants=invariants,
    )


# ── Basis, separation and connectivity of P* ─────────────────────────────────────────────────────────────

def _basis_check(space: PrefSpace, ambient: Ambient, params: CheckParams) -> Tuple[dict, Optional[dict], Dict[str, bool]]:
    elements = basis_family(space)
    invariants = {"basis_elements_open": all(space.preorder.is_open(e.members) for e in elements)}
    check = is_basis([e.members for e in elements], space.preorder)
    sub = {"ok": check.ok, "elements": len(elements)}
    witness = None
    if not check.ok:
        mask, point = check.witness
        orders = space.orders(mask)
        witness = {"open_set": _labels(orders), "point": space.family[point].label(), "reason": check.reason}
        invariants["basis_witness_oracle_validated"] = validate_open(orders, ambient, space.n, **params.oracle_kwargs)
    return sub, witness, invariants


def check_theorem2(n: int, params: CheckParams) -> ClaimReport:
    """B-sets form a basis of P*, P* is not Hausdorff, P* is path-connected."""
    _require_n(n, 3, "theorem2")
    space = final_topology(Family.P_STAR, n)
    basis, basis_witness, invariants = _basis_check(space, Ambient.U_STAR, params)

    separation = separation_axioms(space.preorder)
    fine = WeakOrder.linear(range(n))
    coarse = WeakOrder(n, ((0,), (1, 2)) + tuple((x,) for x in range(3, n)))
    in_closure = bool(space.preorder.closure(1 << space.index[fine]) >> space.index[coarse] & 1)
    probe = reaches(coarse, fine, Ambient.U_STAR, **params.oracle_kwargs)
    invariants["non_t1_oracle_validated"] = probe is not None and in_closure

    conn = connectivity(space.preorder)
    subverdicts = {
        "basis": basis,
        "hausdorff": {"t0": separation.t0, "t1": separation.t1, "t2": separation.t2,
                      "mechanism": {"coarse": coarse.label(), "fine": fine.label(), "in_closure": in_closure}},
        "connectivity": {"connected": conn.connected, "path_connected": conn.path_connected, "components": len(conn.components)},
    }
    if n == 3:
        anchor = WeakOrder.parse("0>1~2")
        critical = space.neighbourhood(anchor)
        mask = space.mask(critical)
        covered = any(
            e.members >> space.index[anchor] & 1 and e.members & ~mask == 0 for e in basis_family(space)
        )
        subverdicts["critical_instance"] = {"set": _labels(critical), "open": space.preorder.is_open(mask), "covered_by_basis": covered}

    confirmed = basis["ok"] and not separation.t2 and conn.path_connected
    witness = None
    if not confirmed:
        witness = {
            "basis": basis_witness,
            "hausdorff": None if not separation.t2 else "P* is discrete",
            "connectivity": None if conn.path_connected else [_labels(space.orders(sum(1 << i for i in c))) for c in conn.components[:2]],
        }
        logger.warning(f"theorem2 at n={n} refuted: {witness}")
    return ClaimReport.build("theorem2", n, "P*", confirmed, params, subverdicts, witness, invariants)


# ── Discreteness of P^s ────────────────────────────────────────────────────────────

def check_theorem3(n: int, params: CheckParams) -> ClaimReport:
    """P^s is discrete, Hausdorff, totally path-disconnected, and the B-sets form a basis."""
    _require_n(n, 2, "theorem3")
    space = final_topology(Family.P_STRICT, n)
    discrete = all(space.preorder.up[i] == 1 << i for i in range(space.size))
    singletons_open = all(validate_open([p], Ambient.U_STRICT, n, **params.oracle_kwargs) for p in space.family)
    separation = separation_axioms(space.preorder)
    conn = connectivity(space.preorder)
    basis, basis_witness, invariants = _basis_check(space, Ambient.U_STRICT, params)
    invariants["singletons_open_numerically"] = singletons_open
    invariants["separation_monotone"] = (not separation.t2 or separation.t1) and (not separation.t1 or separation.t0)

    confirmed = discrete and separation.t2 and conn.totally_path_disconnected and basis["ok"]
    witness = None
    if not confirmed:
        pair = next(((i, j) for i in range(space.size) for j in members(space.preorder.up[i]) if j != i), None)
        witness = {"basis": basis_witness}
        if pair is not None:
            coarse, fine = space.family[pair[0]], space.family[pair[1]]
            probe = reaches(coarse, fine, Ambient.U_STRICT, **params.oracle_kwargs)
            witness["comparable"] = {"coarse": coarse.label(), "fine": fine.label()}
            invariants["comparable_oracle_validated"] = probe is not None
    return ClaimReport.build(
        "theorem3",
        n,
        "P^s",
        confirmed,
        params,
        subverdicts={
            "points": space.size,
            "discrete": discrete,
            "singletons_open": singletons_open,
            "separation": {"t0": separation.t0, "t1": separation.t1, "t2": separation.t2},
            "components": len(conn.components),
            "totally_path_disconnected": conn.totally_path_disconnected,
            "basis": basis,
        },
        witness=witness,
        invariants=invariants,
    )


# ── No Hausdorff family strictly between P^s and P ────────────

def check_prop1(n: int, params: CheckParams) -> ClaimReport:
    """Adding any non-strict preference to P^s breaks T1."""
    _require_n(n, 2, "prop1")
    space = final_topology(Family.P, n)
    strict = [p for p in space.family if p.is_strict]
    evidence = []
    survivors = []
    sequences_ok = True
    numeric_ok = True
    for p in space.family:
        if p.is_strict:
            continue
        sub = space.restrict(strict + [p], name="P^s+1")
        fails_t1 = not separation_axioms(sub.preorder).t1
        reached = next(
            (q for q in sub.neighbourhood(p) if q != p and reaches(p, q, Ambient.U, **params.oracle_kwargs) is not None),
            None,
        )
        numeric_ok &= (reached is not None) == fails_t1
        x, y = tied_pairs(p)[0]
        seq = prop1_sequence(realize(p), x, y)
        check = verify_sequence(seq, SEQUENCE_TOLERANCE, SEQUENCE_DEPTH)
        sequences_ok &= check.passed
        evidence.append(
            {
                "preference": p.label(),
                "fails_t1": fails_t1,
                "strict_refinement_in_closure": reached.label() if reached else None,
                "sequence": {"pair": [x, y], "order": seq.promised_order.label(), "passed": check.passed,
                             "deviation": check.max_deviation},
            }
        )
        if not fails_t1:
            survivors.append(p)
    witness = None
    if survivors:
        witness = {"keeps_t1": _labels(survivors)}
    return ClaimReport.build(
        "prop1",
        n,
        "P",
        not survivors,
        params,
        subverdicts={"non_strict_checked": len(evidence), "evidence": evidence},
        witness=witness,
        invariants={"sequences_verified": sequences_ok, "closure_oracle_validated": numeric_ok},
    )


# ── Open-map content of F: group action and box images ───────────────────────

def _random_in_ambient(n: int, ambient: Ambient, rng) -> UtilityVector:
    if ambient is Ambient.U_STRICT:
        return UtilityVector(tuple(int(v) for v in rng.permutation(n) * 2 - n))
    while True:
        u = UtilityVector(tuple(int(v) for v in rng.integers(-3, 4, size=n)))
        if u.in_ambient(ambient):
            return u


def check_lemma_fopen(n: int, params: CheckParams) -> ClaimReport:
    """Monotone maps fix the represented preference, and F sends open boxes to open sets."""
    _require_n(n, 2, "lemma_fopen")
    rng = params.rng(n)
    failures: List[dict] = []
    stats: Dict[str, Dict[str, int]] = {}
    validated = True
    for ambient in (Ambient.U, Ambient.U_STAR, Ambient.U_STRICT):
        family = ambient.family
        actions = boxes = 0
        for _ in range(params.random_subsets):
            u = _random_in_ambient(n, ambient, rng)
            f = MonotoneMap.random(u.values, rng)
            moved = apply_monotone(f, u)
            back = apply_monotone(f.inverse(), moved)
            actions += 1
            if represent(moved) != represent(u) or back != u or not moved.in_ambient(ambient):
                failures.append({"ambient": ambient.value, "u": list(u.as_floats()), "kind": "group_action"})
        for k in range(max(params.random_subsets // 5, 1)):
            box = Box.random(n, rng)
            image = image_of_box(box, n, ambient)
            boxes += 1
            if not refinement_closed(image, family):
                failures.append({"ambient": ambient.value, "box": _box_json(box), "kind": "open_map"})
            if k < 10 and image:
                validated &= validate_open(image, ambient, n, **params.oracle_kwargs)
        stats[ambient.value] = {"group_actions": actions, "boxes": boxes}
    return ClaimReport.build(
        "lemma_fopen",
        n,
        "P,P*,P^s",
        not failures,
        params,
        subverdicts=stats,
        witness=failures[0] if failures else None,
        invariants={"images_open_numerically": validated},
    )


def _box_json(box: Box) -> List[Optional[List[str]]]:
    return [None if iv is None else [str(iv[0]), str(iv[1])] for iv in box.intervals]


def check_box_image(n: int, params: CheckParams) -> ClaimReport:
    """Compare exact box images with the two-case description of the open-map argument."""
    _require_n(n, 2, "box_image")
    rng = params.rng(n)
    ambient = Ambient.U_STAR
    mismatches = 0
    witness = None
    realized_ok = True
    lp_ok = True
    lp_budget = 25 if n <= 4 else 10
    for k in range(params.random_subsets):
        box = Box.random(n, rng)
        image = image_of_box(box, n, ambient)
        predicted = lemma_box_prediction(box, n, ambient)
        for p in image:
            u = realize_in_box(p, box)
            realized_ok &= u is not None and box.contains(u) and represent(u) == p
        if k < lp_budget:
            for p in predicted | image:
                lp_ok &= pattern_feasible_lp(p, box) == (p in image)
        if image != predicted:
            mismatches += 1
            if witness is None:
                extra = sorted(predicted - image, key=lambda q: q.ranks)
                witness = {
                    "box": _box_json(box),
                    "image": _labels(sorted(image, key=lambda q: q.ranks)),
                    "predicted_only": _labels(extra),
                    "lp_confirms_infeasible": all(not pattern_feasible_lp(q, box) for q in extra),
                    "missing_from_prediction": _labels(sorted(image - predicted, key=lambda q: q.ranks)),
                }
    invariants = {"images_realized_exactly": realized_ok, "sweep_matches_slack_program": lp_ok}
    if witness is not None:
        invariants["witness_lp_validated"] = witness["lp_confirms_infeasible"]
    return ClaimReport.build(
        "box_image",
        n,
        "P*",
        mismatches == 0,
        params,
        subverdicts={"boxes": params.random_subsets, "mismatches": mismatches},
        witness=witness,
        invariants=invariants,
    )


# ── Basis corollary ───────────────────────────────────────────────────────────

def check_pairwise_intersection(n: int, params: CheckParams) -> ClaimReport:
    """B(anchor, A) is the intersection of the pairwise B-sets, for every anchor and strictly ranked A."""
    _require_n(n, 2, "pairwise_intersection")
    checked = 0
    witness = None
    for family in (Family.P_STAR, Family.P_STRICT):
        space = final_topology(family, n)
        for anchor in space.family:
            for size in range(2, n + 1):
                for subset in itertools.combinations(range(n), size):
                    if any(anchor.indifferent(x, y) for x, y in itertools.combinations(subset, 2)):
                        continue
                    checked += 1
                    if witness is None and not pairwise_intersection_identity(anchor, subset, space):
                        whole = basis_element(anchor, subset, space)
                        witness = {"family": family.value, "anchor": anchor.label(), "subset": list(subset),
                                   "members": _labels(whole.orders(space))}
    return ClaimReport.build(
        "pairwise_intersection", n, "P*,P^s", witness is None, params, {"checked": checked}, witness
    )


# ── Paths and sequences ───────────────────────────────────────────────────────

def _nonconstant_vector(n: int, rng) -> UtilityVector:
    while True:
        u = UtilityVector(tuple(Fraction(int(v), int(d)) for v, d in zip(rng.integers(-5, 6, size=n), rng.integers(1, 4, size=n))))
        if not u.is_constant:
            return u


def check_homotopy(n: int, params: CheckParams) -> ClaimReport:
    """Three-step paths stay nonconstant; at n=2 the nonconstant vectors split in two; injective vectors admit no path."""
    _require_n(n, 2, "homotopy")
    rng = params.rng(n)
    subverdicts: Dict[str, object] = {}
    failures: List[dict] = []

    if n == 2:
        star = final_topology(Family.P_STAR, 2)
        conn = connectivity(star.preorder)
        crossing = strict_crossing(straight_line(UtilityVector((1, 0)), UtilityVector((0, 1))))
        subverdicts["two_alternatives"] = {"components": len(conn.components), "line_hits_constant": crossing is not None}
        if conn.connected or crossing is None:
            failures.append({"kind": "two_alternatives", "components": len(conn.components)})
    else:
        grid = [Fraction(k, PATH_SAMPLES - 1) for k in range(PATH_SAMPLES)]
        for _ in range(HOMOTOPY_PAIRS):
            u, v = _nonconstant_vector(n, rng), _nonconstant_vector(n, rng)
            path = three_step_path(u, v)
            ok = path(0) == u and path(1) == v and all(not path(s).is_constant for s in grid)
            if path.anchors is not None:
                ok &= path(Fraction(1, 3)) == path.waypoints[1] and path(Fraction(2, 3)) == path.waypoints[2]
            if not ok:
                failures.append({"kind": "three_step", "u": [str(a) for a in u], "v": [str(b) for b in v]})
                break
        subverdicts["pairs"] = HOMOTOPY_PAIRS

    disconnections = 0
    for _ in range(100):
        a, b = rng.permutation(n), rng.permutation(n)
        u, v = UtilityVector(tuple(int(x) for x in a)), UtilityVector(tuple(int(x) for x in b))
        if u == v:
            continue
        lines = [straight_line(u, v)] + ([three_step_path(u, v)] if n >= 3 else [])
        for line in lines:
            if strict_crossing(line) is None:
                failures.append({"kind": "injective_path", "u": list(u.values), "v": list(v.values)})
        disconnections += 1
    subverdicts["injective_pairs"] = disconnections
    return ClaimReport.build("homotopy", n, "U*", not failures, params, subverdicts, failures[0] if failures else None)


def check_flattening(n: int, params: CheckParams) -> ClaimReport:
    """Every flattening sequence keeps its preference and lands on a coarser one inside its closure."""
    _require_n(n, 2, "flatten")
    p_space = final_topology(Family.P, n)
    failures: List[dict] = []
    counts = {"flatten_global": 0, "flatten_middle": 0, "prop3": 0, "boundary_flags": 0}
    numeric_ok = True
    seen_pairs = set()

    def record(seq, p: WeakOrder, ambient: Ambient) -> None:
        nonlocal numeric_ok
        check = verify_sequence(seq, SEQUENCE_TOLERANCE, SEQUENCE_DEPTH)
        limit = represent(seq.declared_limit)
        in_closure = bool(p_space.preorder.closure(1 << p_space.index[p]) >> p_space.index[limit] & 1)
        if not (check.passed and in_closure):
            failures.append({"sequence": seq.name, "start": p.label(), "limit": limit.label(),
                             "deviation": check.max_deviation, "in_closure": in_closure})
        if n <= LEVEL_GRID_MAX_N and (limit, p) not in seen_pairs:
            seen_pairs.add((limit, p))
            numeric_ok &= limit == p or reaches(limit, p, ambient, **params.oracle_kwargs) is not None
        counts["boundary_flags"] += bool(check.flags)

    for p in p_space.family:
        if p.is_total_indifference:
            continue
        u = realize(p)
        record(flatten_global(u), p, Ambient.U)
        counts["flatten_global"] += 1
        for x, y in p.strict_pairs():
            if p.interval(x, y):
                record(flatten_middle(u, x, y), p, Ambient.U_STAR)
                counts["flatten_middle"] += 1
        for x in range(n):
            if not (p.is_maximal(x) or p.is_minimal(x)):
                for case in ("lower", "upper"):
                    record(prop3_case_sequence(u, x, case), p, Ambient.U_STAR)
                    counts["prop3"] += 1
    return ClaimReport.build(
        "flatten",
        n,
        "P",
        not failures,
        params,
        subverdicts=counts,
        witness=failures[0] if failures else None,
        invariants={"limits_reached_numerically": numeric_ok},
    )
