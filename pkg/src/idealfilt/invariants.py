"""Point invariants of a derivative-closed filtration.

The second half of the invariant pair attached to a support point: the
minimal order ratio

    mu = min over generators (f, a) of  ord_H(f) / a

along a pure generator system H at the point.  The minimum over the finite
generator list equals the infimum over the whole filtration, and its value
does not depend on which valid system H was used — both facts get dedicated
harnesses here (`check_lgs_independence` samples the latter).

`stratify` evaluates (sigma, mu) over a sample of points and tests upper
semi-continuity on user-declared neighborhood groups: the pair at a group
member must never lexicographically exceed the pair at the group's
designated limit point.  Zariski neighborhoods are not finitely samplable,
so the groups are witness declarations, not discovered structure.

`check_nsp` runs the nonsingularity screen: when mu is infinite up to the
window, the filtration should be generated by the system itself — every
generator's expansion coefficients a_B with |[B]| < a must vanish — and the
support should be the nonsingular locus cut out by the system's coordinates,
with constant sigma along it.  A nonzero low coefficient or a failing sample
point refutes the claim at this truncation.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import PreconditionError
from .filtration import Filtration, require_saturated
from .expansion import (OrdValue, check_associated, check_weakly_associated,
                        get_expander, ord_h_expansion)
from .leading import (LGS, compare_sigma, default_horizon, extract_lgs,
                      jump_degree, purify_at, sigma)


def mu_tilde(filt: Filtration, lgs: LGS) -> OrdValue:
    """Minimal order ratio at the system's point.

    Out-of-support points get Exact(0).  Each generator contributes
    ord_H(f)/a read off the expansion's constant term; a censored ord makes
    the minimum a lower bound unless an exact ratio undercuts it, and when
    every ratio is censored the result is infinite-up-to-the-window with the
    smallest censoring bound attached.
    """
    require_saturated(filt, "mu_tilde")
    loc = lgs.filt if lgs.filt is not None else filt.localize(lgs.point)
    origin = [loc.ring.field.zero] * loc.ring.nvars
    if not loc.in_support(origin):
        return OrdValue.exact(Fraction(0))
    exact_ratios = []
    censored_bounds = []
    for f, a in loc.pairs:
        ratio = ord_h_expansion(f, lgs).scaled(Fraction(1) / a)
        if ratio.is_exact:
            exact_ratios.append(ratio.value)
        else:
            censored_bounds.append(ratio.value)
    if not exact_ratios and not censored_bounds:
        return OrdValue.infinite()
    if not exact_ratios:
        return OrdValue.infinite(min(censored_bounds))
    best = min(exact_ratios)
    if censored_bounds and best > min(censored_bounds):
        return OrdValue.at_least(min(censored_bounds))
    return OrdValue.exact(best)


def level_numerator_product(pairs) -> int:
    """The denominator bound: mu's exact values times this land in Z.

    Levels are rationals p/q in lowest terms; the product of the numerators
    of the listed generating pairs bounds every denominator the minimum can
    produce.
    """
    return math.prod(Fraction(a).numerator for _, a in pairs)


# ---------------------------------------------------------------------------
# independence of the system choice

def _validate_candidate(filt: Filtration, lgs: LGS, reference: LGS) -> None:
    ring = lgs.ring
    if lgs.point != reference.point:
        raise PreconditionError("candidate systems sit at different points")
    if lgs.jumps != reference.jumps:
        raise PreconditionError("candidate systems disagree on the jump list")
    if not check_associated(lgs):
        raise PreconditionError(
            "candidate entry fails to open with its coordinate power")
    if not check_weakly_associated(lgs):
        raise PreconditionError("candidate system has a singular pure minor")
    loc = lgs.filt if lgs.filt is not None else filt.localize(lgs.point)
    for l, h in enumerate(lgs.entries_x()):
        q = jump_degree(ring.field, lgs.jumps[l])
        if not loc.membership(h, Fraction(q)):
            raise PreconditionError(
                f"candidate entry {l} is not a visible level-{q} element")


def check_lgs_independence(filt: Filtration, candidates: list[LGS]) -> dict:
    """mu computed from every candidate system must agree, censoring class
    included.  Candidates are validated first; an invalid one is the
    caller's error, not a refutation."""
    require_saturated(filt, "check_lgs_independence")
    if not candidates:
        raise PreconditionError("at least one candidate system is required")
    for lgs in candidates:
        _validate_candidate(filt, lgs, candidates[0])
    values = [mu_tilde(filt, lgs) for lgs in candidates]
    ok = all(v == values[0] for v in values)
    return {"pass": ok,
            "mu_values": [v.to_json() for v in values],
            "candidates": len(candidates)}


# ---------------------------------------------------------------------------
# stratification and semi-continuity

def _row_pair_exceeds(member: dict, limit: dict) -> bool:
    """Certified lexicographic violation: member pair > limit pair."""
    c = compare_sigma(member["sigma"], limit["sigma"])
    if c != 0:
        return c > 0
    return member["mu"].certainly_greater(limit["mu"])


def stratify(filt: Filtration, points, E: int | None = None,
             groups=None) -> dict:
    """Rows of (point, in_support, sigma, mu) plus the semi-continuity and
    purification evidence.

    At every point of sample-maximal sigma the extracted system is carried
    to the other maximal points by purify_at and mu is recomputed from the
    corrected system; a disagreement with the locally extracted value would
    expose a dependence on the system and is reported as a witness.
    """
    require_saturated(filt, "stratify")
    ring = filt.ring
    F = ring.field
    if E is None:
        E = default_horizon(F, ring.trunc)
    rows = []
    systems: dict[int, LGS] = {}
    for idx, Q in enumerate(points):
        Q = list(Q)
        if not filt.in_support(Q):
            rows.append({"point": Q, "in_support": False, "sigma": None,
                         "mu": OrdValue.exact(Fraction(0))})
            continue
        lgs = extract_lgs(filt, Q, E)
        systems[idx] = lgs
        rows.append({"point": Q, "in_support": True, "sigma": lgs.sigma,
                     "mu": mu_tilde(filt, lgs)})

    witnesses = []
    purification = []
    support_idxs = [i for i, r in enumerate(rows) if r["in_support"]]
    if support_idxs:
        max_sig = rows[support_idxs[0]]["sigma"]
        for i in support_idxs[1:]:
            if compare_sigma(rows[i]["sigma"], max_sig) > 0:
                max_sig = rows[i]["sigma"]
        max_idxs = [i for i in support_idxs
                    if compare_sigma(rows[i]["sigma"], max_sig) == 0]
        for i in max_idxs:
            for j in max_idxs:
                if j == i:
                    continue
                carried = _carry_system(filt, systems[i], rows[j]["point"])
                mu_there = mu_tilde(filt, carried)
                agree = mu_there == rows[j]["mu"]
                purification.append({"from": i, "at": j,
                                     "mu": mu_there.to_json(),
                                     "agrees": agree})
                if not agree:
                    witnesses.append({"kind": "mu_mismatch", "from": i,
                                      "at": j,
                                      "carried": mu_there.to_json(),
                                      "local": rows[j]["mu"].to_json()})

    for group in groups or []:
        limit = rows[group["limit"]]
        for j in group["members"]:
            if j == group["limit"]:
                continue
            if _row_pair_exceeds(rows[j], limit):
                witnesses.append({"kind": "order_violation",
                                  "limit": group["limit"], "member": j})

    return {"rows": rows,
            "semicontinuity": {"pass": not witnesses, "witnesses": witnesses},
            "purification": purification,
            "horizon": E, "truncation": ring.trunc}


def _carry_system(filt: Filtration, lgs: LGS, Q) -> LGS:
    """Purify lgs at Q and repackage the corrected entries as a system at Q."""
    ring = lgs.ring
    F = ring.field
    purified = purify_at(lgs, Q)
    yQ = lgs.y_point(Q)
    entries = []
    for l, h in enumerate(purified.entries_y):
        q = jump_degree(F, lgs.jumps[l])
        moved = ring.translate_to_point(h, yQ)
        lead_mono = tuple(q if t == l else 0 for t in range(ring.nvars))
        lead = ring.coefficient(ring.graded_part(moved, q), lead_mono)
        entries.append(ring.scale(F.inv(lead), moved))
    return LGS.from_entries(ring, entries, list(lgs.jumps),
                            filt=filt.localize(Q), C=[list(r) for r in lgs.C],
                            point=list(Q))


# ---------------------------------------------------------------------------
# nonsingularity screen

def check_nsp(filt: Filtration, point=None, E: int | None = None,
              samples=None) -> dict:
    """Screen the point for the generated-by-its-own-system situation.

    mu finite: not applicable.  mu infinite up to the window: expand every
    generator of the localized filtration along the system and demand that
    all coefficients a_B with |[B]| < a vanish; the support should then be
    the locus cut out by the system's coordinate forms, which user-supplied
    samples probe (support membership and sigma equality at each).  Any
    nonzero low coefficient or failing sample refutes the screen, with the
    witness recorded.
    """
    require_saturated(filt, "check_nsp")
    ring = filt.ring
    F = ring.field
    pt = [F.zero] * ring.nvars if point is None else list(point)
    if E is None:
        E = default_horizon(F, ring.trunc)
    report: dict = {"point": pt, "horizon": E, "truncation": ring.trunc}
    if not filt.in_support(pt):
        report.update({"verdict": "not-applicable",
                       "mu": OrdValue.exact(Fraction(0)).to_json(),
                       "reason": "point is outside the support"})
        return report

    lgs = extract_lgs(filt, pt, E)
    mu = mu_tilde(filt, lgs)
    report.update({"mu": mu.to_json(), "sigma": list(lgs.sigma),
                   "entries": lgs.describe()})
    if mu.kind != OrdValue.INFINITE:
        report["verdict"] = "not-applicable"
        report["reason"] = "the minimal order ratio is visibly finite"
        return report

    exp = get_expander(lgs)
    report["center"] = _center_forms(lgs)
    report["normal_form"] = _attempt_normal_form(lgs)

    step1 = []
    for f, a in lgs.filt.pairs:
        for B, aB in sorted(exp.expand(lgs.to_y(f)).items()):
            if aB and Fraction(exp.weighted(B)) < a:
                step1.append({"generator": ring.to_text(f), "level": str(a),
                              "B": list(B), "a_B": ring.to_text(aB)})
    report["low_coefficients"] = step1

    sample_rows = []
    samples_ok = True
    for Q in samples or []:
        Q = list(Q)
        supported = filt.in_support(Q)
        sig = sigma(filt, E, Q)
        match = supported and compare_sigma(sig, lgs.sigma) == 0
        samples_ok = samples_ok and match
        sample_rows.append({"point": Q, "in_support": supported,
                            "sigma": None if sig is None else list(sig),
                            "sigma_matches": match})
    report["samples"] = sample_rows

    report["verdict"] = "applicable" if not step1 and samples_ok else "refuted"
    return report


def _center_forms(lgs: LGS) -> list[str]:
    """The system's coordinate forms as affine functions of the ambient frame."""
    ring = lgs.ring
    F = ring.field
    out = []
    for l in range(lgs.size):
        form = {}
        shift = F.zero
        for j in range(ring.nvars):
            c = lgs.C[l][j]
            if c == F.zero:
                continue
            e = tuple(1 if t == j else 0 for t in range(ring.nvars))
            form[e] = c
            shift = F.add(shift, F.mul(c, lgs.point[j]))
        if shift != F.zero:
            form[(0,) * ring.nvars] = F.neg(shift)
        out.append(ring.to_text(form))
    return out


def _attempt_normal_form(lgs: LGS) -> list[dict]:
    """Reduce each entry against the earlier ones and report how close the
    constant coefficient comes to the bare coordinate power.  Recorded as
    evidence only; the verdict never depends on it."""
    ring = lgs.ring
    out = []
    for l in range(lgs.size):
        if l == 0:
            reduced = lgs.entries_y[l]
        else:
            sub = LGS.from_entries(ring, list(lgs.entries_y[:l]),
                                   list(lgs.jumps[:l]), filt=lgs.filt,
                                   C=[list(r) for r in lgs.C],
                                   point=list(lgs.point))
            reduced = get_expander(sub).expand(lgs.entries_y[l])[(0,) * l]
        q = jump_degree(ring.field, lgs.jumps[l])
        pure = ring.monomial(tuple(q if t == l else 0
                                   for t in range(ring.nvars)))
        out.append({"entry": l, "normal_form": ring.to_text(reduced),
                    "exact_power": reduced == pure})
    return out
