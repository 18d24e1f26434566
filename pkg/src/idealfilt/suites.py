"""Seeded random corpora for the verification suites.

Everything here is deterministic in the seed: instances (emitted already
derivative-closed), filtration elements drawn as bounded products of the
generators, and alternative pure generator systems built from an extracted
one by moves that provably preserve validity — multiplying an entry by a
unit, and mixing a same-jump block through an invertible matrix while
transporting the coordinate frame along the matching root matrix.

Generated instances always keep the origin in the support: each generator
is built around a leading monomial whose degree is at least its level, and
derivative closure only lowers orders in step with levels.

Truncation defaults shrink with dimension (12 / 9 / 5 for d = 2 / 3 / 4+) to
keep the slice linear algebra inside the acceptance time budgets.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import PreconditionError
from .fields import make_field
from .filtration import Filtration, d_saturate, generate
from .instances import instance_to_data
from .jetring import JetRing
from .leading import LGS, extract_lgs, jump_degree
from .linalg import invert_matrix, mat_mul, matrix_rank

_NAMES = ("x", "y", "z", "w", "v", "t")


def rng_for(seed, tag: str) -> random.Random:
    """Independent deterministic stream per (seed, tag)."""
    return random.Random(f"{seed}:{tag}")


def default_truncation(d: int) -> int:
    if d <= 2:
        return 12
    if d == 3:
        return 9
    return 5


def random_setup(rng: random.Random, p: int, d: int, n_gens: int,
                 max_deg: int, max_level: int, trunc: int | None = None):
    """A field, ring and generator list with the origin in the support."""
    if trunc is None:
        trunc = default_truncation(d)
    field = make_field(p)
    ring = JetRing(field, list(_NAMES[:d]), trunc)
    pairs = []
    if max_level > 0:
        for _ in range(n_gens):
            pairs.append(_random_generator(rng, ring, max_deg, max_level))
    return field, ring, pairs


def _random_generator(rng: random.Random, ring: JetRing, max_deg: int,
                      max_level: int):
    F = ring.field
    deg_cap = min(max_deg, ring.trunc)
    ord0 = rng.randint(1, deg_cap)
    den = rng.choice((1, 1, 1, 2, 3))
    num = rng.randint(den, max(den, min(ord0, max_level) * den))
    level = Fraction(num, den)
    lead = rng.choice(ring.monomials_of_degree(ord0))
    coeff = F.zero
    while coeff == F.zero:
        coeff = F.random(rng)
    f = ring.monomial(lead, coeff)
    if ord0 < deg_cap:
        tail = ring.random_poly(rng, deg_cap, rng.randint(0, 3),
                                min_deg=ord0 + 1)
        f = ring.add(f, tail)
    return f, level


def random_instance_data(p: int, d: int, n_gens: int, max_deg: int,
                         max_level: int, seed) -> dict:
    """A reproducible instance file body, emitted derivative-closed."""
    rng = rng_for(seed, "instance")
    field, ring, pairs = random_setup(rng, p, d, n_gens, max_deg, max_level)
    sat = d_saturate(generate(ring, pairs))
    origin = [field.zero] * d
    return instance_to_data(field, ring, sat.pairs, seed=seed, points=[origin])


def instance_stream(seed, count: int, chars=(2, 3, 5), dims=(2, 3),
                    n_gens=(1, 2), max_deg: int = 5, max_level: int = 3):
    """Yield (field, ring, raw pairs, saturated filtration) tuples."""
    rng = rng_for(seed, "stream")
    for _ in range(count):
        p = rng.choice(chars)
        d = rng.choice(dims)
        n = rng.randint(*n_gens)
        field, ring, pairs = random_setup(rng, p, d, n, max_deg, max_level)
        yield field, ring, pairs, d_saturate(generate(ring, pairs))


def filtration_elements(filt: Filtration, rng: random.Random, count: int,
                        max_factors: int = 3):
    """(f, a) pairs with f a bounded product of generators, visibly of
    level a = the sum of the factors' levels; occasionally stirred by a
    unit so the element is not itself a bare product."""
    ring = filt.ring
    pairs = filt.pairs
    out = []
    if not pairs:
        return out
    attempts = 0
    while len(out) < count and attempts < 40 * count:
        attempts += 1
        k = rng.randint(1, max_factors)
        f = ring.one()
        a = Fraction(0)
        for _ in range(k):
            g, lvl = pairs[rng.randrange(len(pairs))]
            f = ring.mul(f, g)
            a += lvl
        if not f:
            continue
        if rng.random() < 0.5:
            unit = ring.add(ring.one(), ring.random_poly(rng, 2, 2, min_deg=1))
            f = ring.mul(f, unit)
        if f:
            out.append((f, a))
    return out


def random_jets(ring: JetRing, rng: random.Random, count: int,
                max_deg: int | None = None, n_terms: int = 6):
    cap = ring.trunc if max_deg is None else max_deg
    return [ring.random_poly(rng, cap, rng.randint(1, n_terms))
            for _ in range(count)]


# ---------------------------------------------------------------------------
# alternative pure generator systems

def candidate_systems(lgs: LGS, rng: random.Random, count: int = 3) -> list[LGS]:
    """The extracted system plus validity-preserving variants of it."""
    out = [lgs]
    moves = [_unit_move, _block_move]
    i = 0
    while len(out) < count:
        cand = moves[i % len(moves)](lgs, rng)
        if cand is not None:
            out.append(cand)
        i += 1
        if i > 8 * count:
            break
    return out


def _unit_move(lgs: LGS, rng: random.Random) -> LGS | None:
    """Multiply one entry by 1 + (linear form): same level, same opening."""
    if lgs.size == 0:
        return None
    ring = lgs.ring
    l = rng.randrange(lgs.size)
    j = rng.randrange(ring.nvars)
    e_j = tuple(1 if t == j else 0 for t in range(ring.nvars))
    entries = list(lgs.entries_y)
    entries[l] = ring.add(entries[l], ring.mul_monomial(entries[l], e_j))
    return LGS.from_entries(ring, entries, list(lgs.jumps), filt=lgs.filt,
                            C=[list(r) for r in lgs.C], point=list(lgs.point))


def _block_move(lgs: LGS, rng: random.Random) -> LGS | None:
    """Mix a same-jump block by an invertible matrix G.

    The new leading forms are (sum_l root_q(G[i][l]) y_l)^q, so the frame
    moves by the entrywise q-th-root matrix R (invertible because the root
    is a field automorphism) and every entry is rewritten in the new
    coordinates z = R y.
    """
    if lgs.size == 0:
        return None
    ring = lgs.ring
    F = ring.field
    d = ring.nvars
    e = rng.choice(lgs.jumps)
    block = [l for l in range(lgs.size) if lgs.jumps[l] == e]
    n = len(block)
    G = None
    for _ in range(24):
        trial = [[F.random(rng) for _ in range(n)] for _ in range(n)]
        if matrix_rank(F, [list(r) for r in trial]) == n:
            G = trial
            break
    if G is None:
        return None
    R = [[F.one if i == j else F.zero for j in range(d)] for i in range(d)]
    for bi, i in enumerate(block):
        for bj, j in enumerate(block):
            R[i][j] = F.scalar_root(G[bi][bj], e) if F.char else G[bi][bj]
    R_inv = invert_matrix(F, R)
    mixed = list(lgs.entries_y)
    for bi, i in enumerate(block):
        comb = ring.zero()
        for bj, j in enumerate(block):
            comb = ring.add(comb, ring.scale(G[bi][bj], lgs.entries_y[j]))
        mixed[i] = comb
    entries = [ring.substitute_linear(h, R_inv) for h in mixed]
    C_new = mat_mul(F, R, [list(r) for r in lgs.C])
    return LGS.from_entries(ring, entries, list(lgs.jumps), filt=lgs.filt,
                            C=C_new, point=list(lgs.point))


def lgs_at_origin(filt: Filtration, E: int | None = None) -> LGS:
    """Extraction shortcut used all over the suites."""
    return extract_lgs(filt, None, E)


def supported_stream(seed, count: int, **kwargs):
    """instance_stream filtered to setups whose origin carries a system
    with at least one entry (so expansion-based checks are not vacuous)."""
    produced = 0
    round_ = 0
    while produced < count:
        round_ += 1
        for field, ring, pairs, sat in instance_stream(f"{seed}/{round_}",
                                                       count, **kwargs):
            try:
                lgs = lgs_at_origin(sat)
            except PreconditionError:
                continue
            if lgs.size == 0:
                continue
            yield field, ring, pairs, sat, lgs
            produced += 1
            if produced >= count:
                break
        if round_ > 20:
            break
