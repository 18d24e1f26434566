from __future__ import annotations

import random
import warnings
from fractions import Fraction

import pytest

from idealfilt import (JetRing, PreconditionError, SliceTruncationCaveat,
                       TruncationError, d_saturate, generate, make_field)
from idealfilt.filtration import require_saturated

from .oracles import groebner_member, slice_products


def small_ring(p=2, trunc=6):
    return JetRing(make_field(p), ["x", "y"], trunc)


def test_generate_drops_zero_and_merges_duplicates():
    ring = small_ring()
    f = ring.from_text("x^2 + y")
    filt = generate(ring, [(f, 1), (ring.scale(ring.field.one, f), 1),
                           (ring.zero(), 3)])
    assert len(filt.pairs) == 1


def test_push_dedups_scaled_copies_per_level():
    ring = small_ring(5)
    filt = generate(ring, [(ring.from_text("x"), 1)])
    assert not filt.push(ring.from_text("3*x"), 1)
    assert filt.push(ring.from_text("2*x"), 2)  # a new level is a new pair
    assert [str(a) for _, a in filt.pairs] == ["1", "2"]


def test_push_drops_trivial_and_rejects_overflow():
    ring = small_ring()
    filt = generate(ring, [])
    assert not filt.push(ring.from_text("x"), 0)
    assert not filt.push(ring.zero(), 2)
    assert filt.pairs == []
    with pytest.raises(TruncationError):
        filt.push({(7, 0): ring.field.one}, 1)


def test_minimal_products_match_brute_force_multisets():
    ring = JetRing(make_field(3), ["x", "y"], 8)
    pairs = [(ring.from_text("x"), Fraction(1)),
             (ring.from_text("y^2 + x^2"), Fraction(3, 2)),
             (ring.from_text("y"), Fraction(1, 2))]
    filt = generate(ring, pairs)
    for t in [Fraction(1), Fraction(3, 2), Fraction(2), Fraction(7, 2)]:
        got = filt.minimal_products(t)
        want = slice_products([(None, a) for _, a in filt.pairs], t)
        # same number of index multisets; every returned jet is the product
        # over one of them (zero jets are dropped)
        products = []
        for multiset in want:
            jet = ring.one()
            for i in multiset:
                jet = ring.mul(jet, filt.pairs[i][0])
            if jet:
                products.append(jet)
        key = ring.to_text
        assert sorted(map(key, got)) == sorted(map(key, products))


@pytest.mark.parametrize("p", [2, 5])
def test_membership_agrees_with_groebner_ideal_oracle(p):
    """Level-t slices are ideals generated by the minimal products, modulo
    the window; sympy reduces against an independent Groebner basis."""
    ring = JetRing(make_field(p), ["x", "y"], 5)
    rng = random.Random(50 + p)
    pairs = [(ring.from_text("x^2 + y^3"), 2), (ring.from_text("y^2"), 1)]
    filt = generate(ring, pairs)
    for t in [1, 2, 3]:
        gens = [{e: int(c) for e, c in g.items()}
                for g in filt.minimal_products(t)]
        for _ in range(12):
            f = ring.random_poly(rng, 5, rng.randint(0, 4))
            plain = {e: int(c) for e, c in f.items()}
            assert filt.membership(f, t) == \
                groebner_member(plain, gens, 2, 5, p)


def test_membership_is_only_one_sided_near_the_window():
    """A jet of high order can sit in the slice for window reasons alone."""
    ring = small_ring(2, 4)
    filt = generate(ring, [(ring.from_text("x"), 1)])
    deep = ring.monomial((0, 4))  # y^4, no x anywhere
    assert not filt.membership(deep, 1)
    with pytest.warns(SliceTruncationCaveat):
        assert filt.membership(ring.zero(), 99)


def test_slice_basis_warns_beyond_certified_levels():
    ring = small_ring(2, 4)
    filt = generate(ring, [(ring.from_text("x"), 1)])
    with pytest.warns(SliceTruncationCaveat):
        filt.level_slice_basis(Fraction(11, 2))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        filt.level_slice_basis(Fraction(5))


def test_saturation_adds_exactly_the_square_root_generator(worked_filtration):
    ring = worked_filtration.ring
    texts = {(ring.to_text(f), str(a)) for f, a in worked_filtration.pairs}
    assert texts == {("y^3+x^2", "2"), ("y^2", "1")}
    assert worked_filtration.saturated


def test_saturation_is_idempotent(worked_filtration):
    again = d_saturate(worked_filtration)
    assert {(tuple(sorted(f.items())), a) for f, a in again.pairs} == \
        {(tuple(sorted(f.items())), a) for f, a in worked_filtration.pairs}


def test_saturation_closes_under_derivatives_at_fractional_levels():
    ring = JetRing(make_field(5), ["x", "y"], 6)
    filt = d_saturate(generate(ring, [(ring.from_text("x^3"), Fraction(5, 2))]))
    for f, a in filt.pairs:
        for I in [(1, 0), (0, 1), (2, 0)]:
            if 0 < sum(I) < -(-a.numerator // a.denominator):
                df = ring.hasse_deriv(f, I)
                if df:
                    assert filt.membership(df, a - sum(I))


def test_char_p_saturation_skips_vanishing_binomials():
    ring = JetRing(make_field(2), ["x", "y"], 6)
    filt = d_saturate(generate(ring, [(ring.from_text("x^2"), 2)]))
    assert [(ring.to_text(f), str(a)) for f, a in filt.pairs] == [("x^2", "2")]


def test_support_of_worked_example_is_the_origin_alone(worked_filtration):
    F = worked_filtration.ring.field
    pts = [(a, b) for a in F.elements() for b in F.elements()]
    supported = [P for P in pts if worked_filtration.in_support(list(P))]
    assert supported == [(F.zero, F.zero)]


def test_support_ignores_window_artifacts():
    # (x, 5): level 5 exceeds T=4, yet ord_P(x) = 1 < 5 at every point, so
    # nothing is supported even though the level-5 slice collapses mod m^5.
    ring = small_ring(2, 4)
    filt = generate(ring, [(ring.from_text("x"), 5)])
    F = ring.field
    assert not any(filt.in_support([a, b])
                   for a in F.elements() for b in F.elements())


def test_localize_recenters_and_preserves_saturation(worked_filtration):
    ring = worked_filtration.ring
    F = ring.field
    loc = worked_filtration.localize([F.one, F.zero])
    assert loc.saturated
    # generators translated: evaluating the translate at 0 equals the
    # original at the point
    for (f, a), (g, b) in zip(worked_filtration.pairs, loc.pairs):
        assert a == b
        assert ring.evaluate(g, [F.zero, F.zero]) == \
            ring.evaluate(f, [F.one, F.zero])


def test_substitute_linear_maps_slices_onto_slices():
    ring = JetRing(make_field(5), ["x", "y"], 5)
    filt = generate(ring, [(ring.from_text("x^2 + y"), 1)])
    M = [[ring.field.from_int(2), ring.field.one],
         [ring.field.one, ring.field.one]]
    moved = filt.substitute_linear(M)
    rng = random.Random(51)
    for _ in range(8):
        f = ring.random_poly(rng, 5, 3)
        assert filt.membership(f, 1) == \
            moved.membership(ring.substitute_linear(f, M), 1)


def test_require_saturated_guards_unsaturated_input():
    ring = small_ring()
    filt = generate(ring, [(ring.from_text("x^2 + y^3"), 2)])
    with pytest.raises(PreconditionError):
        require_saturated(filt, "anything")
