from __future__ import annotations

import random
from fractions import Fraction

import pytest

from idealfilt import (JetRing, PreconditionError, d_saturate, generate,
                       make_field)
from idealfilt.expansion import check_associated, check_weakly_associated
from idealfilt.leading import (compare_sigma, default_horizon, extract_lgs,
                               jump_degree, leading_dim, mixed_count,
                               pure_dims, purify_at, sigma)


def test_jump_degree_powers_of_the_characteristic():
    assert jump_degree(make_field(2), 3) == 8
    assert jump_degree(make_field(5), 0) == 1
    assert jump_degree(make_field(0), 4) == 1


def test_default_horizon_is_the_last_visible_jump():
    assert default_horizon(make_field(2), 12) == 3
    assert default_horizon(make_field(3), 9) == 2
    assert default_horizon(make_field(5), 12) == 1
    assert default_horizon(make_field(0), 12) == 0
    with pytest.raises(PreconditionError):
        default_horizon(make_field(2), 0)


def test_worked_example_pure_dims_are_frozen(worked_filtration):
    assert pure_dims(worked_filtration, 2) == [0, 1, 1]
    assert leading_dim(worked_filtration, 0) == 0


def test_worked_example_sigma_and_off_support(worked_filtration):
    F = worked_filtration.ring.field
    assert sigma(worked_filtration, 2, [F.zero, F.zero]) == (2, 1, 1)
    assert sigma(worked_filtration, 3, [F.zero, F.zero]) == (2, 1, 1, 1)
    assert sigma(worked_filtration, 2, [F.one, F.zero]) is None


def test_hyperplane_sigma_is_all_ones():
    ring = JetRing(make_field(2), ["x", "y"], 12)
    filt = d_saturate(generate(ring, [(ring.from_text("x"), 1)]))
    assert pure_dims(filt, 2) == [1, 1, 1]
    assert sigma(filt, 2, [ring.field.zero, ring.field.zero]) == (1, 1, 1)


@pytest.mark.parametrize("p", [2, 3])
def test_pth_power_hyperplane_keeps_full_first_slot(p):
    ring = JetRing(make_field(p), ["x", "y"], p * p + 1)
    filt = d_saturate(generate(ring, [(ring.from_text(f"x^{p}"), p)]))
    assert sigma(filt, 1, [ring.field.zero, ring.field.zero]) == (2, 1)


def test_compare_sigma_is_lexicographic_with_none_smallest():
    assert compare_sigma((2, 1, 1), (2, 1, 1)) == 0
    assert compare_sigma((2, 1, 0), (2, 1, 1)) < 0
    assert compare_sigma((3, 0, 0), (2, 9, 9)) > 0
    assert compare_sigma(None, (0, 0, 0)) < 0
    assert compare_sigma((0, 0, 0), None) > 0
    assert compare_sigma(None, None) == 0


def test_compare_sigma_requires_equal_horizons():
    from idealfilt import DimensionMismatch
    with pytest.raises(DimensionMismatch):
        compare_sigma((1, 1), (1, 1, 1))


def test_mixed_count_predicts_leading_minus_pure(worked_filtration):
    # jumps of the worked system: a single entry at e = 1
    assert mixed_count(2, [1], 1) == 0
    assert mixed_count(2, [0, 0], 1) == 1   # x*y among degree-2 monomials
    assert mixed_count(3, [0, 0], 1) == 2   # x^2*y, x*y^2


def test_extract_lgs_shape_on_worked_example(worked_filtration):
    lgs = extract_lgs(worked_filtration, None, 2)
    assert lgs.jumps == [1]
    assert lgs.orders() == [2]
    assert lgs.sigma == (2, 1, 1)
    assert check_associated(lgs)
    assert check_weakly_associated(lgs)
    ring = worked_filtration.ring
    assert ring.graded_part(lgs.entries_y[0], 2) == ring.monomial((2, 0))


def test_extract_lgs_off_support_is_refused(worked_filtration):
    F = worked_filtration.ring.field
    with pytest.raises(PreconditionError):
        extract_lgs(worked_filtration, [F.one, F.zero], 2)


def test_frame_change_round_trips_through_the_system():
    ring = JetRing(make_field(5), ["x", "y"], 8)
    filt = d_saturate(generate(ring, [(ring.from_text("x + y^2"), 1)]))
    lgs = extract_lgs(filt, None, 1)
    rng = random.Random(60)
    for _ in range(10):
        f = ring.random_poly(rng, 8, 4)
        assert lgs.from_y(lgs.to_y(f)) == f


def test_entries_x_are_slice_members():
    ring = JetRing(make_field(3), ["x", "y", "z"], 6)
    filt = d_saturate(generate(ring, [(ring.from_text("x + y*z"), 1),
                                      (ring.from_text("y^3"), 2)]))
    lgs = extract_lgs(filt, None)
    for l, h in enumerate(lgs.entries_x()):
        q = jump_degree(ring.field, lgs.jumps[l])
        assert filt.membership(h, Fraction(q))


def test_cylinder_sigma_constant_along_the_free_axis():
    ring = JetRing(make_field(2), ["x", "y", "z"], 8)
    filt = d_saturate(generate(ring, [(ring.from_text("x^2 + y^3"), 2)]))
    F = ring.field
    s0 = sigma(filt, 2, [F.zero, F.zero, F.zero])
    s1 = sigma(filt, 2, [F.zero, F.zero, F.one])
    assert s0 == s1 == (3, 2, 2)


def test_purify_at_full_rank_correction_d4():
    ring = JetRing(make_field(2), ["x1", "x2", "y", "z"], 5)
    filt = d_saturate(generate(ring, [
        (ring.from_text("x1"), 1), (ring.from_text("x2"), 1),
        (ring.from_text("y^2 + z*x1*x2"), 2)]))
    F = ring.field
    origin = [F.zero] * 4
    target = [F.zero, F.zero, F.zero, F.one]
    assert sigma(filt, 2, origin) == sigma(filt, 2, target) == (2, 1, 1)
    lgs = extract_lgs(filt, origin, 2)
    moved = purify_at(lgs, target)
    assert moved.is_pure_at_target
    # corrected entries open purely after recentering at the target
    yQ = lgs.y_point(target)
    for l, h in enumerate(moved.entries_y):
        q = jump_degree(F, lgs.jumps[l])
        shifted = ring.translate_to_point(h, yQ)
        init = ring.graded_part(shifted, int(ring.ord_at_origin(shifted)))
        assert init == ring.monomial(tuple(q if t == l else 0
                                           for t in range(4)))


def test_purify_rejects_points_with_different_sigma(worked_filtration):
    lgs = extract_lgs(worked_filtration, None, 2)
    F = worked_filtration.ring.field
    with pytest.raises(PreconditionError):
        purify_at(lgs, [F.one, F.zero])


def test_sigma_default_horizon_matches_explicit(worked_filtration):
    F = worked_filtration.ring.field
    assert sigma(worked_filtration, None, [F.zero, F.zero]) == \
        sigma(worked_filtration, 3, [F.zero, F.zero])
