from __future__ import annotations

from fractions import Fraction

from idealfilt import d_saturate, dump_instance, generate, load_instance
from idealfilt import suites
from idealfilt.expansion import check_associated, check_weakly_associated
from idealfilt.leading import jump_degree


def test_rng_for_is_deterministic_and_tag_separated():
    a = suites.rng_for(3, "x").random()
    b = suites.rng_for(3, "x").random()
    c = suites.rng_for(3, "y").random()
    assert a == b and a != c


def test_random_instance_data_is_reproducible_and_saturated():
    d1 = suites.random_instance_data(3, 2, 2, 4, 3, seed=5)
    d2 = suites.random_instance_data(3, 2, 2, 4, 3, seed=5)
    assert dump_instance(d1) == dump_instance(d2)
    inst = load_instance(d1)
    filt = inst.filtration()
    sat = d_saturate(generate(inst.ring, inst.generators))
    assert len(sat.pairs) == len(filt.pairs)  # emitted already closed
    assert inst.points == [[inst.field.zero, inst.field.zero]]


def test_random_instances_keep_origin_in_support():
    for k, (field, ring, pairs, sat) in enumerate(
            suites.instance_stream(99, 10)):
        origin = [field.zero] * ring.nvars
        assert sat.in_support(origin), f"instance {k}"


def test_max_level_zero_means_no_generators():
    rng = suites.rng_for(1, "trivial")
    field, ring, pairs = suites.random_setup(rng, 2, 2, 3, 4, 0)
    assert pairs == []


def test_filtration_elements_sit_in_their_levels(worked_filtration):
    rng = suites.rng_for(4, "elements")
    for f, a in suites.filtration_elements(worked_filtration, rng, 15):
        assert f and a > 0
        assert worked_filtration.membership(f, a)


def test_candidate_systems_stay_valid(worked_filtration):
    from idealfilt import extract_lgs
    rng = suites.rng_for(5, "cands")
    lgs = extract_lgs(worked_filtration, None, 2)
    cands = suites.candidate_systems(lgs, rng, 4)
    assert len(cands) == 4 and cands[0] is lgs
    for cand in cands:
        assert cand.jumps == lgs.jumps
        assert check_associated(cand)
        assert check_weakly_associated(cand)
        for l, h in enumerate(cand.entries_x()):
            q = jump_degree(worked_filtration.ring.field, cand.jumps[l])
            assert worked_filtration.membership(h, Fraction(q))


def test_candidate_block_moves_act_within_jump_blocks():
    from idealfilt import JetRing, extract_lgs, make_field
    ring = JetRing(make_field(5), ["x", "y", "z"], 6)
    filt = d_saturate(generate(ring, [(ring.from_text("x + y^2"), 1),
                                      (ring.from_text("y + z^3"), 1)]))
    lgs = extract_lgs(filt, None)
    assert lgs.size == 2 and lgs.jumps == [0, 0]
    rng = suites.rng_for(6, "block")
    for cand in suites.candidate_systems(lgs, rng, 5):
        assert check_associated(cand)
        for l, h in enumerate(cand.entries_x()):
            assert filt.membership(h, Fraction(1))


def test_supported_stream_yields_systems_with_entries():
    count = 0
    for field, ring, pairs, sat, lgs in suites.supported_stream(7, 5):
        assert lgs.size >= 1
        count += 1
    assert count == 5


def test_default_truncation_shrinks_with_dimension():
    assert suites.default_truncation(2) == 12
    assert suites.default_truncation(3) == 9
    assert suites.default_truncation(4) == 5
