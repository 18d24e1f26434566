from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from idealfilt import JetRing, ParseError, RingMismatch, make_field
from idealfilt.jetring import (ORD_INFINITY, count_monomials,
                               count_monomials_up_to, grlex_key)

from .oracles import hasse_poly, min_total_degree


def rings():
    return [JetRing(make_field(2), ["x", "y"], 8),
            JetRing(make_field(5), ["x", "y", "z"], 6),
            JetRing(make_field(0), ["u", "v"], 7)]


def draw(ring, rng, max_deg=None):
    return ring.random_poly(rng, max_deg or ring.trunc, rng.randint(0, 6))


@pytest.mark.parametrize("ring", rings(), ids=repr)
def test_ring_laws_on_random_jets(ring):
    rng = random.Random(31)
    for _ in range(15):
        f, g, h = (draw(ring, rng) for _ in range(3))
        assert ring.add(f, g) == ring.add(g, f)
        assert ring.mul(f, g) == ring.mul(g, f)
        assert ring.mul(f, ring.add(g, h)) == \
            ring.add(ring.mul(f, g), ring.mul(f, h))
        assert ring.sub(f, f) == ring.zero()
        assert ring.mul(f, ring.one()) == f


@pytest.mark.parametrize("ring", rings(), ids=repr)
def test_multiplication_truncates_at_the_window(ring):
    rng = random.Random(32)
    for _ in range(10):
        f, g = draw(ring, rng), draw(ring, rng)
        prod = ring.mul(f, g)
        assert all(sum(e) <= ring.trunc for e in prod)
        # degrees that survive agree with untruncated arithmetic
        full: dict = {}
        for ef, cf in f.items():
            for eg, cg in g.items():
                e = tuple(a + b for a, b in zip(ef, eg))
                full[e] = ring.field.add(full.get(e, ring.field.zero),
                                         ring.field.mul(cf, cg))
        expect = {e: c for e, c in full.items()
                  if sum(e) <= ring.trunc and c != ring.field.zero}
        assert prod == expect


def test_power_is_iterated_multiplication():
    ring = JetRing(make_field(3), ["x", "y"], 9)
    rng = random.Random(33)
    f = draw(ring, rng)
    acc = ring.one()
    for n in range(5):
        assert ring.power(f, n) == acc
        acc = ring.mul(acc, f)


def test_freshman_dream_in_char_p():
    ring = JetRing(make_field(5), ["x", "y"], 10)
    f = ring.from_text("x + 2*y")
    lhs = ring.power(f, 5)
    assert lhs == ring.from_text("x^5 + 2*y^5")


@pytest.mark.parametrize("ring", rings(), ids=repr)
def test_ord_matches_support_minimum(ring):
    rng = random.Random(34)
    assert ring.ord_at_origin(ring.zero()) == ORD_INFINITY
    for _ in range(20):
        f = draw(ring, rng)
        want = min_total_degree(f)
        got = ring.ord_at_origin(f)
        assert got == (ORD_INFINITY if want is None else want)


@pytest.mark.parametrize("p", [0, 2, 3, 5])
def test_hasse_derivative_matches_coefficient_formula(p):
    ring = JetRing(make_field(p), ["x", "y"], 9)
    rng = random.Random(35 + p)
    for _ in range(25):
        f = draw(ring, rng)
        I = (rng.randint(0, 3), rng.randint(0, 3))
        got = ring.hasse_deriv(f, I)
        plain = {e: (int(c) if p else c) for e, c in f.items()}
        want = hasse_poly(plain, I, p)
        assert {e: int(c) if p else c for e, c in got.items()} == want


def test_hasse_identity_and_zero_index():
    ring = JetRing(make_field(2), ["x", "y"], 6)
    f = ring.from_text("x^2*y + y^3")
    assert ring.hasse_deriv(f, (0, 0)) == f


def test_translate_then_translate_back():
    ring = JetRing(make_field(7), ["x", "y"], 8)
    rng = random.Random(36)
    for _ in range(10):
        f = draw(ring, rng)
        P = [ring.field.random(rng) for _ in range(2)]
        back = [ring.field.neg(c) for c in P]
        assert ring.translate_to_point(ring.translate_to_point(f, P), back) == f


def test_translate_evaluates_constant_term():
    ring = JetRing(make_field(5), ["x", "y"], 8)
    f = ring.from_text("x^2 + 3*y")
    P = [ring.field.from_int(2), ring.field.from_int(1)]
    moved = ring.translate_to_point(f, P)
    assert ring.coefficient(moved, (0, 0)) == ring.evaluate(f, P)


def test_substitute_linear_composes_like_matrix_product():
    from idealfilt.linalg import mat_mul
    ring = JetRing(make_field(11), ["x", "y"], 6)
    rng = random.Random(37)
    F = ring.field
    for _ in range(8):
        f = draw(ring, rng)
        A = [[F.random(rng) for _ in range(2)] for _ in range(2)]
        B = [[F.random(rng) for _ in range(2)] for _ in range(2)]
        one_step = ring.substitute_linear(f, mat_mul(F, A, B))
        two_step = ring.substitute_linear(ring.substitute_linear(f, A), B)
        assert one_step == two_step


@pytest.mark.parametrize("ring", rings(), ids=repr)
def test_text_round_trip(ring):
    rng = random.Random(38)
    for _ in range(20):
        f = draw(ring, rng)
        assert ring.from_text(ring.to_text(f)) == f


def test_from_text_grammar_corners():
    ring = JetRing(make_field(5), ["x", "y"], 9)
    assert ring.from_text("0") == ring.zero()
    assert ring.from_text("-x + x") == ring.zero()
    assert ring.from_text("7*x") == ring.from_text("2*x")
    assert ring.from_text("y^2*x*y") == ring.monomial((1, 3))


def test_extension_scalars_parse_in_parentheses():
    ring = JetRing(make_field(2, 3), ["x", "y"], 5)
    F = ring.field
    f = ring.from_text("(1+g)*x + g^2*y")
    assert ring.coefficient(f, (1, 0)) == F.add(F.one, F.generator)
    assert ring.coefficient(f, (0, 1)) == F.pow(F.generator, 2)


def test_from_text_rejects_junk():
    ring = JetRing(make_field(5), ["x", "y"], 9)
    for bad in ["q", "x^", "x**2", "x^-1", "3.5*x", "", "x y^2", "(x+y)^2"]:
        with pytest.raises(ParseError):
            ring.from_text(bad)


def test_from_text_rejects_terms_beyond_the_window():
    ring = JetRing(make_field(5), ["x", "y"], 4)
    with pytest.raises(ParseError):
        ring.from_text("x^5")


def test_monomial_enumeration_counts_and_order():
    ring = JetRing(make_field(2), ["x", "y", "z"], 5)
    for d in range(6):
        monos = ring.monomials_of_degree(d)
        assert len(monos) == count_monomials(3, d)
        assert monos == sorted(monos, key=grlex_key)
    upto = ring.monomials_up_to(5)
    assert len(upto) == count_monomials_up_to(3, 5)
    assert upto == sorted(upto, key=grlex_key)
    assert len(set(upto)) == len(upto)


def test_vector_of_inverts_monomial_index():
    ring = JetRing(make_field(3), ["x", "y"], 6)
    rng = random.Random(39)
    index = ring.monomial_index(6)
    monos = ring.monomials_up_to(6)
    f = draw(ring, rng)
    vec = ring.vector_of(f, index, len(monos))
    rebuilt = {m: c for m, c in zip(monos, vec) if c != ring.field.zero}
    assert rebuilt == f


def test_graded_part_splits_the_jet():
    ring = JetRing(make_field(5), ["x", "y"], 7)
    rng = random.Random(40)
    f = draw(ring, rng)
    total = ring.zero()
    for d in range(8):
        total = ring.add(total, ring.graded_part(f, d))
    assert total == f


def test_check_member_polices_arity():
    ring = JetRing(make_field(2), ["x", "y"], 5)
    with pytest.raises(RingMismatch):
        ring.check_member({(1, 0, 0): ring.field.one})


def test_reserved_name_is_rejected():
    with pytest.raises(Exception):
        JetRing(make_field(2, 3), ["g", "y"], 5)


@given(st.integers(0, 6), st.integers(0, 6))
def test_monomial_counts_formula(n, d):
    if n == 0:
        return
    assert count_monomials(n, d) == math.comb(d + n - 1, n - 1)
