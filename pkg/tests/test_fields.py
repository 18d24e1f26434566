from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from idealfilt import FieldError, make_field
from idealfilt.fields import default_modulus, field_binomial

from .oracles import comb_mod

FIELDS = [make_field(0), make_field(2), make_field(3), make_field(5),
          make_field(101), make_field(2, 3), make_field(3, 2)]


def elements_of(field, rng, count=12):
    return [field.random(rng) for _ in range(count)]


@pytest.mark.parametrize("field", FIELDS, ids=repr)
def test_ring_axioms_on_random_elements(field):
    rng = random.Random(5)
    xs = elements_of(field, rng)
    for a in xs:
        assert field.add(a, field.zero) == a
        assert field.mul(a, field.one) == a
        assert field.add(a, field.neg(a)) == field.zero
        for b in xs:
            assert field.add(a, b) == field.add(b, a)
            assert field.mul(a, b) == field.mul(b, a)
            for c in xs:
                lhs = field.mul(a, field.add(b, c))
                rhs = field.add(field.mul(a, b), field.mul(a, c))
                assert lhs == rhs


@pytest.mark.parametrize("field", FIELDS, ids=repr)
def test_inverses(field):
    rng = random.Random(6)
    for a in elements_of(field, rng):
        if field.is_zero(a):
            with pytest.raises(FieldError):
                field.inv(a)
        else:
            assert field.mul(a, field.inv(a)) == field.one


@pytest.mark.parametrize("field", FIELDS, ids=repr)
def test_pow_matches_repeated_multiplication(field):
    rng = random.Random(7)
    for a in elements_of(field, rng, 6):
        acc = field.one
        for n in range(7):
            assert field.pow(a, n) == acc
            acc = field.mul(acc, a)


@given(n=st.integers(0, 400), k=st.integers(0, 400),
       p=st.sampled_from([2, 3, 5, 101]))
def test_binomial_agrees_with_bigint_oracle(n, k, p):
    field = make_field(p)
    assert field.canon(field_binomial(field, n, k)) == \
        field.canon(field.from_int(comb_mod(n, k, p)))


def test_binomial_char_zero_is_exact():
    field = make_field(0)
    assert field_binomial(field, 30, 15) == Fraction(155117520)


@pytest.mark.parametrize("field", [make_field(2), make_field(5),
                                   make_field(2, 3), make_field(3, 2)],
                         ids=repr)
def test_frobenius_root_inverts_pth_power(field):
    p = field.char
    for a in field.elements():
        assert field.frobenius_root(field.pow(a, p)) == a
        assert field.pow(field.frobenius_root(a), p) == a


@pytest.mark.parametrize("field", [make_field(3), make_field(2, 3)], ids=repr)
def test_scalar_root_peels_iterated_powers(field):
    rng = random.Random(8)
    p = field.char
    for a in elements_of(field, rng, 8):
        for e in range(4):
            q = p ** e
            assert field.scalar_root(field.pow(a, q), e) == a


def test_scalar_root_char_zero_only_at_level_zero():
    field = make_field(0)
    assert field.scalar_root(Fraction(7, 3), 0) == Fraction(7, 3)


def test_freshman_dream_additivity_of_root():
    field = make_field(5)
    for a in field.elements():
        for b in field.elements():
            s = field.frobenius_root(field.add(field.pow(a, 5),
                                               field.pow(b, 5)))
            assert s == field.add(a, b)


@pytest.mark.parametrize("field", FIELDS, ids=repr)
def test_text_round_trip(field):
    rng = random.Random(9)
    for a in elements_of(field, rng):
        assert field.canon(field.from_text(field.to_text(a))) == field.canon(a)


def test_extension_field_rejects_reducible_modulus():
    with pytest.raises(FieldError):
        make_field(2, 2, modulus=(1, 0, 1))  # 1 + g^2 = (1 + g)^2 over F_2


def test_default_modulus_is_accepted_by_the_constructor():
    mod = default_modulus(2, 3)
    assert len(mod) == 3
    assert make_field(2, 3, modulus=mod).order == 8


def test_extension_elements_are_distinct_and_complete():
    field = make_field(3, 2)
    seen = {field.canon(a) for a in field.elements()}
    assert len(seen) == 9


@pytest.mark.parametrize("field", [make_field(7), make_field(101),
                                   make_field(2, 3)], ids=repr)
def test_row_operations_match_scalar_arithmetic(field):
    rng = random.Random(10)
    vals = [field.random(rng) for _ in range(9)]
    other = [field.random(rng) for _ in range(9)]
    factor = field.random(rng)
    row = field.make_row(vals)
    src = field.make_row(other)
    field.row_submul(row, factor, src)
    expect = [field.sub(a, field.mul(factor, b))
              for a, b in zip(vals, other)]
    assert [field.canon(v) for v in field.row_to_list(row)] == \
        [field.canon(v) for v in expect]
    assert field.row_first_nonzero(field.make_row([field.zero] * 4)) == -1
    lead = field.make_row([field.zero, field.one, field.zero])
    assert field.row_first_nonzero(lead) == 1
