"""Field arithmetic against hand-computed tables and independent oracles."""

import pytest

from eccnoc.errors import DivisionByZero, FieldMismatch, OracleBoundExceeded
from eccnoc.fields import (FieldKind, FieldSpec, ff_add, ff_inv, ff_mul,
                           ff_neg, ff_sqr, ff_sub, is_irreducible)

from conftest import seeded

GF17 = FieldSpec.prime(17)
GF8 = FieldSpec.binary(3, 0b1011)      # z^3 + z + 1
GF16 = FieldSpec.binary(4, 0b10011)    # z^4 + z + 1
P32 = FieldSpec.prime(4294967291)
B33 = FieldSpec.binary(33, (1 << 33) | (1 << 10) | 1)


def test_prime_spot_values():
    e = GF17.element
    assert (e(5) + e(13)).value == 1
    assert (e(16) + e(1)).value == 0
    assert (e(3) - e(7)).value == 13
    assert (e(5) * e(7)).value == 1
    assert ff_inv(e(5)).value == 7
    assert ff_inv(e(2)).value == 9
    assert (-e(3)).value == 14
    assert ff_sqr(e(4)).value == 16


def test_binary_gf8_full_inverse_table():
    # brute-forced by hand for z^3 + z + 1
    table = {1: 1, 2: 5, 3: 6, 4: 7, 5: 2, 6: 3, 7: 4}
    for v, inv in table.items():
        assert ff_inv(GF8.element(v)).value == inv
        assert (GF8.element(v) * GF8.element(inv)).value == 1


def test_binary_gf8_spot_values():
    e = GF8.element
    assert (e(0b011) * e(0b101)).value == 0b100
    assert ff_sqr(e(0b011)).value == 0b101
    assert ff_inv(e(0b010)).value == 0b101
    assert (e(0b110) + e(0b011)).value == 0b101
    assert (e(0b110) - e(0b011)).value == 0b101  # subtraction is addition
    assert (-e(0b110)).value == 0b110            # self-inverse group


def _axiom_sweep(spec, triples):
    zero, one = spec.zero, spec.one
    for a, b, c in triples:
        assert (a + b) == (b + a)
        assert (a * b) == (b * a)
        assert ((a + b) + c) == (a + (b + c))
        assert ((a * b) * c) == (a * (b * c))
        assert (a * (b + c)) == (a * b + a * c)
        assert (a + zero) == a
        assert (a * one) == a
        assert (a + (-a)).value == 0
        assert ff_sqr(a) == a * a
        if a.value:
            assert (a * ff_inv(a)) == one


def test_axioms_exhaustive_toy_fields():
    for spec in (GF17, GF16):
        elems = list(spec.elements())
        triples = [(a, b, c) for a in elems for b in elems for c in elems]
        _axiom_sweep(spec, triples)


@pytest.mark.parametrize("spec,seed", [(P32, 101), (B33, 202)])
def test_axioms_random_midsize(spec, seed):
    rng = seeded(seed)
    triples = [tuple(spec.random_element(rng) for _ in range(3))
               for _ in range(300)]
    _axiom_sweep(spec, triples)


def _pow_ladder(spec, a, e):
    # square-and-multiply, independent of ff_inv
    acc = spec.one
    base = a
    while e:
        if e & 1:
            acc = acc * base
        base = ff_sqr(base)
        e >>= 1
    return acc


@pytest.mark.parametrize("spec,seed", [(GF17, 1), (GF8, 2), (GF16, 3),
                                       (P32, 4), (B33, 5)])
def test_inverse_matches_exponentiation_oracle(spec, seed):
    # a^-1 = a^(q-2) in any field of order q
    rng = seeded(seed)
    samples = [spec.random_element(rng) for _ in range(40)]
    if spec.order <= 1 << 8:
        samples = list(spec.elements())
    for a in samples:
        if a.value == 0:
            continue
        assert ff_inv(a) == _pow_ladder(spec, a, spec.order - 2)


def test_binary_squaring_is_frobenius():
    rng = seeded(77)
    for spec in (GF16, B33):
        for _ in range(120):
            a = spec.random_element(rng)
            b = spec.random_element(rng)
            assert ff_sqr(a + b) == ff_sqr(a) + ff_sqr(b)


def test_results_stay_canonical():
    rng = seeded(88)
    for spec in (GF17, GF16, P32, B33):
        bound = spec.order
        for _ in range(150):
            a = spec.random_element(rng)
            b = spec.random_element(rng)
            for r in (a + b, a - b, a * b, ff_sqr(a), ff_neg(a)):
                assert 0 <= r.value < bound
            if a.value:
                assert 0 <= ff_inv(a).value < bound


def test_element_constructor_canonicalizes():
    assert GF17.element(-3).value == 14
    assert GF17.element(40).value == 6
    # z^4 reduces to z + 1 under z^4 + z + 1
    assert GF16.element(0b10000).value == 0b0011
    with pytest.raises(ValueError):
        GF16.element(-1)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        ff_inv(GF17.zero)
    with pytest.raises(DivisionByZero):
        ff_inv(GF16.zero)


def test_field_mismatch_rejected():
    other = FieldSpec.prime(19)
    with pytest.raises(FieldMismatch):
        ff_add(GF17.one, other.one)
    with pytest.raises(FieldMismatch):
        ff_mul(GF16.one, GF8.one)


def test_bad_field_parameters_rejected():
    with pytest.raises(ValueError):
        FieldSpec.prime(15)          # composite
    with pytest.raises(ValueError):
        FieldSpec.prime(3)           # too small
    with pytest.raises(ValueError):
        FieldSpec.binary(4, 0b10001)     # z^4 + 1 = (z + 1)^4
    with pytest.raises(ValueError):
        FieldSpec.binary(4, 0b10110)     # zero constant term
    with pytest.raises(ValueError):
        FieldSpec.binary(4, 0b1011)      # degree mismatch
    with pytest.raises(ValueError):
        FieldSpec.binary(1, 0b11)        # degree too small for a field here


def _naive_pmod(x, f):
    df = f.bit_length() - 1
    while x.bit_length() - 1 >= df:
        x ^= f << (x.bit_length() - 1 - df)
    return x


def _naive_irreducible(f):
    # trial division by every polynomial of degree 1..deg(f)//2
    m = f.bit_length() - 1
    for d in range(1, m // 2 + 1):
        for g in range(1 << d, 1 << (d + 1)):
            if _naive_pmod(f, g) == 0:
                return False
    return True


def test_irreducibility_against_trial_division():
    for m in range(2, 9):
        for f in range(1 << m, 1 << (m + 1)):
            assert is_irreducible(f) == _naive_irreducible(f), bin(f)


def test_enumeration_is_bounded():
    with pytest.raises(OracleBoundExceeded):
        list(B33.elements())


def test_descriptors():
    assert GF17.bits == 5 and GF17.order == 17 and GF17.tag == "GF(17)"
    assert GF16.bits == 4 and GF16.order == 16 and GF16.tag == "GF(2^4)"
    assert GF17.kind is FieldKind.PRIME
    assert GF16.kind is FieldKind.BINARY
    assert ff_sub(GF17.element(3), GF17.element(3)).value == 0
