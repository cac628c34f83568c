"""Coefficient ring arithmetic: Z2 Laurent polynomials in three flavours."""

import pytest

from pearlgysin.errors import RingMismatch
from pearlgysin.rings import (
    LaurentElement,
    ambient_ring,
    element,
    gen_power,
    laurent_ring,
    one,
    positive_ring,
    sigma_specialize,
    to_ambient,
    xor_convolve,
    zero,
)


def test_addition_is_xor_of_supports():
    r = laurent_ring(2)
    a = element(r, [0, 1, 3])
    b = element(r, [1, 2])
    assert (a + b).exponents == frozenset({0, 2, 3})
    assert (a + a).exponents == frozenset()


def test_multiplication_is_parity_convolution():
    r = laurent_ring(2)
    a = element(r, [0, 1])
    b = element(r, [0, 1])
    # (1 + t)^2 = 1 + t^2 over Z2: the cross terms cancel
    assert (a * b).exponents == frozenset({0, 2})


def test_xor_convolve_matches_polynomial_multiplication():
    assert xor_convolve(frozenset({0, 1}), frozenset({0, 1})) == frozenset({0, 2})
    assert xor_convolve(frozenset(), frozenset({5})) == frozenset()
    assert xor_convolve(frozenset({2}), frozenset({-2})) == frozenset({0})


def test_ring_axioms_on_random_elements():
    import random

    rng = random.Random(20260826)
    r = laurent_ring(3)
    for _ in range(300):
        a = element(r, rng.sample(range(-4, 5), rng.randrange(0, 4)))
        b = element(r, rng.sample(range(-4, 5), rng.randrange(0, 4)))
        c = element(r, rng.sample(range(-4, 5), rng.randrange(0, 4)))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert a + zero(r) == a
        assert a * one(r) == a
        assert a + a == zero(r)


def test_laurent_allows_negative_exponents_positive_rejects():
    lam = laurent_ring(2)
    assert element(lam, [-3]).exponents == frozenset({-3})
    pos = positive_ring(2)
    with pytest.raises(ValueError):
        element(pos, [-1])


def test_ring_mismatch_on_mixed_arithmetic():
    a = element(laurent_ring(2), [0])
    b = element(laurent_ring(3), [0])
    with pytest.raises(RingMismatch):
        _ = a + b
    with pytest.raises(RingMismatch):
        _ = a * b


def test_ambient_ring_needs_even_degree():
    ambient_ring(4)
    with pytest.raises(ValueError):
        ambient_ring(3)


def test_to_ambient_rescales_exponents():
    lam = laurent_ring(4)
    a = element(lam, [1, 3])  # t + t^3, |t| = 4
    q = to_ambient(a)
    # t -> q^2 since |q| = 2: exponents double
    assert q.exponents == frozenset({2, 6})
    assert q.ring.kind == "ambient"
    assert q.ring.generator_degree == 2


def test_to_ambient_rejects_odd_or_foreign_rings():
    with pytest.raises(ValueError):
        to_ambient(element(laurent_ring(3), [1]))
    with pytest.raises(RingMismatch):
        to_ambient(element(positive_ring(4), [1]))


def test_sigma_keeps_only_the_constant_term():
    pos = positive_ring(2)
    assert sigma_specialize(element(pos, [0, 1, 2])) == 1
    assert sigma_specialize(element(pos, [1, 2])) == 0
    assert sigma_specialize(zero(pos)) == 0


def test_sigma_rejects_laurent_elements():
    with pytest.raises(RingMismatch):
        sigma_specialize(element(laurent_ring(2), [0]))


def test_gen_power_and_symbols():
    lam = laurent_ring(6)
    assert gen_power(lam, 2).exponents == frozenset({2})
    assert lam.symbol == "t"
    assert ambient_ring(6).symbol == "q"


def test_elements_are_immutable_values():
    r = laurent_ring(2)
    a = element(r, [1])
    assert a == element(r, [1])
    assert hash(a) == hash(element(r, [1]))
    assert isinstance(a, LaurentElement)
