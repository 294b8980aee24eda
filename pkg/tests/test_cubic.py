import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from cubictheta.arith import NotFundamental, is_fundamental, three_reflection
from cubictheta.cubic import (
    CubicForm,
    CubicRing,
    NonFundamentalDiscriminant,
    NotPositive,
    Reducible,
    canonical_form,
    cubic_discriminant,
    enumerate_cubic_fields,
    hessian,
    is_irreducible,
    ring_of,
    trace_form,
    trace_zero,
    transform_cubic,
)
from cubictheta.qform import GL2, QuadForm, equivalent, transform
from cubictheta.realquad import real_three_rank

from test_qform import random_unimodular

coeff = st.integers(-12, 12)


@pytest.mark.parametrize("F,D", [((1, 0, 0, 1), -27), ((1, 0, -4, -1), 229), ((1, 0, -1, 0), 4), ((1, 1, -2, -1), 49)])
def test_cubic_discriminant_examples(F, D):
    assert cubic_discriminant(F) == D


@pytest.mark.parametrize("F,irr", [((1, 0, -4, -1), True), ((1, 0, -1, 0), False), ((0, 1, 1, 1), False), ((2, 0, 0, -1), True), ((2, -1, 0, 0), False)])
def test_is_irreducible_examples(F, irr):
    assert is_irreducible(F) is irr


def has_rational_root(a, b, c, d):
    cands = {Fraction(0)}
    for p in range(1, abs(d) + 1):
        for q in range(1, abs(a) + 1):
            cands.update({Fraction(p, q), Fraction(-p, q)})
    return any(a * t ** 3 + b * t ** 2 + c * t + d == 0 for t in cands)


@given(st.integers(1, 12), coeff, coeff, coeff)
def test_is_irreducible_against_rational_root_scan(a, b, c, d):
    assert is_irreducible((a, b, c, d)) == (not has_rational_root(a, b, c, d))


@given(coeff, coeff, coeff, coeff, st.integers(0, 2 ** 32))
def test_transform_cubic_is_substitution(a, b, c, d, seed):
    rng = random.Random(seed)
    F = CubicForm(a, b, c, d)
    U = random_unimodular(rng, rng.randrange(0, 6), det=rng.choice((1, -1)))
    G = transform_cubic(F, U)
    (p, q), (r, s) = U
    for x, y in [(1, 0), (0, 1), (2, -3), (5, 7)]:
        assert G(x, y) == F(p * x + q * y, r * x + s * y)
    assert cubic_discriminant(G) == cubic_discriminant(F)
    # the Hessian is a covariant
    assert hessian(G) == transform(hessian(F), U)


@given(coeff, coeff, coeff, coeff)
def test_hessian_discriminant(a, b, c, d):
    F = (a, b, c, d)
    assert hessian(F).disc == -3 * cubic_discriminant(F)


def test_ring_of_example():
    R = ring_of((1, 0, -4, -1))
    w, t = (0, 1, 0), (0, 0, 1)
    assert R.mul(w, w) == (4, 0, 1)
    assert R.mul(w, t) == (1, 0, 0)
    assert R.mul(t, t) == (0, 1, -4)
    assert R.trace_vector == (3, 0, -4)
    assert R.is_associative()
    assert R.discriminant() == 229


def test_ring_of_rejections():
    with pytest.raises(NonFundamentalDiscriminant):
        ring_of((1, 1, -2, -1))
    with pytest.raises(Reducible):
        ring_of((1, 0, -1, 0))


@given(coeff, coeff, coeff, coeff)
def test_ring_is_associative_with_form_discriminant(a, b, c, d):
    R = CubicRing.from_form((a, b, c, d))
    assert R.is_associative()
    assert R.discriminant() == cubic_discriminant((a, b, c, d))


def test_trace_zero_basis_and_saturation():
    for F in [(1, 0, -4, -1), (1, -1, -4, 1), (2, 7, -9, -8), (1, -11, -12, 1)]:
        R = CubicRing.from_form(F)
        L = trace_zero(R)
        u, v = L.basis
        assert R.trace(u) == 0 and R.trace(v) == 0
        assert L.minors_gcd() == 1
        # every small trace-zero element is an integral combination of the basis
        for x in product(range(-6, 7), repeat=3):
            if R.trace(x):
                continue
            sols = [(s, t) for s in range(-40, 41) for t in range(-40, 41)
                    if tuple(s * p + t * q for p, q in zip(u, v)) == x]
            assert sols, x


def test_trace_form_example():
    R = ring_of((1, 0, -4, -1))
    t = trace_form(R, 229)
    assert t.disc == -687 == three_reflection(229)
    assert t.is_primitive and t.is_positive_definite
    (g11, g12), (_, g22) = trace_zero(R).gram
    assert 4 * g12 * g12 - 4 * g11 * g22 == -12 * 229


def test_trace_form_basis_independent():
    rng = random.Random(8)
    R = ring_of((1, 0, -4, -1))
    t = trace_form(R, 229)
    L = trace_zero(R)
    u, v = L.basis
    for _ in range(50):
        (p, q), (r, s) = random_unimodular(rng, 8, det=rng.choice((1, -1)))
        b1 = tuple(p * x + r * y for x, y in zip(u, v))
        b2 = tuple(q * x + s * y for x, y in zip(u, v))
        g11 = R.trace(R.mul(b1, b1))
        g12 = R.trace(R.mul(b1, b2))
        g22 = R.trace(R.mul(b2, b2))
        assert equivalent(QuadForm(g11 // 2, g12, g22 // 2), t, GL2)


def test_trace_form_of_equivalent_cubic_forms():
    rng = random.Random(9)
    F = (2, 7, -9, -8)
    d = cubic_discriminant(F)
    t = trace_form(ring_of(F), d)
    for _ in range(30):
        G = transform_cubic(F, random_unimodular(rng, 5, det=rng.choice((1, -1))))
        assert equivalent(trace_form(ring_of(G), d), t, GL2)


def test_trace_form_three_divides_d():
    # 3 | d: gcd(3, d) = 3 and the rescaling is by 6
    for d in range(3, 6000, 3):
        if is_fundamental(d):
            for F in enumerate_cubic_fields(d):
                t = trace_form(ring_of(F), d)
                assert t.disc == three_reflection(d) == -d // 3
                assert t.is_primitive


def test_canonical_form_is_class_invariant():
    rng = random.Random(10)
    for F in [(1, 0, -4, -1), (2, 7, -9, -8), (1, -1, -20, -1), (3, 1, -13, 4)]:
        c = canonical_form(F)
        assert cubic_discriminant(c) == cubic_discriminant(F)
        for _ in range(40):
            G = transform_cubic(F, random_unimodular(rng, rng.randrange(1, 10), det=rng.choice((1, -1))))
            if rng.random() < 0.5:
                G = CubicForm(*(-x for x in G))
            assert canonical_form(G) == c


def test_enumerate_examples():
    assert enumerate_cubic_fields(5) == []
    assert enumerate_cubic_fields(8) == []
    assert enumerate_cubic_fields(229) == [(1, 0, -4, -1)]
    assert len(enumerate_cubic_fields(32009)) == 4
    with pytest.raises(NotFundamental):
        enumerate_cubic_fields(9)
    with pytest.raises(NotPositive):
        enumerate_cubic_fields(-23)


def test_enumeration_against_coefficient_box_scan():
    """Classes found by the bounded search equal those of a plain coefficient-box scan."""
    X = 1500
    B = 9
    box = {}
    for F in product(range(1, B + 1), range(-B, B + 1), range(-B, B + 1), range(-B, B + 1)):
        D = cubic_discriminant(F)
        if 0 < D <= X and is_fundamental(D) and is_irreducible(F):
            box.setdefault(D, set()).add(canonical_form(F))
    for d in range(1, X + 1):
        if is_fundamental(d):
            assert set(enumerate_cubic_fields(d)) == box.get(d, set()), d


def test_enumeration_matches_hasse_count_small():
    for d in range(2, 3000):
        if is_fundamental(d):
            assert len(enumerate_cubic_fields(d)) == (3 ** real_three_rank(d) - 1) // 2, d


def test_enumeration_is_deterministic():
    assert enumerate_cubic_fields(32009) == enumerate_cubic_fields(32009)
    assert enumerate_cubic_fields(32009) == sorted(enumerate_cubic_fields(32009))
