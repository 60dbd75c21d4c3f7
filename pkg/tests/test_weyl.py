"""Weyl arithmetic, Euler substitution, contiguity operators, certificates."""

import random
from fractions import Fraction

import pytest

from ahyper.errors import InputError, InternalError
from ahyper.lattice import IntMatrix, vec_sub
from ahyper.toric import BPoly, b_ideal, b_poly_avoiding, toric_ideal
from ahyper import weyl
from ahyper.weyl import (
    Certificate,
    SymmetryOperator,
    WeylElement,
    contiguity_operator,
    euler_operator,
    in_left_toric_ideal,
    shift_bpoly,
    substitute_euler,
    verify_certificate,
    verify_weight,
    weyl_d,
    weyl_monomial,
    weyl_mul,
    weyl_one,
    weyl_theta,
    weyl_x,
)

A_DEMO = IntMatrix(((1, 1, 1, 1), (0, 0, 1, 2), (0, 1, 1, 0)))
A_SMALL = IntMatrix(((1, 1, 1, 1), (0, 1, 3, 4)))

GENERIC = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 7))


def column(A, j):
    return tuple(A.entries[i][j] for i in range(A.d))


def random_element(rng, n, max_terms=5, emax=3):
    terms = {}
    for _ in range(rng.randrange(1, max_terms + 1)):
        alpha = tuple(rng.randrange(emax) for _ in range(n))
        m = tuple(rng.randrange(emax) for _ in range(n))
        terms[alpha, m] = terms.get((alpha, m), 0) + Fraction(
            rng.randrange(-5, 6), rng.randrange(1, 4)
        )
    return WeylElement(n, terms)


def test_defining_relations():
    n = 2
    left = weyl_mul(weyl_d(n, 0), weyl_x(n, 0))
    assert left == WeylElement(n, {((1, 0), (1, 0)): 1, ((0, 0), (0, 0)): 1})
    square = weyl_mul(weyl_theta(n, 0), weyl_theta(n, 0))
    assert square == WeylElement(n, {((2, 0), (2, 0)): 1, ((1, 0), (1, 0)): 1})
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            xi, dj = weyl_x(n, i), weyl_d(n, j)
            assert weyl_mul(xi, dj) == weyl_mul(dj, xi)


def test_mul_matches_iterated_single_variables():
    # d^3 x^2 in one variable, expanded by hand from the closed form
    n = 1
    prod = weyl_mul(weyl_monomial(n, (0,), (3,)), weyl_monomial(n, (2,), (0,)))
    by_steps = weyl_monomial(n, (0,), (3,))
    for _ in range(2):
        by_steps = weyl_mul(by_steps, weyl_x(n, 0))
    assert prod == by_steps
    assert prod == WeylElement(n, {((2,), (3,)): 1, ((1,), (2,)): 6, ((0,), (1,)): 6})


def test_weyl_mul_associative_random():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randrange(1, 4)
        P, Q, R = (random_element(rng, n) for _ in range(3))
        assert weyl_mul(weyl_mul(P, Q), R) == weyl_mul(P, weyl_mul(Q, R))


def test_substitute_euler_scalar_and_linear():
    n = A_DEMO.n
    assert substitute_euler(1, A_DEMO) == weyl_one(n)
    assert substitute_euler(0, A_DEMO).is_zero()
    s1 = BPoly(factors=(((Fraction(1), Fraction(0), Fraction(0)), Fraction(0)),))
    expanded = substitute_euler(s1, A_DEMO)
    expect = WeylElement(n, {})
    for j in range(n):
        expect = expect + weyl_theta(n, j)
    assert expanded == expect  # first row of the matrix is all ones
    assert expanded == euler_operator(A_DEMO, 0)


def test_substitute_euler_square_consistent():
    s1 = BPoly(factors=(((Fraction(1), Fraction(0), Fraction(0)), Fraction(0)),))
    sq = BPoly(factors=s1.factors * 2)
    one_shot = substitute_euler(sq, A_DEMO)
    e = substitute_euler(s1, A_DEMO)
    assert one_shot == weyl_mul(e, e)


def test_verify_weight_single_generators():
    for A in (A_DEMO, A_SMALL):
        n = A.n
        for j in range(n):
            a_j = column(A, j)
            assert verify_weight(weyl_d(n, j), A, tuple(-x for x in a_j))
            assert verify_weight(weyl_x(n, j), A, a_j)
            assert not verify_weight(weyl_d(n, j), A, a_j)


def test_contiguity_negative_column_shifts():
    n = A_DEMO.n
    zero = (0,) * n
    for j in range(n):
        chi = tuple(-x for x in column(A_DEMO, j))
        v = tuple(1 if t == j else 0 for t in range(n))
        op = contiguity_operator(A_DEMO, chi, 1, zero, v)
        assert op.element == weyl_d(n, j)
        assert verify_weight(op.element, A_DEMO, chi)
        assert verify_certificate(op, A_DEMO)


def test_contiguity_identity_shift():
    n = A_DEMO.n
    zero = (0,) * n
    op = contiguity_operator(A_DEMO, (0, 0, 0), 1, zero, zero)
    assert op.element == weyl_one(n)
    assert op.certificate.pairs == ()
    assert verify_certificate(op, A_DEMO)


def test_contiguity_demo_column_one():
    n = A_DEMO.n
    a1 = column(A_DEMO, 0)
    B = b_ideal(A_DEMO, a1)
    b = b_poly_avoiding(B, GENERIC)
    assert b is not None
    u = (1, 0, 0, 0)
    op = contiguity_operator(A_DEMO, a1, b, u, (0,) * n)
    assert not op.element.is_zero()
    assert op.certificate.pairs
    assert verify_weight(op.element, A_DEMO, a1)
    assert verify_certificate(op, A_DEMO)
    # the congruence E d^u = b(theta) d^v holds modulo the left toric ideal
    diff = weyl._shift_partials(op.element, u) - substitute_euler(b, A_DEMO)
    assert in_left_toric_ideal(A_DEMO, diff)


def test_contiguity_mixed_shift():
    # chi with both shifts nonzero exercises the telescoped divisions
    n = A_DEMO.n
    u = (1, 0, 1, 0)
    v = (0, 1, 0, 1)
    chi = vec_sub(A_DEMO.apply(u), A_DEMO.apply(v))
    B = b_ideal(A_DEMO, chi)
    b = b_poly_avoiding(B, GENERIC)
    assert b is not None
    op = contiguity_operator(A_DEMO, chi, b, u, v)
    assert op.shift_plus == u and op.shift_minus == v
    assert verify_weight(op.element, A_DEMO, chi)
    assert verify_certificate(op, A_DEMO)


def test_contiguity_rejects_bad_shift_data():
    n = A_DEMO.n
    with pytest.raises(InputError) as info:
        contiguity_operator(A_DEMO, (1, 0, 0), 1, (0,) * n, (0,) * n)
    assert info.value.code == "PARSE"


def test_contiguity_rejects_b_outside_ideal():
    a1 = column(A_DEMO, 0)
    with pytest.raises(InternalError) as info:
        contiguity_operator(A_DEMO, a1, 1, (1, 0, 0, 0), (0, 0, 0, 0))
    assert info.value.code == "NOT_IN_B_IDEAL"


def test_right_factor_check_fires_when_precheck_is_bypassed(monkeypatch):
    monkeypatch.setattr(weyl, "_b_member", lambda *args: True)
    a1 = column(A_DEMO, 0)
    with pytest.raises(InternalError) as info:
        contiguity_operator(A_DEMO, a1, 1, (1, 0, 0, 0), (0, 0, 0, 0))
    assert info.value.code == "RIGHT_FACTOR_MISSING"


def test_tampered_certificate_fails():
    a1 = column(A_DEMO, 0)
    b = b_poly_avoiding(b_ideal(A_DEMO, a1), GENERIC)
    op = contiguity_operator(A_DEMO, a1, b, (1, 0, 0, 0), (0, 0, 0, 0))
    assert verify_certificate(op, A_DEMO)
    dropped = SymmetryOperator(
        chi=op.chi,
        element=op.element,
        b=op.b,
        shift_plus=op.shift_plus,
        shift_minus=op.shift_minus,
        certificate=Certificate(pairs=op.certificate.pairs[1:]),
    )
    assert not verify_certificate(dropped, A_DEMO)
    cof, gen = op.certificate.pairs[0]
    scaled = SymmetryOperator(
        chi=op.chi,
        element=op.element,
        b=op.b,
        shift_plus=op.shift_plus,
        shift_minus=op.shift_minus,
        certificate=Certificate(pairs=((cof.scale(2), gen),) + op.certificate.pairs[1:]),
    )
    assert not verify_certificate(scaled, A_DEMO)


def test_left_ideal_membership():
    n = A_DEMO.n
    zero = (0,) * n
    gens = toric_ideal(A_DEMO).generators
    assert gens
    for g in gens:
        gen = WeylElement(n, {(zero, g.plus): 1, (zero, g.minus): -1})
        assert in_left_toric_ideal(A_DEMO, gen)
        assert in_left_toric_ideal(A_DEMO, weyl_mul(weyl_monomial(n, (1, 0, 2, 0), (0, 1, 0, 0)), gen))
    assert not in_left_toric_ideal(A_DEMO, weyl_one(n))
    assert not in_left_toric_ideal(A_DEMO, weyl_d(n, 0))


def composition_pair(A, u, v):
    """Operators for chi = Au - Av and for -chi, with their b-polynomials."""
    chi = vec_sub(A.apply(u), A.apply(v))
    neg = tuple(-x for x in chi)
    b_plus = b_poly_avoiding(b_ideal(A, chi), GENERIC[: A.d])
    b_minus = b_poly_avoiding(b_ideal(A, neg), GENERIC[: A.d])
    assert b_plus is not None and b_minus is not None
    op_plus = contiguity_operator(A, chi, b_plus, u, v)
    op_minus = contiguity_operator(A, neg, b_minus, v, u)
    return chi, b_plus, b_minus, op_plus, op_minus


def test_composition_identity_demo():
    # P_{-chi} P_chi agrees with b_chi(s+chi) b_{-chi}(s) modulo D I_A
    A = A_DEMO
    for u, v in (((1, 0, 0, 0), (0, 0, 0, 0)), ((1, 0, 1, 0), (0, 1, 0, 1))):
        chi, b_plus, b_minus, op_plus, op_minus = composition_pair(A, u, v)
        lhs = weyl_mul(op_minus.element, op_plus.element)
        rhs = substitute_euler(
            BPoly(factors=shift_bpoly(b_plus, chi).factors + b_minus.factors), A
        )
        shifted = weyl._shift_partials(lhs - rhs, u)
        assert in_left_toric_ideal(A, shifted)
        assert in_left_toric_ideal(A, lhs - rhs)
        # and the swapped order composes to b_{-chi}(s-chi) b_chi(s)
        swap = weyl_mul(op_plus.element, op_minus.element)
        rhs2 = substitute_euler(
            BPoly(
                factors=shift_bpoly(b_minus, tuple(-x for x in chi)).factors
                + b_plus.factors
            ),
            A,
        )
        assert in_left_toric_ideal(A, swap - rhs2)


def test_composition_identity_small_matrix():
    A = A_SMALL
    u = (0, 1, 0, 0)
    v = (1, 0, 0, 0)
    chi, b_plus, b_minus, op_plus, op_minus = composition_pair(A, u, v)
    lhs = weyl_mul(op_minus.element, op_plus.element)
    rhs = substitute_euler(
        BPoly(factors=shift_bpoly(b_plus, chi).factors + b_minus.factors), A
    )
    assert in_left_toric_ideal(A, weyl._shift_partials(lhs - rhs, u))
    assert in_left_toric_ideal(A, lhs - rhs)


def test_operator_weight_additive_under_product():
    rng = random.Random(19)
    n = A_SMALL.n
    cols = [column(A_SMALL, j) for j in range(n)]
    for _ in range(10):
        j, k = rng.randrange(n), rng.randrange(n)
        P = weyl_mul(weyl_x(n, j), weyl_d(n, k))
        chi = vec_sub(cols[j], cols[k])
        assert verify_weight(P, A_SMALL, chi)
