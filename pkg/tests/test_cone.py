"""Facet support functions and the face lattice."""

import random
from fractions import Fraction
from math import gcd

import pytest

from ahyper.errors import InternalError
from ahyper.cone import face_lattice, facets, positive_functional
from ahyper.lattice import IntMatrix, column_lattice, dot

A_DEMO = ((1, 1, 1, 1), (0, 0, 1, 2), (0, 1, 1, 0))
A_NORMAL3 = ((1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, -1))
A_CURVE = ((1, 1, 1, 1, 1), (0, 2, 4, 7, 9))


def random_homogeneous(rng, d, n):
    # first row all ones pins the homogeneity functional to (1, 0, ..., 0)
    while True:
        rows = [tuple(1 for _ in range(n))]
        for _ in range(d - 1):
            rows.append(tuple(rng.randint(-3, 3) for _ in range(n)))
        try:
            return IntMatrix(tuple(rows))
        except Exception:
            continue


def test_demo_matrix_has_four_facets():
    A = IntMatrix(A_DEMO)
    fs = facets(A)
    assert len(fs) == 4
    assert [s.zero_columns for s in fs] == [(0, 1), (0, 3), (1, 2), (2, 3)]
    fl = face_lattice(A)
    dims = [f.dim for f in fl.faces]
    assert len(fl.faces) == 10
    assert dims.count(0) == 1 and dims.count(1) == 4
    assert dims.count(2) == 4 and dims.count(3) == 1


def test_normal3_support_values_are_the_four_sign_forms():
    A = IntMatrix(A_NORMAL3)
    beta = (Fraction(5), Fraction(7), Fraction(11))
    vals = sorted(dot(s.f, beta) for s in facets(A))
    b1, b2, b3 = beta
    assert vals == sorted([b1, b2, b1 + b3, b2 + b3])


def test_curve_has_two_facets():
    C = IntMatrix(A_CURVE)
    fs = facets(C)
    assert len(fs) == 2
    by_zero = {s.zero_columns: s.f for s in fs}
    assert by_zero[(0,)] == (0, 1)
    assert by_zero[(4,)] == (9, -1)
    fl = face_lattice(C)
    assert [f.columns for f in fl.faces] == [(), (0,), (4,), (0, 1, 2, 3, 4)]


def test_ray_has_trivial_face_lattice():
    R = IntMatrix(((1, 1, 1),))
    fl = face_lattice(R)
    assert [f.columns for f in fl.faces] == [(), (0, 1, 2)]


def test_support_function_invariants_random():
    rng = random.Random(101)
    for _ in range(40):
        d = rng.randint(1, 3)
        n = rng.randint(d + 1, d + 3)
        A = random_homogeneous(rng, d, n)
        ZA = column_lattice(A)
        for s in facets(A):
            vals = [dot(s.f, A.column(j)) for j in range(A.n)]
            if s.zero_columns:
                assert min(vals) == 0
            else:
                # the origin is the only facet of a one-dimensional cone
                assert A.d == 1
            assert all(v >= 0 for v in vals)
            assert [j for j, v in enumerate(vals) if v == 0] == list(s.zero_columns)
            # primitive on the column lattice: the values on a basis are
            # integers with gcd one, so 1 is attained
            bvals = [dot(s.f, b) for b in ZA.vectors]
            assert all(Fraction(v).denominator == 1 for v in bvals)
            g = 0
            for v in bvals:
                g = gcd(g, int(v))
            assert g == 1


def test_face_lattice_closed_and_galois_stable():
    rng = random.Random(113)
    for _ in range(25):
        d = rng.randint(1, 3)
        n = rng.randint(d + 1, d + 3)
        A = random_homogeneous(rng, d, n)
        fl = face_lattice(A)
        sets = [frozenset(f.columns) for f in fl.faces]
        assert frozenset(range(A.n)) in sets
        assert frozenset() in sets
        for x in sets:
            for y in sets:
                assert x & y in sets
        for f in fl.faces:
            # double dual: intersect the zero sets of all incident facets
            J = frozenset(range(A.n))
            for i in f.incident_facets:
                J &= frozenset(fl.facets[i].zero_columns)
            assert J == frozenset(f.columns)


def test_positive_functional_signature():
    rng = random.Random(127)
    for _ in range(25):
        d = rng.randint(1, 3)
        n = rng.randint(d + 1, d + 3)
        A = random_homogeneous(rng, d, n)
        fl = face_lattice(A)
        for tau in fl.proper_faces():
            g = positive_functional(A, tau)
            for j in range(A.n):
                v = dot(g, A.column(j))
                if j in tau.columns:
                    assert v == 0
                else:
                    assert v > 0 and Fraction(v).denominator == 1
        whole = fl.face_by_columns(tuple(range(A.n)))
        with pytest.raises(InternalError):
            positive_functional(A, whole)
