import random
from fractions import Fraction

import pytest

from wallcross.lattice import (
    NotAHyperplane,
    SingularBasis,
    express_in_anticone_basis,
    extended_lattice,
    hermite_row_form,
    lattice_from_generators,
    primitive_wall_normal,
    quotient_transversal,
    rational_line_membership,
    solve_square,
    standard_lattice,
    vadd,
    vdot,
    vscale,
)
from wallcross.gitfan import box_elements, make_git, validate_stability

CONIFOLD_D = [(1,), (1,), (-1,), (-1,)]


def test_express_conifold():
    assert express_in_anticone_basis(CONIFOLD_D, (0,), 1) == (Fraction(1),)
    assert express_in_anticone_basis(CONIFOLD_D, (0,), 2) == (Fraction(-1),)


def test_express_identity_on_delta():
    D = [(1, 0), (1, 2), (0, 2)]
    assert express_in_anticone_basis(D, (0, 1), 0) == (Fraction(1), Fraction(0))
    assert express_in_anticone_basis(D, (0, 1), 1) == (Fraction(0), Fraction(1))


def test_express_singular():
    D = [(1, 0), (2, 0), (0, 1)]
    with pytest.raises(SingularBasis):
        express_in_anticone_basis(D, (0, 1), 2)


def test_express_round_trip_random():
    rng = random.Random(42)
    for _ in range(50):
        r = rng.randint(1, 3)
        m = rng.randint(r + 1, 6)
        D = [tuple(rng.randint(-3, 3) for _ in range(r)) for _ in range(m)]
        deltas = [
            d
            for d in __import__("itertools").combinations(range(m), r)
            if _nonsingular(D, d)
        ]
        if not deltas:
            continue
        delta = rng.choice(deltas)
        j = rng.randrange(m)
        c = express_in_anticone_basis(D, delta, j)
        recon = [sum(c[t] * D[i][k] for t, i in enumerate(delta)) for k in range(r)]
        assert tuple(recon) == tuple(Fraction(x) for x in D[j])


def _nonsingular(D, delta):
    try:
        solve_square([list(map(Fraction, D[i])) for i in delta], [0] * len(delta))
        return True
    except SingularBasis:
        return False


def test_wall_normal_conifold():
    assert primitive_wall_normal([], (Fraction(1),)) == (1,)


def test_wall_normal_gerbe():
    e = primitive_wall_normal([(1, 2)], (2, 1))
    assert e == (2, -1)
    assert vdot((1, 2), e) == 0
    assert vdot((2, 1), e) > 0


def test_wall_normal_sign_flip():
    e = primitive_wall_normal([(1, 2)], (-2, -1))
    assert e == (-2, 1)


def test_wall_normal_primitive_content():
    e = primitive_wall_normal([(2, 4)], (2, 1))
    from math import gcd

    assert gcd(*map(abs, e)) == 1


def test_wall_normal_not_hyperplane():
    with pytest.raises(NotAHyperplane):
        primitive_wall_normal([(1, 0), (0, 1)], (1, 1))


def test_line_membership_examples():
    assert rational_line_membership((Fraction(1, 2),), (1,)) == Fraction(1, 2)
    assert rational_line_membership((Fraction(0),), (1,)) == Fraction(0)
    assert rational_line_membership((Fraction(1, 3), Fraction(1, 2)), (2, -1)) is None


def test_line_membership_translation_invariance():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(1, 3)
        e = tuple(rng.randint(-3, 3) for _ in range(n))
        if all(x == 0 for x in e):
            continue
        from wallcross.lattice import primitive_integer_vector

        e = primitive_integer_vector(e)
        v = tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n))
        u = tuple(rng.randint(-3, 3) for _ in range(n))
        assert rational_line_membership(v, e) == rational_line_membership(vadd(v, u), e)


def test_line_membership_finds_alpha():
    # v = alpha e + integer vector must always be recovered
    rng = random.Random(9)
    for _ in range(40):
        n = rng.randint(1, 3)
        from wallcross.lattice import primitive_integer_vector

        e = tuple(rng.randint(-3, 3) for _ in range(n))
        if all(x == 0 for x in e):
            continue
        e = primitive_integer_vector(e)
        alpha = Fraction(rng.randint(0, 5), rng.randint(1, 6))
        alpha -= alpha.numerator // alpha.denominator
        u = tuple(rng.randint(-2, 2) for _ in range(n))
        v = vadd(vscale(alpha, e), u)
        assert rational_line_membership(v, e) == alpha


def test_extended_lattice_conifold_is_standard():
    git = make_git(CONIFOLD_D)
    lat = extended_lattice(git, (1,))
    assert lat.rows == standard_lattice(1).rows


def test_extended_lattice_resolution():
    git = make_git([(1,), (1,), (-2,)])
    lat = extended_lattice(git, (-1,))
    assert lat.rows == ((Fraction(1, 2),),)


def test_extended_lattice_contains_box_and_index():
    git = make_git([(1, 0), (1, 2), (0, 2)])
    for omega in [(2, 1), (1, 3)]:
        lat = extended_lattice(git, omega)
        assert all(lat.contains(v) for v in standard_lattice(2).rows)
        for sec in box_elements(git, validate_stability(git, omega)):
            assert lat.contains(sec.f)
        idx = lat.index_over(standard_lattice(2))
        assert isinstance(idx, int) and idx >= 1


def test_hermite_canonical():
    H = hermite_row_form([(2, 1), (0, 3)])
    assert H == [(2, 1), (0, 3)]
    H2 = hermite_row_form([(0, 3), (2, 1)])
    assert H2 == H


def test_quotient_transversal_count():
    reps = quotient_transversal([(2, 0), (1, 3)])
    assert len(reps) == 6  # |det|
    assert len(set(reps)) == 6


def test_lattice_dual():
    lat = lattice_from_generators([(Fraction(1, 2), 0), (0, 1)], 2)
    dual = lat.dual()
    for g in lat.rows:
        for d in dual.rows:
            assert vdot(g, d).denominator == 1
    assert dual.rows == ((Fraction(2), Fraction(0)), (Fraction(0), Fraction(1)))


def test_lattice_dual_skew():
    # a non-diagonal lattice: duality must pair against the rows, not columns
    lat = lattice_from_generators([(Fraction(1, 12), Fraction(1, 6), Fraction(5, 12)),
                                   (0, 1, 0), (0, 0, 1)], 3)
    dual = lat.dual()
    for g in lat.rows:
        for d in dual.rows:
            assert vdot(g, d).denominator == 1
    assert dual.contains((3, 2, 1))  # pairs integrally with every generator
    assert not dual.contains((1, 0, 0))
    assert dual.dual().rows == lat.rows
