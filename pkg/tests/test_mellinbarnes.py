import cmath
import math
from fractions import Fraction

import pytest

from wallcross.gitfan import fixed_point_labels, next_to_pairs
from wallcross.hypergeom import conifold_point, generic_lambdas, make_inner_spec, w_constant
from wallcross.mellinbarnes import (
    ContourSpec,
    IncompatibleLifts,
    choose_abscissa,
    continuation_coefficient,
    continuation_matrix,
    continuation_numeric,
    left_residue_sum,
    lift_invariance_check,
    mb_integral,
    mb_integral_with_error,
    negative_integer_residue_is_zero,
    pole_separation,
    right_residue_sum,
    verify_residue_identity,
)


def _xio(wc, scale):
    w = w_constant(wc)
    c = abs(float(conifold_point(wc)))
    return scale * c * cmath.exp(1j * math.pi * w)


def test_conifold_coefficient_closed_form(conifold):
    pair = next(
        p for p in next_to_pairs(conifold) if p[0].delta == (0,) and p[1].delta == (2,)
    )
    coeff = continuation_coefficient(conifold, pair)
    assert coeff.l == 1 and coeff.w == 1 and coeff.j_minus == 2
    for lam in generic_lambdas(conifold, 3, seed=17):
        l1, l2, l3, l4 = lam
        expected = cmath.exp(-(l1 + l3) / 2) * cmath.sinh((l1 + l4) / 2) / cmath.sinh((l4 - l3) / 2)
        assert abs(coeff.value(conifold, lam) - expected) < 1e-13 * abs(expected)


def test_unit_principal_ratio_when_l_is_one(conifold):
    # for l = 1 the principal sine ratio collapses to 1: the value equals the
    # exponential factor times the plain sine ratios
    pair = next_to_pairs(conifold)[0]
    coeff = continuation_coefficient(conifold, pair)
    lam = generic_lambdas(conifold, 1, seed=19)[0]
    from wallcross.localization import restrict_u

    X = coeff.u_form(lam) / (2j * math.pi) + complex(coeff.shift)
    manual = cmath.exp(-1j * math.pi * coeff.w * X / coeff.l)
    up = restrict_u(conifold.git, pair[0].delta)
    um = restrict_u(conifold.git, pair[1].delta)
    for j in coeff.ratio_js:
        manual *= cmath.sin(math.pi * up[j](lam) / (2j * math.pi)) / cmath.sin(
            math.pi * um[j](lam) / (2j * math.pi)
        )
    assert abs(coeff.value(conifold, lam) - manual) < 1e-14 * abs(manual)


def test_coefficient_matches_numeric_oracle(conifold, resolution):
    for wc in (conifold, resolution):
        x_out = _xio(wc, 3.0)
        for lam in generic_lambdas(wc, 10, seed=23):
            for pair in next_to_pairs(wc):
                closed = continuation_coefficient(wc, pair).value(wc, lam)
                numeric = continuation_numeric(wc, pair, x_out, lam)
                assert abs(closed - numeric) < 1e-7 * max(1.0, abs(closed))


def test_incompatible_lifts_rejected(conifold, gerbe_flop):
    pair = next_to_pairs(conifold)[0]
    with pytest.raises(IncompatibleLifts):
        # not a representative of the plus sector class at all
        continuation_coefficient(
            conifold, pair, lift_plus=(Fraction(1, 3),), lift_minus=(Fraction(0),)
        )
    gpair = next(
        p for p in next_to_pairs(gerbe_flop) if p[0].sector.is_zero and p[1].sector.is_zero
    )
    with pytest.raises(IncompatibleLifts):
        # valid class representatives whose difference leaves the wall line
        continuation_coefficient(
            gerbe_flop, gpair,
            lift_plus=(Fraction(0), Fraction(0)),
            lift_minus=(Fraction(1), Fraction(0)),
        )


def test_matrix_structure_conifold(conifold):
    mat = continuation_matrix(conifold)
    assert len(mat.rows) == 2 and len(mat.cols) == 2
    assert all(kind == "coefficient" for kind in mat.kinds.values())


def test_matrix_structure_resolution(resolution):
    mat = continuation_matrix(resolution)
    assert len(mat.rows) == 2 and len(mat.cols) == 2
    assert all(kind == "coefficient" for kind in mat.kinds.values())
    assert {l.f for l in mat.cols} == {(Fraction(0),), (Fraction(1, 2),)}


def test_matrix_structure_gerbe(gerbe_flop):
    mat = continuation_matrix(gerbe_flop)
    assert len(mat.rows) == 4 and len(mat.cols) == 4
    kinds = {}
    for (i, j), kind in mat.kinds.items():
        kinds.setdefault(kind, 0)
        kinds[kind] += 1
    # two common fixed points give identity entries; the two sectors over the
    # crossing pair give coefficient entries against both minus sectors
    assert kinds["identity"] == 2
    assert kinds["coefficient"] == 4
    assert kinds["zero"] == 10
    # identity rows are unit rows: no other nonzero entry in those rows
    for i, lp in enumerate(mat.rows):
        if lp.delta in gerbe_flop.A_minus.minimal:
            row_kinds = [mat.kinds[(i, j)] for j in range(len(mat.cols))]
            assert row_kinds.count("identity") == 1
            assert row_kinds.count("coefficient") == 0


def test_residue_identity(conifold, resolution):
    for wc in (conifold, resolution):
        x_in, x_out = _xio(wc, 0.3), _xio(wc, 3.0)
        lam = generic_lambdas(wc, 1, seed=29)[0]
        for label in fixed_point_labels(wc.git, wc.A_plus, side="plus"):
            rep = verify_residue_identity(wc, label, x_in, x_out, lam)
            assert rep.residual_inside < 1e-8
            assert rep.residual_outside < 1e-8


def test_residue_identity_precondition(conifold):
    lam = generic_lambdas(conifold, 1, seed=29)[0]
    label = fixed_point_labels(conifold.git, conifold.A_plus)[0]
    with pytest.raises(ValueError):
        verify_residue_identity(conifold, label, _xio(conifold, 2.0), _xio(conifold, 3.0), lam)


def test_abscissa_independence(conifold):
    lam = generic_lambdas(conifold, 1, seed=31)[0]
    label = fixed_point_labels(conifold.git, conifold.A_plus)[0]
    spec = make_inner_spec(conifold, label)
    x = _xio(conifold, 0.4)
    v1 = mb_integral(spec, x, lam, ContourSpec(abscissa=-0.15))
    v2 = mb_integral(spec, x, lam, ContourSpec(abscissa=-0.35))
    assert abs(v1 - v2) < 1e-9 * max(1.0, abs(v1))


def test_pole_separation_positive(conifold, resolution):
    for wc in (conifold, resolution):
        lam = generic_lambdas(wc, 1, seed=37)[0]
        label = fixed_point_labels(wc.git, wc.A_plus)[0]
        spec = make_inner_spec(wc, label)
        assert pole_separation(spec, lam) > 1e-3
        sigma = choose_abscissa(spec, lam, ContourSpec())
        assert -0.45 <= sigma <= -0.05


def test_negative_integer_residues_vanish(conifold, resolution):
    for wc in (conifold, resolution):
        label = fixed_point_labels(wc.git, wc.A_plus)[0]
        spec = make_inner_spec(wc, label)
        for n in range(4):
            assert negative_integer_residue_is_zero(spec, n)


def test_left_sum_equals_minus_integral(resolution):
    # the grouped left residues reproduce the continued integral with the
    # residue classes of both sectors contributing
    lam = generic_lambdas(resolution, 1, seed=41)[0]
    label = fixed_point_labels(resolution.git, resolution.A_plus)[0]
    spec = make_inner_spec(resolution, label)
    x_out = _xio(resolution, 3.0)
    v, err = mb_integral_with_error(spec, x_out, lam)
    left = left_residue_sum(spec, x_out, lam)
    assert abs(v + left) < 1e-9


def test_lift_invariance(all_examples):
    for wc in all_examples.values():
        lam = generic_lambdas(wc, 1, seed=43)[0]
        for pair in next_to_pairs(wc):
            assert lift_invariance_check(wc, pair, lam)


def test_right_sum_matches_series(conifold):
    # inside the degeneration radius, the right residue sum carries the
    # inner series: the ratio of consecutive right terms equals the ratio of
    # series coefficients
    from wallcross.hypergeom import inner_series

    lam = generic_lambdas(conifold, 1, seed=47)[0]
    label = fixed_point_labels(conifold.git, conifold.A_plus)[0]
    spec = make_inner_spec(conifold, label)
    x = _xio(conifold, 0.25)
    ser = inner_series(spec, 40, lam)
    v = mb_integral(spec, x, lam)
    r = right_residue_sum(spec, x, lam)
    assert abs(v - r) < 1e-10
    # normalization: series = right sum / (value at the trivial exponent)
    r0 = right_residue_sum(spec, _xio(conifold, 1e-300), lam)
    assert abs(ser.eval(x) - r / r0) < 1e-9
