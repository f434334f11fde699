"""Tests for the multivariate series core and the generating-function
operator calculus."""

from fractions import Fraction as F
from math import factorial

import pytest

from fockcalc.fock import FockVector, basis, fock_str, monomial, vacuum
from fockcalc.quadratic import Lbar_apply, Lr_apply, L_apply
from fockcalc.series import (NEG_POWERS_Y1, NEG_POWERS_Y2, MultiSeries,
                             UncertifiedError, apply_dilation, apply_taylor,
                             comb_int, constant_series, contraction_check,
                             convention, delta_series, exp_linear_form,
                             monomial_series, normal_ordered_pair,
                             one_minus_exp_inverse, plusplus_pair,
                             regularized_commutator_check, trunc_var,
                             window_var)


def mono(*parts):
    return FockVector({monomial(parts): F(1)})


# ---------------------------------------------------------------------------
# series core
# ---------------------------------------------------------------------------

def test_delta_series_coefficients():
    vs = (window_var("x1", -6, 6), window_var("x2", -6, 6))
    d = delta_series(vs, {"x1": 1, "x2": -1}, (-6, 6))
    assert d.coeff((5, -5)) == 1
    assert d.coeff((3, -2)) == 0
    with pytest.raises(UncertifiedError):
        d.coeff((7, -7))


def test_delta_times_one_minus_x():
    vs = (window_var("x", -5, 5),)
    d = delta_series(vs, {"x": 1}, (-5, 5))
    poly = constant_series(vs).sub(monomial_series(vs, {"x": 1}))
    prod = d.mul(poly)
    # telescoping: zero on the interior, lowest window exponent uncertified
    assert prod.x_ival["x"] == (-4, 5)
    assert not prod.terms
    assert prod.coeff((0,)) == 0
    with pytest.raises(UncertifiedError):
        prod.coeff((-5,))


def test_window_product_of_two_deltas_is_uncertifiable():
    vs = (window_var("x", -3, 3),)
    d = delta_series(vs, {"x": 1}, (-3, 3))
    with pytest.raises(UncertifiedError):
        d.mul(d)


def test_half_certified_products():
    # power-series-like objects in a window variable: certified (None, hi)
    vs = (window_var("x", -8, 8),)
    a = MultiSeries(vs, {(0,): F(1), (1,): F(1)}, {"x": (None, 2)})
    b = MultiSeries(vs, {(0,): F(1), (1,): F(1)}, {"x": (None, 3)})
    prod = a.mul(b)
    # truncated-product rule recovered: certified through min(2+0, 3+0, 6)
    assert prod.x_ival["x"] == (None, 2)
    assert prod.terms == {(0,): F(1), (1,): F(2), (2,): F(1)}
    # opposite half-lines leave unknown-times-unknown meetings: empty
    c = MultiSeries(vs, {(0,): F(1)}, {"x": (1, None)})
    with pytest.raises(UncertifiedError):
        a.mul(c)


def test_zero_series_products_respect_certification():
    vs = (window_var("x", -4, 4),)
    window_zero = MultiSeries(vs, {}, {"x": (-2, 2)})
    complete_one = constant_series(vs)
    d = delta_series(vs, {"x": 1}, (-4, 4))
    # zero-on-window times complete: zero, certified on the window shape
    prod = window_zero.mul(complete_one)
    assert not prod.terms
    assert prod.x_ival["x"] == (-2, 2)
    # zero-on-window times a window series: nothing is certifiable
    with pytest.raises(UncertifiedError):
        window_zero.mul(d)
    # complete zero times anything: certified zero everywhere
    complete_zero = MultiSeries(vs, {}, {"x": (None, None)})
    prod = complete_zero.mul(d)
    assert not prod.terms
    assert prod.x_ival["x"] == (None, None)


def test_taylor_on_polynomial():
    vs = (trunc_var("y", 3), window_var("x", -5, 5))
    f = monomial_series(vs, {"x": 2})
    out = apply_taylor("y", f, "x")
    assert out.terms == {(0, 2): F(1), (1, 1): F(2), (2, 0): F(1)}


def test_taylor_on_negative_power():
    vs = (trunc_var("y", 2), window_var("x", -6, 6))
    f = monomial_series(vs, {"x": -1})
    out = apply_taylor("y", f, "x")
    assert out.terms == {(0, -1): F(1), (1, -2): F(-1), (2, -3): F(1)}


def test_taylor_of_delta_matches_binomial_route():
    vs = (trunc_var("y", 2), window_var("x", -4, 4), window_var("x2", -6, 6))
    d = delta_series(vs, {"x": 1, "x2": -1}, (-4, 4))
    out = apply_taylor("y", d, "x")
    # ((x+y)/x2)^n expands to C(n,k) x^{n-k} y^k x2^{-n}
    for (k, ex, ex2), c in out.terms.items():
        n = -ex2
        assert ex == n - k
        assert c == comb_int(n, k)
    assert out.x_ival["x"] == (-4, 2)


def test_dilation_monomial():
    vs = (trunc_var("y", 2), window_var("x", -5, 5))
    f = monomial_series(vs, {"x": 3})
    out = apply_dilation("y", f, "x")
    assert out.terms == {(0, 3): F(1), (1, 3): F(3), (2, 3): F(9, 2)}


def test_dilation_of_delta():
    vs = (trunc_var("y", 3), window_var("x", -4, 4))
    d = delta_series(vs, {"x": 1}, (-4, 4))
    out = apply_dilation("y", d, "x")
    for n in range(-4, 5):
        assert out.coeff((1, n)) == n
        assert out.coeff((2, n)) == F(n * n, 2)


def test_dilation_composition_law():
    # e^{y1 D} e^{y2 D} = e^{(y1+y2) D}: coefficient of y1^a y2^b x^n is
    # n^{a+b} / (a! b!)
    vs = (trunc_var("y1", 2), trunc_var("y2", 2), window_var("x", -3, 3))
    f = monomial_series(vs, {"x": 2})
    out = apply_dilation("y1", apply_dilation("y2", f, "x"), "x")
    for (a, b, n), c in out.terms.items():
        assert n == 2
        assert c == F(2 ** (a + b), factorial(a) * factorial(b))


def test_exp_linear_form():
    vs = (trunc_var("y1", 3), trunc_var("y2", 3))
    ser = exp_linear_form(vs, {"y1": 2, "y2": -1}, 3)
    assert ser.coeff((0, 0)) == 1
    assert ser.coeff((1, 0)) == 2
    assert ser.coeff((1, 1)) == -2
    assert ser.coeff((2, 0)) == 2
    with pytest.raises(UncertifiedError):
        ser.coeff((4, 0))


def test_diff_shifts_certification():
    vs = (trunc_var("y", 3),)
    ser = exp_linear_form(vs, {"y": 1}, 3)
    d = ser.diff("y")
    assert d.tcap == 2
    assert d.coeff((0,)) == 1
    assert d.coeff((2,)) == F(1, 2)


# ---------------------------------------------------------------------------
# the geometric pole
# ---------------------------------------------------------------------------

def test_one_minus_exp_inverse_body():
    loc = one_minus_exp_inverse("y1", "y2", 6)
    body = loc.body
    assert body.coeff((0, 0)) == 1          # F(0,0) = 1
    # diagonal profile u/(1 - e^{-u}) = 1 + u/2 + u^2/12 - u^4/720 ...
    assert body.coeff((1, 0)) == F(1, 2)
    assert body.coeff((0, 1)) == F(-1, 2)


def test_one_minus_exp_inverse_expansion():
    loc = one_minus_exp_inverse("y1", "y2", 8)
    exp = loc.expand(NEG_POWERS_Y1, -6)
    # 1/(1-e^{-u}) = u^{-1} + 1/2 + u/12 - u^3/720 + ...
    assert exp.coeff((0, 0)) == F(1, 2)
    assert exp.coeff((1, 0)) == F(1, 12)
    assert exp.coeff((-1, 0)) == 1
    # pure negative powers come from the geometric expansion of (y1-y2)^-1
    assert exp.coeff((-2, 1)) == 1
    assert exp.neg_floor == {"y1": -6}


def test_expansion_requires_distinguished_variable():
    from fockcalc.series import ExpansionConvention
    loc = one_minus_exp_inverse("y1", "y2", 4)
    with pytest.raises(ValueError):
        loc.expand(ExpansionConvention("y3"), -4)
    assert convention("neg-powers-y1") is NEG_POWERS_Y1
    with pytest.raises(ValueError):
        convention("neg-powers-y3")


def test_expanded_series_refuse_products():
    loc = one_minus_exp_inverse("y1", "y2", 4)
    exp = loc.expand(NEG_POWERS_Y1, -4)
    with pytest.raises(UncertifiedError):
        exp.mul(exp)


def test_localized_derivative_fold():
    # d/dy1 of (y1-y2)^{-1} F = (y1-y2)^{-2} (lambda dF/dy1 - F)
    loc = one_minus_exp_inverse("y1", "y2", 6)
    dloc = loc.dy("y1")
    assert dloc.order == 2
    # expanded derivative: d/du [u^{-1} + 1/2 + u/12 - u^3/720]
    exp = dloc.expand(NEG_POWERS_Y1, -6)
    assert exp.coeff((-2, 0)) == -1
    assert exp.coeff((0, 0)) == F(1, 12)
    assert exp.coeff((1, 0)) == 0


# ---------------------------------------------------------------------------
# generating products
# ---------------------------------------------------------------------------

def test_colon_pair_diagonal_extraction():
    for mon_ in basis(3):
        v = FockVector({mon_: F(1)})
        pair = normal_ordered_pair("y1", "y2", "x", v, (-4, 4), 6)
        for r in range(3):
            for n in range(-3, 4):
                got = pair.terms.get((r, r, -n), FockVector())
                got = got.scale(F(factorial(r) ** 2, 2))
                assert got == Lr_apply(r, n, v), (mon_, r, n)


def test_colon_pair_r0_is_L():
    v = mono(2, 1)
    pair = normal_ordered_pair("y1", "y2", "x", v, (-3, 3), 2)
    for n in range(-3, 4):
        got = pair.terms.get((0, 0, -n), FockVector()).scale(F(1, 2))
        assert got == L_apply(n, v)


def test_colon_pair_vacuum_has_no_scalar():
    pair = normal_ordered_pair("y1", "y2", "x", vacuum(), (-3, 3), 4)
    assert not [c for c in pair.terms if c[2] == 0]


def test_plusplus_pair_zero_mode_eigenvalues():
    pp = plusplus_pair("y1", "y2", "x", vacuum(), (-3, 3), 8)
    for r in range(4):
        got = pp.terms.get((r, r, 0), FockVector())
        got = got.scale(F(factorial(r) ** 2, 2))
        assert got == Lbar_apply(r, 0, vacuum()), r


def test_plusplus_matches_colon_away_from_zero_mode():
    v = mono(1)
    pp = plusplus_pair("y1", "y2", "x", v, (-3, 3), 4)
    colon = normal_ordered_pair("y1", "y2", "x", v, (-3, 3), 4)
    for cell, vec in colon.terms.items():
        if cell[2] != 0:
            assert pp.terms.get(cell) == vec


def test_plusplus_both_conventions_agree_on_diagonal():
    v = mono(2)
    for conv in (NEG_POWERS_Y1, NEG_POWERS_Y2):
        pp = plusplus_pair("y1", "y2", "x", v, (-2, 2), 6, conv)
        for r in range(3):
            got = pp.terms.get((r, r, 0), FockVector())
            got = got.scale(F(factorial(r) ** 2, 2))
            assert got == Lbar_apply(r, 0, v)


# ---------------------------------------------------------------------------
# contraction identity
# ---------------------------------------------------------------------------

def test_contraction_scalar_cells_on_vacuum():
    rep = contraction_check(vacuum(), 6)
    assert rep.passed
    cells = {c.key: c for c in rep.cells}
    assert cells["x1^-1 x2^1"].lhs == "1*[]"
    assert cells["x1^-3 x2^3"].lhs == "3*[]"
    # off the contraction diagonal nothing scalar survives on the vacuum
    assert "x1^-1 x2^2" not in cells or cells["x1^-1 x2^2"].lhs != "1*[]"


def test_contraction_on_low_weight_basis():
    for mon_ in basis(3):
        rep = contraction_check(FockVector({mon_: F(1)}), 8)
        assert rep.passed, mon_


# ---------------------------------------------------------------------------
# the generating-function commutator identity
# ---------------------------------------------------------------------------

def test_commutator_genfun_vacuum():
    rep = regularized_commutator_check(vacuum(), 3, 1)
    assert rep.passed
    assert rep.counts["failed"] == 0
    assert rep.counts["uncertified"] == 0


def test_commutator_genfun_zero_y_slice_matches_bracket_data():
    v = mono(1)
    rep = regularized_commutator_check(v, 3, 1)
    assert rep.passed
    cells = {c.key: c for c in rep.cells}
    for m in (1, 2):
        expect = (Lbar_apply(0, m, Lbar_apply(0, -m, v))
                  - Lbar_apply(0, -m, Lbar_apply(0, m, v)))
        assert cells[f"x1^{-m} x2^{m}"].lhs == fock_str(expect)
        assert cells[f"x1^{-m} x2^{m}"].status == "pass"


def test_commutator_genfun_alternative_convention():
    rep = regularized_commutator_check(vacuum(), 3, 1, NEG_POWERS_Y2)
    assert rep.passed
    assert rep.parameters["convention"] == "neg-powers-y2"


def test_commutator_genfun_grading_cells_vanish():
    # cells with x1 + x2 exponent sum different from the weight shift are 0=0
    v = mono(1)
    rep = regularized_commutator_check(v, 2, 1)
    assert rep.passed
    for c in rep.cells:
        if "x1^2 x2^2" in c.key and c.lhs != "0":
            raise AssertionError("weight-violating cell is nonzero")


def test_commutator_genfun_lhs_is_convention_independent():
    # only the expanded right side depends on the convention; the left
    # side values must agree cell-for-cell between the two runs
    v = mono(1)
    rep1 = regularized_commutator_check(v, 2, 1, NEG_POWERS_Y1)
    rep2 = regularized_commutator_check(v, 2, 1, NEG_POWERS_Y2)
    lhs1 = {c.key: c.lhs for c in rep1.cells}
    lhs2 = {c.key: c.lhs for c in rep2.cells}
    for key in set(lhs1) & set(lhs2):
        assert lhs1[key] == lhs2[key], key


def test_multiseries_json_records():
    vs = (trunc_var("y", 2), window_var("x", -3, 3))
    ser = monomial_series(vs, {"x": -2}, F(3, 4))
    records = ser.to_json()
    assert records == [{"exponents": {"x": -2}, "coefficient": "3/4"}]
