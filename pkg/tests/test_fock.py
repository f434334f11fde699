"""Tests for the Fock space, oscillator actions, and Laurent operators."""

from fractions import Fraction as F

import pytest

from fockcalc.exact import graded_dimension
from fockcalc.fock import (FockVector, LaurentPolyVector, basis, d_apply,
                           diff_op_apply, fock_str, h_apply, monomial,
                           vacuum, weight, weight_basis)


def mono(*parts):
    return FockVector({monomial(parts): F(1)})


def test_monomial_canonical_form():
    assert monomial([1, 3, 1]) == (3, 1, 1)
    with pytest.raises(ValueError):
        monomial([0, 2])


def test_h_creation_on_vacuum():
    assert h_apply(-2, vacuum()) == mono(2)
    assert h_apply(-1, h_apply(-3, vacuum())) == mono(3, 1)


def test_h_annihilation():
    # h(1) h(-1) vacuum = [h(1), h(-1)] vacuum = 1 * vacuum
    assert h_apply(1, mono(1)) == vacuum()
    # 2 d/dh(-2) on h(-2)^2
    assert h_apply(2, mono(2, 2)) == mono(2).scale(4)
    # annihilator with no matching part
    assert not h_apply(3, mono(2, 1))


def test_h_zero_mode_vanishes():
    for m in basis(3):
        assert not h_apply(0, FockVector({m: F(1)}))


def test_h_shifts_weight():
    v = mono(3, 1)
    for n in range(-4, 5):
        out = h_apply(n, v)
        if out:
            assert weight(out) == weight(v) - n


def test_heisenberg_relations():
    # [h(m), h(n)] = m delta_{m+n,0} on every basis vector up to weight 5
    for m in range(-5, 6):
        for n in range(-5, 6):
            for mon_ in basis(5):
                v = FockVector({mon_: F(1)})
                lhs = h_apply(m, h_apply(n, v)) - h_apply(n, h_apply(m, v))
                rhs = v.scale(m) if m + n == 0 else FockVector()
                assert lhs == rhs, (m, n, mon_)


def test_annihilator_kills_low_weight():
    for n in range(1, 6):
        for w in range(n):
            for mon_ in weight_basis(w):
                assert not h_apply(n, FockVector({mon_: F(1)}))


def test_weight():
    assert weight(vacuum()) == 0
    assert weight(mono(3, 1, 1)) == 5
    assert weight(mono(1, 1) + mono(2)) == 2
    with pytest.raises(ValueError):
        weight(FockVector())
    with pytest.raises(ValueError):
        weight(mono(1) + mono(2))


def test_basis_ordering():
    assert basis(2) == [(), (1,), (2,), (1, 1)]
    assert weight_basis(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))


def test_basis_counts_match_graded_dimension():
    ser = graded_dimension(9)
    for w in range(10):
        assert len(weight_basis(w)) == ser.coeff(w)


def test_fock_vector_arithmetic():
    v = mono(2) + mono(1, 1).scale(F(1, 2))
    w = v - mono(2)
    assert w == mono(1, 1).scale(F(1, 2))
    assert not (v - v)
    assert fock_str(v) == "1/2*[1,1] + 1*[2]"
    assert fock_str(FockVector()) == "0"
    assert v.to_json() == [
        {"monomial": [1, 1], "coefficient": "1/2"},
        {"monomial": [2], "coefficient": "1"},
    ]


# ---------------------------------------------------------------------------
# Laurent polynomials and the projected differential operators
# ---------------------------------------------------------------------------

def test_d_apply():
    p = LaurentPolyVector({3: F(1), -2: F(5)})
    assert d_apply(p) == LaurentPolyVector({3: F(3), -2: F(-10)})
    assert not d_apply(LaurentPolyVector({0: F(7)}))


def test_diff_op_examples():
    for m in range(-4, 5):
        tm = LaurentPolyVector.monomial(m)
        # r=0, n=0: the operator is -D
        assert diff_op_apply(0, 0, tm) == tm.scale(-m)
        # r=1, n=0: D^3
        assert diff_op_apply(1, 0, tm) == tm.scale(m ** 3)
    # D kills constants for any r >= 1, n
    for r in range(1, 3):
        for n in range(-2, 3):
            assert not diff_op_apply(r, n, LaurentPolyVector.monomial(0))


def test_diff_op_closed_form():
    # on t^m the operator acts by (-1)^{r+1} m^{r+1} (m+n)^r t^{m+n}
    for r in range(3):
        for n in range(-3, 4):
            for m in range(-4, 5):
                got = diff_op_apply(r, n, LaurentPolyVector.monomial(m))
                coeff = (-1) ** (r + 1) * m ** (r + 1) * (m + n) ** r
                want = LaurentPolyVector({m + n: F(coeff)} if coeff else {})
                assert got == want


def test_diff_op_composition_law():
    # applying the r=0 operator twice matches the direct second computation
    p = LaurentPolyVector({2: F(1), -1: F(3)})
    once = diff_op_apply(0, 1, p)
    twice = diff_op_apply(0, 2, once)
    for m, c in p.terms.items():
        expect = c * m * (m + 1) * F(1)
        assert twice.terms.get(m + 3, F(0)) == expect
