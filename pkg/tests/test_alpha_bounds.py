import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sparsekit.alpha import ALPHA, C1, C2, ONE, AlphaExpr, Ordering, alpha_compare, alpha_pow
from sparsekit.atlas import make
from sparsekit.bounds import (FNormal, OutOfDomain, PreconditionViolated, bregman_beaten,
                              classical_bounds, f_value, alpha_below_shitov, report_json,
                              verify_theorem)
from sparsekit.graph import cycle

small = st.fractions(min_value=-50, max_value=50, max_denominator=64)


def test_alpha_cubed_is_two():
    assert ALPHA ** 3 == AlphaExpr(2)
    assert alpha_pow(3) == AlphaExpr(2)
    assert alpha_pow(-3) == AlphaExpr(Fraction(1, 2))
    assert alpha_pow(5) * alpha_pow(-5) == ONE


@settings(max_examples=200, deadline=None)
@given(small, small, small, small, small, small)
def test_field_arithmetic(a, b, c, d, e, f):
    x = AlphaExpr(a, b, c)
    y = AlphaExpr(d, e, f)
    assert x + y - y == x
    assert x * y == y * x
    if not y.is_zero():
        assert (x * y) * y.inverse() == x
    # comparison agrees with floats whenever they are well separated
    fx, fy = float(x), float(y)
    if abs(fx - fy) > 1e-6:
        assert (x < y) == (fx < fy)


@settings(max_examples=200, deadline=None)
@given(small, small, small)
def test_sign_matches_norm(a, b, c):
    x = AlphaExpr(a, b, c)
    # the norm has the sign of x (the other conjugates are a complex pair)
    assert x.sign() == (x.norm() > 0) - (x.norm() < 0)


def test_decimal_is_exact():
    assert C1.decimal(4) == "0.8284"
    assert C2.decimal(4) == "0.8969"
    assert ALPHA.decimal(6) == "1.259921"
    assert (-ALPHA).decimal(3) == "-1.260"


def test_slack_string():
    assert (alpha_pow(5) - 3).slack_string() == "(-3,0,2,0)"
    assert C1.slack_string() == "(0,4,1,-3)"


def test_named_f_values():
    assert f_value(make("k2").graph).value() == ONE
    assert f_value(cycle(6)).value() == ONE
    fj = f_value(make("j").graph).value()
    assert fj == 3 * alpha_pow(-5)
    assert alpha_compare(fj, 1) is Ordering.LT
    assert alpha_compare(fj, C1) is Ordering.GT


def test_fnormal_product():
    a = FNormal(2, 3)
    assert (a * a).value() == ONE
    assert float(FNormal(3, 5)) == pytest.approx(3 * 2 ** (-5 / 3))
    with pytest.raises(ValueError):
        FNormal(-1, 0)


def test_verify_theorem():
    chk = verify_theorem(make("heawood").graph, "perm")
    assert chk.holds and not chk.equality and chk.value == 24 and chk.k == 14
    chk = verify_theorem(cycle(6))
    assert chk.holds and chk.equality
    with pytest.raises(PreconditionViolated):
        verify_theorem(cycle(4), "perm")
    chk = verify_theorem(cycle(4), "det")
    assert chk.value == 0 and chk.holds


def test_shitov_and_bregman_comparisons():
    assert all(alpha_below_shitov(k) for k in range(1, 101))
    assert [bregman_beaten(d) for d in (3, 4, 5)] == [True, True, True]
    assert not bregman_beaten(8)
    with pytest.raises(OutOfDomain):
        alpha_below_shitov(-1)


def test_classical_bounds_table():
    b = classical_bounds(7, 14, d=3)
    assert b["ryser_k"] == 3
    assert b["bregman"] == pytest.approx(6 ** (7 / 3))
    assert b["alpha"] == pytest.approx(2 ** (14 / 3))
    assert b["shitov"] == pytest.approx(3 ** 3.5)
    assert b["bruhn_rautenbach"] is None
    # heawood's permanent sits below all of them
    for key in ("hadamard", "ryser", "shitov", "alpha", "bregman"):
        assert 24 <= b[key]
    with pytest.raises(OutOfDomain):
        classical_bounds(0, 1)
    with pytest.raises(OutOfDomain):
        classical_bounds(2, 3)


def test_report_json_fields():
    import json
    doc = json.loads(report_json(make("fano").graph, "fano"))
    assert doc["perm"] == 24
    assert abs(doc["det"]) == 24


def test_constants_chain():
    assert C1 <= (3 * alpha_pow(-4)).inverse()
    assert C2 <= (alpha_pow(-1) + alpha_pow(-5)).inverse()
    assert alpha_pow(-3) + alpha_pow(-5) < C1
    assert C2 * (alpha_pow(-1) + alpha_pow(-5)) < 1
    assert alpha_pow(-4) + 2 * alpha_pow(-6) < 1
    assert math.isclose(float(C1), 0.828386, abs_tol=1e-6)
