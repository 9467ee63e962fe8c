"""Smoke tests for the python bindings."""

import math
from fractions import Fraction

import pytest

import eseries as es


def test_b_coefficients():
    assert es.b_coeff(0) == Fraction(1)
    assert es.b_coeff(2) == Fraction(1, 24)
    assert es.b_coeff(6) == Fraction(3625, 580608)


def test_d_routes_agree():
    for n in range(1, 40):
        assert es.d_from_b(n) == es.d_from_recurrence(n)
    assert es.d_from_b(4) == Fraction(139, 17280)
    assert es.d_from_recurrence(2) == 0


def test_coefficient_table():
    rows = es.coefficient_table("d-conversion", 5)
    assert rows[0] == (1, Fraction(1, 2))
    assert rows[-1] == (5, Fraction(119, 23040))


def test_pow_and_truncation():
    assert es.pow_expr(1.0) == pytest.approx(2.0, abs=1e-15)
    deep = es.eval_truncated(5.0, 30)
    assert deep == pytest.approx(es.pow_expr(5.0), abs=1e-15)
    assert float(es.pow_expr_str("10", digits=20).replace("e", "E")) == pytest.approx(
        (1 + 1 / 10) ** 10
    )


def test_truncation_exponent():
    assert es.truncation_exponent("11/12", 1) == pytest.approx(3.0, abs=0.05)
    assert es.truncation_exponent("1", 1) == pytest.approx(2.0, abs=0.05)


def test_quadrature_routes():
    assert es.g_mass() == pytest.approx(math.e / 24, abs=1e-12)
    assert es.d_from_integral(3) == pytest.approx(5 / 288, abs=1e-12)
    direct = es.alzer_h(1.0, "direct")
    integral = es.alzer_h(1.0, "integral")
    assert direct == pytest.approx(2 * (math.e - 2), abs=1e-12)
    assert direct == pytest.approx(integral, abs=1e-12)


def test_carleman_weights_and_reports():
    assert es.weight_fraction("d-series:1", 1) == Fraction(17, 23)
    assert es.weight_fraction("ping-guozheng", 1) is None
    assert es.pointwise_margin("bicheng-debnath", 1000) > 0

    report = es.finite_carleman_report("geometric:1/2", "classical", 5000)
    assert report["holds"]
    assert report["lhs"] == pytest.approx(1 / (2 - math.sqrt(2)), abs=1e-8)

    ranking = es.tightness_ranking(["bicheng-debnath", "d-series:3"], 500)
    assert ranking[0][0] == "d-series:3"


def test_fit_roots():
    assert abs(es.fit_root("c")) < 1e-6
    assert es.fit_root("d") == pytest.approx(5 / 288, abs=1e-6)


def test_errors_surface_as_exceptions():
    with pytest.raises(ValueError):
        es.coefficient_table("nope", 3)
    with pytest.raises(es.QuadratureError):
        es.g_mass(tolerance=1e-40, max_levels=1)
