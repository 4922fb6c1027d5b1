import math

import pytest

from lommel.core import PhiParams
from lommel.errors import DomainError
from lommel.inequalities import (
    InequalityKind,
    WronskianLevel,
    eta_closed,
    eta_identity_residual,
    evaluate,
    expected_sign,
    laguerre_margin,
    ratio_monotone_margin,
    wronskian_forms_residual,
    turan_delta,
    turan_margin,
    phi_wronskian,
)


def test_laguerre_margin_at_origin():
    # phi'' (0) = -2 / (a (a+1)) with a = mu - k + 2
    ev = laguerre_margin(PhiParams(0.5, 0), 0.0)
    assert ev.value == pytest.approx(2 / (2.5 * 3.5), rel=1e-15)


def test_eta_special_values():
    for n in range(1, 6):
        assert eta_closed((2 * n - 1) * math.pi) == pytest.approx(8 - ((2 * n - 1) * math.pi) ** 2, abs=1e-9)
        assert eta_closed(2 * n * math.pi) == pytest.approx((2 * n * math.pi) ** 2, abs=1e-9)


@pytest.mark.parametrize("z", [0.3, 2.0, 9.9, 20.0, 31.0])
def test_eta_matches_turan_delta(z):
    ev = eta_identity_residual(z)
    assert abs(ev.value) < 1e-10 * max(1.0, z * z)
    assert z * turan_delta(1.5, z).value == pytest.approx(eta_closed(z), rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("mu", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("level", list(WronskianLevel))
def test_two_wronskian_forms_agree(mu, level):
    for z in (0.5, 4.0, 17.0, 29.0):
        assert abs(wronskian_forms_residual(mu, z, level).value) < 1e-12


@pytest.mark.parametrize("mu", [-2.4, -1.2, 0.3, 2.5])
def test_ratio_wronskian_identity(mu):
    for z in (0.5, 6.0, 25.0):
        rm = ratio_monotone_margin(mu, z)
        scale = rm.direct.abs_error_estimate + rm.identity.abs_error_estimate
        assert abs(rm.residual) <= scale + 1e-12 * abs(rm.value)


def test_ratio_wronskian_equals_scaled_turan_margin():
    mu, z = -1.2, 3.3
    rm = ratio_monotone_margin(mu, z)
    assert rm.value == pytest.approx((mu - 0.5) * turan_margin(mu, z).value, rel=1e-10)


def test_turan_margin_margin_undefined_at_half():
    with pytest.raises(DomainError):
        turan_margin(0.5, 1.0)


def test_turan_margin_excluded_orders():
    with pytest.raises(DomainError):
        turan_margin(-1.5, 1.0)


@pytest.mark.parametrize("mu", [-2.4, -1.9, -1.1, -0.6])
def test_turan_margin_sign_spot_checks(mu):
    for z in (0.1, 1.0, 10.0, 45.0):
        ev = turan_margin(mu, z)
        assert ev.value > 1e3 * ev.abs_error_estimate


@pytest.mark.parametrize("mu", [0.2, 0.8])
def test_unit_interval_signs(mu):
    for z in (0.5, 5.0, 15.0):
        assert evaluate("weighted-turan0", mu, z).value > 0
        assert evaluate("weighted-turan1", mu, z).value > 0
        assert phi_wronskian(mu, z).value < 0
        assert evaluate(InequalityKind.WRONSKIAN12, mu, z).value < 0
        assert evaluate("laguerre", mu, z, k=1).value > 0


def test_s_positivity():
    for z in (0.5, 7.0, 40.0):
        assert evaluate("s-positive", 0.7, z).value > 0


def test_expected_signs():
    assert expected_sign("turan1", -1.0) == 1
    assert expected_sign("turan1", -1.5) is None
    assert expected_sign("turan1", 2.0) is None
    assert expected_sign("ratio-monotone", -2.0) == -1
    assert expected_sign("wronskian01", 0.5) == -1
    assert expected_sign("laguerre", 0.5, k=2) is None
    assert expected_sign("s-positive", 0.4) is None
    assert expected_sign("eta-identity", 0.0) == 0


def test_unknown_kind():
    with pytest.raises(ValueError):
        evaluate("nope", 0.5, 1.0)
