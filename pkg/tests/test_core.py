import math
from fractions import Fraction

import pytest

from lommel import core
from lommel.core import ClosedForm, LommelParams, PhiParams, lommel_s, lommel_s_derivative, phi
from lommel.errors import DomainError
from lommel.evaluation import Evaluation, Method, linear, product

# Reference values from mpmath.hyp1f2 at 40 digits.
S_ORACLE = [
    ((0.5, 0.5, 1.0), 0.4596976941318602826),
    ((0.3, 0.5, 7.5), 0.22617114124785153894),
    ((-0.7, 0.5, 2.0), -2.798810427510983712),
    ((2.2, 1.3, 12.0), 20.37905597994053028),
    ((-2.4, 0.5, 40.0), -0.73914936794863772723),
    ((1.5, 0.5, 50.0), 7.1081732195188505221),
    ((0.1, 0.2, 0.01), 0.0053927414652126544624),
]
PHI_ORACLE = [
    ((0.5, 0, 3.0), 0.28355546174977587005),
    ((0.5, 1, 3.0), -0.32921897580575162457),
    ((0.1, 0, 25.0), -0.0084947314873516431987),
    ((0.9, 2, 10.0), -0.99939391787714534488),
    ((3.7, 0, 45.0), 0.0085694142482131903708),
]


@pytest.mark.parametrize("args,expected", S_ORACLE)
def test_lommel_s_matches_reference(args, expected):
    mu, nu, z = args
    ev = lommel_s(LommelParams(mu, nu), z)
    assert abs(ev.value - expected) <= max(ev.abs_error_estimate, 1e-15 * abs(expected))
    assert abs(ev.value - expected) <= 1e-12 * abs(expected)


@pytest.mark.parametrize("args,expected", PHI_ORACLE)
def test_phi_matches_reference(args, expected):
    mu, k, z = args
    ev = phi(PhiParams(mu, k), z)
    assert abs(ev.value - expected) <= max(ev.abs_error_estimate, 1e-15)
    assert abs(ev.value - expected) <= 1e-11 * abs(expected)


@pytest.mark.parametrize("nu", [0.5, -0.5, 1.5, 2.0])
def test_odd_negative_excluded(nu):
    with pytest.raises(DomainError, match="odd negative integer"):
        LommelParams(-1 - nu, nu)  # mu+nu = -1
    with pytest.raises(DomainError, match="odd negative integer"):
        LommelParams(nu - 3, nu)  # mu-nu = -3


def test_even_negative_allowed():
    LommelParams(-3.0, 1.0)
    LommelParams(-4.0, 0.0)
    LommelParams(-2.5, 0.3)


def test_phi_params_validation():
    with pytest.raises(DomainError):
        PhiParams(0.0, 0)
    with pytest.raises(DomainError):
        PhiParams(1.0, 2)
    with pytest.raises(DomainError):
        PhiParams(0.5, -1)
    assert PhiParams(0.5, 1).a == Fraction(3, 2)


@pytest.mark.parametrize("z", [0.0, -1.0, math.inf, math.nan])
def test_lommel_rejects_bad_z(z):
    with pytest.raises(DomainError):
        lommel_s(LommelParams(0.5, 0.5), z)


def test_phi_is_even_and_one_at_zero():
    p = PhiParams(0.3, 1)
    assert phi(p, 0.0).value == 1.0
    assert phi(p, -2.7).value == phi(p, 2.7).value
    assert phi(p, 0.0, 1).value == 0.0


def test_phi_derivative_orders():
    with pytest.raises(DomainError):
        phi(PhiParams(0.5), 1.0, 3)


@pytest.mark.parametrize("mu,k", [(0.5, 0), (0.2, 1), (2.7, 0)])
@pytest.mark.parametrize("z", [0.3, 4.0, 17.0])
def test_phi_derivatives_against_finite_differences(mu, k, z):
    p = PhiParams(mu, k)
    h = 1e-4
    f = lambda t: phi(p, t).value
    d1 = (f(z + h) - f(z - h)) / (2 * h)
    d2 = (f(z + h) - 2 * f(z) + f(z - h)) / h**2
    assert phi(p, z, 1).value == pytest.approx(d1, abs=1e-7)
    assert phi(p, z, 2).value == pytest.approx(d2, abs=1e-5)


@pytest.mark.parametrize("mu,nu", [(0.5, 0.5), (-0.7, 0.5), (2.2, 1.3)])
@pytest.mark.parametrize("z", [0.5, 6.0, 21.0])
def test_lommel_derivative_against_finite_differences(mu, nu, z):
    p = LommelParams(mu, nu)
    h = 1e-5
    d = (lommel_s(p, z + h).value - lommel_s(p, z - h).value) / (2 * h)
    assert lommel_s_derivative(p, z).value == pytest.approx(d, rel=1e-7, abs=1e-9)


@pytest.mark.parametrize("which,mu", [("S12", 0.5), ("S32", 1.5), ("S52", 2.5)])
def test_closed_forms(which, mu):
    p = LommelParams(mu, 0.5)
    for z in (0.2, math.pi, 9.0, 2 * math.pi + 0.01, 29.0):
        ev = lommel_s(p, z)
        cf = core.closed_form_half(which, z)
        assert abs(ev.value - cf) <= 1e-12 * abs(cf)
        d = lommel_s_derivative(p, z).value
        assert core.closed_form_half_derivative(which, z) == pytest.approx(d, rel=1e-11, abs=1e-14)


def test_closed_form_known_values():
    assert core.closed_form_half(ClosedForm.S12, math.pi) == pytest.approx(2 / math.sqrt(math.pi), rel=1e-15)
    assert core.closed_form_half("S32", math.pi) == pytest.approx(math.sqrt(math.pi), rel=1e-15)


def test_phi_matches_lommel_through_rescaling():
    for mu, k, z in [(0.5, 0, 2.0), (0.3, 1, 9.0), (1.7, 0, 14.0)]:
        assert abs(core.residual_phi_vs_s(PhiParams(mu, k), z)) <= 1e-12 * (1 + z ** (mu - k + 1))


@pytest.mark.parametrize("mu", [0.1, 0.5, 0.9, 2.3])
@pytest.mark.parametrize("z", [0.7, 5.0, 23.0])
def test_recurrences_vanish(mu, z):
    assert abs(core.residual_phi_recurrence(PhiParams(mu, 0), z)) < 1e-12
    if mu != 0.5:  # s_{-1/2,1/2} is undefined
        assert abs(core.residual_s_recurrence(LommelParams(mu, 0.5), z)) < 1e-10 * (1 + z**mu)
    assert abs(core.residual_diff(LommelParams(mu, 0.8), z)) < 1e-10 * (1 + z**mu)
    assert abs(core.residual_shift2(LommelParams(mu, 0.8), z)) < 1e-10 * z ** (mu + 1)


def test_recurrence_b_requires_half():
    with pytest.raises(DomainError):
        core.residual_s_recurrence(LommelParams(0.5, 0.3), 1.0)


def test_pochhammer():
    assert core.pochhammer(3, 0) == 1
    assert core.pochhammer(3, 4) == 3 * 4 * 5 * 6
    assert core.pochhammer(-2.5, 3) == pytest.approx(-2.5 * -1.5 * -0.5)
    assert core.pochhammer(Fraction(1, 2), 2) == Fraction(3, 4)
    with pytest.raises(ValueError):
        core.pochhammer(1, -1)


def test_evaluation_validation_and_helpers():
    with pytest.raises(ValueError):
        Evaluation(1.0, -1.0)
    with pytest.raises(ValueError):
        Evaluation(1.0, 0.0, cancellation_index=0.5)
    a = Evaluation(2.0, 1e-10)
    b = Evaluation(3.0, 1e-10)
    p = product(a, b)
    assert p.value == 6.0 and p.abs_error_estimate >= 5e-10
    d = linear([(1.0, b), (-1.0, a)])
    assert d.value == 1.0 and d.abs_error_estimate >= 2e-10
    assert a.agrees_with(Evaluation(2.0 + 0.5e-10, 0.0))
    assert not a.agrees_with(Evaluation(2.0 + 2e-10, 0.0))
    assert a.agrees_with(Evaluation(2.0 + 2e-10, 0.0), slack=2e-10)
    assert float(a) == 2.0
    assert Method("Series") is Method.SERIES
