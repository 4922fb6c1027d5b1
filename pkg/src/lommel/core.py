"""Lommel functions of the first kind and the entire functions phi_k.

``s(mu, nu; z)`` is evaluated from its 1F2 representation

    s = z**(mu+1) / ((mu-nu+1)(mu+nu+1)) * 1F2(1; (mu-nu+3)/2, (mu+nu+3)/2; -z**2/4)

and ``phi_k(z) = 1F2(1; (mu-k+2)/2, (mu-k+3)/2; -z**2/4)``, the normalised
even entire function attached to ``s(mu-k-1/2, 1/2)``.  Derivatives are taken
term by term; nothing here uses finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from ._series import hyp_sum, precision_mode, get_precision, WORKING, EXTENDED
from .errors import DomainError
from .evaluation import Evaluation, Method, linear

__all__ = [
    "LommelParams",
    "PhiParams",
    "ClosedForm",
    "pochhammer",
    "hyp1F2_unit",
    "lommel_s",
    "lommel_s_derivative",
    "phi",
    "closed_form_half",
    "closed_form_half_derivative",
    "residual_phi_recurrence",
    "residual_s_recurrence",
    "residual_diff",
    "residual_shift2",
    "residual_phi_vs_s",
    "precision_mode",
    "get_precision",
    "WORKING",
    "EXTENDED",
]

HALF = Fraction(1, 2)
_EPS = 2.0**-52


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _odd_negative_integer(v: Fraction) -> bool:
    return v.denominator == 1 and v < 0 and v.numerator % 2 == 1


@dataclass(frozen=True)
class LommelParams:
    """Order pair ``(mu, nu)`` of ``s_{mu,nu}``.

    Raises DomainError when ``mu + nu`` or ``mu - nu`` is an odd negative
    integer, where the function is undefined.
    """

    mu: float
    nu: float

    def __post_init__(self):
        m, n = _frac(self.mu), _frac(self.nu)
        if _odd_negative_integer(m - n):
            raise DomainError(f"mu-nu is an odd negative integer (mu={self.mu}, nu={self.nu})")
        if _odd_negative_integer(m + n):
            raise DomainError(f"mu+nu is an odd negative integer (mu={self.mu}, nu={self.nu})")


@dataclass(frozen=True)
class PhiParams:
    """Parameters ``(mu, k)`` of ``phi_k``; ``mu - k`` must not be in {0, -1, -2, ...}."""

    mu: float
    k: int = 0

    def __post_init__(self):
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 0:
            raise DomainError(f"k must be a nonnegative integer, got {self.k!r}")
        d = _frac(self.mu) - self.k
        if d.denominator == 1 and d <= 0:
            raise DomainError(f"mu-k is a nonpositive integer (mu={self.mu}, k={self.k})")

    @property
    def a(self) -> Fraction:
        """Pochhammer base ``mu - k + 2`` of the even-power coefficients."""
        return _frac(self.mu) - self.k + 2


def pochhammer(a, n: int):
    """Rising factorial ``a (a+1) ... (a+n-1)`` as a running product.

    Works for any real (or Fraction) ``a``, including negative values.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = a * 0 + 1
    for j in range(n):
        out *= a + j
    return out


def hyp1F2_unit(b1, b2, x) -> Evaluation:
    """``1F2(1; b1, b2; x) = sum_n x**n / ((b1)_n (b2)_n)``."""
    return hyp_sum(_frac(b1), _frac(b2), _frac(x))


def _check_positive(z: float) -> float:
    z = float(z)
    if not z > 0.0 or not math.isfinite(z):
        raise DomainError(f"z must be positive and finite, got {z}")
    return z


def _lommel_parts(p: LommelParams):
    mu, nu = _frac(p.mu), _frac(p.nu)
    d = (mu - nu + 1) * (mu + nu + 1)
    if d == 0:
        raise DomainError(f"(mu-nu+1)(mu+nu+1) vanishes (mu={p.mu}, nu={p.nu})")
    return mu, nu, (mu - nu + 3) / 2, (mu + nu + 3) / 2, d


def _scaled(pref: float, series: Evaluation) -> Evaluation:
    value = pref * series.value
    err = abs(pref) * series.abs_error_estimate + 4 * _EPS * abs(value)
    return Evaluation(
        value, err, series.terms_used, Method.SERIES, series.cancellation_index, series.extended
    )


def lommel_s(p: LommelParams, z: float) -> Evaluation:
    """Lommel function of the first kind ``s_{mu,nu}(z)`` for ``z > 0``."""
    z = _check_positive(z)
    mu, nu, b1, b2, d = _lommel_parts(p)
    series = hyp_sum(b1, b2, -_frac(z) ** 2 / 4)
    return _scaled(z ** float(mu + 1) / float(d), series)


def lommel_s_derivative(p: LommelParams, z: float) -> Evaluation:
    """``d/dz s_{mu,nu}(z)`` by termwise differentiation of the 1F2 series."""
    z = _check_positive(z)
    mu, nu, b1, b2, d = _lommel_parts(p)
    series = hyp_sum(b1, b2, -_frac(z) ** 2 / 4, (mu + 1, Fraction(2)))
    return _scaled(z ** float(mu) / float(d), series)


def phi(p: PhiParams, z: float, m: int = 0) -> Evaluation:
    """The ``m``-th derivative (m in {0, 1, 2}) of ``phi_k`` at real ``z``."""
    if m not in (0, 1, 2):
        raise DomainError(f"derivative order must be 0, 1 or 2, got {m!r}")
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"z must be finite, got {z}")
    a = p.a
    x = -_frac(z) ** 2 / 4
    if m == 0:
        return hyp_sum(a / 2, (a + 1) / 2, x)
    # phi^(m) = -2/(a(a+1)) * z**(2-m) * sum_j w_m(j) x**j / ((a/2+1)_j ((a+3)/2)_j)
    weight = (Fraction(1), Fraction(1)) if m == 1 else (Fraction(1), Fraction(3), Fraction(2))
    series = hyp_sum(a / 2 + 1, (a + 3) / 2, x, weight)
    pref = -2.0 / float(a * (a + 1))
    if m == 1:
        pref *= z
    return _scaled(pref, series)


class ClosedForm(str, Enum):
    S12 = "S12"
    S32 = "S32"
    S52 = "S52"


def closed_form_half(which: ClosedForm | str, z: float) -> float:
    """Elementary forms of ``s_{1/2,1/2}``, ``s_{3/2,1/2}`` and ``s_{5/2,1/2}``.

    ``1 - cos z`` is written as ``2 sin(z/2)**2`` so that the double zeros at
    multiples of 2*pi keep full relative accuracy.
    """
    which = ClosedForm(which)
    z = _check_positive(z)
    root = math.sqrt(z)
    one_minus_cos = 2.0 * math.sin(0.5 * z) ** 2
    if which is ClosedForm.S12:
        return one_minus_cos / root
    if which is ClosedForm.S32:
        return (z - math.sin(z)) / root
    return (z * z - 2.0 * one_minus_cos) / root


def closed_form_half_derivative(which: ClosedForm | str, z: float) -> float:
    which = ClosedForm(which)
    z = _check_positive(z)
    root = math.sqrt(z)
    f = closed_form_half(which, z) * root
    if which is ClosedForm.S12:
        df = math.sin(z)
    elif which is ClosedForm.S32:
        df = 2.0 * math.sin(0.5 * z) ** 2
    else:
        df = 2.0 * z - 2.0 * math.sin(z)
    return df / root - f / (2.0 * z * root)


def residual_phi_recurrence(p: PhiParams, z: float) -> float:
    """``(mu-k+1) phi_{k+1} - (mu-k+1) phi_k - z phi_k'``; zero analytically."""
    c = float(_frac(p.mu) - p.k + 1)
    nxt = PhiParams(p.mu, p.k + 1)
    return linear([(c, phi(nxt, z)), (-c, phi(p, z)), (-float(z), phi(p, z, 1))]).value


def residual_s_recurrence(p: LommelParams, z: float) -> float:
    """``s'_{mu,1/2} + s_{mu,1/2}/(2z) - (mu-1/2) s_{mu-1,1/2}``; zero analytically."""
    if _frac(p.nu) != HALF:
        raise DomainError(f"recurrence is stated for nu=1/2, got nu={p.nu}")
    z = _check_positive(z)
    lower = LommelParams(p.mu - 1, 0.5)
    return linear(
        [
            (1.0, lommel_s_derivative(p, z)),
            (0.5 / z, lommel_s(p, z)),
            (-(p.mu - 0.5), lommel_s(lower, z)),
        ]
    ).value


def residual_diff(p: LommelParams, z: float) -> float:
    """``[z^nu s_{mu,nu}]' - (mu+nu-1) z^nu s_{mu-1,nu-1}``, divided by ``z^nu``."""
    z = _check_positive(z)
    lower = LommelParams(p.mu - 1, p.nu - 1)
    return linear(
        [
            (p.nu / z, lommel_s(p, z)),
            (1.0, lommel_s_derivative(p, z)),
            (-(p.mu + p.nu - 1), lommel_s(lower, z)),
        ]
    ).value


def residual_shift2(p: LommelParams, z: float) -> float:
    """``s_{mu+2,nu} - z^{mu+1} + ((mu+1)^2 - nu^2) s_{mu,nu}``; zero analytically."""
    z = _check_positive(z)
    upper = LommelParams(p.mu + 2, p.nu)
    power = Evaluation(z ** (p.mu + 1), 2 * _EPS * z ** (p.mu + 1), 0, Method.CLOSED_FORM)
    c = float((_frac(p.mu) + 1) ** 2 - _frac(p.nu) ** 2)
    return linear([(1.0, lommel_s(upper, z)), (-1.0, power), (c, lommel_s(p, z))]).value


def residual_phi_vs_s(p: PhiParams, z: float) -> float:
    """``sqrt(z) s_{mu-k-1/2,1/2} - z^{mu-k+1}/((mu-k)(mu-k+1)) phi_k``."""
    z = _check_positive(z)
    d = _frac(p.mu) - p.k
    lp = LommelParams(float(d - HALF), 0.5)
    c = z ** float(d + 1) / float(d * (d + 1))
    return linear([(math.sqrt(z), lommel_s(lp, z)), (-c, phi(p, z))]).value
