"""Signed margins of the Turan, Laguerre and Wronskian-type inequalities.

Every expression returns an :class:`Evaluation` whose error estimate is
propagated to first order from its constituents, so callers can decide
whether the sign of the margin is certified at a chosen guard factor.
Throughout, ``s(mu)`` abbreviates ``s_{mu,1/2}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .core import LommelParams, PhiParams, lommel_s, lommel_s_derivative, phi
from .errors import DomainError
from .evaluation import Evaluation, Method, linear, product


class InequalityKind(str, Enum):
    TURAN1 = "turan1"
    TURAN_DELTA = "turan-delta"
    WEIGHTED_TURAN0 = "weighted-turan0"
    WEIGHTED_TURAN1 = "weighted-turan1"
    WRONSKIAN01 = "wronskian01"
    WRONSKIAN12 = "wronskian12"
    LAGUERRE = "laguerre"
    RATIO_MONOTONE = "ratio-monotone"
    S_POSITIVE = "s-positive"
    ETA_IDENTITY = "eta-identity"


class WronskianLevel(str, Enum):
    PHI01 = "Phi01"
    PHI12 = "Phi12"


def _s(mu: float, z: float) -> Evaluation:
    return lommel_s(LommelParams(mu, 0.5), z)


def _ds(mu: float, z: float) -> Evaluation:
    return lommel_s_derivative(LommelParams(mu, 0.5), z)


def turan_delta(mu: float, z: float) -> Evaluation:
    """``Delta_mu(z) = s(mu)^2 - s(mu-1) s(mu+1)``."""
    mid = _s(mu, z)
    return linear([(1.0, product(mid, mid)), (-1.0, product(_s(mu - 1, z), _s(mu + 1, z)))])


def turan_margin(mu: float, z: float) -> Evaluation:
    """``Delta_mu(z) - s(mu)^2 / (1/2 - mu)``; positive for mu in (-5/2, -1/2), mu != -3/2."""
    if mu == 0.5:
        raise DomainError("mu=1/2 makes 1/(1/2-mu) undefined")
    mid = _s(mu, z)
    c = 1.0 - 1.0 / (0.5 - mu)
    return linear([(c, product(mid, mid)), (-1.0, product(_s(mu - 1, z), _s(mu + 1, z)))])


def _phi_triplet(mu: float, k: int, z: float):
    p = PhiParams(mu, k)
    return phi(p, z), phi(p, z, 1), phi(p, z, 2)


def _level_k(level) -> int:
    return 0 if WronskianLevel(level) is WronskianLevel.PHI01 else 1


def phi_wronskian(mu: float, z: float, level: WronskianLevel | str = WronskianLevel.PHI01) -> Evaluation:
    """``z f g' - f g - z g f'`` with ``(f, g) = (phi_0, phi_1)`` or ``(phi_1, phi_2)``.

    Negative for mu in (0, 1) and z > 0 at either level.
    """
    k = _level_k(level)
    f, df, _ = _phi_triplet(mu, k, z)
    g, dg = phi(PhiParams(mu, k + 1), z), phi(PhiParams(mu, k + 1), z, 1)
    return linear([(z, product(f, dg)), (-1.0, product(f, g)), (-z, product(g, df))])


def wronskian_laguerre_form(mu: float, z: float, level: WronskianLevel | str = WronskianLevel.PHI01) -> Evaluation:
    """``-f^2 + z^2/(mu-k+1) (f f'' - f'^2)``, the same quantity rewritten via the recurrence."""
    k = _level_k(level)
    f, df, d2f = _phi_triplet(mu, k, z)
    c = z * z / (mu - k + 1.0)
    return linear([(-1.0, product(f, f)), (c, product(f, d2f)), (-c, product(df, df))])


def wronskian_forms_residual(mu: float, z: float, level: WronskianLevel | str = WronskianLevel.PHI01) -> Evaluation:
    """Difference between :func:`phi_wronskian` and :func:`wronskian_laguerre_form`."""
    return linear([(1.0, phi_wronskian(mu, z, level)), (-1.0, wronskian_laguerre_form(mu, z, level))])


def laguerre_margin(params: PhiParams, z: float) -> Evaluation:
    """``phi_k'(z)^2 - phi_k(z) phi_k''(z)``."""
    f, df, d2f = phi(params, z), phi(params, z, 1), phi(params, z, 2)
    return linear([(1.0, product(df, df)), (-1.0, product(f, d2f))])


@dataclass(frozen=True)
class RatioMonotone:
    """The Wronskian ``s'(mu+1) s(mu) - s(mu+1) s'(mu)`` computed two ways.

    ``direct`` uses termwise derivatives; ``identity`` uses
    ``(mu+1/2) s(mu)^2 - (mu-1/2) s(mu-1) s(mu+1)``.  The sign of ``direct``
    is the sign of ``d/dz [s(mu+1)/s(mu)]`` wherever ``s(mu) != 0``.
    """

    direct: Evaluation
    identity: Evaluation

    @property
    def residual(self) -> float:
        return self.direct.value - self.identity.value

    @property
    def value(self) -> float:
        return self.direct.value


def ratio_monotone_margin(mu: float, z: float) -> RatioMonotone:
    mid, upper = _s(mu, z), _s(mu + 1, z)
    direct = linear([(1.0, product(_ds(mu + 1, z), mid)), (-1.0, product(upper, _ds(mu, z)))])
    identity = linear([(mu + 0.5, product(mid, mid)), (-(mu - 0.5), product(_s(mu - 1, z), upper))])
    return RatioMonotone(direct, identity)


def weighted_turan0(mu: float, z: float) -> Evaluation:
    """``(mu-2) s(mu-5/2) s(mu-1/2) - (mu-1) s(mu-3/2)^2``; positive for mu in (0, 1)."""
    a = _s(mu - 1.5, z)
    return linear([(mu - 2.0, product(_s(mu - 2.5, z), _s(mu - 0.5, z))), (-(mu - 1.0), product(a, a))])


def weighted_turan1(mu: float, z: float) -> Evaluation:
    """``(mu-3) s(mu-7/2) s(mu-3/2) - (mu-2) s(mu-5/2)^2``; positive for mu in (0, 1)."""
    a = _s(mu - 2.5, z)
    return linear([(mu - 3.0, product(_s(mu - 3.5, z), _s(mu - 1.5, z))), (-(mu - 2.0), product(a, a))])


def eta_closed(z: float) -> float:
    """``(z^2 - 4) cos z + cos^2 z - 2 z sin z + 3``, equal to ``z Delta_{3/2}(z)``."""
    c, s = math.cos(z), math.sin(z)
    return (z * z - 4.0) * c + c * c - 2.0 * z * s + 3.0


def eta_identity_residual(z: float) -> Evaluation:
    """``z Delta_{3/2}(z) - eta(z)``."""
    eta = eta_closed(z)
    closed = Evaluation(eta, 8 * 2.0**-52 * (z * z + 4.0 + 2.0 * z + 4.0), 0, Method.CLOSED_FORM)
    return linear([(z, turan_delta(1.5, z)), (-1.0, closed)])


def evaluate(kind: InequalityKind | str, mu: float, z: float, k: int = 0) -> Evaluation:
    """Margin of ``kind`` at ``(mu, z)``; ``k`` selects phi_k for the Laguerre margin."""
    kind = InequalityKind(kind)
    if kind is InequalityKind.TURAN1:
        return turan_margin(mu, z)
    if kind is InequalityKind.TURAN_DELTA:
        return turan_delta(mu, z)
    if kind is InequalityKind.WEIGHTED_TURAN0:
        return weighted_turan0(mu, z)
    if kind is InequalityKind.WEIGHTED_TURAN1:
        return weighted_turan1(mu, z)
    if kind is InequalityKind.WRONSKIAN01:
        return phi_wronskian(mu, z, WronskianLevel.PHI01)
    if kind is InequalityKind.WRONSKIAN12:
        return phi_wronskian(mu, z, WronskianLevel.PHI12)
    if kind is InequalityKind.LAGUERRE:
        return laguerre_margin(PhiParams(mu, k), z)
    if kind is InequalityKind.RATIO_MONOTONE:
        return ratio_monotone_margin(mu, z).direct
    if kind is InequalityKind.S_POSITIVE:
        return _s(mu, z)
    return eta_identity_residual(z)


def expected_sign(kind: InequalityKind | str, mu: float, k: int = 0) -> int | None:
    """Sign the margin must have at ``mu`` when a proved result covers it, else None.

    For ``ETA_IDENTITY`` the margin is a residual and the expectation is 0.
    """
    kind = InequalityKind(kind)
    unit = 0.0 < mu < 1.0
    proved = -2.5 < mu < -0.5 and mu != -1.5
    if kind is InequalityKind.TURAN1:
        return 1 if proved else None
    if kind is InequalityKind.RATIO_MONOTONE:
        return -1 if proved else None
    if kind in (InequalityKind.WEIGHTED_TURAN0, InequalityKind.WEIGHTED_TURAN1):
        return 1 if unit else None
    if kind in (InequalityKind.WRONSKIAN01, InequalityKind.WRONSKIAN12):
        return -1 if unit else None
    if kind is InequalityKind.LAGUERRE:
        return 1 if unit and k in (0, 1) else None
    if kind is InequalityKind.S_POSITIVE:
        return 1 if mu > 0.5 else None
    if kind is InequalityKind.ETA_IDENTITY:
        return 0
    return None
