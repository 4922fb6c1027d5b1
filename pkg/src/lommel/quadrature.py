"""Integral representations of phi_0, phi_1 and s_{mu-1/2,1/2} for mu > 0.

These are evaluated by adaptive Gauss-Legendre panels and serve as an
oracle independent of the power series:

    z phi_0(z) = mu (mu+1) int_0^1 (1-t)^(mu-1) sin(z t) dt
      phi_1(z) = mu        int_0^1 (1-t)^(mu-1) cos(z t) dt
    sqrt(z) s_{mu-1/2,1/2}(z) = int_0^z t^(mu-1) sin(z-t) dt

For mu < 1 the algebraic endpoint singularity is removed by the substitution
u = (1-t)^mu (or v = t^mu for the convolution form), after which
``(1-t)^(mu-1) dt = du / mu``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, QuadratureFailure
from .evaluation import Evaluation, Method

_EPS = 2.0**-52


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-11
    abs_tol: float = 1e-13
    max_subdivisions: int = 2**14
    node_count: int = 16

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0 or not 0.0 < self.abs_tol < 1.0:
            raise ValueError("rel_tol and abs_tol must lie in (0, 1)")
        if self.node_count < 4:
            raise ValueError("node_count must be at least 4")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be positive")


DEFAULT_SPEC = QuadratureSpec()


@lru_cache(maxsize=16)
def _rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def integrate(f, a: float, b: float, max_width: float, spec: QuadratureSpec = DEFAULT_SPEC):
    """Adaptive composite Gauss-Legendre integral of vectorised ``f`` on [a, b].

    Panels start no wider than ``max_width``.  A panel is accepted when its
    estimate agrees with the sum over its two halves to within its share of
    the tolerance; otherwise both halves are queued.  Accepted contributions
    are summed in left-to-right order, so the result does not depend on the
    order in which panels were processed.

    Returns ``(value, abs_error_estimate, panel_count)``.
    """
    x, w = _rule(spec.node_count)
    n0 = max(1, math.ceil((b - a) / max_width))
    edges = np.linspace(a, b, n0 + 1)
    pending_a, pending_b = edges[:-1], edges[1:]
    done: list[tuple[float, float, float, float]] = []
    total_width = b - a
    used = n0
    first = True
    scale = None
    while pending_a.size:
        mid = 0.5 * (pending_a + pending_b)
        whole = _panels(f, pending_a, pending_b, x, w)
        left = _panels(f, pending_a, mid, x, w)
        right = _panels(f, mid, pending_b, x, w)
        fine = left[0] + right[0]
        err = np.abs(fine - whole[0])
        if first:
            scale = abs(math.fsum(fine))
            first = False
        budget = max(spec.abs_tol, spec.rel_tol * scale) * (pending_b - pending_a) / total_width
        rounding = _EPS * (left[1] + right[1]) * 8
        ok = err <= budget
        for i in np.nonzero(ok)[0]:
            done.append((pending_a[i], fine[i], err[i], rounding[i]))
        bad = ~ok
        if bad.any():
            used += int(bad.sum())
            if used > spec.max_subdivisions:
                raise QuadratureFailure(
                    f"tolerance not met after {spec.max_subdivisions} subdivisions on [{a}, {b}]"
                )
            pending_a, pending_b = (
                np.concatenate([pending_a[bad], mid[bad]]),
                np.concatenate([mid[bad], pending_b[bad]]),
            )
        else:
            break
    done.sort(key=lambda item: item[0])
    value = math.fsum(item[1] for item in done)
    err = math.fsum(item[2] + item[3] for item in done)
    return value, err, used


def _panels(f, lo, hi, x, w):
    half = 0.5 * (hi - lo)
    centre = 0.5 * (hi + lo)
    nodes = centre[:, None] + half[:, None] * x[None, :]
    vals = f(nodes)
    return (vals * w).sum(axis=1) * half, (np.abs(vals) * w).sum(axis=1) * np.abs(half)


def _check(mu: float, z: float, allow_zero: bool = False):
    if not mu > 0.0:
        raise DomainError(f"integral representation requires mu > 0, got {mu}")
    if not (z > 0.0 or (allow_zero and z == 0.0)) or not math.isfinite(z):
        raise DomainError(f"z must be positive, got {z}")


def _unit_interval_moment(mu: float, z: float, kernel, spec: QuadratureSpec):
    """``mu * int_0^1 (1-t)^(mu-1) kernel(z t) dt``."""
    if mu < 1.0:
        inv = 1.0 / mu

        def g(u):
            return kernel(z * (1.0 - u**inv))

        # d t / d u is at most 1/mu on [0, 1]
        width = math.pi / (2.0 * max(z * inv, 1.0))
        return integrate(g, 0.0, 1.0, width, spec)

    def g(t):
        return mu * (1.0 - t) ** (mu - 1.0) * kernel(z * t)

    width = math.pi / (2.0 * max(z, 1.0))
    return integrate(g, 0.0, 1.0, width, spec)


def phi0_by_integral(mu: float, z: float, spec: QuadratureSpec = DEFAULT_SPEC) -> Evaluation:
    """``phi_0(z) = (mu (mu+1) / z) int_0^1 (1-t)^(mu-1) sin(z t) dt``."""
    _check(mu, z)
    val, err, panels = _unit_interval_moment(mu, z, np.sin, spec)
    c = (mu + 1.0) / z
    value = c * val
    return Evaluation(value, abs(c) * err + 4 * _EPS * abs(value), panels, Method.QUADRATURE)


def phi1_by_integral(mu: float, z: float, spec: QuadratureSpec = DEFAULT_SPEC) -> Evaluation:
    """``phi_1(z) = mu int_0^1 (1-t)^(mu-1) cos(z t) dt``."""
    _check(mu, z, allow_zero=True)
    val, err, panels = _unit_interval_moment(mu, z, np.cos, spec)
    return Evaluation(val, err + 2 * _EPS * abs(val), panels, Method.QUADRATURE)


def _convolution(mu: float, z: float, kernel, spec: QuadratureSpec):
    """``int_0^z t^(mu-1) kernel(z - t) dt``."""
    if mu < 1.0:
        inv = 1.0 / mu
        top = z**mu

        def g(v):
            return kernel(z - v**inv) * inv

        # d t / d v = v^(1/mu - 1) / mu, largest at the upper end
        rate = inv * z ** (1.0 - mu)
        return integrate(g, 0.0, top, math.pi / (2.0 * max(rate, 1e-300)), spec)

    def g(t):
        return t ** (mu - 1.0) * kernel(z - t)

    return integrate(g, 0.0, z, math.pi / 2.0, spec)


def s_by_convolution(mu: float, z: float, spec: QuadratureSpec = DEFAULT_SPEC) -> Evaluation:
    """``s_{mu-1/2,1/2}(z) = z^(-1/2) int_0^z t^(mu-1) sin(z-t) dt``."""
    _check(mu, z)
    val, err, panels = _convolution(mu, z, np.sin, spec)
    c = 1.0 / math.sqrt(z)
    value = c * val
    return Evaluation(value, c * err + 4 * _EPS * abs(value), panels, Method.QUADRATURE)


def cosine_convolution(mu: float, z: float, spec: QuadratureSpec = DEFAULT_SPEC) -> Evaluation:
    """``int_0^z t^(mu-1) cos(z-t) dt``, which equals ``(mu-1) sqrt(z) s_{mu-3/2,1/2}(z)``."""
    _check(mu, z)
    val, err, panels = _convolution(mu, z, np.cos, spec)
    return Evaluation(val, err + 2 * _EPS * abs(val), panels, Method.QUADRATURE)
