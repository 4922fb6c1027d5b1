"""Positive zeros of phi_k, interlacing checks, and reconstructions from zeros.

Zeros are located by a sign scan on the series evaluation and refined with
Brent's method; the product and partial-fraction forms are only ever fed
zeros computed here, never used to find them.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from scipy.optimize import brentq, minimize_scalar

from .core import PhiParams, phi
from .errors import ConvergenceFailure, DomainError, PoleHit, WindowMismatch
from .evaluation import Evaluation, Method

DOUBLE_ROOT_THRESHOLD = 1e-9


@dataclass(frozen=True)
class RootConfig:
    scan_step: float = math.pi / 8
    refine_tol: float = 1e-13
    max_zeros: int = 10_000

    def __post_init__(self):
        if not 0.0 < self.scan_step <= math.pi / 4:
            raise ValueError("scan_step must lie in (0, pi/4]")
        if not self.refine_tol >= 1e-14:
            raise ValueError("refine_tol must be at least 1e-14")
        if self.max_zeros < 1:
            raise ValueError("max_zeros must be positive")


@dataclass
class ZeroTable:
    """Ascending positive zeros of ``phi_k`` inside ``(0, z_max]``.

    ``residuals[i]`` is ``|phi_k(zeros[i])|`` and ``residual_bounds[i]`` the
    level it is expected to stay under: ten times the series error estimate
    plus ``|phi_k'|`` times the bracket tolerance.
    """

    params: PhiParams
    z_max: float
    zeros: list[float]
    residuals: list[float]
    bracket_tol: float
    residual_bounds: list[float] = field(default_factory=list)
    suspected_double: list[float] = field(default_factory=list)
    failures: list[tuple[float, float]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.zeros)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "zero", "residual"])
        for i, (z, r) in enumerate(zip(self.zeros, self.residuals), start=1):
            w.writerow([i, f"{z:.17g}", f"{r:.17g}"])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "type": "zero_table",
            "mu": self.params.mu,
            "k": self.params.k,
            "z_max": self.z_max,
            "bracket_tol": self.bracket_tol,
            "zeros": self.zeros,
            "residuals": self.residuals,
            "suspected_double_roots": self.suspected_double,
            "failures": [list(f) for f in self.failures],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "ZeroTable":
        if data.get("schema") != 1 or data.get("type") != "zero_table":
            raise ValueError("not a schema-1 zero table")
        return cls(
            PhiParams(float(data["mu"]), int(data["k"])),
            float(data["z_max"]),
            [float(v) for v in data["zeros"]],
            [float(v) for v in data["residuals"]],
            float(data["bracket_tol"]),
            suspected_double=[float(v) for v in data.get("suspected_double_roots", [])],
            failures=[tuple(f) for f in data.get("failures", [])],
        )


def _sign(ev: Evaluation) -> int:
    if abs(ev.value) <= 10.0 * ev.abs_error_estimate:
        return 0
    return 1 if ev.value > 0 else -1


def find_zeros(params: PhiParams, z_max: float, cfg: RootConfig = RootConfig()) -> ZeroTable:
    """All sign-change zeros of ``phi_k`` in ``(0, z_max]``.

    Grid points whose value is within ten error estimates of zero are treated
    as undetermined: flanked by opposite signs they bracket a root, flanked
    by equal signs they are tested as possible double roots.  Local minima of
    ``|phi_k|`` without a sign change are flagged as suspected double roots
    when the minimum falls below ``DOUBLE_ROOT_THRESHOLD``.
    """
    if not z_max > 0.0:
        raise DomainError(f"z_max must be positive, got {z_max}")
    n_grid = int(math.floor(z_max / cfg.scan_step + 1e-9))
    grid = [i * cfg.scan_step for i in range(1, n_grid + 1)]
    if not grid or grid[-1] < z_max:
        grid.append(z_max)
    grid.insert(0, 0.0)
    evals = [phi(params, z) for z in grid]
    signs = [_sign(e) for e in evals]

    def f(z: float) -> float:
        return phi(params, z).value

    brackets: list[tuple[float, float]] = []
    doubles: list[float] = []
    i = 0
    last = len(grid) - 1
    while i < last:
        if signs[i] != 0 and signs[i + 1] == -signs[i]:
            brackets.append((grid[i], grid[i + 1]))
            i += 1
            continue
        if signs[i + 1] == 0 and signs[i] != 0:
            j = i + 1
            while j < last and signs[j] == 0:
                j += 1
            if signs[j] == -signs[i]:
                brackets.append((grid[i], grid[j]))
            elif signs[j] == signs[i]:
                _probe_double(f, grid[i], grid[j], doubles)
            i = j
            continue
        if 0 < i and signs[i - 1] == signs[i] == signs[i + 1] != 0:
            if abs(evals[i].value) <= min(abs(evals[i - 1].value), abs(evals[i + 1].value)):
                _probe_double(f, grid[i - 1], grid[i + 1], doubles)
        i += 1

    zeros: list[float] = []
    residuals: list[float] = []
    bounds: list[float] = []
    failures: list[tuple[float, float]] = []
    for a, b in brackets:
        if len(zeros) >= cfg.max_zeros:
            break
        try:
            root = _refine(f, a, b, cfg.refine_tol)
        except ConvergenceFailure:
            failures.append((a, b))
            continue
        ev = phi(params, root)
        slope = abs(phi(params, root, 1).value)
        zeros.append(root)
        residuals.append(abs(ev.value))
        bounds.append(10.0 * ev.abs_error_estimate + slope * max(cfg.refine_tol, math.ulp(root)))
    return ZeroTable(params, z_max, zeros, residuals, cfg.refine_tol, bounds, doubles, failures)


def _refine(f, a: float, b: float, tol: float) -> float:
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise ConvergenceFailure(f"no sign change on [{a}, {b}]")
    try:
        root = brentq(f, a, b, xtol=tol, maxiter=200)
    except (RuntimeError, ValueError) as exc:
        raise ConvergenceFailure(str(exc)) from exc
    # one secant step from the bracketing pair nearest the root
    h = max(tol, 4 * math.ulp(root))
    lo, hi = root - h, root + h
    flo, fhi = f(lo), f(hi)
    if flo != fhi and flo * fhi < 0:
        cand = lo - flo * (hi - lo) / (fhi - flo)
        if lo <= cand <= hi and abs(f(cand)) < abs(f(root)):
            root = cand
    return root


def _probe_double(f, a: float, b: float, out: list[float]) -> None:
    res = minimize_scalar(lambda t: abs(f(t)), bounds=(a, b), method="bounded", options={"xatol": 1e-10})
    if res.fun < DOUBLE_ROOT_THRESHOLD:
        out.append(float(res.x))


@dataclass
class InterlacingReport:
    passed: bool
    violations: list[str]
    checked_pairs: int


def verify_interlacing(a: ZeroTable, b: ZeroTable) -> InterlacingReport:
    """Check that the zeros of two tables strictly alternate.

    Equivalent to: between consecutive zeros of either table lies exactly one
    zero of the other.  The stretch after the last zero of the window is not
    constrained, so a missing partner at the right edge is not a violation.
    """
    if a.params.mu != b.params.mu:
        raise WindowMismatch(f"tables have different mu: {a.params.mu} vs {b.params.mu}")
    if a.z_max != b.z_max:
        raise WindowMismatch(f"tables have different windows: {a.z_max} vs {b.z_max}")
    if {a.params.k, b.params.k} != {0, 1}:
        raise WindowMismatch("interlacing compares the k=0 and k=1 tables")
    merged = sorted([(z, "a") for z in a.zeros] + [(z, "b") for z in b.zeros])
    violations = []
    for (z0, s0), (z1, s1) in zip(merged, merged[1:]):
        if z0 == z1:
            violations.append(f"common zero at {z0:.17g}")
        elif s0 == s1:
            other = "b" if s0 == "a" else "a"
            violations.append(f"no zero of {other} between {z0:.17g} and {z1:.17g}")
    return InterlacingReport(not violations, violations, max(0, len(merged) - 1))


def product_reconstruct(
    table: ZeroTable, z: float, N: int, tail_correction: bool = False
) -> Evaluation:
    """Truncated Hadamard product ``prod_{n<=N} (1 - z^2 / z_n^2)``.

    With ``tail_correction`` the omitted factors are replaced by
    ``exp(-z^2 * T_N)`` where ``T_N = 1/((a)(a+1)) - sum_{n<=N} z_n^-2`` and
    ``a = mu - k + 2``; the full zero power sum equals ``1/(a(a+1))`` because
    it is minus the z^2 coefficient of ``phi_k``.
    """
    if not 1 <= N <= len(table.zeros):
        raise ValueError(f"N must lie in [1, {len(table.zeros)}], got {N}")
    z = float(z)
    if z == 0.0:
        return Evaluation(1.0, 0.0, N, Method.PRODUCT)
    zz = z * z
    value = 1.0
    for zn in table.zeros[:N]:
        if zn == abs(z):
            return Evaluation(0.0, 0.0, N, Method.PRODUCT)
        value *= 1.0 - zz / (zn * zn)
    if tail_correction:
        a = float(table.params.a)
        tail = 1.0 / (a * (a + 1.0)) - math.fsum(1.0 / (zn * zn) for zn in table.zeros[:N])
        value *= math.exp(-zz * tail)
    # truncation of the tail is not bounded here; only rounding is reported
    return Evaluation(value, 4 * N * 2.0**-52 * abs(value), N, Method.PRODUCT)


def mittag_leffler_ratio(mu: float, table: ZeroTable, z: float, N: int) -> float:
    """Partial sum of ``phi_{k+1}(z)/(z phi_k(z)) = 1/z + (1/(mu-k+1)) sum 2z/(z^2 - z_n^2)``."""
    _ml_checks(mu, table, z, N)
    w = 1.0 / (mu - table.params.k + 1.0)
    return 1.0 / z + w * math.fsum(2.0 * z / (z * z - zn * zn) for zn in table.zeros[:N])


def mittag_leffler_ratio_derivative(mu: float, table: ZeroTable, z: float, N: int) -> float:
    """z-derivative of :func:`mittag_leffler_ratio`, summed term by term."""
    _ml_checks(mu, table, z, N)
    w = 1.0 / (mu - table.params.k + 1.0)
    zz = z * z
    return -1.0 / zz - w * math.fsum(2.0 * (zz + zn * zn) / (zz - zn * zn) ** 2 for zn in table.zeros[:N])


def _ml_checks(mu: float, table: ZeroTable, z: float, N: int) -> None:
    if mu != table.params.mu:
        raise WindowMismatch(f"mu={mu} does not match table mu={table.params.mu}")
    if not z > 0.0:
        raise DomainError(f"z must be positive, got {z}")
    if not 1 <= N <= len(table.zeros):
        raise ValueError(f"N must lie in [1, {len(table.zeros)}], got {N}")
    for zn in table.zeros[:N]:
        if abs(z - zn) < table.bracket_tol:
            raise PoleHit(f"z={z} coincides with tabulated zero {zn}")
