"""Grid verification, sign-change scans and the Turan conjecture scan.

Every grid point is an independent work item.  Slices of constant ``mu`` are
optionally farmed out to worker processes, and results are always assembled
in grid order, so a report does not depend on the worker count.  Results are
numerical evidence: a sign is *certified at tolerance* when the margin
exceeds the point tolerance, which is never a proof.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

from scipy.optimize import minimize_scalar

from ._series import get_precision, precision_mode
from .core import PhiParams
from .errors import DomainError, MissingZeroTable
from .evaluation import Evaluation
from .inequalities import InequalityKind, eta_closed, evaluate, expected_sign
from .zeros import RootConfig, ZeroTable, find_zeros

EVIDENCE_LABEL = "certified at tolerance (numerical evidence, not a proof)"


@dataclass(frozen=True)
class ScanConfig:
    """Parameter grids and certification policy.

    ``sign_tolerance=None`` certifies a sign when ``|margin|`` exceeds
    ``guard_factor`` times the margin's own error estimate; a number replaces
    that with a fixed absolute tolerance.
    """

    mu_range: tuple[float, float] = (0.0, 0.0)
    mu_step: float = 0.1
    z_range: tuple[float, float] = (0.1, 50.0)
    z_step: float = 0.1
    refine_depth: int = 20
    sign_tolerance: float | None = None
    guard_factor: float = 1e3
    guard_band: float = 1e-6
    threads: int = 1

    def __post_init__(self):
        if not self.mu_step > 0 or not self.z_step > 0:
            raise ValueError("grid steps must be positive")
        if self.mu_range[0] > self.mu_range[1]:
            raise ValueError(f"empty mu range {self.mu_range}")
        if not 0.0 < self.z_range[0] <= self.z_range[1]:
            raise ValueError(f"z range must be a nonempty interval in (0, inf), got {self.z_range}")
        if self.refine_depth < 0:
            raise ValueError("refine_depth must be nonnegative")
        if self.sign_tolerance is not None and not self.sign_tolerance > 0:
            raise ValueError("sign_tolerance must be positive")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")

    def mu_grid(self) -> list[float]:
        return grid(*self.mu_range, self.mu_step)

    def z_grid(self) -> list[float]:
        return grid(*self.z_range, self.z_step)

    def tolerance(self, ev: Evaluation) -> float:
        if self.sign_tolerance is not None:
            return self.sign_tolerance
        return self.guard_factor * ev.abs_error_estimate

    def describe_tolerance(self) -> str:
        if self.sign_tolerance is not None:
            return f"absolute {self.sign_tolerance:.17g}"
        return f"pointwise {self.guard_factor:g} x error estimate"


def grid(lo: float, hi: float, step: float) -> list[float]:
    """Inclusive arithmetic grid, rounded to 12 decimals so that repeated
    additions do not drift."""
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [round(lo + i * step, 12) for i in range(n + 1)]


@dataclass(frozen=True)
class ReportRow:
    mu: float
    z: float
    margin: float
    tolerance: float
    certified_sign: int
    flag: str = ""


@dataclass
class InequalityReport:
    kind: str
    rows: list[ReportRow]
    tolerance: str
    label: str = EVIDENCE_LABEL
    skipped: list[tuple[float, str]] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def grid(self) -> list[tuple[float, float]]:
        return [(r.mu, r.z) for r in self.rows if r.flag != "boundary"]

    @property
    def margins(self) -> list[float]:
        return [r.margin for r in self.rows if r.flag != "boundary"]

    @property
    def violations(self) -> list[tuple[float, float]]:
        return [(r.mu, r.z) for r in self.rows if r.flag == "violation"]

    @property
    def witnesses(self) -> list[tuple[float, float]]:
        return [(r.mu, r.z) for r in self.rows if r.flag == "witness"]

    @property
    def uncertain(self) -> list[tuple[float, float]]:
        return [(r.mu, r.z) for r in self.rows if r.flag == "uncertain"]

    @property
    def passed(self) -> bool:
        return not self.violations

    def rows_for(self, mu: float) -> list[ReportRow]:
        return [r for r in self.rows if r.mu == mu]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["mu", "z", "margin", "certified_sign", "flag"])
        for r in self.rows:
            w.writerow([f"{r.mu:.17g}", f"{r.z:.17g}", f"{r.margin:.17g}", r.certified_sign, r.flag])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "type": "inequality_report",
            "kind": self.kind,
            "label": self.label,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "counts": {
                "points": len(self.grid),
                "violations": len(self.violations),
                "witnesses": len(self.witnesses),
                "uncertain": len(self.uncertain),
            },
            "skipped": [{"mu": mu, "reason": why} for mu, why in self.skipped],
            "notes": self.notes,
            "rows": [
                {
                    "mu": r.mu,
                    "z": r.z,
                    "margin": r.margin,
                    "tolerance": r.tolerance,
                    "certified_sign": r.certified_sign,
                    "flag": r.flag,
                }
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{self.kind}: {status} points={len(self.grid)} violations={len(self.violations)} "
            f"witnesses={len(self.witnesses)} uncertain={len(self.uncertain)} "
            f"skipped_mu={len(self.skipped)} [{self.label}]"
        )


def _certify(ev: Evaluation, tol: float) -> int:
    if abs(ev.value) <= tol:
        return 0
    return 1 if ev.value > 0 else -1


def _excluded(kind: InequalityKind, mu: float, k: int, band: float) -> str | None:
    """Reason to skip ``mu``, or None.  Half-integers within ``band`` are
    probed, since every excluded parameter of these expressions is one."""
    probe = 1.5  # interior point where all expressions are finite
    for candidate in {mu, round(2.0 * mu) / 2.0}:
        if candidate != mu and abs(candidate - mu) >= band:
            continue
        try:
            evaluate(kind, candidate, probe, k)
        except DomainError as exc:
            return f"excluded parameter (within {band:g} of {candidate:g}): {exc}"
    return None


def _refine_boundary(f, a: float, b: float, sa: int, depth: int, cfg: ScanConfig):
    for _ in range(depth):
        m = 0.5 * (a + b)
        ev = f(m)
        s = _certify(ev, cfg.tolerance(ev))
        if s == 0:
            break
        if s == sa:
            a = m
        else:
            b = m
    m = 0.5 * (a + b)
    return a, b, f(m)


def _slice(kind: str, mu: float, zs: list[float], cfg: ScanConfig, k: int, expect, search_witness: bool, precision: str):
    """Rows for one mu slice.  ``expect`` is +1/-1/0 (sign or residual), or
    "fail" to collect witnesses of a negative margin."""
    with precision_mode(precision):
        kind = InequalityKind(kind)

        def f(z):
            return evaluate(kind, mu, z, k)

        evals = [f(z) for z in zs]
        rows = []
        signs = []
        for z, ev in zip(zs, evals):
            tol = cfg.tolerance(ev)
            if expect == 0:
                bad = abs(ev.value) > tol
                rows.append(ReportRow(mu, z, ev.value, tol, 0, "violation" if bad else ""))
                signs.append(0)
                continue
            s = _certify(ev, tol)
            signs.append(s)
            if s == 0:
                flag = "uncertain"
            elif expect == "fail" and s < 0:
                flag = "witness"
            elif expect in (1, -1) and s == -expect:
                flag = "violation"
            else:
                flag = ""
            rows.append(ReportRow(mu, z, ev.value, tol, s, flag))
        if expect == 0:
            return rows

        extra = []
        certified = [(z, s) for z, s in zip(zs, signs) if s != 0]
        for (za, sa), (zb, sb) in zip(certified, certified[1:]):
            if sa != sb:
                a, b, ev = _refine_boundary(f, za, zb, sa, cfg.refine_depth, cfg)
                extra.append(ReportRow(mu, 0.5 * (a + b), ev.value, cfg.tolerance(ev), 0, "boundary"))

        if search_witness and not any(r.flag == "witness" for r in rows):
            extra.extend(_search_witness(f, mu, zs, evals, cfg))
        rows.extend(extra)
        rows.sort(key=lambda r: r.z)
        return rows


def _search_witness(f, mu, zs, evals, cfg) -> list[ReportRow]:
    """Look between grid points for a certified negative margin, starting at
    the smallest discrete local minima."""
    vals = [e.value for e in evals]
    minima = [i for i in range(1, len(vals) - 1) if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]]
    minima.sort(key=lambda i: vals[i])
    for i in minima[:8]:
        res = minimize_scalar(lambda z: f(z).value, bounds=(zs[i - 1], zs[i + 1]), method="bounded", options={"xatol": 1e-9})
        ev = f(float(res.x))
        tol = cfg.tolerance(ev)
        if _certify(ev, tol) < 0:
            return [ReportRow(mu, float(res.x), ev.value, tol, -1, "witness")]
    return []


def _run_slices(jobs, cfg: ScanConfig):
    if cfg.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            return list(pool.map(_slice_star, jobs))
    return [_slice_star(j) for j in jobs]


def _slice_star(args):
    return _slice(*args)


def verify(kind: InequalityKind | str, cfg: ScanConfig, k: int = 0) -> InequalityReport:
    """Margins of ``kind`` over the mu x z grid, checked against the sign a
    proved result guarantees.  Points without a guarantee are evaluated and
    reported but cannot be violations."""
    kind = InequalityKind(kind)
    zs = cfg.z_grid()
    mus = [0.0] if kind is InequalityKind.ETA_IDENTITY else cfg.mu_grid()
    jobs, skipped = [], []
    precision = get_precision()
    for mu in mus:
        why = None if kind is InequalityKind.ETA_IDENTITY else _excluded(kind, mu, k, cfg.guard_band)
        if why:
            skipped.append((mu, why))
            continue
        expect = expected_sign(kind, mu, k)
        jobs.append((kind.value, mu, zs, cfg, k, expect, False, precision))
    if kind is InequalityKind.ETA_IDENTITY and cfg.sign_tolerance is None:
        cfg = _with_tolerance(cfg, 1e-9)
        jobs = [(j[0], j[1], j[2], cfg, *j[4:]) for j in jobs]
    rows = [r for part in _run_slices(jobs, cfg) for r in part]
    guaranteed = [mu for mu in mus if expected_sign(kind, mu, k) is not None]
    notes = {"guaranteed_mu": guaranteed, "k": k}
    return InequalityReport(kind.value, rows, cfg.describe_tolerance(), skipped=skipped, notes=notes)


def _with_tolerance(cfg: ScanConfig, tol: float) -> ScanConfig:
    return replace(cfg, sign_tolerance=tol)


def conjecture_expectation(mu: float):
    """+1 where the inequality is proved or conjectured to hold, "fail" on
    (-1/2, 3/2) where it is conjectured to fail somewhere, else None."""
    if mu >= 1.5 or (-2.5 < mu < -0.5 and mu != -1.5):
        return 1
    if -0.5 < mu < 1.5:
        return "fail"
    return None


def conjecture_scan(cfg: ScanConfig) -> InequalityReport:
    """Scan the Turan margin over mu x z.

    Slices with mu in (-1/2, 3/2) must exhibit a certified negative witness;
    when none lies on the grid, local minima between grid points are
    searched.  Slices with mu >= 3/2 report any certified negative margin as
    a violation.
    """
    kind = InequalityKind.TURAN1
    zs = cfg.z_grid()
    jobs, skipped = [], []
    precision = get_precision()
    for mu in cfg.mu_grid():
        why = _excluded(kind, mu, 0, cfg.guard_band)
        if why:
            skipped.append((mu, why))
            continue
        expect = conjecture_expectation(mu)
        jobs.append((kind.value, mu, zs, cfg, 0, expect, expect == "fail", precision))
    rows = [r for part in _run_slices(jobs, cfg) for r in part]
    missing = []
    for job in jobs:
        mu = job[1]
        if job[5] == "fail" and not any(r.mu == mu and r.flag == "witness" for r in rows):
            missing.append(mu)
    notes = {
        "question": "Turan inequality valid for mu>=3/2 and failing for mu in (-1/2,3/2)",
        "slices_without_witness": missing,
    }
    report = InequalityReport("conjecture", rows, cfg.describe_tolerance(), skipped=skipped, notes=notes)
    return report


@dataclass(frozen=True)
class Bracket:
    a: float
    b: float
    sign_a: int
    sign_b: int


@dataclass
class SignChangeScan:
    brackets: list[Bracket]
    uncertain: list[float]

    @property
    def alternating(self) -> bool:
        return all(x.sign_b == y.sign_a for x, y in zip(self.brackets, self.brackets[1:]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "a", "b", "sign_a", "sign_b"])
        for i, br in enumerate(self.brackets, start=1):
            w.writerow([i, f"{br.a:.17g}", f"{br.b:.17g}", br.sign_a, br.sign_b])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "type": "sign_change_scan",
            "label": EVIDENCE_LABEL,
            "alternating": self.alternating,
            "brackets": [[br.a, br.b, br.sign_a, br.sign_b] for br in self.brackets],
            "uncertain": self.uncertain,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def as_evaluation(value) -> Evaluation:
    if isinstance(value, Evaluation):
        return value
    v = float(value)
    return Evaluation(v, 0.0, 0)


def target_function(target, mu: float = 0.0, k: int = 0) -> Callable[[float], Evaluation]:
    """Resolve ``"eta"``, an :class:`InequalityKind` (or its tag), or a callable."""
    if callable(target):
        return lambda z: as_evaluation(target(z))
    if target == "eta":
        return lambda z: as_evaluation(eta_closed(z))
    kind = InequalityKind(target)
    return lambda z: evaluate(kind, mu, z, k)


def sign_change_scan(target, cfg: ScanConfig, mu: float | None = None, k: int = 0) -> SignChangeScan:
    """Brackets ``[a, b]`` whose ends carry opposite certified signs.

    Points whose value does not clear the tolerance are recorded as
    uncertain and skipped.  Each bracket is then narrowed by bisection
    ``refine_depth`` times, stopping early if a midpoint is uncertain.
    """
    mu = cfg.mu_range[0] if mu is None else mu
    f = target_function(target, mu, k)
    pts = []
    uncertain = []
    for z in cfg.z_grid():
        ev = f(z)
        s = _certify(ev, cfg.tolerance(ev))
        if s == 0:
            uncertain.append(z)
        else:
            pts.append((z, s))
    brackets = []
    for (za, sa), (zb, sb) in zip(pts, pts[1:]):
        if sa != sb:
            a, b, _ = _refine_boundary(f, za, zb, sa, cfg.refine_depth, cfg)
            brackets.append(Bracket(a, b, sa, sb))
    return SignChangeScan(brackets, uncertain)


def window_shift(mu: float) -> int:
    """Index ``m`` of the window (0, xi_{mu-m,1}) for which a sign is known:
    m=1 on (-1/2, 1/2), and m on (m-3/2, m-1/2) for m >= 2."""
    if -0.5 < mu < 0.5:
        return 1
    if mu > 0.5 and (mu + 1.5) % 1.0 != 0.0:
        return int(math.floor(mu + 1.5))
    raise DomainError(f"no reversed/forward window is stated for mu={mu}")


def window_zero_params(mu: float, shift: int | None = None) -> PhiParams:
    """``phi_0`` parameters whose first zero is the first positive zero of
    ``s_{mu-shift,1/2}`` (``phi_0`` with parameter ``mu'`` is proportional to
    ``s_{mu'-1/2,1/2}``)."""
    shift = window_shift(mu) if shift is None else shift
    return PhiParams(round(mu - shift + 0.5, 12), 0)


def auto_window(mu: float, shift: int | None = None, z_max: float = 100.0) -> ZeroTable:
    """Zero table holding at least the first positive zero of ``s_{mu-shift,1/2}``."""
    params = window_zero_params(mu, shift)
    window = 4.0 * math.pi
    while True:
        table = find_zeros(params, window, RootConfig())
        if table.zeros or window >= z_max:
            return table
        window *= 2.0


def reversed_window_check(mu: float, cfg: ScanConfig, zeros: ZeroTable | None, shift: int | None = None) -> InequalityReport:
    """Turan margin on (0, xi) where xi is the first zero of ``s_{mu-shift,1/2}``.

    The margin is negative there for mu in (-1/2, 1/2) (shift 1) and positive
    for mu in (m-3/2, m-1/2) with shift m >= 2.  Grid points at or beyond xi
    are reported with flag ``unchecked``.
    """
    shift = window_shift(mu) if shift is None else shift
    if zeros is None or not zeros.zeros:
        raise MissingZeroTable(f"need the first zero of s_(mu-{shift},1/2) for mu={mu}")
    want = window_zero_params(mu, shift)
    if zeros.params.k != 0 or abs(zeros.params.mu - want.mu) > 1e-9:
        raise MissingZeroTable(
            f"zero table is for phi_{zeros.params.k} with mu={zeros.params.mu}; expected phi_0 with mu={want.mu}"
        )
    edge = zeros.zeros[0]
    expect = -1 if shift == 1 else 1
    rows = []
    for z in cfg.z_grid():
        ev = evaluate(InequalityKind.TURAN1, mu, z)
        tol = cfg.tolerance(ev)
        s = _certify(ev, tol)
        if z >= edge:
            flag = "unchecked"
        elif s == 0:
            flag = "uncertain"
        elif s == -expect:
            flag = "violation"
        else:
            flag = ""
        rows.append(ReportRow(mu, z, ev.value, tol, s, flag))
    notes = {"window_edge": edge, "shift": shift, "expected_sign": expect}
    return InequalityReport("reversed-window", rows, cfg.describe_tolerance(), notes=notes)
