"""Command line front end.

Usage:
    lommel eval --mu 0.5 --nu 0.5 --z 3.14159265358979
    lommel eval --function phi --mu 0.5 --k 0 --m 1 --z 2
    lommel zeros --mu 0.5 --k 0 --zmax 40 --interlace-with 1
    lommel verify turan1 --mu-range=-2.4:-0.6 --z-range=0.1:50
    lommel scan conjecture --mu-range=0.6:3.0 --z-range=0.1:50
    lommel scan sign-changes --target eta --z-range=0.1:31.5
    lommel scan reversed --mu 0 --auto-window

Exit codes:
    0  success (for verify/scan: no certified violation)
    1  usage error (bad flag, unparseable number, z <= 0)
    2  domain error (excluded parameters)
    3  convergence failure (series or quadrature)
    4  a check ran and failed (violation, interlacing failure, missing witness)

Options may also come from ``--config FILE`` holding ``key = value`` lines
(keys are the long option names, e.g. ``z-step = 0.05``); flags given on
the command line win.  ``LOMMEL_OUTPUT_DIR`` prefixes relative ``--out``
paths.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import core, quadrature
from ._series import EXTENDED, WORKING, precision_mode
from .errors import (
    ConvergenceFailure,
    DomainError,
    LommelError,
    MissingZeroTable,
    NonConvergence,
    QuadratureFailure,
)
from .inequalities import InequalityKind
from .scans import (
    ScanConfig,
    auto_window,
    conjecture_scan,
    reversed_window_check,
    sign_change_scan,
    verify,
    window_shift,
)
from .zeros import RootConfig, ZeroTable, find_zeros, verify_interlacing

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_CHECK = 0, 1, 2, 3, 4
OUTPUT_DIR_ENV = "LOMMEL_OUTPUT_DIR"

DEFAULT_MU_RANGE = {
    "turan1": "-2.4:-0.6",
    "ratio-monotone": "-2.4:-0.6",
    "turan-delta": "1.5:1.5",
    "weighted-turan0": "0.1:0.9",
    "weighted-turan1": "0.1:0.9",
    "wronskian01": "0.1:0.9",
    "wronskian12": "0.1:0.9",
    "laguerre": "0.1:0.9",
    "s-positive": "0.6:5",
    "eta-identity": "0:0",
}
DEFAULT_Z_RANGE = {
    "turan1": "0.1:50",
    "ratio-monotone": "0.1:50",
    "s-positive": "0.1:50",
    "turan-delta": "0.1:31.4",
    "eta-identity": "0.1:31.4",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_range(text: str) -> tuple[float, float]:
    """``"a:b"`` or a single number ``"a"`` (meaning ``a:a``)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            v = float(parts[0])
            return v, v
        if len(parts) == 2:
            return float(parts[0]), float(parts[1])
    except ValueError:
        pass
    raise UsageError(f"cannot parse range {text!r}; expected LO:HI")


def load_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["csv", "json", "pretty"], default=None)
    p.add_argument("--out", default=None, help="write data here instead of stdout")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--precision", choices=[WORKING, EXTENDED], default=None)
    p.add_argument("--config", default=None, help="key = value file with option defaults")


def _grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mu-range", default=None)
    p.add_argument("--mu-step", type=float, default=None)
    p.add_argument("--z-range", default=None)
    p.add_argument("--z-step", type=float, default=None)
    p.add_argument("--refine-depth", type=int, default=None)
    p.add_argument("--sign-tolerance", type=float, default=None)
    p.add_argument("--guard-factor", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lommel", description="Lommel functions s_{mu,nu}, phi_k and their inequalities.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate s_{mu,nu}, its derivative, or phi_k")
    _common(p)
    p.add_argument("--function", choices=["s", "ds", "phi"], default="s")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--nu", type=float, default=0.5)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--m", type=int, default=0, help="derivative order of phi_k")
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--method", choices=["series", "quadrature", "closed-form"], default="series")

    p = sub.add_parser("zeros", help="tabulate positive zeros of phi_k")
    _common(p)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--zmax", type=float, required=True)
    p.add_argument("--scan-step", type=float, default=None)
    p.add_argument("--refine-tol", type=float, default=None)
    p.add_argument("--interlace-with", type=int, default=None, metavar="K")

    p = sub.add_parser("verify", help="certify an inequality on a grid")
    _common(p)
    p.add_argument("tag", choices=[k.value for k in InequalityKind])
    _grid_flags(p)
    p.add_argument("--k", type=int, default=0)

    p = sub.add_parser("scan", help="conjecture, sign-change and reversed-window scans")
    _common(p)
    p.add_argument("what", choices=["conjecture", "sign-changes", "reversed"])
    _grid_flags(p)
    p.add_argument("--target", default="eta", help="eta or an inequality tag")
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--auto-window", action="store_true")
    p.add_argument("--zeros-file", default=None, help="JSON zero table bounding the window")
    return parser


def _apply_config(args: argparse.Namespace) -> None:
    cfg = load_config(args.config)
    for key, value in cfg.items():
        if not hasattr(args, key):
            raise UsageError(f"unknown config key {key!r}")
        if getattr(args, key) is None:
            setattr(args, key, value)
    for key, conv in (
        ("threads", int),
        ("mu_step", float),
        ("z_step", float),
        ("refine_depth", int),
        ("sign_tolerance", float),
        ("guard_factor", float),
        ("scan_step", float),
        ("refine_tol", float),
    ):
        if isinstance(getattr(args, key, None), str):
            try:
                setattr(args, key, conv(getattr(args, key)))
            except ValueError:
                raise UsageError(f"bad value for {key}: {getattr(args, key)!r}") from None
    if args.format is None:
        args.format = "pretty"
    if args.precision is None:
        args.precision = WORKING
    if args.threads is None:
        args.threads = 1
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    if args.format not in ("csv", "json", "pretty") or args.precision not in (WORKING, EXTENDED):
        raise UsageError("bad --format or --precision value")


def _fmt(v: float, pretty: bool) -> str:
    return f"{v:.6g}" if pretty else f"{v:.17g}"


def _emit(args, data: str, summary: list[str]) -> None:
    """Data goes to ``--out`` (or stdout); summary lines go to stdout when the
    data went to a file or is a pretty table, otherwise to stderr."""
    if args.out:
        path = Path(args.out)
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base and not path.is_absolute():
            path = Path(base) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(data)
        stream = sys.stdout
    else:
        sys.stdout.write(data)
        stream = sys.stdout if args.format == "pretty" else sys.stderr
    for line in summary:
        print(line, file=stream)


def cmd_eval(args) -> int:
    if args.function in ("s", "ds") and not args.z > 0:
        raise UsageError("z must be positive")
    if not math.isfinite(args.z):
        raise UsageError("z must be finite")
    if args.function == "phi":
        params = core.PhiParams(args.mu, args.k)
        if args.method == "series":
            ev = core.phi(params, args.z, args.m)
        elif args.method == "quadrature":
            if args.m != 0 or args.k not in (0, 1) or not args.z > 0:
                raise UsageError("quadrature covers phi_0 and phi_1 (m=0) at z > 0")
            fn = quadrature.phi0_by_integral if args.k == 0 else quadrature.phi1_by_integral
            ev = fn(args.mu, args.z)
        else:
            raise UsageError("no closed form is provided for phi_k")
    else:
        params = core.LommelParams(args.mu, args.nu)
        if args.method == "series":
            fn = core.lommel_s if args.function == "s" else core.lommel_s_derivative
            ev = fn(params, args.z)
        elif args.method == "quadrature":
            if args.function != "s" or args.nu != 0.5:
                raise UsageError("quadrature covers s_{mu,1/2} only")
            ev = quadrature.s_by_convolution(args.mu + 0.5, args.z)
        else:
            forms = {0.5: "S12", 1.5: "S32", 2.5: "S52"}
            if args.nu != 0.5 or args.mu not in forms:
                raise UsageError("closed forms exist for nu=1/2 and mu in {1/2, 3/2, 5/2}")
            if args.function == "s":
                v = core.closed_form_half(forms[args.mu], args.z)
            else:
                v = core.closed_form_half_derivative(forms[args.mu], args.z)
            ev = core.Evaluation(v, 4 * 2.0**-52 * abs(v), 0, core.Method.CLOSED_FORM)
    pretty = args.format == "pretty"
    fields = {
        "value": ev.value,
        "abs_error_estimate": ev.abs_error_estimate,
        "method": ev.method.value,
        "terms_used": ev.terms_used,
        "cancellation_index": ev.cancellation_index,
        "extended": ev.extended,
    }
    if args.format == "json":
        data = json.dumps({"schema": 1, "type": "evaluation", **fields}, indent=2, sort_keys=True) + "\n"
    elif args.format == "csv":
        data = ",".join(fields) + "\n" + ",".join(
            _fmt(v, False) if isinstance(v, float) else str(v) for v in fields.values()
        ) + "\n"
    else:
        data = "".join(
            f"{k:<20} {_fmt(v, True) if isinstance(v, float) else v}\n" for k, v in fields.items()
        )
    _emit(args, data, [])
    return EXIT_OK


def _table_text(table: ZeroTable, fmt: str) -> str:
    if fmt == "csv":
        return table.to_csv()
    if fmt == "json":
        return table.to_json()
    lines = [f"{'n':>4} {'zero':>14} {'residual':>14}"]
    for i, (z, r) in enumerate(zip(table.zeros, table.residuals), start=1):
        lines.append(f"{i:>4} {_fmt(z, True):>14} {_fmt(r, True):>14}")
    return "\n".join(lines) + "\n"


def cmd_zeros(args) -> int:
    if not args.zmax > 0:
        raise UsageError("--zmax must be positive")
    rc = RootConfig(
        scan_step=args.scan_step if args.scan_step is not None else RootConfig.scan_step,
        refine_tol=args.refine_tol if args.refine_tol is not None else RootConfig.refine_tol,
    )
    table = find_zeros(core.PhiParams(args.mu, args.k), args.zmax, rc)
    summary = [f"zeros: mu={args.mu:g} k={args.k} window=(0, {args.zmax:g}] count={len(table)}"]
    for z in table.suspected_double:
        summary.append(f"SuspectedDoubleRoot near z={z:.17g} (z/pi={z / math.pi:.9g})")
    for a, b in table.failures:
        summary.append(f"ConvergenceFailure in bracket [{a:.17g}, {b:.17g}]")
    status = EXIT_OK
    if args.k == 0 and 0 < args.mu < 1:
        ok = all(table.zeros[2 * n - 1] > 2 * n * math.pi for n in range(1, len(table) // 2 + 1))
        summary.append(f"zero bound xi_2n > 2n*pi: {'PASS' if ok else 'FAIL'}")
        status = status if ok else EXIT_CHECK
    if args.interlace_with is not None:
        other = find_zeros(core.PhiParams(args.mu, args.interlace_with), args.zmax, rc)
        rep = verify_interlacing(table, other)
        summary.append(f"interlacing with k={args.interlace_with}: {'PASS' if rep.passed else 'FAIL'}")
        summary.extend(f"  {v}" for v in rep.violations)
        status = status if rep.passed else EXIT_CHECK
    _emit(args, _table_text(table, args.format), summary)
    return status


def _scan_config(args, mu_default: str, z_default: str) -> ScanConfig:
    base = ScanConfig()
    return ScanConfig(
        mu_range=parse_range(args.mu_range or mu_default),
        mu_step=args.mu_step or base.mu_step,
        z_range=parse_range(args.z_range or z_default),
        z_step=args.z_step or base.z_step,
        refine_depth=base.refine_depth if args.refine_depth is None else args.refine_depth,
        sign_tolerance=args.sign_tolerance,
        guard_factor=args.guard_factor or base.guard_factor,
        threads=args.threads,
    )


def _report_text(report, fmt: str) -> str:
    if fmt == "csv":
        return report.to_csv()
    if fmt == "json":
        return report.to_json()
    lines = [f"{'mu':>8} {'z':>12} {'margin':>14} {'sign':>4}  flag"]
    for r in report.rows:
        lines.append(f"{_fmt(r.mu, True):>8} {_fmt(r.z, True):>12} {_fmt(r.margin, True):>14} {r.certified_sign:>4}  {r.flag}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    cfg = _scan_config(args, DEFAULT_MU_RANGE[args.tag], DEFAULT_Z_RANGE.get(args.tag, "0.1:30"))
    report = verify(args.tag, cfg, args.k)
    summary = [report.summary()]
    summary.extend(f"  skipped mu={mu:g}: {why}" for mu, why in report.skipped)
    _emit(args, _report_text(report, args.format), summary)
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_scan(args) -> int:
    if args.what == "conjecture":
        cfg = _scan_config(args, "-0.4:5", "0.1:50")
        report = conjecture_scan(cfg)
        missing = report.notes["slices_without_witness"]
        summary = [report.summary()]
        for mu in sorted({r.mu for r in report.rows}):
            n = sum(1 for r in report.rows if r.mu == mu and r.flag == "witness")
            v = sum(1 for r in report.rows if r.mu == mu and r.flag == "violation")
            summary.append(f"  mu={mu:g}: witnesses={n} violations={v}")
        if missing:
            summary.append(f"  no witness found for mu in {missing}")
        _emit(args, _report_text(report, args.format), summary)
        return EXIT_OK if report.passed and not missing else EXIT_CHECK

    if args.what == "sign-changes":
        mu = args.mu if args.mu is not None else 1.5
        tol = args.sign_tolerance
        if args.target == "eta" and tol is None:
            # the closed form carries no error estimate of its own
            tol = 1e-9
        args.sign_tolerance = tol
        cfg = _scan_config(args, f"{mu}:{mu}", "0.1:31.5")
        if args.target != "eta" and args.target not in {k.value for k in InequalityKind}:
            raise UsageError(f"unknown target {args.target!r}")
        scan = sign_change_scan(args.target, cfg, mu=mu, k=args.k)
        if args.format == "csv":
            data = scan.to_csv()
        elif args.format == "json":
            data = scan.to_json()
        else:
            data = "".join(
                f"[{_fmt(b.a, True)}, {_fmt(b.b, True)}]  {b.sign_a:+d} -> {b.sign_b:+d}\n" for b in scan.brackets
            )
        summary = [
            f"sign-changes:{args.target}: brackets={len(scan.brackets)} alternating={scan.alternating} "
            f"uncertain={len(scan.uncertain)}"
        ]
        _emit(args, data, summary)
        return EXIT_OK

    if args.mu is None:
        raise UsageError("scan reversed needs --mu")
    shift = window_shift(args.mu)
    if args.zeros_file:
        table = ZeroTable.from_dict(json.loads(Path(args.zeros_file).read_text()))
    elif args.auto_window:
        table = auto_window(args.mu, shift)
    else:
        raise MissingZeroTable("scan reversed needs --auto-window or --zeros-file")
    if not table.zeros:
        raise MissingZeroTable("zero table has no zeros")
    edge = table.zeros[0]
    z_default = f"{min(0.01, edge / 10):.17g}:{edge:.17g}"
    if args.z_step is None:
        args.z_step = min(0.01, edge / 100)
    cfg = _scan_config(args, f"{args.mu}:{args.mu}", z_default)
    report = reversed_window_check(args.mu, cfg, table, shift)
    word = "reversed-sign" if shift == 1 else "forward-sign"
    summary = [
        f"{word} {'PASS' if report.passed else 'FAIL'} on (0, {edge:.17g}) for mu={args.mu:g} "
        f"(window from first zero of s_(mu-{shift},1/2))",
        report.summary(),
    ]
    _emit(args, _report_text(report, args.format), summary)
    return EXIT_OK if report.passed else EXIT_CHECK


COMMANDS = {"eval": cmd_eval, "zeros": cmd_zeros, "verify": cmd_verify, "scan": cmd_scan}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        with precision_mode(args.precision):
            return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"lommel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"lommel: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (NonConvergence, QuadratureFailure, ConvergenceFailure) as exc:
        print(f"lommel: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except MissingZeroTable as exc:
        print(f"lommel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LommelError, ValueError, OSError) as exc:
        print(f"lommel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
