"""Summation engine for unit-numerator 1F2-type power series.

Sums ``sum_n w(n) x**n / ((b1)_n (b2)_n)`` where ``w`` is a small polynomial
in ``n``.  A double-precision pass runs first; when its cancellation index
exceeds ``EXTENDED_TRIGGER`` (or the pass overflows) the sum is redone in
fixed-point integer arithmetic sized to keep at least 50 significant decimal
digits after cancellation.  The extended path uses only Python integers, so
there is no shared precision context and it is safe across threads.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from fractions import Fraction

import gmpy2
from gmpy2 import mpz
from typing import Iterator, Sequence

from .errors import DomainError, NonConvergence
from .evaluation import CANCEL_CAP, Evaluation, Method

WORKING_EPS = 2.0**-52
TRUNCATION_EPS = 1e-17
# the 1e6 threshold leaves ~1e-10 relative error, too coarse for composite identities
EXTENDED_TRIGGER = 1e3
WORKING_TERM_CAP = 500
EXTENDED_TERM_CAP = 2000
# 2**-166 < 1e-50
_EXT_GUARD_BITS = 166
_EXT_BASE_BITS = 190
# near an exact zero the result has no significant bits left to recover
_EXT_RETRIES = 4

WORKING = "working"
EXTENDED = "extended"

_precision: contextvars.ContextVar[str] = contextvars.ContextVar("lommel_precision", default=WORKING)


def get_precision() -> str:
    return _precision.get()


@contextlib.contextmanager
def precision_mode(mode: str) -> Iterator[None]:
    """Select ``"working"`` (double with automatic escalation) or ``"extended"``.

    The setting lives in a context variable, so each thread sees its own.
    """
    if mode not in (WORKING, EXTENDED):
        raise ValueError(f"unknown precision mode {mode!r}")
    token = _precision.set(mode)
    try:
        yield
    finally:
        _precision.reset(token)


def is_nonpositive_integer(b: Fraction) -> bool:
    return b.denominator == 1 and b <= 0


def hyp_sum(
    b1: Fraction,
    b2: Fraction,
    x: Fraction,
    weight: Sequence[Fraction] = (Fraction(1),),
    mode: str | None = None,
) -> Evaluation:
    """Sum the weighted series and return it with an error estimate.

    Stops when three consecutive terms are below ``TRUNCATION_EPS`` times the
    partial sum and the index has passed ``sqrt(|x|)``, the location of the
    largest term.
    """
    if is_nonpositive_integer(b1) or is_nonpositive_integer(b2):
        raise DomainError(f"1F2 lower parameter is a nonpositive integer: b1={b1}, b2={b2}")
    hump = math.sqrt(abs(float(x)))
    mode = mode or _precision.get()
    if mode == WORKING:
        result = _sum_float(b1, b2, x, weight, hump)
        if result is not None and result.cancellation_index <= EXTENDED_TRIGGER:
            return result
    return _sum_fixed(b1, b2, x, weight, hump)


def _poly(coeffs: Sequence[float], n: int) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


def _sum_float(b1, b2, x, weight, hump) -> Evaluation | None:
    fb1, fb2, fx = float(b1), float(b2), float(x)
    fw = [float(c) for c in weight]
    r = 1.0
    terms = []
    running = 0.0
    small = 0
    n = 0
    while True:
        term = _poly(fw, n) * r
        if not math.isfinite(term):
            return None
        terms.append(term)
        running += term
        small = small + 1 if abs(term) <= TRUNCATION_EPS * abs(running) else 0
        if small >= 3 and n > hump:
            break
        r *= fx / ((fb1 + n) * (fb2 + n))
        n += 1
        if n >= WORKING_TERM_CAP:
            # the extended path has a larger cap
            return None
    r *= fx / ((fb1 + n) * (fb2 + n))
    omitted = abs(_poly(fw, n + 1) * r)
    value = math.fsum(terms)
    abs_sum = math.fsum(abs(t) for t in terms)
    cancel = _cancel(abs_sum, abs(value))
    err = omitted + cancel * WORKING_EPS * abs(value)
    if value == 0.0:
        err = omitted + abs_sum * WORKING_EPS
    return Evaluation(value, err, len(terms), Method.SERIES, cancel, False)


def _cancel(abs_sum: float, mag: float) -> float:
    if mag == 0.0:
        return CANCEL_CAP if abs_sum > 0.0 else 1.0
    return min(max(abs_sum / mag, 1.0), CANCEL_CAP)


def _log2_peak(b1, b2, x, weight, hump) -> float:
    """log2 of the largest |term|, found without forming the terms."""
    fb1, fb2 = float(b1), float(b2)
    lx = math.log2(abs(float(x))) if x != 0 else -math.inf
    fw = [float(c) for c in weight]
    best = -math.inf
    acc = 0.0
    n = 0
    limit = 2 * int(hump) + 16
    while n <= limit:
        w = abs(_poly(fw, n))
        if w > 0.0:
            best = max(best, acc + math.log2(w))
        if lx == -math.inf:
            break
        acc += lx - math.log2(abs(fb1 + n)) - math.log2(abs(fb2 + n))
        n += 1
    return best if best > -math.inf else 0.0


_tdiv = gmpy2.t_div


def _sum_fixed(b1, b2, x, weight, hump) -> Evaluation:
    peak = _log2_peak(b1, b2, x, weight, hump)
    bits = _EXT_BASE_BITS + max(0, math.ceil(peak)) + 8
    for _retry in range(_EXT_RETRIES):
        S, A, first_omitted, nterms = _fixed_pass(b1, b2, x, weight, hump, bits)
        if S != 0:
            lost = A.bit_length() - abs(S).bit_length() + 1
        else:
            lost = bits
        if lost + _EXT_BASE_BITS <= bits:
            break
        bits = max(2 * bits, lost + _EXT_BASE_BITS + 16)
    scale = 1 << bits
    value = S / scale if S else 0.0
    abs_sum = A / scale
    cancel = _cancel(abs_sum, abs(S) / scale)
    # per-term truncation error grows at most linearly in the term count (<= 2**11)
    mode_eps = 2.0 ** -(bits - 11)
    err = abs(first_omitted) / scale + cancel * mode_eps * abs(S / scale) + WORKING_EPS * abs(value)
    if S == 0:
        err = abs(first_omitted) / scale + abs_sum * mode_eps
    return Evaluation(value, err, nterms, Method.SERIES, cancel, True)


def _fixed_pass(b1, b2, x, weight, hump, bits):
    p1, q1 = mpz(b1.numerator), mpz(b1.denominator)
    p2, q2 = mpz(b2.numerator), mpz(b2.denominator)
    px, qx = mpz(x.numerator), mpz(x.denominator)
    den_w = mpz(math.lcm(*(c.denominator for c in weight)))
    wi = [mpz(c * den_w) for c in weight]
    num = px * q1 * q2
    unit_weight = len(wi) == 1 and den_w == 1
    R = mpz(1) << bits
    S = mpz(0)
    A = mpz(0)
    small = 0
    n = 0
    while True:
        if unit_weight:
            T = R * wi[0]
        else:
            w = 0
            for c in reversed(wi):
                w = w * n + c
            T = _tdiv(R * w, den_w)
        S += T
        A += abs(T)
        if n > hump:
            # the smallness streak only counts past the largest term
            small = small + 1 if (abs(T) << _EXT_GUARD_BITS) <= abs(S) else 0
            if small >= 3:
                break
        R = _tdiv(R * num, qx * (p1 + n * q1) * (p2 + n * q2))
        n += 1
        if n >= EXTENDED_TERM_CAP:
            raise NonConvergence(
                f"series not converged after {EXTENDED_TERM_CAP} terms (b1={float(b1)}, "
                f"b2={float(b2)}, x={float(x)})"
            )
    R = _tdiv(R * num, qx * (p1 + n * q1) * (p2 + n * q2))
    w = 0
    for c in reversed(wi):
        w = w * (n + 1) + c
    first_omitted = _tdiv(R * w, den_w)
    return int(S), int(A), int(first_omitted), n + 1
