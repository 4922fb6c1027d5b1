import math
import threading
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from lommel._series import (
    EXTENDED,
    EXTENDED_TRIGGER,
    WORKING,
    get_precision,
    hyp_sum,
    precision_mode,
)
from lommel.core import pochhammer
from lommel.errors import DomainError, NonConvergence

F = Fraction


def test_zero_argument_is_one():
    ev = hyp_sum(F(3, 2), F(2), F(0))
    assert ev.value == 1.0
    assert ev.abs_error_estimate <= 1e-15


def test_small_argument_matches_partial_sum():
    x = F(-1, 1000)
    b1, b2 = F(3, 2), F(2)
    expected = sum(x**n / (pochhammer(b1, n) * pochhammer(b2, n)) for n in range(6))
    assert hyp_sum(b1, b2, x).value == pytest.approx(float(expected), rel=1e-15)


def test_sine_identity():
    # 1F2(1; 1, 3/2; -z^2/4) = sin(z)/z
    for z in (0.5, 3.0, 11.0, 27.5):
        ev = hyp_sum(F(1), F(3, 2), -F(z) ** 2 / 4)
        assert abs(ev.value - math.sin(z) / z) <= ev.abs_error_estimate + 1e-15


def test_nonpositive_lower_parameter_rejected():
    with pytest.raises(DomainError):
        hyp_sum(F(-2), F(1, 2), F(-1))
    with pytest.raises(DomainError):
        hyp_sum(F(1, 2), F(0), F(-1))


def test_large_cancellation_escalates():
    x = -F(40) ** 2 / 4
    ev = hyp_sum(F(1), F(3, 2), x)
    assert ev.extended
    assert ev.cancellation_index > EXTENDED_TRIGGER
    assert ev.value == pytest.approx(math.sin(40.0) / 40.0, rel=1e-13)


def test_extended_mode_forces_fixed_point():
    with precision_mode(EXTENDED):
        ev = hyp_sum(F(1), F(3, 2), F(-1, 4))
    assert ev.extended
    assert ev.value == pytest.approx(math.sin(1.0), rel=1e-15)


def test_weighted_series():
    # sum (n+1) x^n / ((1)_n (3/2)_n) differs from the unweighted sum by x d/dx
    x = F(-9, 4)
    base = hyp_sum(F(1), F(3, 2), x).value
    h = 1e-6
    up = hyp_sum(F(1), F(3, 2), x + F(h)).value
    down = hyp_sum(F(1), F(3, 2), x - F(h)).value
    expected = base + float(x) * (up - down) / (2 * h)
    assert hyp_sum(F(1), F(3, 2), x, (F(1), F(1))).value == pytest.approx(expected, rel=1e-8)


def test_term_cap_raises():
    # the terms only start to shrink after about sqrt(|x|) = 1500 steps
    with pytest.raises(NonConvergence):
        hyp_sum(F(1), F(3, 2), -F(3000) ** 2 / 4)


def test_precision_mode_rejects_unknown():
    with pytest.raises(ValueError):
        with precision_mode("quad"):
            pass


def test_precision_mode_restores():
    assert get_precision() == WORKING
    with precision_mode(EXTENDED):
        assert get_precision() == EXTENDED
    assert get_precision() == WORKING


def test_precision_mode_is_per_thread():
    barrier = threading.Barrier(2)

    def worker(mode):
        with precision_mode(mode):
            barrier.wait()
            seen = get_precision()
            ev = hyp_sum(F(1), F(3, 2), F(-1, 4))
            return seen, ev.extended

    with ThreadPoolExecutor(2) as pool:
        a, b = pool.map(worker, [WORKING, EXTENDED])
    assert a == (WORKING, False)
    assert b == (EXTENDED, True)


def test_error_estimate_bounds_actual_error():
    for z in (1.0, 7.0, 19.0, 33.0, 49.0):
        ev = hyp_sum(F(1), F(3, 2), -F(z) ** 2 / 4)
        assert abs(ev.value - math.sin(z) / z) <= ev.abs_error_estimate + 1e-17
