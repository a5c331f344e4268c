"""Shared independent oracles for the test suite.

These deliberately avoid the package's own Halley iteration and closed
forms: W values come from bisection on w*exp(w) = x, maximizers from dense
grids plus golden-section refinement. Expected values frozen into tests
were computed with exactly these routines.
"""
import math

import pytest


def bisection_w(x, tol=1e-14, iters=200):
    """Solve w*exp(w) = x by bisection; independent W oracle."""
    if x < 0.0:
        lo, hi = -1.0, 0.0
    else:
        lo, hi = 0.0, max(1.0, math.log(max(x, 1.0)) + 1.0)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid * math.exp(mid) - x <= 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol * max(1.0, abs(lo)):
            break
    return 0.5 * (lo + hi)


def golden_max(f, lo, hi, tol=1e-12):
    """Golden-section maximizer for unimodal f on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def grid_then_golden_max(f, lo, hi, grid=4001, tol=1e-12):
    """Dense scan followed by golden refinement around the best cell."""
    step = (hi - lo) / (grid - 1)
    xs = [lo + step * k for k in range(grid)]
    k = max(range(grid), key=lambda i: f(xs[i]))
    return golden_max(f, xs[max(0, k - 1)], xs[min(grid - 1, k + 1)], tol=tol)


@pytest.fixture
def w_oracle():
    return bisection_w
