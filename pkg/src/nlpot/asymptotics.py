"""Power-log asymptotics: the single divergence rule and exact antiderivatives.

Every convergence question in the package about an integrand that behaves like
``C * rho**c * |log rho|**d`` near 0 or infinity is decided by
:func:`diverges_near_zero` / :func:`diverges_near_infinity`. Nothing else in
the package compares exponents against -1.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy import special

# Exponents produced by arithmetic such as (1 - a)/(p - 1) with a == p are
# compared with this relative slack.
EXPONENT_TOL = 1e-12


def same_exponent(x: float, y: float) -> bool:
    """Exponent equality up to floating rounding."""
    if math.isinf(x) or math.isinf(y):
        return x == y
    return abs(x - y) <= EXPONENT_TOL * max(1.0, abs(x), abs(y))


def diverges_near_zero(c: float, d: float) -> bool:
    """Whether ``int_0^delta rho**c |log rho|**d drho`` diverges.

    Diverges iff c < -1, or c = -1 and d >= -1.
    """
    if same_exponent(c, -1.0):
        return d > -1.0 or same_exponent(d, -1.0)
    return c < -1.0


def diverges_near_infinity(c: float, d: float) -> bool:
    """Whether ``int_R^inf rho**c (log rho)**d drho`` diverges.

    Diverges iff c > -1, or c = -1 and d >= -1.
    """
    if same_exponent(c, -1.0):
        return d > -1.0 or same_exponent(d, -1.0)
    return c > -1.0


def _exp_power_integral(k: float, d: float, x1: float, x2: float) -> float:
    """``int_{x1}^{x2} exp(-k x) x**d dx`` for 0 <= x1 < x2 <= inf."""
    if x2 <= x1:
        return 0.0
    if same_exponent(k, 0.0):
        if same_exponent(d, -1.0):
            return math.log(x2 / x1) if x1 > 0 else math.inf
        if math.isinf(x2):
            return math.inf if d > -1.0 else -(x1 ** (d + 1.0)) / (d + 1.0)
        if x1 == 0.0 and d < -1.0:
            return math.inf
        return (x2 ** (d + 1.0) - x1 ** (d + 1.0)) / (d + 1.0)
    if k > 0:
        a = d + 1.0
        if a > 0:
            hi = 0.0 if math.isinf(x2) else special.gammaincc(a, k * x2)
            val = special.gamma(a) * (special.gammaincc(a, k * x1) - hi)
            if val > 0 and np.isfinite(val):
                return float(val * k ** (-a))
        if x1 == 0.0 and a <= 0:
            return math.inf
        with mpmath.workdps(30):
            upper = mpmath.inf if math.isinf(x2) else k * x2
            return float(mpmath.gammainc(a, k * x1, upper) * mpmath.power(k, -a))
    # k < 0: integrand grows, only finite ranges make sense
    if math.isinf(x2):
        return math.inf
    if x1 == 0.0 and d <= -1.0:
        return math.inf
    with mpmath.workdps(30):
        return float(mpmath.quad(lambda x: mpmath.exp(-k * x) * x**d, [x1, x2]))


def power_log_integral(C: float, c: float, d: float, lo: float, hi: float) -> float:
    """Exact ``int_lo^hi C rho**c |log rho|**d drho``.

    The interval must not straddle rho = 1 unless ``d == 0``; ``lo`` may be 0
    and ``hi`` may be ``inf`` (the result is then ``inf`` when divergent).
    """
    if not 0.0 <= lo <= hi:
        raise ValueError(f"need 0 <= lo <= hi, got lo={lo}, hi={hi}")
    if lo == hi:
        return 0.0
    if d == 0.0:
        if lo < 1.0 < hi:
            return power_log_integral(C, c, d, lo, 1.0) + power_log_integral(C, c, d, 1.0, hi)
    elif lo < 1.0 < hi:
        raise ValueError("log factor changes branch inside the interval")
    if hi <= 1.0:
        # rho = exp(-x): rho**c |log rho|**d drho = exp(-(c+1)x) x**d dx
        x1 = -math.log(hi)
        x2 = math.inf if lo == 0.0 else -math.log(lo)
        return C * _exp_power_integral(c + 1.0, d, x1, x2)
    # rho = exp(x), x >= 0
    x1 = math.log(lo)
    x2 = math.inf if math.isinf(hi) else math.log(hi)
    return C * _exp_power_integral(-(c + 1.0), d, x1, x2)
