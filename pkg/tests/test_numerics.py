import math

import numpy as np
import pytest

from nlpot.quadrature import QuadratureError, integrate_from_zero, integrate_log, log_panels
from nlpot.series import integral_to_origin, running_then_integral_to_origin


def test_log_panels_cover_interval_and_respect_breakpoints():
    panels = log_panels(1e-6, 1.0, breakpoints=[math.exp(-1)])
    assert panels[0][0] == pytest.approx(math.log(1e-6))
    assert panels[-1][1] == pytest.approx(0.0)
    assert any(abs(hi + 1.0) < 1e-15 for _, hi in panels)
    for (_, hi), (lo, _) in zip(panels[:-1], panels[1:]):
        assert hi == lo


@pytest.mark.parametrize(
    "func,a,b,exact",
    [
        (lambda r: r**-0.5, 1e-8, 1.0, 2.0 * (1.0 - 1e-4)),
        (lambda r: 1.0 / r, 1e-10, 10.0, math.log(1e11)),
        (lambda r: r**2 * abs(math.log(r)), 1e-6, math.exp(-1), None),
    ],
)
def test_integrate_log_against_antiderivative(func, a, b, exact):
    if exact is None:
        # r^2 (-log r): antiderivative r^3 (1 - 3 log r) / 9
        F = lambda r: r**3 * (1.0 - 3.0 * math.log(r)) / 9.0
        exact = F(b) - F(a)
    v, err = integrate_log(func, a, b)
    assert v == pytest.approx(exact, rel=1e-10)
    assert err < 1e-8 * abs(exact)


def test_integrate_log_reversed_limits():
    v, _ = integrate_log(lambda r: r, 2.0, 1.0)
    assert v == pytest.approx(-1.5)


def test_integrate_from_zero_singular_endpoint():
    v, _ = integrate_from_zero(lambda r: r**-0.9, 1.0)
    assert v == pytest.approx(10.0, rel=1e-9)


def test_integrate_from_zero_divergent_raises():
    with pytest.raises(QuadratureError):
        integrate_from_zero(lambda r: 1.0 / r, 1.0)


def test_series_geometric():
    # rho^(-1/2) on (0, 1]: in x = -log rho the shell density is e^(-x/2)
    d = integral_to_origin(lambda x: -0.5 * x)
    assert d.convergent and d.resolved
    assert d.value == pytest.approx(2.0, rel=1e-12)


def test_series_slow_power_tail_is_extrapolated():
    # 1 / (rho (1 + log(1/rho))^2): integral 1 with a 1/k tail
    d = integral_to_origin(lambda x: -2.0 * np.log1p(x))
    assert d.convergent
    assert d.value == pytest.approx(1.0, rel=1e-6)


@pytest.mark.parametrize("power,resolved", [(0.0, True), (-0.5, True), (-1.0, False)])
def test_series_divergent(power, resolved):
    d = integral_to_origin(lambda x: power * np.log1p(x))
    assert not d.convergent
    assert d.resolved is resolved
    assert d.value is None


def test_running_then_integral():
    # U(rho) = int_rho^1 1 = 1 - rho, integral of U over (0, 1) is 1/2
    d = running_then_integral_to_origin(
        lambda x: -x,
        lambda x, log_u: log_u - x,
    )
    assert d.convergent
    assert d.value == pytest.approx(0.5, rel=1e-10)
