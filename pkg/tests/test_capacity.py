import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlpot.capacity import (
    CapacityQuery,
    CapacityResult,
    ExponentOrderError,
    HypothesisViolation,
    Method,
    SolverDivergence,
    dyadic_upper,
    exact_radial,
    integral_estimate,
    interpolation_lower,
    variational_profile,
    variational_radial,
)
from nlpot.measures import (
    DomainError,
    builtin_ahlfors,
    builtin_log,
    builtin_power,
    builtin_unweighted,
    induced_growth,
    surface_area,
)

LOG = builtin_log(3, 3.0, 1.0)
RADIAL = [builtin_unweighted(3), builtin_power(3, 1.0), LOG, builtin_log(2, 2.0, 2.0)]


@pytest.mark.parametrize(
    "g,p,r,R,expected",
    [
        (induced_growth(builtin_unweighted(3)), 2.0, 1.0, 2.0, 8 * math.pi / 3),
        (builtin_ahlfors(2.0), 2.0, 1.0, math.e, 1.0),
        (induced_growth(builtin_power(3, 1.0)), 2.0, 0.5, 1.0, 2 * math.pi / math.log(2)),
    ],
)
def test_integral_estimate_examples(g, p, r, R, expected):
    res = integral_estimate(g, CapacityQuery(p, r, R))
    assert res.value == pytest.approx(expected, rel=1e-9)
    assert res.method is Method.INTEGRAL_ESTIMATE and res.hypothesis_ok


def test_integral_estimate_flags_close_radii():
    res = integral_estimate(builtin_ahlfors(3.0), CapacityQuery(2.0, 1.0, 1.5))
    assert not res.hypothesis_ok
    assert res.value > 0


@pytest.mark.parametrize(
    "n,p,r,R,expected",
    [
        (3, 2.0, 1.0, 2.0, 8 * math.pi),
        (2, 2.0, 1.0, math.e, 2 * math.pi),
        (2, 3.0, 1.0, 2.0, math.pi / (2 * (math.sqrt(2) - 1) ** 2)),
    ],
)
def test_exact_radial_examples(n, p, r, R, expected):
    assert exact_radial(builtin_unweighted(n), CapacityQuery(p, r, R)).value == pytest.approx(expected, rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(n=st.sampled_from([2, 3, 4]), r=st.floats(0.01, 5.0), gap=st.floats(1.01, 100.0))
def test_exact_radial_conformal(n, r, gap):
    value = exact_radial(builtin_unweighted(n), CapacityQuery(float(n), r, r * gap)).value
    assert value == pytest.approx(surface_area(n) * math.log(gap) ** (1 - n), rel=1e-8)


@pytest.mark.parametrize(
    "g,p,r,R,expected",
    [
        (builtin_ahlfors(2.0), 2.0, 1.0, 4.0, 0.5),
        (induced_growth(builtin_unweighted(3)), 2.0, 1.0, 2.0, 8 * math.pi / 3),
        (induced_growth(builtin_power(3, 1.0)), 2.0, 1.0, 8.0, 2 * math.pi / 3),
    ],
)
def test_dyadic_examples(g, p, r, R, expected):
    assert dyadic_upper(g, CapacityQuery(p, r, R)).value == pytest.approx(expected, rel=1e-12)


def test_dyadic_requires_gap():
    with pytest.raises(HypothesisViolation):
        dyadic_upper(builtin_ahlfors(2.0), CapacityQuery(2.0, 1.0, 1.9))


@pytest.mark.parametrize(
    "n,p,R",
    [(3, 2.0, 2.0), (2, 2.0, math.e), (2, 3.0, 2.0)],
)
def test_variational_examples(n, p, R):
    m = builtin_unweighted(n)
    q = CapacityQuery(p, 1.0, R)
    res = variational_radial(m, q, 4096)
    exact = exact_radial(m, q).value
    assert res.value == pytest.approx(exact, rel=5e-3)
    assert res.method is Method.VARIATIONAL
    # Richardson estimate is honest to within a small factor
    assert abs(res.value - exact) <= 4 * res.abs_error_estimate + 1e-12 * exact


@pytest.mark.parametrize("m", RADIAL, ids=lambda m: f"{m.name}-{m.n}")
@pytest.mark.parametrize("p", [1.3, 2.0, 5.0])
def test_variational_weighted_models(m, p):
    q = CapacityQuery(p, 0.01, 0.5)
    res = variational_radial(m, q, 2048)
    assert res.value == pytest.approx(exact_radial(m, q).value, rel=1e-5)


def test_variational_profile_monotone():
    rho, u = variational_profile(builtin_unweighted(3), CapacityQuery(2.0, 1.0, 2.0), 256)
    assert u[0] == 1.0 and u[-1] == 0.0
    assert np.all(np.diff(u) < 0)
    # discrete minimizer tracks the harmonic profile (2/rho - 1)
    np.testing.assert_allclose(u, 2 / rho - 1, atol=1e-4)


def test_variational_grid_minimum():
    with pytest.raises(DomainError):
        variational_radial(builtin_unweighted(3), CapacityQuery(2.0, 1.0, 2.0), 8)


def test_variational_precision_limit_reports_diagnostics():
    with pytest.raises(SolverDivergence) as info:
        variational_radial(builtin_unweighted(3), CapacityQuery(30.0, 1e-6, 1e6), 4096, richardson=False)
    assert "iterations" in info.value.diagnostics


def test_interpolation_ahlfors_closed_form():
    # f = rho^3: the p=3 integral is log 2, the q=2 integral is 1/2, alpha = 1/2
    res = interpolation_lower(builtin_ahlfors(3.0), 3.0, 2.0, 2.5, 1.0, 2.0)
    assert res.value == pytest.approx(math.sqrt(2) / math.log(2), rel=1e-9)
    assert res.diagnostics["alpha"] == pytest.approx(0.5)


def test_interpolation_limits():
    g = induced_growth(LOG)
    r, R = 0.01, 0.1
    near_p = interpolation_lower(g, 3.0, 2.0, 3.0 - 1e-9, r, R).value
    near_q = interpolation_lower(g, 3.0, 2.0, 2.0 + 1e-9, r, R).value
    assert near_p == pytest.approx(integral_estimate(g, CapacityQuery(3.0, r, R)).value, rel=1e-7)
    assert near_q == pytest.approx(integral_estimate(g, CapacityQuery(2.0, r, R)).value, rel=1e-7)


@pytest.mark.parametrize("q,t,p", [(2.0, 2.0, 3.0), (2.5, 2.2, 3.0), (1.0, 1.5, 2.0)])
def test_interpolation_order(q, t, p):
    with pytest.raises(ExponentOrderError):
        interpolation_lower(builtin_ahlfors(3.0), p, q, t, 1.0, 4.0)


def test_query_validation():
    with pytest.raises(DomainError):
        CapacityQuery(1.0, 1.0, 2.0)
    with pytest.raises(DomainError):
        CapacityQuery(2.0, 2.0, 2.0)


def test_result_round_trip():
    res = dyadic_upper(builtin_ahlfors(2.0), CapacityQuery(2.0, 1.0, 4.0))
    assert CapacityResult.from_dict(res.to_dict()) == res


def test_newtonian_random():
    rng = np.random.default_rng(7)
    m = builtin_unweighted(3)
    for r, R in np.sort(rng.uniform(0.01, 10.0, (10, 2)), axis=1):
        value = exact_radial(m, CapacityQuery(2.0, r, R)).value
        assert value == pytest.approx(4 * math.pi * r * R / (R - r), rel=1e-8)


def _sweep(fn, m, p):
    out = np.empty((19, 6))
    for i, k in enumerate(range(2, 21)):
        for j in range(1, 7):
            out[i, j - 1] = fn(m, CapacityQuery(p, 2.0 ** (-k - j), 2.0 ** (-k)))
    return out


@pytest.mark.parametrize("m", [builtin_power(3, 1.0), LOG], ids=["power", "log"])
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_dyadic_to_integral_band(m, p):
    g = induced_growth(m)
    ratio = _sweep(lambda _, q: dyadic_upper(g, q).value / integral_estimate(g, q).value, m, p)
    assert np.max(np.abs(np.log(ratio))) < math.log(20.0)


@pytest.mark.parametrize("p,q", [(3.0, 1.5), (4.0, 2.0)])
def test_interpolation_to_integral_band(p, q):
    g = induced_growth(LOG)
    t = 0.5 * (p + q)
    ratios = []
    for k in range(2, 21):
        for j in range(1, 7):
            r, R = 2.0 ** (-k - j), 2.0 ** (-k)
            low = interpolation_lower(g, p, q, t, r, R).value
            ratios.append(low / integral_estimate(g, CapacityQuery(t, r, R)).value)
    assert np.max(np.abs(np.log(ratios))) < math.log(20.0)


def _with_error(res):
    return res.value, res.abs_error_estimate


METHODS = {
    "integral": lambda m, q: _with_error(integral_estimate(induced_growth(m), q)),
    "exact": lambda m, q: _with_error(exact_radial(m, q)),
    # grids differ between the compared annuli, so discretization error enters the comparison
    "variational": lambda m, q: _with_error(variational_radial(m, q, 256)),
}


@settings(max_examples=15, deadline=None)
@given(
    name=st.sampled_from(sorted(METHODS)),
    idx=st.integers(0, len(RADIAL) - 1),
    p=st.floats(1.2, 4.0),
    r=st.floats(1e-4, 0.05),
    gap=st.floats(2.0, 50.0),
    grow=st.floats(1.01, 3.0),
)
def test_monotone_in_radii(name, idx, p, r, gap, grow):
    fn, m = METHODS[name], RADIAL[idx]
    R = r * gap
    base, e0 = fn(m, CapacityQuery(p, r, R))
    wider, e1 = fn(m, CapacityQuery(p, r, R * grow))
    assert wider <= base * (1 + 1e-9) + 4 * (e0 + e1)
    thinner, e2 = fn(m, CapacityQuery(p, r * min(grow, 0.5 * gap), R))
    assert thinner >= base * (1 - 1e-9) - 4 * (e0 + e2)


@settings(max_examples=30, deadline=None)
@given(idx=st.integers(0, len(RADIAL) - 1), p=st.floats(1.2, 4.0), r=st.floats(1e-4, 0.05), gap=st.floats(2.0, 50.0), grow=st.floats(1.01, 3.0))
def test_dyadic_monotone_in_outer_radius(idx, p, r, gap, grow):
    g = induced_growth(RADIAL[idx])
    R = r * gap
    base = dyadic_upper(g, CapacityQuery(p, r, R)).value
    assert dyadic_upper(g, CapacityQuery(p, r, R * grow)).value <= base * (1 + 1e-12)


@settings(max_examples=30, deadline=None)
@given(idx=st.integers(0, 1), frac=st.floats(0.0, 1.0), r=st.floats(1e-4, 0.05), gap=st.floats(2.0, 50.0), grow=st.floats(1.01, 3.0))
def test_dyadic_monotone_in_inner_radius(idx, frac, r, gap, grow):
    # each dyadic term scales like r_k^((p-a)/(p-1)): nonincreasing in r_k for p <= a.
    # With a log factor in f the terms are not monotone at moderate radii, so pure powers only.
    g = induced_growth(RADIAL[idx])
    p = 1.2 + frac * (g.at_zero.a - 1.2)
    R = r * gap
    base = dyadic_upper(g, CapacityQuery(p, r, R)).value
    r2 = min(r * grow, 0.5 * R)
    assert dyadic_upper(g, CapacityQuery(p, r2, R)).value >= base * (1 - 1e-12)
