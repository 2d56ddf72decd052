import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlpot.classify import (
    QUESTIONS,
    State,
    Verdict,
    ask,
    gradient_in_Lt,
    green_bounded,
    green_in_Ltau,
    is_parabolic,
    singleton_zero,
    tau_monotonicity_check,
)
from nlpot.exponents import analytic_exponents, critical_exponents
from nlpot.measures import (
    AssumptionProfile,
    AsymptoticClass,
    DomainError,
    as_growth,
    builtin_ahlfors,
    builtin_log,
    builtin_power,
    builtin_unweighted,
    induced_growth,
    table_growth,
)

S, N = 3.0, 3


def tau_p(model, p):
    return critical_exponents(analytic_exponents(as_growth(model)), p).tau_p


@pytest.mark.parametrize(
    "p,state",
    [(1.2, State.BORDERLINE_OUT), (1.4, State.BORDERLINE_OUT), (1.6, State.BORDERLINE_IN), (2.0, State.BORDERLINE_IN), (2.9, State.BORDERLINE_IN)],
)
def test_ex_log_borderline_table(p, state):
    m = builtin_log(N, S, 1.0)
    assert green_in_Ltau(m, p, tau_p(m, p)).state is state


@settings(max_examples=100, deadline=None)
@given(beta=st.floats(0.1, 5.0), frac=st.floats(0.01, 0.99))
def test_borderline_flips_at_s_over_one_plus_beta(beta, frac):
    m = induced_growth(builtin_log(N, S, beta))
    p = 1.0 + frac * (S - 1.0)
    edge = S / (1 + beta)
    if abs(p - edge) < 1e-6:
        return
    verdict = green_in_Ltau(m, p, tau_p(m, p))
    assert verdict.holds is (p > edge)


@pytest.mark.parametrize("beta,bounded", [(1.0, False), (2.0, False), (2.5, True), (3.0, True)])
def test_green_bounded_at_p_equals_s(beta, bounded):
    assert green_bounded(builtin_log(N, S, beta), 3.0).holds is bounded


def test_off_critical_tau():
    m = builtin_log(N, S, 1.0)
    assert green_in_Ltau(m, 2.0, 2.5).state is State.MEMBER
    assert green_in_Ltau(m, 2.0, 3.5).state is State.NON_MEMBER
    assert green_in_Ltau(m, 3.5, 100.0).state is State.MEMBER


@pytest.mark.parametrize("beta,state", [(1.0, State.NON_MEMBER), (2.0, State.NON_MEMBER), (2.5, State.MEMBER), (3.0, State.MEMBER)])
@pytest.mark.parametrize("p", [1.5, 2.0, 2.5])
def test_ex_log_2_gradient_table(beta, state, p):
    v = gradient_in_Lt(builtin_log(N, S, beta), p, 1.5 * (p - 1))
    assert v.state is state
    assert v.basis == "radial weight: exact gradient integral"


def test_gradient_growth_model_is_inconclusive_at_borderline():
    g = induced_growth(builtin_log(N, S, 1.0))
    assert gradient_in_Lt(g, 2.0, 1.5).state is State.INCONCLUSIVE


def test_gradient_off_critical():
    g = builtin_ahlfors(3.0)
    assert gradient_in_Lt(g, 2.0, 1.2).state is State.MEMBER
    implied = gradient_in_Lt(g, 2.0, 2.5)
    assert implied.state is State.NON_MEMBER and implied.hypotheses_used == ("implied:p-poincare",)
    assert gradient_in_Lt(g, 2.0, 1.6).state is State.INCONCLUSIVE
    declared = gradient_in_Lt(g, 2.0, 1.6, AssumptionProfile(poincare_at_x0={1.5}))
    assert declared.state is State.NON_MEMBER and declared.hypotheses_used == ("poincare_at_x0=1.5",)


def test_gradient_at_us0_with_zero_pole_capacity():
    g = builtin_ahlfors(3.0)
    assert gradient_in_Lt(g, 3.0, 2.9).state is State.MEMBER
    assert gradient_in_Lt(g, 3.0, 3.0).state is State.NON_MEMBER


def test_gradient_borderline_with_hypothesis():
    # power weight: us0 = lq0 = 2, no log factor, so the borderline branches apply
    g = induced_growth(builtin_power(3, 1.0))
    t_p = critical_exponents(analytic_exponents(g), 1.8).t_p
    v = gradient_in_Lt(g, 1.8, t_p, AssumptionProfile(poincare_at_x0={1.0}))
    assert v.state is State.NON_MEMBER and v.hypotheses_used


@pytest.mark.parametrize("Q", [1.5, 2.0, 2.5, 3.0, 3.5])
@pytest.mark.parametrize("p", [2.0, 3.0])
def test_parabolicity_dichotomy(Q, p):
    hyp = AssumptionProfile(poincare_large_radii={1.0})
    v = is_parabolic(builtin_ahlfors(Q), p, hyp)
    if Q <= p:
        assert v.state is State.MEMBER and not v.hypotheses_used
    else:
        assert v.state is State.NON_MEMBER and v.hypotheses_used == ("poincare_large_radii=1",)


def test_hyperbolic_needs_hypothesis():
    assert is_parabolic(builtin_ahlfors(3.5), 2.0).state is State.INCONCLUSIVE


@pytest.mark.parametrize(
    "model,p,state",
    [
        (builtin_ahlfors(3.0), 3.0, State.MEMBER),
        (builtin_ahlfors(3.0), 2.5, State.MEMBER),
        (builtin_log(N, S, 1.0), 3.0, State.MEMBER),
        (builtin_log(N, S, 2.5), 3.0, State.NON_MEMBER),
        (builtin_unweighted(2), 3.0, State.NON_MEMBER),
    ],
)
def test_singleton_zero(model, p, state):
    hyp = AssumptionProfile(poincare_at_x0={1.0})
    assert singleton_zero(model, p, hyp).state is state


def test_singleton_positive_capacity_needs_strictly_smaller_exponent():
    m = builtin_unweighted(2)
    assert singleton_zero(m, 3.0).state is State.INCONCLUSIVE
    assert singleton_zero(m, 3.0, AssumptionProfile(poincare_at_x0={3.0})).state is State.INCONCLUSIVE
    assert singleton_zero(m, 3.0, AssumptionProfile(poincare_at_x0={2.0})).state is State.NON_MEMBER


def test_tabulated_growth_without_class_is_inconclusive():
    g = table_growth([1e-3, 1.0], [1e-9, 1.0])
    for q in ("singleton_zero", "green_bounded"):
        assert ask(q, g, 2.0).state is State.INCONCLUSIVE
    assert is_parabolic(g, 2.0).state is State.INCONCLUSIVE


def test_tabulated_growth_with_class():
    g = table_growth([1e-3, 1.0], [1e-9, 1.0], at_zero=AsymptoticClass(3.0), at_infinity=AsymptoticClass(3.0))
    assert green_bounded(g, 2.0).state is State.NON_MEMBER
    assert is_parabolic(g, 3.0).state is State.MEMBER


@settings(max_examples=100, deadline=None)
@given(beta=st.floats(-2.0, 5.0), a=st.floats(1.5, 5.0), f1=st.floats(0.01, 0.98), f2=st.floats(0.01, 0.99))
def test_tau_monotonicity(beta, a, f1, f2):
    g = table_growth([1e-3, 1.0], [1e-9, 1.0], at_zero=AsymptoticClass(a, beta))
    p1 = 1.0 + f1 * (a - 1.0)
    p2 = p1 + f2 * (a - p1)
    if not 1 < p1 < p2 < a:
        return
    assert tau_monotonicity_check(g, p1, p2)


def test_tau_monotonicity_order():
    with pytest.raises(DomainError):
        tau_monotonicity_check(builtin_ahlfors(3.0), 2.5, 2.0)


def test_ask_dispatch():
    m = builtin_log(N, S, 1.0)
    assert ask("green_in_Ltau", m, 2.0, tau=3.0).state is State.BORDERLINE_IN
    assert ask("gradient_in_Lt", m, 2.0, t=1.5).state is State.NON_MEMBER
    assert set(QUESTIONS) >= {"singleton_zero", "is_parabolic"}
    with pytest.raises(KeyError):
        ask("nonsense", m, 2.0)
    with pytest.raises(DomainError):
        ask("green_in_Ltau", m, 2.0)


def test_domain_checks():
    with pytest.raises(DomainError):
        green_bounded(builtin_ahlfors(3.0), 1.0)
    with pytest.raises(DomainError):
        green_in_Ltau(builtin_ahlfors(3.0), 2.0, 0.0)


def test_verdict_round_trip():
    v = is_parabolic(builtin_ahlfors(3.5), 2.0, AssumptionProfile(poincare_large_radii={1.0}))
    assert Verdict.from_dict(v.to_dict()) == v
    assert v.holds is False
    assert Verdict(State.INCONCLUSIVE, "x").holds is None
