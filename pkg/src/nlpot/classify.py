"""Decision procedures: capacity of the pole, parabolicity, boundedness and
integrability of the Green function and of its gradient.

Every verdict comes from the power-log rule in :mod:`nlpot.asymptotics`
applied to the declared asymptotic class of the growth function. Negative
answers that rest on Poincare inequalities the package cannot check consume
hypotheses declared in an :class:`AssumptionProfile`; without them the
answer is Inconclusive.

Standing assumptions: the Green function questions are posed on a doubling
space supporting a p-Poincare inequality at the pole. A t-Poincare
inequality for ``t >= p`` is therefore implied and never has to be declared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping

from .asymptotics import diverges_near_infinity, diverges_near_zero, same_exponent
from .exponents import analytic_exponents, critical_exponents
from .green import gradient_norm_finite
from .measures import AssumptionProfile, DomainError, GrowthFunction, RadialMeasure, as_growth

Model = RadialMeasure | GrowthFunction


class State(str, Enum):
    MEMBER = "Member"
    NON_MEMBER = "NonMember"
    BORDERLINE_IN = "BorderlineIn"
    BORDERLINE_OUT = "BorderlineOut"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    state: State
    basis: str
    hypotheses_used: tuple[str, ...] = ()

    @property
    def holds(self) -> bool | None:
        """Membership as a boolean; ``None`` when inconclusive."""
        if self.state in (State.MEMBER, State.BORDERLINE_IN):
            return True
        if self.state in (State.NON_MEMBER, State.BORDERLINE_OUT):
            return False
        return None

    def to_dict(self) -> dict[str, Any]:
        return {"state": self.state.value, "basis": self.basis, "hypotheses_used": list(self.hypotheses_used)}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Verdict":
        return cls(State(d["state"]), d["basis"], tuple(d.get("hypotheses_used", ())))


def _member(ok: bool, basis: str, hyps: tuple[str, ...] = ()) -> Verdict:
    return Verdict(State.MEMBER if ok else State.NON_MEMBER, basis, hyps)


def _inconclusive(basis: str) -> Verdict:
    return Verdict(State.INCONCLUSIVE, basis)


def _check_p(p: float) -> None:
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p}")


def _growth_integrand_diverges_at_zero(g: GrowthFunction, p: float) -> bool:
    """``int_0 (rho / f)^(1/(p-1))`` diverges, with ``f ~ C rho^a |log rho|^b``."""
    a, b = g.at_zero.a, g.at_zero.b
    return diverges_near_zero((1.0 - a) / (p - 1.0), -b / (p - 1.0))


def _declared(label: str, t0: float) -> str:
    return f"{label}={t0:g}"


def singleton_zero(model: Model, p: float, hyp: AssumptionProfile = AssumptionProfile()) -> Verdict:
    """Whether the pole has zero p-capacity.

    Divergence of the growth integral at 0 gives zero capacity outright; the
    converse needs a p0-Poincare inequality with some ``p0 < p``.
    """
    _check_p(p)
    g = as_growth(model)
    if g.at_zero is None:
        return _inconclusive("no asymptotic class at 0")
    if _growth_integrand_diverges_at_zero(g, p):
        return _member(True, "growth integral diverges at 0")
    t0 = hyp.poincare_small(p, strict=True)
    if t0 is None:
        return _inconclusive("growth integral converges at 0; positive capacity needs a p0-Poincare inequality, p0 < p")
    return _member(False, "growth integral converges at 0", (_declared("poincare_at_x0", t0),))


def is_parabolic(model: Model, p: float, hyp: AssumptionProfile = AssumptionProfile()) -> Verdict:
    """Whether the whole space is p-parabolic.

    Divergence of the growth integral at infinity gives parabolicity; the
    converse needs doubling and a p-Poincare inequality for large radii.
    """
    _check_p(p)
    g = as_growth(model)
    cls = g.at_infinity
    if cls is None:
        return _inconclusive("no asymptotic class at infinity")
    if diverges_near_infinity((1.0 - cls.a) / (p - 1.0), -cls.b / (p - 1.0)):
        return _member(True, "growth integral diverges at infinity")
    t0 = hyp.poincare_large(p)
    if t0 is None:
        return _inconclusive("growth integral converges at infinity; hyperbolicity needs large-radii Poincare")
    return _member(False, "growth integral converges at infinity", (_declared("poincare_large_radii", t0),))


def green_bounded(model: Model, p: float) -> Verdict:
    """Boundedness of the Green function near its pole (Member = bounded)."""
    _check_p(p)
    g = as_growth(model)
    if g.at_zero is None:
        return _inconclusive("no asymptotic class at 0")
    if _growth_integrand_diverges_at_zero(g, p):
        return _member(False, "growth integral diverges at 0: zero capacity, unbounded")
    return _member(True, "growth integral converges at 0: positive capacity, bounded")


def green_in_Ltau(model: Model, p: float, tau: float) -> Verdict:
    """L^tau membership of the Green function near its pole.

    Off the critical exponent the answer is strict; at ``tau = tau_p`` the
    borderline series is decided from the log exponent of the growth class.
    """
    _check_p(p)
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    g = as_growth(model)
    if g.at_zero is None:
        return _inconclusive("no asymptotic class at 0")
    us0, b = g.at_zero.a, g.at_zero.b
    if p > us0 and not same_exponent(p, us0):
        return _member(True, "p above us0: Green function bounded")
    tau_p = critical_exponents(analytic_exponents(g), p).tau_p
    if not same_exponent(tau, tau_p):
        if tau < tau_p:
            return _member(True, "tau below tau_p")
        return _member(False, "tau above tau_p")
    if same_exponent(p, us0):
        # p = us0: the borderline sum has terms ~ k^(-b/(us0-1))
        inside = not diverges_near_infinity(-b / (us0 - 1.0), 0.0)
        basis = "borderline at p = us0: log exponent b against us0 - 1"
    else:
        # p < us0: the borderline sum has terms ~ k^(-b p/(us0-p))
        inside = not diverges_near_infinity(-b * p / (us0 - p), 0.0)
        basis = "borderline at p < us0: b p/(us0 - p) against 1"
    return Verdict(State.BORDERLINE_IN if inside else State.BORDERLINE_OUT, basis)


def _radial_gradient(model: Model, p: float, t: float, fallback: str) -> Verdict:
    if isinstance(model, RadialMeasure):
        return _member(gradient_norm_finite(model, p, t), "radial weight: exact gradient integral")
    return _inconclusive(fallback)


def gradient_in_Lt(model: Model, p: float, t: float, hyp: AssumptionProfile = AssumptionProfile()) -> Verdict:
    """L^t membership of the Green function's gradient near its pole.

    Whenever the general criteria leave the question open and the model is
    radial, the exact radial gradient integral decides it.
    """
    _check_p(p)
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    g = as_growth(model)
    if g.at_zero is None:
        return _radial_gradient(model, p, t, "no asymptotic class at 0")
    rep = analytic_exponents(g)
    us0, lq0 = rep.us0, rep.lq0
    if p > us0 and not same_exponent(p, us0):
        return _radial_gradient(model, p, t, "p above us0: outside the gradient criteria")

    crit = critical_exponents(rep, p)
    t_p, q_hat = crit.t_p, crit.q_hat

    if same_exponent(p, us0):
        zero = singleton_zero(g, p)
        if zero.state is State.MEMBER:
            return _member(t < p and not same_exponent(t, p), "p = us0 with zero pole capacity: member iff t < p")
        return _radial_gradient(model, p, t, "p = us0 but zero pole capacity not established")

    if not same_exponent(t, t_p):
        if t < t_p:
            return _member(True, "t below t_p")
        if t < 1:
            return _radial_gradient(model, p, t, "t above t_p but below 1")
        if t >= p:
            return _member(False, "t above t_p; t-Poincare implied by the standing p-Poincare", ("implied:p-poincare",))
        t0 = hyp.poincare_small(t)
        if t0 is not None:
            return _member(False, "t above t_p", (_declared("poincare_at_x0", t0),))
        return _radial_gradient(model, p, t, "t above t_p; needs a t-Poincare inequality")

    # t = t_p
    clean = rep.us0_borderline_bad is False
    if clean and p < q_hat and t_p >= 1:
        t0 = hyp.poincare_small(t_p)
        if t0 is not None:
            return _member(False, "t = t_p with p < q_hat", (_declared("poincare_at_x0", t0),))
    if clean and q_hat <= p and lq0 > 1:
        t0 = hyp.poincare_small(t_p, strict=True)
        if t0 is not None:
            return _member(False, "t = t_p with q_hat <= p", (_declared("poincare_at_x0", t0),))
    return _radial_gradient(model, p, t, "t = t_p; borderline hypotheses not met")


def tau_monotonicity_check(model: Model, p1: float, p2: float) -> bool:
    """Borderline membership at p1 must carry over to any larger p2 < us0."""
    g = as_growth(model)
    if g.at_zero is None:
        raise DomainError("model has no asymptotic class at 0")
    us0 = g.at_zero.a
    if not 1 < p1 < p2 < us0:
        raise DomainError(f"need 1 < p1 < p2 < us0, got p1={p1}, p2={p2}, us0={us0}")
    rep = analytic_exponents(g)
    v1 = green_in_Ltau(g, p1, critical_exponents(rep, p1).tau_p)
    v2 = green_in_Ltau(g, p2, critical_exponents(rep, p2).tau_p)
    return v1.state is not State.BORDERLINE_IN or v2.state is State.BORDERLINE_IN


QUESTIONS = ("singleton_zero", "is_parabolic", "green_bounded", "green_in_Ltau", "gradient_in_Lt")


def ask(question: str, model: Model, p: float, *, tau: float | None = None, t: float | None = None,
        hyp: AssumptionProfile = AssumptionProfile()) -> Verdict:
    """Dispatch a question by name."""
    if question == "singleton_zero":
        return singleton_zero(model, p, hyp)
    if question == "is_parabolic":
        return is_parabolic(model, p, hyp)
    if question == "green_bounded":
        return green_bounded(model, p)
    if question == "green_in_Ltau":
        if tau is None:
            raise DomainError("green_in_Ltau needs tau")
        return green_in_Ltau(model, p, tau)
    if question == "gradient_in_Lt":
        if t is None:
            raise DomainError("gradient_in_Lt needs t")
        return gradient_in_Lt(model, p, t, hyp)
    raise KeyError(f"unknown question '{question}'; choose from {', '.join(QUESTIONS)}")
