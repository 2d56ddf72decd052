"""Annulus p-capacities: integral estimate, exact radial value, dyadic bound,
variational oracle and the Hoelder interpolation lower bound.

Comparison constants of the estimators are set to 1; the estimators are
comparable to the true capacity only up to such constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping

import numpy as np
from scipy.linalg import solve_banded
from scipy.special import logsumexp

from .measures import DomainError, GrowthFunction, RadialMeasure
from .quadrature import integrate_log


class Method(str, Enum):
    INTEGRAL_ESTIMATE = "IntegralEstimate"
    EXACT_RADIAL = "ExactRadial"
    DYADIC_UPPER = "DyadicUpper"
    VARIATIONAL = "Variational"
    INTERPOLATION_LOWER = "InterpolationLower"


class HypothesisViolation(ValueError):
    """The query violates a hypothesis the method cannot do without."""


class ExponentOrderError(DomainError):
    """Exponents not ordered as 1 < q < t < p."""


class SolverDivergence(ArithmeticError):
    def __init__(self, message: str, diagnostics: Mapping[str, Any]):
        super().__init__(message)
        self.diagnostics = dict(diagnostics)


@dataclass(frozen=True)
class CapacityQuery:
    p: float
    r: float
    R: float

    def __post_init__(self):
        if not self.p > 1:
            raise DomainError(f"p must exceed 1, got {self.p}")
        if not 0 < self.r < self.R:
            raise DomainError(f"need 0 < r < R, got r={self.r}, R={self.R}")

    @property
    def two_sided_ok(self) -> bool:
        """Whether 2r <= R, the range of the two-sided integral estimate."""
        return 2 * self.r <= self.R


@dataclass(frozen=True)
class CapacityResult:
    value: float
    method: Method
    abs_error_estimate: float
    hypothesis_ok: bool = True
    diagnostics: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "method": self.method.value,
            "abs_error_estimate": self.abs_error_estimate,
            "hypothesis_ok": self.hypothesis_ok,
            "diagnostics": dict(self.diagnostics),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "CapacityResult":
        return cls(
            float(d["value"]),
            Method(d["method"]),
            float(d["abs_error_estimate"]),
            bool(d["hypothesis_ok"]),
            dict(d.get("diagnostics", {})),
        )


def _growth_integral(g: GrowthFunction, p: float, r: float, R: float, rel_tol: float) -> tuple[float, float]:
    """``int_r^R (rho / f(rho))^(1/(p-1)) drho`` and its error estimate."""
    e = 1.0 / (p - 1.0)
    return integrate_log(lambda rho: (rho / g(rho)) ** e, r, R, rel_tol=rel_tol, breakpoints=g.breakpoints)


def _power_of_integral(I: float, err: float, p: float) -> tuple[float, float]:
    value = I ** (1.0 - p)
    return value, (p - 1.0) * value * err / I


def integral_estimate(g: GrowthFunction, q: CapacityQuery, *, rel_tol: float = 1e-9) -> CapacityResult:
    """``(int_r^R (rho/f)^(1/(p-1)) drho)^(1-p)``; flagged when 2r > R."""
    I, err = _growth_integral(g, q.p, q.r, q.R, rel_tol)
    value, verr = _power_of_integral(I, err, q.p)
    return CapacityResult(value, Method.INTEGRAL_ESTIMATE, verr, hypothesis_ok=q.two_sided_ok)


def exact_radial(m: RadialMeasure, q: CapacityQuery, *, rel_tol: float = 1e-12) -> CapacityResult:
    """``(int_r^R (omega w rho^(n-1))^(1/(1-p)) drho)^(1-p)``, exact for every annulus."""
    e = 1.0 / (1.0 - q.p)
    I, err = integrate_log(
        lambda rho: (m.omega * m.density(rho)) ** e, q.r, q.R, rel_tol=rel_tol, breakpoints=m.breakpoints
    )
    value, verr = _power_of_integral(I, err, q.p)
    return CapacityResult(value, Method.EXACT_RADIAL, verr)


def dyadic_upper(g: GrowthFunction, q: CapacityQuery) -> CapacityResult:
    """Dyadic chaining bound ``(sum_k (r_k^p / f(r_k))^(1/(p-1)))^(1-p)``, r_k = 2^k r."""
    if not q.two_sided_ok:
        raise HypothesisViolation(f"dyadic bound needs 2r <= R, got r={q.r}, R={q.R}")
    k0 = int(math.floor(math.log2(q.R / q.r) + 1e-12))
    rk = q.r * 2.0 ** np.arange(1, k0 + 1)
    terms = (rk**q.p / np.asarray(g(rk), dtype=float)) ** (1.0 / (q.p - 1.0))
    value = float(terms.sum() ** (1.0 - q.p))
    return CapacityResult(value, Method.DYADIC_UPPER, 0.0, diagnostics={"k0": k0})


def interpolation_lower(
    g: GrowthFunction, p: float, q: float, t: float, r: float, R: float, *, rel_tol: float = 1e-9
) -> CapacityResult:
    """Lower estimator for the t-capacity interpolated between exponents q < t < p."""
    if not 1 < q < t < p:
        raise ExponentOrderError(f"need 1 < q < t < p, got q={q}, t={t}, p={p}")
    query = CapacityQuery(p, r, R)
    if not query.two_sided_ok:
        raise HypothesisViolation(f"interpolation bound needs 2r <= R, got r={r}, R={R}")
    alpha = (p - t) / (p - q)
    cap_p = integral_estimate(g, query, rel_tol=rel_tol)
    Jq, jerr = _growth_integral(g, q, r, R, rel_tol)
    value = cap_p.value ** (1.0 - alpha) * Jq ** (alpha * (1.0 - q))
    rel = (1.0 - alpha) * cap_p.abs_error_estimate / cap_p.value + alpha * (q - 1.0) * jerr / Jq
    return CapacityResult(value, Method.INTERPOLATION_LOWER, value * rel, diagnostics={"alpha": alpha})


# --- discrete variational problem -------------------------------------------


# relative gradient level below which a failed line search counts as roundoff
STALL_ACCEPT = 1e-7
EPS = float(np.finfo(float).eps)
DECREMENT_TOL = 1e-15
CONTINUATION_BELOW = 1.5
CONTINUATION_ABOVE = 4.0
CONTINUATION_RATIO = 0.5


def _terms(logc: np.ndarray, s: np.ndarray, power: float) -> np.ndarray:
    """``c_i s_i^power`` evaluated in log space to avoid intermediate overflow."""
    with np.errstate(divide="ignore"):
        return np.exp(logc + power * np.log(s))


def _newton_minimize(logc: np.ndarray, p: float, u0: np.ndarray, tol: float, max_iter: int):
    """Minimize ``sum c_i |u_{i+1} - u_i|^p`` with u[0] = 1, u[-1] = 0 fixed.

    ``logc`` holds ``log c_i``. The energy is normalized to 1 at the start and
    rescaled on return. ``tol`` bounds the gradient relative to the largest
    flux.
    """
    u = u0.copy()
    du = np.diff(u)
    shift = float(logsumexp(logc + p * np.log(np.abs(du))))
    logc = logc - shift
    energy = float(np.sum(_terms(logc, np.abs(du), p)))
    fallbacks = 0
    gnorm = math.inf

    def done(iterations):
        return u, energy * math.exp(shift), {"iterations": iterations, "grad_norm": gnorm, "fallback_steps": fallbacks}

    for it in range(1, max_iter + 1):
        s = np.abs(du)
        flux = p * _terms(logc, s, p - 1.0) * np.sign(du)
        grad = flux[:-1] - flux[1:]
        # gradient entries are differences of fluxes; measure them on that scale
        gnorm = float(np.max(np.abs(grad))) / float(np.max(np.abs(flux)))
        if gnorm < tol:
            return done(it - 1)
        h = p * (p - 1.0) * _terms(logc, s, p - 2.0)
        diag = h[:-1] + h[1:]
        ab = np.zeros((3, diag.size))
        ab[0, 1:] = -h[1:-1]
        ab[1] = diag
        ab[2, :-1] = -h[1:-1]
        step = None
        if np.all(np.isfinite(ab)) and np.min(diag) > 1e-300:
            try:
                step = solve_banded((1, 1), ab, -grad)
            except np.linalg.LinAlgError:
                step = None
        slope = float(grad @ step) if step is not None and np.all(np.isfinite(step)) else 0.0
        if step is None or not slope < 0:
            # near-singular Hessian: Jacobi-scaled steepest descent instead
            fallbacks += 1
            scale = np.where(np.isfinite(diag) & (diag > 0), diag, 1.0)
            step = -grad / scale
            slope = float(grad @ step)
        # predicted decrease below energy roundoff: Armijo is meaningless and
        # the gradient has reached its floor once it is this small
        small = -slope < DECREMENT_TOL * energy
        floor = 64.0 * EPS * max(p - 1.0, 1.0) / float(np.min(s))
        if small and gnorm < max(STALL_ACCEPT, floor):
            return done(it - 1)
        # the minimizer is decreasing; keep every increment negative
        dstep = np.diff(np.concatenate([[0.0], step, [0.0]]))
        rising = dstep > 0
        alpha = 1.0
        if np.any(rising):
            alpha = min(1.0, 0.9 * float(np.min(-du[rising] / dstep[rising])))
        while True:
            trial = u.copy()
            trial[1:-1] += alpha * step
            tdu = np.diff(trial)
            tenergy = float(np.sum(_terms(logc, np.abs(tdu), p)))
            if small or tenergy <= energy + 1e-4 * alpha * slope or alpha < 1e-12:
                break
            alpha *= 0.5
        if alpha < 1e-12 and tenergy >= energy:
            if gnorm < STALL_ACCEPT:
                return done(it)
            break
        u, du, energy = trial, tdu, tenergy
    diagnostics = {"iterations": it, "grad_norm": gnorm, "fallback_steps": fallbacks}
    raise SolverDivergence(f"Newton iteration stalled with gradient norm {gnorm:.3e}", diagnostics)


def _variational_once(m: RadialMeasure, q: CapacityQuery, N: int, tol: float, max_iter: int):
    rho = np.geomspace(q.r, q.R, N + 1)
    rho[0], rho[-1] = q.r, q.R
    width = np.diff(rho)
    mid = 0.5 * (rho[:-1] + rho[1:])
    u = 1.0 - np.log(rho / q.r) / math.log(q.R / q.r)
    log_base = math.log(m.omega) + np.log(np.asarray(m.density(mid), dtype=float)) + np.log(width)
    total_iter = 0
    for p in _continuation_path(q.p):
        u, energy, diag = _newton_minimize(log_base - p * np.log(width), p, u, tol, max_iter)
        total_iter += diag["iterations"]
    return energy, u, rho, {**diag, "iterations": total_iter}


def _continuation_path(p: float) -> list[float]:
    """Exponents walked from 2 towards p when p is close to 1 or large.

    Near p = 1 the energy is almost 1-homogeneous and undamped Newton steps
    overshoot by about 1/(p-1); for large p the log-linear start is far from
    the minimizer. Warm starts along the path keep steps short.
    """
    path = []
    e = 1.0
    if p < CONTINUATION_BELOW:
        while e * CONTINUATION_RATIO > p - 1.0:
            e *= CONTINUATION_RATIO
            path.append(1.0 + e)
    elif p > CONTINUATION_ABOVE:
        while e / CONTINUATION_RATIO < p - 1.0:
            e /= CONTINUATION_RATIO
            path.append(1.0 + e)
    return path + [p]


def variational_radial(
    m: RadialMeasure,
    q: CapacityQuery,
    N: int = 4096,
    *,
    tol: float = 1e-10,
    max_iter: int = 200,
    richardson: bool = True,
) -> CapacityResult:
    """Minimize the discretized radial p-energy over profiles with u(r)=1, u(R)=0.

    Nodes are log-spaced; the weight is sampled at interval midpoints. The
    error estimate is the Richardson difference against the N/2 grid assuming
    second-order convergence.
    """
    if N < 16:
        raise DomainError(f"grid size must be >= 16, got {N}")
    energy, _, _, diag = _variational_once(m, q, N, tol, max_iter)
    err = 0.0
    if richardson:
        coarse, *_ = _variational_once(m, q, N // 2, tol, max_iter)
        err = abs(energy - coarse) / 3.0
        diag = {**diag, "coarse_value": coarse}
    return CapacityResult(energy, Method.VARIATIONAL, err, diagnostics={**diag, "N": N})


def variational_profile(m: RadialMeasure, q: CapacityQuery, N: int = 4096, *, tol: float = 1e-10):
    """Nodes and minimizing profile of the discrete problem."""
    _, u, rho, _ = _variational_once(m, q, N, tol, 200)
    return rho, u
