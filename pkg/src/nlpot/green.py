"""Radial p-harmonic Green profiles, their norms, and profile estimators.

For ``d mu = w(|x|) dx`` on R^n the Green function of the unit ball with pole
at the origin is radial with profile

    u(rho) = int_rho^1 h(s) ds,    h(s) = (w(s) s^(n-1))^(1/(1-p)),

and ``|grad u| = h``. The default profile carries no sphere-area factor. With
``normalized=True`` the density is multiplied by omega_{n-1} inside ``h``;
the superlevel sets ``{u > b}`` then have condenser capacity exactly
``b**(1-p)`` in the unit ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping

import numpy as np

from . import series
from .asymptotics import diverges_near_zero, same_exponent
from .exponents import ExponentReport
from .measures import DomainError, GrowthFunction, RadialMeasure
from .quadrature import integrate_log


class NormKind(str, Enum):
    FUNCTION = "FunctionNorm"
    GRADIENT = "GradientNorm"


class Regime(str, Enum):
    BELOW_LQ0 = "BelowLq0"
    AT_LQ0 = "AtLq0"
    ABOVE_LQ0 = "AboveLq0"
    BOUNDED = "BoundedCase"


DIVERGENT = "divergent"


@dataclass(frozen=True)
class NormResult:
    """``int_{B_1} F dmu`` for ``F = u**tau`` or ``F = |grad u|**t``.

    ``value`` is ``None`` when the integral diverges. ``symbolic_finite`` is
    the power-log verdict (``None`` if the weight has no symbolic class);
    ``numeric_finite`` is the shell-series verdict, which never consults the
    symbolic class.
    """

    value: float | None
    exponent: float
    kind: NormKind
    basis: str
    symbolic_finite: bool | None
    numeric_finite: bool | None
    abs_error_estimate: float = 0.0
    numeric_resolved: bool = True

    @property
    def divergent(self) -> bool:
        return self.value is None

    def to_dict(self) -> dict[str, Any]:
        key = "tau" if self.kind is NormKind.FUNCTION else "t"
        return {
            key: "inf" if math.isinf(self.exponent) else self.exponent,
            "value": DIVERGENT if self.value is None else self.value,
            "verdict_basis": self.basis,
            "kind": self.kind.value,
            "symbolic_finite": self.symbolic_finite,
            "numeric_finite": self.numeric_finite,
            "numeric_resolved": self.numeric_resolved,
            "abs_error_estimate": self.abs_error_estimate,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "NormResult":
        kind = NormKind(d["kind"])
        raw = d["tau" if kind is NormKind.FUNCTION else "t"]
        return cls(
            value=None if d["value"] == DIVERGENT else float(d["value"]),
            exponent=math.inf if raw == "inf" else float(raw),
            kind=kind,
            basis=d["verdict_basis"],
            symbolic_finite=d["symbolic_finite"],
            numeric_finite=d["numeric_finite"],
            abs_error_estimate=float(d["abs_error_estimate"]),
            numeric_resolved=bool(d["numeric_resolved"]),
        )


def _check_p(p: float) -> None:
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p}")


def _scale(m: RadialMeasure, normalized: bool) -> float:
    return m.omega if normalized else 1.0


def radial_green_gradient(m: RadialMeasure, p: float, rho, *, normalized: bool = False):
    """``|grad u|(rho) = (w(rho) rho^(n-1))^(1/(1-p))``."""
    _check_p(p)
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise DomainError("gradient is defined for rho > 0")
    x = -np.log(rho)
    log_density = m.log_weight_at_depth(x) - (m.n - 1) * x + math.log(_scale(m, normalized))
    out = np.exp(log_density / (1.0 - p))
    return float(out) if out.ndim == 0 else out


def _green_value_scalar(m: RadialMeasure, p: float, rho: float, normalized: bool, rel_tol: float) -> float:
    if not 0 < rho <= 1:
        raise DomainError(f"Green profile is defined for 0 < rho <= 1, got {rho}")
    if rho == 1.0:
        return 0.0
    e = 1.0 / (1.0 - p)
    exact = m.piece_integral(e, rho, 1.0)
    if exact is not None:
        return _scale(m, normalized) ** e * exact
    return integrate_log(
        lambda s: radial_green_gradient(m, p, s, normalized=normalized),
        rho,
        1.0,
        rel_tol=rel_tol,
        breakpoints=m.breakpoints,
    )[0]


def radial_green_value(m: RadialMeasure, p: float, rho, *, normalized: bool = False, rel_tol: float = 1e-12):
    """``u(rho) = int_rho^1 (w(s) s^(n-1))^(1/(1-p)) ds``; closed form on exact pieces."""
    _check_p(p)
    arr = np.asarray(rho, dtype=float)
    vals = np.array([_green_value_scalar(m, p, float(r), normalized, rel_tol) for r in arr.ravel()])
    return float(vals[0]) if arr.ndim == 0 else vals.reshape(arr.shape)


@dataclass(frozen=True)
class GreenProfile:
    """Radial Green profile ``u`` and gradient magnitude ``g`` on ``(0, 1]``."""

    model: RadialMeasure
    p: float
    normalized: bool = False

    def __post_init__(self):
        _check_p(self.p)

    def u(self, rho):
        return radial_green_value(self.model, self.p, rho, normalized=self.normalized)

    def g(self, rho):
        return radial_green_gradient(self.model, self.p, rho, normalized=self.normalized)

    def table(self, rho_min: float, points: int) -> np.ndarray:
        """Rows ``(rho, u, g)`` on a log grid from ``rho_min`` to 1."""
        if points < 2:
            raise DomainError("need at least 2 grid points")
        rho = np.geomspace(rho_min, 1.0, points)
        rho[-1] = 1.0
        return np.column_stack([rho, self.u(rho), self.g(rho)])


# --- estimators for general growth functions --------------------------------


def growth_estimate(g: GrowthFunction, p: float, r: float, R: float, *, rel_tol: float = 1e-10) -> float:
    """``int_r^R (rho / f(rho))^(1/(p-1)) drho``."""
    _check_p(p)
    if not 0 < r <= R:
        raise DomainError(f"need 0 < r <= R, got r={r}, R={R}")
    if r == R:
        return 0.0
    e = 1.0 / (p - 1.0)
    return integrate_log(lambda rho: (rho / g(rho)) ** e, r, R, rel_tol=rel_tol, breakpoints=g.breakpoints)[0]


def pole_profile_estimate(g: GrowthFunction, p: float, r: float, R: float, inf_u: float = 0.0, A: float = 1.0) -> float:
    """``A (inf_u + growth_estimate)``; ``inf_u = 0`` for Green functions."""
    if not A > 0:
        raise DomainError(f"scale must be positive, got {A}")
    if inf_u < 0:
        raise DomainError(f"infimum must be nonnegative, got {inf_u}")
    return A * (inf_u + growth_estimate(g, p, r, R))


@dataclass(frozen=True)
class PointwiseRegime:
    regime: Regime
    estimate: str


_ESTIMATES = {
    Regime.BELOW_LQ0: "u(x) ~ (r^p / mu(B_r))^(1/(p-1)) with r = d(x, x0)",
    Regime.AT_LQ0: "two-sided logarithmic bounds; exact order from the growth integral",
    Regime.ABOVE_LQ0: "u(x) ~ int_r^R (rho / mu(B_rho))^(1/(p-1)) drho",
    Regime.BOUNDED: "u bounded near x0; the point has positive capacity",
}


def pointwise_regime(rep: ExponentReport, p: float) -> PointwiseRegime:
    """Which pointwise estimate governs the Green function near the pole."""
    _check_p(p)
    if p > rep.us0 and not same_exponent(p, rep.us0):
        regime = Regime.BOUNDED
    elif same_exponent(p, rep.lq0):
        regime = Regime.AT_LQ0
    elif p < rep.lq0:
        regime = Regime.BELOW_LQ0
    else:
        regime = Regime.ABOVE_LQ0
    return PointwiseRegime(regime, _ESTIMATES[regime])


# --- norms -------------------------------------------------------------------

SYMBOLIC_BASIS = "power-log rule"
NUMERIC_BASIS = "shell-series extrapolation"


def _density_exponents(m: RadialMeasure) -> tuple[float, float]:
    """Power and log exponents of ``w rho^(n-1)`` at 0."""
    return m.w_at_zero.a + m.n - 1.0, m.w_at_zero.b


def _log_density(m: RadialMeasure, x: np.ndarray) -> np.ndarray:
    """``log(w rho^(n-1))`` at ``rho = e^-x``."""
    return m.log_weight_at_depth(x) - (m.n - 1) * x


# rho = e^-x underflows past this depth; weights without a log form stop there
FLOAT_DEPTH = 700.0


def _shell_count(m: RadialMeasure, shells: int) -> int:
    if m.log_w is None:
        return min(shells, int(FLOAT_DEPTH / series.LN2))
    return shells


def _breakpoints_x(m: RadialMeasure) -> tuple[float, ...]:
    return tuple(-math.log(b) for b in m.breakpoints if 0 < b < 1)


def _u_symbolic_finite(m: RadialMeasure, p: float, tau: float) -> bool:
    """Power-log verdict for ``int_0 u^tau w rho^(n-1)``."""
    cd, bd = _density_exponents(m)
    ch, dh = cd / (1.0 - p), bd / (1.0 - p)
    if not diverges_near_zero(ch, dh):
        return True  # u is bounded; w rho^(n-1) is integrable at 0
    if math.isinf(tau):
        return False
    if same_exponent(ch, -1.0):
        # u grows like a power of log(1/rho) or like log log(1/rho)
        return not diverges_near_zero(cd, bd + tau * (dh + 1.0))
    return not diverges_near_zero(tau * (ch + 1.0) + cd, tau * dh + bd)


def _numeric_result(diag: series.SeriesDiagnosis) -> tuple[bool | None, bool]:
    return diag.convergent, diag.resolved


def gradient_norm_finite(m: RadialMeasure, p: float, t: float) -> bool:
    """Power-log verdict for ``int_0 (w rho^(n-1))^(1 - t/(p-1)) drho``."""
    power = 1.0 - t / (p - 1.0)
    cd, bd = _density_exponents(m)
    return not diverges_near_zero(power * cd, power * bd)


def lnorm_u(
    m: RadialMeasure,
    p: float,
    tau: float,
    *,
    normalized: bool = False,
    shells: int = series.DEFAULT_SHELLS,
) -> NormResult:
    """``omega_{n-1} int_0^1 u^tau w rho^(n-1) drho``; ``tau = inf`` gives ``sup u``."""
    _check_p(p)
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    log_scale = math.log(_scale(m, normalized))
    bx = _breakpoints_x(m)

    def inner(x):
        return (_log_density(m, x) + log_scale) / (1.0 - p) - x

    if math.isinf(tau):
        diag = series.integral_to_origin(inner, breakpoints_x=bx, shells=_shell_count(m, shells))
    else:
        log_omega = math.log(m.omega)

        def outer(x, log_u):
            return tau * log_u + log_omega + _log_density(m, x) - x

        diag = series.running_then_integral_to_origin(inner, outer, breakpoints_x=bx, shells=_shell_count(m, shells))
    numeric, resolved = _numeric_result(diag)
    symbolic = _u_symbolic_finite(m, p, tau)

    finite = symbolic
    value = diag.value if finite else None
    err = diag.abs_error_estimate if finite else 0.0
    if finite and math.isinf(tau):
        # sup u = u(0+), exact when the weight has closed-form pieces
        e = 1.0 / (1.0 - p)
        exact = m.piece_integral(e, 0.0, 1.0)
        if exact is not None:
            value, err = _scale(m, normalized) ** e * exact, 0.0
    if finite and value is None:
        # finite, but too slowly convergent for the shell sum to evaluate
        value, err = math.nan, math.inf
    return NormResult(value, tau, NormKind.FUNCTION, SYMBOLIC_BASIS, symbolic, numeric, err, resolved)


def lnorm_gradient(
    m: RadialMeasure,
    p: float,
    t: float,
    *,
    normalized: bool = False,
    shells: int = series.DEFAULT_SHELLS,
) -> NormResult:
    """``omega_{n-1} int_0^1 (w rho^(n-1))^(1 - t/(p-1)) drho``."""
    _check_p(p)
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    power = 1.0 - t / (p - 1.0)
    symbolic = gradient_norm_finite(m, p, t)
    # sphere factor of the normalized profile enters g^t as omega^(t/(1-p))
    log_front = math.log(m.omega) + t / (1.0 - p) * math.log(_scale(m, normalized))

    def density(x):
        return log_front + power * _log_density(m, x) - x

    diag = series.integral_to_origin(density, breakpoints_x=_breakpoints_x(m), shells=_shell_count(m, shells))
    numeric, resolved = _numeric_result(diag)
    if not symbolic:
        return NormResult(None, t, NormKind.GRADIENT, SYMBOLIC_BASIS, symbolic, numeric, 0.0, resolved)
    exact = m.piece_integral(power, 0.0, 1.0)
    if exact is not None:
        value, err = math.exp(log_front) * exact, 0.0
    else:
        value, err = diag.value, diag.abs_error_estimate
        if value is None:
            value, err = math.nan, math.inf
    return NormResult(value, t, NormKind.GRADIENT, SYMBOLIC_BASIS, symbolic, numeric, err, resolved)
