"""Adaptive quadrature on log-spaced panels.

Integrands in this package vary on a logarithmic scale in the radius, so
integrals over ``[a, b]`` with ``0 < a < b`` are computed in ``x = log rho``
and split into panels of at most :data:`PANEL_WIDTH` in ``x``; each panel is
handed to QUADPACK's adaptive Gauss-Kronrod routine.
"""

from __future__ import annotations

import math
import warnings
from typing import Callable, Iterable

import numpy as np
from scipy import integrate

PANEL_WIDTH = 2.0


class QuadratureError(ArithmeticError):
    """Raised when an integral cannot be evaluated to the requested accuracy."""


# QUADPACK may flag roundoff at tight tolerances; accept results whose own
# error estimate stays within this multiple of the requested tolerance.
ACCEPT_FACTOR = 1e3


def _log_integrand(func: Callable[[float], float]) -> Callable[[float], float]:
    def g(x: float) -> float:
        rho = math.exp(x)
        if rho == 0.0:
            return 0.0
        return float(func(rho)) * rho

    return g


def _check(value: float, err: float, rel_tol: float, where: str) -> None:
    if not (math.isfinite(value) and math.isfinite(err)):
        raise QuadratureError(f"non-finite integral on {where}")
    if err > ACCEPT_FACTOR * rel_tol * abs(value) + 1e-300:
        raise QuadratureError(f"quadrature did not reach tolerance on {where}: value={value}, error={err}")


def log_panels(a: float, b: float, breakpoints: Iterable[float] = ()) -> list[tuple[float, float]]:
    """Panels in ``x = log rho`` covering ``[log a, log b]``."""
    xa, xb = math.log(a), math.log(b)
    edges = {xa, xb}
    for bp in breakpoints:
        if a < bp < b:
            edges.add(math.log(bp))
    edges = sorted(edges)
    panels = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        m = max(1, math.ceil((hi - lo) / PANEL_WIDTH))
        cuts = np.linspace(lo, hi, m + 1)
        panels.extend(zip(cuts[:-1].tolist(), cuts[1:].tolist()))
    return panels


def integrate_log(
    func: Callable[[float], float],
    a: float,
    b: float,
    *,
    rel_tol: float = 1e-10,
    breakpoints: Iterable[float] = (),
) -> tuple[float, float]:
    """Integrate ``func(rho) drho`` over ``[a, b]``, ``0 < a <= b``.

    Returns ``(value, abs_error_estimate)``.
    """
    if not (a > 0 and b > 0):
        raise ValueError(f"log-panel quadrature needs positive limits, got [{a}, {b}]")
    if a == b:
        return 0.0, 0.0
    if a > b:
        v, e = integrate_log(func, b, a, rel_tol=rel_tol, breakpoints=breakpoints)
        return -v, e

    g = _log_integrand(func)
    total = 0.0
    err = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for lo, hi in log_panels(a, b, breakpoints):
            v, e = integrate.quad(g, lo, hi, epsabs=0.0, epsrel=rel_tol, limit=200)
            _check(v, e, rel_tol, f"[{math.exp(lo)}, {math.exp(hi)}]")
            total += v
            err += e
    return total, err


def integrate_from_zero(
    func: Callable[[float], float],
    b: float,
    *,
    rel_tol: float = 1e-10,
    breakpoints: Iterable[float] = (),
) -> tuple[float, float]:
    """Integrate ``func(rho) drho`` over ``(0, b]`` with 0 treated as open.

    Uses ``rho = exp(-u)``; the semi-infinite part runs through QUADPACK's
    infinite-range transform.
    """
    bps = sorted(bp for bp in breakpoints if 0 < bp < b)
    lowest = bps[0] if bps else b

    g = _log_integrand(func)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        v0, e0 = integrate.quad(g, -np.inf, math.log(lowest), epsabs=0.0, epsrel=rel_tol, limit=400)
    _check(v0, e0, rel_tol, f"(0, {lowest}]")
    if lowest < b:
        v1, e1 = integrate_log(func, lowest, b, rel_tol=rel_tol, breakpoints=bps)
    else:
        v1, e1 = 0.0, 0.0
    return v0 + v1, e0 + e1
