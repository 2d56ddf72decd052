"""Numeric convergence diagnosis of integrals near the origin.

An integral ``int_0^1 F(rho) drho`` is cut into dyadic shells
``[2**-(k+1), 2**-k]``. Working in ``x = -log rho`` and entirely in log space,
the shells can be followed thousands of octaves deep without underflow. The
tail of the shell sequence is fitted with

    log a_k = A + B k + D log k + E / k

and the sum is declared convergent when the terms decay geometrically
(``B < 0``) or, at zero geometric rate, faster than ``1/k`` (``D < -1``).
This route never looks at the symbolic asymptotic class of the integrand; it
serves as the independent numeric check of the symbolic classifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from scipy.special import logsumexp

LN2 = math.log(2.0)
GEOMETRIC_TOL = 1e-5
HARMONIC_TOL = 0.03
DEFAULT_SHELLS = 4096
DEFAULT_NODES = 16
GRADED_LEVELS = 40

LogDensity = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SeriesDiagnosis:
    """Outcome of the shell-sum extrapolation."""

    convergent: bool
    resolved: bool  # False when the decay rate sits within HARMONIC_TOL of 1/k
    value: float | None
    abs_error_estimate: float
    geometric_rate: float
    log_rate: float
    shells: int


def _edges(shells: int, breakpoints_x: Iterable[float], graded: bool = False) -> np.ndarray:
    edges = np.arange(shells + 1, dtype=float) * LN2
    extra = [x for x in breakpoints_x if 0.0 < x < edges[-1]]
    if graded:
        # geometric refinement toward x = 0, where integrands like u^tau vanish algebraically
        extra.extend(LN2 * 2.0 ** -np.arange(1, GRADED_LEVELS + 1))
    if extra:
        edges = np.unique(np.concatenate([edges, extra]))
    return edges


def _gl(m: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = np.polynomial.legendre.leggauss(m)
    return t, w


def _mapped_nodes(left: np.ndarray, right: np.ndarray, m: int):
    t, w = _gl(m)
    half = 0.5 * (right - left)
    nodes = left[..., None] + half[..., None] * (t + 1.0)
    with np.errstate(divide="ignore"):
        logw = np.log(half)[..., None] + np.log(w)
    return nodes, logw


def log_interval_integrals(log_density: LogDensity, edges: np.ndarray, m: int = DEFAULT_NODES) -> np.ndarray:
    """``log int`` of ``exp(log_density)`` over each interval of ``edges``."""
    nodes, logw = _mapped_nodes(edges[:-1], edges[1:], m)
    with np.errstate(all="ignore"):
        vals = log_density(nodes) + logw
        return logsumexp(vals, axis=-1)


def log_running_integral(log_density: LogDensity, edges: np.ndarray, m: int = DEFAULT_NODES):
    """Running ``log int_0^x exp(log_density)`` at Gauss nodes of each interval.

    Returns ``(nodes, log_weights, log_running)`` each of shape ``(I, m)``.
    """
    left, right = edges[:-1], edges[1:]
    nodes, logw = _mapped_nodes(left, right, m)
    with np.errstate(all="ignore"):
        totals = logsumexp(log_density(nodes) + logw, axis=-1)
        before = np.concatenate([[-np.inf], np.logaddexp.accumulate(totals)[:-1]])
        sub_nodes, sub_logw = _mapped_nodes(np.broadcast_to(left[:, None], nodes.shape), nodes, m)
        partial = logsumexp(log_density(sub_nodes) + sub_logw, axis=-1)
        running = np.logaddexp(before[:, None], partial)
    return nodes, logw, running


def shell_log_terms(log_values: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """Combine per-interval log integrals into dyadic shell terms."""
    shell_index = np.floor(edges[:-1] / LN2 + 1e-9).astype(int)
    out = np.full(shell_index.max() + 1, -np.inf)
    with np.errstate(all="ignore"):
        np.logaddexp.at(out, shell_index, log_values)
    return out


def _fast_shell_log_terms(log_values: np.ndarray, edges: np.ndarray) -> np.ndarray:
    if edges.size - 1 == round(edges[-1] / LN2):
        return log_values
    return shell_log_terms(log_values, edges)


def diagnose(log_terms: np.ndarray) -> SeriesDiagnosis:
    """Decide convergence of ``sum_k exp(log_terms[k])`` and extrapolate it."""
    K = log_terms.size
    with np.errstate(all="ignore"):
        log_partial = float(logsumexp(log_terms))
    k = np.arange(K, dtype=float)
    lo = max(8, K // 8)
    window = slice(lo, K)
    kk, yy = k[window], log_terms[window]
    finite = np.isfinite(yy)
    if finite.sum() < 8:
        # terms vanished numerically: nothing left to add
        return SeriesDiagnosis(True, True, math.exp(log_partial), 0.0, -math.inf, -math.inf, K)
    kk, yy = kk[finite], yy[finite]
    design = np.column_stack([np.ones_like(kk), kk, np.log(kk), 1.0 / kk])
    (A, B, D, E), *_ = np.linalg.lstsq(design, yy, rcond=None)

    if B > GEOMETRIC_TOL:
        return SeriesDiagnosis(False, True, None, math.inf, float(B), float(D), K)
    geometric = bool(B < -GEOMETRIC_TOL)
    if not geometric:
        if D >= -1.0 - HARMONIC_TOL:
            resolved = bool(abs(D + 1.0) > HARMONIC_TOL)
            return SeriesDiagnosis(False, resolved, None, math.inf, float(B), float(D), K)
        B = 0.0

    # extrapolate the fitted tail past the last computed shell
    far = np.arange(K, 64 * K, dtype=float)
    with np.errstate(all="ignore"):
        log_tail = logsumexp(A + B * far + D * np.log(far) + E / far)
        tail = math.exp(log_tail)
        if not geometric:
            kmax = 64.0 * K
            tail += math.exp(A) * kmax ** (D + 1.0) / (-D - 1.0)
    value = float(math.exp(log_partial) + tail)
    return SeriesDiagnosis(True, True, value, float(0.05 * tail + 1e-12 * value), float(B), float(D), K)


def integral_to_origin(
    log_density: LogDensity,
    *,
    breakpoints_x: Iterable[float] = (),
    shells: int = DEFAULT_SHELLS,
) -> SeriesDiagnosis:
    """Diagnose ``int_0^1 F drho`` given ``log_density(x) = log(F(e^-x) e^-x)``."""
    edges = _edges(shells, breakpoints_x)
    vals = log_interval_integrals(log_density, edges)
    return diagnose(_fast_shell_log_terms(vals, edges))


def running_then_integral_to_origin(
    inner_log_density: LogDensity,
    outer: Callable[[np.ndarray, np.ndarray], np.ndarray],
    *,
    breakpoints_x: Iterable[float] = (),
    shells: int = DEFAULT_SHELLS,
) -> SeriesDiagnosis:
    """Diagnose ``int_0^1 G(rho, U(rho)) drho`` with ``U(rho) = int_rho^1 h``.

    ``inner_log_density`` is ``log(h(e^-x) e^-x)``; ``outer(x, log_U)``
    returns ``log(G e^-x)`` at the nodes.
    """
    edges = _edges(shells, breakpoints_x, graded=True)
    nodes, logw, running = log_running_integral(inner_log_density, edges)
    with np.errstate(all="ignore"):
        vals = logsumexp(outer(nodes, running) + logw, axis=-1)
    return diagnose(_fast_shell_log_terms(vals, edges))
