"""Pointwise exponent-set endpoints and the critical exponents built on them."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Mapping

import numpy as np

from .asymptotics import same_exponent
from .measures import DomainError, GrowthFunction


class UnsupportedAsymptotics(ValueError):
    """The model carries no asymptotic class on the required side."""


class DegenerateGrid(ValueError):
    """Sampling range too short for a meaningful regression."""


class Source(str, Enum):
    ANALYTIC = "Analytic"
    EMPIRICAL = "Empirical"


def _num_out(x: float | None):
    if x is None:
        return None
    return "inf" if math.isinf(x) else x


def _num_in(x) -> float | None:
    if x is None:
        return None
    return math.inf if x == "inf" else float(x)


@dataclass(frozen=True)
class ExponentReport:
    """Endpoints ls0 <= us0 and lq0 <= uq0 of the four pointwise exponent sets.

    The membership flags say whether us0 itself lies in uS0 / lS0; ``None``
    means unknown (empirical reports, or asymptotics outside the power-log
    class).
    """

    ls0: float
    us0: float
    lq0: float
    uq0: float
    us0_in_uS0: bool | None
    us0_in_lS0: bool | None
    source: Source = Source.ANALYTIC

    def __post_init__(self):
        if not (self.lq0 <= self.ls0 <= self.us0 <= self.uq0):
            raise ValueError(
                f"exponent chain violated: lq0={self.lq0}, ls0={self.ls0}, us0={self.us0}, uq0={self.uq0}"
            )

    @property
    def us0_borderline_bad(self) -> bool | None:
        """Whether us0 lies in uS0 but not in lS0, the case the borderline gradient branches exclude."""
        if self.us0_in_uS0 is None or self.us0_in_lS0 is None:
            return None
        return self.us0_in_uS0 and not self.us0_in_lS0

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["source"] = self.source.value
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ExponentReport":
        return cls(
            ls0=float(d["ls0"]),
            us0=float(d["us0"]),
            lq0=float(d["lq0"]),
            uq0=float(d["uq0"]),
            us0_in_uS0=d["us0_in_uS0"],
            us0_in_lS0=d["us0_in_lS0"],
            source=Source(d["source"]),
        )


@dataclass(frozen=True)
class CriticalExponents:
    """tau_p (None when p > us0, inf when p = us0), t_p and q_hat."""

    p: float
    tau_p: float | None
    t_p: float
    q_hat: float

    def to_dict(self) -> dict[str, Any]:
        return {"p": self.p, "tau_p": _num_out(self.tau_p), "t_p": _num_out(self.t_p), "q_hat": self.q_hat}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "CriticalExponents":
        return cls(float(d["p"]), _num_in(d["tau_p"]), _num_in(d["t_p"]), float(d["q_hat"]))


def analytic_exponents(g: GrowthFunction) -> ExponentReport:
    """Endpoints for ``f ~ C rho^a |log rho|^b`` at 0: all equal ``a``.

    The log factor only decides membership of the common endpoint:
    ``b >= 0`` puts it in uS0, ``b <= 0`` in lS0.
    """
    cls = g.at_zero
    if cls is None:
        raise UnsupportedAsymptotics(f"model '{g.name}' has no asymptotic class at 0")
    a, b = cls.a, cls.b
    return ExponentReport(a, a, a, a, us0_in_uS0=b >= 0, us0_in_lS0=b <= 0, source=Source.ANALYTIC)


def empirical_exponents(g: GrowthFunction, r_lo: float, r_hi: float, k: int = 32) -> ExponentReport:
    """Least-squares slope of log f against log rho on a log-spaced grid."""
    if not 0 < r_lo < r_hi:
        raise DomainError(f"need 0 < r_lo < r_hi, got {r_lo}, {r_hi}")
    if r_hi > g.anchor_radius * (1 + 1e-12):
        raise DomainError(f"r_hi={r_hi} exceeds the anchor radius {g.anchor_radius}")
    if k < 8:
        raise DomainError(f"need at least 8 samples, got {k}")
    if r_hi / r_lo < 4:
        raise DegenerateGrid(f"r_hi/r_lo = {r_hi / r_lo:.3g} < 4")
    rho = np.geomspace(r_lo, r_hi, k)
    slope = float(np.polyfit(np.log(rho), np.log(np.asarray(g(rho), dtype=float)), 1)[0])
    return ExponentReport(slope, slope, slope, slope, None, None, source=Source.EMPIRICAL)


def _tau(theta: float, p: float) -> float | None:
    if same_exponent(p, theta):
        return math.inf
    if p > theta:
        return None
    return theta * (p - 1) / (theta - p)


def critical_exponents(rep: ExponentReport, p: float) -> CriticalExponents:
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p}")
    us0, lq0 = rep.us0, rep.lq0
    # us0 <= 1 forces p > us0: the gradient is then in L^p and has no finite threshold
    t_p = us0 * (p - 1) / (us0 - 1) if us0 > 1 else math.inf
    q_hat = lq0 + 1 - lq0 / us0
    return CriticalExponents(p=p, tau_p=_tau(us0, p), t_p=t_p, q_hat=q_hat)


@dataclass(frozen=True)
class SuperharmonicThresholds:
    """Local integrability thresholds for arbitrary superharmonic functions.

    When ``locally_bounded`` is set (p above the global exponent) the function
    is continuous, hence locally bounded, and its gradient is locally in L^p;
    the two bounds are then ``None``.
    """

    tau_bound: float | None
    t_bound: float | None
    locally_bounded: bool = False


def superharmonic_thresholds(utheta: float, p: float) -> SuperharmonicThresholds:
    if utheta < 1:
        raise DomainError(f"global exponent must be >= 1, got {utheta}")
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p}")
    tau = _tau(utheta, p)
    if tau is None:
        return SuperharmonicThresholds(None, None, locally_bounded=True)
    return SuperharmonicThresholds(tau, utheta * (p - 1) / (utheta - 1))
