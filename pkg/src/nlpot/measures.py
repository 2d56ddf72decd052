"""Volume-growth models: abstract growth functions and radial weights on R^n."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Mapping

import numpy as np
from scipy import special

from .asymptotics import power_log_integral
from .quadrature import integrate_from_zero

INV_E = math.exp(-1.0)


class DomainError(ValueError):
    """Model parameters outside the admissible range."""


class Side(str, Enum):
    AT_ZERO = "AtZero"
    AT_INFINITY = "AtInfinity"


@dataclass(frozen=True)
class AsymptoticClass:
    """``C * rho**a * |log rho|**b`` on one side (near 0 or near infinity)."""

    a: float
    b: float = 0.0
    C: float = 1.0
    side: Side = Side.AT_ZERO

    def __post_init__(self):
        if not self.C > 0:
            raise DomainError(f"asymptotic constant must be positive, got {self.C}")

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = self.C * rho**self.a
        if self.b:
            out = out * np.abs(np.log(rho)) ** self.b
        return out

    def to_dict(self) -> dict[str, Any]:
        return {"a": self.a, "b": self.b, "C": self.C, "side": self.side.value}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "AsymptoticClass":
        return cls(float(d["a"]), float(d.get("b", 0.0)), float(d.get("C", 1.0)), Side(d.get("side", "AtZero")))


def surface_area(n: int) -> float:
    """Surface area of the unit sphere S^{n-1} in R^n."""
    return 2.0 * math.pi ** (n / 2.0) / special.gamma(n / 2.0)


@dataclass(frozen=True)
class GrowthFunction:
    """The map ``rho -> mu(B_rho)`` plus declared asymptotics.

    ``kappa`` is the declared ratio band: for ``rho <= anchor_radius`` the
    quotient ``evaluate(rho) / at_zero(rho)`` lies in ``[1/kappa, kappa]``.
    ``None`` means no band is declared.
    """

    evaluate: Callable[[Any], Any]
    at_zero: AsymptoticClass | None
    at_infinity: AsymptoticClass | None = None
    anchor_radius: float = 1.0
    kappa: float | None = None
    name: str = "custom"
    spec: Mapping[str, Any] | None = None
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        if self.at_zero is not None and not self.at_zero.a > 0:
            raise DomainError("a growth function must vanish at the point: need a > 0 at zero")

    def __call__(self, rho):
        return self.evaluate(rho)


@dataclass(frozen=True)
class RadialMeasure:
    """``d mu = w(|x|) dx`` on R^n.

    ``exact_pieces`` lists radial intervals ``(lo, hi, cls)`` on which ``w``
    coincides with ``cls`` exactly; they enable closed-form integrals.
    """

    n: int
    w: Callable[[Any], Any]
    omega: float
    w_at_zero: AsymptoticClass
    w_at_infinity: AsymptoticClass | None = None
    exact_pieces: tuple[tuple[float, float, AsymptoticClass], ...] = ()
    log_w: Callable[[np.ndarray], np.ndarray] | None = None
    breakpoints: tuple[float, ...] = ()
    growth_kappa: float | None = None
    anchor_radius: float = 1.0
    name: str = "custom"
    spec: Mapping[str, Any] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"dimension must be >= 2, got {self.n}")
        if not self.w_at_zero.a + self.n > 0:
            raise DomainError("weight is not integrable at the origin (a_w + n <= 0)")

    def density(self, rho):
        """``w(rho) rho**(n-1)``, the radial density without the sphere factor."""
        rho = np.asarray(rho, dtype=float)
        return self.w(rho) * rho ** (self.n - 1)

    def log_weight_at_depth(self, x: np.ndarray) -> np.ndarray:
        """``log w(e^-x)``, usable far below the floating-point range of rho."""
        if self.log_w is not None:
            return self.log_w(x)
        with np.errstate(all="ignore"):
            return np.log(self.w(np.exp(-np.asarray(x, dtype=float))))

    def piece_integral(self, power: float, lo: float, hi: float) -> float | None:
        """Exact ``int_lo^hi (w rho**(n-1))**power drho`` if ``w`` is exact there."""
        if not self.exact_pieces:
            return None
        total = 0.0
        covered = lo
        for plo, phi, cls in self.exact_pieces:
            a, b = max(lo, plo), min(hi, phi)
            if a >= b:
                continue
            if a > covered:
                return None
            total += power_log_integral(cls.C**power, power * (cls.a + self.n - 1), power * cls.b, a, b)
            covered = b
        return total if covered >= hi else None


def _power_log_weight(a: float, b: float, cut: float | None):
    def w(rho):
        rho = np.asarray(rho, dtype=float)
        out = rho**a
        if b and cut is not None:
            out = np.where(rho <= cut, out * np.abs(np.log(np.minimum(rho, cut))) ** b, out)
        return out

    return w


def builtin_power(n: int, alpha: float) -> RadialMeasure:
    """``w(rho) = rho**-alpha`` on R^n, ``0 < alpha < n``."""
    if not 0 < alpha < n:
        raise DomainError(f"power weight needs 0 < alpha < n, got alpha={alpha}, n={n}")
    return _power_measure(n, alpha, {"kind": "power", "n": n, "alpha": alpha})


def builtin_unweighted(n: int) -> RadialMeasure:
    """Lebesgue measure on R^n."""
    return _power_measure(n, 0.0, {"kind": "unweighted", "n": n})


def _power_measure(n: int, alpha: float, spec: dict) -> RadialMeasure:
    if n < 2:
        raise DomainError(f"dimension must be >= 2, got {n}")
    cls0 = AsymptoticClass(-alpha, 0.0, 1.0, Side.AT_ZERO)
    cls_inf = AsymptoticClass(-alpha, 0.0, 1.0, Side.AT_INFINITY)
    return RadialMeasure(
        n=n,
        w=_power_log_weight(-alpha, 0.0, None),
        omega=surface_area(n),
        w_at_zero=cls0,
        w_at_infinity=cls_inf,
        exact_pieces=((0.0, math.inf, cls0),),
        log_w=lambda x: alpha * np.asarray(x, dtype=float),
        growth_kappa=1.0,
        anchor_radius=1.0,
        name="unweighted" if alpha == 0 else "power",
        spec=spec,
    )


def builtin_log(n: int, s: float, beta: float) -> RadialMeasure:
    """``w = rho**(s-n) |log rho|**beta`` for ``rho <= 1/e``, ``rho**(s-n)`` beyond."""
    if n < 2:
        raise DomainError(f"dimension must be >= 2, got {n}")
    if not s > 1:
        raise DomainError(f"log weight needs s > 1, got {s}")
    if not beta > 0:
        raise DomainError(f"log weight needs beta > 0, got {beta}")
    cls0 = AsymptoticClass(s - n, beta, 1.0, Side.AT_ZERO)
    cls_inf = AsymptoticClass(s - n, 0.0, 1.0, Side.AT_INFINITY)

    def log_w(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return -(s - n) * x + np.where(x >= 1.0, beta * np.log(np.maximum(x, 1.0)), 0.0)

    # sup of f / ((omega/s) rho^s |log rho|^beta) on (0, 1/e] is attained at 1/e
    edge = special.gammaincc(beta + 1, s) * special.gamma(beta + 1) * math.exp(s) / s**beta
    kappa = max(edge, 1.0 / edge) * (1.0 + 1e-9)
    return RadialMeasure(
        n=n,
        w=_power_log_weight(s - n, beta, INV_E),
        omega=surface_area(n),
        w_at_zero=cls0,
        w_at_infinity=cls_inf,
        exact_pieces=((0.0, INV_E, cls0), (INV_E, math.inf, cls_inf)),
        log_w=log_w,
        breakpoints=(INV_E,),
        growth_kappa=kappa,
        anchor_radius=INV_E,
        name="log",
        spec={"kind": "log", "n": n, "s": s, "beta": beta},
    )


def builtin_ahlfors(Q: float) -> GrowthFunction:
    """Ahlfors Q-regular model ``mu(B_rho) = rho**Q``."""
    if not Q > 1:
        raise DomainError(f"Ahlfors model needs Q > 1, got {Q}")
    return GrowthFunction(
        evaluate=lambda rho: np.asarray(rho, dtype=float) ** Q,
        at_zero=AsymptoticClass(Q, 0.0, 1.0, Side.AT_ZERO),
        at_infinity=AsymptoticClass(Q, 0.0, 1.0, Side.AT_INFINITY),
        anchor_radius=1.0,
        kappa=1.0,
        name="ahlfors",
        spec={"kind": "ahlfors", "Q": Q},
    )


def _growth_class(cls: AsymptoticClass | None, n: int, omega: float, side: Side) -> AsymptoticClass | None:
    if cls is None:
        return None
    a = cls.a + n
    if not a > 0:
        return None
    return AsymptoticClass(a, cls.b, cls.C * omega / a, side)


def induced_growth(m: RadialMeasure, *, closed_form: bool = True, rel_tol: float = 1e-10) -> GrowthFunction:
    """``f(rho) = omega_{n-1} int_0^rho w(s) s^(n-1) ds`` for a radial measure."""

    def by_quadrature(rho: float) -> float:
        return m.omega * integrate_from_zero(
            lambda t: float(m.density(t)), rho, rel_tol=rel_tol, breakpoints=m.breakpoints
        )[0]

    def scalar(rho: float) -> float:
        if closed_form:
            exact = m.piece_integral(1.0, 0.0, rho)
            if exact is not None:
                return m.omega * exact
        return by_quadrature(rho)

    vec = np.vectorize(scalar, otypes=[float])

    def evaluate(rho):
        out = vec(rho)
        return float(out) if np.ndim(out) == 0 else out

    return GrowthFunction(
        evaluate=evaluate,
        at_zero=_growth_class(m.w_at_zero, m.n, m.omega, Side.AT_ZERO),
        at_infinity=_growth_class(m.w_at_infinity, m.n, m.omega, Side.AT_INFINITY),
        anchor_radius=m.anchor_radius,
        kappa=m.growth_kappa,
        name=m.name,
        spec=m.spec,
        breakpoints=m.breakpoints,
    )


def table_growth(
    rho,
    f,
    *,
    at_zero: AsymptoticClass | None = None,
    at_infinity: AsymptoticClass | None = None,
    anchor_radius: float | None = None,
    spec: Mapping[str, Any] | None = None,
) -> GrowthFunction:
    """Growth function interpolated log-log from ``(rho, f(rho))`` samples."""
    rho = np.asarray(rho, dtype=float)
    f = np.asarray(f, dtype=float)
    if rho.ndim != 1 or rho.shape != f.shape or rho.size < 2:
        raise DomainError("table needs two equal-length lists with at least 2 entries")
    order = np.argsort(rho)
    rho, f = rho[order], f[order]
    if np.any(rho <= 0) or np.any(f <= 0):
        raise DomainError("table radii and masses must be positive")
    if np.any(np.diff(rho) == 0) or np.any(np.diff(f) < 0):
        raise DomainError("table must have distinct radii and nondecreasing masses")
    lr, lf = np.log(rho), np.log(f)
    s_lo = (lf[1] - lf[0]) / (lr[1] - lr[0])
    s_hi = (lf[-1] - lf[-2]) / (lr[-1] - lr[-2])

    def evaluate(r):
        x = np.log(np.asarray(r, dtype=float))
        y = np.interp(x, lr, lf)
        y = np.where(x < lr[0], lf[0] + s_lo * (x - lr[0]), y)
        y = np.where(x > lr[-1], lf[-1] + s_hi * (x - lr[-1]), y)
        out = np.exp(y)
        return float(out) if np.ndim(out) == 0 else out

    R0 = float(anchor_radius) if anchor_radius is not None else float(rho[-1])
    kappa = None
    if at_zero is not None:
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = f / at_zero(rho)
        # a log factor vanishes at rho = 1, so some points carry no band information
        ratio = ratio[(rho <= R0) & np.isfinite(ratio) & (ratio > 0)]
        if ratio.size:
            kappa = float(max(ratio.max(), 1.0 / ratio.min()))
    return GrowthFunction(
        evaluate=evaluate,
        at_zero=at_zero,
        at_infinity=at_infinity,
        anchor_radius=R0,
        kappa=kappa,
        name="table",
        spec=spec,
    )


def doubling_ratio_scan(g: GrowthFunction, r_min: float, r_max: float) -> float:
    """Largest ``f(2 rho) / f(rho)`` over the dyadic radii ``r_min * 2**k <= r_max``."""
    if not 0 < r_min < r_max:
        raise DomainError(f"need 0 < r_min < r_max, got {r_min}, {r_max}")
    k = np.arange(int(math.floor(math.log2(r_max / r_min))) + 1)
    rho = r_min * 2.0**k
    return float(np.max(np.asarray(g(2.0 * rho)) / np.asarray(g(rho))))


def as_growth(model: RadialMeasure | GrowthFunction) -> GrowthFunction:
    """Growth function of either model kind."""
    return induced_growth(model) if isinstance(model, RadialMeasure) else model


@dataclass(frozen=True)
class AssumptionProfile:
    """Hypotheses asserted by the user; the package never verifies them.

    ``poincare_at_x0`` holds exponents ``t`` for which a t-Poincare inequality
    at x0 for small radii is asserted, ``poincare_large_radii`` the same for
    large radii (together with doubling and reverse-doubling there).
    """

    poincare_at_x0: frozenset[float] = frozenset()
    poincare_large_radii: frozenset[float] = frozenset()
    dilation_lambda: float = 1.0
    reverse_doubling_xi: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "poincare_at_x0", frozenset(float(t) for t in self.poincare_at_x0))
        object.__setattr__(self, "poincare_large_radii", frozenset(float(t) for t in self.poincare_large_radii))
        for ts in (self.poincare_at_x0, self.poincare_large_radii):
            if ts and min(ts) < 1.0:
                raise DomainError("Poincare exponents must be >= 1")
        if not self.dilation_lambda > 0:
            raise DomainError("dilation constant must be positive")
        if not self.reverse_doubling_xi > 1:
            raise DomainError("reverse-doubling constant must exceed 1")

    @staticmethod
    def _weakest_at_most(ts: frozenset[float], t: float, strict: bool) -> float | None:
        # a t0-Poincare inequality implies the t-Poincare inequality for t >= t0
        ok = [t0 for t0 in ts if (t0 < t if strict else t0 <= t)]
        return min(ok) if ok else None

    def poincare_small(self, t: float, *, strict: bool = False) -> float | None:
        """A declared small-radii exponent ``t0 <= t`` (``< t`` if strict), else None."""
        return self._weakest_at_most(self.poincare_at_x0, t, strict)

    def poincare_large(self, t: float, *, strict: bool = False) -> float | None:
        return self._weakest_at_most(self.poincare_large_radii, t, strict)
