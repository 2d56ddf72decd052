"""Worked-example regression tables behind ``nlpot verify-examples``."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .capacity import CapacityQuery, exact_radial
from .classify import gradient_in_Lt, green_bounded, green_in_Ltau, is_parabolic
from .exponents import analytic_exponents, critical_exponents
from .measures import (
    AssumptionProfile,
    builtin_ahlfors,
    builtin_log,
    builtin_power,
    builtin_unweighted,
    induced_growth,
)

EXAMPLES = ("ex-power", "ex-log", "ex-log-2", "newtonian", "parabolicity-grid")


@dataclass(frozen=True)
class ExampleRow:
    label: str
    expected: Any
    observed: Any
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return {"label": self.label, "expected": self.expected, "observed": self.observed, "passed": self.passed}


@dataclass(frozen=True)
class ExampleReport:
    example: str
    rows: tuple[ExampleRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_dict(self) -> dict[str, Any]:
        return {"example": self.example, "passed": self.passed, "rows": [r.to_dict() for r in self.rows]}


def _state_row(label: str, expected: str, verdict) -> ExampleRow:
    return ExampleRow(label, expected, verdict.state.value, verdict.state.value == expected)


def _value_row(label: str, expected: float, observed: float, tol: float) -> ExampleRow:
    ok = bool(abs(observed - expected) <= tol * abs(expected))
    return ExampleRow(label, float(expected), float(observed), ok)


def _ex_power(tol: float, **_) -> list[ExampleRow]:
    rows = []
    for n, alpha in [(3, 1.0), (2, 0.5), (4, 1.5), (3, 2.5)]:
        m = builtin_power(n, alpha)
        g = induced_growth(m)
        rep = analytic_exponents(g)
        ends = (rep.lq0, rep.ls0, rep.us0, rep.uq0)
        ok = all(abs(e - (n - alpha)) <= tol for e in ends)
        ends = [float(e) for e in ends]
        rows.append(ExampleRow(f"n={n} alpha={alpha}: all endpoints = n - alpha", float(n - alpha), ends, ok))
        rows.append(_value_row(f"n={n} alpha={alpha}: f(1)", m.omega / (n - alpha), float(g(1.0)), tol))
    return rows


def _ex_log(tol: float, inject_beta: float | None = None, **_) -> list[ExampleRow]:
    s, n = 3.0, 3
    beta = 1.0 if inject_beta is None else inject_beta
    g = induced_growth(builtin_log(n, s, beta))
    rep = analytic_exponents(g)
    rows = []
    for p, expected in [(1.2, "BorderlineOut"), (1.4, "BorderlineOut"), (1.6, "BorderlineIn"), (2.0, "BorderlineIn"), (2.9, "BorderlineIn")]:
        tau = critical_exponents(rep, p).tau_p
        rows.append(_state_row(f"beta=1 p={p}: u in L^tau_p", expected, green_in_Ltau(g, p, tau)))
    rows.append(_state_row("beta=1 p=3: u bounded", "NonMember", green_bounded(g, 3.0)))
    g_high = induced_growth(builtin_log(n, s, 2.5))
    rows.append(_state_row("beta=2.5 p=3: u bounded", "Member", green_bounded(g_high, 3.0)))
    return rows


def _ex_log_2(tol: float, **_) -> list[ExampleRow]:
    rows = []
    for beta in (1.0, 2.0, 2.5, 3.0):
        m = builtin_log(3, 3.0, beta)
        expected = "Member" if beta > 2.0 else "NonMember"
        for p in (1.5, 2.0, 2.5):
            t_p = 3.0 * (p - 1.0) / 2.0
            rows.append(_state_row(f"beta={beta} p={p}: grad u in L^t_p", expected, gradient_in_Lt(m, p, t_p)))
    return rows


def _newtonian(tol: float, seed: int = 0, **_) -> list[ExampleRow]:
    rng = np.random.default_rng(seed)
    m3 = builtin_unweighted(3)
    rows = []
    for _ in range(10):
        r, R = np.sort(rng.uniform(0.01, 10.0, 2))
        value = exact_radial(m3, CapacityQuery(2.0, float(r), float(R))).value
        rows.append(_value_row(f"n=3 p=2 r={r:.6g} R={R:.6g}", 4 * math.pi * r * R / (R - r), value, tol))
    for n in (2, 3, 4):
        m = builtin_unweighted(n)
        value = exact_radial(m, CapacityQuery(float(n), 1.0, math.e)).value
        rows.append(_value_row(f"n={n} p=n r=1 R=e", m.omega, value, tol))
    return rows


def _parabolicity_grid(tol: float, **_) -> list[ExampleRow]:
    hyp = AssumptionProfile(poincare_large_radii=frozenset({1.0}))
    rows = []
    for Q in (1.5, 2.0, 2.5, 3.0, 3.5):
        for p in (2.0, 3.0):
            expected = "Member" if Q <= p else "NonMember"
            rows.append(_state_row(f"Q={Q} p={p}: parabolic", expected, is_parabolic(builtin_ahlfors(Q), p, hyp)))
    return rows


_BUILDERS: dict[str, Callable[..., list[ExampleRow]]] = {
    "ex-power": _ex_power,
    "ex-log": _ex_log,
    "ex-log-2": _ex_log_2,
    "newtonian": _newtonian,
    "parabolicity-grid": _parabolicity_grid,
}


def run_examples(
    only: list[str] | None = None,
    *,
    tol: float = 1e-8,
    seed: int = 0,
    inject_beta: float | None = None,
    workers: int = 4,
) -> list[ExampleReport]:
    """Run the selected example tables; reports come back in table order."""
    names = list(only) if only else list(EXAMPLES)
    for name in names:
        if name not in _BUILDERS:
            raise KeyError(f"unknown example '{name}'")

    def one(name: str) -> ExampleReport:
        rows = _BUILDERS[name](tol=tol, seed=seed, inject_beta=inject_beta)
        return ExampleReport(name, tuple(rows))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, names))
