"""Model specification files.

A model is a JSON object selected by ``kind``:

    {"kind": "power", "n": 3, "alpha": 1}
    {"kind": "unweighted", "n": 3}
    {"kind": "log", "n": 3, "s": 3, "beta": 1}
    {"kind": "ahlfors", "Q": 3}
    {"kind": "table", "rho": [...], "f": [...],
     "at_zero": {"a": 2, "b": 0, "C": 1}, "at_infinity": {...}, "anchor_radius": 0.5}

Unknown fields are rejected. On the command line a model may also be given
as a file path, inline JSON, or the shorthand ``kind:key=value,...``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from .measures import (
    AsymptoticClass,
    GrowthFunction,
    RadialMeasure,
    Side,
    builtin_ahlfors,
    builtin_log,
    builtin_power,
    builtin_unweighted,
    table_growth,
)


class SpecError(ValueError):
    """Malformed model specification."""


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class PowerSpec(_Strict):
    kind: Literal["power"]
    n: int = Field(ge=2)
    alpha: float


class UnweightedSpec(_Strict):
    kind: Literal["unweighted"]
    n: int = Field(ge=2)


class LogSpec(_Strict):
    kind: Literal["log"]
    n: int = Field(ge=2)
    s: float
    beta: float


class AhlforsSpec(_Strict):
    kind: Literal["ahlfors"]
    Q: float


class ClassSpec(_Strict):
    a: float
    b: float = 0.0
    C: float = Field(default=1.0, gt=0)


class TableSpec(_Strict):
    kind: Literal["table"]
    rho: list[float] = Field(min_length=2)
    f: list[float] = Field(min_length=2)
    at_zero: ClassSpec | None = None
    at_infinity: ClassSpec | None = None
    anchor_radius: float | None = Field(default=None, gt=0)


ModelSpec = Annotated[
    Union[PowerSpec, UnweightedSpec, LogSpec, AhlforsSpec, TableSpec],
    Field(discriminator="kind"),
]
_ADAPTER = TypeAdapter(ModelSpec)


def _format_errors(err: ValidationError) -> str:
    lines = []
    for e in err.errors():
        where = ".".join(str(x) for x in e["loc"]) or "<root>"
        lines.append(f"{where}: {e['msg']}")
    return "; ".join(lines)


def parse_spec(data: dict) -> PowerSpec | UnweightedSpec | LogSpec | AhlforsSpec | TableSpec:
    try:
        return _ADAPTER.validate_python(data)
    except ValidationError as err:
        raise SpecError(_format_errors(err)) from None


def _shorthand(text: str) -> dict:
    kind, _, rest = text.partition(":")
    data: dict = {"kind": kind.strip()}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise SpecError(f"shorthand item '{item}' is not key=value")
        data[key.strip()] = json.loads(value)
    return data


def load_spec_data(text: str) -> dict:
    """Read a model given as a path, inline JSON, or ``kind:key=value`` shorthand."""
    text = text.strip()
    if text.startswith("{"):
        source = text
    elif Path(text).is_file():
        source = Path(text).read_text()
    elif ":" in text or text in ("power", "unweighted", "log", "ahlfors", "table"):
        try:
            return _shorthand(text)
        except json.JSONDecodeError as err:
            raise SpecError(f"bad shorthand value: {err}") from None
    else:
        raise SpecError(f"model '{text}' is neither a file, inline JSON, nor kind:key=value")
    try:
        data = json.loads(source)
    except json.JSONDecodeError as err:
        raise SpecError(f"invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}") from None
    if not isinstance(data, dict):
        raise SpecError("model spec must be a JSON object")
    return data


def _cls(spec: ClassSpec | None, side: Side) -> AsymptoticClass | None:
    return None if spec is None else AsymptoticClass(spec.a, spec.b, spec.C, side)


def build_model(spec) -> RadialMeasure | GrowthFunction:
    if isinstance(spec, PowerSpec):
        return builtin_power(spec.n, spec.alpha)
    if isinstance(spec, UnweightedSpec):
        return builtin_unweighted(spec.n)
    if isinstance(spec, LogSpec):
        return builtin_log(spec.n, spec.s, spec.beta)
    if isinstance(spec, AhlforsSpec):
        return builtin_ahlfors(spec.Q)
    if len(spec.rho) != len(spec.f):
        raise SpecError("table: rho and f must have the same length")
    return table_growth(
        spec.rho,
        spec.f,
        at_zero=_cls(spec.at_zero, Side.AT_ZERO),
        at_infinity=_cls(spec.at_infinity, Side.AT_INFINITY),
        anchor_radius=spec.anchor_radius,
        spec=spec.model_dump(exclude_none=True),
    )


def load_model(text: str) -> RadialMeasure | GrowthFunction:
    """Parse and build a model; parameter range errors surface as :class:`SpecError`."""
    spec = parse_spec(load_spec_data(text))
    try:
        return build_model(spec)
    except ValueError as err:
        if isinstance(err, SpecError):
            raise
        raise SpecError(f"{spec.kind}: {err}") from None
