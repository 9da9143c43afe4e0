"""TOML run configuration.

Schema (all sections optional except ``field``)::

    seed = 0

    [field]
    p = 2
    m = 8
    modulus = [1, 0, 1, 1, 1, 0, 0, 0, 1]   # low degree first; omit for m = 1

    [curve]                # omit for the projective line (genus 0)
    F = [0, 0, 0, 1]       # low degree first, monic of degree 2g+1
    H = [80, 2]
    g = 1                  # optional, inferred from deg F

    [scheme]
    kind = "pir"           # or "chen_cramer"
    X = 50
    T = 50
    L = 177                # optional; maximal L when omitted
    M = 4
    h = { a = [0], b = [1] }   # chen_cramer only: h = a(x) + b(x) y

    [sweep]
    xt = [1, 60]           # inclusive range of X = T values

    [[curves]]             # curves compared by `rate sweep`
    name = "elliptic"
    F = [0, 0, 0, 1]
    H = [80, 2]
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .curve import HyperellipticCurve
from .field import GF, FieldSpec, make_field
from .funcspace import FunctionElement
from .poly import Poly


class ConfigError(ValueError):
    pass


@dataclass
class NamedCurve:
    name: str
    curve: HyperellipticCurve


@dataclass
class RunConfig:
    field: GF
    curve: HyperellipticCurve | None = None
    kind: str = "pir"
    X: int = 1
    T: int = 1
    L: int | None = None
    M: int = 4
    seed: int = 0
    h: dict | None = None
    xt: tuple[int, int] | None = None
    curves: list[NamedCurve] = dc_field(default_factory=list)
    raw: dict = dc_field(default_factory=dict, repr=False)

    @property
    def genus(self) -> int:
        return 0 if self.curve is None else self.curve.g

    def h_function(self) -> FunctionElement:
        if self.h is None:
            raise ConfigError("scheme.h is required for kind = 'chen_cramer'")
        a = Poly(self.field, self.h.get("a", []))
        b = Poly(self.field, self.h.get("b", []))
        if not b.is_zero() and self.curve is None:
            raise ConfigError("h involves y but no curve is configured")
        return FunctionElement(a, b, curve=self.curve)


def _int(d: dict, key: str, default=None, minimum: int | None = 0):
    v = d.get(key, default)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{key} must be an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ConfigError(f"{key} must be >= {minimum}, got {v}")
    return v


def _coeffs(v: Any, what: str) -> list[int]:
    if not isinstance(v, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in v):
        raise ConfigError(f"{what} must be a list of integers")
    return v


def _curve(field: GF, d: dict, what: str) -> HyperellipticCurve:
    if "F" not in d:
        raise ConfigError(f"{what}.F is required")
    F = _coeffs(d["F"], f"{what}.F")
    H = _coeffs(d.get("H", []), f"{what}.H")
    for c in F + H:
        if not 0 <= c < field.q:
            raise ConfigError(f"{what}: coefficient {c} is not a canonical element of {field!r}")
    return HyperellipticCurve(field, F, H, _int(d, "g", None, 1))


def parse_config(data: dict) -> RunConfig:
    if "field" not in data:
        raise ConfigError("missing [field] section")
    try:
        fspec = FieldSpec.from_dict(data["field"])
        field = make_field(fspec)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad [field] section: {exc}") from None
    curve = _curve(field, data["curve"], "curve") if "curve" in data else None
    sch = data.get("scheme", {})
    kind = sch.get("kind", "pir")
    if kind not in ("pir", "chen_cramer"):
        raise ConfigError(f"unknown scheme.kind {kind!r}")
    xt = None
    if "sweep" in data:
        r = data["sweep"].get("xt")
        if not (isinstance(r, list) and len(r) == 2 and all(isinstance(v, int) for v in r) and 0 <= r[0] <= r[1]):
            raise ConfigError("sweep.xt must be [first, last] with 0 <= first <= last")
        xt = (r[0], r[1])
    curves = []
    for i, c in enumerate(data.get("curves", [])):
        curves.append(NamedCurve(str(c.get("name", f"curve{i}")), _curve(field, c, f"curves[{i}]")))
    return RunConfig(
        field=field,
        curve=curve,
        kind=kind,
        X=_int(sch, "X", 1),
        T=_int(sch, "T", 1),
        L=_int(sch, "L", None, 1),
        M=_int(sch, "M", 4, 1),
        seed=_int(data, "seed", 0),
        h=sch.get("h"),
        xt=xt,
        curves=curves,
        raw=data,
    )


def load_config(path: str | Path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from None
    return parse_config(data)
