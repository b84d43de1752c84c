"""Run configuration: a TOML file, overridden field by field by CLI flags."""

from __future__ import annotations

import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .group import ball_size, max_ball
from .quotient import InvolutiveHom, PartitionError

DEFAULT_SEED = 20240917


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    k: int = 2
    subgroup: str = "trivial"
    hom: InvolutiveHom | None = None
    epsilon: float = 1.0
    potential: tuple[float, ...] = (0.0,)
    energy: float | None = None
    radius: int = 4
    convention: str = "adjacency"
    seed: int = DEFAULT_SEED
    trials: int = 200
    out: Path | None = None
    n_range: tuple[int, int] = (-20, 20)
    coeffs: tuple[complex, complex] | None = None
    seeds: tuple[complex, complex] | None = None

    def potential_for(self, r: int) -> tuple[float, ...]:
        """Per-coset potential; a single value is broadcast."""
        if len(self.potential) == 1:
            return self.potential * r
        if len(self.potential) != r:
            raise ConfigError(f"potential has {len(self.potential)} entries, subgroup index is {r}")
        return self.potential

    def check_radius(self) -> None:
        if self.radius < 1:
            raise ConfigError("radius must be >= 1")
        if ball_size(self.k, self.radius) > max_ball():
            raise ConfigError(
                f"radius {self.radius} ball has {ball_size(self.k, self.radius)} vertices, over the guard {max_ball()}"
            )


def _floats(value: Any) -> tuple[float, ...]:
    if isinstance(value, (int, float)):
        return (float(value),)
    if isinstance(value, str):
        return tuple(float(t) for t in value.replace(" ", "").split(",") if t)
    return tuple(float(v) for v in value)


def _complex_pair(value: Any) -> tuple[complex, complex]:
    if isinstance(value, str):
        value = [t for t in value.replace(" ", "").split(",") if t]
    out = tuple(complex(v) if not isinstance(v, list) else complex(*v) for v in value)
    if len(out) != 2:
        raise ConfigError(f"expected two values, got {value!r}")
    return out


def _int_pair(value: Any) -> tuple[int, int]:
    if isinstance(value, str):
        value = value.replace(":", ",").split(",")
    lo, hi = (int(v) for v in value)
    if lo > 0 or hi < 1:
        raise ConfigError("chain range must contain 0 and 1")
    return lo, hi


_COERCE = {
    "k": int,
    "subgroup": str,
    "epsilon": float,
    "potential": _floats,
    "energy": float,
    "radius": int,
    "convention": str,
    "seed": int,
    "trials": int,
    "out": Path,
    "n_range": _int_pair,
    "coeffs": _complex_pair,
    "seeds": _complex_pair,
}


def _flatten(raw: dict) -> dict:
    flat = {key: val for key, val in raw.items() if not isinstance(val, dict)}
    for table in ("chain", "output", "verify", "spectrum"):
        for key, val in raw.get(table, {}).items():
            flat["out" if (table, key) == ("output", "dir") else key] = val
    if "hom" in raw:
        flat["hom"] = raw["hom"]
    return flat


def load_config(path: str | Path | None = None, **overrides: Any) -> RunConfig:
    raw: dict = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                raw = _flatten(tomllib.load(fh))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"bad TOML in {path}: {exc}") from exc
    raw.update({key: val for key, val in overrides.items() if val is not None})

    known = {f.name for f in fields(RunConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    values: dict[str, Any] = {}
    try:
        for key, val in raw.items():
            if key == "hom":
                continue
            values[key] = _COERCE[key](val)
        cfg = RunConfig(**values)
        if "hom" in raw:
            h = raw["hom"]
            if isinstance(h, InvolutiveHom):
                hom = h
            else:
                hom = InvolutiveHom.from_cycles(int(h.get("k", cfg.k)), int(h["m"]), list(h["images"]))
            if hom.k != cfg.k:
                raise ConfigError(f"inline homomorphism has k={hom.k} but run has k={cfg.k}")
            cfg = replace(cfg, hom=hom, subgroup=raw.get("subgroup", "custom"))
    except (TypeError, ValueError, KeyError, PartitionError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    if cfg.convention not in ("adjacency", "laplacian"):
        raise ConfigError(f"convention must be adjacency or laplacian, got {cfg.convention!r}")
    if cfg.k < 1:
        raise ConfigError("k must be >= 1")
    return cfg
