"""Run configuration read from a TOML file.

Example::

    dim = 1
    L = 1024
    W = 16
    profile = "top-hat"
    E1 = -0.025
    E2 = 0.025
    eta = 1e-4
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .profile import BandModel, ProfileKind

__all__ = ["RunConfig", "ConfigError", "load_config"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    dim: int = 1
    L: int = 1024
    W: int = 16
    profile: str = "top-hat"
    E1: float = -0.025
    E2: float = 0.025
    eta: float = 1e-4
    precision: str = "auto"
    seed: int = 0
    samples: int = 200

    def model(self) -> BandModel:
        return BandModel(self.dim, self.L, self.W, ProfileKind(self.profile))

    def with_overrides(self, **kw) -> "RunConfig":
        return _checked(replace(self, **{k: v for k, v in kw.items() if v is not None}))


_TYPES = {"dim": int, "L": int, "W": int, "profile": str, "E1": float, "E2": float,
          "eta": float, "precision": str, "seed": int, "samples": int}


def _checked(cfg: RunConfig) -> RunConfig:
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        want = _TYPES[f.name]
        if want is float and isinstance(v, int) and not isinstance(v, bool):
            cfg = replace(cfg, **{f.name: float(v)})
        elif not isinstance(v, want) or isinstance(v, bool):
            raise ConfigError(f"{f.name} must be {want.__name__}, got {v!r}")
    if cfg.profile not in {p.value for p in ProfileKind}:
        raise ConfigError(f"unknown profile {cfg.profile!r}")
    if cfg.precision not in ("auto", "double", "extended"):
        raise ConfigError(f"unknown precision {cfg.precision!r}")
    return cfg


def load_config(path: str | Path | None) -> RunConfig:
    """Parse a TOML config; unknown keys and wrong types raise ConfigError."""
    if path is None:
        return RunConfig()
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    unknown = set(data) - set(_TYPES)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return _checked(RunConfig(**data))
