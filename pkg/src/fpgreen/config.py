"""Run configuration shared by the CLI and the HTTP service.

A RunConfig collects the potential source, geometry, truncation order, ray
spec, tolerances, and output settings for one command.  Defaults can be
overridden by a plain-text key-value config file ("key = value" lines, '#'
comments) and the FPGREEN_THREADS environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from .errors import EvaluationDomainError, ParseError, PotentialError
from .potential import (
    PotentialSpec,
    builtin,
    load_potential_file,
    parse_potential_config,
)

__all__ = ["RunConfig", "load_config_file", "apply_env", "resolve_potential"]

THREADS_ENV = "FPGREEN_THREADS"

_FLOAT_KEYS = ("x", "y", "kmin", "kmax", "e0", "tmin", "tmax")
_INT_KEYS = ("order", "samples", "threads", "tpoints")
_STR_KEYS = ("builtin", "f", "v", "vs", "potential_file", "ray", "oracle", "format", "output")


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters for one command invocation."""

    builtin: str | None = None
    f: str | None = None
    v: str | None = None
    vs: str | None = None
    e0: float | None = None
    potential_file: str | None = None

    x: float = 1.0
    y: float = 0.0
    order: int = 4
    ray: str = "real"
    kmin: float = 2.0
    kmax: float = 40.0
    samples: int = 9
    oracle: str = "auto"
    tmin: float = 0.05
    tmax: float = 0.5
    tpoints: int = 10

    threads: int = 1
    format: str | None = None
    output: str | None = None

    def updated(self, **changes) -> "RunConfig":
        return replace(self, **changes)

    def validate(self) -> None:
        sources = [
            s for s in (self.builtin, self.f, self.v, self.vs, self.potential_file)
            if s is not None
        ]
        if len(sources) > 1:
            raise EvaluationDomainError(
                "give exactly one potential source (builtin, f, V, VS, or file)"
            )
        if self.order < 0:
            raise EvaluationDomainError(f"order must be >= 0, got {self.order}")
        if self.samples < 1:
            raise EvaluationDomainError(f"samples must be >= 1, got {self.samples}")
        if not 0.0 < self.kmin <= self.kmax:
            raise EvaluationDomainError(
                f"need 0 < kmin <= kmax, got kmin={self.kmin:g} kmax={self.kmax:g}"
            )
        if not 0.0 < self.tmin <= self.tmax:
            raise EvaluationDomainError(
                f"need 0 < tmin <= tmax, got tmin={self.tmin:g} tmax={self.tmax:g}"
            )
        if self.threads < 1:
            raise EvaluationDomainError(f"threads must be >= 1, got {self.threads}")
        if self.format not in (None, "json", "csv"):
            raise EvaluationDomainError(f"format must be json or csv, got {self.format!r}")

    def k_magnitudes(self) -> list[float]:
        """Geometric grid of |k| values from kmin to kmax."""
        if self.samples == 1:
            return [self.kmax]
        ratio = (self.kmax / self.kmin) ** (1.0 / (self.samples - 1))
        return [self.kmin * ratio**i for i in range(self.samples)]

    def t_grid(self) -> list[float]:
        if self.tpoints == 1:
            return [self.tmin]
        step = (self.tmax - self.tmin) / (self.tpoints - 1)
        return [self.tmin + step * i for i in range(self.tpoints)]


def load_config_file(path: str, base: RunConfig | None = None) -> RunConfig:
    """Read 'key = value' lines into a RunConfig, layered over base."""
    cfg = base if base is not None else RunConfig()
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    changes: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"{path}:{lineno}: expected 'key = value', got {raw!r}", lineno)
        key = key.strip().lower().replace("-", "_")
        value = value.strip()
        try:
            if key in _FLOAT_KEYS:
                changes[key] = float(value)
            elif key in _INT_KEYS:
                changes[key] = int(value)
            elif key in _STR_KEYS:
                changes[key] = value
            else:
                raise ParseError(f"{path}:{lineno}: unknown config key {key!r}", lineno)
        except ValueError:
            raise ParseError(
                f"{path}:{lineno}: bad value {value!r} for {key!r}", lineno
            ) from None
    return cfg.updated(**changes)


def apply_env(cfg: RunConfig, environ=os.environ) -> RunConfig:
    """Apply environment overrides (currently the thread count)."""
    raw = environ.get(THREADS_ENV)
    if raw is None:
        return cfg
    try:
        threads = int(raw)
    except ValueError:
        raise ParseError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return cfg.updated(threads=threads)


def resolve_potential(cfg: RunConfig) -> PotentialSpec:
    """Build the PotentialSpec named by the config's single potential source."""
    cfg.validate()
    if cfg.builtin is not None:
        return builtin(cfg.builtin)
    if cfg.potential_file is not None:
        return load_potential_file(cfg.potential_file)
    if cfg.f is not None:
        return parse_potential_config(f"mode = f\nexpr = {cfg.f}\n")
    if cfg.v is not None:
        return parse_potential_config(f"mode = V\nexpr = {cfg.v}\n")
    if cfg.vs is not None:
        if cfg.e0 is None:
            raise PotentialError("a VS potential needs an energy shift E0")
        return parse_potential_config(f"mode = VS\nexpr = {cfg.vs}\nE0 = {cfg.e0!r}\n")
    raise PotentialError(
        "no potential source given (use builtin, f, V, VS, or a potential file)"
    )
