"""Run configuration: a plain ``key = value`` file, the MBASYM_DIGITS
environment variable and command-line flags, in increasing priority."""

from __future__ import annotations

import contextlib
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Iterator, Optional

from . import series
from .precision import MIN_DIGITS, PrecisionCtx

ENV_DIGITS = "MBASYM_DIGITS"


@dataclass(frozen=True)
class Config:
    digits: Optional[int] = None  # None: the command's own default
    guard_digits: int = 10
    oracle_cap: int = series.DEFAULT_CAP
    kappa_safety: float = series.KAPPA

    def __post_init__(self):
        if self.digits is not None and self.digits < MIN_DIGITS:
            raise ValueError(f"digits must be >= {MIN_DIGITS}, got {self.digits}")
        if self.guard_digits < 0 or self.oracle_cap <= 0 or self.kappa_safety <= 0:
            raise ValueError("guard_digits, oracle_cap and kappa_safety must be positive")

    def with_overrides(self, **kw) -> "Config":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def resolve_digits(self, default: int) -> int:
        return self.digits if self.digits is not None else default

    @contextlib.contextmanager
    def activate(self, default_digits: int = 50) -> Iterator["Config"]:
        """Set the working precision and the envelope safety factor."""
        old = series.KAPPA
        series.KAPPA = self.kappa_safety
        try:
            with PrecisionCtx(self.resolve_digits(default_digits), self.guard_digits).activate():
                yield self
        finally:
            series.KAPPA = old


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    types = {f.name: f.type for f in fields(Config)}
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in types:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        out[key] = float(val) if key == "kappa_safety" else int(val)
    return out


def load_config(path: Optional[str | Path] = None, env: Optional[dict] = None) -> Config:
    env = os.environ if env is None else env
    cfg = Config()
    if path is not None:
        cfg = cfg.with_overrides(**parse_config(Path(path).read_text()))
    if env.get(ENV_DIGITS):
        cfg = cfg.with_overrides(digits=int(env[ENV_DIGITS]))
    return cfg
