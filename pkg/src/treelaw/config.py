"""Run configuration shared by the CLI and the experiment scripts."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_SIZE_CAP = 10**6
SIZE_CAP_ENV = "TREELAW_SIZE_CAP"


def size_cap() -> int:
    raw = os.environ.get(SIZE_CAP_ENV)
    if raw is None or raw == "":
        return DEFAULT_SIZE_CAP
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{SIZE_CAP_ENV} must be positive")
    return value


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    samples: int = 200
    size_cap: int = field(default_factory=size_cap)
    output: Path | None = None
    fmt: str = "text"

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.samples < 0:
            raise ValueError("samples must be non-negative")
        if self.fmt not in ("text", "json"):
            raise ValueError("format must be text or json")
