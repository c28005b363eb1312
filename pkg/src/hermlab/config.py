"""Run-time configuration shared by the CLI and the verification suites."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import InputError

FORMATS = ("json", "csv", "text")


def _env_threads() -> int:
    raw = os.environ.get("HERMLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"HERMLAB_THREADS must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class Config:
    precision_digits: int = 50
    k_max: int = 4
    enumeration_budget: int = 10**9
    output_format: str = "json"
    threads: int = field(default_factory=_env_threads)

    def __post_init__(self):
        if self.precision_digits < 30:
            raise InputError("precision_digits must be at least 30")
        if self.k_max < 2:
            raise InputError("k_max must be at least 2")
        if self.enumeration_budget < 1:
            raise InputError("enumeration_budget must be positive")
        if self.output_format not in FORMATS:
            raise InputError(f"output_format must be one of {FORMATS}")
        if self.threads < 1:
            raise InputError("threads must be positive")
