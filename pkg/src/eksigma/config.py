"""Run-wide configuration with conservative defaults.

A RunConfig travels through the high-level entry points so that CLI flags,
environment overrides, and library callers all tune the same knobs.
"""

import os
from dataclasses import dataclass, field, replace

from .errors import DomainError

DEFAULT_PRIME_LIMIT = 10**7
DEFAULT_ACCEL_LEVELS = 8
DEFAULT_CHARACTER_Q_MAX = 3000
DEFAULT_THREADS = 1

ENV_CACHE_DIR = "EKSIGMA_CACHE_DIR"


@dataclass(frozen=True)
class RunConfig:
    """Knobs for the expensive stages.

    prime_limit      cutoff P for truncated sums over primes
    accel_levels     doubling steps in the acceleration ladders (0 = off)
    character_q_max  refuse full character tables above this modulus unless
                     the caller raises the lid explicitly
    threads          worker threads for embarrassingly parallel prime scans
    cache_dir        directory for persisted prime-sum rows (None = no cache)
    strict           CLI: treat an Undecided verdict as a failure exit
    """

    prime_limit: int = DEFAULT_PRIME_LIMIT
    accel_levels: int = DEFAULT_ACCEL_LEVELS
    character_q_max: int = DEFAULT_CHARACTER_Q_MAX
    threads: int = DEFAULT_THREADS
    cache_dir: str | None = field(
        default_factory=lambda: os.environ.get(ENV_CACHE_DIR)
    )
    strict: bool = False

    def __post_init__(self):
        if self.prime_limit < 10**4:
            raise DomainError(
                f"prime_limit must be at least 10^4, got {self.prime_limit}"
            )
        if not 0 <= self.accel_levels <= 16:
            raise DomainError(
                f"accel_levels must be in [0, 16], got {self.accel_levels}"
            )
        if self.threads < 1:
            raise DomainError(f"threads must be at least 1, got {self.threads}")
        if self.character_q_max < 3:
            raise DomainError(
                f"character_q_max must be at least 3, got {self.character_q_max}"
            )

    def with_(self, **kw):
        return replace(self, **kw)
