"""Search budgets shared by the constructive algorithms."""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, replace
from typing import Optional

BUDGET_ENV = "FCRYSTALS_BUDGET"


class BudgetExhausted(RuntimeError):
    """Raised when a semi-decision procedure runs out of its configured budget."""


@dataclass(frozen=True)
class SearchConfig:
    """Budget for searches.

    a       exponent window for candidate lattices and unipotent entries
    m_max   largest allowed degree of the working field over F_q
    deadline  wall-clock seconds allowed (None: unlimited)
    seed    seed for any sampling (all sampling is deterministic given it)
    s_max   largest norm power used by the bound-based Newton fallback
    """
    a: int = 2
    m_max: int = 4
    deadline: Optional[float] = None
    seed: int = 0
    s_max: int = 64

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("window a must be >= 0")
        if self.m_max < 1:
            raise ValueError("m_max must be >= 1")

    def with_(self, **kw):
        return replace(self, **kw)

    def clock(self):
        return Clock(self.deadline)

    @classmethod
    def from_env(cls, **overrides):
        """Default config, with window and field cap from the budget env var
        ("a,m_max[,deadline]")."""
        raw = os.environ.get(BUDGET_ENV)
        kw = {}
        if raw:
            parts = [p.strip() for p in raw.split(",") if p.strip()]
            if len(parts) > 0:
                kw["a"] = int(parts[0])
            if len(parts) > 1:
                kw["m_max"] = int(parts[1])
            if len(parts) > 2:
                kw["deadline"] = float(parts[2])
        kw.update(overrides)
        return cls(**kw)


class Clock:
    def __init__(self, deadline):
        self.start = time.monotonic()
        self.deadline = deadline

    def expired(self):
        return self.deadline is not None and time.monotonic() - self.start > self.deadline

    def check(self, what="search"):
        if self.expired():
            raise BudgetExhausted(f"{what}: deadline of {self.deadline}s exceeded")


DEFAULT = SearchConfig()
