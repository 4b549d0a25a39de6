"""Cooperative wall-clock budgets for long computations.

A deadline is installed per request (CLI invocation or HTTP handler thread)
and checked from the inner loops of the root finder and the simulator, so a
runaway query returns a typed error instead of hanging.
"""

from __future__ import annotations

import contextlib
import os
import time
from contextvars import ContextVar

from .errors import TimeBudgetExceeded

DEFAULT_BUDGET_SECS = 30.0
_ENV_VAR = "GMID_TIME_BUDGET_SECS"

_deadline: ContextVar[float | None] = ContextVar("gmid_deadline", default=None)


def default_budget() -> float:
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return DEFAULT_BUDGET_SECS
    try:
        value = float(raw)
    except ValueError:
        return DEFAULT_BUDGET_SECS
    return value if value > 0 else DEFAULT_BUDGET_SECS


@contextlib.contextmanager
def deadline_scope(seconds: float | None = None):
    """Install a deadline for the dynamic extent of the block."""
    budget = default_budget() if seconds is None else seconds
    token = _deadline.set(time.monotonic() + budget)
    try:
        yield
    finally:
        _deadline.reset(token)


def check_deadline() -> None:
    """Raise TimeBudgetExceeded if the current scope's deadline has passed."""
    limit = _deadline.get()
    if limit is not None and time.monotonic() > limit:
        raise TimeBudgetExceeded("computation exceeded its time budget")
