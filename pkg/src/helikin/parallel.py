"""Worker-count policy for parallel channel solves."""

from __future__ import annotations

import os

__all__ = ["worker_count"]


def worker_count(tasks: int) -> int:
    """Number of workers for ``tasks`` independent jobs.

    Defaults to the CPU count; the HELIKIN_THREADS environment variable
    caps it (validated, never silently clamped to something else).
    """
    env = os.environ.get("HELIKIN_THREADS")
    if env is not None:
        try:
            cap = int(env)
        except ValueError as exc:
            raise ValueError(f"HELIKIN_THREADS must be an integer, got {env!r}") from exc
        if cap < 1:
            raise ValueError(f"HELIKIN_THREADS must be >= 1, got {cap}")
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, tasks))
