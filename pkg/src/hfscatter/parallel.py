"""Thread-count setting shared by FFTs and task fan-out."""

import os

ENV_VAR = "HFSCATTER_THREADS"

_threads = 0


def set_threads(n: int) -> None:
    global _threads
    if n < 0:
        raise ValueError("thread count must be >= 0 (0 = auto)")
    _threads = int(n)


def workers() -> int:
    n = _threads
    if n == 0:
        env = os.environ.get(ENV_VAR, "")
        n = int(env) if env.strip().isdigit() else 0
    if n == 0:
        n = os.cpu_count() or 1
    return max(1, n)
