"""Service start-time recursion for a bank of identical FIFO servers.

Voter k starts at max(arrival_k, earliest server-free time given voters
1..k-1), on the earliest-free server with ties broken by lowest server index.
The compiled kernel is used when numba is importable; the pure-Python
fallback produces bit-identical start times (only which server is picked on
an exact tie can differ, which does not affect any start time).
"""

from __future__ import annotations

import heapq

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None


def _start_times_loop(arrivals, services, servers):
    n = arrivals.shape[0]
    free = np.zeros(servers)
    starts = np.empty(n)
    for k in range(n):
        j = 0
        best = free[0]
        for i in range(1, servers):
            if free[i] < best:
                best = free[i]
                j = i
        a = arrivals[k]
        start = a if a > best else best
        starts[k] = start
        free[j] = start + services[k]
    return starts


def start_times_python(arrivals: np.ndarray, services: np.ndarray, servers: int) -> np.ndarray:
    """Pure-Python fallback; a heap of server-free times replaces the scan."""
    free = [0.0] * servers
    starts = np.empty(arrivals.shape[0])
    k = 0
    for a, s in zip(arrivals.tolist(), services.tolist()):
        best = free[0]
        start = a if a > best else best
        starts[k] = start
        heapq.heapreplace(free, start + s)
        k += 1
    return starts


if njit is not None:
    _start_times_compiled = njit(cache=True, nogil=True)(_start_times_loop)

    def fifo_start_times(arrivals: np.ndarray, services: np.ndarray, servers: int) -> np.ndarray:
        return _start_times_compiled(arrivals, services, servers)

else:  # pragma: no cover
    fifo_start_times = start_times_python
