"""Hot numeric kernels behind the empirical Levy estimators.

The two inner loops that dominate runtime (the log-denominator ratio scan and
the backward evaluation of continued-fraction windows for Birkhoff averages)
are compiled with numba @njit by default.  Set LEVYCF_NO_NUMBA=1 to select the
fallback path instead: the scan runs as the same plain-Python loop, the window
evaluation as a vectorized numpy sweep.  Both paths produce bitwise-identical
results because they apply the identical float operations per element.

benchmarks/bench_kernels.py compares the two paths.
"""

import math
import os

import numpy as np

USING_NUMBA = os.environ.get("LEVYCF_NO_NUMBA", "").lower() not in ("1", "true", "yes")
if USING_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USING_NUMBA = False


def _logq_scan_py(letters, r_prev, total, comp):
    """Advance the ratio recurrence over a block of letters.

    letters is float64; (total, comp) is a Neumaier-compensated running sum of
    log r_n.  Returns the updated (total, comp, r_prev) so callers can chain
    blocks.  Start a fresh scan with r_prev = inf, total = comp = 0.
    """
    for i in range(letters.shape[0]):
        r = letters[i] + 1.0 / r_prev
        x = math.log(r)
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        total = t
        r_prev = r
    return total, comp, r_prev


def _birkhoff_tails_loop(letters, count, depth):
    # depth-major order pipelines the divisions across windows instead of
    # serializing on one window's 40-deep dependency chain
    out = np.empty(count)
    for i in range(count):
        out[i] = letters[i + depth - 1]
    for j in range(depth - 2, -1, -1):
        for i in range(count):
            out[i] = letters[i + j] + 1.0 / out[i]
    return out


def _birkhoff_tails_numpy(letters, count, depth):
    # Same per-element operation order as the loop version, swept across all
    # window starts at once.
    t = letters[depth - 1 : depth - 1 + count].copy()
    for j in range(depth - 2, -1, -1):
        t = letters[j : j + count] + 1.0 / t
    return t


if USING_NUMBA:
    logq_scan = njit(cache=True)(_logq_scan_py)
    birkhoff_tails = njit(cache=True)(_birkhoff_tails_loop)
else:
    logq_scan = _logq_scan_py
    birkhoff_tails = _birkhoff_tails_numpy


def warmup():
    """Trigger JIT compilation on tiny inputs (no-op on the fallback path)."""
    x = np.ones(4)
    logq_scan(x, math.inf, 0.0, 0.0)
    birkhoff_tails(x, 2, 3)
