"""Independent reference implementations used as test oracles.

Nothing here may call into the code paths it checks: the DFT oracle is the
direct quadratic sum (no FFT), the nearest-bin oracle is a literal
scan-every-candidate loop, and the stacking oracle is the plain overwrite
loop. Expected values in the test modules were computed with these.
"""

from __future__ import annotations

import numpy as np


def direct_dft(x) -> np.ndarray:
    """O(n^2) forward DFT by the definition sum.

    The phase k*n*2*pi/N is reduced modulo N in exact integer arithmetic
    first (an identity, exp is 2*pi-periodic); without it the oracle itself
    drifts by ~1e-12 at n = 10000.
    """
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[0]
    idx = np.arange(n, dtype=np.int64)
    out = np.empty(n, dtype=np.complex128)
    for k in range(n):
        out[k] = (x * np.exp((-2j * np.pi / n) * ((k * idx) % n))).sum()
    return out


def direct_idft(bins) -> np.ndarray:
    """O(n^2) inverse DFT: 1/n-normalized positive-exponent sum."""
    bins = np.asarray(bins, dtype=np.complex128)
    n = bins.shape[0]
    idx = np.arange(n, dtype=np.int64)
    out = np.empty(n, dtype=np.complex128)
    for t in range(n):
        out[t] = (bins * np.exp((2j * np.pi / n) * ((idx * t) % n))).sum() / n
    return out


def nearest_search_literal(targets, grid) -> np.ndarray:
    """Scan every grid point per target; on distance ties the later (larger)
    index wins because the update condition is <=."""
    out = np.empty(len(targets), dtype=np.int64)
    for j, f in enumerate(targets):
        best = float("inf")
        best_k = -1
        for k in range(len(grid)):
            d = abs(grid[k] - f)
            if d <= best:
                best = d
                best_k = k
        out[j] = best_k
    return out


def stack_literal(all_bins, assignments, n_out) -> np.ndarray:
    """Overwrite-semantics stacking: bands bottom-up, source bins ascending."""
    stacked = np.zeros(n_out, dtype=np.complex128)
    for bins, idx in zip(all_bins, assignments):
        for j in range(len(idx)):
            stacked[idx[j]] = bins[j]
    return stacked


def rel_max_err(got, want) -> float:
    """max |got - want| relative to the peak magnitude of ``want``."""
    got = np.asarray(got)
    want = np.asarray(want)
    err = float(np.abs(got - want).max())
    peak = float(np.abs(want).max())
    return err / peak if peak > 0 else err


def random_record(rng, p, n, rate):
    from bandstack.model import MultiChannelRecord

    return MultiChannelRecord(rng.standard_normal((p, n)), rate)
