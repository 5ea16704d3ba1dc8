"""Stretch-and-stack index mapping between source spectra and the wideband grid.

Geometry: the wideband budget F_s is split into p bands of width
f_band = F_s / (2p), so the occupied spectrum ends at F_s/2 and the upper
half stays free for Hermitian mirroring. Each channel's n source bins live on
the inclusive grid k * f_s/(n-1), 0..f_s; band b shifts that grid by
b * f_band and compresses it by f_band/f_s, then every stretched frequency is
assigned to the nearest destination bin of linspace(0, F_s, n_out).

Two interchangeable assignment paths exist:

  * ``stack_oracle`` - scans all n_out destination bins per source bin, the
    obvious O(n * n_out) search. Kept as the behavioral reference.
  * ``stack_fast`` - closed-form O(1)-per-bin index computation with a small
    exact re-check window; bitwise-identical output, orders of magnitude
    faster (see bandstack.bench).

Nearest-bin ties (a stretched frequency exactly midway between two grid
points) resolve to the larger index in both paths.

Collisions: adjacent bands share their boundary frequency because the source
grid spans 0..f_s inclusive, so for p >= 2 some destination bins are always
written twice (later band wins). What decides invertibility is whether any
channel's *informative* bins (the lower spectral half; the rest is conjugate
redundancy for real channels) get clobbered; the plan computes that exactly
and reports it as ``lossless``, alongside the coarse rate-floor predicate
F_s >= p * f_s (necessary, not sufficient).
"""

from __future__ import annotations

import numpy as np

from bandstack import _kernels
from bandstack.model import (
    MODE_STRICT_LOSSLESS,
    BandPlan,
    ChannelSpectrum,
    CollisionError,
    InfeasibleError,
    StackedSpectrum,
    TransformConfig,
    ValidationError,
    output_length,
)


def source_frequencies(n_samples: int, source_rate_hz: float) -> np.ndarray:
    """Inclusive source grid: k * f_s/(n-1) for k = 0..n-1, spanning 0..f_s."""
    if n_samples < 2:
        raise ValidationError("need at least 2 samples")
    return np.arange(n_samples, dtype=np.float64) * (source_rate_hz / (n_samples - 1))


def stretched_frequencies(n_samples: int, source_rate_hz: float,
                          band_width_hz: float, band_index: int) -> np.ndarray:
    """Source grid compressed into band ``band_index``: l_f + freq * (f_band/f_s)."""
    offset = band_index * band_width_hz
    ratio = band_width_hz / source_rate_hz
    return offset + source_frequencies(n_samples, source_rate_hz) * ratio


def destination_grid(n_out: int, target_rate_hz: float) -> np.ndarray:
    """Wideband grid: n_out evenly spaced values over [0, F_s] inclusive."""
    if n_out < 2:
        raise ValidationError(f"destination grid needs >= 2 points, got {n_out}")
    return np.linspace(0.0, target_rate_hz, n_out)


def _assignment(p, n_samples, source_rate_hz, target_rate_hz, band_index, kernel):
    if not 0 <= band_index < p:
        raise ValidationError(f"band index {band_index} out of range for p={p}")
    n_out = output_length(n_samples, source_rate_hz, target_rate_hz)
    band_width = target_rate_hz / (2 * p)
    targets = stretched_frequencies(n_samples, source_rate_hz, band_width, band_index)
    grid = destination_grid(n_out, target_rate_hz)
    step = target_rate_hz / (n_out - 1)
    if kernel is _kernels.nearest_indices_scan:
        return kernel(targets, grid)
    return kernel(targets, grid, step)


def stack_oracle(p: int, n_samples: int, source_rate_hz: float,
                 target_rate_hz: float, band_index: int) -> np.ndarray:
    """Assignment for one band by exhaustive nearest-frequency search."""
    return _assignment(p, n_samples, source_rate_hz, target_rate_hz, band_index,
                       _kernels.nearest_indices_scan)


def stack_fast(p: int, n_samples: int, source_rate_hz: float,
               target_rate_hz: float, band_index: int) -> np.ndarray:
    """Assignment for one band in O(n); bitwise-equal to stack_oracle."""
    return _assignment(p, n_samples, source_rate_hz, target_rate_hz, band_index,
                       _kernels.nearest_indices_fast)


def _collision_analysis(assignments, n_out, n_samples):
    """Count multiply-written bins and check the informative half survives.

    Writes happen band-major, source-bin ascending; numpy fancy assignment
    reproduces that overwrite order. A plan is lossless iff every (band,
    j <= n//2) write is the final writer of its destination bin.
    """
    all_idx = np.concatenate(assignments)
    counts = np.bincount(all_idx, minlength=n_out)
    collision_count = int((counts > 1).sum())

    final_band = np.full(n_out, -1, dtype=np.int64)
    final_j = np.full(n_out, -1, dtype=np.int64)
    js = np.arange(n_samples, dtype=np.int64)
    for b, idx in enumerate(assignments):
        final_band[idx] = b
        final_j[idx] = js

    half = n_samples // 2
    first_destructive = None
    lossless = True
    for b, idx in enumerate(assignments):
        low = idx[:half + 1]
        ok = (final_band[low] == b) & (final_j[low] == js[:half + 1])
        if not ok.all():
            lossless = False
            if first_destructive is None:
                first_destructive = (b, int(np.argmin(ok)))
    return collision_count, lossless, first_destructive


def build_band_plan(p: int, n_samples: int, source_rate_hz: float,
                    config: TransformConfig) -> BandPlan:
    """Compute the full mapping for one configuration (fast path throughout).

    In strict-lossless mode configurations below the rate floor
    F_s >= p * f_s are refused outright; actual collision damage is enforced
    later, at stacking time.
    """
    if p != config.channel_count:
        raise ValidationError(f"config is for {config.channel_count} channels, got p={p}")
    if n_samples < 2:
        raise ValidationError("need at least 2 samples per channel")
    if source_rate_hz <= 0:
        raise ValidationError("source rate must be positive")
    target = config.target_rate_hz
    rate_feasible = bool(target >= p * source_rate_hz)
    if config.mode == MODE_STRICT_LOSSLESS and not rate_feasible:
        raise InfeasibleError(
            f"strict-lossless requires F_s >= p*f_s = {p * source_rate_hz:g} Hz, "
            f"got F_s = {target:g} Hz")
    n_out = output_length(n_samples, source_rate_hz, target)
    if n_out < 2:
        raise ValidationError(f"output length {n_out} is too short (need >= 2 samples)")

    band_width = target / (2 * p)
    assignments = tuple(
        stack_fast(p, n_samples, source_rate_hz, target, b) for b in range(p))
    collision_count, lossless, first_destructive = _collision_analysis(
        assignments, n_out, n_samples)

    return BandPlan(
        p=p,
        n_samples=n_samples,
        source_rate_hz=float(source_rate_hz),
        target_rate_hz=float(target),
        n_out=n_out,
        band_width_hz=band_width,
        band_offsets_hz=np.arange(p, dtype=np.float64) * band_width,
        alpha=band_width / source_rate_hz,
        dest_grid=destination_grid(n_out, target),
        assignments=assignments,
        collision_count=collision_count,
        rate_feasible=rate_feasible,
        lossless=lossless,
        first_destructive=first_destructive,
        mode=config.mode,
        stacking_order=config.stacking_order,
    )


def apply_stacking(spectra, plan: BandPlan) -> StackedSpectrum:
    """Write every channel's spectrum into its band of the wideband spectrum.

    Bands are filled bottom-up; within a band, source bins ascend; later
    writes overwrite earlier ones. ``plan.stacking_order[b]`` picks which
    channel occupies band b. Strict-lossless mode refuses any plan whose
    collisions would destroy channel content.
    """
    spectra = list(spectra)
    if len(spectra) != plan.p:
        raise ValidationError(f"plan is for {plan.p} channels, got {len(spectra)} spectra")
    for i, s in enumerate(spectra):
        if not isinstance(s, ChannelSpectrum):
            raise ValidationError(f"spectra[{i}] is not a ChannelSpectrum")
        if s.n != plan.n_samples:
            raise ValidationError(
                f"spectra[{i}] has {s.n} bins, plan expects {plan.n_samples}")
    if plan.mode == MODE_STRICT_LOSSLESS and not plan.lossless:
        b, j = plan.first_destructive
        raise CollisionError(
            f"strict-lossless stacking impossible: channel {plan.stacking_order[b] + 1} "
            f"source bin {j} is overwritten at destination bin {plan.assignments[b][j]} "
            f"(collision_count={plan.collision_count})")

    out = np.zeros(plan.n_out, dtype=np.complex128)
    for b in range(plan.p):
        out[plan.assignments[b]] = spectra[plan.stacking_order[b]].bins
    return StackedSpectrum(out, plan.target_rate_hz)
