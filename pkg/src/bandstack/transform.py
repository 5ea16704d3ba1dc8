"""End-to-end encode and decode pipelines.

Encode: per-channel forward FFT -> band plan -> stacking -> inverse FFT of
the wideband spectrum. Three modes:

  * ``paper-complex`` - the stacked spectrum is inverted as-is; the output
    waveform is complex (stored as two planes on disk, not playable).
  * ``real-hermitian`` (default) - the occupied half of the stacked spectrum
    is halved at interior bins and mirrored into conjugate symmetry before
    inversion, so the waveform is real and equals the real part of the
    paper-complex output. Decoding undoes the halving by doubling interior
    reads (DC and Nyquist carry factor 1). This is the audio-export mode.
  * ``strict-lossless`` - real output like real-hermitian, but refuses any
    configuration whose stacking would destroy channel content.

Decode rebuilds each channel's spectrum from its informative lower-half bins
and restores the mirror half by conjugate symmetry. The upper-half reads
would be wrong anyway: adjacent bands structurally overwrite each other's
boundary bin, and only the redundant conjugate copy is lost there.

Amplitude scale: stored samples are peak-normalized to at most 0.9 by an
exact power of two recorded in the provenance, so descaling at decode is
bit-exact and WAV export never clips.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from bandstack.mapping import apply_stacking, build_band_plan
from bandstack.model import (
    MODE_PAPER_COMPLEX,
    MODE_STRICT_LOSSLESS,
    CollisionError,
    CollisionWarning,
    DecodeError,
    MultiChannelRecord,
    SidecarHeader,
    TransformConfig,
    ValidationError,
    WidebandSignal,
    validate_record,
)
from bandstack.spectrum import dft, forward_fft, hermitian_extend, inverse_fft

_RESIDUE_TOL = 1e-9


def _normalization_scale(peak: float) -> float:
    """Smallest power of two that brings ``peak`` to at most 0.9."""
    if peak == 0.0:
        return 1.0
    k = math.ceil(math.log2(peak / 0.9))
    k = min(max(k, -1022), 1023)
    scale = 2.0 ** k
    if peak / scale > 0.9 and k < 1023:
        scale *= 2.0
    return scale


def _real_samples_from_stack(bins: np.ndarray) -> np.ndarray:
    """Invert a lower-half stacked spectrum to a real waveform.

    Halving the interior bins before mirroring makes the result equal the
    real part of the complex inversion, which is what the interior factor-2
    rule at decode time assumes.
    """
    m = bins.shape[0]
    lower = bins.copy()
    lower[1:(m + 1) // 2] *= 0.5
    wave = inverse_fft(hermitian_extend(lower))
    real = wave.real
    residue = np.abs(wave.imag).max()
    tol = _RESIDUE_TOL * max(np.abs(real).max(), 1.0)
    if residue > tol:
        raise ValidationError(
            f"imaginary residue {residue:g} after Hermitian inversion exceeds {tol:g}")
    return real


def encode(record: MultiChannelRecord, config: TransformConfig) -> WidebandSignal:
    """Transform a multichannel record into one wideband waveform."""
    validate_record(record)
    if record.p != config.channel_count:
        raise ValidationError(
            f"config is for {config.channel_count} channels, record has {record.p}")
    plan = build_band_plan(record.p, record.n_samples, record.sample_rate_hz, config)
    if not plan.lossless and config.mode != MODE_STRICT_LOSSLESS:
        warnings.warn(
            f"{plan.collision_count} destination bins are written more than once and "
            f"channel content is destroyed; reconstruction will be lossy "
            f"(rate floor F_s >= p*f_s is "
            f"{'met but not sufficient here' if plan.rate_feasible else 'violated'})",
            CollisionWarning, stacklevel=2)

    spectra = [forward_fft(ch, record.sample_rate_hz) for ch in record.channels]
    stacked = apply_stacking(spectra, plan)

    if config.mode == MODE_PAPER_COMPLEX:
        samples = inverse_fft(stacked.bins)
        peak = float(np.abs(samples).max())
    else:
        samples = _real_samples_from_stack(stacked.bins)
        peak = float(np.abs(samples).max())

    scale = _normalization_scale(peak)
    provenance = SidecarHeader(
        p=record.p,
        n_samples=record.n_samples,
        source_rate_hz=record.sample_rate_hz,
        target_rate_hz=config.target_rate_hz,
        mode=config.mode,
        stacking_order=config.stacking_order,
        scale=scale,
        collision_count=plan.collision_count,
        channel_names=record.channel_names,
    )
    return WidebandSignal(samples / scale, config.target_rate_hz, provenance)


def decode(signal: WidebandSignal) -> MultiChannelRecord:
    """Reconstruct the original channels from a wideband signal."""
    prov = signal.provenance
    config = TransformConfig(
        target_rate_hz=prov.target_rate_hz,
        channel_count=prov.p,
        mode=prov.mode,
        stacking_order=prov.stacking_order,
    )
    plan = build_band_plan(prov.p, prov.n_samples, prov.source_rate_hz, config)
    if prov.mode == MODE_STRICT_LOSSLESS and not plan.lossless:
        b, j = plan.first_destructive
        raise CollisionError(
            f"provenance claims strict-lossless but channel "
            f"{plan.stacking_order[b] + 1} bin {j} is overwritten; refusing to decode")
    if signal.is_complex and prov.mode != MODE_PAPER_COMPLEX:
        raise DecodeError(f"complex samples with mode {prov.mode!r}: mode mismatch")

    raw = dft(signal.samples * prov.scale)
    real_mode = prov.mode != MODE_PAPER_COMPLEX
    n = prov.n_samples
    half = n // 2
    n_out = plan.n_out

    channels = np.empty((prov.p, n), dtype=np.float64)
    for b in range(prov.p):
        idx = plan.assignments[b][:half + 1]
        vals = raw[idx]
        if real_mode:
            # Interior bins were halved by the Hermitian fold; DC and (even
            # n_out) Nyquist were not.
            factors = np.where((idx == 0) | ((n_out % 2 == 0) & (idx == n_out // 2)),
                               1.0, 2.0)
            vals = vals * factors
        lower = np.zeros(n, dtype=np.complex128)
        lower[:half + 1] = vals
        wave = inverse_fft(hermitian_extend(lower))
        real = wave.real
        residue = np.abs(wave.imag).max()
        tol = _RESIDUE_TOL * max(np.abs(real).max(), 1.0)
        if residue > tol:
            raise DecodeError(
                f"channel {plan.stacking_order[b] + 1}: imaginary residue {residue:g} "
                f"exceeds tolerance {tol:g} (tampered samples or mode mismatch)")
        channels[plan.stacking_order[b]] = real
    return MultiChannelRecord(channels, prov.source_rate_hz, prov.channel_names)


@dataclass(frozen=True)
class RoundtripReport:
    """Measured encode->decode fidelity for one record and configuration."""

    max_abs_error: float  # relative to the record's peak amplitude
    per_channel_rmse: tuple[float, ...]
    collision_count: int
    mode: str
    rate_feasible: bool
    lossless: bool
    n_out: int

    def to_dict(self) -> dict:
        return {
            "max_abs_error": self.max_abs_error,
            "per_channel_rmse": list(self.per_channel_rmse),
            "collision_count": self.collision_count,
            "mode": self.mode,
            "rate_feasible": self.rate_feasible,
            "lossless": self.lossless,
            "n_out": self.n_out,
        }


def roundtrip_report(record: MultiChannelRecord, config: TransformConfig) -> RoundtripReport:
    """Encode, decode, and measure the damage. Lossy configurations are
    measured, never refused (strict-mode failures still propagate)."""
    plan = build_band_plan(record.p, record.n_samples, record.sample_rate_hz, config)
    signal = encode(record, config)
    decoded = decode(signal)
    diff = np.abs(decoded.channels - record.channels)
    peak = float(np.abs(record.channels).max())
    max_err = float(diff.max())
    if peak > 0:
        max_err /= peak
    rmse = tuple(float(v) for v in np.sqrt((diff ** 2).mean(axis=1)))
    return RoundtripReport(
        max_abs_error=max_err,
        per_channel_rmse=rmse,
        collision_count=plan.collision_count,
        mode=config.mode,
        rate_feasible=plan.rate_feasible,
        lossless=plan.lossless,
        n_out=plan.n_out,
    )
