"""Domain types for the band-stacking codec.

Everything downstream (mapping, transform, io, features) speaks in terms of
these containers. All of them validate their invariants on construction and
are immutable afterwards, so they can be shared freely across threads.

Conventions: channel and band indices are 0-based everywhere in this library;
the CLI and file sidecars use 1-based channel numbering and say so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from bandstack.sidecar import SidecarHeader, output_length  # noqa: F401  (re-exported)

MODE_PAPER_COMPLEX = "paper-complex"
MODE_REAL_HERMITIAN = "real-hermitian"
MODE_STRICT_LOSSLESS = "strict-lossless"
MODES = (MODE_PAPER_COMPLEX, MODE_REAL_HERMITIAN, MODE_STRICT_LOSSLESS)


class BandstackError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(BandstackError):
    """Input data or parameters violate a documented invariant."""


class FormatError(BandstackError):
    """A file or sidecar could not be parsed, or its version is unsupported."""


class InfeasibleError(BandstackError):
    """Strict-lossless mode was requested for a configuration that cannot
    round-trip exactly."""


class CollisionError(InfeasibleError):
    """Strict-lossless stacking hit a destination-bin collision that would
    destroy channel content."""


class DecodeError(BandstackError):
    """Decoding failed: corrupt provenance, or reconstruction residue above
    tolerance (mode mismatch / tampered samples)."""


class CollisionWarning(UserWarning):
    """Emitted when a lossy configuration is encoded anyway (non-strict modes)."""


def _as_readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MultiChannelRecord:
    """p synchronized real-valued channels of n_samples each, at a common rate.

    ``channels`` is a (p, n_samples) float64 array. All channels must have the
    same length (>= 2) and contain only finite values.
    """

    channels: np.ndarray
    sample_rate_hz: float
    channel_names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        rows = _coerce_channels(self.channels)
        object.__setattr__(self, "channels", rows)
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))
        if self.sample_rate_hz <= 0 or not np.isfinite(self.sample_rate_hz):
            raise ValidationError(f"sample rate must be positive, got {self.sample_rate_hz}")
        if self.channel_names is not None:
            names = tuple(str(n) for n in self.channel_names)
            if len(names) != rows.shape[0]:
                raise ValidationError(
                    f"{len(names)} channel names for {rows.shape[0]} channels")
            object.__setattr__(self, "channel_names", names)

    @property
    def p(self) -> int:
        return self.channels.shape[0]

    @property
    def n_samples(self) -> int:
        return self.channels.shape[1]

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate_hz


def _coerce_channels(channels) -> np.ndarray:
    if isinstance(channels, np.ndarray) and channels.ndim == 2:
        rows = channels.astype(np.float64, copy=True)
    else:
        seq = list(channels)
        if not seq:
            raise ValidationError("at least one channel is required")
        lengths = [len(c) for c in seq]
        if len(set(lengths)) != 1:
            raise ValidationError(f"ragged channels: lengths {lengths}")
        rows = np.asarray(seq, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] < 1:
        raise ValidationError(f"expected a (p, n) channel array, got shape {rows.shape}")
    if rows.shape[1] < 2:
        raise ValidationError(f"channels must hold at least 2 samples, got {rows.shape[1]}")
    bad = ~np.isfinite(rows)
    if bad.any():
        ch, idx = np.argwhere(bad)[0]
        raise ValidationError(f"non-finite sample at channel {ch}, index {idx}")
    return _as_readonly(rows)


def validate_record(record: MultiChannelRecord) -> None:
    """Re-check every MultiChannelRecord invariant; raise ValidationError if any fails.

    Construction already validates, so this only guards records whose arrays
    were mutated through a non-owning view.
    """
    if not isinstance(record, MultiChannelRecord):
        raise ValidationError(f"expected MultiChannelRecord, got {type(record).__name__}")
    _coerce_channels(record.channels)
    if record.sample_rate_hz <= 0:
        raise ValidationError(f"sample rate must be positive, got {record.sample_rate_hz}")


@dataclass(frozen=True)
class ChannelSpectrum:
    """Complex DFT of one channel: n bins spanning 0..source_rate_hz.

    Bin k sits at frequency ``k * source_rate_hz / (n - 1)``, the stretch
    grid used by the mapping stage, which spans the full rate inclusively.
    When ``real_source`` is set the bins are checked for conjugate symmetry.
    """

    bins: np.ndarray
    source_rate_hz: float
    real_source: bool = False

    def __post_init__(self):
        bins = np.asarray(self.bins, dtype=np.complex128)
        if bins.ndim != 1 or bins.shape[0] < 2:
            raise ValidationError(f"spectrum needs >= 2 bins, got shape {bins.shape}")
        if not np.isfinite(bins).all():
            raise ValidationError("non-finite spectrum bin")
        if self.source_rate_hz <= 0:
            raise ValidationError("source rate must be positive")
        if self.real_source:
            n = bins.shape[0]
            mirror = np.conj(bins[-1:0:-1])
            tol = 1e-9 * max(np.abs(bins).max(), 1.0)
            if not np.allclose(bins[1:], mirror, atol=tol, rtol=0):
                raise ValidationError("spectrum of a real channel must be conjugate-symmetric")
        object.__setattr__(self, "bins", _as_readonly(bins))
        object.__setattr__(self, "source_rate_hz", float(self.source_rate_hz))

    @property
    def n(self) -> int:
        return self.bins.shape[0]

    def bin_frequency(self, k) -> np.ndarray:
        """Frequency in Hz of bin ``k`` on the 0..rate inclusive grid."""
        return np.asarray(k) * (self.source_rate_hz / (self.n - 1))


@dataclass(frozen=True)
class TransformConfig:
    """Knobs for one encode: target rate, channel count, mode, band order.

    ``stacking_order[b]`` names the (0-based) channel placed in band ``b``;
    bands are always written bottom-up, so the permutation decides which
    channel lands where, not the write sequence. Identity when omitted.
    """

    target_rate_hz: float
    channel_count: int
    mode: str = MODE_REAL_HERMITIAN
    stacking_order: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.channel_count < 1:
            raise ValidationError("channel_count must be >= 1")
        if self.target_rate_hz <= 0 or not np.isfinite(self.target_rate_hz):
            raise ValidationError("target rate must be positive and finite")
        object.__setattr__(self, "target_rate_hz", float(self.target_rate_hz))
        order = self.stacking_order
        if order is None:
            order = tuple(range(self.channel_count))
        else:
            order = tuple(int(i) for i in order)
            if sorted(order) != list(range(self.channel_count)):
                raise ValidationError(
                    f"stacking_order must be a permutation of 0..{self.channel_count - 1}, "
                    f"got {order}")
        object.__setattr__(self, "stacking_order", order)


@dataclass(frozen=True)
class BandPlan:
    """The computed stretch-and-stack mapping for one configuration.

    ``assignments[b]`` maps band b's source bins to destination indices on
    ``dest_grid`` (which channel occupies band b is decided by
    ``stacking_order``; the geometry is identical for every occupant).

    Collision accounting distinguishes two facts:
      * ``collision_count`` - destination bins written more than once, total.
        Adjacent bands always share their boundary frequency (the source grid
        spans 0..f_s inclusive), so this is >= p-1 for p >= 2.
      * ``lossless`` - True iff every channel's informative lower-half bins
        survive stacking as the final writer of their destination bin, which
        is exactly the condition under which decoding is exact for real
        channels (the mirror half is reconstructed by conjugate symmetry).
    ``rate_feasible`` is the coarse rate-floor predicate F_s >= p * f_s; it is
    necessary for losslessness but not sufficient (see README).
    """

    p: int
    n_samples: int
    source_rate_hz: float
    target_rate_hz: float
    n_out: int
    band_width_hz: float
    band_offsets_hz: np.ndarray
    alpha: float
    dest_grid: np.ndarray
    assignments: tuple[np.ndarray, ...]
    collision_count: int
    rate_feasible: bool
    lossless: bool
    first_destructive: Optional[tuple[int, int]]
    mode: str = MODE_REAL_HERMITIAN
    stacking_order: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "band_offsets_hz", _as_readonly(self.band_offsets_hz))
        object.__setattr__(self, "dest_grid", _as_readonly(self.dest_grid))
        object.__setattr__(self, "assignments",
                           tuple(_as_readonly(a) for a in self.assignments))

    @property
    def grid_step_hz(self) -> float:
        return self.target_rate_hz / (self.n_out - 1)

    def band_of_channel(self, channel: int) -> int:
        return self.stacking_order.index(channel)


@dataclass(frozen=True)
class StackedSpectrum:
    """Wideband complex spectrum after stacking: n_out bins spanning 0..rate."""

    bins: np.ndarray
    rate_hz: float

    def __post_init__(self):
        bins = np.asarray(self.bins, dtype=np.complex128)
        if bins.ndim != 1 or bins.shape[0] < 2:
            raise ValidationError(f"stacked spectrum needs >= 2 bins, got shape {bins.shape}")
        if self.rate_hz <= 0:
            raise ValidationError("rate must be positive")
        object.__setattr__(self, "bins", _as_readonly(bins))
        object.__setattr__(self, "rate_hz", float(self.rate_hz))

    @property
    def n_out(self) -> int:
        return self.bins.shape[0]


@dataclass(frozen=True)
class WidebandSignal:
    """Single-channel output waveform plus everything needed to invert it.

    ``samples`` is float64 in the real modes and complex128 in paper-complex
    mode. The stored samples are peak-normalized by ``provenance.scale`` (an
    exact power of two); multiply by the scale to recover raw amplitudes.
    """

    samples: np.ndarray
    rate_hz: float
    provenance: "SidecarHeader"

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if samples.dtype.kind == "c":
            samples = samples.astype(np.complex128, copy=True)
        else:
            samples = samples.astype(np.float64, copy=True)
        if samples.ndim != 1 or samples.shape[0] < 2:
            raise ValidationError(f"wideband signal needs >= 2 samples, got {samples.shape}")
        if not np.isfinite(samples).all():
            raise ValidationError("non-finite wideband sample")
        if self.provenance is None:
            raise ValidationError("wideband signal requires provenance")
        if self.provenance.n_out != samples.shape[0]:
            raise ValidationError(
                f"provenance says {self.provenance.n_out} samples, got {samples.shape[0]}")
        object.__setattr__(self, "samples", _as_readonly(samples))
        object.__setattr__(self, "rate_hz", float(self.rate_hz))

    @property
    def n_out(self) -> int:
        return self.samples.shape[0]

    @property
    def is_complex(self) -> bool:
        return self.samples.dtype.kind == "c"

    def denormalized(self) -> np.ndarray:
        """Samples with the provenance scale multiplied back in (exact: the
        scale is a power of two)."""
        return self.samples * self.provenance.scale


