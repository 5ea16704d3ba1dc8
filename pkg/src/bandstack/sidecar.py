"""Sidecar header: the metadata that makes a wideband file invertible.

A wideband waveform alone cannot be decoded: the channel count, source rate,
sample count, mode, band order and amplitude scale are not recoverable from
samples. This header carries them. In memory it doubles as the provenance
object embedded in every WidebandSignal; on disk it is a small JSON file next
to the data (``<data>.sidecar``).

Serialization is strict both ways: floats survive bit-exactly (shortest-repr
round trip), unknown keys and unsupported versions are rejected rather than
ignored, so a future writer cannot silently feed this reader.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

FORMAT_VERSION = 1

_REQUIRED_KEYS = {
    "format_version", "kind", "p", "n_samples", "source_rate_hz",
    "target_rate_hz", "mode", "stacking_order", "scale", "collision_count",
    "data_format",
}
_OPTIONAL_KEYS = {"channel_names"}


def output_length(n_samples: int, source_rate_hz: float, target_rate_hz: float) -> int:
    """Number of wideband samples: round(T * F_s) with T = n / f_s.

    Equals the integer product whenever T * F_s is integral; rounds
    half-to-even otherwise (the residual is exposed as ``rate_residual``).
    """
    return int(round((n_samples / source_rate_hz) * target_rate_hz))


@dataclass(frozen=True)
class SidecarHeader:
    """Provenance of one wideband signal; sufficient input for decode.

    ``stacking_order`` is stored 0-based in memory and 1-based in the JSON
    file (the file is a user-facing surface). ``data_format`` records how the
    companion data file is laid out ("wav-f32" or "raw-f64"); for an
    in-memory signal that has not been written yet it defaults to "raw-f64".
    """

    p: int
    n_samples: int
    source_rate_hz: float
    target_rate_hz: float
    mode: str
    stacking_order: tuple[int, ...]
    scale: float
    collision_count: int
    channel_names: Optional[tuple[str, ...]] = None
    data_format: str = "raw-f64"
    format_version: int = FORMAT_VERSION

    @property
    def n_out(self) -> int:
        return output_length(self.n_samples, self.source_rate_hz, self.target_rate_hz)

    @property
    def rate_residual(self) -> float:
        """How far T * F_s was from an integer before rounding (0 when exact)."""
        exact = (self.n_samples / self.source_rate_hz) * self.target_rate_hz
        return exact - self.n_out

    def to_json(self) -> str:
        payload = {
            "format_version": self.format_version,
            "kind": "wideband",
            "p": self.p,
            "n_samples": self.n_samples,
            "source_rate_hz": self.source_rate_hz,
            "target_rate_hz": self.target_rate_hz,
            "mode": self.mode,
            "stacking_order": [i + 1 for i in self.stacking_order],
            "scale": self.scale,
            "collision_count": self.collision_count,
            "data_format": self.data_format,
        }
        if self.channel_names is not None:
            payload["channel_names"] = list(self.channel_names)
        return json.dumps(payload, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SidecarHeader":
        from bandstack.model import FormatError

        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"sidecar is not valid JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise FormatError("sidecar must be a JSON object")
        version = payload.get("format_version")
        if version != FORMAT_VERSION:
            raise FormatError(f"unsupported sidecar format_version {version!r} "
                              f"(this reader understands {FORMAT_VERSION})")
        if payload.get("kind") != "wideband":
            raise FormatError(f"expected a wideband sidecar, got kind={payload.get('kind')!r}")
        keys = set(payload)
        unknown = keys - _REQUIRED_KEYS - _OPTIONAL_KEYS
        if unknown:
            raise FormatError(f"unknown sidecar fields {sorted(unknown)}; refusing to guess")
        missing = _REQUIRED_KEYS - keys
        if missing:
            raise FormatError(f"sidecar is missing fields {sorted(missing)}")
        names = payload.get("channel_names")
        try:
            return cls(
                p=int(payload["p"]),
                n_samples=int(payload["n_samples"]),
                source_rate_hz=float(payload["source_rate_hz"]),
                target_rate_hz=float(payload["target_rate_hz"]),
                mode=str(payload["mode"]),
                stacking_order=tuple(int(i) - 1 for i in payload["stacking_order"]),
                scale=float(payload["scale"]),
                collision_count=int(payload["collision_count"]),
                channel_names=tuple(names) if names is not None else None,
                data_format=str(payload["data_format"]),
            )
        except (TypeError, ValueError) as exc:
            raise FormatError(f"malformed sidecar field: {exc}") from exc
