"""Synthetic generator contracts: determinism, band placement, truncation."""

import numpy as np
import pytest

from bandstack.features import band_energies
from bandstack.mapping import build_band_plan
from bandstack.model import MultiChannelRecord, TransformConfig, ValidationError, validate_record
from bandstack.synth import make_bandnoise, make_tones
from bandstack.transform import encode


def test_alpha_tone_is_alpha_dominant():
    rec = make_tones(1, 250, 250.0, [[(10.0, 1.0, 0.0)]])
    energies = band_energies(rec)[0]
    assert energies["alpha"] / sum(energies.values()) > 0.99


def test_empty_tone_table_gives_zero_record():
    rec = make_tones(2, 100, 250.0, [[], []])
    assert np.all(rec.channels == 0)
    validate_record(rec)


def test_tone_above_nyquist_rejected():
    with pytest.raises(ValidationError, match="Nyquist"):
        make_tones(1, 100, 250.0, [[(125.0, 1.0, 0.0)]])


def test_tones_are_deterministic():
    spec = [[(10.0, 1.0, 0.5), (40.0, 0.25, 0.0)], [(3.0, 2.0, 1.0)]]
    a = make_tones(2, 500, 250.0, spec)
    b = make_tones(2, 500, 250.0, spec)
    assert np.array_equal(a.channels, b.channels)


def test_two_channel_tones_land_at_plan_predicted_bins():
    p, n, f_s, F_s = 2, 250, 250.0, 1000.0
    rec = make_tones(p, n, f_s, [[(10.0, 1.0, 0.0)], [(25.0, 1.0, 0.0)]])
    cfg = TransformConfig(F_s, p)
    plan = build_band_plan(p, n, f_s, cfg)
    sig = encode(rec, cfg)
    mag = np.abs(np.fft.fft(sig.samples))
    for band, tone in ((0, 10.0), (1, 25.0)):
        source_bin = int(tone * n / f_s)  # tones are bin-exact by construction
        predicted = plan.assignments[band][source_bin]
        lo = plan.assignments[band].min()
        hi = plan.assignments[band].max()
        measured = lo + int(np.argmax(mag[lo:hi + 1]))
        assert measured == predicted


def test_bandnoise_concentrates_in_band():
    noise = make_bandnoise(2, 1000, 250.0, "delta", seed=7)
    assert not noise.truncated
    for energies in band_energies(noise.record):
        assert energies["delta"] / sum(energies.values()) >= 0.99


def test_bandnoise_deterministic_under_fixed_seed():
    a = make_bandnoise(3, 256, 250.0, "theta", seed=123)
    b = make_bandnoise(3, 256, 250.0, "theta", seed=123)
    assert np.array_equal(a.record.channels, b.record.channels)
    c = make_bandnoise(3, 256, 250.0, "theta", seed=124)
    assert not np.array_equal(a.record.channels, c.record.channels)


def test_gamma_at_150hz_is_truncated_not_rejected():
    noise = make_bandnoise(1, 512, 150.0, "gamma", seed=1)
    assert noise.truncated
    validate_record(noise.record)
    power = np.abs(np.fft.fft(noise.record.channels[0])) ** 2
    freqs = np.arange(512) * (150.0 / 511)
    # everything below the band's low edge must be empty
    assert power[(freqs < 30.0)].sum() < 1e-18 * power.sum()


def test_band_entirely_above_nyquist_rejected():
    with pytest.raises(ValidationError, match="above Nyquist"):
        make_bandnoise(1, 128, 60.0, "gamma")  # 30-100 Hz vs 30 Hz Nyquist


def test_unknown_band_rejected():
    with pytest.raises(ValidationError, match="unknown band"):
        make_bandnoise(1, 128, 250.0, "zeta")


def test_generated_records_validate():
    validate_record(make_bandnoise(2, 300, 250.0, "beta", seed=3).record)
    validate_record(make_tones(1, 300, 250.0, [[(5.0, 1.0, 0.0)]]))
