"""Mel filterbank construction, compression, and heuristic inversion.

The filterbank maps 513 linear-frequency magnitude bins down to 20-80
mel-spaced bins; its Moore-Penrose pseudoinverse gives the baseline
magnitude estimate. Log-amplitude normalization maps amplitudes into
[0, 1] over a fixed dynamic range.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .dsp import (
    MagnitudeSpectrogram,
    StftConfig,
    Waveform,
    magnitude,
    stft,
)

# Amplitude floor applied before taking logs: -200 dB, far below the
# normalization window, so it never interacts with the dynamic range clip.
AMP_FLOOR = 1e-10

LINEAR_AMPLITUDE = "linear-amplitude"
NORMALIZED_LOG = "normalized-log"


@dataclass(frozen=True)
class FeatureConfig:
    """Mel feature extraction parameters.

    ref_db anchors the top of the normalization window. It should be the
    maximum dB amplitude over the training corpus (dataset preparation
    measures and persists it); the default suits full-scale speech
    analyzed with a 1024-sample Hann window.
    """

    sample_rate: int = 22050
    n_fft_bins: int = 513
    mel_bins: int = 80
    f_min: float = 125.0
    f_max: float = 7600.0
    dynamic_range_db: float = 120.0
    ref_db: float = 40.0

    def __post_init__(self):
        if not 0 <= self.f_min < self.f_max <= self.sample_rate / 2:
            raise ValueError(
                f"need 0 <= f_min < f_max <= sr/2, got [{self.f_min}, {self.f_max}] "
                f"at sr={self.sample_rate}"
            )
        if not 1 <= self.mel_bins < self.n_fft_bins:
            raise ValueError(
                f"mel_bins must be in [1, n_fft_bins), got {self.mel_bins}"
            )
        if self.dynamic_range_db <= 0:
            raise ValueError("dynamic_range_db must be positive")


@dataclass
class MelSpectrogram:
    """Mel-compressed spectrogram, shape (n_frames, mel_bins).

    scale is either linear-amplitude (entries >= 0) or normalized-log
    (entries in [0, 1]).
    """

    frames: np.ndarray
    scale: str = LINEAR_AMPLITUDE
    config: FeatureConfig = field(default_factory=FeatureConfig)
    sample_rate: int = 22050

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=np.float64)
        if self.frames.ndim != 2 or self.frames.shape[1] != self.config.mel_bins:
            raise ValueError(
                f"expected shape (n, {self.config.mel_bins}), got {self.frames.shape}"
            )
        if self.scale not in (LINEAR_AMPLITUDE, NORMALIZED_LOG):
            raise ValueError(f"unknown scale {self.scale!r}")
        if not np.all(np.isfinite(self.frames)):
            raise ValueError("mel spectrogram contains non-finite entries")

    @property
    def n_frames(self):
        return self.frames.shape[0]


@dataclass
class MelFilterbank:
    """Triangular mel filters, shape (mel_bins, n_fft_bins), peaks at 1.0."""

    weights: np.ndarray
    config: FeatureConfig

    @property
    def mel_bins(self):
        return self.weights.shape[0]


@dataclass
class InverseBasis:
    """Moore-Penrose pseudoinverse of a filterbank, shape (n_fft_bins, mel_bins)."""

    weights: np.ndarray
    config: FeatureConfig


def hz_to_mel(f):
    """Map frequency in Hz to mel units: 2595 * log10(1 + f / 700)."""
    f = np.asarray(f, dtype=np.float64)
    if np.any(f < 0):
        raise ValueError("frequency must be non-negative")
    return 2595.0 * np.log10(1.0 + f / 700.0)


def mel_to_hz(m):
    """Inverse of hz_to_mel."""
    m = np.asarray(m, dtype=np.float64)
    if np.any(m < 0):
        raise ValueError("mel value must be non-negative")
    return 700.0 * (10.0 ** (m / 2595.0) - 1.0)


def mel_filterbank(config: FeatureConfig, stft_config: StftConfig | None = None) -> MelFilterbank:
    """Build mel_bins triangular filters sampled at the FFT bin frequencies.

    Filter edges are mel_bins + 2 points equally spaced in mel between
    f_min and f_max. Triangles are peak-normalized (max weight 1.0), not
    area-normalized.
    """
    stft_config = stft_config or StftConfig()
    if stft_config.n_bins != config.n_fft_bins:
        raise ValueError(
            f"config expects {config.n_fft_bins} FFT bins, window gives {stft_config.n_bins}"
        )
    edges_mel = np.linspace(
        hz_to_mel(config.f_min), hz_to_mel(config.f_max), config.mel_bins + 2
    )
    edges_hz = mel_to_hz(edges_mel)
    bin_hz = np.arange(config.n_fft_bins) * config.sample_rate / stft_config.window_size

    weights = np.zeros((config.mel_bins, config.n_fft_bins))
    for m in range(config.mel_bins):
        lo, center, hi = edges_hz[m], edges_hz[m + 1], edges_hz[m + 2]
        rising = (bin_hz - lo) / (center - lo)
        falling = (hi - bin_hz) / (hi - center)
        weights[m] = np.maximum(0.0, np.minimum(rising, falling))

    row_sums = weights.sum(axis=1)
    if np.any(row_sums <= 0):
        empty = int(np.argmax(row_sums <= 0))
        raise ValueError(
            f"filter {empty} has no support at FFT resolution; "
            f"reduce mel_bins (got {config.mel_bins})"
        )
    return MelFilterbank(weights, config)


def mel_project(m: MagnitudeSpectrogram, fb: MelFilterbank) -> MelSpectrogram:
    """Compress a magnitude spectrogram: one matrix-vector product per frame."""
    if m.frames.shape[1] != fb.weights.shape[1]:
        raise ValueError(
            f"bin count mismatch: spectrogram has {m.frames.shape[1]}, "
            f"filterbank expects {fb.weights.shape[1]}"
        )
    frames = m.frames @ fb.weights.T
    return MelSpectrogram(frames, LINEAR_AMPLITUDE, fb.config, m.sample_rate)


def pseudoinverse(fb: MelFilterbank) -> InverseBasis:
    """Moore-Penrose pseudoinverse of the filterbank via SVD.

    Singular values below 1e-10 times the largest are treated as zero.
    """
    row_sums = fb.weights.sum(axis=1)
    if np.any(row_sums <= 0):
        raise ValueError("degenerate filterbank: zero row")
    inv = np.linalg.pinv(fb.weights, rcond=1e-10)
    return InverseBasis(inv, fb.config)


def estimate_magnitude(
    mel: MelSpectrogram, inv: InverseBasis, stft_config: StftConfig | None = None
) -> MagnitudeSpectrogram:
    """Project a linear-amplitude mel spectrogram back onto full FFT bins.

    Negative values produced by the pseudoinverse are clamped to zero.
    """
    if mel.scale != LINEAR_AMPLITUDE:
        raise ValueError(f"expected linear-amplitude input, got {mel.scale!r}")
    if mel.frames.shape[1] != inv.weights.shape[1]:
        raise ValueError(
            f"mel bin mismatch: spectrogram has {mel.frames.shape[1]}, "
            f"inverse basis expects {inv.weights.shape[1]}"
        )
    frames = np.maximum(mel.frames @ inv.weights.T, 0.0)
    return MagnitudeSpectrogram(frames, stft_config or StftConfig(), mel.sample_rate)


def amp_to_db_normalize(mel: MelSpectrogram) -> MelSpectrogram:
    """Map linear amplitudes to [0, 1] over the configured dynamic range.

    d = 20 * log10(max(a, 1e-10)), clipped to [ref_db - range, ref_db],
    then affinely mapped so the clip floor is 0 and ref_db is 1.
    """
    if mel.scale != LINEAR_AMPLITUDE:
        raise ValueError(f"expected linear-amplitude input, got {mel.scale!r}")
    c = mel.config
    d = 20.0 * np.log10(np.maximum(mel.frames, AMP_FLOOR))
    d = np.clip(d, c.ref_db - c.dynamic_range_db, c.ref_db)
    frames = (d - (c.ref_db - c.dynamic_range_db)) / c.dynamic_range_db
    return MelSpectrogram(frames, NORMALIZED_LOG, c, mel.sample_rate)


def db_denormalize(mel: MelSpectrogram) -> MelSpectrogram:
    """Inverse of amp_to_db_normalize on the clipped region."""
    if mel.scale != NORMALIZED_LOG:
        raise ValueError(f"expected normalized-log input, got {mel.scale!r}")
    c = mel.config
    d = mel.frames * c.dynamic_range_db + (c.ref_db - c.dynamic_range_db)
    frames = 10.0 ** (d / 20.0)
    return MelSpectrogram(frames, LINEAR_AMPLITUDE, c, mel.sample_rate)


def normalize_amplitudes(frames: np.ndarray, config: FeatureConfig) -> np.ndarray:
    """amp_to_db_normalize on a bare array (utility for non-mel spectrograms)."""
    d = 20.0 * np.log10(np.maximum(frames, AMP_FLOOR))
    d = np.clip(d, config.ref_db - config.dynamic_range_db, config.ref_db)
    return (d - (config.ref_db - config.dynamic_range_db)) / config.dynamic_range_db


def extract_features(
    w: Waveform,
    stft_config: StftConfig | None = None,
    feature_config: FeatureConfig | None = None,
    fb: MelFilterbank | None = None,
) -> MelSpectrogram:
    """Full pipeline: stft -> magnitude -> mel projection -> log normalization."""
    stft_config = stft_config or StftConfig()
    feature_config = feature_config or FeatureConfig(sample_rate=w.sample_rate)
    if fb is None:
        fb = mel_filterbank(feature_config, stft_config)
    mag = magnitude(stft(w, stft_config))
    return amp_to_db_normalize(mel_project(mag, fb))


def with_ref_db(config: FeatureConfig, ref_db: float) -> FeatureConfig:
    """Copy of config with the dB reference replaced."""
    return replace(config, ref_db=ref_db)
