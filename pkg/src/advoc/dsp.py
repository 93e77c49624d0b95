"""Short-time Fourier analysis and resynthesis.

All arithmetic here runs in double precision. Frames are centered: the
signal is reflect-padded by half a window on both ends so that frame t
covers samples around t * hop_size.
"""

from dataclasses import dataclass, field

import numpy as np

DEFAULT_SAMPLE_RATE = 22050


@dataclass(frozen=True)
class StftConfig:
    """Analysis parameters. Defaults: 1024-sample window, 256-sample hop."""

    window_size: int = 1024
    hop_size: int = 256

    def __post_init__(self):
        if self.window_size < 2 or self.window_size % 2 != 0:
            raise ValueError(f"window_size must be even and >= 2, got {self.window_size}")
        if not 1 <= self.hop_size <= self.window_size:
            raise ValueError(
                f"hop_size must be in [1, window_size], got {self.hop_size}"
            )

    @property
    def n_bins(self):
        return self.window_size // 2 + 1


@dataclass
class Waveform:
    """Mono audio: 1-D float64 samples (nominal range [-1, 1]) at a sample rate."""

    samples: np.ndarray
    sample_rate: int = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1 or self.samples.size < 1:
            raise ValueError("waveform must be a non-empty 1-D array")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("waveform contains non-finite samples")
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")

    @property
    def duration(self):
        return self.samples.size / self.sample_rate


@dataclass
class ComplexSpectrogram:
    """STFT coefficients, shape (n_frames, window_size // 2 + 1)."""

    frames: np.ndarray
    config: StftConfig = field(default_factory=StftConfig)
    sample_rate: int = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=np.complex128)
        if self.frames.ndim != 2 or self.frames.shape[1] != self.config.n_bins:
            raise ValueError(
                f"expected shape (n, {self.config.n_bins}), got {self.frames.shape}"
            )
        if not np.all(np.isfinite(self.frames)):
            raise ValueError("spectrogram contains non-finite entries")

    @property
    def n_frames(self):
        return self.frames.shape[0]


@dataclass
class MagnitudeSpectrogram:
    """Non-negative STFT moduli, shape (n_frames, window_size // 2 + 1)."""

    frames: np.ndarray
    config: StftConfig = field(default_factory=StftConfig)
    sample_rate: int = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=np.float64)
        if self.frames.ndim != 2 or self.frames.shape[1] != self.config.n_bins:
            raise ValueError(
                f"expected shape (n, {self.config.n_bins}), got {self.frames.shape}"
            )
        if not np.all(np.isfinite(self.frames)):
            raise ValueError("spectrogram contains non-finite entries")
        if np.any(self.frames < 0):
            raise ValueError("magnitude spectrogram has negative entries")

    @property
    def n_frames(self):
        return self.frames.shape[0]


def hann_window(size: int) -> np.ndarray:
    """Periodic Hann window: w[i] = 0.5 * (1 - cos(2*pi*i / size)).

    The periodic variant satisfies constant overlap-add at hop = size / 4,
    which the resynthesis path relies on.
    """
    if size < 2 or size % 2 != 0:
        raise ValueError(f"window size must be even and >= 2, got {size}")
    i = np.arange(size, dtype=np.float64)
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * i / size))


def frame_count(n_samples: int, config: StftConfig) -> int:
    """Number of frames produced for an n-sample input after center padding."""
    padded = n_samples + config.window_size
    return (padded - config.window_size) // config.hop_size + 1


def stft(w: Waveform, config: StftConfig | None = None) -> ComplexSpectrogram:
    """Windowed, hopped DFT of a waveform.

    The input is reflect-padded by window_size / 2 on both ends, so frame t
    is centered at sample t * hop_size of the original signal.
    """
    config = config or StftConfig()
    x = w.samples
    half = config.window_size // 2
    if x.size < 2:
        # reflect padding needs at least 2 samples; extend constant instead
        padded = np.pad(x, half, mode="edge")
    else:
        padded = np.pad(x, half, mode="reflect")
    n_frames = frame_count(x.size, config)
    window = hann_window(config.window_size)
    offsets = np.arange(n_frames) * config.hop_size
    segments = padded[offsets[:, None] + np.arange(config.window_size)[None, :]]
    frames = np.fft.rfft(segments * window[None, :], axis=1)
    return ComplexSpectrogram(frames, config, w.sample_rate)


def istft(s: ComplexSpectrogram, config: StftConfig | None = None) -> Waveform:
    """Overlap-add resynthesis, the left inverse of ``stft`` on its range.

    Each frame is inverse-DFT'd, weighted by the synthesis (= analysis)
    window, and accumulated; the result is normalized by the accumulated
    squared-window envelope and the center padding is trimmed. For any x,
    istft(stft(x)) reproduces x up to rounding wherever the envelope is
    nonzero, which covers every sample of the unpadded signal.
    """
    if config is not None and config != s.config:
        raise ValueError(f"config mismatch: spectrogram has {s.config}, got {config}")
    config = s.config
    win = config.window_size
    hop = config.hop_size
    half = win // 2
    n_frames = s.n_frames
    window = hann_window(win)

    segments = np.fft.irfft(s.frames, n=win, axis=1) * window[None, :]
    padded_len = (n_frames - 1) * hop + win
    out = np.zeros(padded_len)
    norm = np.zeros(padded_len)
    wsq = window * window
    for t in range(n_frames):
        start = t * hop
        out[start : start + win] += segments[t]
        norm[start : start + win] += wsq
    out /= np.maximum(norm, 1e-12)

    trimmed = out[half : padded_len - half]
    if trimmed.size < 1:
        trimmed = out[half : half + 1]
    return Waveform(trimmed, s.sample_rate)


def magnitude(s: ComplexSpectrogram) -> MagnitudeSpectrogram:
    """Elementwise complex modulus; phase is discarded."""
    return MagnitudeSpectrogram(np.abs(s.frames), s.config, s.sample_rate)
