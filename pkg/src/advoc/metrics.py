"""Objective quality measures and the real-time-factor benchmark harness.

Listening-test scores are not reproducible in software; log-spectral
distance, spectral convergence, and SNR are the desk-scale proxies this
toolkit reports instead.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np


class UndefinedMeasureError(ValueError):
    """Raised when a metric is undefined for the given input (e.g. zero reference)."""


def _frames(x):
    return x.frames if hasattr(x, "frames") else np.asarray(x, dtype=np.float64)


def _samples(x):
    return x.samples if hasattr(x, "samples") else np.asarray(x, dtype=np.float64)


def spectral_convergence(target, actual) -> float:
    """Normalized Frobenius distance ||target - actual||_F / ||target||_F.

    Asymmetric: the first argument is the reference magnitude spectrogram.
    """
    t = _frames(target)
    a = _frames(actual)
    if t.shape != a.shape:
        raise ValueError(f"shape mismatch: {t.shape} vs {a.shape}")
    denom = np.linalg.norm(t)
    if denom == 0:
        raise UndefinedMeasureError("spectral convergence undefined for zero target")
    return float(np.linalg.norm(t - a) / denom)


def log_spectral_distance(a, b, eps: float = 1e-10) -> float:
    """RMS over all entries of 20 * log10((a + eps) / (b + eps)), in dB."""
    a = _frames(a)
    b = _frames(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    d = 20.0 * np.log10((a + eps) / (b + eps))
    return float(np.sqrt(np.mean(d * d)))


def snr(reference, estimate) -> float:
    """Signal-to-noise ratio in dB; inputs are trimmed to the shorter length.

    Identical inputs yield math.inf.
    """
    ref = _samples(reference)
    est = _samples(estimate)
    n = min(ref.size, est.size)
    ref, est = ref[:n], est[:n]
    sig = float(np.sum(ref * ref))
    if sig == 0:
        raise UndefinedMeasureError("SNR undefined for zero reference")
    noise = float(np.sum((ref - est) ** 2))
    if noise == 0:
        return math.inf
    return 10.0 * math.log10(sig / noise)


@dataclass
class BenchmarkReport:
    """Timing summary for one pipeline over a corpus."""

    name: str
    seconds_audio: float
    seconds_wall: float
    stages: list = field(default_factory=list)  # [(stage name, seconds), ...]

    @property
    def rtf(self) -> float:
        return self.seconds_audio / self.seconds_wall

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "seconds_audio": self.seconds_audio,
            "seconds_wall": self.seconds_wall,
            "rtf": self.rtf,
            "stages": [{"name": n, "seconds": s} for n, s in self.stages],
        }


def benchmark_rtf(name, stages, corpus, seconds_audio=None, warmup=1, runs=3) -> BenchmarkReport:
    """Time a staged pipeline over a corpus and report the real-time factor.

    stages is an ordered list of (stage_name, fn); each item of the corpus
    is threaded through the stages in sequence. After `warmup` untimed
    passes, the corpus is processed `runs` times and the median-wall run
    provides both the total and the per-stage breakdown (so stage times
    always sum to <= the reported wall time).
    """
    corpus = list(corpus)
    if not corpus:
        raise ValueError("empty corpus")
    if seconds_audio is None:
        seconds_audio = sum(item.duration for item in corpus)

    def one_pass():
        stage_times = [0.0] * len(stages)
        t_start = time.perf_counter()
        for item in corpus:
            state = item
            for i, (_, fn) in enumerate(stages):
                t0 = time.perf_counter()
                state = fn(state)
                stage_times[i] += time.perf_counter() - t0
        return time.perf_counter() - t_start, stage_times

    for _ in range(warmup):
        one_pass()
    results = sorted(one_pass() for _ in range(max(1, runs)))
    wall, stage_times = results[len(results) // 2]
    return BenchmarkReport(
        name=name,
        seconds_audio=float(seconds_audio),
        seconds_wall=wall,
        stages=[(sname, t) for (sname, _), t in zip(stages, stage_times)],
    )
