"""Phase estimation: zero/random initialization, Griffin-Lim, and oracle phase.

Griffin-Lim here is plain alternating projection between the set of
spectrograms with the target magnitude and the set of consistent
(realizable) spectrograms; no momentum variant.
"""

from dataclasses import dataclass

import numpy as np

from .dsp import ComplexSpectrogram, MagnitudeSpectrogram, Waveform, istft, magnitude, stft
from .metrics import spectral_convergence

ZERO = "zero"
RANDOM = "random"
GRIFFIN_LIM = "griffin_lim"
ORACLE = "oracle"


@dataclass
class PhaseMethod:
    """Phase estimation strategy selector.

    kind is one of zero | random | griffin_lim | oracle. random uses `seed`;
    griffin_lim uses `iterations` and `init` (a nested zero/random method);
    oracle uses `reference`, the source waveform whose STFT phases are reused.
    """

    kind: str = GRIFFIN_LIM
    seed: int = 0
    iterations: int = 60
    init: "PhaseMethod | None" = None
    reference: Waveform | None = None

    def __post_init__(self):
        if self.kind not in (ZERO, RANDOM, GRIFFIN_LIM, ORACLE):
            raise ValueError(f"unknown phase method {self.kind!r}")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.kind == ORACLE and self.reference is None:
            raise ValueError("oracle phase needs a reference waveform")
        if self.init is not None and self.init.kind not in (ZERO, RANDOM):
            raise ValueError("griffin_lim init must be zero or random")


def init_phase(m: MagnitudeSpectrogram, method: PhaseMethod | None = None) -> ComplexSpectrogram:
    """Attach initial phases to a magnitude spectrogram.

    zero: all phases 0 (entries real and equal to the magnitudes).
    random: phases uniform in [-pi, pi), reproducible per seed.
    """
    method = method or PhaseMethod(kind=ZERO)
    if method.kind == ZERO:
        frames = m.frames.astype(np.complex128)
    elif method.kind == RANDOM:
        rng = np.random.Generator(np.random.Philox(method.seed))
        phases = rng.uniform(-np.pi, np.pi, size=m.frames.shape)
        frames = m.frames * np.exp(1j * phases)
    else:
        raise ValueError(f"init_phase supports zero or random, got {method.kind!r}")
    return ComplexSpectrogram(frames, m.config, m.sample_rate)


def _project_consistent(s: ComplexSpectrogram) -> ComplexSpectrogram:
    """Project onto the set of consistent spectrograms: stft(istft(s))."""
    return stft(istft(s), s.config)


def griffin_lim(
    m: MagnitudeSpectrogram,
    iterations: int = 60,
    init: PhaseMethod | None = None,
) -> tuple[Waveform, list[float]]:
    """Iterative phase reconstruction from a magnitude spectrogram.

    Each iteration projects the current estimate onto the consistent set
    and re-imposes the target magnitudes. Returns the synthesized waveform
    and the per-iteration spectral-convergence trace, which is
    non-increasing (up to rounding) by the alternating-projection argument.

    A zero-magnitude input short-circuits to silence with a zero trace.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if not np.any(m.frames > 0):
        silence = istft(ComplexSpectrogram(np.zeros_like(m.frames, dtype=np.complex128), m.config, m.sample_rate))
        return silence, [0.0] * iterations

    s = init_phase(m, init)
    trace = []
    for _ in range(iterations):
        consistent = _project_consistent(s)
        trace.append(spectral_convergence(m, magnitude(consistent)))
        mod = np.abs(consistent.frames)
        unit = np.where(mod > 0, consistent.frames / np.where(mod > 0, mod, 1.0), 1.0)
        s = ComplexSpectrogram(m.frames * unit, m.config, m.sample_rate)
    return istft(s), trace


def oracle_phase(m: MagnitudeSpectrogram, reference: Waveform) -> ComplexSpectrogram:
    """Combine target magnitudes with the phases of a reference recording."""
    ref_spec = stft(reference, m.config)
    if ref_spec.n_frames != m.n_frames:
        raise ValueError(
            f"reference yields {ref_spec.n_frames} frames, magnitudes have {m.n_frames}"
        )
    mod = np.abs(ref_spec.frames)
    unit = np.where(mod > 0, ref_spec.frames / np.where(mod > 0, mod, 1.0), 1.0)
    return ComplexSpectrogram(m.frames * unit, m.config, m.sample_rate)


def reconstruct(m: MagnitudeSpectrogram, method: PhaseMethod) -> Waveform:
    """Dispatch magnitude -> waveform through the selected phase method."""
    if method.kind in (ZERO, RANDOM):
        return istft(init_phase(m, method))
    if method.kind == GRIFFIN_LIM:
        wav, _ = griffin_lim(m, method.iterations, method.init)
        return wav
    if method.kind == ORACLE:
        return istft(oracle_phase(m, method.reference))
    raise ValueError(f"unknown phase method {method.kind!r}")
