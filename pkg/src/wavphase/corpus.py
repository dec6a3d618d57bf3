"""Small deterministic test corpus.

Ten synthetic signals of equal length: stationary tones, chirps, noise
bursts, a click train and two structured signals imitating speech (pitched
pulse train through formant resonators) and music (decaying harmonic notes).
"""

from __future__ import annotations

import numpy as np
from scipy import signal as sps

__all__ = ["DEFAULT_RATE", "DEFAULT_LENGTH", "desk_corpus", "tone"]

DEFAULT_RATE = 16000
DEFAULT_LENGTH = 9000


def tone(freq: float, L: int = DEFAULT_LENGTH, rate: float = DEFAULT_RATE, phase: float = 0.0) -> np.ndarray:
    t = np.arange(L) / rate
    return np.cos(2 * np.pi * freq * t + phase)


def _fade(L: int, rate: float, ms: float = 20.0) -> np.ndarray:
    n = max(1, int(rate * ms / 1000))
    w = np.ones(L)
    ramp = 0.5 * (1 - np.cos(np.pi * np.arange(n) / n))
    w[:n] = ramp
    w[-n:] = ramp[::-1]
    return w


def _speech_like(L, rate, rng):
    t = np.arange(L) / rate
    f0 = 120 + 30 * np.sin(2 * np.pi * 2.5 * t) + 10 * t
    cycles = np.cumsum(f0) / rate
    pulses = np.diff(np.floor(cycles), prepend=0.0)
    src = pulses + 0.02 * rng.standard_normal(L)
    out = np.zeros(L)
    for fc, bw in ((700, 110), (1200, 120), (2600, 160)):
        r = np.exp(-np.pi * bw / rate)
        th = 2 * np.pi * fc / rate
        out += sps.lfilter([1 - r], [1, -2 * r * np.cos(th), r * r], src)
    # two syllables
    env = np.exp(-0.5 * ((t - 0.15) / 0.07) ** 2) + np.exp(-0.5 * ((t - 0.4) / 0.08) ** 2)
    return out * env


def _music_like(L, rate):
    t = np.arange(L) / rate
    out = np.zeros(L)
    notes = (261.63, 329.63, 392.0, 523.25)
    step = L // len(notes)
    for i, f in enumerate(notes):
        tt = t[i * step:] - t[i * step]
        note = sum(np.cos(2 * np.pi * h * f * tt) / h for h in range(1, 6))
        out[i * step:] += note * np.exp(-tt / 0.12)
    return out


def desk_corpus(L: int = DEFAULT_LENGTH, rate: float = DEFAULT_RATE, seed: int = 2024) -> dict[str, np.ndarray]:
    """Ten named signals of length L, each scaled to peak 0.5."""
    rng = np.random.default_rng(seed)
    t = np.arange(L) / rate
    dur = L / rate
    fade = _fade(L, rate)
    sigs = {
        "tone_440": tone(440.0, L, rate),
        "two_tones": tone(300.0, L, rate) + 0.6 * tone(1250.0, L, rate, 1.0),
        "linear_chirp": sps.chirp(t, 200.0, dur, 4000.0, method="linear") * fade,
        "log_chirp": sps.chirp(t, 100.0, dur, 6000.0, method="logarithmic") * fade,
        "noise_burst": rng.standard_normal(L) * np.exp(-0.5 * ((t - dur / 2) / (dur / 8)) ** 2),
        "bandpass_noise": sps.sosfiltfilt(sps.butter(4, (500, 2000), "bandpass", fs=rate, output="sos"),
                                          rng.standard_normal(L)) * fade,
        "vibrato": np.cos(2 * np.pi * 600 * t + 8 * np.sin(2 * np.pi * 5 * t)) * fade,
        "clicks": np.convolve((np.arange(L) % (L // 6) == L // 12).astype(float),
                              np.hanning(33), mode="same"),
        "speech_like": _speech_like(L, rate, rng),
        "music_like": _music_like(L, rate),
    }
    return {k: 0.5 * v / np.max(np.abs(v)) for k, v in sigs.items()}
