"""Fast Griffin-Lim iteration on the wavelet frame."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dcwt import CoefficientGrid, WaveletFrame, analyze, synthesize
from .metrics import spectral_convergence
from .phase import MagnitudeGrid, PhaseGrid, random_phase

__all__ = ["FglimConfig", "FglimResult", "fast_griffin_lim"]


@dataclass(frozen=True)
class FglimConfig:
    """``init`` is None for random phases or a PhaseGrid for a warm start."""

    max_iter: int = 150
    momentum: float = 0.99
    seed: int = 0
    init: PhaseGrid | None = None
    stall_db: float = 0.01
    stall_window: int = 10
    synthesis: str = "direct"

    def __post_init__(self):
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")
        if not 0 <= self.momentum < 1:
            raise ValueError("momentum must lie in [0, 1)")


@dataclass(frozen=True, eq=False)
class FglimResult:
    signal: np.ndarray
    coefficients: CoefficientGrid
    sc_trace: np.ndarray
    consistency_trace: np.ndarray
    best_iteration: int

    def __iter__(self):
        return iter((self.signal, self.coefficients, self.sc_trace))


def _project_magnitude(z: CoefficientGrid, m: MagnitudeGrid, low_target: np.ndarray) -> CoefficientGrid:
    mod = np.abs(z.wavelet)
    unit = np.where(mod > 0, z.wavelet / np.where(mod > 0, mod, 1.0), 1.0)
    return z.with_values(m.values * unit, low_target)


def fast_griffin_lim(m: MagnitudeGrid, frame: WaveletFrame, cfg: FglimConfig = FglimConfig()) -> FglimResult:
    """Alternate projections with momentum; returns the best iterate by SC.

    The lowpass row is held at its given magnitude. Each iteration records
    the SC of the consistent signal and the distance between its
    coefficients and the magnitude constraint set, weighting wavelet rows
    by 2 since each stands for a positive and a negative frequency channel.
    """
    K, N = frame.K, frame.spec.n_hops
    if m.values.shape != (K, N):
        raise ValueError("magnitudes do not match the frame")
    low_target = np.zeros(N) if m.lowpass is None else np.abs(np.asarray(m.lowpass, dtype=float))
    target = MagnitudeGrid(m.values, m.centers, m.hop_seconds, m.log_floor_db, low_target, frame.spec)

    if cfg.init is None:
        phase = random_phase((K, N), cfg.seed)
    else:
        if cfg.init.values.shape != (K, N):
            raise ValueError("warm-start phase does not match the frame")
        phase = cfg.init.values
    c = CoefficientGrid(m.values * np.exp(1j * phase), low_target.copy(), frame.spec, frame.centers)
    c_prev = c

    zero_target = not np.any(m.values) and not np.any(low_target)
    best = None
    sc_trace, cons_trace = [], []
    for it in range(cfg.max_iter):
        t = c.with_values(c.wavelet + cfg.momentum * (c.wavelet - c_prev.wavelet),
                          c.lowpass + cfg.momentum * (c.lowpass - c_prev.lowpass))
        x = synthesize(t, frame, method=cfg.synthesis)
        z = analyze(x, frame)
        # norm in which analyze o synthesize is an orthogonal projection
        cons_trace.append(float(np.sqrt(2.0 * np.sum((np.abs(z.wavelet) - m.values) ** 2)
                                        + np.sum((z.lowpass - low_target) ** 2))))
        sc = -np.inf if zero_target else spectral_convergence(z, target)
        sc_trace.append(sc)
        c_prev, c = c, _project_magnitude(z, target, low_target)
        if best is None or sc < best[0]:
            best = (sc, it, x, c)
        if zero_target:
            break
        w = cfg.stall_window
        if it >= w and min(sc_trace[: it - w + 1]) - best[0] < cfg.stall_db:
            break
    sc, it, x, coeffs = best
    return FglimResult(x, coeffs, np.asarray(sc_trace), np.asarray(cons_trace), it)
