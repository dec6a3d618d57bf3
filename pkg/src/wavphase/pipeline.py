"""End-to-end phaseless reconstruction: magnitude in, signal out."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .dcwt import CoefficientGrid, WaveletFrame, analyze, synthesize
from .griffin_lim import FglimConfig, fast_griffin_lim
from .metrics import Method, ReconstructionReport, spectral_convergence
from .phase import MagnitudeGrid, combine, log_magnitude, phase_derivatives, wpghi

__all__ = ["Reconstruction", "estimate_phase", "reconstruct", "evaluate_signal"]


@dataclass(frozen=True, eq=False)
class Reconstruction:
    signal: np.ndarray
    coefficients: CoefficientGrid
    sc_db: float
    runtime_ms: float
    method: Method


def estimate_phase(m: MagnitudeGrid, frame: WaveletFrame, tol: float = 1e-6, seed: int = 0):
    d = phase_derivatives(log_magnitude(m), frame.params, m.centers, m.hop_seconds)
    return wpghi(m, d, tol, seed)


def reconstruct(m: MagnitudeGrid, frame: WaveletFrame, method="wpghi", tol: float = 1e-6,
                seed: int = 0, max_iter: int = 150, momentum: float = 0.99,
                synthesis: str = "direct") -> Reconstruction:
    """Reconstruct a signal from magnitudes and score it against them."""
    method = Method(method)
    if m.spec is None:
        m = MagnitudeGrid(m.values, m.centers, m.hop_seconds, m.log_floor_db, m.lowpass, frame.spec)
    start = time.perf_counter()
    if method is Method.WPGHI:
        phase = estimate_phase(m, frame, tol, seed)
        s = synthesize(combine(m, phase), frame, method=synthesis)
    else:
        init = estimate_phase(m, frame, tol, seed) if method is Method.WFGLIM else None
        cfg = FglimConfig(max_iter=max_iter, momentum=momentum, seed=seed, init=init, synthesis=synthesis)
        s = fast_griffin_lim(m, frame, cfg).signal
    elapsed = 1000.0 * (time.perf_counter() - start)
    grid = analyze(s, frame)
    return Reconstruction(s, grid, spectral_convergence(grid, m), elapsed, method)


def evaluate_signal(signal_id: str, s, frame: WaveletFrame, methods=("wpghi", "rfglim", "wfglim"),
                    **kwargs) -> list[ReconstructionReport]:
    """Run each method on the magnitudes of ``s``; one report per method."""
    m = MagnitudeGrid.from_coefficients(analyze(s, frame))
    p, spec = frame.params, frame.spec
    out = []
    for name in methods:
        r = reconstruct(m, frame, name, **kwargs)
        out.append(ReconstructionReport(signal_id, r.method, p.alpha, p.beta, spec.a_d, spec.K, spec.B,
                                        r.sc_db, r.runtime_ms, kwargs.get("seed", 0),
                                        p.gamma_re, p.gamma_im))
    return out
