"""Standard test signals and probe lattices for the verification checks.

All setups use L = 1024 samples at unit sampling rate, so x and y are in
samples and frequencies in cycles per sample.
"""

from __future__ import annotations

import numpy as np

from .kernels import CauchyParams, CauchyWavelet, GaborWavelet, TwoPeakWavelet, center_frequency
from .verify import (
    ContinuousWT,
    ReportRow,
    ResidualReport,
    cr_residual,
    gabor_reassignment_special_case,
    laplacian_check,
    reassignment_map,
    ridge_points,
    wt_derivative_check,
)

__all__ = ["CHECKS", "WAVELETS", "L", "test_signal", "two_peak", "run_check"]

L = 1024
CHECKS = ("derivative", "cr", "laplacian", "reassign", "ridge", "gabor")
WAVELETS = ("cauchy", "gabor", "twopeak")

_T = np.arange(L, dtype=float)
TONE_FREQ = 100 / L
CHIRP_FREQ = 0.08
CHIRP_RATE = 1e-4
IMPULSE_AT = 500


def test_signal(name: str) -> np.ndarray:
    if name == "gauss_tone":
        return np.exp(-0.5 * ((_T - 512) / 40.0) ** 2) * np.cos(2 * np.pi * TONE_FREQ * _T)
    if name == "tone":
        return np.cos(2 * np.pi * TONE_FREQ * _T)
    if name == "chirp":
        return np.exp(-0.5 * ((_T - 512) / 150.0) ** 2) * np.cos(
            2 * np.pi * (CHIRP_FREQ * _T + 0.5 * CHIRP_RATE * (_T - 512) ** 2))
    if name == "impulse":
        s = np.zeros(L)
        s[IMPULSE_AT] = 1.0
        return s
    if name == "zero":
        return np.zeros(L)
    raise ValueError(f"unknown test signal {name!r}")


def two_peak(params: CauchyParams) -> TwoPeakWavelet:
    """Sum of two unit-peak Cauchy responses, orders alpha and 1.3 alpha."""
    return TwoPeakWavelet(CauchyParams(params.alpha), CauchyParams(1.3 * params.alpha), 1.0)


def _wavelet(name: str, params: CauchyParams):
    if name == "cauchy":
        return CauchyWavelet(params)
    if name == "gabor":
        return GaborWavelet(2 * np.pi * center_frequency(params))
    if name == "twopeak":
        return two_peak(params)
    raise ValueError(f"unknown wavelet {name!r}; choose from {WAVELETS}")


def run_check(check: str, params: CauchyParams, refine: int = 3, wavelet: str = "cauchy",
              probes: int = 9, spacing: float | None = None) -> ResidualReport:
    """Run one named check on its standard signal; returns the residual rows."""
    if check not in CHECKS:
        raise ValueError(f"unknown check {check!r}; choose from {CHECKS}")
    xb = center_frequency(params)
    wv = _wavelet(wavelet, params)

    if check == "derivative":
        y0 = xb / TONE_FREQ
        x = np.linspace(452, 572, probes)
        y = y0 * np.linspace(0.7, 1.4, probes)
        cwt = ContinuousWT(test_signal("gauss_tone"), wv)
        return wt_derivative_check(cwt, params, x, y, spacing or 0.25, refine=refine)

    if check in ("cr", "laplacian"):
        x = np.linspace(400, 624, probes)
        y = (xb / CHIRP_FREQ) * np.linspace(0.8, 1.25, probes)
        cwt = ContinuousWT(test_signal("chirp"), wv)
        if check == "cr":
            return cr_residual(cwt, params, x, y, spacing or 2.0, refine=refine)
        return laplacian_check(cwt, params, x, y, spacing or 2.0, refine=refine)

    if check == "reassign":
        out = ResidualReport()
        tone = ContinuousWT(test_signal("tone"), wv)
        R = reassignment_map(tone, params, np.linspace(100, 900, probes),
                             TONE_FREQ * np.linspace(0.8, 1.25, probes), spacing or 1.0)
        err = np.abs(R.xi_hat[R.mask] / TONE_FREQ - 1.0)
        out.rows.append(ReportRow("reassign_tone_freq", spacing or 1.0, _rms(err), _max(err)))
        imp = ContinuousWT(test_signal("impulse"), wv)
        R = reassignment_map(imp, params, IMPULSE_AT + np.arange(-3.0, 4.0),
                             np.linspace(0.05, 0.2, probes), spacing or 1.0)
        err = np.abs(R.x_hat[R.mask] - IMPULSE_AT)
        out.rows.append(ReportRow("reassign_impulse_time", spacing or 1.0, _rms(err), _max(err)))
        chirp = ContinuousWT(test_signal("chirp"), wv)
        x = np.linspace(400, 624, probes)
        xi = CHIRP_FREQ * np.linspace(0.85, 1.15, probes)
        prev = None
        for h in (spacing or 2.0) / 2.0 ** np.arange(refine):
            _, dxi = reassignment_map(chirp, params, x, xi, h).agreement()
            ratio = np.nan if prev is None or dxi == 0 else prev / dxi
            out.rows.append(ReportRow("reassign_agreement", float(h), dxi, dxi, float(ratio)))
            prev = dxi
        return out

    if check == "ridge":
        c = wv.center_frequency
        x = np.arange(462.0, 562.0)
        y = c / np.geomspace(0.02, 0.2, 150)
        rs = ridge_points(ContinuousWT(test_signal("chirp"), wv).grid(x, y), center=c)
        union = len(rs.magnitude | rs.phase)
        sym = len(rs.magnitude ^ rs.phase)
        out = ResidualReport()
        out.rows.append(ReportRow("ridge_mismatch", 1.0, 1.0 - rs.jaccard(), float(sym), np.nan))
        out.rows.append(ReportRow("ridge_cells", 1.0, float(len(rs.magnitude)), float(union), np.nan))
        return out

    # gabor
    omega_b = 2 * np.pi * xb
    _, rep = gabor_reassignment_special_case(test_signal("tone"), omega_b, np.linspace(100, 900, probes),
                                             (xb / TONE_FREQ) * np.linspace(0.8, 1.25, probes),
                                             spacing or 0.5)
    F, _ = gabor_reassignment_special_case(test_signal("impulse"), omega_b,
                                           IMPULSE_AT + np.arange(-3.0, 4.0),
                                           np.linspace(50, 200, probes), spacing or 0.5)
    err = np.abs(F.x_hat[F.mask] - IMPULSE_AT)
    rep.rows.append(ReportRow("gabor_impulse_time", spacing or 0.5, _rms(err), _max(err)))
    return rep


def _rms(a):
    return float(np.sqrt(np.mean(a ** 2))) if a.size else 0.0


def _max(a):
    return float(np.max(a)) if a.size else 0.0
