"""Discrete continuous wavelet transform (DCWT).

Channels are built by sampling the continuous frequency response of the
mother wavelet at geometrically spaced scales, analysis is a circular
convolution followed by uniform decimation, and a real lowpass channel
covers the frequencies below the lowest wavelet band.

Only real input signals are supported. Wavelet channels live on positive
frequencies; synthesis takes twice the real part of their contribution, so
that each wavelet channel covers +xi and -xi of a real signal.

In the DFT domain the frame operator couples only bins that are congruent
modulo ``N = L / a_d``; it is therefore block diagonal with ``N`` Hermitian
blocks of size ``a_d``. The blocks give an exact dual (``method="direct"``)
and exact frame bounds, and serve as an independent check of the iterative
conjugate-gradient synthesis.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .kernels import CauchyParams, center_frequency, freq_response

__all__ = [
    "FilterBankSpec",
    "WaveletFrame",
    "CoefficientGrid",
    "SynthesisError",
    "FrameError",
    "build_frame",
    "analyze",
    "synthesize",
    "frame_bound_ratio",
    "coverage",
]

log = logging.getLogger(__name__)

# filter entries below this fraction of the peak are dropped; keeps the
# operator sparse without a measurable effect on any result
_TRUNCATION = 1e-18


class FrameError(ValueError):
    """The requested filter bank is invalid or not invertible."""


class SynthesisError(RuntimeError):
    """Conjugate gradients did not reach the requested tolerance."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class FilterBankSpec:
    """Discretization of the transform.

    L: signal length, xi_s: sampling rate (Hz), K: number of wavelet channels,
    B: channels per octave, y_m: minimum scale, a_d: decimation step.
    Channel k has scale 2**(k / B) * y_m and center xi_b / scale.
    """

    L: int
    xi_s: float
    K: int
    B: float
    y_m: float
    a_d: int

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 2:
            raise FrameError(f"L must be an integer >= 2, got {self.L}")
        if int(self.K) != self.K or self.K < 1:
            raise FrameError(f"K must be a positive integer, got {self.K}")
        if int(self.a_d) != self.a_d or self.a_d < 1:
            raise FrameError(f"a_d must be a positive integer, got {self.a_d}")
        if self.L % self.a_d:
            raise FrameError(f"a_d={self.a_d} does not divide L={self.L}")
        if not (self.xi_s > 0 and self.B > 0 and self.y_m > 0):
            raise FrameError("xi_s, B and y_m must be positive")

    @property
    def n_hops(self) -> int:
        return self.L // self.a_d

    @property
    def redundancy(self) -> float:
        """K / a_d, the customary redundancy figure."""
        return self.K / self.a_d

    @property
    def hop_seconds(self) -> float:
        return self.a_d / self.xi_s

    def scales(self) -> np.ndarray:
        return 2.0 ** (np.arange(self.K) / self.B) * self.y_m

    def centers(self, params: CauchyParams) -> np.ndarray:
        return center_frequency(params) / self.scales()

    @classmethod
    def from_range(cls, L, xi_s, K, fmin, fmax, a_d, params: CauchyParams) -> "FilterBankSpec":
        """Place K channel centers geometrically between fmin and fmax (Hz)."""
        if not 0 < fmin <= fmax:
            raise FrameError(f"need 0 < fmin <= fmax, got {fmin}, {fmax}")
        if K == 1:
            B = 1.0
        else:
            if fmin == fmax:
                raise FrameError("fmin == fmax needs K == 1")
            B = (K - 1) / math.log2(fmax / fmin)
        y_m = center_frequency(params) / fmax
        return cls(L=int(L), xi_s=float(xi_s), K=int(K), B=float(B), y_m=float(y_m), a_d=int(a_d))


@dataclass(frozen=True, eq=False)
class WaveletFrame:
    spec: FilterBankSpec
    params: CauchyParams
    filters: np.ndarray  # (K, L) complex, sampled responses
    lowpass: np.ndarray  # (L,) real lowpass response
    centers: np.ndarray  # (K,) Hz, decreasing
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def K(self) -> int:
        return self.spec.K

    @property
    def L(self) -> int:
        return self.spec.L

    @property
    def a_d(self) -> int:
        return self.spec.a_d

    def extended_filters(self) -> np.ndarray:
        """(2K + 1, L) responses acting on the complex DFT of a real signal.

        Rows are the wavelet filters, their conjugate mirrors and the lowpass.
        """
        F = self.filters
        mirror = np.conj(F[:, (-np.arange(self.L)) % self.L])
        return np.vstack([F, mirror, self.lowpass[None, :].astype(complex)])

    def _sparse(self):
        """Nonzero filter entries as flat (bin, value, folded target) arrays."""
        if "sparse" not in self._cache:
            k, j = np.nonzero(self.filters)
            vals = self.filters[k, j]
            fold = k * self.spec.n_hops + j % self.spec.n_hops
            self._cache["sparse"] = (j, vals, fold)
        return self._cache["sparse"]

    def frame_blocks(self) -> np.ndarray:
        """(N, a_d, a_d) blocks of the frame operator in the DFT domain.

        Block r acts on bins r, r + N, ..., r + (a_d - 1) N.
        """
        if "blocks" not in self._cache:
            a, N = self.a_d, self.spec.n_hops
            blocks = np.zeros((N, a, a), dtype=complex)
            E = self.extended_filters()
            for start in range(0, E.shape[0], 64):
                chunk = E[start:start + 64].reshape(-1, a, N).transpose(2, 1, 0)  # (N, a, e)
                blocks += chunk @ np.conj(chunk).transpose(0, 2, 1)
            blocks /= a
            self._cache["blocks"] = blocks
        return self._cache["blocks"]

    def frame_diagonal(self) -> np.ndarray:
        """Diagonal of the frame operator in the DFT domain, length L."""
        if "diag" not in self._cache:
            E = self.extended_filters()
            self._cache["diag"] = np.sum(np.abs(E) ** 2, axis=0) / self.a_d
        return self._cache["diag"]

    def _block_inverse(self) -> np.ndarray:
        if "block_inv" not in self._cache:
            self._cache["block_inv"] = np.linalg.inv(self.frame_blocks())
        return self._cache["block_inv"]


@dataclass(frozen=True, eq=False)
class CoefficientGrid:
    """Complex wavelet coefficients (K x N) plus the real lowpass row (N,)."""

    wavelet: np.ndarray
    lowpass: np.ndarray
    spec: FilterBankSpec
    centers: np.ndarray

    def __post_init__(self):
        K, N = self.spec.K, self.spec.n_hops
        if self.wavelet.shape != (K, N):
            raise ValueError(f"wavelet block must be {(K, N)}, got {self.wavelet.shape}")
        if self.lowpass.shape != (N,):
            raise ValueError(f"lowpass row must have length {N}, got {self.lowpass.shape}")

    @property
    def magnitude(self) -> np.ndarray:
        """(K + 1, N) magnitudes, lowpass last."""
        return np.vstack([np.abs(self.wavelet), np.abs(self.lowpass)[None, :]])

    def with_values(self, wavelet, lowpass) -> "CoefficientGrid":
        return CoefficientGrid(np.asarray(wavelet, dtype=complex), np.asarray(lowpass, dtype=float),
                               self.spec, self.centers)


def _plateau(freqs: np.ndarray, inner: float, outer: float) -> np.ndarray:
    """1 for |f| <= inner, raised-cosine rolloff to 0 at outer."""
    f = np.abs(freqs)
    p = np.zeros_like(f)
    p[f <= inner] = 1.0
    ramp = (f > inner) & (f < outer)
    p[ramp] = 0.5 * (1.0 + np.cos(np.pi * (f[ramp] - inner) / (outer - inner)))
    return p


def lowpass_envelope(filters: np.ndarray) -> np.ndarray:
    """sqrt(max(Psi) - Psi) with Psi the symmetrized wavelet coverage."""
    L = filters.shape[1]
    psi = np.sum(np.abs(filters) ** 2, axis=0)
    psi = psi + psi[(-np.arange(L)) % L]
    return np.sqrt(np.maximum(psi.max() - psi, 0.0))


def coverage(frame: WaveletFrame) -> np.ndarray:
    """Sum of wavelet responses squared plus |a_d * lowpass|^2 per DFT bin."""
    F = frame.filters
    L = frame.L
    psi = np.sum(np.abs(F) ** 2, axis=0)
    psi = psi + psi[(-np.arange(L)) % L]
    return psi + (frame.a_d * frame.lowpass) ** 2


def build_frame(spec: FilterBankSpec, params: CauchyParams, normalize: bool = True) -> WaveletFrame:
    """Sample the wavelet at every channel scale and add the lowpass channel.

    ``normalize`` rescales the wavelet to unit peak modulus, which keeps
    coefficient magnitudes of order one; log-derivatives do not depend on it.
    """
    if params.alpha <= 1:
        raise FrameError("the filter bank needs an admissible wavelet (alpha > 1)")
    if normalize and not params.peak_normalized:
        params = params.normalized()
    L, K = spec.L, spec.K
    centers = spec.centers(params)
    if centers[0] >= spec.xi_s / 2:
        raise FrameError(
            f"highest center frequency {centers[0]:.6g} Hz is not below Nyquist {spec.xi_s / 2:.6g} Hz"
        )
    freqs = np.fft.fftfreq(L, d=1.0 / spec.xi_s)
    if L % 2 == 0:
        # the Nyquist bin counts as +xi_s/2, otherwise no channel would reach it
        freqs[L // 2] = spec.xi_s / 2
    scales = spec.scales()
    filters = freq_response(params, scales[:, None] * freqs[None, :])
    peak = np.abs(filters).max()
    filters[np.abs(filters) < _TRUNCATION * peak] = 0.0

    inner = centers[-1]
    outer = centers[-2] if K > 1 else 2.0 * centers[-1]
    plateau = _plateau(freqs, inner, outer)
    lowpass = plateau * lowpass_envelope(filters) / spec.a_d

    frame = WaveletFrame(spec=spec, params=params, filters=filters, lowpass=lowpass, centers=centers)
    cov = coverage(frame)
    if np.min(cov) <= 0 or not np.all(np.isfinite(cov)):
        raise FrameError("coverage vanishes on [0, xi_s/2]; the frame is not invertible")
    return frame


def _analyze_dft(S: np.ndarray, frame: WaveletFrame) -> tuple[np.ndarray, np.ndarray]:
    a, N, K = frame.a_d, frame.spec.n_hops, frame.K
    cols, vals, fold = frame._sparse()
    X = S[cols] * np.conj(vals)
    folded = (np.bincount(fold, X.real, K * N) + 1j * np.bincount(fold, X.imag, K * N)).reshape(K, N)
    wav = np.fft.ifft(folded, axis=1) / a
    Xl = (S * frame.lowpass).reshape(a, N).sum(axis=0)
    low = np.fft.ifft(Xl).real / a
    return wav, low


def analyze(signal, frame: WaveletFrame) -> CoefficientGrid:
    """Inner products of the signal with every translated channel atom."""
    s = np.asarray(signal, dtype=float)
    if s.ndim != 1 or s.shape[0] != frame.L:
        raise ValueError(f"signal must be 1-D of length {frame.L}, got shape {s.shape}")
    wav, low = _analyze_dft(np.fft.fft(s), frame)
    return CoefficientGrid(wav, low, frame.spec, frame.centers)


def _synthesis_dft(wavelet: np.ndarray, lowpass: np.ndarray, frame: WaveletFrame) -> np.ndarray:
    """DFT of the adjoint applied to coefficients (2 Re on wavelet channels)."""
    a, L = frame.a_d, frame.L
    cols, vals, fold = frame._sparse()
    C = np.fft.fft(wavelet, axis=1).reshape(-1)
    contrib = vals * C[fold]
    Y = np.bincount(cols, contrib.real, L) + 1j * np.bincount(cols, contrib.imag, L)
    Y_low = np.tile(np.fft.fft(lowpass), a) * frame.lowpass
    idx = (-np.arange(L)) % L
    return Y + np.conj(Y[idx]) + Y_low


def _apply_frame_operator(S: np.ndarray, frame: WaveletFrame) -> np.ndarray:
    wav, low = _analyze_dft(S, frame)
    return _synthesis_dft(wav, low, frame)


def _solve_blocks(R: np.ndarray, frame: WaveletFrame) -> np.ndarray:
    a, N = frame.a_d, frame.spec.n_hops
    inv = frame._block_inverse()
    Rb = R.reshape(a, N).T[:, :, None]  # (N, a, 1)
    return (inv @ Rb)[:, :, 0].T.reshape(-1)


def synthesize(coeffs: CoefficientGrid, frame: WaveletFrame, cg_tol: float = 1e-12,
               cg_maxit: int = 500, method: str = "cg", x0=None, return_info: bool = False):
    """Least-squares signal for the given coefficients.

    ``method="cg"`` runs preconditioned conjugate gradients on the normal
    equations; the preconditioner is the inverse diagonal of the frame
    operator in the DFT domain. ``method="direct"`` applies the exact
    inverse block by block.
    """
    if coeffs.wavelet.shape != (frame.K, frame.spec.n_hops):
        raise ValueError("coefficient grid does not match the frame")
    L = frame.L
    R = _synthesis_dft(coeffs.wavelet, np.asarray(coeffs.lowpass, dtype=float), frame)
    if method == "direct":
        s = np.fft.ifft(_solve_blocks(R, frame)).real
        return (s, {"iterations": 0, "residual": 0.0}) if return_info else s
    if method != "cg":
        raise ValueError(f"unknown synthesis method {method!r}")

    rhs = np.fft.ifft(R).real
    s, info = _pcg(rhs, frame, cg_tol, cg_maxit, x0)
    return (s, info) if return_info else s


def _pcg(rhs: np.ndarray, frame: WaveletFrame, tol: float, maxit: int, x0=None):
    L = frame.L
    rhs_norm = np.linalg.norm(rhs)
    if rhs_norm == 0:
        return np.zeros(L), {"iterations": 0, "residual": 0.0}
    precond = 1.0 / frame.frame_diagonal()

    def apply(v):
        return np.fft.ifft(_apply_frame_operator(np.fft.fft(v), frame)).real

    def prec(v):
        return np.fft.ifft(np.fft.fft(v) * precond).real

    if x0 is None:
        x = np.zeros(L)
        r = np.asarray(rhs, dtype=float).copy()
    else:
        x = np.asarray(x0, dtype=float).copy()
        r = rhs - apply(x)
    z = prec(r)
    p = z.copy()
    rz = r @ z
    res = np.linalg.norm(r) / rhs_norm
    it = 0
    while res > tol and it < maxit:
        Ap = apply(p)
        step = rz / (p @ Ap)
        x += step * p
        r -= step * Ap
        res = np.linalg.norm(r) / rhs_norm
        it += 1
        if res <= tol:
            break
        z = prec(r)
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    if res > tol:
        err = SynthesisError(
            f"conjugate gradients stopped after {it} iterations at relative residual {res:.3e}",
            residual=res, iterations=it)
        err.signal = x
        raise err
    log.debug("cg converged in %d iterations (residual %.2e)", it, res)
    return x, {"iterations": it, "residual": res}


def _lanczos_top(apply, n: int, maxit: int, tol: float, seed: int = 0) -> float:
    """Largest eigenvalue of a symmetric operator from Lanczos Ritz values.

    Full reorthogonalization; stops when the top Ritz value changes by less
    than ``tol`` relative. Converges in value even for clustered spectra.
    """
    rng = np.random.default_rng(seed)
    m = min(maxit, n)
    Q = np.zeros((m + 1, n))
    alpha, beta = np.zeros(m), np.zeros(m)
    q = rng.standard_normal(n)
    Q[0] = q / np.linalg.norm(q)
    prev = None
    for j in range(m):
        w = apply(Q[j])
        alpha[j] = Q[j] @ w
        w -= Q[: j + 1].T @ (Q[: j + 1] @ w)
        w -= Q[: j + 1].T @ (Q[: j + 1] @ w)
        beta[j] = np.linalg.norm(w)
        top = float(eigvalsh_tridiagonal(alpha[: j + 1], beta[:j], select="i",
                                         select_range=(j, j))[0])
        if prev is not None and abs(top - prev) <= tol * abs(top):
            return top
        if beta[j] <= tol * abs(top):
            return top
        prev = top
        Q[j + 1] = w / beta[j]
    return top


def frame_bound_ratio(frame: WaveletFrame, iters: int = 300, method: str = "lanczos",
                      tol: float = 1e-10) -> float:
    """Ratio of upper to lower frame bound.

    ``method="lanczos"`` estimates the extreme eigenvalues of the frame
    operator from its action alone (largest directly, smallest as the
    inverse of the largest eigenvalue of the inverse operator, applied
    through conjugate gradients). ``method="blocks"`` diagonalizes the
    DFT-domain blocks exactly.
    """
    if method == "blocks":
        ev = np.linalg.eigvalsh(frame.frame_blocks())
        lo, hi = ev.min(), ev.max()
        if lo <= 0:
            raise FrameError("frame operator is singular")
        return float(hi / lo)
    if method != "lanczos":
        raise ValueError(f"unknown method {method!r}")
    L = frame.L

    def apply(x):
        return np.fft.ifft(_apply_frame_operator(np.fft.fft(x), frame)).real

    def apply_inv(x):
        try:
            return _pcg(x, frame, tol * 1e-2, 10 * iters)[0]
        except SynthesisError as err:
            raise FrameError(f"inverse iteration stalled: {err}") from err

    hi = _lanczos_top(apply, L, iters, tol)
    inv_top = _lanczos_top(apply_inv, L, iters, tol, seed=1)
    if not np.isfinite(inv_top) or inv_top <= 0:
        raise FrameError("frame operator is singular")
    return float(hi * inv_top)
