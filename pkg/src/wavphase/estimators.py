"""scikit-learn style wrappers around the functional core.

Signals are rows of a 2-D array ``X`` of shape (n_signals, L). Scalograms are
3-D arrays of shape (n_signals, K + 1, L / a_d) with the lowpass row last.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .dcwt import FilterBankSpec, analyze, build_frame, synthesize
from .kernels import CauchyParams
from .metrics import spectral_convergence
from .phase import MagnitudeGrid
from .pipeline import reconstruct

__all__ = ["WaveletScalogram", "PhaselessReconstructor"]


class _FrameMixin:
    def _build(self, L: int):
        params = CauchyParams(self.alpha, self.beta, self.gamma_re, self.gamma_im)
        fmin = self.fmin if self.fmin is not None else self.sample_rate / 20 * 2.0 ** -6
        fmax = self.fmax if self.fmax is not None else self.sample_rate / 20 * 2.0 ** 3.3
        spec = FilterBankSpec.from_range(L, self.sample_rate, self.n_channels, fmin, fmax,
                                         self.decimation, params)
        self.frame_ = build_frame(spec, params)
        self.n_features_in_ = L
        return self

    def _signals(self, X, reset: bool = False):
        X = check_array(np.atleast_2d(X), dtype=np.float64, ensure_min_features=2)
        if not reset and X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected signals of length {self.n_features_in_}, got {X.shape[1]}")
        return X

    def _magnitudes(self, M):
        check_is_fitted(self, "frame_")
        M = np.asarray(M, dtype=np.float64)
        if M.ndim == 2:
            M = M[None]
        K, N = self.frame_.K, self.frame_.spec.n_hops
        if M.shape[1:] != (K + 1, N):
            raise ValueError(f"scalograms must have shape (n, {K + 1}, {N}), got {M.shape}")
        if np.any(M < 0) or not np.all(np.isfinite(M)):
            raise ValueError("scalograms must be finite and nonnegative")
        fr = self.frame_
        return [MagnitudeGrid(m[:-1], fr.centers, fr.spec.hop_seconds, lowpass=m[-1], spec=fr.spec)
                for m in M]


class WaveletScalogram(_FrameMixin, TransformerMixin, BaseEstimator):
    """Magnitudes of the decimated Cauchy wavelet transform."""

    def __init__(self, alpha=300.0, beta=0.0, gamma_re=1.0, gamma_im=0.0, n_channels=240,
                 decimation=12, fmin=None, fmax=None, sample_rate=1.0):
        self.alpha = alpha
        self.beta = beta
        self.gamma_re = gamma_re
        self.gamma_im = gamma_im
        self.n_channels = n_channels
        self.decimation = decimation
        self.fmin = fmin
        self.fmax = fmax
        self.sample_rate = sample_rate

    def fit(self, X, y=None):
        X = self._signals(X, reset=True)
        return self._build(X.shape[1])

    def transform(self, X):
        check_is_fitted(self, "frame_")
        X = self._signals(X)
        return np.stack([analyze(x, self.frame_).magnitude for x in X])

    def coefficients(self, X):
        """Complex coefficient grids, one per signal."""
        check_is_fitted(self, "frame_")
        return [analyze(x, self.frame_) for x in self._signals(X)]

    def inverse_coefficients(self, grids):
        check_is_fitted(self, "frame_")
        return np.stack([synthesize(g, self.frame_) for g in grids])


class PhaselessReconstructor(_FrameMixin, TransformerMixin, BaseEstimator):
    """Signals from scalogram magnitudes by WPGHI or fast Griffin-Lim.

    ``transform`` maps scalograms to signals; ``score`` reconstructs signals
    from their own scalograms and returns the negated mean spectral
    convergence in dB (higher is better).
    """

    def __init__(self, alpha=30.0, beta=0.0, n_channels=100, decimation=5, fmin=None, fmax=None,
                 sample_rate=1.0, method="wpghi", tol=1e-6, seed=0, max_iter=150, momentum=0.99):
        self.alpha = alpha
        self.beta = beta
        self.n_channels = n_channels
        self.decimation = decimation
        self.fmin = fmin
        self.fmax = fmax
        self.sample_rate = sample_rate
        self.method = method
        self.tol = tol
        self.seed = seed
        self.max_iter = max_iter
        self.momentum = momentum

    # phase retrieval is defined for gamma = 1 only
    gamma_re = 1.0
    gamma_im = 0.0

    def fit(self, X, y=None):
        """Build the frame for signals ``X`` (n, L) or scalograms (n, K + 1, L / a_d)."""
        arr = np.asarray(X)
        if arr.ndim == 3:
            if arr.shape[1] != self.n_channels + 1:
                raise ValueError(f"scalograms must have {self.n_channels + 1} rows, got {arr.shape[1]}")
            return self._build(arr.shape[2] * self.decimation)
        X = self._signals(X, reset=True)
        return self._build(X.shape[1])

    def _run(self, m):
        return reconstruct(m, self.frame_, self.method, self.tol, self.seed, self.max_iter, self.momentum)

    def transform(self, M):
        return np.stack([self._run(m).signal for m in self._magnitudes(M)])

    def score(self, X, y=None):
        check_is_fitted(self, "frame_")
        X = self._signals(X)
        scs = []
        for x in X:
            m = MagnitudeGrid.from_coefficients(analyze(x, self.frame_))
            scs.append(spectral_convergence(self._run(m).coefficients, m))
        return -float(np.mean(scs))
