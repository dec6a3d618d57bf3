"""Frequency responses of generalized Cauchy (Klauder) wavelets.

The mother wavelet is defined on the frequency axis by

    psi_hat(xi) = c * xi**((alpha - 1) / 2) * exp(-2 pi gamma xi) * exp(i beta log xi)

for xi > 0 and zero otherwise, with complex ``gamma = gamma_re + i gamma_im``.
Everything here is evaluated in log space so that orders in the thousands do
not overflow.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

__all__ = [
    "CauchyParams",
    "KernelKind",
    "freq_response",
    "freq_response_derivative",
    "derived_freq_response",
    "center_frequency",
    "log_peak",
    "CauchyWavelet",
    "GaborWavelet",
    "TwoPeakWavelet",
]

TWO_PI = 2.0 * np.pi


class KernelKind(enum.Enum):
    """Which kernel to evaluate: psi, psi' or (T psi)' with T the time weight."""

    PSI = "psi"
    PSI_PRIME = "psi_prime"
    T_PSI_PRIME = "t_psi_prime"


@dataclass(frozen=True)
class CauchyParams:
    """Parameters of a generalized Cauchy wavelet.

    ``alpha`` is the order, ``beta`` the hyperbolic chirp rate and
    ``gamma_re``/``gamma_im`` the real and imaginary part of the exponential
    decay factor. With ``peak_normalized`` the response is divided by its
    peak modulus; the division happens in log space, so it also works when
    the peak itself does not fit into a float.
    """

    alpha: float
    beta: float = 0.0
    gamma_re: float = 1.0
    gamma_im: float = 0.0
    c: complex = 1.0 + 0.0j
    peak_normalized: bool = False
    require_admissible: bool = False

    def __post_init__(self):
        if not np.isfinite(self.alpha) or self.alpha <= -1:
            raise ValueError(f"alpha must be > -1, got {self.alpha}")
        if self.require_admissible and self.alpha <= 1:
            raise ValueError(f"admissible wavelets need alpha > 1, got {self.alpha}")
        if not self.gamma_re > 0:
            raise ValueError(f"gamma_re must be > 0, got {self.gamma_re}")
        if self.c == 0:
            raise ValueError("c must be nonzero")
        if self.peak_normalized and self.alpha <= 1:
            raise ValueError("peak normalization needs an interior peak (alpha > 1)")

    @property
    def gamma(self) -> complex:
        return complex(self.gamma_re, self.gamma_im)

    def normalized(self) -> "CauchyParams":
        """Copy with unit peak modulus."""
        return replace(self, c=1.0 + 0.0j, peak_normalized=True)


def center_frequency(params: CauchyParams) -> float:
    """Location of the peak of ``|psi_hat|``: (alpha - 1) / (4 pi gamma_re)."""
    if params.alpha <= 1:
        raise ValueError("center frequency needs alpha > 1 (peak sits at 0 otherwise)")
    return (params.alpha - 1.0) / (4.0 * np.pi * params.gamma_re)


def log_peak(params: CauchyParams) -> float:
    """Natural log of max |psi_hat| for c = 1."""
    xb = center_frequency(params)
    return 0.5 * (params.alpha - 1.0) * np.log(xb) - TWO_PI * params.gamma_re * xb


def _log_offset(params: CauchyParams) -> tuple[float, float]:
    if params.peak_normalized:
        return -log_peak(params), 0.0
    c = complex(params.c)
    return float(np.log(abs(c))), float(np.angle(c))


def freq_response(params: CauchyParams, xi) -> np.ndarray | complex:
    """Evaluate ``psi_hat`` at real frequencies ``xi``; zero for xi <= 0."""
    xi_arr = np.asarray(xi, dtype=float)
    out = np.zeros(xi_arr.shape, dtype=complex)
    pos = xi_arr > 0
    if np.any(pos):
        x = xi_arr[pos]
        lx = np.log(x)
        logmag_off, phase_off = _log_offset(params)
        logmag = 0.5 * (params.alpha - 1.0) * lx - TWO_PI * params.gamma_re * x + logmag_off
        phase = params.beta * lx - TWO_PI * params.gamma_im * x + phase_off
        out[pos] = np.exp(logmag + 1j * phase)
    if np.ndim(xi) == 0:
        return complex(out)
    return out


def _log_derivative(params: CauchyParams, x: np.ndarray) -> np.ndarray:
    return (params.alpha - 1.0) / (2.0 * x) - TWO_PI * params.gamma + 1j * params.beta / x


def freq_response_derivative(params: CauchyParams, xi) -> np.ndarray | complex:
    """d/dxi of ``psi_hat``; zero for xi <= 0."""
    xi_arr = np.asarray(xi, dtype=float)
    out = np.zeros(xi_arr.shape, dtype=complex)
    pos = xi_arr > 0
    if np.any(pos):
        x = xi_arr[pos]
        out[pos] = freq_response(params, x) * _log_derivative(params, x)
    if np.ndim(xi) == 0:
        return complex(out)
    return out


def derived_freq_response(params: CauchyParams, kind: KernelKind, xi) -> np.ndarray | complex:
    """Frequency response of psi, psi' or (T psi)'.

    With the convention psi_hat(xi) = int psi(t) exp(-2 pi i t xi) dt one has
    (psi')^ = 2 pi i xi psi_hat and ((T psi)')^ = -xi (psi_hat)'.
    """
    xi_arr = np.asarray(xi, dtype=float)
    if kind is KernelKind.PSI:
        out = np.asarray(freq_response(params, xi_arr))
    elif kind is KernelKind.PSI_PRIME:
        out = TWO_PI * 1j * xi_arr * freq_response(params, xi_arr)
    elif kind is KernelKind.T_PSI_PRIME:
        out = -xi_arr * freq_response_derivative(params, xi_arr)
    else:
        raise ValueError(f"unknown kernel kind {kind!r}")
    out = np.where(xi_arr > 0, out, 0.0 + 0.0j)
    if np.ndim(xi) == 0:
        return complex(out)
    return out


# Generic wavelet objects used by the verification tools. They only need a
# frequency response and its derivative; derived kernels follow from those.


class _FrequencyWavelet:
    name = "wavelet"

    def response(self, xi):
        raise NotImplementedError

    def response_derivative(self, xi):
        raise NotImplementedError

    @property
    def center_frequency(self) -> float:
        raise NotImplementedError

    def kernel(self, kind: KernelKind, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if kind is KernelKind.PSI:
            return np.asarray(self.response(xi), dtype=complex)
        if kind is KernelKind.PSI_PRIME:
            return TWO_PI * 1j * xi * self.response(xi)
        if kind is KernelKind.T_PSI_PRIME:
            return -xi * self.response_derivative(xi)
        raise ValueError(f"unknown kernel kind {kind!r}")

    def time_weighted(self, xi) -> np.ndarray:
        """Frequency response of T psi, i.e. (i / 2 pi) (psi_hat)'."""
        return 1j / TWO_PI * np.asarray(self.response_derivative(xi), dtype=complex)


class CauchyWavelet(_FrequencyWavelet):
    name = "cauchy"

    def __init__(self, params: CauchyParams):
        self.params = params

    def response(self, xi):
        return freq_response(self.params, np.asarray(xi, dtype=float))

    def response_derivative(self, xi):
        return freq_response_derivative(self.params, np.asarray(xi, dtype=float))

    def kernel(self, kind, xi):
        return derived_freq_response(self.params, kind, np.asarray(xi, dtype=float))

    @property
    def center_frequency(self) -> float:
        return center_frequency(self.params)


class GaborWavelet(_FrequencyWavelet):
    """psi(t) = exp(-t^2 / 2 + i omega_b t); ``omega_b`` is an angular frequency.

    Its response does not vanish on negative frequencies, it is only small there.
    """

    name = "gabor"

    def __init__(self, omega_b: float):
        self.omega_b = float(omega_b)

    def response(self, xi):
        xi = np.asarray(xi, dtype=float)
        return np.sqrt(TWO_PI) * np.exp(-0.5 * (TWO_PI * xi - self.omega_b) ** 2) + 0j

    def response_derivative(self, xi):
        xi = np.asarray(xi, dtype=float)
        return -TWO_PI * (TWO_PI * xi - self.omega_b) * self.response(xi)

    @property
    def center_frequency(self) -> float:
        return self.omega_b / TWO_PI


class TwoPeakWavelet(_FrequencyWavelet):
    """Sum of two peak-normalized Cauchy responses of different order.

    Not in the Cauchy family, so the phase-magnitude relations fail for it.
    """

    name = "twopeak"

    def __init__(self, first: CauchyParams, second: CauchyParams, weight: float = 1.0):
        self.first = first.normalized()
        self.second = second.normalized()
        self.weight = float(weight)
        grid = np.geomspace(1e-3, 1e4, 200001)
        j = int(np.argmax(np.abs(self.response(grid))))
        lo, hi = grid[max(j - 1, 0)], grid[min(j + 1, grid.size - 1)]
        res = minimize_scalar(lambda x: -abs(self.response(x)), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12 * grid[j]})
        self._center = float(res.x)

    def response(self, xi):
        xi = np.asarray(xi, dtype=float)
        return freq_response(self.first, xi) + self.weight * freq_response(self.second, xi)

    def response_derivative(self, xi):
        xi = np.asarray(xi, dtype=float)
        return freq_response_derivative(self.first, xi) + self.weight * freq_response_derivative(
            self.second, xi
        )

    @property
    def center_frequency(self) -> float:
        return self._center
