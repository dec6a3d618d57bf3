"""Numerical checks of the continuous wavelet transform identities.

A sampled signal of length L is read as a trigonometric polynomial, so its
continuous wavelet transform can be evaluated exactly at any (x, y):

    W(x, y) = sqrt(y) * sum_j s_hat[j] * conj(psi_hat(y xi_j)) * exp(2 pi i x xi_j)

with s_hat = fft(s) / L. Finite differences of such exact fields are
compared against closed-form derivative identities; halving the spacing
shows the expected convergence order.

Every check accepts a *field*, i.e. any callable ``f(x, y) -> (len(y), len(x))``
complex array. :class:`ContinuousWT` is the usual one; :func:`analytic_field`
builds synthetic fields from holomorphic functions.

Units: x and y in seconds, xi in Hz, phases in radians. The angular center
frequency of the wavelet is ``omega_b = 2 pi xi_b``.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .kernels import (
    CauchyParams,
    CauchyWavelet,
    GaborWavelet,
    KernelKind,
    center_frequency,
)

__all__ = [
    "Convention",
    "DenseWtGrid",
    "ContinuousWT",
    "analytic_field",
    "ReportRow",
    "ResidualReport",
    "ReassignmentField",
    "RidgeSets",
    "wt_derivative_check",
    "cr_targets",
    "cr_residual",
    "laplacian_targets",
    "laplacian_check",
    "reassignment_map",
    "reassign_from_magnitude",
    "ridge_points",
    "gabor_reassignment_special_case",
    "write_report_csv",
    "REPORT_COLUMNS",
    "MAGNITUDE_FLOOR",
]

TWO_PI = 2.0 * np.pi
MAGNITUDE_FLOOR = 1e-3
REPORT_COLUMNS = ["check", "spacing", "rms_residual", "max_residual", "refinement_ratio"]

Field = Callable[[np.ndarray, np.ndarray], np.ndarray]


class Convention(enum.Enum):
    SCALE_UNITARY = "scale"  # W(x, y), unitary dilation
    FREQ = "freq"  # W~(x, xi) = sqrt(xi / xi_b) W(x, xi_b / xi)


@dataclass(frozen=True, eq=False)
class DenseWtGrid:
    """Transform values on a lattice: rows follow ``axis`` (scale or frequency), columns ``x``."""

    values: np.ndarray
    x: np.ndarray
    axis: np.ndarray
    convention: Convention
    center: float  # xi_b in Hz, links scale and frequency

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        x = np.asarray(self.x, dtype=float)
        axis = np.asarray(self.axis, dtype=float)
        if values.shape != (axis.size, x.size):
            raise ValueError("values must have shape (len(axis), len(x))")
        if x.size > 1 and np.any(np.diff(x) <= 0):
            raise ValueError("x must be strictly increasing")
        if np.any(axis <= 0):
            raise ValueError("scales and frequencies must be positive")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "axis", axis)

    @property
    def spacing(self) -> float:
        return float(self.x[1] - self.x[0]) if self.x.size > 1 else math.inf

    @classmethod
    def from_dcwt(cls, grid) -> "DenseWtGrid":
        """Undecimated DCWT coefficients are samples of W~ at the channel centers."""
        spec = grid.spec
        if spec.a_d != 1:
            raise ValueError("dense grids need a_d = 1")
        x = np.arange(spec.L) / spec.xi_s
        # centers decrease with k; keep that order, axis need not be sorted
        return cls(grid.wavelet, x, grid.centers, Convention.FREQ, grid.centers[0] * spec.y_m)

    def to_scale(self) -> "DenseWtGrid":
        """Same data in the scale convention with increasing scale."""
        if self.convention is Convention.SCALE_UNITARY:
            order = np.argsort(self.axis)
            return DenseWtGrid(self.values[order], self.x, self.axis[order], self.convention, self.center)
        y = self.center / self.axis
        order = np.argsort(y)
        W = np.sqrt(y)[:, None] * self.values
        return DenseWtGrid(W[order], self.x, y[order], Convention.SCALE_UNITARY, self.center)


class ContinuousWT:
    """Exact wavelet transform of a sampled (periodic) signal.

    ``wavelet`` is CauchyParams or any object from :mod:`kernels` with
    ``response``/``kernel``/``time_weighted`` methods.
    """

    def __init__(self, signal, wavelet, xi_s: float = 1.0):
        s = np.asarray(signal, dtype=complex)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("signal must be a 1-D array with at least 2 samples")
        if isinstance(wavelet, CauchyParams):
            wavelet = CauchyWavelet(wavelet)
        self.wavelet = wavelet
        self.xi_s = float(xi_s)
        L = s.size
        s_hat = np.fft.fft(s) / L
        freqs = np.fft.fftfreq(L, d=1.0 / xi_s)
        keep = s_hat != 0
        self._s_hat = s_hat[keep]
        self._freqs = freqs[keep]

    @property
    def center(self) -> float:
        return self.wavelet.center_frequency

    def _kernel(self, kind, xi):
        if kind == "t_psi":
            return self.wavelet.time_weighted(xi)
        return self.wavelet.kernel(kind, xi)

    def __call__(self, x, y, kind=KernelKind.PSI) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if np.any(y <= 0):
            raise ValueError("scales must be positive")
        if self._s_hat.size == 0:
            return np.zeros((y.size, x.size), dtype=complex)
        resp = self._kernel(kind, y[:, None] * self._freqs[None, :])
        coeff = self._s_hat[None, :] * np.conj(resp)
        phase = np.exp(TWO_PI * 1j * self._freqs[:, None] * x[None, :])
        return np.sqrt(y)[:, None] * (coeff @ phase)

    def freq(self, x, xi, kind=KernelKind.PSI) -> np.ndarray:
        """Frequency convention W~(x, xi)."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        y = self.center / xi
        return self(x, y, kind) / np.sqrt(y)[:, None]

    def grid(self, x, y) -> DenseWtGrid:
        return DenseWtGrid(self(x, y), x, y, Convention.SCALE_UNITARY, self.center)

    def freq_grid(self, x, xi) -> DenseWtGrid:
        return DenseWtGrid(self.freq(x, xi), x, xi, Convention.FREQ, self.center)

    def log_gradient(self, x, y) -> tuple[np.ndarray, np.ndarray]:
        """Exact d/dx and d/dy of log W: real parts are log-magnitude, imaginary parts phase."""
        W = self(x, y)
        yy = np.atleast_1d(np.asarray(y, dtype=float))[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            dx = -self(x, y, KernelKind.PSI_PRIME) / (yy * W)
            dy = 1.0 / (2.0 * yy) - self(x, y, KernelKind.T_PSI_PRIME) / (yy * W)
        return dx, dy


def analytic_field(h: Callable[[np.ndarray], np.ndarray], params: CauchyParams) -> Field:
    """Field whose analytic companion is ``h``.

    Inverts y**(-alpha/2) exp(i beta log y) W(x - (Im g / Re g) y, y / Re g) = h(x + i y).
    """
    a, b, gr, gi = params.alpha, params.beta, params.gamma_re, params.gamma_im

    def f(x, y):
        x = np.atleast_1d(np.asarray(x, dtype=float))[None, :]
        y = np.atleast_1d(np.asarray(y, dtype=float))[:, None]
        yy = gr * y
        return yy ** (a / 2) * np.exp(-1j * b * np.log(yy)) * h(x + gi * y + 1j * yy)

    return f


# --------------------------------------------------------------------------
# reports


@dataclass
class ReportRow:
    check: str
    spacing: float
    rms_residual: float
    max_residual: float
    refinement_ratio: float = math.nan


@dataclass
class ResidualReport:
    rows: list[ReportRow] = field(default_factory=list)

    def by_check(self, check: str) -> list[ReportRow]:
        return [r for r in self.rows if r.check == check]

    def rms(self, check: str) -> np.ndarray:
        return np.array([r.rms_residual for r in self.by_check(check)])

    def ratios(self, check: str) -> np.ndarray:
        return np.array([r.refinement_ratio for r in self.by_check(check)][1:])

    def extend(self, other: "ResidualReport") -> "ResidualReport":
        self.rows.extend(other.rows)
        return self


def _add_rows(report: ResidualReport, check: str, spacings, rms, mx) -> None:
    prev = None
    for h, r, m in zip(spacings, rms, mx):
        ratio = math.nan if prev is None or r == 0 else prev / r
        report.rows.append(ReportRow(check, float(h), float(r), float(m), float(ratio)))
        prev = r


def write_report_csv(report: ResidualReport, path=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in report.rows:
        w.writerow([r.check] + [repr(float(v)) for v in (r.spacing, r.rms_residual, r.max_residual,
                                                           r.refinement_ratio)])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


# --------------------------------------------------------------------------
# finite-difference helpers on fields


def _axes(x, y):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.size < 3 or y.size < 3:
        raise ValueError("need at least 3 probe points per axis")
    return x, y


def _mask(W: np.ndarray) -> np.ndarray:
    mag = np.abs(W)
    peak = mag.max() if mag.size else 0.0
    if peak == 0:
        return np.zeros(W.shape, dtype=bool)
    return mag >= MAGNITUDE_FLOOR * peak


def _spacings(h0: float, refine: int) -> np.ndarray:
    if refine < 1:
        raise ValueError("refine must be >= 1")
    return h0 / 2.0 ** np.arange(refine)


def _rel_errors(err, ref, mask=None):
    if mask is not None:
        err, ref = err[mask], ref[mask]
    if err.size == 0:
        return 0.0, 0.0
    rms_ref = np.sqrt(np.mean(np.abs(ref) ** 2))
    max_ref = np.max(np.abs(ref))
    rms = np.sqrt(np.mean(np.abs(err) ** 2))
    mx = np.max(np.abs(err))
    return (rms / rms_ref if rms_ref > 0 else rms), (mx / max_ref if max_ref > 0 else mx)


def _log_diffs(f: Field, x, y, hx, hy):
    """Centered first differences of log|W| and of the phase (principal value)."""
    W = f(x, y)
    Wxp, Wxm = f(x + hx, y), f(x - hx, y)
    Wyp, Wym = f(x, y + hy), f(x, y - hy)
    with np.errstate(divide="ignore", invalid="ignore"):
        lx = (np.log(np.abs(Wxp)) - np.log(np.abs(Wxm))) / (2 * hx)
        ly = (np.log(np.abs(Wyp)) - np.log(np.abs(Wym))) / (2 * hy)
        px = np.angle(Wxp / Wxm) / (2 * hx)
        py = np.angle(Wyp / Wym) / (2 * hy)
    return W, lx, ly, px, py


# --------------------------------------------------------------------------
# first-order derivative identities


def wt_derivative_check(signal, params, x, y, hx: float, hy: float | None = None,
                        refine: int = 4, xi_s: float = 1.0) -> ResidualReport:
    """Closed-form dW/dx, dW/dy against centered differences of W.

    dW/dx = -W_{psi'} / y and dW/dy = W / (2y) - W_{(T psi)'} / y. Residuals
    are relative to the size of the closed-form derivative over the probes.
    """
    x, y = _axes(x, y)
    hy = hx if hy is None else hy
    cwt = signal if isinstance(signal, ContinuousWT) else ContinuousWT(signal, params, xi_s)
    yy = y[:, None]
    W = cwt(x, y)
    dx_exact = -cwt(x, y, KernelKind.PSI_PRIME) / yy
    dy_exact = W / (2 * yy) - cwt(x, y, KernelKind.T_PSI_PRIME) / yy
    spac = _spacings(hx, refine)
    out = ResidualReport()
    res = {"wt_dx": ([], []), "wt_dy": ([], [])}
    for s in spac:
        ky = s * hy / hx
        fdx = (cwt(x + s, y) - cwt(x - s, y)) / (2 * s)
        fdy = (cwt(x, y + ky) - cwt(x, y - ky)) / (2 * ky)
        for name, fd, ex in (("wt_dx", fdx, dx_exact), ("wt_dy", fdy, dy_exact)):
            r, m = _rel_errors(fd - ex, ex)
            res[name][0].append(r)
            res[name][1].append(m)
    for name, (r, m) in res.items():
        _add_rows(out, name, spac, r, m)
    return out


# --------------------------------------------------------------------------
# phase-magnitude relations


def cr_targets(params: CauchyParams, y, dlogm_dx, dlogm_dy, literal: bool = False):
    """Phase derivatives predicted from log-magnitude derivatives.

    For general gamma the y-relation carries -beta / y. ``literal=True``
    uses -beta / (y Re gamma) instead, which agrees only when Re gamma = 1
    or beta = 0.
    """
    a, b = params.alpha, params.beta
    gr, gi = params.gamma_re, params.gamma_im
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = y[:, None]
    dphi_dx = a / (2 * y * gr) - dlogm_dy / gr + gi * dlogm_dx / gr
    beta_term = b / (y * gr) if literal else b / y
    dphi_dy = (a * gi / (2 * y * gr) - beta_term + (gr * gr + gi * gi) * dlogm_dx / gr
               - gi * dlogm_dy / gr)
    return dphi_dx, dphi_dy


def cr_residual(f: Field, params: CauchyParams, x, y, hx: float, hy: float | None = None,
                refine: int = 3, literal: bool = False, check: str = "cr") -> ResidualReport:
    """Residual of the phase-magnitude relations on a field.

    Phase and log-magnitude derivatives are centered differences; the
    residual is the norm of (measured - predicted) phase gradient relative
    to the RMS phase gradient, over cells above the magnitude floor.
    """
    x, y = _axes(x, y)
    hy = hx if hy is None else hy
    spac = _spacings(hx, refine)
    rms, mx = [], []
    for s in spac:
        W, lx, ly, px, py = _log_diffs(f, x, y, s, s * hy / hx)
        tx, ty = cr_targets(params, y, lx, ly, literal)
        mask = _mask(W)
        if not mask.any():
            rms.append(0.0)
            mx.append(0.0)
            continue
        err = np.hypot(px - tx, py - ty)[mask]
        scale = np.sqrt(np.mean((px ** 2 + py ** 2)[mask]))
        scale = scale if scale > 0 else 1.0
        rms.append(np.sqrt(np.mean(err ** 2)) / scale)
        mx.append(np.max(err) / scale)
    out = ResidualReport()
    _add_rows(out, check, spac, rms, mx)
    return out


def laplacian_targets(params: CauchyParams, y):
    """(-alpha / (2 y^2), beta / y^2) for gamma = 1."""
    y = np.asarray(y, dtype=float)
    return -params.alpha / (2 * y ** 2), params.beta / y ** 2


def laplacian_check(f: Field, params: CauchyParams, x, y, hx: float, hy: float | None = None,
                    refine: int = 3) -> ResidualReport:
    """Second-order identities for log M and the phase (gamma = 1).

    ``laplacian_mag`` is relative to the RMS of alpha / (2 y^2);
    ``laplacian_phase`` is reported in absolute units (rad / s^2).
    """
    if params.gamma_re != 1 or params.gamma_im != 0:
        raise ValueError("the Laplacian identities hold for gamma = 1")
    x, y = _axes(x, y)
    hy = hx if hy is None else hy
    spac = _spacings(hx, refine)
    mag_t, ph_t = laplacian_targets(params, y[:, None])
    ref = np.sqrt(np.mean(mag_t ** 2))
    res = {"laplacian_mag": ([], []), "laplacian_phase": ([], [])}
    for s in spac:
        ky = s * hy / hx
        W = f(x, y)
        Wxp, Wxm, Wyp, Wym = f(x + s, y), f(x - s, y), f(x, y + ky), f(x, y - ky)
        mask = _mask(W)
        with np.errstate(divide="ignore", invalid="ignore"):
            lg = np.log(np.abs(W))
            lap_m = ((np.log(np.abs(Wxp)) - 2 * lg + np.log(np.abs(Wxm))) / s ** 2
                     + (np.log(np.abs(Wyp)) - 2 * lg + np.log(np.abs(Wym))) / ky ** 2)
            lap_p = ((np.angle(Wxp / W) - np.angle(W / Wxm)) / s ** 2
                     + (np.angle(Wyp / W) - np.angle(W / Wym)) / ky ** 2)
        for name, err, scale in (("laplacian_mag", lap_m - mag_t, ref),
                                 ("laplacian_phase", lap_p - ph_t, 1.0)):
            e = err[mask] if mask.any() else np.zeros(1)
            res[name][0].append(np.sqrt(np.mean(e ** 2)) / scale)
            res[name][1].append(np.max(np.abs(e)) / scale)
    out = ResidualReport()
    for name, (r, m) in res.items():
        _add_rows(out, name, spac, r, m)
    return out


# --------------------------------------------------------------------------
# reassignment and ridges


@dataclass(frozen=True, eq=False)
class ReassignmentField:
    """Reassigned time (s) and frequency (Hz) per lattice cell (rows: frequency)."""

    x_hat: np.ndarray
    xi_hat: np.ndarray
    mask: np.ndarray
    x_hat_alt: np.ndarray | None = None
    xi_hat_alt: np.ndarray | None = None

    def agreement(self) -> tuple[float, float]:
        """RMS |dx| (s) and RMS relative |dxi| between the two variants on masked cells."""
        if self.x_hat_alt is None or not self.mask.any():
            return 0.0, 0.0
        m = self.mask
        dx = np.sqrt(np.mean((self.x_hat[m] - self.x_hat_alt[m]) ** 2))
        dxi = np.sqrt(np.mean(((self.xi_hat[m] - self.xi_hat_alt[m]) / self.xi_hat[m]) ** 2))
        return float(dx), float(dxi)


def reassignment_map(cwt: ContinuousWT, params: CauchyParams, x, xi, hx: float,
                     hxi=None) -> ReassignmentField:
    """Phase-gradient reassignment on a (frequency, time) lattice.

    Primary variant: quotient form with W_{psi'} and W_{(T psi)'}, i.e.
    x + y^2 dphi/dy / omega_b and xi = dphi/dx / (2 pi). Alternative
    variant: the same map with the phase gradient replaced by
    log-magnitude differences through the phase-magnitude relations
    (Cauchy wavelets with gamma = 1 only). The frequency step ``hxi``
    defaults to hx * xi^2 / xi_b, the same relative step as hx / y.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    xb = center_frequency(params)
    omega_b = TWO_PI * xb
    y = xb / xi
    W = cwt(x, y)
    mask = _mask(W)
    with np.errstate(divide="ignore", invalid="ignore"):
        dphi_dx = -np.imag(cwt(x, y, KernelKind.PSI_PRIME) / W) / y[:, None]
        dphi_dy = -np.imag(cwt(x, y, KernelKind.T_PSI_PRIME) / W) / y[:, None]
    x_hat = x[None, :] + (y ** 2)[:, None] * dphi_dy / omega_b
    xi_hat = dphi_dx / TWO_PI

    x_alt = xi_alt = None
    if params.gamma_re == 1 and params.gamma_im == 0:
        # frequency step matched to the time step through the local scale
        hxi = hx * xi ** 2 / xb if hxi is None else np.broadcast_to(hxi, xi.shape)
        g = lambda xx, ff: np.log(np.abs(cwt.freq(xx, ff)))  # noqa: E731
        with np.errstate(divide="ignore", invalid="ignore"):
            dl_dx = (g(x + hx, xi) - g(x - hx, xi)) / (2 * hx)
            dl_dxi = (g(x, xi + hxi) - g(x, xi - hxi)) / (2 * hxi)[:, None]
        x_alt, xi_alt = _magnitude_reassignment(params, x, xi, dl_dx, dl_dxi)
    mask &= np.isfinite(x_hat) & np.isfinite(xi_hat)
    return ReassignmentField(x_hat, xi_hat, mask, x_alt, xi_alt)


def _magnitude_reassignment(params, x, xi, dl_dx, dl_dxi):
    a1 = params.alpha - 1.0
    xx = xi[:, None]
    dphi_dx = 4 * np.pi * xx ** 2 / a1 * dl_dxi + TWO_PI * xx
    dphi_dxi = -a1 / (4 * np.pi * xx ** 2) * dl_dx + params.beta / xx
    return x[None, :] - dphi_dxi / TWO_PI, dphi_dx / TWO_PI


def reassign_from_magnitude(grid: DenseWtGrid, params: CauchyParams) -> ReassignmentField:
    """Magnitude-only reassignment of a dense frequency-convention grid.

    Derivatives are second-order differences (np.gradient) along both axes.
    """
    if grid.convention is not Convention.FREQ:
        raise ValueError("expects a frequency-convention grid")
    if params.gamma_re != 1 or params.gamma_im != 0:
        raise ValueError("magnitude-only reassignment needs gamma = 1")
    if grid.x.size < 3 or grid.axis.size < 3:
        raise ValueError("need at least 3 points per axis")
    mask = _mask(grid.values)
    mag = np.abs(grid.values)
    floor = MAGNITUDE_FLOOR * mag.max() if mag.max() > 0 else 1.0
    lg = np.log(np.maximum(mag, floor * 1e-12))
    dl_dx = np.gradient(lg, grid.x, axis=1)
    dl_dxi = np.gradient(lg, grid.axis, axis=0)
    x_hat, xi_hat = _magnitude_reassignment(params, grid.x, grid.axis, dl_dx, dl_dxi)
    return ReassignmentField(x_hat, xi_hat, mask)


@dataclass(frozen=True, eq=False)
class RidgeSets:
    """Ridge cells as (row, column) index pairs of the scale-ordered grid."""

    magnitude: set
    phase: set

    def coincide(self) -> bool:
        return self.magnitude == self.phase

    def jaccard(self) -> float:
        union = self.magnitude | self.phase
        return 1.0 if not union else len(self.magnitude & self.phase) / len(union)


def ridge_points(grid: DenseWtGrid, center: float | None = None) -> RidgeSets:
    """Magnitude and phase ridge cells of a dense grid.

    Magnitude ridges: d/dy log(y^-1/2 M) changes sign from + to - between
    scale rows j and j + 1 (cell j). Phase ridges: dphi/dx - omega_b / y
    changes sign from - to +. Derivatives are centered differences; the
    first and last columns are skipped. ``center`` is xi_b in Hz (defaults
    to the grid's).
    """
    g = grid.to_scale()
    W, x, y = g.values, g.x, g.axis
    if x.size < 3 or y.size < 3:
        raise ValueError("need at least 3 points per axis")
    omega_b = TWO_PI * (g.center if center is None else center)
    mask = _mask(W)
    if not mask.any():
        return RidgeSets(set(), set())
    with np.errstate(divide="ignore", invalid="ignore"):
        lg = np.log(np.abs(W)) - 0.5 * np.log(y)[:, None]
        q_mag = np.gradient(lg, y, axis=0)
        dphi_dx = np.full(W.shape, np.nan)
        dphi_dx[:, 1:-1] = np.angle(W[:, 2:] / W[:, :-2]) / (x[2:] - x[:-2])
        q_ph = dphi_dx - omega_b / y[:, None]
    valid = mask[:-1] & mask[1:]
    valid[:, [0, -1]] = False
    mag = np.argwhere(valid & (q_mag[:-1] > 0) & (q_mag[1:] <= 0))
    ph = np.argwhere(valid & (q_ph[:-1] < 0) & (q_ph[1:] >= 0))
    return RidgeSets({tuple(p) for p in mag.tolist()}, {tuple(p) for p in ph.tolist()})


def gabor_reassignment_special_case(signal, omega_b: float, x, y, hx: float,
                                    xi_s: float = 1.0) -> tuple[ReassignmentField, ResidualReport]:
    """Gabor-wavelet reassignment: quotient form versus log-magnitude form.

    Quotient form: (x + y Re(W_{T psi} / W), -y omega_b / Im(W_{psi'} / W)).
    Log-magnitude form: (x + y^2 d/dx log M, omega_b / dphi/dx), with
    centered differences. Second coordinates are scales.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    cwt = signal if isinstance(signal, ContinuousWT) else ContinuousWT(signal, GaborWavelet(omega_b), xi_s)
    yy = y[:, None]
    W = cwt(x, y)
    mask = _mask(W)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_q = x[None, :] + yy * np.real(cwt(x, y, "t_psi") / W)
        y_q = -yy * omega_b / np.imag(cwt(x, y, KernelKind.PSI_PRIME) / W)
        Wp, Wm = cwt(x + hx, y), cwt(x - hx, y)
        dl_dx = (np.log(np.abs(Wp)) - np.log(np.abs(Wm))) / (2 * hx)
        dphi_dx = np.angle(Wp / Wm) / (2 * hx)
    x_l = x[None, :] + yy ** 2 * dl_dx
    y_l = omega_b / dphi_dx
    mask &= np.isfinite(x_q) & np.isfinite(x_l)
    fieldq = ReassignmentField(x_q, y_q, mask, x_l, y_l)
    report = ResidualReport()
    if mask.any():
        ex = np.abs(x_q - x_l)[mask]
        ey = np.abs((y_q - y_l) / y_q)[mask]
        report.rows.append(ReportRow("gabor_time", hx, float(np.sqrt(np.mean(ex ** 2))), float(ex.max())))
        report.rows.append(ReportRow("gabor_scale", hx, float(np.sqrt(np.mean(ey ** 2))), float(ey.max())))
    else:
        report.rows.append(ReportRow("gabor_time", hx, 0.0, 0.0))
        report.rows.append(ReportRow("gabor_scale", hx, 0.0, 0.0))
    return fieldq, report
