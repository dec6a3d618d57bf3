"""Phase estimation from wavelet magnitudes.

For Cauchy wavelets with gamma = 1 the time and frequency derivatives of the
phase are determined by the frequency and time derivatives of the
log-magnitude. The estimates are integrated over the (n, k) grid by
magnitude-ordered heap integration with a two-point trapezoidal rule.

Grids are laid out as (K, N): row k is channel k (decreasing center
frequency), column n is the time index.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .dcwt import CoefficientGrid, FilterBankSpec
from .kernels import CauchyParams

__all__ = [
    "MagnitudeGrid",
    "PhaseDerivativeGrids",
    "PhaseGrid",
    "log_magnitude",
    "time_diff",
    "scale_diff",
    "phase_derivatives",
    "wpghi",
    "combine",
    "random_phase",
]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class MagnitudeGrid:
    """Wavelet magnitudes on the (K, N) grid.

    ``lowpass`` optionally carries the magnitude of the lowpass row so that a
    full coefficient grid can be rebuilt by :func:`combine`.
    """

    values: np.ndarray
    centers: np.ndarray
    hop_seconds: float
    log_floor_db: float = -300.0
    lowpass: np.ndarray | None = None
    spec: FilterBankSpec | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("magnitudes must be a 2-D (K, N) array")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("magnitudes must be finite and nonnegative")
        centers = np.asarray(self.centers, dtype=float)
        if centers.shape != (values.shape[0],):
            raise ValueError("need one center frequency per row")
        if centers.size > 1 and np.any(np.diff(centers) >= 0):
            raise ValueError("center frequencies must be strictly decreasing")
        if not self.hop_seconds > 0:
            raise ValueError("hop_seconds must be positive")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "centers", centers)

    @classmethod
    def from_coefficients(cls, grid: CoefficientGrid, log_floor_db: float = -300.0) -> "MagnitudeGrid":
        return cls(np.abs(grid.wavelet), grid.centers, grid.spec.hop_seconds, log_floor_db,
                   lowpass=np.abs(grid.lowpass), spec=grid.spec)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def scaled(self, factor: float) -> "MagnitudeGrid":
        low = None if self.lowpass is None else self.lowpass * factor
        return MagnitudeGrid(self.values * factor, self.centers, self.hop_seconds,
                             self.log_floor_db, low, self.spec)


@dataclass(frozen=True, eq=False)
class PhaseDerivativeGrids:
    dphi_dx: np.ndarray  # rad / s
    dphi_dxi: np.ndarray  # rad / Hz


@dataclass(frozen=True, eq=False)
class PhaseGrid:
    values: np.ndarray
    reliable_mask: np.ndarray
    pop_order: np.ndarray = field(default=None, repr=False)
    seeds: np.ndarray = field(default=None, repr=False)


def log_magnitude(m: MagnitudeGrid) -> np.ndarray:
    """Natural log of the magnitudes, floored at ``log_floor_db`` below the max."""
    peak = m.values.max() if m.values.size else 0.0
    ref = peak if peak > 0 else 1.0
    floor = ref * 10.0 ** (m.log_floor_db / 20.0)
    return np.log(np.maximum(m.values, floor))


def time_diff(g: np.ndarray, hop_seconds: float, wrap: bool = True) -> np.ndarray:
    """Centered difference along time, divided by the hop in seconds."""
    g = np.asarray(g, dtype=float)
    if g.shape[-1] < 3:
        raise ValueError("time differences need at least 3 samples")
    if wrap:
        return (np.roll(g, -1, axis=-1) - np.roll(g, 1, axis=-1)) / (2.0 * hop_seconds)
    out = np.empty_like(g)
    out[..., 1:-1] = (g[..., 2:] - g[..., :-2]) / (2.0 * hop_seconds)
    out[..., 0] = (g[..., 1] - g[..., 0]) / hop_seconds
    out[..., -1] = (g[..., -1] - g[..., -2]) / hop_seconds
    return out


def scale_diff(g: np.ndarray, centers) -> np.ndarray:
    """Weighted centered difference across channels with respect to frequency.

    Average of the backward and forward difference quotients; one-sided at
    the first and last channel.
    """
    g = np.asarray(g, dtype=float)
    xi = np.asarray(centers, dtype=float)
    if g.shape[0] < 3:
        raise ValueError("scale differences need at least 3 channels")
    if xi.shape != (g.shape[0],):
        raise ValueError("need one center frequency per row")
    step = np.diff(xi)[:, None]
    quot = np.diff(g, axis=0) / step
    out = np.empty_like(g)
    out[1:-1] = 0.5 * (quot[1:] + quot[:-1])
    out[0] = quot[0]
    out[-1] = quot[-1]
    return out


def phase_derivatives(logm: np.ndarray, params: CauchyParams, centers, hop_seconds: float
                      ) -> PhaseDerivativeGrids:
    """Phase gradient estimates from the log-magnitude (gamma = 1 only)."""
    if params.gamma_re != 1 or params.gamma_im != 0:
        raise ValueError("magnitude-based phase derivatives are implemented for gamma = 1 only")
    if params.alpha <= 1:
        raise ValueError("need alpha > 1")
    xi = np.asarray(centers, dtype=float)[:, None]
    a1 = params.alpha - 1.0
    dlog_dxi = scale_diff(logm, centers)
    dlog_dx = time_diff(logm, hop_seconds, wrap=True)
    dphi_dx = 4.0 * np.pi * xi ** 2 / a1 * dlog_dxi + TWO_PI * xi
    dphi_dxi = -a1 / (4.0 * np.pi * xi ** 2) * dlog_dx + params.beta / xi
    return PhaseDerivativeGrids(dphi_dx, dphi_dxi)


def random_phase(shape, seed: int) -> np.ndarray:
    """Uniform phases in [0, 2 pi) from a counter-based generator.

    Cell (k, n) always consumes the same counter, so the value depends only
    on the seed, the cell and the grid shape.
    """
    gen = np.random.Generator(np.random.Philox(key=int(seed) % (1 << 64)))
    return TWO_PI * gen.random(shape)


def wpghi(m: MagnitudeGrid, d: PhaseDerivativeGrids, tol: float = 1e-6, seed: int = 0) -> PhaseGrid:
    """Integrate the phase gradient in order of decreasing magnitude.

    Cells with magnitude at most ``tol * max`` get random phase. Every other
    cell is reached from its largest already-integrated neighbor; when the
    heap runs dry the largest remaining cell starts a new component with
    phase 0. Time neighbors wrap around, channel neighbors do not.
    """
    M = m.values
    K, N = M.shape
    if d.dphi_dx.shape != (K, N) or d.dphi_dxi.shape != (K, N):
        raise ValueError("derivative grids must match the magnitude grid")
    if not 0 < tol <= 1:
        raise ValueError("tol must lie in (0, 1]")

    abstol = tol * M.max()
    mask = M > abstol
    phase = random_phase((K, N), seed)
    phase[mask] = 0.0

    flat_phase = phase.ravel().tolist()
    mags = M.ravel().tolist()
    dx = d.dphi_dx.ravel().tolist()
    dxi = d.dphi_dxi.ravel().tolist()
    xi = m.centers.tolist()
    half_hop = 0.5 * m.hop_seconds
    pending = mask.ravel().tolist()

    order = np.flatnonzero(mask.ravel())
    order = order[np.argsort(-M.ravel()[order], kind="stable")].tolist()
    popped = []
    seeds = []
    heap: list[tuple[float, int]] = []
    push, pop = heapq.heappush, heapq.heappop
    ptr = 0
    n_left = len(order)
    while n_left:
        while not pending[order[ptr]]:
            ptr += 1
        start = order[ptr]
        pending[start] = False
        n_left -= 1
        flat_phase[start] = 0.0
        seeds.append(start)
        push(heap, (-mags[start], start))
        while heap:
            _, idx = pop(heap)
            popped.append(idx)
            k, n = divmod(idx, N)
            ph, gx, gxi = flat_phase[idx], dx[idx], dxi[idx]
            row = k * N
            # time neighbors (circular)
            for step in (1, -1):
                nb = row + (n + step) % N
                if pending[nb]:
                    flat_phase[nb] = ph + step * half_hop * (gx + dx[nb])
                    pending[nb] = False
                    n_left -= 1
                    push(heap, (-mags[nb], nb))
            # channel neighbors
            for kk in (k - 1, k + 1):
                if 0 <= kk < K:
                    nb = kk * N + n
                    if pending[nb]:
                        flat_phase[nb] = ph + 0.5 * (xi[kk] - xi[k]) * (gxi + dxi[nb])
                        pending[nb] = False
                        n_left -= 1
                        push(heap, (-mags[nb], nb))

    values = np.asarray(flat_phase).reshape(K, N)
    return PhaseGrid(values, mask, np.asarray(popped, dtype=np.int64), np.asarray(seeds, dtype=np.int64))


def combine(m: MagnitudeGrid, p: PhaseGrid) -> CoefficientGrid:
    """Attach phases to magnitudes; the lowpass row keeps a positive sign."""
    if p.values.shape != m.values.shape:
        raise ValueError("phase grid does not match the magnitudes")
    if m.spec is None:
        raise ValueError("magnitude grid carries no filter bank spec")
    wav = m.values * np.exp(1j * p.values)
    low = np.zeros(m.values.shape[1]) if m.lowpass is None else np.asarray(m.lowpass, dtype=float)
    return CoefficientGrid(wav, low, m.spec, m.centers)
