"""Spectral convergence and reconstruction reports."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .dcwt import CoefficientGrid
from .phase import MagnitudeGrid

__all__ = [
    "SC_FLOOR_DB",
    "Method",
    "ReconstructionReport",
    "spectral_convergence",
    "magnitude_stack",
    "write_reports",
    "read_reports",
    "REPORT_COLUMNS",
    "phase_components",
    "component_phase_rmse",
]

SC_FLOOR_DB = -600.0

REPORT_COLUMNS = ["signal_id", "method", "alpha", "beta", "a_d", "K", "B", "sc_db", "runtime_ms", "seed"]


class Method(str, enum.Enum):
    WPGHI = "wpghi"
    RFGLIM = "rfglim"
    WFGLIM = "wfglim"


def magnitude_stack(m, include_lowpass: bool = True) -> np.ndarray:
    """All magnitudes of a grid as one 2-D array (lowpass as the last row)."""
    if isinstance(m, CoefficientGrid):
        return m.magnitude if include_lowpass else np.abs(m.wavelet)
    if isinstance(m, MagnitudeGrid):
        if include_lowpass and m.lowpass is not None:
            return np.vstack([m.values, np.abs(m.lowpass)[None, :]])
        return m.values
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D magnitude array")
    return np.abs(arr)


def spectral_convergence(m_proposed, m_target, include_lowpass: bool = True) -> float:
    """20 log10(||M_p - M_t|| / ||M_t||) in dB, floored at -600 dB."""
    mp = magnitude_stack(m_proposed, include_lowpass)
    mt = magnitude_stack(m_target, include_lowpass)
    if mp.shape != mt.shape:
        raise ValueError(f"magnitude shapes differ: {mp.shape} vs {mt.shape}")
    den = np.linalg.norm(mt)
    if den == 0:
        raise ValueError("target magnitude has zero norm")
    num = np.linalg.norm(mp - mt)
    if num == 0:
        return SC_FLOOR_DB
    return float(max(SC_FLOOR_DB, 20.0 * np.log10(num / den)))


@dataclass
class ReconstructionReport:
    signal_id: str
    method: Method
    alpha: float
    beta: float
    a_d: int
    K: int
    B: float
    sc_db: float
    runtime_ms: float
    seed: int
    gamma_re: float = 1.0
    gamma_im: float = 0.0

    def __post_init__(self):
        self.method = Method(self.method)

    def row(self) -> dict:
        d = asdict(self)
        d["method"] = self.method.value
        return {k: d[k] for k in REPORT_COLUMNS}


def phase_components(mask) -> tuple[np.ndarray, int]:
    """Label 4-connected components of a (K, N) mask; time wraps around."""
    mask = np.asarray(mask, dtype=bool)
    labels, n = ndimage.label(mask, structure=[[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    if n == 0 or mask.shape[1] < 2:
        return labels, n
    parent = np.arange(n + 1)

    def root(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in zip(labels[:, 0], labels[:, -1]):
        if a and b:
            ra, rb = root(a), root(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    roots = np.array([root(i) for i in range(n + 1)])
    _, relabel = np.unique(roots, return_inverse=True)
    return relabel[labels], int(relabel.max())


def component_phase_rmse(estimate, reference, mask) -> np.ndarray:
    """Circular phase RMSE per connected component of ``mask``.

    One constant offset per component (the circular mean of the
    difference) is removed first, since integration fixes phase only up to a
    constant on each component.
    """
    labels, n = phase_components(mask)
    diff = np.exp(1j * (np.asarray(estimate) - np.asarray(reference)))
    out = np.empty(n)
    for c in range(1, n + 1):
        d = diff[labels == c]
        offset = np.mean(d)
        offset = offset / abs(offset) if abs(offset) > 0 else 1.0
        out[c - 1] = np.sqrt(np.mean(np.angle(d / offset) ** 2))
    return out


def write_reports(reports, path=None) -> str:
    """Write reports as CSV; returns the CSV text. ``path=None`` only returns it."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        row = r.row() if isinstance(r, ReconstructionReport) else r
        writer.writerow({k: _fmt(row[k]) for k in REPORT_COLUMNS})
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def read_reports(path) -> list[ReconstructionReport]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        out.append(ReconstructionReport(
            signal_id=r["signal_id"], method=r["method"], alpha=float(r["alpha"]),
            beta=float(r["beta"]), a_d=int(r["a_d"]), K=int(r["K"]), B=float(r["B"]),
            sc_db=float(r["sc_db"]), runtime_ms=float(r["runtime_ms"]), seed=int(r["seed"])))
    return out


def _fmt(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return value
