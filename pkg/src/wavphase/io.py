"""WAV audio and coefficient-grid files."""

from __future__ import annotations

import struct
import warnings
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .dcwt import CoefficientGrid, FilterBankSpec
from .kernels import CauchyParams

__all__ = [
    "GridFormatError",
    "WavFormatError",
    "GRID_MAGIC",
    "GRID_VERSION",
    "read_wav",
    "write_wav",
    "save_grid",
    "load_grid",
]

GRID_MAGIC = b"DCWT"
GRID_VERSION = 1
_HEADER = struct.Struct("<4sHQII7d")


class GridFormatError(ValueError):
    """Coefficient file is corrupt, truncated or of an unsupported version."""


class WavFormatError(ValueError):
    """WAV file is malformed or uses an unsupported codec."""


def read_wav(path) -> tuple[np.ndarray, int]:
    """Read a PCM16/PCM24/PCM32/float WAV file as mono float64 in [-1, 1]."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", wavfile.WavFileWarning)
            rate, data = wavfile.read(path)
    except (ValueError, EOFError) as exc:
        raise WavFormatError(f"cannot read {path}: {exc}") from exc
    if data.dtype == np.int16:
        x = data / 32768.0
    elif data.dtype == np.int32:
        # scipy left-aligns 24-bit samples in int32
        x = data / 2147483648.0
    elif data.dtype == np.uint8:
        x = (data.astype(np.float64) - 128.0) / 128.0
    elif data.dtype in (np.float32, np.float64):
        x = data.astype(np.float64)
    else:
        raise WavFormatError(f"unsupported sample format {data.dtype}")
    if x.ndim == 2:
        x = x.mean(axis=1)
    return np.asarray(x, dtype=np.float64), int(rate)


def write_wav(path, signal, rate: int, subtype: str = "float32") -> int:
    """Write a mono WAV file; returns the number of clipped samples.

    ``subtype`` is one of ``"float32"``, ``"pcm16"`` or ``"pcm24"``.
    """
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("only mono signals can be written")
    clipped = int(np.count_nonzero(np.abs(x) > 1.0))
    x = np.clip(x, -1.0, 1.0)
    if subtype == "float32":
        data = x.astype(np.float32)
    elif subtype == "pcm16":
        data = np.clip(np.round(x * 32768.0), -32768, 32767).astype(np.int16)
    elif subtype == "pcm24":
        q = np.clip(np.round(x * 8388608.0), -8388608, 8388607).astype(np.int32)
        _write_pcm24(path, q, rate)
        return clipped
    else:
        raise ValueError(f"unsupported subtype {subtype!r}")
    wavfile.write(path, int(rate), data)
    return clipped


def _write_pcm24(path, q: np.ndarray, rate: int) -> None:
    # scipy writes int32 as 32-bit PCM; pack 3-byte little-endian frames by hand
    raw = q.astype("<i4").view(np.uint8).reshape(-1, 4)[:, :3].tobytes()
    fmt = struct.pack("<HHIIHH", 1, 1, rate, rate * 3, 3, 24)
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt + b"data" + struct.pack("<I", len(raw)) + raw
    if len(raw) % 2:
        body += b"\x00"
    Path(path).write_bytes(b"RIFF" + struct.pack("<I", len(body)) + body)


def save_grid(path, grid: CoefficientGrid, params: CauchyParams) -> None:
    spec = grid.spec
    header = _HEADER.pack(GRID_MAGIC, GRID_VERSION, spec.L, spec.K, spec.a_d, spec.xi_s, spec.B,
                          spec.y_m, params.alpha, params.beta, params.gamma_re, params.gamma_im)
    wav = np.ascontiguousarray(grid.wavelet, dtype="<c16")
    low = np.ascontiguousarray(grid.lowpass, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(wav.tobytes())
        fh.write(low.tobytes())


def load_grid(path) -> tuple[CoefficientGrid, CauchyParams]:
    """Read a coefficient file; returns the grid and the wavelet parameters."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise GridFormatError("file is shorter than the header")
    magic, version, L, K, a_d, xi_s, B, y_m, alpha, beta, g_re, g_im = _HEADER.unpack_from(data)
    if magic != GRID_MAGIC:
        raise GridFormatError(f"bad magic {magic!r}")
    if version != GRID_VERSION:
        raise GridFormatError(f"unsupported version {version}")
    if a_d == 0 or K == 0 or L % a_d:
        raise GridFormatError("inconsistent dimensions in header")
    N = L // a_d
    expected = _HEADER.size + 16 * K * N + 8 * N
    if len(data) < expected:
        raise GridFormatError(f"truncated payload: {len(data)} of {expected} bytes")
    if len(data) > expected:
        raise GridFormatError(f"trailing bytes: {len(data)} instead of {expected}")
    off = _HEADER.size
    wav = np.frombuffer(data, dtype="<c16", count=K * N, offset=off).reshape(K, N).astype(complex)
    low = np.frombuffer(data, dtype="<f8", count=N, offset=off + 16 * K * N).astype(float)
    try:
        spec = FilterBankSpec(L=L, xi_s=xi_s, K=K, B=B, y_m=y_m, a_d=a_d)
        params = CauchyParams(alpha, beta, g_re, g_im)
    except ValueError as exc:
        raise GridFormatError(f"invalid parameters in header: {exc}") from exc
    centers = spec.centers(params.normalized()) if alpha > 1 else np.zeros(K)
    return CoefficientGrid(wav, low, spec, centers), params
