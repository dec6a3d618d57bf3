"""Cauchy wavelet transforms and phase retrieval from wavelet magnitudes."""

from .dcwt import (
    CoefficientGrid,
    FilterBankSpec,
    FrameError,
    SynthesisError,
    WaveletFrame,
    analyze,
    build_frame,
    frame_bound_ratio,
    synthesize,
)
from .estimators import PhaselessReconstructor, WaveletScalogram
from .griffin_lim import FglimConfig, fast_griffin_lim
from .kernels import CauchyParams, KernelKind, center_frequency, derived_freq_response, freq_response
from .metrics import ReconstructionReport, spectral_convergence
from .phase import (
    MagnitudeGrid,
    PhaseDerivativeGrids,
    PhaseGrid,
    combine,
    log_magnitude,
    phase_derivatives,
    scale_diff,
    time_diff,
    wpghi,
)
from .pipeline import reconstruct

__all__ = [
    "CauchyParams",
    "KernelKind",
    "center_frequency",
    "freq_response",
    "derived_freq_response",
    "FilterBankSpec",
    "WaveletFrame",
    "CoefficientGrid",
    "FrameError",
    "SynthesisError",
    "build_frame",
    "analyze",
    "synthesize",
    "frame_bound_ratio",
    "MagnitudeGrid",
    "PhaseDerivativeGrids",
    "PhaseGrid",
    "log_magnitude",
    "time_diff",
    "scale_diff",
    "phase_derivatives",
    "wpghi",
    "combine",
    "FglimConfig",
    "fast_griffin_lim",
    "spectral_convergence",
    "ReconstructionReport",
    "reconstruct",
    "WaveletScalogram",
    "PhaselessReconstructor",
]
