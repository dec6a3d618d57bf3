import numpy as np
import pytest

from conftest import make_frame
from wavphase.dcwt import analyze
from wavphase.griffin_lim import FglimConfig, fast_griffin_lim
from wavphase.metrics import spectral_convergence
from wavphase.phase import MagnitudeGrid, PhaseGrid
from wavphase.pipeline import estimate_phase


@pytest.fixture(scope="module")
def case():
    frame = make_frame(30, L=1000, K=60, a_d=5, fmin=2 ** -6 / 20, fmax=2 ** 3.3 / 20)
    t = np.arange(1000)
    s = np.cos(2 * np.pi * (0.02 * t + 4e-5 * t ** 2)) * np.hanning(1000)
    c = analyze(s, frame)
    return frame, s, c, MagnitudeGrid.from_coefficients(c)


def test_config_validation():
    with pytest.raises(ValueError):
        FglimConfig(max_iter=0)
    with pytest.raises(ValueError):
        FglimConfig(momentum=1.0)


def test_output_modulus_equals_target(case):
    frame, _, _, m = case
    res = fast_griffin_lim(m, frame, FglimConfig(max_iter=20))
    assert np.allclose(np.abs(res.coefficients.wavelet), m.values, rtol=1e-14, atol=0)
    assert np.array_equal(res.coefficients.lowpass, m.lowpass)
    signal, coeffs, trace = res
    assert signal.shape == (frame.L,) and len(trace) >= 1
    assert res.sc_trace[res.best_iteration] == trace.min()


def test_classical_iteration_is_monotone(case):
    frame, _, _, m = case
    res = fast_griffin_lim(m, frame, FglimConfig(max_iter=40, momentum=0.0, stall_db=0.0))
    cons = res.consistency_trace
    assert np.all(np.diff(cons) <= 1e-9 * cons[0])


def test_momentum_helps(case):
    frame, _, _, m = case
    plain = fast_griffin_lim(m, frame, FglimConfig(max_iter=60, momentum=0.0, stall_db=0.0))
    fast = fast_griffin_lim(m, frame, FglimConfig(max_iter=60, momentum=0.99, stall_db=0.0))
    assert fast.sc_trace.min() < plain.sc_trace.min()


def test_zero_target_gives_zero_after_one_iteration(case):
    frame, _, _, m = case
    zero = MagnitudeGrid(np.zeros_like(m.values), m.centers, m.hop_seconds, lowpass=np.zeros(m.shape[1]))
    res = fast_griffin_lim(zero, frame, FglimConfig(max_iter=50))
    assert np.all(res.signal == 0) and len(res.sc_trace) == 1


def test_warm_start_with_exact_phase(case):
    frame, s, c, m = case
    exact = PhaseGrid(np.angle(c.wavelet), np.ones(m.shape, bool))
    res = fast_griffin_lim(m, frame, FglimConfig(max_iter=5, init=exact))
    assert res.sc_trace[0] <= -200
    # the lowpass sign is not carried by magnitudes, so only moduli are restored exactly
    z = analyze(res.signal, frame)
    assert np.allclose(np.abs(z.wavelet), m.values, atol=1e-10 * m.values.max())


def test_warm_start_never_worse_than_its_initialization(case):
    frame, _, _, m = case
    init = estimate_phase(m, frame)
    res = fast_griffin_lim(m, frame, FglimConfig(max_iter=30, init=init))
    assert res.sc_trace.min() <= res.sc_trace[0]
    assert spectral_convergence(analyze(res.signal, frame), m) == pytest.approx(res.sc_trace.min())


def test_deterministic_under_seed(case):
    frame, _, _, m = case
    a = fast_griffin_lim(m, frame, FglimConfig(max_iter=15, seed=3))
    b = fast_griffin_lim(m, frame, FglimConfig(max_iter=15, seed=3))
    c = fast_griffin_lim(m, frame, FglimConfig(max_iter=15, seed=4))
    assert np.array_equal(a.signal, b.signal) and np.array_equal(a.sc_trace, b.sc_trace)
    assert not np.array_equal(a.signal, c.signal)


def test_stall_rule_stops_early(case):
    frame, _, _, m = case
    res = fast_griffin_lim(m, frame, FglimConfig(max_iter=150, stall_db=100.0, stall_window=3))
    assert len(res.sc_trace) == 4


def test_shape_mismatch(case):
    frame, _, _, m = case
    with pytest.raises(ValueError):
        fast_griffin_lim(MagnitudeGrid(m.values[:, :-1], m.centers, m.hop_seconds), frame)
    with pytest.raises(ValueError):
        fast_griffin_lim(m, frame, FglimConfig(init=PhaseGrid(np.zeros((2, 2)), np.ones((2, 2), bool))))
