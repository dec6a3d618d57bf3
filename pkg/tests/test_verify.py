import numpy as np
import pytest

from conftest import make_frame
from wavphase.dcwt import analyze
from wavphase.kernels import CauchyParams, GaborWavelet, KernelKind, center_frequency
from wavphase.verify import (
    REPORT_COLUMNS,
    ContinuousWT,
    Convention,
    DenseWtGrid,
    analytic_field,
    cr_residual,
    cr_targets,
    gabor_reassignment_special_case,
    laplacian_check,
    laplacian_targets,
    reassign_from_magnitude,
    reassignment_map,
    ridge_points,
    wt_derivative_check,
    write_report_csv,
)
from wavphase.verify_suite import L, run_check, test_signal as make_signal, two_peak

P100 = CauchyParams(100)


@pytest.fixture(scope="module")
def cauchy_cr():
    return run_check("cr", P100, refine=3)


def test_continuous_wt_matches_undecimated_dcwt():
    frame = make_frame(30, L=256, K=10, a_d=1)
    s = np.random.default_rng(0).standard_normal(256)
    alt = (-1.0) ** np.arange(256)
    # the frame counts the Nyquist bin as a positive frequency; the exact transform does not
    nyq = analyze(alt, frame).wavelet
    assert np.abs(nyq[0]).max() > 0
    assert np.allclose(ContinuousWT(alt, frame.params).freq(np.arange(256.0), frame.centers), 0)
    s -= (s @ alt) / 256 * alt
    c = analyze(s, frame)
    cwt = ContinuousWT(s, frame.params)
    xb = center_frequency(frame.params)
    ref = cwt.freq(np.arange(256.0), frame.centers)
    # the frame samples the response at bin frequencies, the same as the exact transform
    assert np.allclose(ref, c.wavelet, atol=1e-12 * np.abs(c.wavelet).max())
    dense = DenseWtGrid.from_dcwt(c)
    assert dense.convention is Convention.FREQ
    assert dense.center == pytest.approx(xb)
    scale = dense.to_scale()
    assert np.all(np.diff(scale.axis) > 0)


def test_derivative_check_second_order():
    rep = run_check("derivative", P100, refine=4)
    for name in ("wt_dx", "wt_dy"):
        r = rep.ratios(name)
        assert np.all((r >= 3.5) & (r <= 4.5)), (name, r)
        assert rep.rms(name)[-1] <= 1e-4


def test_derivative_check_zero_signal():
    rep = wt_derivative_check(np.zeros(64), P100, np.arange(20.0, 40.0), np.linspace(50, 80, 5), 0.5, refine=2)
    assert all(r.rms_residual == 0 and r.max_residual == 0 for r in rep.rows)


def test_tone_phase_derivative_is_its_frequency():
    xi0 = 100 / L
    cwt = ContinuousWT(np.exp(2j * np.pi * xi0 * np.arange(L)), P100)
    x = np.linspace(10, 1000, 17)
    y = center_frequency(P100) / xi0 * np.linspace(0.7, 1.4, 9)
    dx, _ = cwt.log_gradient(x, y)
    W = cwt(x, y)
    mask = np.abs(W) >= 1e-3 * np.abs(W).max()
    assert np.allclose(dx.imag[mask], 2 * np.pi * xi0, rtol=1e-6, atol=0)


def test_derivative_check_needs_three_points():
    with pytest.raises(ValueError):
        wt_derivative_check(np.zeros(64), P100, [1.0, 2.0], [1.0, 2.0, 3.0], 0.1)


@pytest.mark.parametrize("params", [CauchyParams(100), CauchyParams(100, gamma_re=1.0, gamma_im=0.5),
                                    CauchyParams(60, beta=3.0, gamma_re=1.5, gamma_im=0.5)])
def test_cr_residual_converges(params):
    rep = run_check("cr", params, refine=3)
    assert np.all(rep.ratios("cr") >= 3)


def test_gabor_control_stalls(cauchy_cr):
    gabor = run_check("cr", P100, refine=3, wavelet="gabor")
    assert gabor.rms("cr")[-1] >= 10 * cauchy_cr.rms("cr")[-1]
    assert gabor.ratios("cr").max() < 1.5


def test_literal_beta_term_only_matters_off_unit_gamma():
    y = np.array([2.0, 3.0])
    a = cr_targets(CauchyParams(10, 3.0, 1.0, 0.4), y, np.zeros((2, 1)), np.zeros((2, 1)), literal=True)
    b = cr_targets(CauchyParams(10, 3.0, 1.0, 0.4), y, np.zeros((2, 1)), np.zeros((2, 1)), literal=False)
    assert np.array_equal(a[1], b[1])
    p = CauchyParams(60, beta=3.0, gamma_re=1.5, gamma_im=0.5)
    from wavphase.verify_suite import CHIRP_FREQ, test_signal
    cwt = ContinuousWT(test_signal("chirp"), p)
    x = np.linspace(400, 624, 9)
    yy = center_frequency(p) / CHIRP_FREQ * np.linspace(0.8, 1.25, 9)
    literal = cr_residual(cwt, p, x, yy, 2.0, refine=3, literal=True).rms("cr")
    fixed = cr_residual(cwt, p, x, yy, 2.0, refine=3).rms("cr")
    assert fixed[-1] < 0.1 * literal[-1]


@pytest.mark.parametrize("params", [CauchyParams(7), CauchyParams(12, 2.0, 1.5, -0.3)])
def test_synthetic_analytic_field(params):
    f = analytic_field(lambda z: np.exp(1j * 0.3 * z) / (z + 4j) ** 2, params)
    rep = cr_residual(f, params, np.linspace(-3, 3, 9), np.linspace(1, 3, 9), 0.2, refine=3)
    assert np.all(rep.ratios("cr") >= 3)
    assert rep.rms("cr")[-1] < 2e-3


def test_laplacian_identities():
    rep = run_check("laplacian", P100, refine=3)
    assert np.all(rep.ratios("laplacian_mag") >= 3)
    assert np.all(np.diff(rep.rms("laplacian_mag")) < 0)
    assert rep.rms("laplacian_phase")[-1] < 1e-8


def test_laplacian_scale_invariance_and_targets():
    from wavphase.verify_suite import test_signal
    s = test_signal("chirp")
    x = np.linspace(400, 624, 7)
    y = center_frequency(P100) / 0.08 * np.linspace(0.8, 1.25, 7)
    a = laplacian_check(ContinuousWT(s, P100), P100, x, y, 2.0, refine=2)
    b = laplacian_check(ContinuousWT(7.5 * s, P100), P100, x, y, 2.0, refine=2)
    assert np.allclose(a.rms("laplacian_mag"), b.rms("laplacian_mag"), rtol=1e-6)
    assert np.allclose(a.rms("laplacian_phase"), b.rms("laplacian_phase"), rtol=1e-3, atol=1e-12)
    t1, _ = laplacian_targets(CauchyParams(50, 2.0), y)
    t2, ph = laplacian_targets(CauchyParams(100, 2.0), y)
    assert np.array_equal(t2, 2 * t1)
    assert np.allclose(ph, 2.0 / y ** 2)
    with pytest.raises(ValueError):
        laplacian_check(ContinuousWT(s, P100), CauchyParams(100, gamma_re=2.0), x, y, 2.0)


def test_reassignment():
    rep = run_check("reassign", P100, refine=3)
    assert rep.by_check("reassign_tone_freq")[0].max_residual <= 1e-3
    assert rep.by_check("reassign_impulse_time")[0].max_residual <= 1.0
    assert np.all(rep.ratios("reassign_agreement") >= 3)


def test_reassignment_beta_and_zero():
    p = CauchyParams(100, beta=4.0)
    xi0 = 100 / L
    cwt = ContinuousWT(np.cos(2 * np.pi * xi0 * np.arange(L)), p)
    R = reassignment_map(cwt, p, np.linspace(100, 900, 9), xi0 * np.linspace(0.8, 1.25, 9), 1.0)
    assert np.max(np.abs(R.xi_hat[R.mask] / xi0 - 1)) <= 1e-3
    _, dxi = R.agreement()
    assert dxi < 1e-3
    Z = reassignment_map(ContinuousWT(np.zeros(L), p), p, np.arange(3.0), [0.1, 0.2, 0.3], 1.0)
    assert not Z.mask.any() and Z.agreement() == (0.0, 0.0)


def test_reassign_from_dense_magnitude():
    xi0 = 0.1
    p = CauchyParams(100)
    cwt = ContinuousWT(np.cos(2 * np.pi * xi0 * np.arange(L)), p)
    g = cwt.freq_grid(np.arange(200.0, 800.0), xi0 * np.geomspace(0.9, 1.1, 41))
    R = reassign_from_magnitude(g, p)
    inner = R.mask.copy()
    inner[[0, -1]] = False
    assert np.max(np.abs(R.xi_hat[inner] / xi0 - 1)) < 1e-3
    with pytest.raises(ValueError):
        reassign_from_magnitude(g.to_scale(), p)


def test_ridges_on_a_tone_coincide_on_one_row():
    xi0 = 100 / L
    cwt = ContinuousWT(np.cos(2 * np.pi * xi0 * np.arange(L)), P100)
    y0 = center_frequency(P100) / xi0
    y = y0 * 2.0 ** ((np.arange(-20, 20) + 0.5) / 40)
    rs = ridge_points(cwt.grid(np.arange(300.0, 340.0), y))
    assert rs.magnitude and rs.coincide()
    rows = {r for r, _ in rs.magnitude}
    assert len(rows) == 1
    j = rows.pop()
    assert y[j] <= y0 <= y[j + 1]


def test_ridges_chirp_and_two_peak_control():
    cauchy = run_check("ridge", P100)
    control = run_check("ridge", P100, wavelet="twopeak")
    assert cauchy.by_check("ridge_mismatch")[0].rms_residual <= 0.05
    assert control.by_check("ridge_mismatch")[0].rms_residual >= 0.5
    assert cauchy.by_check("ridge_cells")[0].rms_residual > 50


def test_ridges_zero_signal_empty():
    rs = ridge_points(ContinuousWT(np.zeros(64), P100).grid(np.arange(10.0), np.linspace(50, 60, 5)))
    assert rs.magnitude == set() and rs.phase == set() and rs.coincide() and rs.jaccard() == 1.0


def test_two_peak_has_interior_center():
    w = two_peak(P100)
    xi = np.linspace(9.3, 9.6, 300001)
    assert w.center_frequency == pytest.approx(xi[np.argmax(np.abs(w.response(xi)))], rel=1e-6)


def test_gabor_special_case():
    rep = run_check("gabor", P100)
    assert rep.by_check("gabor_time")[0].rms_residual < 1e-6
    assert rep.by_check("gabor_scale")[0].rms_residual < 1e-6
    assert rep.by_check("gabor_impulse_time")[0].max_residual <= 1.0
    F, z = gabor_reassignment_special_case(np.zeros(64), 5.0, np.arange(5.0), np.arange(1.0, 6.0), 0.5)
    assert not F.mask.any() and z.rows[0].rms_residual == 0


def test_gabor_identity_time_weighted_kernel():
    g = GaborWavelet(5.0)
    cwt = ContinuousWT(make_signal("gauss_tone"), g)
    x, y = np.linspace(450, 570, 5), np.linspace(5, 15, 5)
    lhs = cwt(x, y, "t_psi")
    # the transform is antilinear in the wavelet
    rhs = -1j * 5.0 * cwt(x, y) - cwt(x, y, KernelKind.PSI_PRIME)
    assert np.allclose(lhs, rhs, atol=1e-12 * np.abs(rhs).max())
    assert np.allclose(g.time_weighted(np.linspace(0, 2, 9)),
                       1j * 5.0 * g.response(np.linspace(0, 2, 9)) - g.kernel(KernelKind.PSI_PRIME,
                                                                              np.linspace(0, 2, 9)))


def test_report_csv(tmp_path):
    rep = run_check("cr", P100, refine=2)
    text = write_report_csv(rep, tmp_path / "r.csv")
    lines = text.strip().splitlines()
    assert lines[0] == ",".join(REPORT_COLUMNS) and len(lines) == 3
    assert (tmp_path / "r.csv").read_text() == text


def test_unknown_check_and_wavelet():
    with pytest.raises(ValueError):
        run_check("nope", P100)
    with pytest.raises(ValueError):
        run_check("cr", P100, wavelet="morlet")
