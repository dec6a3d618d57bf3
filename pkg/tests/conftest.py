import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wavphase.dcwt import FilterBankSpec, build_frame
from wavphase.kernels import CauchyParams

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def make_frame(alpha=30.0, L=256, K=20, a_d=4, xi_s=1.0, fmin=None, fmax=None, beta=0.0):
    p = CauchyParams(alpha, beta)
    fmin = xi_s / 20 * 2 ** -3 if fmin is None else fmin
    fmax = xi_s / 20 * 2 ** 3 if fmax is None else fmax
    return build_frame(FilterBankSpec.from_range(L, xi_s, K, fmin, fmax, a_d, p), p)


@pytest.fixture(scope="session")
def small_frame():
    return make_frame()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
