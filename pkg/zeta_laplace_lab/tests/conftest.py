from typing import Any, Dict

import mpmath
import pytest

from zeta_laplace_lab.cache import CACHE_DIR_ENV
from zeta_laplace_lab.client import ZetaClient
from zeta_laplace_lab.poles_residues import bundled_zero_table
from zeta_laplace_lab.utils import DEFAULT_CONFIG

SAMPLE_CONFIG: Dict[str, Any] = dict(
    DEFAULT_CONFIG,
    digits=20,
    n_zeros=30,
    y_max=2.0,
    quad_digits=15,
    cache_enabled=False,
    positivity_points=12,
    positivity_v_max_y=4.0,
    laplace_points=2,
    charbound_x=[1.0, 5.0],
    charbound_t_max=2.0,
    charbound_t_step=1.0,
    ev_grid=[0.5, 1.0],
)


def reference_xi(s):
    """ξ(s) = ½s(s−1)π^{−s/2}Γ(s/2)ζ(s), straight from mpmath."""
    s = mpmath.mpmathify(s)
    return s * (s - 1) / 2 * mpmath.power(mpmath.pi, -s / 2) * mpmath.gamma(s / 2) * mpmath.zeta(s)


def reference_c_res(k):
    return 2 * (-1) ** k / (mpmath.pi * reference_xi(4 * k + mpmath.mpf(1) / 2))


@pytest.fixture(autouse=True)
def no_cache_dir(monkeypatch):
    monkeypatch.delenv(CACHE_DIR_ENV, raising=False)


@pytest.fixture
def client():
    return ZetaClient(dict(SAMPLE_CONFIG))


@pytest.fixture(scope="session")
def table():
    return bundled_zero_table()


@pytest.fixture
def config():
    return dict(SAMPLE_CONFIG)
