import mpmath
import pytest

from zeta_laplace_lab.hiprec_zeta import GUARD_DIGITS
from zeta_laplace_lab.laplace_density import DensityFamily, precision_plan
from zeta_laplace_lab.poles_residues import c_res_4k
from zeta_laplace_lab.utils import (
    InsufficientZerosError,
    InvalidInputError,
    PrecisionCeilingError,
    StripViolationError,
)

from zeta_laplace_lab.tests.conftest import SAMPLE_CONFIG, reference_c_res, reference_xi


@pytest.fixture(scope="module")
def family():
    return DensityFamily.build(dict(SAMPLE_CONFIG, digits=25))


@pytest.fixture(scope="module")
def spectral_family(table):
    return DensityFamily.build(dict(SAMPLE_CONFIG, digits=25), table)


def _reference_p0(v, terms=40):
    x = (mpmath.mpf(v) / mpmath.pi) ** 2
    return -mpmath.fsum(reference_c_res(k) * x ** k for k in range(1, terms + 1))


def test_g0_at_zero(family):
    """g₀(0) = P₀(π) = −Σ c_res(4k)."""
    value = family.g0(0, 25)
    with mpmath.workdps(45):
        expected = _reference_p0(mpmath.pi)
    assert abs(value.value - expected) <= value.err + mpmath.mpf("1e-23")
    assert abs(value.value - mpmath.mpf("0.6317")) < mpmath.mpf("1e-3")


def test_p0_against_closed_form(family):
    value = family.p0(mpmath.mpf(7), 25)
    with mpmath.workdps(45):
        expected = _reference_p0(7, terms=60)
    assert abs(value.value - expected) <= value.err + mpmath.mpf("1e-23")


def test_p0_plus_p4(family):
    """P₀(v) + P₄(v) = −c_res(4)·(v/π)²."""
    v = mpmath.mpf(2)
    total = family.p0(v, 25) + family.p4w(v, 1, 25)
    first = c_res_4k(1, 25)
    with mpmath.workdps(40):
        expected = -first.value * (v / mpmath.pi) ** 2
    assert abs(total.value - expected) <= total.err + first.err + mpmath.mpf("1e-22")


def test_negative_strip_reflection(family):
    v = mpmath.mpf(3)
    reflected = family.p4w(v, -1, 20)
    with mpmath.workdps(40):
        direct = family.p4w(mpmath.pi ** 2 / v, 0, 20)
    assert abs(reflected.value - direct.value) <= reflected.err + direct.err


def test_density_of_zero_strip_is_g0(family):
    y = mpmath.mpf("-0.4")
    assert abs(family.density(y, 0, 20).value - family.g0(y, 20).value) < mpmath.mpf("1e-18")


def test_lambda_at_zero(family):
    """λ(0) = −c(0) + 2·P₀(π)."""
    value = family.lambda_fn(0, 25)
    with mpmath.workdps(45):
        expected = -2 / (mpmath.pi * reference_xi(mpmath.mpf(1) / 2)) + 2 * _reference_p0(mpmath.pi)
    assert abs(value.value - expected) <= value.err + mpmath.mpf("1e-22")
    assert value.value < 0


def test_lambda_is_even(family):
    left = family.lambda_fn(mpmath.mpf("0.7"), 20)
    right = family.lambda_fn(mpmath.mpf("-0.7"), 20)
    assert abs(left.value - right.value) <= left.err + right.err


def test_lambda_beyond_y_max(family):
    with pytest.raises(PrecisionCeilingError):
        family.lambda_fn(family.y_max + 1, 20)


def test_lambda_taylor_constant_term(family):
    assert abs(family.lambda_taylor(0, 20).value - family.lambda_fn(0, 20).value) < mpmath.mpf("1e-17")


def test_lambda_complex_on_imaginary_axis(family):
    """j(iu) = −c(0) − 2Σ c_res(4k)·cos(4ku)."""
    u = mpmath.mpf("0.3")
    value = family.lambda_complex(mpmath.mpc(0, u), 20)
    with mpmath.workdps(40):
        c0 = 2 / (mpmath.pi * reference_xi(mpmath.mpf(1) / 2))
        expected = -c0 - 2 * mpmath.fsum(reference_c_res(k) * mpmath.cos(4 * k * u) for k in range(1, 40))
    assert abs(value.value - expected) <= value.err + mpmath.mpf("1e-17")


def test_precision_plan():
    assert precision_plan(0) == GUARD_DIGITS
    assert precision_plan(10) < precision_plan(1000) < precision_plan(mpmath.pi * mpmath.exp(9))
    # the peak term of P₀(v) sits near e^v
    assert precision_plan(mpmath.pi * mpmath.exp(9)) > 10000
    with pytest.raises(InvalidInputError):
        precision_plan(-1)


def test_a_bound_covers_lambda(spectral_family):
    assert spectral_family.A_bound.value > abs(spectral_family.lambda_fn(1, 20).value)


def test_eq_star_needs_negative_y(spectral_family):
    with pytest.raises(InvalidInputError):
        spectral_family.eq_star_residual(mpmath.mpf("0.5"), 20)


def test_eq_star_needs_zeros(family):
    with pytest.raises(InsufficientZerosError):
        family.eq_star_residual(mpmath.mpf(-1), 20)


def test_eq_star_residual_is_small(spectral_family):
    """Thirty zeros already pin g₀(−1) to a few hundredths."""
    estimate = spectral_family.eq_star_residual(mpmath.mpf(-1), 20)
    assert abs(estimate.residual.value) < mpmath.mpf("3e-2")
    assert estimate.details["n_zeros"] == 30


def test_strip_violation(family):
    with pytest.raises(StripViolationError):
        family.strip_laplace(mpmath.mpf("4.5"), 0, 1)


def test_char_bound_on_first_strips(family):
    for x in (1, 5):
        scan = family.char_bound_check(x, [mpmath.mpf("0.5"), 1, 3])
        assert scan.passed, scan.notes
        assert scan.margin >= 0


def test_char_bound_rejects_pole(family):
    with pytest.raises(StripViolationError):
        family.char_bound_check(4, [1])


def test_positivity_scan(family):
    scan = family.positivity_scan(points=10, y_top=3.0)
    assert scan.passed
    assert scan.reduced_coverage
    assert len(scan.rows()) == 10


def test_boundedness_scan(spectral_family):
    scan = spectral_family.boundedness_scan()
    assert scan.passed, scan.notes
    assert scan.reduced_coverage


@pytest.mark.slow
def test_laplace_representation(family):
    """∫ e^{sy}g₀(y) dy over [−Y, Y] reproduces f(s) within the tail bounds."""
    result = family.laplace_f(mpmath.mpf(2), 2)
    assert result.residual <= result.bound
