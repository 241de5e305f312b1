import mpmath
import pytest

from zeta_laplace_lab import hiprec_zeta
from zeta_laplace_lab.utils import NoSignChangeError, PoleError

from zeta_laplace_lab.tests.conftest import reference_xi

with mpmath.workdps(60):
    FIRST_ZERO = mpmath.mpf("14.134725141734693790457251983562470270784257115699")


def test_zeta_at_two():
    value = hiprec_zeta.zeta(2, 40)
    with mpmath.workdps(60):
        assert value.contains(mpmath.pi ** 2 / 6)
        assert value.err < mpmath.mpf("1e-38")


def test_zeta_on_the_critical_line():
    """Euler–Maclaurin agrees with mpmath on the critical line."""
    s = mpmath.mpc("0.5", "30")
    value = hiprec_zeta.zeta(s, 30)
    with mpmath.workdps(50):
        assert abs(value.value - mpmath.zeta(s)) <= value.err + mpmath.mpf("1e-28")


def test_zeta_prime_at_two():
    value = hiprec_zeta.zeta_prime(2, 30)
    with mpmath.workdps(50):
        assert abs(value.value - mpmath.zeta(2, derivative=1)) <= value.err + mpmath.mpf("1e-28")


def test_zeta_pole():
    with pytest.raises(PoleError):
        hiprec_zeta.zeta(1, 20)


def test_precision_floor():
    with pytest.raises(ValueError):
        hiprec_zeta.zeta(2, 5)


def test_gamma_matches_library():
    value = hiprec_zeta.gamma_fn(mpmath.mpc("2.25", "3"), 30)
    with mpmath.workdps(50):
        expected = mpmath.gamma(mpmath.mpc("2.25", "3"))
        assert abs(value.value - expected) <= value.err + abs(expected) * mpmath.mpf("1e-28")


def test_xi_values():
    """ξ(0) = ξ(1) = ½ through the removable singularities, ξ(½) matches the closed form."""
    assert abs(hiprec_zeta.xi(0, 20).value - mpmath.mpf("0.5")) < mpmath.mpf("1e-18")
    assert abs(hiprec_zeta.xi(1, 20).value - mpmath.mpf("0.5")) < mpmath.mpf("1e-18")
    half = hiprec_zeta.xi(mpmath.mpf("0.5"), 30)
    with mpmath.workdps(50):
        assert abs(half.value - reference_xi(mpmath.mpf("0.5"))) < mpmath.mpf("1e-27")


def test_xi_symmetry():
    with mpmath.workdps(40):
        s = mpmath.mpc("0.3", "7")
        mirrored = 1 - s
    left = hiprec_zeta.xi(s, 25)
    right = hiprec_zeta.xi(mirrored, 25)
    assert abs(left.value - right.value) <= left.err + right.err


@pytest.mark.parametrize("real, imag", [("0.3", "7"), ("4.5", "0"), ("-1.2", "3.5"), ("0.5", "40")])
def test_xi_error_covers_reference(real, imag):
    with mpmath.workdps(40):
        s = mpmath.mpc(real, imag)
    value = hiprec_zeta.xi(s, 25)
    with mpmath.workdps(60):
        expected = reference_xi(s)
        assert abs(value.value - expected) <= value.err


def test_Xi_is_real_and_vanishes_at_a_zero():
    value = hiprec_zeta.Xi(FIRST_ZERO, 40)
    assert abs(value.value) < mpmath.mpf("1e-35")
    assert abs(hiprec_zeta.Xi(14, 20).value) > mpmath.mpf("1e-8")


@pytest.mark.parametrize("t", ["2", "5", "9", "14", "17", "23", "30", "37.5", "48", "60"])
def test_Xi_prime_matches_difference_quotient(t):
    assert hiprec_zeta.Xi_prime_check(mpmath.mpf(t), 30) < mpmath.mpf("1e-15")


def test_find_zero_polishes_to_the_requested_digits():
    zero = hiprec_zeta.find_zero((14, mpmath.mpf("14.3")), 40)
    assert zero.index == 1
    assert zero.source == hiprec_zeta.ZeroSource.bisection
    assert abs(zero.gamma.value - FIRST_ZERO) < mpmath.mpf("1e-37")
    assert zero.gamma.err < mpmath.mpf("1e-35")


def test_find_zero_without_sign_change():
    with pytest.raises(NoSignChangeError):
        hiprec_zeta.find_zero((15, 16), 20)


def test_scan_zeros():
    zeros = hiprec_zeta.scan_zeros(10, 26, mpmath.mpf("0.5"), 20)
    assert [zero.index for zero in zeros] == [1, 2, 3]
    assert abs(zeros[1].gamma.value - mpmath.mpf("21.022039638771554993")) < mpmath.mpf("1e-13")


def test_estimate_zero_index():
    assert hiprec_zeta.estimate_zero_index(mpmath.mpf("14.134725141734")) == 1


@pytest.mark.slow
def test_xi_symmetry_on_grid():
    """ξ(s) = ξ(1−s) at 200 points of the strip −½ < Re s < 1½."""
    for j in range(200):
        with mpmath.workdps(40):
            s = mpmath.mpc(mpmath.mpf(-1) / 2 + mpmath.mpf(j % 9) / 4, mpmath.mpf(j) * 3 / 10 + mpmath.mpf(1) / 10)
            mirrored = 1 - s
        left = hiprec_zeta.xi(s, 25)
        right = hiprec_zeta.xi(mirrored, 25)
        assert abs(left.value - right.value) <= left.err + right.err, s
