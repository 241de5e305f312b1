import mpmath
import pytest

from zeta_laplace_lab import poisson
from zeta_laplace_lab.poisson import EvenEntire, PoissonDecomposition
from zeta_laplace_lab.utils import BranchCutError, InvalidInputError


def test_constant_tail_integral():
    """For h = 1, S(1, 1) = ∫_1^∞ dy/(y²+1) = π/4 and every c(h,k) vanishes."""
    h = EvenEntire.constant()
    value = poisson.S_eval(h, 1, 1, 30)
    with mpmath.workdps(40):
        assert abs(value.value - mpmath.pi / 4) <= value.err + mpmath.mpf("1e-29")
    assert abs(poisson.c_hk(h, 0, 1, 30).value) < mpmath.mpf("1e-28")
    assert abs(poisson.c_hk(h, 3, 2, 30).value) < mpmath.mpf("1e-28")


def test_constant_transform_is_flat():
    h = EvenEntire.constant()
    value = poisson.h_sharp(h, 2, 30)
    with mpmath.workdps(40):
        assert abs(value.value - mpmath.pi / 2) <= value.err + mpmath.mpf("1e-28")


def test_cosine_coefficients():
    """c(cos, k) = (−1)^{k+1}(π/2)/(2k+1)!, so c₀ = −π/2 and c₁ = π/12."""
    c0, c1 = poisson.c_list(EvenEntire.cosine(), 1, 1, 30)
    with mpmath.workdps(40):
        assert abs(c0.value + mpmath.pi / 2) <= c0.err + mpmath.mpf("1e-27")
        assert abs(c1.value - mpmath.pi / 12) <= c1.err + mpmath.mpf("1e-27")


def test_coefficients_do_not_depend_on_split_point():
    h = EvenEntire.cosine(2)
    near = poisson.c_hk(h, 2, mpmath.mpf("0.5"), 25)
    far = poisson.c_hk(h, 2, 3, 25)
    assert abs(near.value - far.value) <= near.err + far.err + mpmath.mpf("1e-22")


def test_cosine_transform():
    """cos(y)# = (π/2)·e^{−z}, on both sides of the imaginary axis."""
    h = EvenEntire.cosine()
    for z in (mpmath.mpf("1.3"), mpmath.mpf("-1.3")):
        value = poisson.h_sharp(h, z, 25)
        with mpmath.workdps(40):
            expected = mpmath.pi / 2 * mpmath.exp(-z)
        assert abs(value.value - expected) <= value.err + mpmath.mpf("1e-22")
    assert abs(poisson.h_sharp(h, mpmath.mpf("1.3"), 25).value - mpmath.mpf("0.42809")) < mpmath.mpf("1e-4")


def test_split_form_matches_series():
    h = EvenEntire.cosine()
    z = mpmath.mpc("0.8", "0.3")
    split = poisson.h_sharp_split(h, z, 2, 25)
    series = poisson.h_sharp(h, z, 25)
    assert abs(split.value - series.value) <= split.err + series.err + mpmath.mpf("1e-20")


def test_half_plane_transform_is_the_integral():
    decomposition = PoissonDecomposition(EvenEntire.cosine(), mpmath.mpf(1), 25)
    z = mpmath.mpf("1.3")
    integral = decomposition.half_plane_transform(z)
    with mpmath.workdps(40):
        expected = mpmath.pi / 2 * mpmath.exp(-z)
    assert abs(integral.value - expected) <= integral.err + mpmath.mpf("1e-12")


def test_taylor_and_quadrature_agree():
    h = EvenEntire.cosine()
    z = mpmath.mpf("0.4")
    taylor = poisson.S_eval(h, z, 1, 20, method="taylor")
    quadrature = poisson.S_eval(h, z, 1, 20, method="quadrature")
    assert abs(taylor.value - quadrature.value) <= taylor.err + quadrature.err + mpmath.mpf("1e-12")


def test_taylor_outside_disc():
    with pytest.raises(InvalidInputError):
        poisson.S_eval(EvenEntire.cosine(), 2, 1, 20, method="taylor")


def test_s_leq_at_origin():
    with pytest.raises(InvalidInputError):
        poisson.s_leq_eval(EvenEntire.cosine(), 0, 1, 20)


def test_limit_sum_approaches_coefficient():
    """|Σ_{n≥1} j_n ω^{2n−1}/(2n−1) − c(h,0)| ≤ 1/ω + 2/ω² for cos."""
    omega = mpmath.mpf(10)
    limit = poisson.limit_sum(EvenEntire.cosine(), 0, omega, 20)
    with mpmath.workdps(30):
        assert abs(limit.value + mpmath.pi / 2) <= 1 / omega + 2 / omega ** 2


def test_principal_arccot():
    with mpmath.workdps(40):
        assert abs(poisson.arccot_principal(1, 30).value - mpmath.pi / 4) < mpmath.mpf("1e-28")
        assert abs(poisson.arccot_principal(2, 30).value - mpmath.mpf("0.46364760900080611621")) < mpmath.mpf("1e-19")


def test_arctan_branch_cut():
    with pytest.raises(BranchCutError):
        poisson.arctan_principal(mpmath.mpc(0, 2), 20)


def test_growth_exponent_below_one():
    with pytest.raises(InvalidInputError):
        EvenEntire.from_taylor([1], 1, 1.0)


def test_callable_coefficients_need_evaluator():
    with pytest.raises(InvalidInputError):
        EvenEntire.from_taylor(lambda k: 0, 1, 0.5)


def test_taylor_value_matches_evaluator():
    h = EvenEntire.cosine(3)
    u = mpmath.mpc("0.4", "0.2")
    assert abs(h.taylor_value(u, 20) - h(u, 20).value) < mpmath.mpf("1e-18")


def _z_grid(count, radius=3):
    """count points with |z| ≤ radius, spread over every quadrant."""
    with mpmath.workdps(70):
        golden = (1 + mpmath.sqrt(5)) / 2
        return [
            mpmath.mpf(radius) * (j + 1) / count * mpmath.expjpi(2 * j / golden)
            for j in range(count)
        ]


@pytest.mark.parametrize("a", ["0.5", "1", "2"])
@pytest.mark.parametrize("k", range(11))
def test_coefficients_are_omega_invariant(a, k):
    h = EvenEntire.cosine(mpmath.mpf(a))
    first = poisson.c_hk(h, k, 1, 50)
    second = poisson.c_hk(h, k, 2, 50)
    assert abs(first.value - second.value) < mpmath.mpf("1e-40")


@pytest.mark.parametrize("k", range(11))
def test_constant_coefficients_vanish(k):
    assert abs(poisson.c_hk(EvenEntire.constant(), k, 1, 50).value) < mpmath.mpf("1e-45")


def test_constant_transform_on_grid():
    decomposition = PoissonDecomposition(EvenEntire.constant(), mpmath.mpf(1), 50)
    for z in _z_grid(30):
        value = decomposition.h_sharp(z)
        with mpmath.workdps(60):
            assert abs(value.value - mpmath.pi / 2) < mpmath.mpf("1e-45")


@pytest.mark.parametrize("z", ["0.7", "1.3+0.4j", "-2.1+1.1j", "0.2-2.5j"])
def test_odd_part_is_the_antisymmetric_part(z):
    """h#(z) − h#(−z) = 2·h₁(z)."""
    z = mpmath.mpc(complex(z))
    decomposition = PoissonDecomposition(EvenEntire.cosine(), mpmath.mpf(1), 30)
    plus = decomposition.h_sharp(z)
    minus = decomposition.h_sharp(-z)
    odd = decomposition.h_one(z)
    assert abs(plus.value - minus.value - 2 * odd.value) <= plus.err + minus.err + 2 * odd.err


def test_odd_part_error_covers_truncation():
    """h₁ of cos is (π/2)(e^{−z} − e^{z})/2 = −(π/2)·sinh(z)."""
    z = mpmath.mpf("2.5")
    odd = poisson.h_one(EvenEntire.cosine(), z, 30)
    with mpmath.workdps(50):
        expected = -mpmath.pi / 2 * mpmath.sinh(z)
    assert abs(odd.value - expected) <= odd.err
    assert odd.err < mpmath.mpf("1e-25")


@pytest.mark.slow
def test_half_plane_agreement_on_grid():
    decomposition = PoissonDecomposition(EvenEntire.cosine(), mpmath.mpf(1), 25)
    points = [z for z in _z_grid(40) if mpmath.re(z) > mpmath.mpf("0.1")][:20]
    assert len(points) == 20
    for z in points:
        integral = decomposition.half_plane_transform(z)
        series = decomposition.h_sharp(z)
        assert abs(integral.value - series.value) <= integral.err + series.err + mpmath.mpf("1e-12")


@pytest.mark.slow
@pytest.mark.parametrize("a", ["0.5", "1", "2"])
def test_cosine_transform_on_grid(a):
    """cos(ay)# = (π/2)·e^{−az} on 30 points in both half-planes."""
    frequency = mpmath.mpf(a)
    decomposition = PoissonDecomposition(EvenEntire.cosine(frequency), mpmath.mpf(1), 50)
    for z in _z_grid(30):
        value = decomposition.h_sharp(z)
        with mpmath.workdps(70):
            expected = mpmath.pi / 2 * mpmath.exp(-frequency * z)
        assert abs(value.value - expected) < mpmath.mpf("1e-40")
