import mpmath
import pytest

from zeta_laplace_lab.hpvalue import HPComplexValue, HPValue, as_complex, as_real


def test_errors_add_under_addition():
    """Absolute error bounds of the operands are summed."""
    a = HPValue(mpmath.mpf(1), mpmath.mpf("1e-10"), 30)
    b = HPValue(mpmath.mpf(2), mpmath.mpf("2e-10"), 30)
    total = a + b
    assert total.value == 3
    assert total.err >= mpmath.mpf("3e-10")
    assert total.err < mpmath.mpf("3.1e-10")


def test_product_error_is_first_order():
    a = HPValue(mpmath.mpf(3), mpmath.mpf("1e-8"), 30)
    b = HPValue(mpmath.mpf(5), mpmath.mpf("1e-8"), 30)
    product = a * b
    assert product.value == 15
    assert product.err >= mpmath.mpf("8e-8")


def test_negative_error_is_rejected():
    with pytest.raises(ValueError):
        HPValue(mpmath.mpf(1), mpmath.mpf(-1), 20)


def test_division_by_unresolved_zero():
    """A divisor whose interval contains zero cannot be inverted."""
    numerator = HPValue(mpmath.mpf(1), mpmath.mpf(0), 20)
    divisor = HPValue(mpmath.mpf("1e-12"), mpmath.mpf("1e-10"), 20)
    with pytest.raises(ZeroDivisionError):
        numerator / divisor


def test_real_times_complex_is_complex():
    product = HPValue(mpmath.mpf(2), mpmath.mpf(0), 20) * HPComplexValue(mpmath.mpc(0, 1), mpmath.mpf(0), 20)
    assert isinstance(product, HPComplexValue)
    assert product.value == mpmath.mpc(0, 2)


def test_precision_is_the_smaller_operand():
    a = HPValue(mpmath.mpf(1), mpmath.mpf(0), 50)
    b = HPValue(mpmath.mpf(1), mpmath.mpf(0), 20)
    assert (a + b).prec == 20


def test_contains_and_coercion():
    value = as_real("0.5", 30)
    assert value.err == 0
    assert value.contains(mpmath.mpf("0.5"))
    assert not value.with_err(mpmath.mpf("1e-5")).contains(mpmath.mpf("0.6"))
    assert as_complex(value, 30).value == mpmath.mpc("0.5")


def test_to_dict_keeps_requested_digits():
    with mpmath.workdps(40):
        value = HPValue(+mpmath.pi, mpmath.mpf("1e-30"), 30)
    document = value.to_dict(digits=10)
    assert document["value"] == "3.141592654"
    assert document["err"] == "1.0e-30"


def test_arithmetic_ignores_ambient_precision():
    """Operations keep the operands' digits under the default 15-digit context."""
    with mpmath.workdps(40):
        third = HPValue(mpmath.mpf(1) / 3, mpmath.mpf(0), 40)
    assert mpmath.mp.dps == 15
    negated = -third
    doubled = third + third
    difference = doubled - third
    product = third * third
    quotient = third / 7
    with mpmath.workdps(60):
        exact = mpmath.mpf(1) / 3
        assert abs(negated.value + exact) <= negated.err + mpmath.mpf("1e-40")
        assert abs(doubled.value - 2 * exact) <= doubled.err + mpmath.mpf("1e-40")
        assert abs(difference.value - exact) <= difference.err + mpmath.mpf("1e-40")
        assert abs(product.value - exact ** 2) <= product.err + mpmath.mpf("1e-40")
        assert abs(quotient.value - exact / 7) <= quotient.err + mpmath.mpf("1e-40")


def test_complex_arithmetic_ignores_ambient_precision():
    with mpmath.workdps(40):
        z = HPComplexValue(mpmath.mpc(1, 1) / 3, mpmath.mpf(0), 40)
    square = z * z
    with mpmath.workdps(60):
        exact = (mpmath.mpc(1, 1) / 3) ** 2
        assert abs(square.value - exact) <= square.err + mpmath.mpf("1e-40")
        assert abs(z.conjugate().value - mpmath.conj(mpmath.mpc(1, 1) / 3)) < mpmath.mpf("1e-40")


def test_real_value_rejects_complex():
    with pytest.raises(TypeError):
        HPValue(mpmath.mpc(1, 0), mpmath.mpf(0), 20)
