"""Poisson transform of an even entire function and its continuation to the whole plane.

For h(u) = j(u²) = Σ j_k u^{2k} with |h(y)| ≤ K·y^θ (θ < 1) on the real axis,

    h#(z) := z·∫_0^∞ h(y)/(y²+z²) dy                          (Re z > 0)
           = Σ_{k≥0} (−1)^k c(h,k) z^{2k+1} + (π/2)·h(iz)      (all z)

where c(h,k) = c(h,k,ω) for every ω > 0. Splitting the integral at ω gives
S(z,ω) over [ω, ∞), S≤(z,ω) over [0, ω], and the entire remainder Δ(z,ω).
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import mpmath
import singer

from zeta_laplace_lab.hiprec_zeta import GUARD_DIGITS
from zeta_laplace_lab.hpvalue import HPBase, HPComplexValue, HPValue, as_complex, rounding_bound
from zeta_laplace_lab.utils import (
    BranchCutError,
    CoefficientExhaustedError,
    InvalidInputError,
    TailBudgetError,
)

LOGGER = singer.get_logger()

MAX_TERMS = 4000
MAX_DEPTH = 400
QUAD_Y = 1000


@dataclass
class EvenEntire:
    """h(u) = j(u²): Taylor data, an evaluator and the real-axis growth envelope K·y^θ."""
    coefficient: Callable[[int, int], HPValue]
    evaluate: Callable[[object, int], HPBase]
    K: mpmath.mpf
    theta: float
    radius_hint: float = 1.0
    max_modulus: Optional[Callable[[mpmath.mpf], mpmath.mpf]] = None
    moment: Optional[Callable[[int, mpmath.mpf, int], HPValue]] = None
    tail_transform: Optional[Callable[[mpmath.mpc, mpmath.mpf, int], HPComplexValue]] = None
    frequency: Optional[mpmath.mpf] = None
    y_limit: Optional[float] = None
    name: str = "h"
    _taylor: Dict[int, HPValue] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.theta >= 1:
            raise InvalidInputError(f"growth exponent theta must be below 1, got {self.theta}")

    def taylor(self, k: int, digits: int) -> HPValue:
        cached = self._taylor.get(k)
        if cached is None or cached.prec < digits:
            cached = self.coefficient(k, digits)
            self._taylor[k] = cached
        return cached

    def __call__(self, u, digits: int) -> HPBase:
        return self.evaluate(u, digits)

    def taylor_value(self, u, digits: int, terms: int = 60) -> mpmath.mpc:
        """Partial Taylor sum, for checking the evaluator inside radius_hint."""
        with mpmath.workdps(digits + GUARD_DIGITS):
            u_square = mpmath.mpc(u) ** 2
            total = mpmath.mpc(0)
            power = mpmath.mpc(1)
            for k in range(terms):
                total += self.taylor(k, digits).value * power
                power *= u_square
            return total

    @classmethod
    def constant(cls, c=1) -> "EvenEntire":
        def coefficient(k, digits):
            with mpmath.workdps(digits + GUARD_DIGITS):
                return HPValue(mpmath.mpf(c) if k == 0 else mpmath.mpf(0), mpmath.mpf(0), digits)

        def evaluate(u, digits):
            with mpmath.workdps(digits + GUARD_DIGITS):
                return HPComplexValue(mpmath.mpc(c), mpmath.mpf(0), digits)

        def moment(k, omega, digits):
            with mpmath.workdps(digits + GUARD_DIGITS):
                value = mpmath.mpf(c) * omega ** (-2 * k - 1) / (2 * k + 1)
                return HPValue(value, rounding_bound(abs(value), digits + GUARD_DIGITS), digits)

        def tail_transform(z, omega, digits):
            # ∫_ω^∞ dy/(y²+z²) = arctan(z/ω)/z, even in z
            with mpmath.workdps(digits + GUARD_DIGITS):
                if z == 0:
                    value = mpmath.mpc(mpmath.mpf(c) / omega)
                else:
                    value = mpmath.mpf(c) * mpmath.atan(z / omega) / z
                return HPComplexValue(value, rounding_bound(abs(value), digits + 2), digits)

        with mpmath.workdps(20):
            size = abs(mpmath.mpf(c))
        return cls(coefficient, evaluate, size, 0.0, 1.0, lambda radius: size, moment, tail_transform,
                   name=f"constant({c})")

    @classmethod
    def cosine(cls, a=1) -> "EvenEntire":
        """h(u) = cos(a·u), j_k = (−1)^k a^{2k}/(2k)!."""
        def coefficient(k, digits):
            with mpmath.workdps(digits + GUARD_DIGITS):
                frequency = mpmath.mpf(a)
                value = (-1) ** k * frequency ** (2 * k) / mpmath.factorial(2 * k)
                return HPValue(value, rounding_bound(abs(value), digits + GUARD_DIGITS), digits)

        def evaluate(u, digits):
            with mpmath.workdps(digits + GUARD_DIGITS):
                value = mpmath.cos(mpmath.mpf(a) * mpmath.mpc(u))
                return HPComplexValue(value, rounding_bound(abs(value) + 1, digits + GUARD_DIGITS), digits)

        def moment(k, omega, digits):
            # ∫_ω^∞ y^{−n} e^{iay} dy = ω^{1−n}·E_n(−iaω), n = 2k+2
            with mpmath.workdps(digits + GUARD_DIGITS):
                n = 2 * k + 2
                frequency = mpmath.mpf(a)
                value = mpmath.re(omega ** (1 - n) * mpmath.expint(n, mpmath.mpc(0, -frequency * omega)))
                err = rounding_bound(abs(value) + omega ** (1 - n), digits + GUARD_DIGITS - 2)
                return HPValue(value, err, digits)

        if a == 0:
            return cls.constant(1)
        return cls(
            coefficient,
            evaluate,
            mpmath.mpf(1),
            0.0,
            radius_hint=1.0,
            max_modulus=lambda radius: mpmath.cosh(mpmath.mpf(a) * radius),
            moment=moment,
            frequency=mpmath.mpf(a),
            name=f"cos({a}y)",
        )

    @classmethod
    def from_taylor(cls, coefficients, K, theta: float, evaluate=None, **options) -> "EvenEntire":
        """h from a finite or callable list of j_k; missing coefficients are zero."""
        def coefficient(k, digits):
            with mpmath.workdps(digits + GUARD_DIGITS):
                if callable(coefficients):
                    value = coefficients(k)
                else:
                    value = coefficients[k] if k < len(coefficients) else 0
                if isinstance(value, HPValue):
                    return value
                return HPValue(mpmath.mpf(value), mpmath.mpf(0), digits)

        def taylor_evaluate(u, digits):
            with mpmath.workdps(digits + GUARD_DIGITS):
                u_square = mpmath.mpc(u) ** 2
                total = mpmath.mpc(0)
                power = mpmath.mpc(1)
                for k in range(len(coefficients)):
                    total += coefficient(k, digits).value * power
                    power *= u_square
                return HPComplexValue(total, rounding_bound(abs(total) + 1, digits + GUARD_DIGITS - 2), digits)

        if evaluate is None and callable(coefficients):
            raise InvalidInputError("an evaluator is required when the coefficients are given as a callable")
        return cls(coefficient, evaluate or taylor_evaluate, mpmath.mpf(K), theta, **options)

    @classmethod
    def from_lambda(cls, family) -> "EvenEntire":
        """j, the entire extension of λ, with growth (A, θ = 0) and evaluations capped at y_max."""
        poles = family.poles

        def coefficient(k, digits):
            return family.lambda_taylor(k, digits)

        def evaluate(u, digits):
            return family.lambda_complex(u, digits)

        def max_modulus(radius):
            with mpmath.workdps(20):
                coefficients = poles.real_coefficients(poles.K_trunc, 20)
                total = abs(poles.c0.value)
                for k, c in enumerate(coefficients, start=1):
                    total += 2 * abs(c.value) * mpmath.cosh(4 * k * radius)
                return total

        return cls(
            coefficient,
            evaluate,
            family.A_bound.value,
            0.0,
            radius_hint=1.0,
            max_modulus=max_modulus,
            y_limit=family.y_max,
            name="lambda",
        )


def taylor_majorant(r, theta: float) -> mpmath.mpf:
    """E(r) = 1/(1−θ) − ½·log(1−r²), which bounds Σ_w r^{2w}/(2w+1−θ) for r < 1."""
    with mpmath.workdps(20):
        return 1 / (1 - mpmath.mpf(theta)) - mpmath.log(1 - mpmath.mpf(r) ** 2) / 2


def _coefficient_tail(h: EvenEntire, last: int, radius, scale, last_term) -> mpmath.mpf:
    """Bound on Σ_{m>last} |j_m|·(m+1)·radius^{2m}·scale.

    Uses Cauchy's estimate |j_m| ≤ M(B)·B^{−2m} on the circle B = max(radius_hint, 2·radius)
    when the maximum modulus is known, and twice the last term otherwise.
    """
    with mpmath.workdps(20):
        if h.max_modulus is None or radius == 0:
            return 2 * abs(last_term) * (last + 2)
        circle = max(mpmath.mpf(h.radius_hint), 2 * mpmath.mpf(radius))
        q = (mpmath.mpf(radius) / circle) ** 2
        return h.max_modulus(circle) * q ** (last + 1) * (last + 2) / (1 - q) ** 2 * abs(scale)


def _sum_coefficients(h: EvenEntire, weight: Callable[[int], object], start: int, radius, scale,
                      digits: int) -> Tuple[mpmath.mpc, mpmath.mpf]:
    """Σ_{m≥start} j_m·weight(m) for weights bounded by (m+1)·radius^{2m}·scale, to 10^−digits."""
    eps = mpmath.mpf(10) ** (-digits)
    total = mpmath.mpc(0)
    err = mpmath.mpf(0)
    m = start
    while True:
        coefficient = h.taylor(m, digits)
        factor = weight(m)
        term = coefficient.value * factor
        total += term
        err += coefficient.err * abs(factor)
        if m >= start + 2:
            tail = _coefficient_tail(h, m, radius, scale, term)
            if tail < eps:
                return total, err + tail + eps
        m += 1
        if m - start > MAX_TERMS:
            raise CoefficientExhaustedError(
                f"Taylor coefficients of {h.name} did not converge within {MAX_TERMS} terms"
            )


def _check_cut(z, omega, prec: int) -> None:
    """z must stay 10^−prec away from the cut iω·(ℝ∖(−1,1))."""
    tolerance = mpmath.mpf(10) ** (-prec)
    if abs(mpmath.re(z)) < tolerance and abs(mpmath.im(z)) >= omega - tolerance:
        raise BranchCutError(f"z = {mpmath.nstr(z, 10)} lies on the cut i*omega*(R - (-1, 1)) with omega={mpmath.nstr(omega, 6)}")


def arctan_principal(u, prec: int = 30) -> HPComplexValue:
    """Principal arctan: real in (−π/2, π/2) on ℝ, cut along i·(ℝ∖(−1,1))."""
    u = as_complex(u, prec)
    with mpmath.workdps(prec + GUARD_DIGITS):
        _check_cut(u.value, mpmath.mpf(1), prec)
        value = mpmath.atan(u.value)
        err = u.err / abs(1 + u.value ** 2) + rounding_bound(abs(value), prec + GUARD_DIGITS)
        return HPComplexValue(value, err, prec)


def arccot_principal(u, prec: int = 30) -> HPComplexValue:
    """arccot(u) := π/2 − arctan(u)."""
    with mpmath.workdps(prec + GUARD_DIGITS):
        arctan = arctan_principal(u, prec)
        return HPComplexValue(mpmath.pi / 2 - arctan.value, arctan.err, prec)


def _moment(h: EvenEntire, k: int, omega, digits: int, quad_Y=QUAD_Y) -> HPValue:
    """∫_ω^∞ y^{−2(k+1)}·h(y) dy, closed form when h provides one."""
    if h.moment is not None:
        return h.moment(k, omega, digits)
    with mpmath.workdps(digits + GUARD_DIGITS):
        Y = mpmath.mpf(min(quad_Y, h.y_limit) if h.y_limit else quad_Y)
        if Y <= omega:
            raise TailBudgetError(f"omega = {omega} is beyond the evaluation limit {Y} of {h.name}", achievable=mpmath.inf)

        def integrand(y):
            return mpmath.re(h(y, digits).value) * y ** (-2 * k - 2)

        value, quadrature_err = mpmath.quad(integrand, [omega, (omega + Y) / 2, Y], error=True)
        exponent = 2 * k + 1 - mpmath.mpf(h.theta)
        tail = h.K * Y ** (-exponent) / exponent
        return HPValue(value, mpmath.mpf(quadrature_err) + tail, digits)


def c_hk(h: EvenEntire, k: int, omega, prec: int, tolerance=None, quad_Y=QUAD_Y) -> HPValue:
    """c(h,k,ω) = ∫_{y≥ω} y^{−2(k+1)}·h(y) dy + Σ_{n≥−k} j_{n+k}·ω^{2n−1}/(2n−1).

    The two parts cancel down to the Maclaurin data of h#, so the working
    precision covers the size ω^{−2k−1} of the n = −k term.
    """
    with mpmath.workdps(20):
        estimate = mpmath.mpf(omega)
        if estimate <= 0:
            raise InvalidInputError(f"omega must be positive, got {omega}")
        scale = estimate ** (-2 * k - 1)
        size = scale * (h.max_modulus(estimate) if h.max_modulus else 1)
        extra = int(mpmath.ceil(max(0, mpmath.log10(size)))) if size > 0 else 0
    working = prec + GUARD_DIGITS + extra
    with mpmath.workdps(working):
        omega = mpmath.mpf(omega)
        integral = _moment(h, k, omega, working, quad_Y)

        def weight(m):
            n = m - k
            return omega ** (2 * n - 1) / (2 * n - 1)

        laurent, laurent_err = _sum_coefficients(h, weight, 0, omega, scale, prec + GUARD_DIGITS)
        value = integral.value + mpmath.re(laurent)
        err = integral.err + laurent_err + rounding_bound(size, working - 2)

    if tolerance is not None and err > tolerance:
        raise TailBudgetError(
            f"c({h.name}, {k}, {mpmath.nstr(omega, 6)}) reaches only {mpmath.nstr(err, 3)}, "
            f"above the requested {mpmath.nstr(mpmath.mpf(tolerance), 3)}",
            achievable=err,
        )
    return HPValue(value, err, prec)


def limit_sum(h: EvenEntire, k: int, omega, prec: int) -> HPValue:
    """Σ_{n≥1} j_{n+k}·ω^{2n−1}/(2n−1), the large-ω form of c(h,k)."""
    with mpmath.workdps(20):
        estimate = mpmath.mpf(omega)
        size = h.max_modulus(estimate) if h.max_modulus else mpmath.mpf(1)
        extra = int(mpmath.ceil(max(0, mpmath.log10(size * estimate ** (2 * k + 1)))))
    working = prec + GUARD_DIGITS + extra
    with mpmath.workdps(working):
        omega = mpmath.mpf(omega)

        def weight(m):
            n = m - k
            return omega ** (2 * n - 1) / (2 * n - 1)

        total, err = _sum_coefficients(h, weight, k + 1, omega, omega ** (-2 * k - 1), prec + GUARD_DIGITS)
        return HPValue(mpmath.re(total), err, prec)


def S_eval(h: EvenEntire, z, omega, prec: int, quad_Y=QUAD_Y, method: str = "auto") -> HPComplexValue:
    """S(z,ω) = ∫_{y≥ω} h(y)/(y²+z²) dy: Taylor series in z for |z| < ω, quadrature otherwise.

    method is "auto", "taylor" or "quadrature"; auto takes the series when |z| ≤ ω/2.
    """
    z = as_complex(z, prec)
    with mpmath.workdps(prec + GUARD_DIGITS):
        omega = mpmath.mpf(omega)
        _check_cut(z.value, omega, prec)
        if h.tail_transform is not None and method == "auto":
            return h.tail_transform(z.value, omega, prec)
        ratio = abs(z.value) / omega
        if method == "taylor":
            if ratio >= 1:
                raise InvalidInputError(f"the S Taylor series needs |z| < omega, got |z|/omega = {mpmath.nstr(ratio, 6)}")
            return _s_taylor(h, z.value, omega, prec, quad_Y)
        if method == "quadrature":
            return _s_quadrature(h, z.value, omega, prec, quad_Y)
        if ratio <= mpmath.mpf(1) / 2 and (h.moment is not None or h.y_limit is None):
            return _s_taylor(h, z.value, omega, prec, quad_Y)
        return _s_quadrature(h, z.value, omega, prec, quad_Y)


def _s_taylor(h: EvenEntire, z, omega, prec: int, quad_Y) -> HPComplexValue:
    """Σ_w (−z²)^w·∫_ω^∞ y^{−2w−2}h(y) dy, truncated by the K·ω^{θ−2w−1}/(2w+1−θ) moment bound."""
    working = prec + GUARD_DIGITS
    eps = mpmath.mpf(10) ** (-(prec + 2))
    ratio_square = abs(z / omega) ** 2
    step = -z * z
    total = mpmath.mpc(0)
    err = mpmath.mpf(0)
    power = mpmath.mpc(1)
    theta = mpmath.mpf(h.theta)
    envelope = h.K * omega ** (theta - 1)
    w = 0
    while True:
        moment = _moment(h, w, omega, working, quad_Y)
        total += power * moment.value
        err += abs(power) * moment.err
        power *= step
        w += 1
        tail = envelope * ratio_square ** w / ((2 * w + 1 - theta) * (1 - ratio_square))
        if tail < eps:
            return HPComplexValue(total, err + tail + rounding_bound(abs(total), working - 2), prec)
        if w > MAX_TERMS:
            raise CoefficientExhaustedError(f"S Taylor series for {h.name} did not converge")


def _s_quadrature(h: EvenEntire, z, omega, prec: int, quad_Y) -> HPComplexValue:
    working = prec + GUARD_DIGITS

    def integrand(y):
        return h(y, working).value / (y * y + z * z)

    if h.frequency is not None:
        value = mpmath.quadosc(integrand, [omega, mpmath.inf], omega=h.frequency)
        # quadosc gives no error estimate; its extrapolated sum is trusted to the working precision less guard
        err = (abs(value) + 1) * mpmath.mpf(10) ** (-(prec + 2))
        return HPComplexValue(mpmath.mpc(value), err, prec)

    Y = mpmath.mpf(min(quad_Y, h.y_limit) if h.y_limit else quad_Y)
    if Y <= max(omega, abs(z)):
        raise TailBudgetError(
            f"quadrature cutoff {Y} does not exceed max(omega, |z|) for {h.name}", achievable=mpmath.inf
        )
    value, quadrature_err = mpmath.quad(integrand, [omega, (omega + Y) / 2, Y], error=True)
    theta = mpmath.mpf(h.theta)
    tail = h.K * Y ** (theta - 1) / ((1 - theta) * (1 - (abs(z) / Y) ** 2))
    return HPComplexValue(mpmath.mpc(value), mpmath.mpf(quadrature_err) + tail, prec)


def delta_eval(h: EvenEntire, z, omega, prec: int) -> HPComplexValue:
    """Δ(z,ω) = Σ_{w≥0}(−z²)^w·Σ_{k≥w+1} j_k·ω^{2(k−w)−1}/(2(k−w)−1), an entire function of z.

    Summed over k with D_k = Σ_{n=1}^{k} (−z²)^{k−n}·ω^{2n−1}/(2n−1), which obeys
    D_{k+1} = −z²·D_k + ω^{2k+1}/(2k+1) and |D_k| ≤ k·R^{2k−1} for R = max(|z|, ω).
    """
    z = as_complex(z, prec)
    with mpmath.workdps(20):
        omega_low = mpmath.mpf(omega)
        radius = max(abs(z.value), omega_low)
        size = h.max_modulus(radius) if h.max_modulus else mpmath.mpf(1)
        extra = int(mpmath.ceil(max(0, mpmath.log10(size * radius + 1))))
    working = prec + GUARD_DIGITS + extra
    with mpmath.workdps(working):
        omega = mpmath.mpf(omega)
        step = -z.value * z.value
        partial: List[mpmath.mpc] = [mpmath.mpc(0)]

        def weight(k):
            while len(partial) <= k:
                n = len(partial)
                partial.append(step * partial[-1] + omega ** (2 * n - 1) / (2 * n - 1))
            return partial[k]

        total, err = _sum_coefficients(h, weight, 1, radius, 1 / radius, prec + GUARD_DIGITS)
        if z.err:
            err += z.err * abs(total) * 2 * abs(z.value) / radius ** 2
        return HPComplexValue(total, err, prec)


def s_leq_eval(h: EvenEntire, z, omega, prec: int) -> HPComplexValue:
    """S≤(z,ω) from z·S≤ = z·Δ(z,ω) + h(iz)·arccot(z/ω)."""
    z = as_complex(z, prec)
    with mpmath.workdps(prec + GUARD_DIGITS):
        if z.value == 0:
            raise InvalidInputError("S<= diverges at z = 0")
        omega = mpmath.mpf(omega)
        delta = delta_eval(h, z, omega, prec)
        rotated = h(mpmath.mpc(0, 1) * z.value, prec)
        angle = arccot_principal(z.value / omega, prec)
        value = delta.value + rotated.value * angle.value / z.value
        err = delta.err + (abs(rotated.value) * angle.err + rotated.err * abs(angle.value)) / abs(z.value)
        return HPComplexValue(value, err + rounding_bound(abs(value), prec + GUARD_DIGITS - 2), prec)


@dataclass
class PoissonDecomposition:
    """S, S≤, Δ and the c(h,k) list of one h at a fixed split point ω."""
    h: EvenEntire
    omega: mpmath.mpf = field(default_factory=lambda: mpmath.mpf(1))
    prec: int = 50
    quad_Y: float = QUAD_Y
    max_depth: int = MAX_DEPTH
    _c: Dict[int, HPValue] = field(default_factory=dict, repr=False)

    def S(self, z) -> HPComplexValue:
        return S_eval(self.h, z, self.omega, self.prec, self.quad_Y)

    def S_leq(self, z) -> HPComplexValue:
        return s_leq_eval(self.h, z, self.omega, self.prec)

    def Delta(self, z) -> HPComplexValue:
        return delta_eval(self.h, z, self.omega, self.prec)

    def c(self, k: int, digits: Optional[int] = None) -> HPValue:
        digits = digits or self.prec
        cached = self._c.get(k)
        if cached is None or cached.prec < digits:
            cached = c_hk(self.h, k, self.omega, digits, quad_Y=self.quad_Y)
            self._c[k] = cached
        return cached

    def c_list(self, k_max: int) -> List[HPValue]:
        return [self.c(k) for k in range(k_max + 1)]

    def _odd_tail(self, last: int, size, term) -> mpmath.mpf:
        """Bound on Σ_{k>last} |c(h,k)|·|z|^{2k+1} at |z| = size.

        c(h,k) is the same for every split point, so at ω′ = max(ω, 2|z|) the moment
        bound and Cauchy's estimate give |c(h,k)| ≤ ω′^{−2k−1}·(K·ω′^θ/(2k+1−θ) + Σ_m |j_m|·ω′^{2m}).
        Without a maximum modulus only twice the last term is available.
        """
        with mpmath.workdps(20):
            if size == 0:
                return mpmath.mpf(0)
            if self.h.max_modulus is None:
                return 2 * abs(term)
            radius = max(mpmath.mpf(self.omega), 2 * size)
            r = size / radius
            moments = self.h.K * radius ** mpmath.mpf(self.h.theta) * taylor_majorant(r, self.h.theta)
            laurent = _coefficient_tail(self.h, -1, radius, 1, term) / (1 - r ** 2)
            return r ** (2 * last + 3) * (moments + laurent)

    def h_one(self, z) -> HPComplexValue:
        """Odd part Σ_{k≥0} (−1)^k c(h,k) z^{2k+1}, summed until the coefficient bound of the rest is negligible."""
        z = as_complex(z, self.prec)
        with mpmath.workdps(20):
            size = abs(z.value)
            log_size = mpmath.log10(size) if z.value != 0 else mpmath.mpf(0)
        eps = mpmath.mpf(10) ** (-(self.prec + 1))
        total = mpmath.mpc(0)
        err = mpmath.mpf(0)
        k = 0
        while True:
            if k > self.max_depth:
                raise CoefficientExhaustedError(
                    f"h# series for {self.h.name} at z={mpmath.nstr(z.value, 8)} needs more than {self.max_depth} terms"
                )
            extra = max(0, int(mpmath.ceil((2 * k + 1) * log_size)))
            coefficient = self.c(k, self.prec + extra)
            with mpmath.workdps(self.prec + extra + GUARD_DIGITS):
                power = z.value ** (2 * k + 1)
                term = (-1) ** k * coefficient.value * power
                total += term
                err += abs(power) * coefficient.err
            tail = self._odd_tail(k, size, term)
            if tail < eps:
                break
            k += 1
        with mpmath.workdps(self.prec + GUARD_DIGITS):
            return HPComplexValue(total, err + tail + eps, self.prec)

    def h_sharp(self, z) -> HPComplexValue:
        """h#(z) = Σ_{k≥0} (−1)^k c(h,k) z^{2k+1} + (π/2)·h(iz)."""
        z = as_complex(z, self.prec)
        odd = self.h_one(z)
        with mpmath.workdps(self.prec + GUARD_DIGITS):
            even = self.h(mpmath.mpc(0, 1) * z.value, self.prec)
            value = odd.value + mpmath.pi / 2 * even.value
            return HPComplexValue(value, odd.err + mpmath.pi / 2 * even.err, self.prec)

    def h_sharp_split(self, z) -> HPComplexValue:
        """h#(z) = z·(S(z,ω) + Δ(z,ω)) + h(iz)·arccot(z/ω), valid off the cut iωL."""
        z = as_complex(z, self.prec)
        with mpmath.workdps(self.prec + GUARD_DIGITS):
            tail = self.S(z)
            delta = self.Delta(z)
            rotated = self.h(mpmath.mpc(0, 1) * z.value, self.prec)
            angle = arccot_principal(z.value / self.omega, self.prec)
            value = z.value * (tail.value + delta.value) + rotated.value * angle.value
            err = (abs(z.value) * (tail.err + delta.err) + abs(rotated.value) * angle.err
                   + rotated.err * abs(angle.value))
            return HPComplexValue(value, err, self.prec)

    def half_plane_transform(self, z) -> HPComplexValue:
        """z·(S(z,ω) + S≤(z,ω)), the defining integral for Re z > 0."""
        z = as_complex(z, self.prec)
        with mpmath.workdps(self.prec + GUARD_DIGITS):
            tail = self.S(z)
            head = self.S_leq(z)
            value = z.value * (tail.value + head.value)
            return HPComplexValue(value, abs(z.value) * (tail.err + head.err), self.prec)


def h_sharp(h: EvenEntire, z, prec: int, omega=1) -> HPComplexValue:
    return PoissonDecomposition(h, mpmath.mpf(omega), prec).h_sharp(z)


def h_one(h: EvenEntire, z, prec: int, omega=1) -> HPComplexValue:
    return PoissonDecomposition(h, mpmath.mpf(omega), prec).h_one(z)


def h_sharp_split(h: EvenEntire, z, omega, prec: int) -> HPComplexValue:
    return PoissonDecomposition(h, mpmath.mpf(omega), prec).h_sharp_split(z)


def c_list(h: EvenEntire, k_max: int, omega, prec: int) -> List[HPValue]:
    return PoissonDecomposition(h, mpmath.mpf(omega), prec).c_list(k_max)
