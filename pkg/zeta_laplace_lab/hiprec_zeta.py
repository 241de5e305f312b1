"""Arbitrary-precision ζ, ζ′, Γ, the completed factor F, ξ, Ξ and Ξ′ with error bounds.

ζ and ζ′ come from one Euler–Maclaurin pass (the derivative is the termwise
derivative of the same sum). Γ is the shifted Stirling series. Every public
function takes the precision in decimal digits and returns an HP value whose
err covers the truncation bound plus rounding at the working precision.
"""
import enum
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import mpmath
import singer

from zeta_laplace_lab.hpvalue import GUARD_DIGITS, HPComplexValue, HPValue, as_complex, as_real
from zeta_laplace_lab.utils import (
    NoSignChangeError,
    PoleError,
    PrecisionUnachievableError,
)

LOGGER = singer.get_logger()

# Above this height ζ on the critical line is delegated to mpmath's own evaluator.
EM_HEIGHT_LIMIT = 1000
TERM_CEILING = 200000


class ZeroSource(str, enum.Enum):
    table = "table"
    bisection = "bisection"


@dataclass(frozen=True)
class CriticalZero:
    index: int
    gamma: HPValue
    source: ZeroSource = ZeroSource.bisection

    def to_dict(self) -> dict:
        return {"index": self.index, "gamma": self.gamma.to_dict(), "source": self.source.value}


@dataclass(frozen=True)
class _EMResult:
    value: mpmath.mpc
    derivative: mpmath.mpc
    err: mpmath.mpf
    err_derivative: mpmath.mpf


def _start_terms(s, prec: int) -> int:
    """Initial head length N for the Euler–Maclaurin sum."""
    sigma = float(mpmath.re(s))
    n_em = int(math.ceil((prec * math.log(10) + float(abs(s))) / (2 * math.pi))) + 2
    if sigma > 1.5:
        exponent = (prec + 2) / (sigma - 1)
        if exponent < 8:
            n_direct = int(math.ceil(10 ** exponent)) + 1
            return max(2, min(n_em, n_direct))
    return max(2, n_em)


def _euler_maclaurin(s, prec: int, scaled: bool, term_ceiling: int) -> _EMResult:
    """ζ(s), ζ′(s) (or (s−1)ζ(s) and its derivative when scaled) by Euler–Maclaurin.

    Runs at the caller's working precision. The head length N doubles whenever
    the Bernoulli corrections start growing before reaching the target.
    """
    s = mpmath.mpc(s)
    sigma = mpmath.re(s)
    eps = mpmath.mpf(10) ** (-(prec + 3))
    n_head = _start_terms(s, prec)

    while True:
        if n_head > term_ceiling:
            raise PrecisionUnachievableError(
                f"zeta at s={mpmath.nstr(s, 8)} needs more than {term_ceiling} terms for {prec} digits"
            )
        head = mpmath.mpc(0)
        head_derivative = mpmath.mpc(0)
        largest = mpmath.mpf(1)
        for n in range(1, n_head):
            log_n = mpmath.log(n)
            term = mpmath.exp(-s * log_n)
            head += term
            head_derivative -= log_n * term
            largest = max(largest, abs(term))

        big_n = mpmath.mpf(n_head)
        log_big_n = mpmath.log(big_n)
        n_pow = mpmath.exp(-s * log_big_n)  # N^{-s}
        head += n_pow / 2
        head_derivative -= log_big_n * n_pow / 2

        # Bernoulli corrections T_k = B_2k/(2k)! * P_k(s) * N^{-s-2k+1},
        # P_k(s) = s(s+1)...(s+2k-2); P and P' are carried together.
        poly = s
        poly_derivative = mpmath.mpc(1)
        n_factor = n_pow / big_n
        inverse_square = 1 / (big_n * big_n)
        previous = mpmath.inf
        converged = False
        k = 1
        while n_head + k <= term_ceiling:
            coefficient = mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k)
            term = coefficient * poly * n_factor
            term_derivative = coefficient * n_factor * (poly_derivative - log_big_n * poly)
            size = abs(term) + abs(term_derivative)
            # remainder after T_1..T_{k-1} is at most |T_k|·|s+2k−1|/(σ+2k−1), valid for σ+2k−1 > 0
            if size < eps * max(abs(head), 1) and sigma + 2 * k - 1 > 0:
                bound_factor = abs(s + 2 * k - 1) / (sigma + 2 * k - 1)
                err = abs(term) * bound_factor
                err_derivative = (abs(term_derivative) + abs(term)) * bound_factor * (1 + log_big_n)
                converged = True
                break
            if size > previous and k > 2:
                break
            previous = size
            head += term
            head_derivative += term_derivative
            largest = max(largest, abs(term))
            # P_{k+1} = P_k (s+2k-1)(s+2k)
            q = (s + 2 * k - 1) * (s + 2 * k)
            q_derivative = 2 * s + 4 * k - 1
            poly_derivative = poly_derivative * q + poly * q_derivative
            poly = poly * q
            n_factor = n_factor * inverse_square
            k += 1

        if not converged:
            n_head *= 2
            LOGGER.debug(f"Euler-Maclaurin corrections diverged, retrying with N={n_head}")
            continue

        rounding = (n_head + k) * largest * mpmath.mpf(10) ** (-mpmath.mp.dps)
        tail = mpmath.exp((1 - s) * log_big_n)  # N^{1-s}
        if scaled:
            value = (s - 1) * head + tail
            derivative = head + (s - 1) * head_derivative - log_big_n * tail
            factor = abs(s - 1)
            return _EMResult(value, derivative, factor * err + rounding,
                             factor * err_derivative + err + rounding)
        value = head + tail / (s - 1)
        derivative = head_derivative - log_big_n * tail / (s - 1) - tail / (s - 1) ** 2
        return _EMResult(value, derivative, err + rounding, err_derivative + rounding)


def _library_zeta(s, prec: int, scaled: bool) -> _EMResult:
    value = mpmath.zeta(s)
    derivative = mpmath.zeta(s, derivative=1)
    if scaled:
        value, derivative = (s - 1) * value, value + (s - 1) * derivative
    slack = mpmath.mpf(10) ** (-(prec + 2))
    return _EMResult(value, derivative, abs(value) * slack + slack, abs(derivative) * slack + slack)


def _zeta_pair(s, prec: int, scaled: bool = False, em_height_limit: float = EM_HEIGHT_LIMIT,
               term_ceiling: int = TERM_CEILING) -> _EMResult:
    if abs(mpmath.im(s)) > em_height_limit:
        return _library_zeta(s, prec, scaled)
    return _euler_maclaurin(s, prec, scaled, term_ceiling)


def _check_precision(prec: int) -> None:
    if prec < 10:
        raise ValueError(f"precision must be at least 10 digits, got {prec}")


def zeta(s, prec: int, **options) -> HPComplexValue:
    """ζ(s) with an Euler–Maclaurin truncation bound."""
    _check_precision(prec)
    s = as_complex(s, prec)
    with mpmath.workdps(prec + GUARD_DIGITS):
        if abs(s.value - 1) < mpmath.mpf(10) ** (-prec):
            raise PoleError("zeta has a pole at s=1", pole=mpmath.mpf(1))
        result = _zeta_pair(s.value, prec, **options)
        err = result.err + abs(result.derivative) * s.err
        return HPComplexValue(+result.value, err, prec)


def zeta_prime(s, prec: int, **options) -> HPComplexValue:
    """ζ′(s) from the termwise differentiated Euler–Maclaurin sum."""
    _check_precision(prec)
    s = as_complex(s, prec)
    with mpmath.workdps(prec + GUARD_DIGITS):
        if abs(s.value - 1) < mpmath.mpf(10) ** (-prec):
            raise PoleError("zeta' has a pole at s=1", pole=mpmath.mpf(1))
        result = _zeta_pair(s.value, prec, **options)
        # ζ'' is not available; bound the input error through |ζ'| / dist to the pole
        err = result.err_derivative + abs(result.derivative) * s.err / max(abs(s.value - 1), mpmath.mpf(1) / 2)
        return HPComplexValue(+result.derivative, err, prec)


def _near_nonpositive_integer(s, prec: int) -> Optional[int]:
    nearest = int(mpmath.nint(mpmath.re(s)))
    if nearest <= 0 and abs(s - nearest) < mpmath.mpf(10) ** (-prec):
        return nearest
    return None


def _log_gamma_stirling(z, prec: int) -> Tuple[mpmath.mpc, mpmath.mpf]:
    """Stirling series for log Γ(z), Re z large; returns (value, truncation bound)."""
    value = (z - mpmath.mpf(1) / 2) * mpmath.log(z) - z + mpmath.log(2 * mpmath.pi) / 2
    eps = mpmath.mpf(10) ** (-(prec + 3))
    half_angle = abs(mpmath.arg(z)) / 2
    secant = 1 / mpmath.cos(half_angle)
    z_power = z
    z_square = z * z
    previous = mpmath.inf
    k = 1
    while True:
        term = mpmath.bernoulli(2 * k) / ((2 * k) * (2 * k - 1) * z_power)
        size = abs(term)
        if size * secant ** (2 * k) < eps or size > previous:
            return value, size * secant ** (2 * k)
        value += term
        previous = size
        z_power *= z_square
        k += 1


def gamma_fn(s, prec: int) -> HPComplexValue:
    """Γ(s) by shifting Re s up to 0.4·prec and applying Stirling's series."""
    _check_precision(prec)
    s = as_complex(s, prec)
    with mpmath.workdps(prec + GUARD_DIGITS):
        pole = _near_nonpositive_integer(s.value, prec)
        if pole is not None:
            raise PoleError(f"gamma has a pole at s={pole}", pole=pole)
        threshold = mpmath.mpf(0.4) * prec + 1
        shift = max(0, int(mpmath.ceil(threshold - mpmath.re(s.value))))
        product = mpmath.mpc(1)
        for j in range(shift):
            product *= s.value + j
        log_value, log_err = _log_gamma_stirling(s.value + shift, prec)
        value = mpmath.exp(log_value) / product
        relative = mpmath.expm1(log_err) + (shift + 2) * mpmath.mpf(10) ** (-mpmath.mp.dps)
        err = abs(value) * relative
        if s.err:
            err += abs(value * mpmath.digamma(s.value)) * s.err
        return HPComplexValue(+value, err, prec)


def completed_factor(s, prec: int) -> HPComplexValue:
    """F(s) = ½·s(s−1)·π^{−s/2}·Γ(s/2), evaluated as (s−1)·π^{−s/2}·Γ(s/2+1)."""
    s = as_complex(s, prec)
    with mpmath.workdps(prec + GUARD_DIGITS):
        gamma_value = gamma_fn(HPComplexValue(s.value / 2 + 1, s.err / 2, prec), prec)
        factor = (s.value - 1) * mpmath.power(mpmath.pi, -s.value / 2)
        value = factor * gamma_value.value
        err = abs(factor) * gamma_value.err + abs(value) * mpmath.mpf(10) ** (-(prec + 5))
        if s.err:
            err += abs(value) * s.err * (1 + mpmath.log(mpmath.pi))
        return HPComplexValue(+value, err, prec)


def _xi_parts(s, prec: int, **options):
    """Returns G(s) = π^{−s/2}Γ(s/2+1) (with err) and the scaled EM pair of (s−1)ζ(s)."""
    gamma_value = gamma_fn(s / 2 + 1, prec)
    power = mpmath.power(mpmath.pi, -s / 2)
    g_value = power * gamma_value.value
    g_err = abs(power) * gamma_value.err + abs(g_value) * mpmath.mpf(10) ** (-(mpmath.mp.dps - 2))
    scaled = _zeta_pair(s, prec, scaled=True, **options)
    return g_value, g_err, scaled


def xi(s, prec: int, **options) -> HPComplexValue:
    """ξ(s) = F(s)·ζ(s), finite at s = 0 and s = 1 through the scaled form (s−1)ζ(s)."""
    _check_precision(prec)
    s = as_complex(s, prec)
    with mpmath.workdps(prec + GUARD_DIGITS):
        near = _near_nonpositive_integer(s.value / 2 + 1, prec // 2)
        if near is not None:
            # Γ(s/2+1) has a pole cancelled by a trivial zero; use ξ(s) = ξ(1−s).
            mirrored = xi(HPComplexValue(1 - s.value, s.err, prec), prec, **options)
            return mirrored
        g_value, g_err, scaled = _xi_parts(s.value, prec, **options)
        value = g_value * scaled.value
        derivative_scale = abs(g_value) * (abs(scaled.derivative) + abs(scaled.value) * (1 + abs(s.value)))
        err = (abs(g_value) * scaled.err + g_err * abs(scaled.value)
               + abs(value) * mpmath.mpf(10) ** (-(prec + 5)) + derivative_scale * s.err)
        return HPComplexValue(+value, err, prec)


def xi_prime(s, prec: int, **options) -> HPComplexValue:
    """ξ′(s) = G(s)·[(s−1)ζ(s)·(½ψ(s/2+1) − ½ln π) + d/ds((s−1)ζ(s))]."""
    _check_precision(prec)
    s = as_complex(s, prec)
    with mpmath.workdps(prec + GUARD_DIGITS):
        g_value, g_err, scaled = _xi_parts(s.value, prec, **options)
        log_derivative = mpmath.digamma(s.value / 2 + 1) / 2 - mpmath.log(mpmath.pi) / 2
        inner = scaled.value * log_derivative + scaled.derivative
        value = g_value * inner
        inner_err = scaled.err * abs(log_derivative) + scaled.err_derivative
        err = (abs(g_value) * inner_err + g_err * abs(inner)
               + abs(value) * mpmath.mpf(10) ** (-(prec + 5)))
        return HPComplexValue(+value, err, prec)


def Xi(t, prec: int, **options) -> HPValue:
    """Ξ(t) := ξ(½+it), real for real t."""
    t = as_real(t, prec)
    with mpmath.workdps(prec + GUARD_DIGITS):
        s = HPComplexValue(mpmath.mpc(mpmath.mpf(1) / 2, t.value), t.err, prec)
        value = xi(s, prec, **options)
        # the imaginary part is pure rounding; it joins the error budget
        return HPValue(mpmath.re(value.value), value.err + abs(mpmath.im(value.value)), prec)


def Xi_prime(t, prec: int, **options) -> HPValue:
    """Ξ′(t) = i·ξ′(½+it), from the analytic derivative."""
    t = as_real(t, prec)
    with mpmath.workdps(prec + GUARD_DIGITS):
        s = HPComplexValue(mpmath.mpc(mpmath.mpf(1) / 2, t.value), t.err, prec)
        value = xi_prime(s, prec, **options)
        rotated = mpmath.mpc(0, 1) * value.value
        return HPValue(mpmath.re(rotated), value.err + abs(mpmath.im(rotated)), prec)


def Xi_prime_check(t, prec: int, **options) -> mpmath.mpf:
    """Relative gap between analytic Ξ′(t) and a central difference with step 10^(−prec/3)."""
    with mpmath.workdps(prec + GUARD_DIGITS):
        t = mpmath.mpf(t)
        step = mpmath.mpf(10) ** (-(prec // 3))
        forward = Xi(t + step, prec, **options).value
        backward = Xi(t - step, prec, **options).value
        difference = (forward - backward) / (2 * step)
        analytic = Xi_prime(t, prec, **options).value
        scale = max(abs(analytic), abs(Xi(t, prec, **options).value), mpmath.mpf(10) ** (-prec))
        return abs(difference - analytic) / scale


def estimate_zero_index(gamma) -> int:
    """Index n of the zero at ordinate γ from θ(γ) ≈ π(n − 3/2)."""
    with mpmath.workdps(20):
        return max(1, int(mpmath.nint(mpmath.siegeltheta(gamma) / mpmath.pi + mpmath.mpf(1.5))))


def find_zero(bracket, prec: int, index: Optional[int] = None, **options) -> CriticalZero:
    """Critical zero in the bracket: bisection at low precision, then Newton at prec."""
    low, high = (as_real(end, prec).value for end in bracket)
    coarse = 15
    with mpmath.workdps(prec + GUARD_DIGITS):
        low, high = mpmath.mpf(low), mpmath.mpf(high)
        f_low = Xi(low, coarse, **options).value
        f_high = Xi(high, coarse, **options).value
        if mpmath.sign(f_low) == mpmath.sign(f_high):
            raise NoSignChangeError(
                f"Xi does not change sign on [{mpmath.nstr(low, 10)}, {mpmath.nstr(high, 10)}]"
            )
        while high - low > mpmath.mpf(10) ** (-8) * max(1, abs(low)):
            middle = (low + high) / 2
            f_middle = Xi(middle, coarse, **options).value
            if mpmath.sign(f_middle) == mpmath.sign(f_low):
                low, f_low = middle, f_middle
            else:
                high = middle

        t = (low + high) / 2
        tolerance = mpmath.mpf(10) ** (-(prec - 2))
        for _ in range(60):
            value = Xi(t, prec, **options)
            derivative = Xi_prime(t, prec, **options)
            step = value.value / derivative.value
            t = t - step
            if abs(step) <= tolerance * max(1, abs(t)):
                break
        value = Xi(t, prec, **options)
        derivative = Xi_prime(t, prec, **options)
        err = (abs(value.value) + value.err) / abs(derivative.value)
        gamma = HPValue(+t, err, prec)
    if index is None:
        index = estimate_zero_index(gamma.value)
    LOGGER.debug(f"Found critical zero #{index} at {gamma}")
    return CriticalZero(index=index, gamma=gamma, source=ZeroSource.bisection)


def scan_zeros(t_low, t_high, step, prec: int, **options) -> List[CriticalZero]:
    """All sign changes of Ξ on a grid over [t_low, t_high], each polished with find_zero."""
    zeros: List[CriticalZero] = []
    with mpmath.workdps(20):
        t = mpmath.mpf(t_low)
        t_high = mpmath.mpf(t_high)
        step = mpmath.mpf(step)
        previous_t, previous_value = t, Xi(t, 15, **options).value
        while previous_t < t_high:
            t = min(previous_t + step, t_high)
            value = Xi(t, 15, **options).value
            if mpmath.sign(value) != mpmath.sign(previous_value):
                index = zeros[-1].index + 1 if zeros else None
                zeros.append(find_zero((previous_t, t), prec, index=index, **options))
            previous_t, previous_value = t, value
    LOGGER.info(f"Scanned [{t_low}, {t_high}] and found {len(zeros)} critical zeros")
    return zeros
