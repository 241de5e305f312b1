"""Strip densities of f: the entire functions P₀ and P₄ᵥ, g₀, λ and the Laplace representations.

P₀(v) = −Σ_{k≥1} c_res(4k)·(v/π)^{2k}. For large v the terms peak near
k ≈ v/2 at roughly e^v while the sum stays bounded, so every evaluation is
planned first: the working precision covers the peak term and each
coefficient is computed only to the digits its term contributes.
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import mpmath
import singer

from zeta_laplace_lab import poles_residues
from zeta_laplace_lab.client import ZetaClient
from zeta_laplace_lab.hiprec_zeta import GUARD_DIGITS
from zeta_laplace_lab.hpvalue import HPBase, HPComplexValue, HPValue, as_complex, as_real, rounding_bound
from zeta_laplace_lab.poles_residues import PoleSet, ZeroTable, c_gamma_tail
from zeta_laplace_lab.series import accelerate
from zeta_laplace_lab.utils import (
    CsvRow,
    InsufficientZerosError,
    InvalidInputError,
    LabConfig,
    PrecisionCeilingError,
    StripViolationError,
    to_decimal_string,
)

LOGGER = singer.get_logger()

Y_MAX = 4.5
PRECISION_CEILING = 20000
ZETA_PRIME_FLOOR = 0.1
QUAD_DIGITS = 20
AVERAGING_DEPTH = 20
_LN10 = math.log(10)


def _log_inverse_xi(k: int) -> float:
    """ln(1/ξ(½+4k)) in double precision, with ζ(½+4k) taken as 1."""
    s = 4 * k + 0.5
    return -(math.log(s * (s - 1) / 2) - s / 2 * math.log(math.pi) + math.lgamma(s / 2))


@dataclass(frozen=True)
class SeriesPlan:
    first_k: int
    K: int
    working_digits: int
    peak_log10: float
    scale_log10: float
    term_digits: Tuple[int, ...]
    tail_log10: float

    def digits_for(self, k: int) -> int:
        if k < self.first_k:
            return 10
        return self.term_digits[k - self.first_k]


def _series_plan(v, target: int, first_k: int = 1, ceiling: int = PRECISION_CEILING) -> SeriesPlan:
    """Truncation index and per-term precision for Σ_{k≥first_k} c_res(4k)(v/π)^{2k}.

    The sum is of the size of its first term when v is small and O(1) otherwise;
    terms are kept until they fall target+guard digits below that scale.
    """
    with mpmath.workdps(20):
        log_ratio = float(mpmath.log(mpmath.mpf(v) / mpmath.pi))
    constant = math.log(2 / math.pi)
    logs: List[float] = []
    peak = -math.inf
    scale = 0.0
    k = first_k
    while True:
        term = (2 * k * log_ratio + constant + _log_inverse_xi(k)) / _LN10
        if k == first_k:
            scale = min(0.0, term)
        peak = max(peak, term)
        if target + GUARD_DIGITS + peak - scale > ceiling:
            raise PrecisionCeilingError(
                f"P at v={mpmath.nstr(v, 8)} needs more than {ceiling} working digits"
            )
        threshold = scale - target - GUARD_DIGITS - 1
        if k > first_k and term < threshold and term < logs[-1]:
            break
        logs.append(term)
        k += 1

    working = target + GUARD_DIGITS + int(math.ceil(max(0.0, peak - scale)))
    term_digits = tuple(
        max(10, min(working, target + GUARD_DIGITS + int(math.ceil(term - scale)))) for term in logs
    )
    return SeriesPlan(
        first_k=first_k,
        K=first_k + len(logs) - 1,
        working_digits=working,
        peak_log10=peak,
        scale_log10=scale,
        term_digits=term_digits,
        tail_log10=term + math.log10(2),
    )


def precision_plan(v) -> int:
    """Working digits beyond the target that P₀(v) needs: guard plus the peak-term excess."""
    if v == 0:
        return GUARD_DIGITS
    if v < 0:
        raise InvalidInputError(f"P0 is evaluated for v >= 0, got {v}")
    plan = _series_plan(v, 0, ceiling=10 ** 9)
    return plan.working_digits


def a_bound(poles: PoleSet, zeta_prime_floor: float = ZETA_PRIME_FLOOR) -> HPValue:
    """A = 2·Σ|c(iγ)| over the known zeros plus an envelope for the rest.

    Beyond the last zero the terms are bounded by 2/(1.1196·γ^{7/4}·floor).
    """
    with mpmath.workdps(20):
        total = mpmath.mpf(0)
        err = mpmath.mpf(0)
        for residue in poles.spectral:
            total += 2 * abs(residue.c_gamma.value)
            err += 2 * residue.c_gamma.err
        start = poles.spectral[-1].zero.gamma.value if poles.spectral else mpmath.mpf(14)
        tail = 2 * c_gamma_tail(start, zeta_prime_floor)
        return HPValue(total + tail + err, mpmath.mpf(0), 15)


@dataclass(frozen=True)
class ScanPoint:
    input: mpmath.mpf
    value: HPBase
    bound: Optional[mpmath.mpf] = None

    def to_row(self, digits: int = 30) -> CsvRow:
        row: CsvRow = {
            "input": to_decimal_string(self.input, 20),
            "value": to_decimal_string(self.value.value, digits),
            "err": mpmath.nstr(self.value.err, 6),
        }
        if self.bound is not None:
            row["bound"] = mpmath.nstr(self.bound, 12)
        return row


@dataclass
class ScanResult:
    name: str
    points: List[ScanPoint]
    passed: bool
    margin: mpmath.mpf
    reduced_coverage: bool = False
    notes: List[str] = field(default_factory=list)

    def rows(self, digits: int = 30) -> List[CsvRow]:
        return [point.to_row(digits) for point in self.points]


@dataclass(frozen=True)
class ResidualEstimate:
    """An identity residual with the truncation budget it should stay under."""
    residual: HPValue
    budget: mpmath.mpf
    details: dict = field(default_factory=dict)

    @property
    def within_budget(self) -> bool:
        return abs(self.residual.value) <= self.budget + self.residual.err


@dataclass(frozen=True)
class LaplaceResult:
    s: mpmath.mpc
    w: int
    Y: mpmath.mpf
    value: HPComplexValue
    expected: HPBase
    tail_left: mpmath.mpf
    tail_right: mpmath.mpf
    quadrature_err: mpmath.mpf

    @property
    def bound(self) -> mpmath.mpf:
        return self.tail_left + self.tail_right + self.quadrature_err + self.value.err + self.expected.err

    @property
    def residual(self) -> mpmath.mpf:
        return abs(self.value.value - self.expected.value)


@dataclass
class DensityFamily:
    poles: PoleSet
    A_bound: HPValue
    strip_w: int = 0
    y_max: float = Y_MAX
    precision_ceiling: int = PRECISION_CEILING
    quad_digits: int = QUAD_DIGITS
    averaging_depth: int = AVERAGING_DEPTH

    @classmethod
    def build(
        cls,
        config: LabConfig,
        table: Optional[ZeroTable] = None,
        client: Optional[ZetaClient] = None,
        strip_w: int = 0,
    ) -> "DensityFamily":
        client = client or ZetaClient.from_config(config)
        digits = config.get("digits", 30)
        n_zeros = 0
        if table is not None:
            n_zeros = min(config.get("n_zeros", poles_residues.N_ZEROS), len(table))
            if n_zeros < config.get("n_zeros", 0):
                LOGGER.warning(f"Zero table holds {len(table)} zeros, fewer than the configured {config['n_zeros']}")
        poles = poles_residues.build_pole_set(
            digits, config.get("k_trunc", poles_residues.K_TRUNC), table, n_zeros, client
        )
        return cls(
            poles=poles,
            A_bound=a_bound(poles, config.get("zeta_prime_floor", ZETA_PRIME_FLOOR)),
            strip_w=strip_w,
            y_max=config.get("y_max", Y_MAX),
            precision_ceiling=config.get("precision_ceiling", PRECISION_CEILING),
            quad_digits=config.get("quad_digits", QUAD_DIGITS),
            averaging_depth=config.get("averaging_depth", AVERAGING_DEPTH),
        )

    def _residue_series(self, v, first_k: int, target: int) -> HPValue:
        """Σ_{k≥first_k} c_res(4k)(v/π)^{2k} by Horner's rule at the planned precision."""
        v = as_real(v, target)
        if v.value < 0:
            raise InvalidInputError(f"the density series is evaluated for v >= 0, got {v}")
        if v.value == 0:
            return HPValue(mpmath.mpf(0), mpmath.mpf(0), target)

        plan = _series_plan(v.value, target, first_k, self.precision_ceiling)
        coefficients = self.poles.real_coefficients(plan.K, plan.working_digits, plan.digits_for)
        with mpmath.workdps(plan.working_digits):
            x = (v.value / mpmath.pi) ** 2
            total = mpmath.mpf(0)
            for k in range(plan.K, first_k - 1, -1):
                total = total * x + coefficients[k - 1].value
            total *= x ** first_k

        with mpmath.workdps(20):
            x = (v.value / mpmath.pi) ** 2
            err = mpmath.mpf(10) ** plan.tail_log10
            slope = mpmath.mpf(0)
            power = x ** first_k
            for k in range(first_k, plan.K + 1):
                err += coefficients[k - 1].err * power
                slope += 2 * k * abs(coefficients[k - 1].value) * power
                power *= x
            err += plan.K * mpmath.mpf(10) ** (plan.peak_log10 + 1 - plan.working_digits)
            if v.err:
                err += slope / v.value * v.err
        return HPValue(total, err, target)

    def p0(self, v, target_digits: int) -> HPValue:
        """P₀(v) = −Σ_{k≥1} c_res(4k)(v/π)^{2k}."""
        return -self._residue_series(v, 1, target_digits)

    def p4w(self, v, w: int, target_digits: int) -> HPValue:
        """P₄ᵥ(v) = (−1)^{w+1}Σ_{k≥w+1} c_res(4k)(v/π)^{2k} for w ≥ 0; P₄ᵥ(u) = P₋₄₍ᵥ₊₁₎(π²/u) for w ≤ −1."""
        if w >= 0:
            series = self._residue_series(v, w + 1, target_digits)
            return series if w % 2 else -series
        v = as_real(v, target_digits)
        if v.value <= 0:
            raise InvalidInputError(f"P_{4 * w} is evaluated for v > 0, got {v}")
        with mpmath.workdps(self._argument_digits(v.value, target_digits)):
            pi_square = mpmath.pi ** 2
            mirrored = pi_square / v.value
            mirrored_err = mirrored * v.err / v.value + rounding_bound(mirrored, mpmath.mp.dps - 1)
            return self.p4w(HPValue(mirrored, mirrored_err, target_digits), -(w + 1), target_digits)

    def _argument_digits(self, v, target_digits: int) -> int:
        """Digits an argument near v must carry so P(v) reaches the target."""
        with mpmath.workdps(20):
            v = mpmath.mpf(v)
            estimate = max(v, mpmath.pi ** 2 / v) if v > 0 else mpmath.mpf(0)
        return target_digits + precision_plan(estimate) + GUARD_DIGITS

    def _exponential_argument(self, y: HPValue, sign: int, target_digits: int) -> HPValue:
        """π·e^{2·sign·y} at enough digits for the density series it feeds."""
        with mpmath.workdps(20):
            estimate = mpmath.pi * mpmath.exp(2 * sign * y.value)
        digits = self._argument_digits(estimate, target_digits)
        with mpmath.workdps(digits):
            v = mpmath.pi * mpmath.exp(2 * sign * y.value)
            return HPValue(v, 2 * v * y.err + rounding_bound(v, digits - 1), digits)

    def g0(self, y, target_digits: int) -> HPValue:
        """g₀(y) = P₀(π·e^{−2y})."""
        y = as_real(y, target_digits)
        return self.p0(self._exponential_argument(y, -1, target_digits), target_digits)

    def density(self, y, w: int, target_digits: int) -> HPValue:
        """P₄ᵥ(π·e^{−2y}), the density of (−1)^w f on the strip V₄ᵥ."""
        y = as_real(y, target_digits)
        return self.p4w(self._exponential_argument(y, -1, target_digits), w, target_digits)

    def lambda_fn(self, y, target_digits: int) -> HPValue:
        """λ(y) = −c(0) + P₀(π·e^{2y}) + P₀(π·e^{−2y})."""
        y = as_real(y, target_digits)
        if abs(y.value) > self.y_max:
            raise PrecisionCeilingError(f"|y| = {mpmath.nstr(abs(y.value), 8)} exceeds y_max = {self.y_max}")
        with mpmath.workdps(target_digits + GUARD_DIGITS):
            rising = self.p0(self._exponential_argument(y, 1, target_digits), target_digits)
            falling = self.p0(self._exponential_argument(y, -1, target_digits), target_digits)
            value = -self.poles.c0_at(target_digits) + rising + falling
        if abs(value.value) - value.err > self.A_bound.value:
            LOGGER.warning(
                f"|lambda({mpmath.nstr(y.value, 8)})| = {mpmath.nstr(abs(value.value), 8)} "
                f"exceeds the bound A = {mpmath.nstr(self.A_bound.value, 8)}"
            )
        return value

    def lambda_complex(self, u, target_digits: int) -> HPComplexValue:
        """The entire extension j at complex u: −c(0) − 2Σ_k c_res(4k)·cosh(4ku)."""
        u = as_complex(u, target_digits)
        if mpmath.im(u.value) == 0:
            real = self.lambda_fn(mpmath.re(u.value), target_digits)
            return HPComplexValue(mpmath.mpc(real.value), real.err, target_digits)
        with mpmath.workdps(20):
            reach = mpmath.pi * mpmath.exp(2 * abs(mpmath.re(u.value)))
        plan = _series_plan(reach, target_digits, 1, self.precision_ceiling)
        coefficients = self.poles.real_coefficients(plan.K, plan.working_digits, plan.digits_for)
        with mpmath.workdps(plan.working_digits):
            total = mpmath.mpc(0)
            for k, coefficient in enumerate(coefficients, start=1):
                total += coefficient.value * mpmath.cosh(4 * k * u.value)
            c0 = self.poles.c0_at(target_digits)
            total = -c0.value - 2 * total
        with mpmath.workdps(20):
            err = c0.err + 2 * mpmath.mpf(10) ** plan.tail_log10
            err += plan.K * mpmath.mpf(10) ** (plan.peak_log10 + 1 - plan.working_digits)
            for k, coefficient in enumerate(coefficients, start=1):
                growth = mpmath.cosh(4 * k * abs(mpmath.re(u.value)))
                err += 2 * coefficient.err * growth
                if u.err:
                    err += 8 * k * abs(coefficient.value) * growth * u.err
        return HPComplexValue(total, err, target_digits)

    def lambda_taylor(self, m: int, target_digits: int) -> HPValue:
        """Coefficient of y^{2m} in λ: −c(0)·[m=0] − 2Σ_k c_res(4k)(4k)^{2m}/(2m)!."""
        constant = math.log(2 / math.pi) - math.lgamma(2 * m + 1)
        logs: List[float] = []
        k = 1
        while True:
            term = (2 * m * math.log(4 * k) + constant + _log_inverse_xi(k)) / _LN10
            if logs and term < max(logs) - target_digits - GUARD_DIGITS and term < logs[-1]:
                break
            logs.append(term)
            k += 1
        peak = max(logs)
        working = target_digits + GUARD_DIGITS + int(math.ceil(max(0.0, peak)))
        coefficients = self.poles.real_coefficients(len(logs), working)
        with mpmath.workdps(working):
            total = mpmath.mpf(0)
            err = mpmath.mpf(0)
            for k, coefficient in enumerate(coefficients, start=1):
                weight = mpmath.mpf(4 * k) ** (2 * m) / mpmath.factorial(2 * m)
                total += coefficient.value * weight
                err += coefficient.err * weight
            total = -2 * total
            err = 2 * err + mpmath.mpf(10) ** (peak + 1 - target_digits - GUARD_DIGITS)
            if m == 0:
                c0 = self.poles.c0_at(target_digits)
                total -= c0.value
                err += c0.err
            return HPValue(+total, err, target_digits)

    def eq_star_residual(
        self,
        y,
        target_digits: int,
        tolerance=None,
        n_zeros: Optional[int] = None,
    ) -> ResidualEstimate:
        """[2Σc(iγ)cos(γy) + c(0) + Σc_res(4k)e^{4ky}] − P₀(π·e^{−2y}) for y < 0."""
        y = as_real(y, target_digits)
        if y.value >= 0:
            raise InvalidInputError(f"the spectral form of the density holds for y < 0, got {y}")
        spectral = self.poles.spectral[:n_zeros] if n_zeros else self.poles.spectral
        if not spectral:
            raise InsufficientZerosError("eq_star needs spectral residues; no zero table is loaded")

        with mpmath.workdps(target_digits + GUARD_DIGITS):
            terms = []
            spectral_err = mpmath.mpf(0)
            for residue in spectral:
                gamma, coefficient = residue.zero.gamma, residue.c_gamma
                angle = gamma.value * y.value
                terms.append(2 * coefficient.value * mpmath.cos(angle))
                spectral_err += 2 * coefficient.err + 2 * abs(coefficient.value * mpmath.sin(angle)) * (
                    gamma.err * abs(y.value) + gamma.value * y.err
                )
            accelerated = accelerate(terms, self.averaging_depth)

            K = self.poles.K_trunc
            coefficients = self.poles.real_coefficients(K, target_digits + GUARD_DIGITS)
            real_sum = mpmath.mpf(0)
            real_err = mpmath.mpf(0)
            for k, coefficient in enumerate(coefficients, start=1):
                weight = mpmath.exp(4 * k * y.value)
                real_sum += coefficient.value * weight
                real_err += coefficient.err * weight
            real_tail = abs(coefficients[-1].value) * mpmath.exp(4 * (K + 1) * y.value) / (1 - mpmath.exp(4 * y.value))

            c0 = self.poles.c0_at(target_digits)
            left = accelerated.value + c0.value + real_sum
            right = self.g0(y, target_digits)
            residual = HPValue(left - right.value, spectral_err + real_err + c0.err + right.err, target_digits)
            budget = accelerated.estimate + real_tail

        if tolerance is not None and budget > tolerance:
            raise InsufficientZerosError(
                f"spectral truncation estimate {mpmath.nstr(budget, 3)} with {len(spectral)} zeros "
                f"exceeds the tolerance {mpmath.nstr(mpmath.mpf(tolerance), 3)}"
            )
        return ResidualEstimate(
            residual,
            budget,
            {"y": y.value, "n_zeros": len(spectral), "K_trunc": K, "spectral_estimate": accelerated.estimate},
        )

    def _strip_tails(self, sigma, w: int, Y) -> Tuple[mpmath.mpf, mpmath.mpf]:
        """(left, right) bounds on ∫ e^{σy}|P₄ᵥ(πe^{−2y})| over y < −Y and y > Y."""
        if w < 0:
            left, right = self._strip_tails(-sigma, -(w + 1), Y)
            return right, left
        with mpmath.workdps(20):
            coefficients = self.poles.real_coefficients(self.poles.K_trunc, 20)
            magnitudes = [abs(c.value) + c.err for c in coefficients]
            # first omitted coefficient bounds the remaining ones
            beyond = magnitudes[-1]
            above = sum(magnitudes[w:]) + beyond
            right_rate = 4 * (w + 1) - sigma
            right = above * mpmath.exp(-right_rate * Y) / right_rate

            small = sum(magnitudes) + beyond
            c0 = self.poles.c0.value + self.poles.c0.err
            left = (c0 + self.A_bound.value + small) * mpmath.exp(-sigma * Y) / sigma
            for k in range(1, w + 1):
                rate = sigma - 4 * k
                left += magnitudes[k - 1] * mpmath.exp(-rate * Y) / rate
            return left, right

    def strip_laplace(self, s, w: int, Y, target_digits: Optional[int] = None) -> LaplaceResult:
        """∫_{−Y}^{Y} e^{sy}·P₄ᵥ(πe^{−2y}) dy with both tails bounded; compares with (−1)^w f(s)."""
        target_digits = target_digits or self.quad_digits
        s = as_complex(s, target_digits)
        sigma = mpmath.re(s.value)
        if not 4 * w < sigma < 4 * (w + 1):
            raise StripViolationError(
                f"Re s = {mpmath.nstr(sigma, 8)} is outside the strip {4 * w} < Re s < {4 * (w + 1)}"
            )
        if Y > self.y_max:
            raise PrecisionCeilingError(f"cutoff Y = {Y} exceeds y_max = {self.y_max}")

        LOGGER.info(f"Computing strip Laplace integral at s={mpmath.nstr(s.value, 8)}, w={w}, Y={Y}")
        with mpmath.workdps(self.quad_digits):
            Y = mpmath.mpf(Y)

            def integrand(y):
                return mpmath.exp(s.value * y) * self.density(y, w, self.quad_digits).value

            value, quadrature_err = mpmath.quad(integrand, [-Y, -Y / 2, 0, Y / 2, Y], error=True)
            tail_left, tail_right = self._strip_tails(sigma, w, Y)
            expected = poles_residues.f_of_s(s, target_digits, self.poles.client)
            if w % 2:
                expected = -expected
            return LaplaceResult(
                s=s.value,
                w=w,
                Y=Y,
                value=HPComplexValue(mpmath.mpc(value), rounding_bound(abs(value), self.quad_digits), self.quad_digits),
                expected=expected,
                tail_left=tail_left,
                tail_right=tail_right,
                quadrature_err=mpmath.mpf(quadrature_err),
            )

    def laplace_f(self, s, Y, target_digits: Optional[int] = None) -> LaplaceResult:
        """∫_{−Y}^{Y} e^{sy}·g₀(y) dy for s in V₀."""
        return self.strip_laplace(s, 0, Y, target_digits)

    def char_bound_check(self, x, t_grid: Sequence, target_digits: int = 20) -> ScanResult:
        """|f(x+it)| ≤ |f(x)| on the grid, and (−1)^w f(x) > 0 for x in V₄ᵥ."""
        x = mpmath.mpf(x)
        if x % 4 == 0:
            raise StripViolationError(f"x = {x} is a pole of f")
        w = int(mpmath.floor(x / 4))
        client = self.poles.client
        with mpmath.workdps(target_digits + GUARD_DIGITS):
            centre = poles_residues.f_of_s(x, target_digits, client)
            centre_value = mpmath.re(centre.value)
            signed = centre_value if w % 2 == 0 else -centre_value
            bound = abs(centre_value)
            points: List[ScanPoint] = []
            margin = mpmath.inf
            passed = signed - centre.err > 0
            notes = [] if passed else [f"(-1)^w f({mpmath.nstr(x, 6)}) is not positive"]
            for t in t_grid:
                t = mpmath.mpf(t)
                value = abs(poles_residues.f_of_s(mpmath.mpc(x, t), target_digits, client))
                points.append(ScanPoint(t, value, bound))
                gap = bound - value.value
                margin = min(margin, gap)
                if gap < -(value.err + centre.err):
                    passed = False
                    notes.append(f"|f({mpmath.nstr(x, 6)}+{mpmath.nstr(t, 6)}i)| exceeds |f(x)|")
        return ScanResult(f"char_bound_x={mpmath.nstr(x, 6)}", points, passed, margin, notes=notes)

    def positivity_scan(self, points: int = 200, v_min=mpmath.mpf("1e-8"), y_top: float = 9.0,
                        target_digits: int = 20, epsilon=mpmath.mpf("0.01")) -> ScanResult:
        """P₀(v) > 0 on a log grid of v in [v_min, π·e^{y_top}], and its minimum over v ≥ ε."""
        with mpmath.workdps(30):
            v_max = mpmath.pi * mpmath.exp(y_top)
            grid = [mpmath.mpf(v) for v in mpmath.linspace(mpmath.log(v_min), mpmath.log(v_max), points)]
            grid = [mpmath.exp(v) for v in grid]
        scan: List[ScanPoint] = []
        passed = True
        margin = mpmath.inf
        notes: List[str] = []
        for v in grid:
            value = self.p0(HPValue(v, mpmath.mpf(0), target_digits), target_digits)
            scan.append(ScanPoint(v, value))
            if value.value - value.err <= 0:
                passed = False
                notes.append(f"P0({mpmath.nstr(v, 8)}) is not positive")
            if v >= epsilon:
                margin = min(margin, value.value - value.err)
        if margin <= 0:
            passed = False
        reduced = y_top < 9.0
        if reduced:
            notes.append(f"reduced coverage: v up to pi*e^{y_top}")
        LOGGER.info(f"Positivity scan over {points} points: min P0 for v >= {epsilon} is {mpmath.nstr(margin, 8)}")
        return ScanResult("p0_positivity", scan, passed, margin, reduced, notes)

    def boundedness_scan(self, y_values: Optional[Sequence] = None, target_digits: int = 20) -> ScanResult:
        """|P₀(π·e^{2y})| against A + c(0) + |P₀(π·e^{−2y})|, implied by λ's boundedness."""
        if y_values is None:
            with mpmath.workdps(20):
                y_values = [mpmath.mpf(y) for y in mpmath.linspace(0, self.y_max, 19)]
        scan: List[ScanPoint] = []
        passed = True
        margin = mpmath.inf
        notes: List[str] = []
        with mpmath.workdps(20):
            envelope_base = self.A_bound.value + self.poles.c0.value + self.poles.c0.err
        for y in y_values:
            y = as_real(y, target_digits)
            rising = self.p0(self._exponential_argument(y, 1, target_digits), target_digits)
            falling = self.p0(self._exponential_argument(y, -1, target_digits), target_digits)
            with mpmath.workdps(20):
                bound = envelope_base + abs(falling.value) + falling.err
                value = abs(rising)
                scan.append(ScanPoint(y.value, value, bound))
                gap = bound - value.value
                margin = min(margin, gap)
                if gap < -value.err:
                    passed = False
                    notes.append(f"|P0(pi e^(2y))| exceeds its envelope at y={mpmath.nstr(y.value, 6)}")
        reduced = self.y_max < Y_MAX
        if reduced:
            notes.append(f"reduced coverage: y_max = {self.y_max} < {Y_MAX}")
        return ScanResult("p0_boundedness", scan, passed, margin, reduced, notes)
