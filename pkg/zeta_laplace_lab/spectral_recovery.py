"""v(z), e(−z), p_{i,+}(z) and recovery of zero ordinates and ζ′(½+iγ) from the density side.

On Re z > 0 the exponential sum over zeros e(−z) = Σ c(iγₖ)e^{−γₖz} equals
v(z) = (z/π)·∫_0^∞ λ(y)/(y²+z²) dy, and λ itself is the cosine series
2Σ c(iγₖ)cos(γₖy). The frequencies of λ, or the decay rates of v, are the
ordinates; prony_extract reads them off λ samples and peel_extract takes
the successive limits directly.
"""
import enum
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
import singer

from zeta_laplace_lab.client import ZetaClient
from zeta_laplace_lab.hiprec_zeta import GUARD_DIGITS, CriticalZero, ZeroSource
from zeta_laplace_lab.hpvalue import HPBase, HPComplexValue, HPValue, as_complex, as_real, rounding_bound
from zeta_laplace_lab.laplace_density import ZETA_PRIME_FLOOR, DensityFamily
from zeta_laplace_lab.poisson import EvenEntire, PoissonDecomposition
from zeta_laplace_lab.poles_residues import PoleSet, ZeroTable, b_factor, c_gamma, c_gamma_tail
from zeta_laplace_lab.series import shanks_limit
from zeta_laplace_lab.utils import (
    HalfPlaneError,
    IllConditionedError,
    InvalidInputError,
    ModelOrderError,
    NoiseFloorError,
    PrecisionCeilingError,
    describe_error,
)

LOGGER = singer.get_logger()

REPORT_VERSION = 1
PEEL_GRID = tuple(mpmath.mpf(2) + mpmath.mpf(j) / 4 for j in range(13))
PRONY_MODES = {
    "quick": {"delta": "0.05", "y_top": 3, "digits": 300, "order": 30},
    "full": {"delta": "0.05", "y_top": 4, "digits": 2000, "order": 40},
}


class RecoveryMethod(str, enum.Enum):
    prony = "prony"
    peeling = "peeling"


@dataclass
class SpectralSeries:
    """Known terms (γₖ, c(iγₖ)) in ascending γ plus a bound on Σ|c| beyond the last one."""
    terms: List[Tuple[HPValue, HPValue]]
    truncation_tail: HPValue
    prec: int

    @classmethod
    def from_pole_set(cls, poles: PoleSet, zeta_prime_floor: float = ZETA_PRIME_FLOOR) -> "SpectralSeries":
        terms = [(residue.zero.gamma, residue.c_gamma) for residue in poles.spectral]
        return cls._with_tail(terms, poles.digits, zeta_prime_floor)

    @classmethod
    def synthetic(
        cls,
        table: ZeroTable,
        n_terms: int,
        prec: int,
        client: Optional[ZetaClient] = None,
        zeta_prime_floor: float = ZETA_PRIME_FLOOR,
    ) -> "SpectralSeries":
        """Oracle series: table ordinates taken as exact and c(iγ) computed for them at prec digits."""
        client = client or ZetaClient()
        terms = []
        LOGGER.info(f"Building a synthetic spectral series from {n_terms} table zeros at {prec} digits")
        for zero in table.first(n_terms):
            with mpmath.workdps(prec + GUARD_DIGITS):
                exact = CriticalZero(zero.index, HPValue(zero.gamma.value, mpmath.mpf(0), prec), ZeroSource.table)
            terms.append((exact.gamma, c_gamma(exact, prec, client)))
        return cls._with_tail(terms, prec, zeta_prime_floor)

    @classmethod
    def from_pairs(cls, pairs: Sequence, prec: int, zeta_prime_floor: float = ZETA_PRIME_FLOOR) -> "SpectralSeries":
        with mpmath.workdps(prec + GUARD_DIGITS):
            terms = [(as_real(gamma, prec), as_real(c, prec)) for gamma, c in pairs]
        return cls._with_tail(sorted(terms, key=lambda term: term[0].value), prec, zeta_prime_floor)

    @classmethod
    def _with_tail(cls, terms, prec: int, zeta_prime_floor: float) -> "SpectralSeries":
        start = terms[-1][0].value if terms else mpmath.mpf(14)
        tail = HPValue(c_gamma_tail(start, zeta_prime_floor), mpmath.mpf(0), 15)
        return cls(list(terms), tail, prec)

    def __len__(self) -> int:
        return len(self.terms)

    def head(self, n_terms: Optional[int]) -> List[Tuple[HPValue, HPValue]]:
        if n_terms is None:
            return self.terms
        if n_terms > len(self.terms):
            LOGGER.warning(f"{n_terms} spectral terms requested, only {len(self.terms)} are known")
        return self.terms[:n_terms]

    def tail_weight(self, n_terms: int, x) -> mpmath.mpf:
        """Bound on Σ_{k>n} |c(iγₖ)|·e^{−γₖx} for x ≥ 0."""
        with mpmath.workdps(20):
            x = mpmath.mpf(x)
            total = mpmath.mpf(0)
            for gamma, coefficient in self.terms[n_terms:]:
                total += (abs(coefficient.value) + coefficient.err) * mpmath.exp(-gamma.value * x)
            last = self.terms[-1][0].value if self.terms else mpmath.mpf(14)
            return total + self.truncation_tail.value * mpmath.exp(-last * x)

    def total(self, n_terms: Optional[int] = None) -> HPValue:
        """Σ c(iγₖ) over the first n terms, with the remaining weight as error."""
        terms = self.head(n_terms)
        with mpmath.workdps(self.prec + GUARD_DIGITS):
            value = mpmath.mpf(0)
            err = mpmath.mpf(0)
            for _, coefficient in terms:
                value += coefficient.value
                err += coefficient.err
        return HPValue(value, err + self.tail_weight(len(terms), 0), self.prec)


def v_spectral(z, series: SpectralSeries, n_terms: Optional[int] = None, prec: Optional[int] = None) -> HPComplexValue:
    """e(−z) = Σ_{k≤n} c(iγₖ)e^{−γₖz}, with the remaining terms bounded for Re z > 0."""
    prec = prec or series.prec
    z = as_complex(z, prec)
    terms = series.head(n_terms)
    with mpmath.workdps(prec + GUARD_DIGITS):
        total = mpmath.mpc(0)
        err = mpmath.mpf(0)
        magnitude = mpmath.mpf(0)
        for gamma, coefficient in terms:
            factor = mpmath.exp(-gamma.value * z.value)
            total += coefficient.value * factor
            size = abs(factor)
            magnitude += abs(coefficient.value) * size
            err += size * (coefficient.err + abs(coefficient.value) * (gamma.err * abs(z.value) + gamma.value * z.err))
        x = mpmath.re(z.value)
        if x <= 0:
            LOGGER.warning(
                f"v_spectral at Re z = {mpmath.nstr(x, 6)} <= 0: the exponential sum diverges, "
                f"the partial sum of {len(terms)} terms carries no tail bound"
            )
            return HPComplexValue(total, err + magnitude, prec)
        err += series.tail_weight(len(terms), x)
        return HPComplexValue(total, err + rounding_bound(magnitude, prec + GUARD_DIGITS - 2), prec)


class LambdaSampler:
    """λ(y) at fixed target digits, memoised by abscissa."""

    def __init__(self, family: DensityFamily, target_digits: int) -> None:
        self.family = family
        self.target_digits = target_digits
        self._values: Dict[str, HPValue] = {}

    def sample(self, y) -> HPValue:
        key = mpmath.nstr(mpmath.mpf(y), self.target_digits + GUARD_DIGITS)
        value = self._values.get(key)
        if value is None:
            value = self.family.lambda_fn(y, self.target_digits)
            self._values[key] = value
        return value

    def __call__(self, y):
        return self.sample(y).value

    def __len__(self) -> int:
        return len(self._values)


def lambda_samples(family: DensityFamily, delta, y_top, digits: int) -> List[Tuple[mpmath.mpf, HPValue]]:
    """λ(jΔ) for j = 0..M with MΔ ≤ y_top, as input for prony_extract."""
    with mpmath.workdps(digits + GUARD_DIGITS):
        delta = mpmath.mpf(delta)
        count = int(mpmath.floor(mpmath.mpf(y_top) / delta + mpmath.mpf("1e-9")))
        grid = [j * delta for j in range(count + 1)]
    if grid[-1] > family.y_max:
        raise PrecisionCeilingError(f"sampling up to y = {mpmath.nstr(grid[-1], 6)} exceeds y_max = {family.y_max}")
    sampler = LambdaSampler(family, digits)
    samples = []
    for j, y in enumerate(grid):
        samples.append((y, sampler.sample(y)))
        if j % 10 == 0:
            LOGGER.info(f"Sampled lambda at {j + 1} of {len(grid)} points ({digits} digits)")
    return samples


def synthetic_samples(pairs: Sequence, delta, count: int, prec: int) -> List[Tuple[mpmath.mpf, HPValue]]:
    """(jΔ, 2Σ c·cos(γ·jΔ)) for j = 0..count from known (γ, c) pairs."""
    with mpmath.workdps(prec + GUARD_DIGITS):
        delta = mpmath.mpf(delta)
        samples = []
        for j in range(count + 1):
            y = j * delta
            value = 2 * mpmath.fsum(mpmath.mpf(c) * mpmath.cos(mpmath.mpf(gamma) * y) for gamma, c in pairs)
            samples.append((y, HPValue(value, rounding_bound(abs(value) + 1, prec + GUARD_DIGITS - 2), prec)))
        return samples


def v_quadrature_tail(z, A, Y) -> mpmath.mpf:
    """A·|z|/(π·(Y−|z|)), bounding (z/π)·∫_Y^∞ λ(y)/(y²+z²) dy when |λ| ≤ A."""
    with mpmath.workdps(20):
        size = abs(mpmath.mpc(z))
        return mpmath.mpf(A) * size / (mpmath.pi * (mpmath.mpf(Y) - size))


def v_quadrature(z, family: DensityFamily, Y=None, prec: Optional[int] = None,
                 sampler: Optional[LambdaSampler] = None) -> HPComplexValue:
    """v(z) ≈ (z/π)·∫_0^Y λ(y)/(y²+z²) dy, its err holding the quadrature estimate and the 1/Y tail."""
    prec = prec or family.quad_digits
    Y = Y if Y is not None else family.y_max
    with mpmath.workdps(prec + GUARD_DIGITS):
        z = mpmath.mpc(z)
        Y = mpmath.mpf(Y)
        if mpmath.re(z) <= 0:
            raise HalfPlaneError(f"v_quadrature needs Re z > 0, got z = {mpmath.nstr(z, 8)}")
        if Y > family.y_max:
            raise PrecisionCeilingError(f"quadrature cutoff Y = {Y} exceeds y_max = {family.y_max}")
        if abs(z) >= Y:
            raise InvalidInputError(f"|z| = {mpmath.nstr(abs(z), 6)} must stay below the cutoff Y = {Y}")
    sampler = sampler or LambdaSampler(family, prec)

    with mpmath.workdps(prec):
        z = mpmath.mpc(z)
        half = mpmath.mpf(1) / 2
        points = [mpmath.mpf(0)]
        while points[-1] + half < Y:
            points.append(points[-1] + half)
        points.append(mpmath.mpf(Y))

        def integrand(y):
            return sampler(y) / (y * y + z * z)

        integral, quadrature_err = mpmath.quad(
            integrand, points, method="gauss-legendre", maxdegree=5, error=True
        )
        value = z / mpmath.pi * integral
        err = abs(z) / mpmath.pi * mpmath.mpf(quadrature_err)
    tail = v_quadrature_tail(z, family.A_bound.value, Y)
    LOGGER.debug(f"v_quadrature({mpmath.nstr(z, 6)}): {len(sampler)} lambda samples, tail bound {mpmath.nstr(tail, 3)}")
    return HPComplexValue(value, err + tail + rounding_bound(abs(value), prec - 2), prec)


def v_poisson(z, family: DensityFamily, prec: int = 15, omega=1) -> HPComplexValue:
    """v(z) := (1/π)·j#(z) through the entire extension of λ, defined for every z."""
    decomposition = PoissonDecomposition(EvenEntire.from_lambda(family), mpmath.mpf(omega), prec)
    transform = decomposition.h_sharp(z)
    with mpmath.workdps(prec + GUARD_DIGITS):
        return HPComplexValue(transform.value / mpmath.pi, transform.err / mpmath.pi, prec)


@dataclass(frozen=True)
class RecoveredZero:
    n: int
    gamma: HPValue
    c: HPValue
    zeta_prime: Optional[HPComplexValue] = None

    @property
    def gamma_err(self) -> mpmath.mpf:
        return self.gamma.err

    @property
    def zeta_prime_err(self) -> Optional[mpmath.mpf]:
        return self.zeta_prime.err if self.zeta_prime is not None else None

    def to_dict(self) -> dict:
        document = {
            "n": self.n,
            "gamma": self.gamma.to_dict(),
            "c": self.c.to_dict(),
            "gamma_err": mpmath.nstr(self.gamma.err, 6),
        }
        if self.zeta_prime is not None:
            document["zeta_prime"] = self.zeta_prime.to_dict()
            document["zeta_prime_err"] = mpmath.nstr(self.zeta_prime.err, 6)
        return document


@dataclass
class RecoveryReport:
    recovered: List[RecoveredZero]
    method: RecoveryMethod
    config: dict = field(default_factory=dict)
    residuals: Dict[str, object] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def achieved(self) -> int:
        return len(self.recovered)

    def gammas(self) -> List[mpmath.mpf]:
        return [zero.gamma.value for zero in self.recovered]

    def to_dict(self) -> dict:
        return {
            "version": REPORT_VERSION,
            "method": self.method.value,
            "recovered": [zero.to_dict() for zero in self.recovered],
            "config": self.config,
            "residuals": {
                key: mpmath.nstr(value, 6) if isinstance(value, (mpmath.mpf, mpmath.mpc)) else value
                for key, value in self.residuals.items()
            },
            "notes": list(self.notes),
        }


def _chebyshev_sums(order: int) -> List[List]:
    """C_d(w) = z^d + z^{−d} as polynomials in w = z + 1/z, lowest degree first."""
    sums = [[mpmath.mpf(2)], [mpmath.mpf(0), mpmath.mpf(1)]]
    for _ in range(2, order + 1):
        previous, current = sums[-2], sums[-1]
        shifted = [mpmath.mpf(0)] + current
        padded = previous + [mpmath.mpf(0)] * (len(shifted) - len(previous))
        sums.append([a - b for a, b in zip(shifted, padded)])
    return sums


def _check_grid(samples: Sequence) -> Tuple[mpmath.mpf, List[mpmath.mpf]]:
    if len(samples) < 2:
        raise InvalidInputError("prony_extract needs at least two samples")
    delta = mpmath.mpf(samples[1][0]) - mpmath.mpf(samples[0][0])
    if mpmath.mpf(samples[0][0]) != 0 or delta <= 0:
        raise InvalidInputError("samples must start at y = 0 on an increasing uniform grid")
    tolerance = delta * mpmath.mpf(10) ** (-(mpmath.mp.dps // 2))
    for j, (y, _) in enumerate(samples):
        if abs(mpmath.mpf(y) - j * delta) > tolerance:
            raise InvalidInputError(f"sample {j} at y = {mpmath.nstr(y, 10)} is off the uniform grid j*{mpmath.nstr(delta, 10)}")
    values = [as_real(value, mpmath.mp.dps).value if isinstance(value, HPBase) else mpmath.mpf(value)
              for _, value in samples]
    return delta, values


def prony_extract(
    samples: Sequence,
    order: int,
    prec: Optional[int] = None,
    root_tolerance=None,
    spurious_limit: Optional[int] = None,
) -> List[Tuple[HPValue, HPValue]]:
    """Frequencies and amplitudes (γ, c) of λ(y) = 2Σ c·cos(γy) from samples λ(jΔ), j = 0..M.

    The prediction polynomial of a cosine sum is palindromic; with λ even the
    samples extend to j = −M..M and the m unknown coefficients come from a
    Toeplitz-plus-Hankel least-squares system of M−m+1 rows. Its roots in
    w = z + 1/z are 2cos(γΔ).
    """
    if order == 0:
        return []
    if order < 0:
        raise InvalidInputError(f"model order must be non-negative, got {order}")
    prec = prec or mpmath.mp.dps
    M = len(samples) - 1
    if M < 2 * order - 1:
        raise ModelOrderError(f"{order} cosine pairs need at least {2 * order} samples, got {M + 1}")
    spurious_limit = order // 2 if spurious_limit is None else spurious_limit

    with mpmath.workdps(prec + GUARD_DIGITS):
        delta, x = _check_grid(samples)
        tolerance = mpmath.mpf(root_tolerance) if root_tolerance is not None else mpmath.mpf(10) ** (-min(12, prec // 4))

        def sample(j):
            return x[abs(j)]

        rows = []
        rhs = []
        for j in range(-order, M - 2 * order + 1):
            row = [sample(j + r) + sample(j + 2 * order - r) for r in range(1, order)]
            row.append(sample(j + order))
            rows.append(row)
            rhs.append(-(sample(j) + sample(j + 2 * order)))
        A = mpmath.matrix(rows)
        singular = mpmath.svd_r(A, compute_uv=False)
        singular = [abs(singular[i]) for i in range(singular.rows)]
        largest = max(singular)
        smallest = min(singular)
        condition = largest / smallest if smallest else mpmath.inf
        LOGGER.info(f"Prony system: {len(rows)}x{order}, condition {mpmath.nstr(condition, 5)}")
        if smallest == 0 or condition > mpmath.mpf(10) ** (prec - GUARD_DIGITS):
            raise IllConditionedError(
                f"linear-prediction system with {order} pairs has condition {mpmath.nstr(condition, 5)} at {prec} digits",
                condition=condition,
            )
        p, prediction_residual = mpmath.qr_solve(A, mpmath.matrix(rhs))
        p = [mpmath.mpf(1)] + [p[r] for r in range(order)]

        sums = _chebyshev_sums(order)
        q = [mpmath.mpf(0)] * (order + 1)
        q[0] += p[order]
        for d in range(1, order + 1):
            for degree, coefficient in enumerate(sums[d]):
                q[degree] += p[order - d] * coefficient
        try:
            roots, root_err = mpmath.polyroots(list(reversed(q)), maxsteps=50 + 10 * order,
                                               extraprec=2 * prec, error=True)
        except mpmath.NoConvergence as error:
            raise IllConditionedError(f"root finding failed: {describe_error(error)}", condition=condition)

        accepted = []
        for root in roots:
            root = mpmath.mpc(root)
            if abs(root.imag) <= tolerance and abs(root.real) <= 2 + tolerance:
                w = max(min(root.real, mpmath.mpf(2)), mpmath.mpf(-2))
                accepted.append(w)
        spurious = order - len(accepted)
        if spurious > spurious_limit:
            raise ModelOrderError(
                f"{spurious} of {order} prediction roots are off the unit circle (limit {spurious_limit}); lower the model order"
            )

        angles = sorted(mpmath.acos(w / 2) for w in accepted)
        frequencies = [angle / delta for angle in angles]
        y = [j * delta for j in range(M + 1)]
        basis = mpmath.matrix([[2 * mpmath.cos(gamma * y_j) for gamma in frequencies] for y_j in y])
        amplitudes, fit_residual = mpmath.qr_solve(basis, mpmath.matrix(x))

        spread = mpmath.sqrt(mpmath.fsum(y_j ** 2 for y_j in y) / 2)
        scale = mpmath.sqrt(mpmath.mpf(M + 1) / 2)
        floor = rounding_bound(max(abs(value) for value in x) + 1, prec)
        results = []
        for l, (angle, gamma) in enumerate(zip(angles, frequencies)):
            c = amplitudes[l]
            sine = abs(mpmath.sin(angle))
            root_part = root_err / (2 * sine * delta) if sine else mpmath.inf
            fit_part = (fit_residual + floor) / (2 * abs(c) * spread) if c else mpmath.inf
            gamma_err = root_part + fit_part
            c_err = (fit_residual + floor) / (2 * scale) + abs(c) * gamma_err * y[-1]
            if not (mpmath.isfinite(gamma_err) and mpmath.isfinite(c_err)):
                raise IllConditionedError(f"frequency {mpmath.nstr(gamma, 10)} has no finite error estimate", condition=condition)
            results.append((HPValue(gamma, gamma_err, prec), HPValue(c, c_err, prec)))
    LOGGER.info(
        f"Prony fit: {len(results)} frequencies, {spurious} spurious roots, "
        f"fit residual {mpmath.nstr(fit_residual, 3)}, prediction residual {mpmath.nstr(prediction_residual, 3)}"
    )
    return results


def _with_zeta_prime(n: int, gamma: HPValue, c: HPValue, prec: int, client: Optional[ZetaClient]) -> RecoveredZero:
    """ζ′(½+iγ) = 1/(b(iγ)·c(iγ))."""
    digits = max(10, min(prec, int(-mpmath.log10(gamma.err)) if gamma.err > 0 else prec))
    try:
        b = b_factor(CriticalZero(n, gamma, ZeroSource.bisection), digits, client)
        with mpmath.workdps(digits + GUARD_DIGITS):
            zeta_prime = 1 / (b * as_complex(c, digits))
    except ZeroDivisionError:
        zeta_prime = None
    return RecoveredZero(n, gamma, c, zeta_prime)


def prony_report(
    samples: Sequence,
    order: int,
    prec: int,
    client: Optional[ZetaClient] = None,
    config: Optional[dict] = None,
    max_zeros: int = 40,
) -> RecoveryReport:
    pairs = prony_extract(samples, order, prec)
    recovered = [
        _with_zeta_prime(n, gamma, c, prec, client)
        for n, (gamma, c) in enumerate(pairs[:max_zeros], start=1)
    ]
    return RecoveryReport(
        recovered,
        RecoveryMethod.prony,
        dict(config or {}, order=order, samples=len(samples), digits=prec),
        notes=[f"{len(pairs)} frequencies extracted from lambda samples only"],
    )


def peel_extract(
    evaluator: Callable,
    n_target: int,
    x_grid: Sequence = PEEL_GRID,
    prec: int = 60,
    client: Optional[ZetaClient] = None,
    with_zeta_prime: bool = True,
    config: Optional[dict] = None,
) -> RecoveryReport:
    """Successive limits γₙ = −lim (1/x)·log|v(x) − e(−x, n−1)| and cₙ = lim e^{γₙx}(v(x) − e(−x, n−1)).

    The log-slopes between consecutive grid points and the scaled residuals
    are extrapolated in x with the Shanks transformation. ζ′ₙ = 1/(b(iγₙ)·cₙ).
    """
    with mpmath.workdps(prec + GUARD_DIGITS):
        xs = sorted(mpmath.mpf(x) for x in x_grid)
    if len(xs) < 3:
        raise InvalidInputError("peel_extract needs at least three grid points")
    samples = []
    for x in xs:
        value = evaluator(x)
        if isinstance(value, HPComplexValue):
            # v is real on the positive axis; the imaginary part is rounding
            with mpmath.workdps(prec + GUARD_DIGITS):
                value = HPValue(mpmath.re(value.value), value.err + abs(mpmath.im(value.value)), value.prec)
        samples.append(as_real(value, prec))
    report = RecoveryReport(
        [],
        RecoveryMethod.peeling,
        dict(config or {}, n_target=n_target, x_grid=[mpmath.nstr(x, 10) for x in xs], digits=prec),
    )

    for n in range(1, n_target + 1):
        with mpmath.workdps(prec + GUARD_DIGITS):
            residuals = []
            errors = []
            for x, sample in zip(xs, samples):
                peeled = mpmath.mpf(0)
                peeled_err = mpmath.mpf(0)
                for zero in report.recovered:
                    decay = mpmath.exp(-zero.gamma.value * x)
                    peeled += zero.c.value * decay
                    peeled_err += (zero.c.err + abs(zero.c.value) * x * zero.gamma.err) * decay
                residual = sample.value - peeled
                err = sample.err + peeled_err
                if abs(residual) <= 2 * err:
                    report.notes.append(
                        f"noise floor at n={n}, x={mpmath.nstr(x, 6)}: residual {mpmath.nstr(abs(residual), 3)} "
                        f"against error {mpmath.nstr(err, 3)}"
                    )
                    raise NoiseFloorError(
                        f"peeling reached the noise floor at n={n} (x={mpmath.nstr(x, 6)}); "
                        f"recovered {n - 1} of {n_target} zeros",
                        achieved_n=n - 1,
                        report=report,
                    )
                residuals.append(residual)
                errors.append(err)

            if residuals[-1] * (-1) ** n < 0:
                LOGGER.debug(f"peeling residual for n={n} has sign opposite to (-1)^n")

            slopes = []
            slope_err = mpmath.mpf(0)
            for i in range(len(xs) - 1):
                step = xs[i + 1] - xs[i]
                slopes.append(-(mpmath.log(abs(residuals[i + 1])) - mpmath.log(abs(residuals[i]))) / step)
                slope_err += (errors[i] / abs(residuals[i]) + errors[i + 1] / abs(residuals[i + 1])) / step
            gamma, gamma_extrapolation = shanks_limit(slopes)
            gamma_err = gamma_extrapolation + slope_err

            scaled = [mpmath.exp(gamma * x) * residual for x, residual in zip(xs, residuals)]
            c, c_extrapolation = shanks_limit(scaled)
            c_err = c_extrapolation + abs(c) * xs[-1] * gamma_err
            c_err += max(mpmath.exp(gamma * x) * err for x, err in zip(xs, errors))

        gamma_hp = HPValue(gamma, gamma_err, prec)
        c_hp = HPValue(c, c_err, prec)
        if with_zeta_prime:
            zero = _with_zeta_prime(n, gamma_hp, c_hp, prec, client)
        else:
            zero = RecoveredZero(n, gamma_hp, c_hp)
        report.recovered.append(zero)
        report.residuals[f"slope_spread_{n}"] = gamma_extrapolation
        LOGGER.info(f"Peeled zero {n}: gamma = {gamma_hp}, c = {c_hp}")
    return report


def _check_lower_half_plane(z: HPComplexValue) -> None:
    if mpmath.im(z.value) >= 0:
        raise HalfPlaneError(f"p_i_plus integral path needs Im z < 0, got z = {mpmath.nstr(z.value, 8)}")


def p_i_plus_pole_sum(z, series: SpectralSeries, n_terms: Optional[int] = None,
                      prec: Optional[int] = None) -> HPComplexValue:
    """Σ_{k≤n} c(iγₖ)/(z − iγₖ), the remaining terms bounded for Im z < γ_{n+1}."""
    prec = prec or series.prec
    z = as_complex(z, prec)
    terms = series.head(n_terms)
    with mpmath.workdps(prec + GUARD_DIGITS):
        total = mpmath.mpc(0)
        err = mpmath.mpf(0)
        for gamma, coefficient in terms:
            distance = z.value - mpmath.mpc(0, gamma.value)
            if abs(distance) <= gamma.err + z.err:
                raise InvalidInputError(f"z = {mpmath.nstr(z.value, 10)} sits on the pole i*{mpmath.nstr(gamma.value, 10)}")
            total += coefficient.value / distance
            err += coefficient.err / abs(distance)
            err += abs(coefficient.value) * (gamma.err + z.err) / (abs(distance) * (abs(distance) - gamma.err - z.err))
        remaining = series.terms[len(terms):]
        next_gamma = remaining[0][0].value if remaining else (series.terms[-1][0].value if series.terms else mpmath.mpf(14))
        gap = next_gamma - mpmath.im(z.value)
        if gap > 0:
            err += series.tail_weight(len(terms), 0) / gap
        else:
            LOGGER.warning(f"p_i_plus at Im z = {mpmath.nstr(mpmath.im(z.value), 6)} is beyond the truncated poles")
    return HPComplexValue(total, err + rounding_bound(abs(total), prec + GUARD_DIGITS - 2), prec)


def p_i_plus_integral(z, series: SpectralSeries, n_terms: Optional[int] = None,
                      prec: Optional[int] = None) -> HPComplexValue:
    """−i·∫_0^∞ e^{−izy}·(−e(−y)) dy, the Laplace form of p_{i,+} on Im z < 0."""
    prec = prec or series.prec
    z = as_complex(z, prec)
    _check_lower_half_plane(z)
    terms = series.head(n_terms)
    with mpmath.workdps(prec + GUARD_DIGITS):
        gammas = [gamma.value for gamma, _ in terms]
        coefficients = [coefficient.value for _, coefficient in terms]

        def integrand(y):
            exponential_sum = mpmath.fsum(c * mpmath.exp(-gamma * y) for gamma, c in zip(gammas, coefficients))
            return -mpmath.exp(-mpmath.mpc(0, 1) * z.value * y) * exponential_sum

        integral, quadrature_err = mpmath.quad(integrand, [0, 1, 4, mpmath.inf], error=True)
        value = -mpmath.mpc(0, 1) * integral
        err = mpmath.mpf(quadrature_err)
        for gamma, coefficient in terms:
            err += coefficient.err / (gamma.value - mpmath.im(z.value))
        remaining = series.terms[len(terms):]
        next_gamma = remaining[0][0].value if remaining else (series.terms[-1][0].value if series.terms else mpmath.mpf(14))
        err += series.tail_weight(len(terms), 0) / (next_gamma - mpmath.im(z.value))
    return HPComplexValue(value, err, prec)


def p_i_plus(z, series: SpectralSeries, n_terms: Optional[int] = None, prec: Optional[int] = None,
             check: bool = True) -> HPComplexValue:
    """p_{i,+}(z) from the pole sum, cross-checked against the Laplace integral on Im z < 0.

    The pole sum holds on the whole plane away from the iγₖ; the integral
    path, and with it the cross-check, only where Im z < 0.
    """
    prec = prec or series.prec
    z = as_complex(z, prec)
    pole_sum = p_i_plus_pole_sum(z, series, n_terms, prec)
    if check and mpmath.im(z.value) < 0:
        integral = p_i_plus_integral(z, series, n_terms, prec)
        gap = abs(pole_sum.value - integral.value)
        if gap > pole_sum.err + integral.err:
            LOGGER.warning(
                f"p_i_plus paths disagree at z = {mpmath.nstr(z.value, 8)}: gap {mpmath.nstr(gap, 3)} "
                f"exceeds the combined error {mpmath.nstr(pole_sum.err + integral.err, 3)}"
            )
    return pole_sum


def p_i_plus_asymptotic(series: SpectralSeries, n_terms: Optional[int] = None) -> HPValue:
    """lim z·p_{i,+}(z) along −i∞, which is Σ c(iγₖ)."""
    return series.total(n_terms)
