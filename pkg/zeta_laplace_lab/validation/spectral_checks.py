from typing import List, Optional, Tuple

import mpmath
import singer

from zeta_laplace_lab.client import ZetaClient
from zeta_laplace_lab.hiprec_zeta import GUARD_DIGITS
from zeta_laplace_lab.hpvalue import HPValue
from zeta_laplace_lab.poles_residues import PoleSet, ZeroTable, build_pole_set
from zeta_laplace_lab.series import accelerate
from zeta_laplace_lab.spectral_recovery import LambdaSampler, v_quadrature, v_spectral
from zeta_laplace_lab.utils import DEFAULT_CONFIG, InsufficientZerosError
from zeta_laplace_lab.validation.base_checks import IdentityCheck, IdentityName, IdentityReport

LOGGER = singer.get_logger()


def worst_point(points: List[Tuple[HPValue, mpmath.mpf, dict]]) -> Tuple[HPValue, mpmath.mpf, dict]:
    """The (residual, budget, details) entry with the largest residual-to-budget ratio."""
    def ratio(point):
        residual, budget, _ = point
        with mpmath.workdps(20):
            allowance = budget + residual.err
            if allowance == 0:
                return mpmath.inf if residual.value != 0 else mpmath.mpf(0)
            return abs(residual.value) / allowance

    return max(points, key=ratio)


def continuity_criterion(
    N_zeros: int,
    K_trunc: int,
    accel: str = "averaging",
    table: Optional[ZeroTable] = None,
    client: Optional[ZetaClient] = None,
    digits: int = 30,
    averaging_depth: int = 20,
    poles: Optional[PoleSet] = None,
    config: Optional[dict] = None,
) -> IdentityReport:
    """Residual of Σ_k c(iγₖ) + c(0)/2 + Σ_{k≤K} c_res(4k).

    The budget is the acceleration estimate of the alternating spectral sum
    plus the propagated residue errors. The real-pole sum is taken as
    configured: its omitted terms are below 10^−100 from K = 25 on.
    """
    if table is None or len(table) < N_zeros:
        available = len(table) if table is not None else 0
        raise InsufficientZerosError(f"continuity criterion needs {N_zeros} zeros, the table holds {available}")
    if poles is None or len(poles.spectral) < N_zeros or poles.K_trunc < K_trunc:
        poles = build_pole_set(digits, K_trunc, table, N_zeros, client)

    with mpmath.workdps(digits + GUARD_DIGITS):
        spectral = poles.spectral[:N_zeros]
        accelerated = accelerate([residue.c_gamma.value for residue in spectral], averaging_depth, accel)
        spectral_err = mpmath.fsum(residue.c_gamma.err for residue in spectral)
        coefficients = poles.real_coefficients(K_trunc, digits) if K_trunc else []
        real_sum = mpmath.fsum(c.value for c in coefficients)
        real_err = mpmath.fsum(c.err for c in coefficients)
        c0 = poles.c0
        residual = accelerated.value + c0.value / 2 + real_sum
        err = spectral_err + c0.err / 2 + real_err
        real_side = -c0.value / 2 - real_sum

    LOGGER.info(
        f"Continuity criterion with N={N_zeros}, K={K_trunc}, {accel}: spectral side "
        f"{mpmath.nstr(accelerated.value, 10)}, residue side {mpmath.nstr(real_side, 10)}"
    )
    return IdentityReport(
        IdentityName.continuity_criterion,
        HPValue(residual, err, digits),
        HPValue(accelerated.estimate, mpmath.mpf(0), 15),
        dict(config or {}, n_zeros=N_zeros, k_trunc=K_trunc, acceleration=accel, averaging_depth=averaging_depth),
        details={
            "spectral_side": accelerated.value,
            "residue_side": real_side,
            "acceleration_depth": accelerated.depth,
            "partial_sums": accelerated.partial_sums,
        },
    )


class ContinuityCriterionCheck(IdentityCheck):
    name = IdentityName.continuity_criterion
    needs_zeros = True

    def measure(self) -> IdentityReport:
        family = self.context.family
        config = self.config
        return continuity_criterion(
            len(family.poles.spectral),
            config.get("k_trunc", DEFAULT_CONFIG["k_trunc"]),
            "averaging",
            self.context.table,
            self.context.client,
            config.get("digits", DEFAULT_CONFIG["digits"]),
            config.get("averaging_depth", DEFAULT_CONFIG["averaging_depth"]),
            poles=family.poles,
            config=self.context.snapshot(),
        )


class EqStarCheck(IdentityCheck):
    """Spectral form of the density on y < 0 against g₀(y)."""
    name = IdentityName.eq_star
    needs_zeros = True

    def measure(self) -> IdentityReport:
        family = self.context.family
        digits = self.config.get("digits", DEFAULT_CONFIG["digits"])
        points = []
        for y in self.config.get("eqstar_grid", DEFAULT_CONFIG["eqstar_grid"]):
            estimate = family.eq_star_residual(mpmath.mpf(y), digits)
            points.append((estimate.residual, estimate.budget, dict(estimate.details)))
        residual, budget, details = worst_point(points)
        details["grid_points"] = len(points)
        return self.report(residual, budget, details)


class EqualsVCheck(IdentityCheck):
    """v from λ by quadrature against the exponential sum over zeros, within the 1/Y tail."""
    name = IdentityName.e_equals_v
    needs_zeros = True

    def measure(self) -> IdentityReport:
        family = self.context.family
        series = self.context.series
        digits = self.config.get("quad_digits", DEFAULT_CONFIG["quad_digits"])
        sampler = LambdaSampler(family, digits)
        points = []
        for z in self.config.get("ev_grid", DEFAULT_CONFIG["ev_grid"]):
            quadrature = v_quadrature(z, family, family.y_max, digits, sampler)
            spectral = v_spectral(z, series, prec=digits)
            with mpmath.workdps(digits + GUARD_DIGITS):
                gap = quadrature.value - spectral.value
                residual = HPValue(abs(gap), mpmath.mpf(0), digits)
            points.append((residual, quadrature.err + spectral.err, {"z": z}))
        residual, budget, details = worst_point(points)
        details["grid_points"] = len(points)
        details["lambda_samples"] = len(sampler)
        return self.report(residual, budget, details)
