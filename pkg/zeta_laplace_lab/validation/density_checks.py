import random
from typing import List

import mpmath

from zeta_laplace_lab.hpvalue import HPValue
from zeta_laplace_lab.laplace_density import LaplaceResult
from zeta_laplace_lab.utils import DEFAULT_CONFIG
from zeta_laplace_lab.validation.base_checks import IdentityCheck, IdentityName, IdentityReport
from zeta_laplace_lab.validation.spectral_checks import worst_point

LAPLACE_Y = 4.0
LAPLACE_SEED = 20
STRIPS = (-1, 0, 1)


def _laplace_point(result: LaplaceResult) -> tuple:
    residual = HPValue(result.residual, mpmath.mpf(0), result.value.prec)
    details = {
        "s": result.s,
        "w": result.w,
        "tail_left": result.tail_left,
        "tail_right": result.tail_right,
        "quadrature_err": result.quadrature_err,
    }
    return residual, result.bound, details


def laplace_sample_points(count: int, seed: int = LAPLACE_SEED) -> List[mpmath.mpf]:
    """Deterministic pseudo-random abscissae in (0.5, 3.5), inside V₀ and away from its edges."""
    generator = random.Random(seed)
    with mpmath.workdps(20):
        return [mpmath.mpf(0.5) + 3 * mpmath.mpf(generator.random()) for _ in range(count)]


class LaplaceRepCheck(IdentityCheck):
    name = IdentityName.laplace_rep

    def measure(self) -> IdentityReport:
        family = self.context.family
        Y = min(LAPLACE_Y, family.y_max)
        count = self.config.get("laplace_points", DEFAULT_CONFIG["laplace_points"])
        points = [_laplace_point(family.laplace_f(s, Y)) for s in laplace_sample_points(count)]
        residual, budget, details = worst_point(points)
        details["Y"] = Y
        return self.report(residual, budget, details, reduced_coverage=Y < LAPLACE_Y)


class StripWCheck(IdentityCheck):
    """Laplace representations on V₋₄, V₀ and V₄; w = −1 goes through the reflection rule."""
    name = IdentityName.strip_w

    def measure(self) -> IdentityReport:
        family = self.context.family
        Y = min(LAPLACE_Y, family.y_max)
        points = []
        scales = {}
        for w in STRIPS:
            with mpmath.workdps(20):
                s = 4 * w + mpmath.mpf("1.7")
            point = _laplace_point(family.strip_laplace(s, w, Y))
            scales[w] = point[0].value
            points.append(point)
        residual, budget, details = worst_point(points)
        violations = []
        with mpmath.workdps(20):
            low, mid = scales[-1], scales[0]
            # the reflected strip must reproduce the w=0 residual scale
            if mid > 0 and low > 0 and not (mid / 10 <= low <= 10 * mid):
                violations.append(
                    f"w=-1 residual {mpmath.nstr(low, 3)} is not within a factor 10 of the w=0 residual {mpmath.nstr(mid, 3)}"
                )
        details.update({f"residual_w{w}": value for w, value in scales.items()})
        details["Y"] = Y
        return self.report(residual, budget, details, reduced_coverage=Y < LAPLACE_Y, violations=violations)


class P0PositivityCheck(IdentityCheck):
    name = IdentityName.p0_positivity

    def measure(self) -> IdentityReport:
        scan = self.context.family.positivity_scan(
            points=self.config.get("positivity_points", DEFAULT_CONFIG["positivity_points"]),
            y_top=self.config.get("positivity_v_max_y", DEFAULT_CONFIG["positivity_v_max_y"]),
        )
        return IdentityReport.from_scan(self.name, [scan], self.context.snapshot())


class P0BoundednessCheck(IdentityCheck):
    name = IdentityName.p0_boundedness

    def measure(self) -> IdentityReport:
        scan = self.context.family.boundedness_scan()
        return IdentityReport.from_scan(self.name, [scan], self.context.snapshot())


class CharBoundCheck(IdentityCheck):
    """|f(x+it)| ≤ |f(x)| on vertical lines inside the strips."""
    name = IdentityName.char_bound

    def measure(self) -> IdentityReport:
        family = self.context.family
        t_max = self.config.get("charbound_t_max", DEFAULT_CONFIG["charbound_t_max"])
        t_step = self.config.get("charbound_t_step", DEFAULT_CONFIG["charbound_t_step"])
        with mpmath.workdps(20):
            count = int(mpmath.floor(mpmath.mpf(t_max) / mpmath.mpf(t_step)))
            t_grid = [mpmath.mpf(t_step) * j for j in range(1, count + 1)]
        scans = [
            family.char_bound_check(x, t_grid)
            for x in self.config.get("charbound_x", DEFAULT_CONFIG["charbound_x"])
        ]
        return IdentityReport.from_scan(self.name, scans, self.context.snapshot())
