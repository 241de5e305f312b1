from typing import Optional

import mpmath
import singer

from zeta_laplace_lab import hiprec_zeta
from zeta_laplace_lab.cache import ValueCache
from zeta_laplace_lab.hpvalue import HPComplexValue, HPValue, as_complex
from zeta_laplace_lab.utils import LabConfig

LOGGER = singer.get_logger()


class ZetaClient:
    """Entry point for ζ/ξ evaluations, with the optional value cache in front."""

    def __init__(self, config: Optional[LabConfig] = None, cache: Optional[ValueCache] = None) -> None:
        self.config: LabConfig = config or {}
        self.cache = cache
        self.evaluations = 0
        self.options = {
            "em_height_limit": self.config.get("em_height_limit", hiprec_zeta.EM_HEIGHT_LIMIT),
            "term_ceiling": self.config.get("term_ceiling", hiprec_zeta.TERM_CEILING),
        }

    @classmethod
    def from_config(cls, config: LabConfig) -> "ZetaClient":
        cache = None
        if config.get("cache_enabled", True):
            cache = ValueCache.from_environment(config.get("cache_dir"))
        return cls(config, cache)

    def _cached(self, function: str, s, digits: int, compute) -> HPComplexValue:
        s = as_complex(s, digits)
        exact_argument = s.err == 0
        if self.cache is not None and exact_argument:
            cached = self.cache.get(function, s.value, digits)
            if cached is not None:
                LOGGER.debug(f"Cache hit for {function}({mpmath.nstr(s.value, 12)}) at {digits} digits")
                return cached
        self.evaluations += 1
        value = compute(s, digits, **self.options)
        if self.cache is not None and exact_argument:
            self.cache.put(function, s.value, digits, value)
        return value

    def xi(self, s, digits: int) -> HPComplexValue:
        return self._cached("xi", s, digits, hiprec_zeta.xi)

    def xi_prime(self, s, digits: int) -> HPComplexValue:
        return self._cached("xi_prime", s, digits, hiprec_zeta.xi_prime)

    def zeta(self, s, digits: int) -> HPComplexValue:
        return self._cached("zeta", s, digits, hiprec_zeta.zeta)

    def zeta_prime(self, s, digits: int) -> HPComplexValue:
        return self._cached("zeta_prime", s, digits, hiprec_zeta.zeta_prime)

    def Xi_prime(self, t, digits: int) -> HPValue:
        with mpmath.workdps(digits + hiprec_zeta.GUARD_DIGITS):
            value = self.xi_prime(mpmath.mpc(mpmath.mpf(1) / 2, t), digits)
            rotated = mpmath.mpc(0, 1) * value.value
            return HPValue(mpmath.re(rotated), value.err + abs(mpmath.im(rotated)), digits)

    def stats(self) -> dict:
        stats = {"evaluations": self.evaluations}
        if self.cache is not None:
            stats.update(self.cache.stats())
        return stats
