from zeta_laplace_lab.validation.base_checks import FAILURE_NOTE, IdentityName, IdentityReport
from zeta_laplace_lab.validation.runner import SELECTORS, run_all
from zeta_laplace_lab.validation.spectral_checks import continuity_criterion

__all__ = ["FAILURE_NOTE", "IdentityName", "IdentityReport", "SELECTORS", "continuity_criterion", "run_all"]
