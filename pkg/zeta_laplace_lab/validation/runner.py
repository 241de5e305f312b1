"""Run every identity check and aggregate the reports."""
from typing import Iterable, List, Optional

import singer

from zeta_laplace_lab.client import ZetaClient
from zeta_laplace_lab.poles_residues import ZeroTable
from zeta_laplace_lab.utils import LabConfig
from zeta_laplace_lab.validation.base_checks import CheckContext, IdentityName, IdentityReport
from zeta_laplace_lab.validation.density_checks import (
    CharBoundCheck,
    LaplaceRepCheck,
    P0BoundednessCheck,
    P0PositivityCheck,
    StripWCheck,
)
from zeta_laplace_lab.validation.spectral_checks import (
    ContinuityCriterionCheck,
    EqStarCheck,
    EqualsVCheck,
)

LOGGER = singer.get_logger()

CHECK_TYPES = [
    ContinuityCriterionCheck,
    EqStarCheck,
    LaplaceRepCheck,
    EqualsVCheck,
    P0PositivityCheck,
    P0BoundednessCheck,
    CharBoundCheck,
    StripWCheck,
]

# CLI selectors; "laplace" covers every strip
SELECTORS = {
    "continuity": [IdentityName.continuity_criterion],
    "eqstar": [IdentityName.eq_star],
    "laplace": [IdentityName.laplace_rep, IdentityName.strip_w],
    "ev": [IdentityName.e_equals_v],
    "positivity": [IdentityName.p0_positivity, IdentityName.p0_boundedness],
    "charbound": [IdentityName.char_bound],
}


def run_all(
    config: LabConfig,
    table: Optional[ZeroTable] = None,
    client: Optional[ZetaClient] = None,
    only: Optional[Iterable[IdentityName]] = None,
) -> List[IdentityReport]:
    """Run the selected checks (all by default) in a fixed order; failures are recorded, never raised."""
    context = CheckContext(config, table, client)
    selected = set(only) if only is not None else None
    reports = []
    for check_type in CHECK_TYPES:
        if selected is not None and check_type.name not in selected:
            continue
        reports.append(check_type(context).run())
    passed = sum(report.passed for report in reports)
    degraded = sum(report.degraded for report in reports)
    LOGGER.info(f"Validation finished: {passed} of {len(reports)} checks pass, {degraded} degraded")
    LOGGER.info(f"Evaluation statistics: {context.client.stats()}")
    return reports


def is_degraded(reports: List[IdentityReport]) -> bool:
    return any(report.degraded for report in reports)
