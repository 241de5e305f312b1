import abc
import datetime
import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import mpmath
import singer

from zeta_laplace_lab.client import ZetaClient
from zeta_laplace_lab.hpvalue import HPValue
from zeta_laplace_lab.laplace_density import DensityFamily, ScanResult
from zeta_laplace_lab.poles_residues import ZeroTable
from zeta_laplace_lab.spectral_recovery import SpectralSeries
from zeta_laplace_lab.utils import InsufficientZerosError, LabConfig, describe_error

LOGGER = singer.get_logger()

FAILURE_NOTE = "evidence against the hypotheses or an underestimated budget"


class IdentityName(str, enum.Enum):
    continuity_criterion = "continuity_criterion"
    eq_star = "eq_star"
    laplace_rep = "laplace_rep"
    e_equals_v = "e_equals_v"
    p0_positivity = "p0_positivity"
    p0_boundedness = "p0_boundedness"
    char_bound = "char_bound"
    strip_w = "strip_w"


def _timestamp() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


@dataclass
class IdentityReport:
    """A measured identity residual against its truncation budget.

    The verdict is never stored: passed is recomputed from residual and budget,
    and any recorded violation of a side condition fails the report.
    """
    name: IdentityName
    residual: HPValue
    budget: HPValue
    config: dict = field(default_factory=dict)
    details: Dict[str, object] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    violations: List[str] = field(default_factory=list)
    error: Optional[str] = None
    degraded: bool = False
    reduced_coverage: bool = False
    started_at: str = field(default_factory=_timestamp)
    finished_at: Optional[str] = None

    @property
    def passed(self) -> bool:
        if self.error is not None or self.violations:
            return False
        return abs(self.residual.value) <= self.budget.value + self.residual.err

    def annotations(self) -> List[str]:
        notes = list(self.notes) + list(self.violations)
        if not self.passed and FAILURE_NOTE not in notes:
            notes.append(FAILURE_NOTE)
        return notes

    def to_dict(self) -> dict:
        return {
            "name": self.name.value,
            "residual": self.residual.to_dict(),
            "budget": self.budget.to_dict(),
            "pass": self.passed,
            "label": "consequences tested",
            "config": self.config,
            "details": {
                key: mpmath.nstr(value, 10) if isinstance(value, (mpmath.mpf, mpmath.mpc)) else value
                for key, value in self.details.items()
            },
            "notes": self.annotations(),
            "error": self.error,
            "degraded": self.degraded,
            "reduced_coverage": self.reduced_coverage,
            "timestamps": {"started": self.started_at, "finished": self.finished_at},
        }

    @classmethod
    def failed(cls, name: IdentityName, error: BaseException, config: dict) -> "IdentityReport":
        zero = HPValue(mpmath.mpf(0), mpmath.mpf(0), 15)
        return cls(
            name,
            zero,
            zero,
            config,
            error=describe_error(error),
            degraded=isinstance(error, InsufficientZerosError),
            finished_at=_timestamp(),
        )

    @classmethod
    def from_scan(cls, name: IdentityName, scans: List[ScanResult], config: dict) -> "IdentityReport":
        """Scans judge each point within its own error; the residual is the worst shortfall of a failed scan."""
        margin = min(scan.margin for scan in scans)
        with mpmath.workdps(20):
            shortfall = mpmath.mpf(0)
            if any(not scan.passed for scan in scans):
                shortfall = -margin if mpmath.isfinite(margin) and margin < 0 else mpmath.mpf(0)
                if shortfall == 0:
                    # a failed point without a negative margin (a sign check) still counts
                    shortfall = mpmath.mpf(1)
        notes = [note for scan in scans for note in scan.notes]
        return cls(
            name,
            HPValue(shortfall, mpmath.mpf(0), 15),
            HPValue(mpmath.mpf(0), mpmath.mpf(0), 15),
            config,
            details={"min_margin": margin, "points": sum(len(scan.points) for scan in scans)},
            notes=notes,
            reduced_coverage=any(scan.reduced_coverage for scan in scans),
            finished_at=_timestamp(),
        )


class CheckContext:
    """Shared inputs of one validation run: config, zero table, client and the density family."""

    def __init__(self, config: LabConfig, table: Optional[ZeroTable] = None,
                 client: Optional[ZetaClient] = None) -> None:
        self.config = config
        self.table = table
        self.client = client or ZetaClient.from_config(config)
        self._family: Optional[DensityFamily] = None
        self._series: Optional[SpectralSeries] = None

    @property
    def family(self) -> DensityFamily:
        if self._family is None:
            LOGGER.info("Building the density family...")
            self._family = DensityFamily.build(self.config, self.table, self.client)
            LOGGER.info("Done building the density family")
        return self._family

    @property
    def series(self) -> SpectralSeries:
        if self.table is None or not len(self.table):
            raise InsufficientZerosError("no zero table is loaded; spectral-side checks cannot run")
        if self._series is None:
            self._series = SpectralSeries.from_pole_set(
                self.family.poles, self.config.get("zeta_prime_floor", 0.1)
            )
        return self._series

    def snapshot(self) -> dict:
        snapshot = dict(self.config)
        snapshot["zeros_loaded"] = len(self.table) if self.table is not None else 0
        return snapshot


class IdentityCheck(abc.ABC):
    name: IdentityName
    needs_zeros: bool = False

    def __init__(self, context: CheckContext) -> None:
        self.context = context
        self.config = context.config

    def prepare(self) -> None:
        """Gather shared inputs before measuring; spectral checks fail fast here without zeros."""
        if self.needs_zeros:
            self.context.series

    @abc.abstractmethod
    def measure(self) -> IdentityReport:
        """Compute the residual and budget of the identity."""

    def run(self) -> IdentityReport:
        LOGGER.info(f"Running check {self.name.value}...")
        try:
            self.prepare()
            report = self.measure()
        except Exception as error:
            LOGGER.warning(f"Check {self.name.value} could not complete: {describe_error(error)}")
            return IdentityReport.failed(self.name, error, self.context.snapshot())
        report.finished_at = _timestamp()
        verdict = "pass" if report.passed else "FAIL"
        LOGGER.info(
            f"Done check {self.name.value}: {verdict}, residual {mpmath.nstr(abs(report.residual.value), 3)} "
            f"against budget {mpmath.nstr(report.budget.value, 3)}"
        )
        return report

    def report(self, residual: HPValue, budget, details: Optional[dict] = None,
               notes: Optional[List[str]] = None, reduced_coverage: bool = False,
               violations: Optional[List[str]] = None) -> IdentityReport:
        if not isinstance(budget, HPValue):
            budget = HPValue(mpmath.mpf(budget), mpmath.mpf(0), 15)
        return IdentityReport(
            self.name,
            residual,
            budget,
            self.context.snapshot(),
            details=details or {},
            notes=notes or [],
            violations=violations or [],
            reduced_coverage=reduced_coverage,
        )
