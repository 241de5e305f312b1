import mpmath
import pytest

from zeta_laplace_lab.hpvalue import HPComplexValue, HPValue
from zeta_laplace_lab.laplace_density import LaplaceResult
from zeta_laplace_lab.utils import InsufficientZerosError
from zeta_laplace_lab.validation import (
    FAILURE_NOTE,
    SELECTORS,
    IdentityName,
    IdentityReport,
    continuity_criterion,
    run_all,
)
from zeta_laplace_lab.validation.base_checks import CheckContext
from zeta_laplace_lab.validation.density_checks import StripWCheck
from zeta_laplace_lab.validation.runner import is_degraded
from zeta_laplace_lab.validation.spectral_checks import worst_point


def _hp(value, err=0):
    return HPValue(mpmath.mpf(value), mpmath.mpf(err), 15)


def test_verdict_counts_residual_error():
    """A residual passes when it is within budget plus its own error."""
    report = IdentityReport(IdentityName.eq_star, _hp("1.0", "0.6"), _hp("0.5"))
    assert report.passed
    assert FAILURE_NOTE not in report.annotations()
    failing = IdentityReport(IdentityName.eq_star, _hp("1.0", "0.1"), _hp("0.5"))
    assert not failing.passed
    assert FAILURE_NOTE in failing.annotations()


def test_failed_report():
    report = IdentityReport.failed(IdentityName.e_equals_v, InsufficientZerosError("no table"), {})
    assert not report.passed
    assert report.degraded
    assert report.error == "InsufficientZerosError: no table"
    other = IdentityReport.failed(IdentityName.laplace_rep, ValueError("bad"), {})
    assert not other.degraded


def test_report_document():
    report = IdentityReport(
        IdentityName.continuity_criterion, _hp("1e-6"), _hp("1e-5"), {"k_trunc": 25},
        details={"spectral_side": mpmath.mpf("-0.0088")},
    )
    document = report.to_dict()
    assert document["name"] == "continuity_criterion"
    assert document["pass"] is True
    assert document["label"] == "consequences tested"
    assert document["details"]["spectral_side"] == "-0.0088"
    assert set(document["timestamps"]) == {"started", "finished"}


def test_worst_point_uses_ratio():
    points = [
        (_hp("1e-3"), mpmath.mpf("1"), {"at": 1}),
        (_hp("1e-6"), mpmath.mpf("1e-8"), {"at": 2}),
    ]
    assert worst_point(points)[2] == {"at": 2}


def test_continuity_without_real_poles_fails(table, client):
    """Dropping every real residue leaves c(0)/2 unbalanced."""
    report = continuity_criterion(30, 0, table=table, client=client, digits=20)
    assert not report.passed
    assert abs(report.residual.value) > mpmath.mpf("0.5")


def test_continuity_with_real_poles(table, client):
    report = continuity_criterion(30, 25, table=table, client=client, digits=20)
    assert abs(report.residual.value) < mpmath.mpf("5e-3")
    assert report.config["n_zeros"] == 30
    assert report.details["partial_sums"] == 30


def test_continuity_needs_zeros(client):
    with pytest.raises(InsufficientZerosError):
        continuity_criterion(10, 25, table=None, client=client)


def test_selectors_cover_every_check():
    covered = {name for names in SELECTORS.values() for name in names}
    assert covered == set(IdentityName)


def test_run_without_table_is_degraded(config, client):
    reports = run_all(config, None, client, only=SELECTORS["continuity"] + SELECTORS["ev"])
    assert [report.name for report in reports] == [IdentityName.continuity_criterion, IdentityName.e_equals_v]
    assert all(report.degraded for report in reports)
    assert is_degraded(reports)


def test_run_density_checks(config, client):
    reports = run_all(config, None, client, only=SELECTORS["positivity"] + SELECTORS["charbound"])
    names = [report.name for report in reports]
    assert names == [IdentityName.p0_positivity, IdentityName.p0_boundedness, IdentityName.char_bound]
    assert all(report.error is None for report in reports)
    positivity = reports[0]
    assert positivity.passed
    assert positivity.reduced_coverage
    assert reports[2].passed


@pytest.mark.slow
def test_run_all_with_bundled_zeros(config, client, table):
    reports = run_all(config, table, client)
    assert len(reports) == len(IdentityName)
    assert not is_degraded(reports)
    by_name = {report.name: report for report in reports}
    assert by_name[IdentityName.laplace_rep].passed
    assert by_name[IdentityName.strip_w].passed


class _StripFamily:
    """Stands in for DensityFamily with a fixed Laplace residual per strip."""
    y_max = 4.5

    def __init__(self, residuals):
        self.residuals = residuals

    def strip_laplace(self, s, w, Y):
        with mpmath.workdps(30):
            expected = HPComplexValue(mpmath.mpc(1), mpmath.mpf(0), 20)
            value = HPComplexValue(mpmath.mpc(1) + mpmath.mpf(self.residuals[w]), mpmath.mpf(0), 20)
            return LaplaceResult(
                s=mpmath.mpc(s), w=w, Y=mpmath.mpf(Y), value=value, expected=expected,
                tail_left=mpmath.mpf("1e-3"), tail_right=mpmath.mpf("1e-3"), quadrature_err=mpmath.mpf(0),
            )


def _strip_report(config, client, residuals):
    context = CheckContext(config, None, client)
    context._family = _StripFamily(residuals)
    return StripWCheck(context).run()


def test_strip_w_consistent_scales_pass(config, client):
    report = _strip_report(config, client, {-1: "2e-8", 0: "1e-8", 1: "3e-8"})
    assert report.error is None
    assert report.passed


def test_strip_w_reflected_scale_mismatch_fails(config, client):
    """Every strip is within budget, but w=-1 is a thousand times off the w=0 residual."""
    report = _strip_report(config, client, {-1: "1e-5", 0: "1e-8", 1: "1e-8"})
    assert report.error is None
    assert abs(report.residual.value) <= report.budget.value
    assert not report.passed
    assert any("factor 10" in note for note in report.annotations())
    assert report.to_dict()["pass"] is False
