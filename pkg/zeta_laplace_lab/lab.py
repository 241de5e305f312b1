"""zeta-laplace-lab command line: compute, check, recover, zeros and cache."""
import csv
import datetime
import io
import json
import os
import sys
from typing import List, Optional, Sequence

import click
import jsonschema
import mpmath
import singer
from singer_sdk import typing as th

from zeta_laplace_lab import poles_residues
from zeta_laplace_lab.cache import CACHE_DIR_ENV, ValueCache
from zeta_laplace_lab.client import ZetaClient
from zeta_laplace_lab.hiprec_zeta import scan_zeros
from zeta_laplace_lab.hpvalue import HPBase
from zeta_laplace_lab.laplace_density import DensityFamily, precision_plan
from zeta_laplace_lab.poles_residues import ZeroTable, bundled_zero_table, load_zero_table, write_zero_table
from zeta_laplace_lab.spectral_recovery import (
    PEEL_GRID,
    PRONY_MODES,
    RecoveryReport,
    SpectralSeries,
    lambda_samples,
    peel_extract,
    prony_report,
    v_spectral,
)
from zeta_laplace_lab.utils import (
    DEFAULT_CONFIG,
    CsvRow,
    InvalidConfigurationError,
    InvalidInputError,
    LabConfig,
    NoiseFloorError,
    PrecisionCeilingError,
    ZetaLabError,
    describe_error,
    dumps_report,
    to_decimal_string,
)
from zeta_laplace_lab.validation import SELECTORS, IdentityReport, run_all
from zeta_laplace_lab.validation.runner import is_degraded

LOGGER = singer.get_logger()

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_PRECISION = 3
EXIT_DEGRADED = 4
EXIT_NOISE_FLOOR = 5

REPORT_VERSION = 1
BUNDLED = "bundled"
CSV_COLUMNS = ["input", "value", "err", "bound"]

config_jsonschema = th.PropertiesList(
    th.Property("digits", th.IntegerType),
    th.Property("k_trunc", th.IntegerType),
    th.Property("n_zeros", th.IntegerType),
    th.Property("y_max", th.NumberType),
    th.Property("precision_ceiling", th.IntegerType),
    th.Property("quad_Y", th.NumberType),
    th.Property("quad_digits", th.IntegerType),
    th.Property("zeros_path", th.StringType),
    th.Property("cache_dir", th.StringType),
    th.Property("cache_enabled", th.BooleanType),
    th.Property("output_format", th.StringType),
    th.Property("zeta_prime_floor", th.NumberType),
    th.Property("averaging_depth", th.IntegerType),
    th.Property("em_height_limit", th.NumberType),
    th.Property("term_ceiling", th.IntegerType),
    th.Property("eqstar_grid", th.ArrayType(th.NumberType)),
    th.Property("ev_grid", th.ArrayType(th.NumberType)),
    th.Property("charbound_x", th.ArrayType(th.NumberType)),
    th.Property("charbound_t_max", th.NumberType),
    th.Property("charbound_t_step", th.NumberType),
    th.Property("laplace_points", th.IntegerType),
    th.Property("positivity_points", th.IntegerType),
    th.Property("positivity_v_max_y", th.NumberType),
).to_dict()

_HP_VALUE = th.ObjectType(
    th.Property("value", th.StringType, required=True),
    th.Property("err", th.StringType, required=True),
)

report_jsonschema = th.PropertiesList(
    th.Property("version", th.IntegerType, required=True),
    th.Property("generated_at", th.StringType),
    th.Property("config", th.CustomType({"type": "object"}), required=True),
    th.Property(
        "reports",
        th.ArrayType(
            th.ObjectType(
                th.Property("name", th.StringType, required=True),
                th.Property("residual", _HP_VALUE, required=True),
                th.Property("budget", _HP_VALUE, required=True),
                th.Property("pass", th.BooleanType, required=True),
                th.Property("config", th.CustomType({"type": "object"}), required=True),
                th.Property("notes", th.ArrayType(th.StringType)),
                th.Property("error", th.StringType),
                th.Property("degraded", th.BooleanType),
                th.Property(
                    "timestamps",
                    th.ObjectType(
                        th.Property("started", th.StringType),
                        th.Property("finished", th.StringType),
                    ),
                ),
            )
        ),
    ),
    th.Property("recovery", th.CustomType({"type": "object"})),
).to_dict()

_POSITIVE = ("digits", "k_trunc", "y_max", "precision_ceiling", "quad_Y", "quad_digits",
             "zeta_prime_floor", "em_height_limit", "term_ceiling", "charbound_t_max",
             "charbound_t_step", "laplace_points", "positivity_points", "positivity_v_max_y")


def validate_config(config: LabConfig) -> LabConfig:
    """Schema, positivity and precision-ceiling checks on a merged config."""
    try:
        jsonschema.validate(dict(config), config_jsonschema)
    except jsonschema.ValidationError as error:
        raise InvalidConfigurationError(f"invalid config: {error.message}")
    for name in _POSITIVE:
        if name in config and not config[name] > 0:
            raise InvalidConfigurationError(f"{name} must be positive, got {config[name]}")
    for name in ("n_zeros", "averaging_depth"):
        if name in config and config[name] < 0:
            raise InvalidConfigurationError(f"{name} must not be negative, got {config[name]}")
    if config.get("output_format", "csv") not in ("csv", "json"):
        raise InvalidConfigurationError(f"output_format must be csv or json, got {config['output_format']}")
    with mpmath.workdps(20):
        reach = mpmath.pi * mpmath.exp(2 * mpmath.mpf(config.get("y_max", DEFAULT_CONFIG["y_max"])))
    needed = precision_plan(reach) + config.get("quad_digits", DEFAULT_CONFIG["quad_digits"])
    ceiling = config.get("precision_ceiling", DEFAULT_CONFIG["precision_ceiling"])
    if needed > ceiling:
        raise InvalidConfigurationError(
            f"y_max = {config.get('y_max')} needs {needed} working digits, above the ceiling {ceiling}"
        )
    return config


def load_config(path: Optional[str] = None, overrides: Optional[dict] = None) -> LabConfig:
    """Defaults, then the JSON config file, then ZETA_LAB_CACHE_DIR, then explicit overrides."""
    config: LabConfig = dict(DEFAULT_CONFIG)
    if path:
        try:
            with open(path) as f:
                config.update(json.load(f))
        except (OSError, ValueError) as error:
            raise InvalidConfigurationError(f"cannot read config {path}: {error}")
    if os.environ.get(CACHE_DIR_ENV):
        config["cache_dir"] = os.environ[CACHE_DIR_ENV]
    config.update({key: value for key, value in (overrides or {}).items() if value is not None})
    return validate_config(config)


def dump_config(config: LabConfig) -> str:
    return json.dumps(dict(config), sort_keys=True, indent=2)


def load_table(path: Optional[str]) -> Optional[ZeroTable]:
    if not path:
        return None
    if path == BUNDLED:
        return bundled_zero_table()
    return load_zero_table(path)


def write_rows(rows: List[CsvRow], output_format: str, out: Optional[str]) -> None:
    if output_format == "json":
        text = dumps_report(rows) + "\n"
    else:
        buffer = io.StringIO()
        columns = CSV_COLUMNS if any("bound" in row for row in rows) else CSV_COLUMNS[:3]
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buffer.getvalue()
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)


def report_document(config: LabConfig, reports: Sequence[IdentityReport] = (),
                    recovery: Optional[RecoveryReport] = None, timestamps: bool = True) -> dict:
    documents = [report.to_dict() for report in reports]
    if not timestamps:
        for document in documents:
            document.pop("timestamps", None)
    document = {"version": REPORT_VERSION, "config": dict(config), "reports": documents}
    if recovery is not None:
        document["recovery"] = recovery.to_dict()
    if timestamps:
        document["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    # the encoder turns HP values into strings first so the schema sees plain JSON
    document = json.loads(dumps_report(document))
    jsonschema.validate(document, report_jsonschema)
    return document


def _write_report(document: dict, path: Optional[str]) -> None:
    if path:
        with open(path, "w") as f:
            f.write(json.dumps(document, indent=2, sort_keys=True) + "\n")


def _parse_values(values: Sequence[str]) -> List:
    parsed = []
    for value in values:
        for item in value.split(","):
            item = item.strip()
            if not item:
                continue
            try:
                parsed.append(mpmath.mpmathify(item.replace("i", "j")))
            except (ValueError, TypeError):
                raise InvalidInputError(f"cannot parse {item!r} as a number")
    return parsed


class LabContext:
    def __init__(self, config_path: Optional[str]) -> None:
        self.config_path = config_path

    def config(self, **overrides) -> LabConfig:
        return load_config(self.config_path, overrides)


def _exit_for(error: BaseException) -> int:
    if isinstance(error, PrecisionCeilingError):
        return EXIT_PRECISION
    if isinstance(error, NoiseFloorError):
        return EXIT_NOISE_FLOOR
    return EXIT_CONFIG


def _fail(error: ZetaLabError) -> None:
    click.echo(f"error: {describe_error(error)}", err=True)
    sys.exit(_exit_for(error))


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None, help="JSON config file.")
@click.pass_context
def cli(ctx, config_path):
    """Numerical lab for the zeta-side and density-side identities of f(s) = 1/(sin(πs/4)·2ξ(½+s))."""
    ctx.obj = LabContext(config_path)


@cli.command()
@click.argument("quantity", type=click.Choice(["density", "lambda", "f", "p4w"]))
@click.option("--at", "at", multiple=True, required=True, help="Inputs, repeated or comma separated.")
@click.option("--digits", type=int, default=None)
@click.option("--w", "w", type=int, default=0, help="Strip index for density and p4w.")
@click.option("--out", "output_format", type=click.Choice(["csv", "json"]), default=None)
@click.option("--output", type=click.Path(), default=None, help="Write rows to a file instead of stdout.")
@click.pass_obj
def compute(lab: LabContext, quantity, at, digits, w, output_format, output):
    """Evaluate density, lambda, f or p4w at the given inputs."""
    try:
        config = lab.config(digits=digits, output_format=output_format)
        target = config["digits"]
        inputs = _parse_values(at)
        client = ZetaClient.from_config(config)
        family = DensityFamily.build(config, None, client) if quantity != "f" else None
        rows: List[CsvRow] = []
        for value in inputs:
            if quantity == "density":
                result: HPBase = family.density(value, w, target) if w else family.g0(value, target)
            elif quantity == "lambda":
                result = family.lambda_fn(value, target)
            elif quantity == "p4w":
                result = family.p4w(value, w, target)
            else:
                result = poles_residues.f_of_s(value, target, client)
            rows.append({
                "input": to_decimal_string(value, 20),
                "value": to_decimal_string(result.value, target),
                "err": mpmath.nstr(result.err, 6),
            })
        write_rows(rows, config["output_format"], output)
        LOGGER.info(f"Evaluation statistics: {client.stats()}")
    except ZetaLabError as error:
        _fail(error)


@cli.command()
@click.argument("which", type=click.Choice(["all"] + sorted(SELECTORS)), default="all")
@click.option("--zeros", "zeros_path", default=None, help=f"Zero table file, or '{BUNDLED}'.")
@click.option("--report", "report_path", type=click.Path(), default=None)
@click.option("--digits", type=int, default=None)
@click.option("--y-max", "y_max", type=float, default=None)
@click.option("--no-timestamps", is_flag=True, help="Omit timestamps for byte-identical reports.")
@click.option("--no-cache", is_flag=True)
@click.pass_obj
def check(lab: LabContext, which, zeros_path, report_path, digits, y_max, no_timestamps, no_cache):
    """Run identity checks; exit 0 only when all pass, 4 when degraded by a missing zero table."""
    try:
        config = lab.config(digits=digits, y_max=y_max, zeros_path=zeros_path,
                            cache_enabled=False if no_cache else None)
        table = load_table(config.get("zeros_path"))
    except ZetaLabError as error:
        _fail(error)
    only = None if which == "all" else SELECTORS[which]
    reports = run_all(config, table, only=only)
    document = report_document(config, reports, timestamps=not no_timestamps)
    _write_report(document, report_path)

    for report in reports:
        verdict = "pass" if report.passed else ("degraded" if report.degraded else "FAIL")
        line = (f"{report.name.value:24s} {verdict:9s} residual={mpmath.nstr(abs(report.residual.value), 3)} "
                f"budget={mpmath.nstr(report.budget.value, 3)}")
        if "min_margin" in report.details:
            line += f" min_margin={mpmath.nstr(report.details['min_margin'], 6)}"
        click.echo(line)
        for note in report.annotations():
            click.echo(f"    {note}")

    if all(report.passed for report in reports):
        sys.exit(EXIT_PASS)
    if is_degraded(reports):
        sys.exit(EXIT_DEGRADED)
    sys.exit(EXIT_FAIL)


def _compare_with_table(report: RecoveryReport, table: Optional[ZeroTable]) -> None:
    if table is None:
        return
    for zero in report.recovered[: len(table)]:
        reference = table.zeros[zero.n - 1].gamma.value
        report.residuals[f"gamma_{zero.n}_vs_table"] = abs(zero.gamma.value - reference)


@cli.command()
@click.argument("method", type=click.Choice(["prony", "peel"]))
@click.option("--mode", type=click.Choice(sorted(PRONY_MODES)), default="quick")
@click.option("--zeros", "zeros_path", default=None, help=f"Zero table file, or '{BUNDLED}'.")
@click.option("--report", "report_path", type=click.Path(), default=None)
@click.option("--n", "n_target", type=int, default=3, help="Zeros to peel.")
@click.option("--terms", "n_terms", type=int, default=50, help="Table zeros in the synthetic v.")
@click.option("--digits", type=int, default=None)
@click.option("--no-timestamps", is_flag=True)
@click.pass_obj
def recover(lab: LabContext, method, mode, zeros_path, report_path, n_target, n_terms, digits, no_timestamps):
    """Recover zero ordinates and ζ′(½+iγ): prony from λ samples only, peel from a synthetic v."""
    try:
        config = lab.config(zeros_path=zeros_path)
        table = load_table(config.get("zeros_path"))
        client = ZetaClient.from_config(config)
        if method == "prony":
            settings = PRONY_MODES[mode]
            prec = digits or settings["digits"]
            family_config = dict(config, digits=prec, y_max=max(config["y_max"], settings["y_top"]))
            family = DensityFamily.build(family_config, None, client)
            samples = lambda_samples(family, settings["delta"], settings["y_top"], prec)
            report = prony_report(samples, settings["order"], prec, client, dict(settings, mode=mode))
        else:
            if table is None:
                raise InvalidConfigurationError("peel runs on a synthetic v and needs --zeros")
            prec = digits or 60
            series = SpectralSeries.synthetic(table, min(n_terms, len(table)), prec, client)
            report = peel_extract(
                lambda x: v_spectral(x, series, prec=prec),
                n_target,
                PEEL_GRID,
                prec,
                client,
                config={"terms": len(series)},
            )
    except NoiseFloorError as error:
        partial = error.report
        if partial is not None:
            _compare_with_table(partial, table)
            _write_report(report_document(config, recovery=partial, timestamps=not no_timestamps), report_path)
        click.echo(f"noise floor after {error.achieved_n} zeros: {error}", err=True)
        sys.exit(EXIT_NOISE_FLOOR)
    except ZetaLabError as error:
        _fail(error)

    _compare_with_table(report, table)
    _write_report(report_document(config, recovery=report, timestamps=not no_timestamps), report_path)
    for zero in report.recovered[:10]:
        line = f"gamma_{zero.n} = {zero.gamma}"
        if zero.zeta_prime is not None:
            line += f"   zeta'(1/2 + i gamma_{zero.n}) = {zero.zeta_prime}"
        click.echo(line)
    if len(report.recovered) > 10:
        click.echo(f"... {len(report.recovered) - 10} more in the report")
    sys.exit(EXIT_PASS)


@cli.command()
@click.option("--from", "t_low", type=float, default=10.0)
@click.option("--to", "t_high", type=float, required=True)
@click.option("--step", type=float, default=0.1)
@click.option("--digits", type=int, default=30)
@click.option("--output", type=click.Path(), required=True)
@click.pass_obj
def zeros(lab: LabContext, t_low, t_high, step, digits, output):
    """Locate critical zeros by sign changes of Ξ and write them as a zero table."""
    try:
        config = lab.config()
        client = ZetaClient.from_config(config)
        found = scan_zeros(t_low, t_high, step, digits, **client.options)
        if not found:
            raise InvalidInputError(f"no sign change of Xi on [{t_low}, {t_high}] at step {step}")
        write_zero_table(output, found, digits)
    except ZetaLabError as error:
        _fail(error)
    click.echo(f"wrote {len(found)} zeros to {output}")


@cli.command()
@click.argument("action", type=click.Choice(["stats", "clear"]))
@click.pass_obj
def cache(lab: LabContext, action):
    """Inspect or empty the value cache."""
    try:
        config = lab.config()
    except ZetaLabError as error:
        _fail(error)
    store = ValueCache.from_environment(config.get("cache_dir"))
    if store is None:
        click.echo(f"no cache directory configured (set cache_dir or {CACHE_DIR_ENV})")
        sys.exit(EXIT_CONFIG)
    if action == "clear":
        click.echo(f"removed {store.clear()} entries from {store.cache_dir}")
        return
    entries = sum(len([name for name in files if name.endswith(".json")]) for _, _, files in os.walk(store.cache_dir))
    click.echo(f"{entries} entries in {store.cache_dir}")


if __name__ == "__main__":
    cli()
