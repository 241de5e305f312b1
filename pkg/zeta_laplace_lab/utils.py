import json
from typing import List, Optional

import mpmath
from target_hotglue.common import HGJSONEncoder
from typing_extensions import TypedDict


class ZetaLabError(Exception):
    pass

class InvalidConfigurationError(ZetaLabError):
    pass

class InvalidInputError(ZetaLabError):
    pass

class PoleError(InvalidInputError):
    def __init__(self, message: str, pole=None) -> None:
        super().__init__(message)
        self.pole = pole

class NearPoleError(PoleError):
    pass

class NoSignChangeError(InvalidInputError):
    pass

class StripViolationError(InvalidInputError):
    pass

class BranchCutError(InvalidInputError):
    pass

class HalfPlaneError(InvalidInputError):
    pass

class ZeroTableError(InvalidInputError):
    pass

class ZeroTableParseError(ZeroTableError):
    def __init__(self, message: str, line_number: int) -> None:
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number

class ZeroTableOrderError(ZeroTableParseError):
    pass

class EmptyZeroTableError(ZeroTableError):
    pass

class PrecisionCeilingError(ZetaLabError):
    pass

class PrecisionUnachievableError(PrecisionCeilingError):
    pass

class MultipleZeroSuspectedError(ZetaLabError):
    pass

class CoefficientExhaustedError(ZetaLabError):
    pass

class TailBudgetError(ZetaLabError):
    def __init__(self, message: str, achievable=None) -> None:
        super().__init__(message)
        self.achievable = achievable

class InsufficientZerosError(ZetaLabError):
    pass

class IllConditionedError(ZetaLabError):
    def __init__(self, message: str, condition=None) -> None:
        super().__init__(message)
        self.condition = condition

class ModelOrderError(ZetaLabError):
    pass

class NoiseFloorError(ZetaLabError):
    def __init__(self, message: str, achieved_n: int = 0, report=None) -> None:
        super().__init__(message)
        self.achieved_n = achieved_n
        self.report = report


def describe_error(error: BaseException) -> str:
    """One-line description of an exception, as stored in reports."""
    message = str(error)
    if not message:
        return error.__class__.__name__
    return f"{error.__class__.__name__}: {message}"


def to_decimal_string(value, digits: int) -> str:
    """Decimal string of an mpmath number at the stated digits, trailing zeros stripped."""
    if isinstance(value, mpmath.mpc) or isinstance(value, complex):
        value = mpmath.mpc(value)
        if value.imag == 0:
            return to_decimal_string(value.real, digits)
        return mpmath.nstr(value, digits, strip_zeros=True)
    return mpmath.nstr(mpmath.mpf(value), digits, strip_zeros=True)


class ReportEncoder(HGJSONEncoder):
    """JSON encoder for reports holding arbitrary-precision values."""
    digits = 30

    def default(self, obj):
        if isinstance(obj, (mpmath.mpf, mpmath.mpc)):
            return to_decimal_string(obj, self.digits)
        to_dict = getattr(obj, "to_dict", None)
        if callable(to_dict):
            return to_dict()
        return super().default(obj)


def dumps_report(document) -> str:
    return json.dumps(document, cls=ReportEncoder, indent=2, sort_keys=True)


class LabConfig(TypedDict, total=False):
    digits: int
    k_trunc: int
    n_zeros: int
    y_max: float
    precision_ceiling: int
    quad_Y: float
    quad_digits: int
    zeros_path: Optional[str]
    cache_dir: Optional[str]
    cache_enabled: bool
    output_format: str
    zeta_prime_floor: float
    averaging_depth: int
    em_height_limit: float
    term_ceiling: int
    eqstar_grid: List[float]
    ev_grid: List[float]
    charbound_x: List[float]
    charbound_t_max: float
    charbound_t_step: float
    laplace_points: int
    positivity_points: int
    positivity_v_max_y: float


class CsvRow(TypedDict, total=False):
    input: str
    value: str
    err: str
    bound: str


DEFAULT_CONFIG: LabConfig = {
    "digits": 30,
    "k_trunc": 25,
    "n_zeros": 100000,
    "y_max": 4.5,
    "precision_ceiling": 20000,
    "quad_Y": 1000.0,
    "quad_digits": 20,
    "zeros_path": None,
    "cache_dir": None,
    "cache_enabled": True,
    "output_format": "csv",
    "zeta_prime_floor": 0.1,
    "averaging_depth": 20,
    "em_height_limit": 1000.0,
    "term_ceiling": 200000,
    "eqstar_grid": [-0.5, -1.0, -2.0],
    "ev_grid": [0.3, 0.4333, 0.5667, 0.7, 0.8333, 0.9667, 1.1, 1.2333, 1.3667, 1.5],
    "charbound_x": [1.0, 2.0, 3.0, 5.0],
    "charbound_t_max": 20.0,
    "charbound_t_step": 0.5,
    "laplace_points": 20,
    "positivity_points": 200,
    "positivity_v_max_y": 9.0,
}
