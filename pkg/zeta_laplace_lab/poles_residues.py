"""Residue data of f(s) = 1/(sin(πs/4)·2ξ(½+s)) and ingestion of zero tables.

Convention: c(a) := Res_{s=a} f(s). The closed forms follow from it:

    c(0)     = 2/(π·ξ(½))
    c_res(4k) = 2(−1)^k/(π·ξ(½+4k))
    c(iγ)    = 1/(2·sinh(πγ/4)·Ξ′(γ))
    b(iγ)    = 2·sin(iπγ/4)·F(½+iγ), so that c(iγ)·b(iγ)·ζ′(½+iγ) = 1
"""
import os
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import mpmath
import singer

from zeta_laplace_lab import hiprec_zeta
from zeta_laplace_lab.client import ZetaClient
from zeta_laplace_lab.hiprec_zeta import GUARD_DIGITS, CriticalZero, ZeroSource
from zeta_laplace_lab.hpvalue import (
    HPComplexValue,
    HPValue,
    as_complex,
    rounding_bound,
)
from zeta_laplace_lab.utils import (
    EmptyZeroTableError,
    InsufficientZerosError,
    MultipleZeroSuspectedError,
    NearPoleError,
    ZeroTableError,
    ZeroTableOrderError,
    ZeroTableParseError,
)

LOGGER = singer.get_logger()

BUNDLED_ZEROS = os.path.join(os.path.dirname(__file__), "data", "zeros_first30.txt")
FIRST_ZERO = "14.134725"
RESIDUE_OFFSETS = ("1e-6", "1e-8")
# |c(iγ)| ≈ 1/(ENVELOPE_CONSTANT·γ^{7/4}·|ζ′(½+iγ)|) from Stirling's formula for F(½+iγ)
ENVELOPE_CONSTANT = (mpmath.pi / 2) ** mpmath.mpf(0.25)
K_TRUNC = 25
N_ZEROS = 100000

_ORDINATE = re.compile(r"^\+?(\d+)(?:\.(\d+))?$")


@dataclass(frozen=True)
class ZeroTable:
    zeros: Tuple[CriticalZero, ...]
    source_path: Optional[str] = None
    digits_per_entry: Tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.zeros)

    def __iter__(self) -> Iterator[CriticalZero]:
        return iter(self.zeros)

    def first(self, n: int) -> List[CriticalZero]:
        """The first n zeros; InsufficientZerosError when the table is shorter."""
        if n > len(self.zeros):
            raise InsufficientZerosError(
                f"{n} zeros requested but the table {self.source_path or '(in memory)'} holds {len(self.zeros)}"
            )
        return list(self.zeros[:n])

    @classmethod
    def from_zeros(cls, zeros: Sequence[CriticalZero]) -> "ZeroTable":
        digits = tuple(zero.gamma.prec for zero in zeros)
        return cls(tuple(zeros), None, digits)


def _parse_ordinate(text: str, line_number: int) -> Tuple[HPValue, int]:
    match = _ORDINATE.match(text)
    if not match:
        raise ZeroTableParseError(f"not a positive decimal ordinate: {text!r}", line_number)
    integer, fraction = match.group(1), match.group(2) or ""
    digits = len((integer + fraction).lstrip("0")) or 1
    with mpmath.workdps(digits + GUARD_DIGITS):
        value = mpmath.mpf(text.lstrip("+"))
        if value <= 0:
            raise ZeroTableParseError(f"ordinate must be positive, got {text!r}", line_number)
        # published tables are rounded or truncated in the last place
        err = mpmath.mpf(10) ** (-len(fraction))
        return HPValue(value, err, digits), digits


def load_zero_table(path: str) -> ZeroTable:
    """Parse a zeros file: one ascending decimal ordinate per line, '#' comments ignored."""
    zeros: List[CriticalZero] = []
    digits: List[int] = []
    with open(path) as f:
        for line_number, line in enumerate(f, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            gamma, entry_digits = _parse_ordinate(text, line_number)
            if zeros and gamma.value <= zeros[-1].gamma.value:
                raise ZeroTableOrderError(
                    f"ordinate {text} does not exceed the previous one", line_number
                )
            zeros.append(CriticalZero(index=len(zeros) + 1, gamma=gamma, source=ZeroSource.table))
            digits.append(entry_digits)

    if not zeros:
        raise EmptyZeroTableError(f"zero table {path} has no entries")
    if abs(zeros[0].gamma.value - mpmath.mpf(FIRST_ZERO)) > mpmath.mpf("1e-6"):
        raise ZeroTableError(
            f"zero table {path} must start at the first zero {FIRST_ZERO}..., "
            f"found {mpmath.nstr(zeros[0].gamma.value, 12)}"
        )
    LOGGER.info(f"Loaded {len(zeros)} critical zeros from {path}")
    return ZeroTable(tuple(zeros), path, tuple(digits))


def write_zero_table(path: str, zeros: Sequence[CriticalZero], digits: int) -> None:
    """Write zeros in the same plain-text format load_zero_table reads."""
    with open(path, "w") as f:
        f.write(f"# {len(zeros)} critical zeros, {digits} significant digits\n")
        for zero in zeros:
            f.write(f"{mpmath.nstr(zero.gamma.value, digits, strip_zeros=False)}\n")


def bundled_zero_table() -> ZeroTable:
    return load_zero_table(BUNDLED_ZEROS)


def _pi(prec: int) -> HPValue:
    with mpmath.workdps(prec + GUARD_DIGITS):
        return HPValue(+mpmath.pi, rounding_bound(4, prec + GUARD_DIGITS), prec)


def _real_part(value) -> HPValue:
    """Real HP value from a result that is real up to rounding."""
    if isinstance(value, HPValue):
        return value
    return HPValue(mpmath.re(value.value), value.err + abs(mpmath.im(value.value)), value.prec)


def n_of_s(s, prec: int, client: Optional[ZetaClient] = None) -> HPComplexValue:
    """n(s) = sin(πs/4)·2ξ(½+s)."""
    client = client or ZetaClient()
    s = as_complex(s, prec)
    with mpmath.workdps(prec + GUARD_DIGITS):
        angle = mpmath.pi * s.value / 4
        sine = mpmath.sin(angle)
        sine_err = abs(mpmath.cos(angle)) * mpmath.pi / 4 * s.err + rounding_bound(abs(sine), prec + GUARD_DIGITS)
        sine = HPComplexValue(sine, sine_err, prec)
        shifted = HPComplexValue(s.value + mpmath.mpf(1) / 2, s.err, prec)
        return 2 * sine * client.xi(shifted, prec)


def f_of_s(s, prec: int, client: Optional[ZetaClient] = None) -> HPComplexValue:
    """f(s) = 1/n(s); NearPoleError within 10^−prec of 4ℤ or where n is not separated from 0."""
    s = as_complex(s, prec)
    with mpmath.workdps(prec + GUARD_DIGITS):
        nearest = 4 * mpmath.nint(mpmath.re(s.value) / 4)
        if abs(s.value - nearest) < mpmath.mpf(10) ** (-prec):
            raise NearPoleError(f"f has a pole at s={int(nearest)}", pole=int(nearest))
        denominator = n_of_s(s, prec, client)
        if abs(denominator.value) <= denominator.err:
            raise NearPoleError(
                f"f(s) at s={mpmath.nstr(s.value, 12)} is indistinguishable from a pole",
                pole=s.value,
            )
        return 1 / denominator


def c0(prec: int, client: Optional[ZetaClient] = None) -> HPValue:
    """c(0) = Res_{s=0} f = 2/(π·ξ(½))."""
    client = client or ZetaClient()
    with mpmath.workdps(prec + GUARD_DIGITS):
        xi_half = _real_part(client.xi(mpmath.mpf(1) / 2, prec))
        return 2 / (_pi(prec) * xi_half)


def c_res_4k(k: int, prec: int, client: Optional[ZetaClient] = None) -> HPValue:
    """c_res(4k) = 2(−1)^k/(π·ξ(½+4k)), k ≥ 1."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    client = client or ZetaClient()
    with mpmath.workdps(prec + GUARD_DIGITS):
        xi_value = _real_part(client.xi(mpmath.mpf(1) / 2 + 4 * k, prec))
        return (2 * (-1) ** k) / (_pi(prec) * xi_value)


def real_residue_sequence(
    K: int,
    digits: int,
    client: Optional[ZetaClient] = None,
    digits_for: Optional[Callable[[int], int]] = None,
) -> List[HPValue]:
    """c_res(4k) for k = 1..K, sharing one Γ recurrence across k.

    π^{−s/2}Γ(s/2) at s = ½+4k is carried from k to k+1 by the factor
    (2k+¼)(2k+1+¼)/π² at the full precision. ζ(½+4k) is evaluated at
    digits_for(k) digits (default: all of them) and taken as 1 once
    Σ_{n≥2} n^{−s} is below that precision.
    """
    client = client or ZetaClient()
    coefficients: List[HPValue] = []
    with mpmath.workdps(digits + GUARD_DIGITS):
        quarter = mpmath.mpf(1) / 4
        gamma_value = hiprec_zeta.gamma_fn(2 + quarter, digits)
        # Γ(9/4) is real; the imaginary part left by the complex evaluation is rounding
        completed = mpmath.re(gamma_value.value) * mpmath.power(mpmath.pi, -(2 + quarter))
        relative = (gamma_value.err + abs(mpmath.im(gamma_value.value))) / abs(mpmath.re(gamma_value.value))
        pi_square = mpmath.pi ** 2
        unit = mpmath.mpf(10) ** (-(digits + GUARD_DIGITS))
        for k in range(1, K + 1):
            s = 4 * k + mpmath.mpf(1) / 2
            if k > 1:
                a = 2 * k - 2 + quarter
                completed = completed * a * (a + 1) / pi_square
                relative += 4 * unit
            need = max(10, min(digits, digits_for(k) if digits_for else digits))
            zeta_tail = mpmath.power(2, -s) * (1 + 2 / (s - 1))
            if zeta_tail < mpmath.mpf(10) ** (-(need + 2)):
                zeta_value, zeta_err = mpmath.mpf(1), zeta_tail
            else:
                zeta_hp = client.zeta(s, need)
                zeta_value = mpmath.re(zeta_hp.value)
                zeta_err = zeta_hp.err + abs(mpmath.im(zeta_hp.value))
            xi_value = s * (s - 1) / 2 * completed * zeta_value
            xi_relative = relative + zeta_err / zeta_value
            value = 2 * (-1) ** k / (mpmath.pi * xi_value)
            coefficients.append(HPValue(value, abs(value) * (2 * xi_relative + unit), need))
    return coefficients


def c_gamma(zero: CriticalZero, prec: int, client: Optional[ZetaClient] = None) -> HPValue:
    """c(iγ) = 1/(2·sinh(πγ/4)·Ξ′(γ)), real for a simple zero on the critical line."""
    client = client or ZetaClient()
    gamma = zero.gamma
    with mpmath.workdps(prec + GUARD_DIGITS):
        derivative = client.Xi_prime(gamma.value, prec)
        if abs(derivative.value) <= derivative.err:
            raise MultipleZeroSuspectedError(
                f"Xi'({mpmath.nstr(gamma.value, 15)}) = {derivative} is not separated from zero; "
                f"zero #{zero.index} may be multiple"
            )
        # Ξ near γ behaves like e^{−πt/4} times an oscillation at the local zero density,
        # so Ξ″/Ξ′ is of order π/4 + log(γ/2π).
        sensitivity = mpmath.pi / 4 + abs(mpmath.log(gamma.value / (2 * mpmath.pi)))
        derivative = derivative.with_err(derivative.err + abs(derivative.value) * sensitivity * gamma.err)
        angle = mpmath.pi * gamma.value / 4
        sinh = mpmath.sinh(angle)
        sinh_err = mpmath.cosh(angle) * mpmath.pi / 4 * gamma.err + rounding_bound(sinh, prec + GUARD_DIGITS)
        return 1 / (2 * HPValue(sinh, sinh_err, prec) * derivative)


def b_factor(zero: CriticalZero, prec: int, client: Optional[ZetaClient] = None) -> HPComplexValue:
    """b(iγ) = 2·sin(iπγ/4)·F(½+iγ) = 2i·sinh(πγ/4)·F(½+iγ)."""
    gamma = zero.gamma
    with mpmath.workdps(prec + GUARD_DIGITS):
        s = HPComplexValue(mpmath.mpc(mpmath.mpf(1) / 2, gamma.value), gamma.err, prec)
        completed = hiprec_zeta.completed_factor(s, prec)
        angle = mpmath.pi * gamma.value / 4
        sine = mpmath.mpc(0, mpmath.sinh(angle))
        sine_err = mpmath.cosh(angle) * mpmath.pi / 4 * gamma.err + rounding_bound(abs(sine), prec + GUARD_DIGITS)
        return 2 * HPComplexValue(sine, sine_err, prec) * completed


def residue_limit(function: Callable, a, prec: int, offsets: Sequence = RESIDUE_OFFSETS) -> HPComplexValue:
    """Numerical residue lim_{ε→0} ε·function(a+ε), Richardson-combined over two offsets.

    The remaining O(h₁h₂) term is bounded assuming the nearest other
    singularity is at distance at least 1. The error in the pole location a
    enters through a.err.
    """
    a = as_complex(a, prec)
    with mpmath.workdps(prec + GUARD_DIGITS):
        h1, h2 = (mpmath.mpf(offset) for offset in offsets)
        g1 = as_complex(function(a.value + h1), prec)
        g2 = as_complex(function(a.value + h2), prec)
        g1_value, g2_value = h1 * g1.value, h2 * g2.value
        value = (h1 * g2_value - h2 * g1_value) / (h1 - h2)
        slope = abs(g1_value - g2_value) / (h1 - h2)
        err = (h1 * h2 * g2.err + h2 * h1 * g1.err) / (h1 - h2) + slope * h1 * h2
        # a pole off by δ shifts the combination by about value·δ·(h₁+h₂)/(h₁h₂)
        err += 2 * abs(value) * a.err * (h1 + h2) / (h1 * h2)
        return HPComplexValue(value, err, prec)


def c_gamma_envelope(gamma, zeta_prime_modulus) -> mpmath.mpf:
    """Stirling-size envelope 1/(1.1196·γ^{7/4}·|ζ′(½+iγ)|) of |c(iγ)|."""
    gamma = mpmath.mpf(gamma)
    return 1 / (ENVELOPE_CONSTANT * gamma ** (mpmath.mpf(7) / 4) * mpmath.mpf(zeta_prime_modulus))


def c_gamma_tail(start, zeta_prime_floor) -> mpmath.mpf:
    """Bound on Σ_{γ>start} |c(iγ)| from the envelope with zeros counted at density ln(γ/2π)/2π.

    ∫_G^∞ γ^{−7/4}·ln(γ/2π) dγ = (4/3)·G^{−3/4}·(ln(G/2π) + 4/3).
    """
    with mpmath.workdps(20):
        start = mpmath.mpf(start)
        two_pi = 2 * mpmath.pi
        integral = mpmath.mpf(4) / 3 * start ** (-mpmath.mpf(3) / 4) * (mpmath.log(start / two_pi) + mpmath.mpf(4) / 3)
        return integral / (two_pi * ENVELOPE_CONSTANT * mpmath.mpf(zeta_prime_floor))


@dataclass(frozen=True)
class SpectralResidue:
    zero: CriticalZero
    c_gamma: HPValue
    b: Optional[HPComplexValue] = None

    def to_dict(self) -> dict:
        document = {"zero": self.zero.to_dict(), "c_gamma": self.c_gamma.to_dict()}
        if self.b is not None:
            document["b"] = self.b.to_dict()
        return document


@dataclass
class PoleSet:
    c0: HPValue
    c4: List[Tuple[int, HPValue]]
    spectral: List[SpectralResidue]
    K_trunc: int
    N_zeros: int
    digits: int
    client: ZetaClient = field(default_factory=ZetaClient, repr=False)
    _memo: Dict[str, object] = field(default_factory=dict, repr=False)

    def real_coefficients(self, K: int, digits: int, digits_for: Optional[Callable[[int], int]] = None) -> List[HPValue]:
        """c_res(4k) for k = 1..K, each to at least the precision requested for it.

        Values are memoised; a request is served from the memo when every
        entry already carries enough digits, otherwise the sequence is
        recomputed at the larger of the old and new precisions.
        """
        def need(k: int) -> int:
            return max(10, min(digits, digits_for(k) if digits_for else digits))

        stored: List[HPValue] = self._memo.get("coefficients", [])
        if len(stored) >= K and all(stored[k - 1].prec >= need(k) for k in range(1, K + 1)):
            return stored[:K]

        chain_digits = max(digits, self._memo.get("digits", 0))

        def merged(k: int) -> int:
            previous = stored[k - 1].prec if k <= len(stored) else 0
            return max(need(k), previous) if k <= K else previous

        LOGGER.debug(f"Computing {max(K, len(stored))} real residues with a {chain_digits}-digit recurrence")
        stored = real_residue_sequence(max(K, len(stored)), chain_digits, self.client, merged)
        self._memo["digits"] = chain_digits
        self._memo["coefficients"] = stored
        return stored[:K]

    def c0_at(self, digits: int) -> HPValue:
        if digits <= self.c0.prec:
            return self.c0
        return c0(digits, self.client)

    def spectral_pairs(self) -> List[Tuple[mpmath.mpf, mpmath.mpf]]:
        return [(residue.zero.gamma.value, residue.c_gamma.value) for residue in self.spectral]

    def to_dict(self) -> dict:
        return {
            "c0": self.c0.to_dict(),
            "c4": [{"k": k, "c_res": value.to_dict()} for k, value in self.c4],
            "spectral": [residue.to_dict() for residue in self.spectral],
            "K_trunc": self.K_trunc,
            "N_zeros": self.N_zeros,
            "digits": self.digits,
        }


def build_pole_set(
    prec: int,
    K_trunc: int = K_TRUNC,
    table: Optional[ZeroTable] = None,
    N_zeros: int = 0,
    client: Optional[ZetaClient] = None,
    with_b: bool = False,
) -> PoleSet:
    """Assemble c(0), c_res(4k) for k ≤ K_trunc and c(iγ) for the first N_zeros table zeros."""
    client = client or ZetaClient()
    LOGGER.info(f"Computing residues at {prec} digits: K={K_trunc}, N={N_zeros}")
    pole_set = PoleSet(
        c0=c0(prec, client),
        c4=[],
        spectral=[],
        K_trunc=K_trunc,
        N_zeros=N_zeros,
        digits=prec,
        client=client,
    )
    pole_set.c4 = list(enumerate(pole_set.real_coefficients(K_trunc, prec), start=1))

    if N_zeros:
        if table is None:
            raise InsufficientZerosError(f"{N_zeros} zeros requested but no zero table is loaded")
        for zero in table.first(N_zeros):
            # the residue needs only as many digits as the ordinate carries
            digits = max(10, min(prec, zero.gamma.prec + 2))
            residue = c_gamma(zero, digits, client)
            b = b_factor(zero, digits, client) if with_b else None
            pole_set.spectral.append(SpectralResidue(zero, residue, b))
            if zero.index % 1000 == 0:
                LOGGER.info(f"Computed spectral residues for {zero.index} of {N_zeros} zeros")
    LOGGER.info(f"Done computing residues ({client.evaluations} xi/zeta evaluations)")
    return pole_set
