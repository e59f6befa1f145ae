"""Gamma and beta functions, and closed forms of both sides of the fundamental identity.

These values are the oracle every quadrature in the package is checked
against, so they are computed from a self-contained Lanczos approximation
rather than from the integrals they certify.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from lamespiral.errors import DomainError, NumericalError

# Lanczos approximation, g = 607/128, 15 terms.
_LANCZOS_SHIFT = 671.0 / 128.0  # g + 1/2
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COEFFS = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_SQRT_2PI = 2.5066282746310005

GAMMA_MAX_ARG = 170.0
_BETA_LOG_THRESHOLD = 30.0


class GammaOverflowError(NumericalError, OverflowError):
    """Gamma requested beyond the largest argument representable in double precision."""


def _lanczos_series(x: float) -> float:
    ser = _LANCZOS_C0
    y = x
    for c in _LANCZOS_COEFFS:
        y += 1.0
        ser += c / y
    return ser


def _shifted(x: float) -> tuple[float, float]:
    """``t = fl(x + g + 1/2)`` and the rounding error ``t - (x + g + 1/2)``."""
    t = x + _LANCZOS_SHIFT
    bb = t - x
    err = (t - bb - x) + (bb - _LANCZOS_SHIFT)
    return t, err


def _check_positive(x: float, what: str = "x") -> float:
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"{what} must be positive, got {x!r}")
    return x


def gamma(x: float) -> float:
    """Gamma function for real ``0 < x <= 170``.

    Integer arguments return the correctly rounded factorial. Elsewhere the
    Lanczos sum is combined with a split power so that ``t**(x+1/2)`` does not
    overflow before ``exp(-t)`` brings it back into range.

    Raises
    ------
    DomainError
        For ``x <= 0``.
    GammaOverflowError
        For ``x > 170``.
    """
    x = _check_positive(x)
    if x > GAMMA_MAX_ARG:
        raise GammaOverflowError(f"gamma({x!r}) overflows double precision")
    if x == math.floor(x):
        return float(math.factorial(int(x) - 1))
    t, err = _shifted(x)
    # x + 1/2 is not exact near 128; keep the two exponent pieces apart
    half_pow = t ** (0.5 * x) * t**0.25
    # first-order repair for the rounding of t, which otherwise grows like x*eps
    repair = math.exp(err - (x + 0.5) * err / t)
    return half_pow * (half_pow * math.exp(-t)) * (_SQRT_2PI * _lanczos_series(x) / x) * repair


def lgamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    x = _check_positive(x)
    t, err = _shifted(x)
    log_t = math.log(t)
    return x * log_t + 0.5 * log_t - t + err - (x + 0.5) * err / t + math.log(
        _SQRT_2PI * _lanczos_series(x) / x
    )


def beta(x: float, y: float) -> float:
    """Euler beta ``B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y)``."""
    x = _check_positive(x, "x")
    y = _check_positive(y, "y")
    if x + y > _BETA_LOG_THRESHOLD:
        return math.exp(lgamma(x) + lgamma(y) - lgamma(x + y))
    return gamma(x) * gamma(y) / gamma(x + y)


@dataclass(frozen=True)
class ClosedFormPair:
    """Exact values of both sides of the fundamental identity for one exponent.

    ``spiral_quarter_length`` is the integral of ``1/sqrt(1 - r**(2n))`` over
    ``[0, 1]`` and ``lame_quadrant_area`` that of ``(1 - x**(2n))**(1/(2n))``.
    """

    n: float
    spiral_quarter_length: float
    lame_quadrant_area: float

    @property
    def ratio(self) -> float:
        return self.spiral_quarter_length / self.lame_quadrant_area


def closed_forms(n: float) -> ClosedFormPair:
    n = _check_positive(n, "n")
    g = gamma(1.0 / (2.0 * n))
    area = g * g / (4.0 * n * gamma(1.0 / n))
    return ClosedFormPair(n, 2.0 ** (1.0 / n) * area, area)


def spiral_quarter_length_forms(n: float) -> tuple[float, float, float]:
    """Three equivalent gamma expressions for the spiral quarter length.

    Returns ``(B(1/2n, 1/2)/(2n), sqrt(pi) G(1/2n) / (2n G(1/2n + 1/2)),
    G(1/2n)**2 / (2**(2 - 1/n) n G(1/n)))``; they agree by the duplication
    formula.
    """
    n = _check_positive(n, "n")
    q = 1.0 / (2.0 * n)
    g = gamma(q)
    return (
        beta(q, 0.5) / (2.0 * n),
        math.sqrt(math.pi) * g / (2.0 * n * gamma(q + 0.5)),
        g * g / (2.0 ** (2.0 - 1.0 / n) * n * gamma(1.0 / n)),
    )


def lame_quadrant_area_forms(n: float) -> tuple[float, float]:
    """``(B(1/2n, 1 + 1/2n)/(2n), G(1/2n)**2 / (4n G(1/n)))``."""
    n = _check_positive(n, "n")
    q = 1.0 / (2.0 * n)
    g = gamma(q)
    return beta(q, 1.0 + q) / (2.0 * n), g * g / (4.0 * n * gamma(1.0 / n))


def varpi(alpha_exp: float) -> float:
    """Length of one full leaf of ``r**(alpha/2) = cos(alpha theta / 2)``.

    Equals ``2 * integral_0^1 dr / sqrt(1 - r**alpha)``.
    """
    alpha_exp = _check_positive(alpha_exp, "alpha_exp")
    return 2.0 * closed_forms(alpha_exp / 2.0).spiral_quarter_length
