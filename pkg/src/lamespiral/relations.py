"""Identities between spiral arc lengths and Lame / policle areas.

Each ``verify_*`` function computes both sides of one identity by routes that
share as little code as possible (tanh-sinh against Gauss-Kronrod, or
quadrature against a gamma-function closed form) and returns a
:class:`RelationReport`.

Note on names: ``alpha`` is always a polar angle here and ``alpha_exp`` the
exponent of a superellipse; the two are unrelated.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from lamespiral.curves import CurveFamily, Superellipse, as_family
from lamespiral.errors import DomainError
from lamespiral.quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    lame_quadrant_area,
    lame_sector_area,
    lame_sector_area_tan,
    policle_sector_area,
    spiral_arc_length,
    spiral_arc_length_by_angle,
    superellipse_area_closed,
    superellipse_area_quadrature,
)

DEFAULT_TOL = 1e-9

_SLACK = 8 * 2.220446049250313e-16


@dataclass(frozen=True)
class SiegelTriple:
    """Matched Lame slope ``T``, spiral radius ``R`` and spiral angle ``beta``.

    ``R**n = 2 T**n / (1 + T**(2n))`` and ``beta = arccos(R**n) / n``;
    ``r_pow_n`` keeps ``R**n`` unrounded by the n-th root.
    """

    t_param: float
    r_param: float
    beta: float
    r_pow_n: float


@dataclass(frozen=True)
class RelationReport:
    name: str
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    tol: float
    passed: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def make_report(name: str, lhs: float, rhs: float, tol: float = DEFAULT_TOL) -> RelationReport:
    """Compare two values; pass when either the absolute or relative error is within ``tol``."""
    if not tol > 0.0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    abs_err = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    rel_err = abs_err / scale if scale > 0.0 else 0.0
    passed = bool(abs_err <= tol or rel_err <= tol)
    return RelationReport(name, float(lhs), float(rhs), abs_err, rel_err, tol, passed)


def siegel_map(fam: CurveFamily | float, t_param: float) -> SiegelTriple:
    fam = as_family(fam)
    n = fam.n
    if not 0.0 <= t_param <= 1.0:
        raise DomainError(f"T must lie in [0, 1], got {t_param!r}")
    t_n = t_param**n
    r_n = 2.0 * t_n / (1.0 + t_n * t_n)
    # rounding may push R**n one ulp past 1 near T = 1
    r_n = min(r_n, 1.0)
    return SiegelTriple(t_param, r_n ** (1.0 / n), math.acos(r_n) / n, r_n)


def _octant_angle(alpha: float) -> float:
    top = 0.25 * math.pi
    if not -_SLACK <= alpha <= top * (1.0 + _SLACK):
        raise DomainError(f"sector angle {alpha!r} outside [0, pi/4]")
    return min(max(alpha, 0.0), top)


def _tan_octant(alpha: float) -> float:
    return 1.0 if alpha == 0.25 * math.pi else math.tan(alpha)


def sector_to_arc(fam: CurveFamily | float, alpha: float) -> SiegelTriple:
    """Spiral data matched to the Lame sector ``0 <= theta <= alpha``."""
    return siegel_map(fam, _tan_octant(_octant_angle(alpha)))


def verify_fundamental(
    fam: CurveFamily | float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    tol: float = DEFAULT_TOL,
) -> RelationReport:
    fam = as_family(fam)
    lhs = spiral_arc_length(fam, 0.0, 1.0, cfg)
    rhs = 2.0 ** (1.0 / fam.n) * lame_quadrant_area(fam, cfg)
    return make_report(f"fundamental n={fam.n:g}", lhs, rhs, tol)


def verify_siegel(
    fam: CurveFamily | float,
    t_param: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    tol: float = DEFAULT_TOL,
) -> RelationReport:
    fam = as_family(fam)
    triple = siegel_map(fam, t_param)
    lhs = spiral_arc_length(fam, 0.0, triple.r_param, cfg)
    sector = lame_sector_area_tan(fam, 0.0, t_param, cfg)
    rhs = 2.0 ** (1.0 / fam.n) * (2.0 * sector)
    return make_report(f"siegel n={fam.n:g} T={t_param:.6f}", lhs, rhs, tol)


def verify_sector_arc(
    fam: CurveFamily | float,
    alpha: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    tol: float = DEFAULT_TOL,
) -> RelationReport:
    """Spiral arc over ``beta <= theta <= pi/(2n)`` against the Lame sector up to ``alpha``."""
    fam = as_family(fam)
    alpha = _octant_angle(alpha)
    triple = sector_to_arc(fam, alpha)
    lhs = spiral_arc_length(fam, 0.0, triple.r_param, cfg)
    rhs = 2.0 ** (1.0 + 1.0 / fam.n) * lame_sector_area(fam, alpha, cfg)
    return make_report(f"sector_arc n={fam.n:g} alpha={alpha:.6f}", lhs, rhs, tol)


def verify_superellipse_area(
    se: Superellipse,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    tol: float = DEFAULT_TOL,
) -> RelationReport:
    lhs = superellipse_area_quadrature(se, cfg)
    rhs = superellipse_area_closed(se)
    name = f"superellipse alpha_exp={se.alpha_exp:g} a={se.a:g} b={se.b:g}"
    return make_report(name, lhs, rhs, tol)


def _policle_c_angle(n: float, alpha: float) -> float:
    """Polar angle of the spiral point ``C`` with radius ``cos(n alpha)``.

    ``cos(n alpha)`` rounds to 1 for tiny ``alpha``, so the angle is built from
    ``1 - c**2`` with ``c = cos(n alpha)**n``, evaluated without cancellation.
    """
    half = math.sin(0.5 * n * alpha)
    log_cos = math.log1p(-2.0 * half * half)  # log cos(n alpha)
    c = math.exp(n * log_cos)
    s = math.sqrt(max(-math.expm1(2.0 * n * log_cos), 0.0))
    return math.atan2(s, c) / n


def verify_policle(
    fam: CurveFamily | float,
    alpha: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    tol: float = DEFAULT_TOL,
) -> RelationReport:
    """Spiral arc from ``C`` (radius ``cos(n alpha)``) to ``(1, 0)`` against the policle sector."""
    fam = as_family(fam)
    top = fam.leaf_half_width
    if not 0.0 < alpha <= top * (1.0 + _SLACK):
        raise DomainError(f"policle angle {alpha!r} outside (0, pi/(2n)] for n={fam.n}")
    alpha = min(alpha, top)
    lhs = spiral_arc_length_by_angle(fam, 0.0, _policle_c_angle(fam.n, alpha), cfg)
    rhs = 2.0 * math.sqrt(fam.n) * policle_sector_area(fam, alpha, cfg)
    return make_report(f"policle n={fam.n:g} alpha={alpha:.6f}", lhs, rhs, tol)
