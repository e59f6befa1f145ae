"""Quadrature for every integral in the package.

Two rules are provided:

* :func:`integrate_de`, a tanh-sinh (double exponential) rule for integrands
  with algebraic endpoint singularities such as ``(1 - r)**(-1/2)``;
* :func:`integrate_gk`, adaptive 15-point Gauss-Kronrod with bisection for
  smooth integrands (the sector areas).

An inverse square root at an endpoint cannot be resolved in double precision
from the abscissa alone: the last representable node below 1 already leaves a
tail of order ``sqrt(eps) ~ 1e-8``. ``integrate_de`` therefore can hand the
integrand the distances to both endpoints, computed from the transformation
itself, and the curve integrands below use them.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Literal

import numpy as np

from lamespiral import specfun
from lamespiral.curves import (
    CurveFamily,
    Superellipse,
    as_family,
    lame_polar_radius,
    policle_radius,
)
from lamespiral.errors import ConsistencyError, ConvergenceError, DomainError, IntegrandError

_EPS = 2.220446049250313e-16
_ANGLE_SLACK = 8 * _EPS

# tanh-sinh abscissae are kept while exp(-pi sinh t) stays above ~1e-304
_DE_T_MAX = 6.1
_DE_H0 = 0.5
_DE_MIN_LEVEL = 3


@dataclass(frozen=True)
class QuadratureConfig:
    target_rel_tol: float = 1e-12
    max_level: int = 12
    max_subdivisions: int = 200

    def __post_init__(self) -> None:
        if not self.target_rel_tol > 0.0:
            raise DomainError("target_rel_tol must be positive")
        if self.max_level < 1 or self.max_subdivisions < 1:
            raise DomainError("refinement caps must be at least 1")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    evaluations: int


def _checked(value: float, x: float) -> float:
    if not math.isfinite(value):
        raise IntegrandError(f"integrand returned {value!r} at x={x!r}")
    return value


def integrate_de(
    f: Callable[..., float],
    a: float,
    b: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    *,
    complement: bool = False,
    abs_tol: float = 0.0,
) -> IntegralResult:
    """Tanh-sinh quadrature of ``f`` over ``(a, b)``.

    Parameters
    ----------
    f : callable
        ``f(x)``, or ``f(x, da, db)`` when ``complement`` is true, where
        ``da = x - a`` and ``db = b - x`` are accurate even when ``x`` itself
        rounds onto an endpoint.
    a, b : float
        Integration limits, ``a <= b``.
    cfg : QuadratureConfig
        ``target_rel_tol`` and ``max_level`` are used.
    complement : bool
        Pass endpoint distances to ``f``.
    abs_tol : float
        Absolute floor for the stopping test, for integrals near zero.

    Returns
    -------
    IntegralResult
        ``error_estimate`` is the difference between the last two levels.

    Raises
    ------
    ConvergenceError
        If two successive levels still disagree at ``cfg.max_level``.
    IntegrandError
        If ``f`` produces NaN or infinity at a node.
    """
    if not a <= b:
        raise DomainError(f"integration limits out of order: a={a!r} > b={b!r}")
    if a == b:
        return IntegralResult(0.0, 0.0, 0)

    half = 0.5 * (b - a)
    width = b - a
    evaluations = 0

    def node(t: float) -> float:
        nonlocal evaluations
        u = 0.5 * math.pi * math.sinh(t)
        e = math.exp(-2.0 * abs(u))
        near = half * (2.0 * e / (1.0 + e))  # distance to the nearer endpoint
        if near == 0.0:
            return 0.0
        far = width - near
        if t >= 0.0:
            da, db, x = far, near, b - near
        else:
            da, db, x = near, far, a + near
        if complement:
            value = f(x, da, db)
        else:
            if not a < x < b:
                return 0.0
            value = f(x)
        evaluations += 1
        weight = half * 0.5 * math.pi * math.cosh(t) * 4.0 * e / (1.0 + e) ** 2
        return weight * _checked(value, x)

    step = _DE_H0
    k_max = int(_DE_T_MAX / step)
    total = sum(node(k * step) for k in range(-k_max, k_max + 1))
    estimate = step * total
    error = math.inf
    for level in range(1, cfg.max_level + 1):
        step *= 0.5
        j_max = int((_DE_T_MAX / step - 1.0) / 2.0)
        total += sum(node((2 * j + 1) * step) for j in range(-j_max - 1, j_max + 1))
        previous, estimate = estimate, step * total
        error = abs(estimate - previous)
        if level >= _DE_MIN_LEVEL and error <= max(cfg.target_rel_tol * abs(estimate), abs_tol):
            return IntegralResult(estimate, error, evaluations)
    raise ConvergenceError(
        f"tanh-sinh rule did not converge on [{a!r}, {b!r}]: "
        f"last two levels differ by {error:.3e} at level {cfg.max_level}"
    )


# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def gk15(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """One Gauss-Kronrod 7/15 panel: ``(kronrod_value, error_estimate)``."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    f_center = _checked(f(center), center)
    res_k = _WGK[7] * f_center
    res_g = _WG[3] * f_center
    res_abs = abs(res_k)
    pairs = []
    for j in range(7):
        dx = half * _XGK[j]
        f1 = _checked(f(center - dx), center - dx)
        f2 = _checked(f(center + dx), center + dx)
        pairs.append((f1, f2))
        res_k += _WGK[j] * (f1 + f2)
        res_abs += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            res_g += _WG[j // 2] * (f1 + f2)
    mean = 0.5 * res_k
    res_asc = _WGK[7] * abs(f_center - mean)
    for j, (f1, f2) in enumerate(pairs):
        res_asc += _WGK[j] * (abs(f1 - mean) + abs(f2 - mean))
    h = abs(half)
    error = abs((res_k - res_g) * h)
    res_asc *= h
    res_abs *= h
    if res_asc != 0.0 and error != 0.0:
        error = res_asc * min(1.0, (200.0 * error / res_asc) ** 1.5)
    if res_abs > 1e-290:
        error = max(50.0 * _EPS * res_abs, error)
    return res_k * half, error


def integrate_gk(
    f: Callable[[float], float],
    a: float,
    b: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    *,
    abs_tol: float = 0.0,
) -> IntegralResult:
    """Globally adaptive Gauss-Kronrod quadrature, bisecting the worst panel."""
    if not a <= b:
        raise DomainError(f"integration limits out of order: a={a!r} > b={b!r}")
    if a == b:
        return IntegralResult(0.0, 0.0, 0)
    value, error = gk15(f, a, b)
    heap = [(-error, a, b, value, error)]
    total, total_err = value, error
    subdivisions = 1
    while total_err > max(cfg.target_rel_tol * abs(total), abs_tol):
        if subdivisions >= cfg.max_subdivisions:
            raise ConvergenceError(
                f"Gauss-Kronrod exhausted {cfg.max_subdivisions} subdivisions on "
                f"[{a!r}, {b!r}] with error estimate {total_err:.3e}"
            )
        _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = gk15(f, lo, mid)
        v2, e2 = gk15(f, mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, hi, v2, e2))
        total += v1 + v2 - v
        total_err += e1 + e2 - e
        subdivisions += 1
    # re-sum to shed the drift of the running updates
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(item[4] for item in heap)
    return IntegralResult(total, total_err, 15 * (2 * subdivisions - 1))


# --- curve integrals -------------------------------------------------------


def one_minus_power(x: float, p: float, dist_to_one: float) -> float:
    """``1 - x**p`` for ``0 <= x <= 1``, accurate when ``x`` is close to 1.

    ``dist_to_one`` must equal ``1 - x`` to full relative precision.
    """
    if dist_to_one < 0.5:
        return -math.expm1(p * math.log1p(-dist_to_one))
    return 1.0 - x**p


def _spiral_integrand(n: float, r_hi: float) -> Callable[[float, float, float], float]:
    two_n = 2.0 * n
    gap = 1.0 - r_hi

    def integrand(r: float, da: float, db: float) -> float:
        return 1.0 / math.sqrt(one_minus_power(r, two_n, gap + db))

    return integrand


def _check_radius_pair(r1: float, r2: float) -> None:
    if not 0.0 <= r1 <= r2 <= 1.0:
        raise DomainError(f"need 0 <= r1 <= r2 <= 1, got r1={r1!r}, r2={r2!r}")


def spiral_arc_length(
    fam: CurveFamily | float, r1: float, r2: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """Spiral arc length between radii ``r1 <= r2`` on one half-leaf.

    The integral of ``1/sqrt(1 - r**(2n))`` over ``[r1, r2]``.
    """
    fam = as_family(fam)
    _check_radius_pair(r1, r2)
    return integrate_de(_spiral_integrand(fam.n, r2), r1, r2, cfg, complement=True).value


def spiral_arc_length_by_angle(
    fam: CurveFamily | float,
    theta1: float,
    theta2: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """Spiral arc length over the polar sector ``theta1 <= theta <= theta2``.

    Uses ``u = pi/(2n) - theta`` so that ``r = sin(n u)**(1/n)`` and the line
    element becomes ``sin(n u)**(1/n - 1) du``; the ``u**(1/n - 1)`` singularity
    at the origin is left to the tanh-sinh rule. On the tip half of the leaf the
    integrand ``cos(n theta)**(1/n - 1)`` is smooth and is integrated directly,
    which keeps short arcs at the tip accurate. This route shares nothing with
    :func:`spiral_arc_length` beyond the curve itself.
    """
    fam = as_family(fam)
    n = fam.n
    edge = fam.leaf_half_width
    if not -_ANGLE_SLACK <= theta1 <= theta2 <= edge + _ANGLE_SLACK:
        raise DomainError(
            f"need 0 <= theta1 <= theta2 <= pi/(2n), got {theta1!r}, {theta2!r} for n={n}"
        )
    power = 1.0 / n - 1.0
    mid = 0.5 * edge
    total = 0.0
    if theta1 < mid:
        # tip side: cos(n theta)**(1/n - 1) is smooth here, integrate in theta itself
        hi = min(theta2, mid)
        total += integrate_gk(lambda th: math.cos(n * th) ** power, theta1, hi, cfg).value
    if theta2 > mid:
        u_lo = max(edge - theta2, 0.0)
        u_hi = max(edge - max(theta1, mid), 0.0)

        def integrand(u: float, da: float, db: float) -> float:
            arg = u_lo + da if da <= db else u
            return math.sin(n * arg) ** power

        total += integrate_de(integrand, u_lo, u_hi, cfg, complement=True).value
    return total


def spiral_arc_length_substituted(
    fam: CurveFamily | float, r1: float, r2: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """Cross-check of :func:`spiral_arc_length` through the angle substitution."""
    fam = as_family(fam)
    _check_radius_pair(r1, r2)
    n = fam.n
    return spiral_arc_length_by_angle(fam, math.acos(r2**n) / n, math.acos(r1**n) / n, cfg)


def _lame_profile_integral(p: float, cfg: QuadratureConfig) -> float:
    """Integral of ``(1 - u**p)**(1/p)`` over ``[0, 1]``."""

    def integrand(u: float, da: float, db: float) -> float:
        return one_minus_power(u, p, db) ** (1.0 / p)

    return integrate_de(integrand, 0.0, 1.0, cfg, complement=True).value


def lame_quadrant_area(fam: CurveFamily | float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Area inside the Lame curve in the first quadrant."""
    fam = as_family(fam)
    return _lame_profile_integral(2.0 * fam.n, cfg)


def lame_sector_area_tan(
    fam: CurveFamily | float,
    v1: float,
    v2: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """Lame sector area between the rays with slopes ``v1 <= v2`` in ``[0, 1]``.

    ``1/2 * integral dv / (1 + v**(2n))**(1/n)``.
    """
    fam = as_family(fam)
    n = fam.n
    inv_n = 1.0 / n
    two_n = 2.0 * n

    def integrand(v: float) -> float:
        return (1.0 + v**two_n) ** -inv_n

    return 0.5 * integrate_gk(integrand, v1, v2, cfg).value


def _check_octant(alpha: float) -> float:
    top = 0.25 * math.pi
    if not -_ANGLE_SLACK <= alpha <= top * (1.0 + _ANGLE_SLACK):
        raise DomainError(f"sector angle {alpha!r} outside [0, pi/4]")
    return min(max(alpha, 0.0), top)


def lame_sector_area(
    fam: CurveFamily | float, alpha: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """Area of the Lame sector ``0 <= theta <= alpha``, ``alpha`` in ``[0, pi/4]``."""
    alpha = _check_octant(alpha)
    # tan(pi/4) rounds below 1; the octant end must be exact
    t = 1.0 if alpha == 0.25 * math.pi else math.tan(alpha)
    return lame_sector_area_tan(fam, 0.0, t, cfg)


def lame_sector_area_polar(
    fam: CurveFamily | float,
    theta1: float,
    theta2: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """``1/2 * integral r(theta)**2 dtheta`` over any angular interval."""
    fam = as_family(fam)

    def integrand(theta: float) -> float:
        r = lame_polar_radius(fam, theta)
        return 0.5 * r * r

    return integrate_gk(integrand, theta1, theta2, cfg).value


def policle_sector_area(
    fam: CurveFamily | float, alpha: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """Policle sector area ``0 <= theta <= alpha``, ``alpha`` in ``[0, pi/(2n)]``."""
    fam = as_family(fam)
    top = fam.leaf_half_width
    if not -_ANGLE_SLACK <= alpha <= top * (1.0 + _ANGLE_SLACK):
        raise DomainError(f"policle sector angle {alpha!r} outside [0, pi/(2n)] for n={fam.n}")
    alpha = min(max(alpha, 0.0), top)

    def integrand(theta: float) -> float:
        r = policle_radius(fam, theta)
        return 0.5 * r * r

    return integrate_gk(integrand, 0.0, alpha, cfg).value


def superellipse_area_closed(se: Superellipse) -> float:
    return 2.0 ** (1.0 - 2.0 / se.alpha_exp) * specfun.varpi(se.alpha_exp) * se.a * se.b


def superellipse_area_quadrature(se: Superellipse, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    return 4.0 * se.a * se.b * _lame_profile_integral(se.alpha_exp, cfg)


def superellipse_area(se: Superellipse, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Enclosed area from the closed form, audited against direct quadrature.

    Raises
    ------
    ConsistencyError
        If the two disagree by more than ``100 * cfg.target_rel_tol`` relative.
    """
    closed = superellipse_area_closed(se)
    direct = superellipse_area_quadrature(se, cfg)
    if abs(closed - direct) > 100.0 * cfg.target_rel_tol * abs(closed):
        raise ConsistencyError(
            f"superellipse area: closed form {closed!r} vs quadrature {direct!r}"
        )
    return closed


# --- cumulative profiles -----------------------------------------------------

ProfileKind = Literal["spiral_arclength", "lame_sector_area"]


@dataclass(frozen=True)
class Profile:
    """Cumulative integral sampled at increasing parameter values.

    For ``spiral_arclength`` the parameter is the radius on ``[0, 1]`` and the
    value the arc length from the origin; for ``lame_sector_area`` it is the
    polar angle on ``[0, pi/4]`` and the value the swept sector area.
    """

    kind: str
    n: float
    params: np.ndarray
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.params)

    @property
    def total(self) -> float:
        return float(self.values[-1])

    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.params.tolist(), self.values.tolist()))


def _profile_nodes(kind: str, samples: int) -> np.ndarray:
    k = np.arange(samples) / (samples - 1)
    if kind == "spiral_arclength":
        # Chebyshev-type spacing clustered at the singular end r = 1
        nodes = np.sin(0.5 * np.pi * k)
        nodes[-1] = 1.0
    else:
        nodes = 0.125 * np.pi * (1.0 - np.cos(np.pi * k))
        nodes[-1] = 0.25 * math.pi
    nodes[0] = 0.0
    return nodes


@lru_cache(maxsize=64)
def _cached_profile(kind: str, n: float, samples: int, cfg: QuadratureConfig) -> Profile:
    fam = CurveFamily(n)
    params = _profile_nodes(kind, samples)
    increments = np.empty(samples)
    increments[0] = 0.0
    if kind == "spiral_arclength":
        for i in range(1, samples):
            increments[i] = spiral_arc_length(fam, params[i - 1], params[i], cfg)
    else:
        slopes = np.tan(params)
        slopes[-1] = 1.0
        for i in range(1, samples):
            increments[i] = lame_sector_area_tan(fam, slopes[i - 1], slopes[i], cfg)
    values = np.cumsum(increments)
    params.setflags(write=False)
    values.setflags(write=False)
    return Profile(kind, n, params, values)


def cumulative_profile(
    kind: ProfileKind,
    fam: CurveFamily | float,
    samples: int,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> Profile:
    """Monotone table of a cumulative arc length or sector area.

    Profiles are cached per ``(kind, n, samples, cfg)`` and returned read-only.
    """
    fam = as_family(fam)
    if kind not in ("spiral_arclength", "lame_sector_area"):
        raise DomainError(f"unknown profile kind {kind!r}")
    if samples < 16:
        raise DomainError(f"a cumulative profile needs at least 16 samples, got {samples}")
    return _cached_profile(kind, fam.n, int(samples), cfg)
