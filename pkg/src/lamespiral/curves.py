"""Pointwise geometry of the sinusoidal spiral, Lame curve and policle families.

All curves are indexed by one exponent ``n > 0``:

* sinusoidal spiral  ``r**n = cos(n*theta)``
* Lame curve         ``|x|**(2n) + |y|**(2n) = 1``
* policle            ``r**4 = n sin(n theta)**2 / (1 - |cos(n theta)|**(2n))``

For non-integer ``n`` only the principal leaf of the spiral (and the first
quadrant of the other curves) carries a global meaning; the functions still
evaluate wherever their formulas are defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from lamespiral.errors import DomainError

Target = Literal["spiral", "lame", "policle"]

# Rounding slack when a caller sits exactly on a leaf edge or interval end.
_EDGE_SLACK = 8 * 2.220446049250313e-16

# Below this |sin(n theta)| the policle ratio is evaluated by its series.
_POLICLE_SERIES_CUTOFF = 1e-6


@dataclass(frozen=True)
class CurveFamily:
    """Exponent ``n`` selecting one spiral / Lame / policle family."""

    n: float
    integer_n: bool = field(init=False)

    def __post_init__(self) -> None:
        n = float(self.n)
        if not math.isfinite(n) or n <= 0.0:
            raise DomainError(f"curve exponent must be a positive real, got {self.n!r}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "integer_n", n == round(n))

    @property
    def leaf_half_width(self) -> float:
        """Angular half-width ``pi/(2n)`` of one spiral leaf."""
        return math.pi / (2.0 * self.n)

    def require_integer(self, what: str) -> int:
        if not self.integer_n:
            raise DomainError(f"{what} needs an integer exponent, got n={self.n}")
        return int(round(self.n))


@dataclass(frozen=True)
class PolarPoint:
    r: float
    theta: float

    def __post_init__(self) -> None:
        if not self.r >= 0.0:
            raise DomainError(f"polar radius must be nonnegative, got {self.r!r}")

    def to_plane(self) -> "PlanePoint":
        return PlanePoint(self.r * math.cos(self.theta), self.r * math.sin(self.theta))


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def to_polar(self) -> PolarPoint:
        return PolarPoint(math.hypot(self.x, self.y), math.atan2(self.y, self.x))


@dataclass(frozen=True)
class Superellipse:
    """The curve ``|x/a|**alpha_exp + |y/b|**alpha_exp = 1``."""

    alpha_exp: float
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self) -> None:
        for name in ("alpha_exp", "a", "b"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"superellipse {name} must be positive, got {value!r}")


def as_family(fam: CurveFamily | float) -> CurveFamily:
    """Accept either a :class:`CurveFamily` or a bare exponent."""
    return fam if isinstance(fam, CurveFamily) else CurveFamily(fam)


def even_power(x: float, p: float) -> float:
    """``|x|**p``; the even-power convention used for non-integer exponents."""
    return abs(x) ** p


def one_minus_cos_pow(x: float, n: float) -> float:
    """``1 - |cos x|**(2n)`` without cancellation for small ``x``."""
    s2 = math.sin(x) ** 2
    if s2 <= 0.5:
        return -math.expm1(n * math.log1p(-s2))
    return 1.0 - even_power(math.cos(x), 2.0 * n)


def _clip_unit(value: float, what: str) -> float:
    if -_EDGE_SLACK <= value < 0.0:
        return 0.0
    if 1.0 < value <= 1.0 + _EDGE_SLACK:
        return 1.0
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{what} = {value!r} lies outside [0, 1]")
    return value


def spiral_radius(fam: CurveFamily | float, theta: float) -> float:
    """Radius of the sinusoidal spiral at polar angle ``theta``.

    Raises
    ------
    DomainError
        If ``cos(n*theta) < 0``: the ray falls in a gap between leaves.
    """
    fam = as_family(fam)
    c = math.cos(fam.n * theta)
    if c < -_EDGE_SLACK:
        raise DomainError(
            f"theta={theta!r} is off-leaf for n={fam.n} (cos(n*theta)={c:.3g} < 0)"
        )
    # the 1/n-th root would turn a rounding residue at a leaf edge into a visible radius
    if c <= _EDGE_SLACK:
        return 0.0
    return c ** (1.0 / fam.n)


def spiral_theta_from_radius(fam: CurveFamily | float, r: float) -> float:
    """Principal-leaf angle ``arccos(r**n)/n`` in ``[0, pi/(2n)]``."""
    fam = as_family(fam)
    r = _clip_unit(r, "spiral radius")
    return math.acos(r**fam.n) / fam.n


def lame_implicit(fam: CurveFamily | float, p: PlanePoint) -> float:
    """Residual ``|x|**(2n) + |y|**(2n) - 1`` of the Lame curve."""
    fam = as_family(fam)
    two_n = 2.0 * fam.n
    return even_power(p.x, two_n) + even_power(p.y, two_n) - 1.0


def lame_polar_radius(fam: CurveFamily | float, theta: float) -> float:
    """Radius of the Lame curve on the ray at angle ``theta``."""
    fam = as_family(fam)
    two_n = 2.0 * fam.n
    s = even_power(math.cos(theta), two_n) + even_power(math.sin(theta), two_n)
    return s ** (-1.0 / two_n)


def lame_param_point(fam: CurveFamily | float, t: float) -> PlanePoint:
    """First-quadrant point ``(cos(nt)**(1/n), sin(nt)**(1/n))`` of the Lame curve.

    ``t`` runs over ``[0, pi/(2n)]``.
    """
    fam = as_family(fam)
    n = fam.n
    top = fam.leaf_half_width
    if not -_EDGE_SLACK <= t <= top * (1.0 + _EDGE_SLACK):
        raise DomainError(f"parameter t={t!r} outside [0, pi/(2n)] for n={n}")
    t = min(max(t, 0.0), top)
    c = math.cos(n * t)
    s = math.sin(n * t)
    c = 0.0 if c <= _EDGE_SLACK else c
    s = 0.0 if s <= _EDGE_SLACK else s
    return PlanePoint(c ** (1.0 / n), s ** (1.0 / n))


def policle_radius(fam: CurveFamily | float, theta: float) -> float:
    """Radius of the policle, continuous across the 0/0 points ``theta = k pi/n``."""
    fam = as_family(fam)
    n = fam.n
    x = n * theta
    sin_x = math.sin(x)
    s2 = sin_x * sin_x
    if abs(sin_x) < _POLICLE_SERIES_CUTOFF:
        # n s2 / (1 - (1 - s2)**n) = 1 + (n-1)/2 s2 + [(n-1)^2/4 - (n-1)(n-2)/6] s2^2 + ...
        c1 = 0.5 * (n - 1.0)
        c2 = c1 * c1 - (n - 1.0) * (n - 2.0) / 6.0
        return (1.0 + s2 * (c1 + c2 * s2)) ** 0.25
    return (n * s2 / one_minus_cos_pow(x, n)) ** 0.25


def radial_projection(theta: float, target: Target, fam: CurveFamily | float) -> PolarPoint:
    """Point of ``target`` on the ray at angle ``theta``."""
    fam = as_family(fam)
    if target == "spiral":
        r = spiral_radius(fam, theta)
    elif target == "lame":
        r = lame_polar_radius(fam, theta)
    elif target == "policle":
        r = policle_radius(fam, theta)
    else:
        raise DomainError(f"unknown projection target {target!r}")
    return PolarPoint(r, theta)
