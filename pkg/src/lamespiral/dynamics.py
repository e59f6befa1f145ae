"""Keplerian motion on the Lame curve and uniform motion on the sinusoidal spiral.

The two motions are tied together by the sector/arc relation: a particle that
sweeps Lame sector area at the rate ``h/2`` is matched with a particle running
along the spiral at speed ``2**(1 + 1/n) * h/2``, so that octants of the Lame
curve and half-leaves of the spiral are completed at the same instants.

The module also provides the central force that produces the keplerian Lame
orbit, the Binet residual that certifies it, and a Newtonian simulation under
that force.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy.interpolate import PchipInterpolator

from lamespiral.curves import (
    CurveFamily,
    PlanePoint,
    PolarPoint,
    as_family,
    even_power,
    lame_implicit,
    lame_polar_radius,
)
from lamespiral.errors import ConvergenceError, DomainError, SimulationError
from lamespiral.ode import dopri5
from lamespiral.quadrature import (
    DEFAULT_CONFIG,
    cumulative_profile,
    integrate_gk,
    lame_quadrant_area,
    lame_sector_area,
    lame_sector_area_tan,
    spiral_arc_length,
)
from lamespiral.relations import sector_to_arc

PROFILE_SAMPLES = 256
_QUARTER_PI = 0.25 * math.pi
_NEWTON_MAX = 30

CURVE_RESIDUAL_LIMIT = 1e-6
ANGULAR_MOMENTUM_LIMIT = 1e-9


@dataclass(frozen=True)
class ForceParams:
    """Mass ``m``, specific angular momentum ``h`` and force constant ``C``."""

    mass: float
    angular_momentum: float
    force_constant: float

    def __post_init__(self) -> None:
        for name in ("mass", "angular_momentum", "force_constant"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be positive, got {value!r}")

    @classmethod
    def for_lame_orbit(
        cls, fam: CurveFamily | float, mass: float = 1.0, angular_momentum: float = 1.0
    ) -> "ForceParams":
        """Parameters with ``C = (2n - 1) m h**2``, the constant the Lame orbit requires."""
        fam = as_family(fam)
        c = (2.0 * fam.n - 1.0) * mass * angular_momentum**2
        return cls(mass, angular_momentum, c)


@dataclass(frozen=True)
class MotionState:
    time: float
    position: PlanePoint
    velocity: tuple[float, float]

    @property
    def angular_momentum(self) -> float:
        return self.position.x * self.velocity[1] - self.position.y * self.velocity[0]


@dataclass(frozen=True)
class DualFrame:
    """One instant of the paired motions.

    ``swept_area`` is measured back from the Lame position and
    ``traversed_length`` from the spiral position, each by its own quadrature,
    so their ratio is an honest check rather than a restatement of the clock.
    """

    time: float
    lame_point: PolarPoint
    spiral_point: PolarPoint
    swept_area: float
    traversed_length: float
    octant_index: int
    halfleaf_index: int


@dataclass(frozen=True)
class SchedulePair:
    octant_index: int
    halfleaf_index: int

    def __str__(self) -> str:
        return f"(P{self.octant_index},Q{self.halfleaf_index})"


# --- keplerian motion on the Lame curve -----------------------------------------


class _LameOctant:
    """Inverse of the swept-area function on the first octant ``[0, pi/4]``."""

    def __init__(self, n: float) -> None:
        self.fam = CurveFamily(n)
        self.profile = cumulative_profile("lame_sector_area", self.fam, PROFILE_SAMPLES)
        self.area = self.profile.total
        self._guess = PchipInterpolator(self.profile.values, self.profile.params)

    def area_at(self, theta: float) -> float:
        params = self.profile.params
        i = min(int(params.searchsorted(theta, side="right")) - 1, len(params) - 2)
        i = max(i, 0)
        lo = math.tan(params[i])
        hi = 1.0 if theta >= _QUARTER_PI else math.tan(theta)
        if hi < lo:
            return float(self.profile.values[i]) - lame_sector_area_tan(self.fam, hi, lo)
        return float(self.profile.values[i]) + lame_sector_area_tan(self.fam, lo, hi)

    def theta_for(self, area: float) -> float:
        if area <= 0.0:
            return 0.0
        if area >= self.area:
            return _QUARTER_PI
        theta = float(self._guess(area))
        lo, hi = 0.0, _QUARTER_PI
        for _ in range(_NEWTON_MAX):
            resid = self.area_at(theta) - area
            if abs(resid) <= 4e-16 * self.area:
                return theta
            if resid > 0.0:
                hi = min(hi, theta)
            else:
                lo = max(lo, theta)
            r = lame_polar_radius(self.fam, theta)
            step = resid / (0.5 * r * r)
            theta -= step
            if not lo < theta < hi:
                theta = 0.5 * (lo + hi)
            if abs(step) <= 1e-17:
                return theta
        raise ConvergenceError(f"keplerian angle inversion stalled at area {area!r}")


@lru_cache(maxsize=16)
def _lame_octant(n: float) -> _LameOctant:
    return _LameOctant(n)


def octant_period(fam: CurveFamily | float, fp: ForceParams) -> float:
    """Time for the keplerian particle to sweep one octant: ``2 A_octant / h``."""
    fam = as_family(fam)
    return 2.0 * _lame_octant(fam.n).area / fp.angular_momentum


def lame_kepler_theta(fam: CurveFamily | float, t: float, fp: ForceParams) -> float:
    """Polar angle at time ``t`` of keplerian motion on the Lame curve from ``(1, 0)``.

    The angle is not reduced modulo ``2 pi``; octant boundaries are hit exactly
    at multiples of :func:`octant_period`.
    """
    fam = as_family(fam)
    fam.require_integer("keplerian motion on the full Lame curve")
    if not t >= 0.0:
        raise DomainError(f"time must be nonnegative, got {t!r}")
    octant = _lame_octant(fam.n)
    swept = 0.5 * fp.angular_momentum * t
    k = math.floor(swept / octant.area)
    rem = swept - k * octant.area
    if k % 2 == 0:
        return k * _QUARTER_PI + octant.theta_for(rem)
    return (k + 1) * _QUARTER_PI - octant.theta_for(octant.area - rem)


def lame_swept_area(fam: CurveFamily | float, theta: float) -> float:
    """Sector area of the Lame curve between angle 0 and ``theta >= 0``."""
    fam = as_family(fam)
    if theta < 0.0:
        raise DomainError(f"swept angle must be nonnegative, got {theta!r}")
    area_oct = 0.5 * lame_quadrant_area(fam)
    k = math.floor(theta / _QUARTER_PI)
    phi = theta - k * _QUARTER_PI
    if k % 2 == 0:
        return k * area_oct + lame_sector_area(fam, min(phi, _QUARTER_PI))
    return (k + 1) * area_oct - lame_sector_area(fam, max(_QUARTER_PI - phi, 0.0))


# --- uniform motion on the sinusoidal spiral ---------------------------------------


@dataclass(frozen=True)
class HalfLeaf:
    """One half of a spiral leaf, oriented.

    Angles are counted in units of ``pi/(2n)``: the leaf centre sits at
    ``center`` (a multiple of 4) and the edge through the origin at
    ``center + side``. ``outward`` runs origin to tip.
    """

    center: int
    side: int
    outward: bool

    def successor(self, n: int) -> "HalfLeaf":
        if self.outward:
            return HalfLeaf(self.center, -self.side, False)
        # straight through the origin: the exit ray is the entry ray turned by pi
        edge = (self.center + self.side + 2 * n) % (4 * n)
        center = edge - 1 if (edge - 1) % 4 == 0 else edge + 1
        return HalfLeaf(center % (4 * n), edge - center, True)

    def angle(self, n: int, phi: float) -> float:
        """Polar angle of the point at tip-angle ``phi`` on this half-leaf."""
        return self.center * math.pi / (2 * n) + self.side * phi


def half_leaf_sequence(n: int, first: HalfLeaf, count: int) -> list[HalfLeaf]:
    seq = [first]
    while len(seq) < count:
        seq.append(seq[-1].successor(n))
    return seq


UNIFORM_START = HalfLeaf(0, 1, False)
DUAL_START = HalfLeaf(0, 1, True)


class _SpiralLocator:
    """Finds the point at a given arc length from the tip of a half-leaf.

    Near the tip the unknown is the tip-angle ``phi`` (line element
    ``cos(n phi)**(1/n - 1) dphi``, finite there); near the origin it is the
    radius (line element ``dr / sqrt(1 - r**(2n))``, finite there). Each side
    is solved by safeguarded Newton from a monotone cubic guess.
    """

    def __init__(self, n: float) -> None:
        self.fam = CurveFamily(n)
        self.n = n
        self.profile = cumulative_profile("spiral_arclength", self.fam, PROFILE_SAMPLES)
        self.quarter = spiral_arc_length(self.fam, 0.0, 1.0)
        self._guess = PchipInterpolator(self.profile.values, self.profile.params)

    def _from_origin(self, r: float) -> float:
        params = self.profile.params
        i = max(int(params.searchsorted(r, side="right")) - 1, 0)
        two_n = 2.0 * self.n
        base = float(self.profile.values[i])
        return base + integrate_gk(lambda x: (1.0 - x**two_n) ** -0.5, float(params[i]), r).value

    def _from_tip(self, phi: float) -> float:
        n = self.n
        power = 1.0 / n - 1.0
        return integrate_gk(lambda p: math.cos(n * p) ** power, 0.0, phi).value

    def locate(self, dist_from_tip: float) -> tuple[float, float]:
        """``(r, phi)`` of the point at ``dist_from_tip`` along a half-leaf."""
        n = self.n
        big_k = self.quarter
        dist = min(max(dist_from_tip, 0.0), big_k)
        if dist == 0.0:
            return 1.0, 0.0
        if dist == big_k:
            return 0.0, math.pi / (2.0 * n)
        r_guess = min(max(float(self._guess(big_k - dist)), 0.0), 1.0)
        if dist <= 0.5 * big_k:
            phi = math.acos(r_guess**n) / n
            phi = self._newton(
                self._from_tip,
                lambda p: math.cos(n * p) ** (1.0 / n - 1.0),
                dist,
                phi,
                0.0,
                math.pi / (2.0 * n),
            )
            return max(math.cos(n * phi), 0.0) ** (1.0 / n), phi
        r = self._newton(
            self._from_origin,
            lambda x: (1.0 - x ** (2.0 * n)) ** -0.5,
            big_k - dist,
            r_guess,
            0.0,
            1.0,
        )
        return r, math.acos(r**n) / n

    def _newton(self, func, deriv, target, x, lo, hi) -> float:
        for _ in range(_NEWTON_MAX):
            resid = func(x) - target
            if abs(resid) <= 4e-16 * self.quarter:
                return x
            if resid > 0.0:
                hi = x
            else:
                lo = x
            step = resid / deriv(x)
            x_new = x - step
            if not lo < x_new < hi:
                x_new = 0.5 * (lo + hi)
            if x_new == x:
                return x
            x = x_new
        raise ConvergenceError(f"spiral arc-length inversion stalled at {target!r}")


@lru_cache(maxsize=16)
def _spiral_locator(n: float) -> _SpiralLocator:
    return _SpiralLocator(n)


def _split_arc(s: float, quarter: float) -> tuple[int, float]:
    """Half-leaf index and arc length into it; boundary points stay on the earlier half-leaf."""
    j = math.floor(s / quarter)
    local = s - j * quarter
    # clock and quadrature roundings leave boundary hits a few ulps either side
    slack = 16 * 2.220446049250313e-16 * max(s, quarter)
    if local >= quarter - slack:
        return j, quarter
    if local <= slack and j > 0:
        return j - 1, quarter
    return j, max(local, 0.0)


def _spiral_position(n: int, first: HalfLeaf, s: float) -> tuple[PolarPoint, int, HalfLeaf]:
    locator = _spiral_locator(float(n))
    j, local = _split_arc(s, locator.quarter)
    leaf = half_leaf_sequence(n, first, (j % (2 * n)) + 1)[-1]
    dist_from_tip = local if not leaf.outward else locator.quarter - local
    r, phi = locator.locate(dist_from_tip)
    return PolarPoint(r, leaf.angle(n, phi)), j, leaf


def spiral_uniform_position(fam: CurveFamily | float, s: float) -> PolarPoint:
    """Point reached after arc length ``s`` along the spiral from ``(1, 0)``.

    The particle first runs down the upper half of the leaf at angle 0 to the
    origin, passes straight through it and continues half-leaf by half-leaf;
    after ``n * varpi_{2n}`` it is back at ``(1, 0)``.
    """
    fam = as_family(fam)
    n = fam.require_integer("uniform motion on the full spiral")
    if not s >= 0.0:
        raise DomainError(f"arc length must be nonnegative, got {s!r}")
    return _spiral_position(n, UNIFORM_START, s)[0]


def corresponding_spiral_point(fam: CurveFamily | float, alpha: float) -> PolarPoint:
    """Spiral point matched to the Lame sector ``[0, alpha]``: radius ``R`` at angle ``beta``."""
    triple = sector_to_arc(fam, alpha)
    return PolarPoint(triple.r_param, triple.beta)


def spiral_speed(fam: CurveFamily | float, fp: ForceParams) -> float:
    fam = as_family(fam)
    return 2.0 ** (1.0 + 1.0 / fam.n) * 0.5 * fp.angular_momentum


def dual_motion(
    fam: CurveFamily | float, fp: ForceParams, t_end: float, frames: int
) -> list[DualFrame]:
    """Keplerian Lame motion and uniform spiral motion sampled at equal time steps.

    At ``t = 0`` the Lame particle is at ``(1, 0)`` and the spiral particle at
    the origin, on the edge ``theta = pi/(2n)`` of the leaf at angle 0; one
    octant later they reach ``theta = pi/4`` and ``(1, 0)`` respectively.
    """
    fam = as_family(fam)
    n = fam.require_integer("dual motion")
    if frames < 2:
        raise DomainError(f"need at least 2 frames, got {frames}")
    if not t_end >= 0.0:
        raise DomainError(f"t_end must be nonnegative, got {t_end!r}")
    speed = spiral_speed(fam, fp)
    quarter = _spiral_locator(float(n)).quarter
    out = []
    for i in range(frames):
        t = t_end * i / (frames - 1)
        theta = lame_kepler_theta(fam, t, fp)
        lame_pt = PolarPoint(lame_polar_radius(fam, theta), theta)
        spiral_pt, j, leaf = _spiral_position(n, DUAL_START, speed * t)
        from_origin = spiral_arc_length(fam, 0.0, spiral_pt.r)
        local = from_origin if leaf.outward else quarter - from_origin
        octant = math.floor(theta / _QUARTER_PI)
        if octant > 0 and theta == octant * _QUARTER_PI:
            octant -= 1
        out.append(
            DualFrame(
                time=t,
                lame_point=lame_pt,
                spiral_point=spiral_pt,
                swept_area=lame_swept_area(fam, theta),
                traversed_length=j * quarter + local,
                octant_index=octant % 8 + 1,
                halfleaf_index=j % (2 * n) + 1,
            )
        )
    return out


def boundary_crossings(
    fam: CurveFamily | float, fp: ForceParams, count: int | None = None
) -> list[tuple[float, float]]:
    """``(octant_time, half_leaf_time)`` for the first ``count`` boundary crossings.

    Octant times come from the Lame quadrant area and the areal rate; half-leaf
    times from the spiral quarter length and the spiral speed. Equality of the
    two columns is the fundamental identity seen as a statement about clocks.
    """
    fam = as_family(fam)
    n = fam.require_integer("boundary crossings")
    if count is None:
        count = math.lcm(8, 2 * n)
    t_oct = lame_quadrant_area(fam) / fp.angular_momentum
    t_leaf = spiral_arc_length(fam, 0.0, 1.0) / spiral_speed(fam, fp)
    return [(k * t_oct, k * t_leaf) for k in range(1, count + 1)]


def cycle_schedule(fam: CurveFamily | float) -> list[SchedulePair]:
    """Octant / half-leaf pairs over one full cycle of the paired motions."""
    fam = as_family(fam)
    n = fam.require_integer("the cycle schedule")
    length = math.lcm(8, 2 * n)
    return [SchedulePair(k % 8 + 1, k % (2 * n) + 1) for k in range(length)]


# --- central force -----------------------------------------------------------------


def _require_nondegenerate(fam: CurveFamily) -> None:
    if not fam.n > 1.0:
        raise DomainError(
            f"the Lame force law needs n > 1 (n={fam.n}); a circle admits any central force"
        )


def central_force_general(
    fam: CurveFamily | float, r: float, theta: float, fp: ForceParams
) -> float:
    """Radial force ``-C r**(4n-3) w**(2n-2)`` with ``w = sin(theta) cos(theta)``.

    Negative values attract toward the origin.
    """
    fam = as_family(fam)
    _require_nondegenerate(fam)
    n = fam.n
    w = math.sin(theta) * math.cos(theta)
    return -fp.force_constant * r ** (4.0 * n - 3.0) * even_power(w, 2.0 * n - 2.0)


def central_force_explicit(n: int, r: float, force_constant: float, *, uncorrected: bool = False) -> float:
    """Central force in ``r`` alone for ``n = 2, 3, 4, 5``.

    Each is proportional to :func:`central_force_general` along the Lame
    curve, with ratios 1/2, 1/9, 1/8 and 1/10**4. For ``n = 5`` the default is
    the form obtained by solving ``u**10 = 1 - 5 w**2 + 5 w**4`` for ``w**2``;
    ``uncorrected=True`` returns the commonly quoted ``C r**2 (sqrt(5 r**10 + 2) - 5 r**5)**3``
    instead, which is not proportional to the general law.
    """
    if n not in (2, 3, 4, 5) or n != int(n):
        raise DomainError(f"explicit force formulas exist for n in {{2, 3, 4, 5}}, got {n!r}")
    if not r > 0.0:
        raise DomainError(f"radius must be positive, got {r!r}")
    c = force_constant
    if n == 2:
        return c * r * (1.0 - r**4)
    if n == 3:
        return -c * (1.0 - r**6) ** 2 / r**3
    if n == 4:
        return c * r * (math.sqrt(2.0 * r**8 + 2.0) - 2.0 * r**4) ** 3
    if uncorrected:
        return c * r**2 * (math.sqrt(5.0 * r**10 + 2.0) - 5.0 * r**5) ** 3
    return -c * (math.sqrt(5.0 * r**10 + 20.0) - 5.0 * r**5) ** 4 / r**3


def lame_inverse_radius(fam: CurveFamily | float, theta: float) -> float:
    """``u = 1/r = (cos**(2n) + sin**(2n))**(1/(2n))`` along the Lame curve."""
    fam = as_family(fam)
    two_n = 2.0 * fam.n
    return (even_power(math.cos(theta), two_n) + even_power(math.sin(theta), two_n)) ** (
        1.0 / two_n
    )


def binet_residual(fam: CurveFamily | float, theta: float, fd_step: float = 1e-3) -> float:
    """``|u + u'' - (2n-1) w**(2n-2) / u**(4n-1)|`` with a five-point ``u''``."""
    fam = as_family(fam)
    _require_nondegenerate(fam)
    if not fd_step > 0.0:
        raise DomainError(f"finite-difference step must be positive, got {fd_step!r}")
    n = fam.n
    h = fd_step
    u = [lame_inverse_radius(fam, theta + k * h) for k in (-2, -1, 0, 1, 2)]
    u_dd = (-u[0] + 16.0 * u[1] - 30.0 * u[2] + 16.0 * u[3] - u[4]) / (12.0 * h * h)
    w = math.sin(theta) * math.cos(theta)
    rhs = (2.0 * n - 1.0) * even_power(w, 2.0 * n - 2.0) / u[2] ** (4.0 * n - 1.0)
    return abs(u[2] + u_dd - rhs)


def orbit_period(fam: CurveFamily | float, fp: ForceParams) -> float:
    """One revolution: total enclosed area over the areal rate ``h/2``."""
    fam = as_family(fam)
    return 8.0 * lame_quadrant_area(fam) / fp.angular_momentum


def simulate_central_force(
    fam: CurveFamily | float,
    fp: ForceParams,
    t_end: float,
    rel_tol: float = 1e-12,
) -> list[MotionState]:
    """Integrate Newton's equations under the Lame force law from ``(1, 0)``.

    The particle starts with velocity ``(0, h)``. Every accepted step is
    audited: the Lame residual must stay within 1e-6 and the angular momentum
    within 1e-9 relative of ``h``.

    Raises
    ------
    SimulationError
        On an invariant breach or step-size underflow.
    """
    fam = as_family(fam)
    _require_nondegenerate(fam)
    if not t_end >= 0.0:
        raise DomainError(f"t_end must be nonnegative, got {t_end!r}")
    n = fam.n
    h = fp.angular_momentum
    k = fp.force_constant / fp.mass
    p = 2.0 * n - 2.0

    def rhs(_t: float, y) -> list[float]:
        x, yy, vx, vy = y
        # (F/m) (x, y)/r with F = -C r**(4n-3) |xy/r**2|**(2n-2) collapses to this
        g = -k * abs(x * yy) ** p
        return [vx, vy, g * x, g * yy]

    states = []
    for t, (x, y, vx, vy) in dopri5(rhs, [1.0, 0.0, 0.0, h], 0.0, t_end, rel_tol):
        state = MotionState(t, PlanePoint(x, y), (vx, vy))
        residual = abs(lame_implicit(fam, state.position))
        drift = abs(state.angular_momentum - h) / h
        if residual > CURVE_RESIDUAL_LIMIT or drift > ANGULAR_MOMENTUM_LIMIT:
            raise SimulationError(
                f"invariant breach at t={t:.6g}: curve residual {residual:.3e} "
                f"(limit {CURVE_RESIDUAL_LIMIT:g}), angular momentum drift {drift:.3e} "
                f"(limit {ANGULAR_MOMENTUM_LIMIT:g})"
            )
        states.append(state)
    return states
