from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st

from lamespiral.curves import lame_implicit, lame_polar_radius
from lamespiral.dynamics import (
    UNIFORM_START,
    ForceParams,
    HalfLeaf,
    binet_residual,
    boundary_crossings,
    central_force_explicit,
    central_force_general,
    corresponding_spiral_point,
    cycle_schedule,
    dual_motion,
    half_leaf_sequence,
    lame_kepler_theta,
    lame_swept_area,
    octant_period,
    orbit_period,
    simulate_central_force,
    spiral_speed,
    spiral_uniform_position,
)
from lamespiral.errors import DomainError
from lamespiral.quadrature import lame_sector_area_polar, spiral_arc_length, spiral_arc_length_by_angle
from lamespiral.specfun import closed_forms, varpi

FP = ForceParams(1.0, 1.0, 1.0)


def test_force_params_validation():
    with pytest.raises(DomainError):
        ForceParams(0.0, 1.0, 1.0)
    fp = ForceParams.for_lame_orbit(3, mass=2.0, angular_momentum=0.5)
    assert math.isclose(fp.force_constant, 5 * 2.0 * 0.25)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_kepler_theta_examples(n):
    t_oct = octant_period(n, FP)
    assert math.isclose(t_oct, closed_forms(n).lame_quadrant_area, rel_tol=1e-13)
    assert lame_kepler_theta(n, 0.0, FP) == 0.0
    assert math.isclose(lame_kepler_theta(n, t_oct, FP), math.pi / 4, rel_tol=1e-14)
    assert math.isclose(lame_kepler_theta(n, 8 * t_oct, FP), 2 * math.pi, rel_tol=1e-14)


def test_kepler_theta_needs_integer_exponent():
    with pytest.raises(DomainError):
        lame_kepler_theta(2.5, 1.0, FP)


@given(st.sampled_from([2, 3, 5]), st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=30, deadline=None)
def test_kepler_law_of_areas(n, frac):
    # the area swept up to time t equals h t / 2, checked with an independent polar quadrature
    t = frac * 3 * octant_period(n, FP)
    theta = lame_kepler_theta(n, t, FP)
    swept = lame_sector_area_polar(n, 0.0, theta)
    assert math.isclose(swept, 0.5 * t, rel_tol=1e-12, abs_tol=1e-15)


def test_lame_swept_area_over_a_turn():
    assert math.isclose(lame_swept_area(3, 2 * math.pi), 4 * closed_forms(3).lame_quadrant_area, rel_tol=1e-14)
    with pytest.raises(DomainError):
        lame_swept_area(3, -0.1)


def test_half_leaf_traversal_closes():
    for n in (1, 2, 3, 5):
        seq = half_leaf_sequence(n, UNIFORM_START, 2 * n + 1)
        assert seq[-1] == UNIFORM_START
        centers = {leaf.center for leaf in seq}
        assert len(centers) == n  # every leaf is visited


def test_half_leaf_successor_passes_through_origin():
    # leaving the leaf at 0 through its edge pi/(2n) enters the leaf whose edge is that ray turned by pi
    n = 3
    nxt = HalfLeaf(0, 1, False).successor(n)
    assert nxt.outward
    assert (nxt.center + nxt.side) % (4 * n) == (1 + 2 * n) % (4 * n)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_spiral_uniform_position_examples(n):
    big_k = 0.5 * varpi(2 * n)
    p = spiral_uniform_position(n, 0.0)
    assert (p.r, p.theta) == (1.0, 0.0)
    p = spiral_uniform_position(n, big_k)
    assert p.r == 0.0 and math.isclose(p.theta, math.pi / (2 * n), rel_tol=1e-15)
    p = spiral_uniform_position(n, spiral_arc_length(n, 0.0, 1.0))
    assert p.r == 0.0 and math.isclose(p.theta, math.pi / (2 * n), rel_tol=1e-15)
    p = spiral_uniform_position(n, n * varpi(2 * n))
    assert math.isclose(p.r, 1.0, rel_tol=1e-12)
    assert math.isclose(math.cos(p.theta), 1.0, rel_tol=1e-12)


@given(st.sampled_from([2, 3, 4]), st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=30, deadline=None)
def test_spiral_uniform_position_matches_arc_length(n, frac):
    big_k = spiral_arc_length(n, 0.0, 1.0)
    s = frac * big_k
    p = spiral_uniform_position(n, s)
    # r rounds to 1 near the tip, so measure by angle there and by radius near the origin
    if p.theta < 0.5 * math.pi / (2 * n):
        from_tip = spiral_arc_length_by_angle(n, 0.0, p.theta)
    else:
        from_tip = big_k - spiral_arc_length(n, 0.0, p.r)
    assert math.isclose(from_tip, s, rel_tol=1e-11, abs_tol=1e-14)
    assert math.isclose(p.r**n, math.cos(n * p.theta), abs_tol=1e-12)


def test_corresponding_spiral_point_examples():
    p = corresponding_spiral_point(3, 0.0)
    assert p.r == 0.0 and math.isclose(p.theta, math.pi / 6)
    p = corresponding_spiral_point(3, math.pi / 4)
    assert (p.r, p.theta) == (1.0, 0.0)
    p = corresponding_spiral_point(2, math.pi / 8)
    assert math.isclose(p.r, 1 / math.sqrt(3), rel_tol=1e-14)
    assert math.isclose(p.theta, 0.5 * math.acos(1 / 3), rel_tol=1e-14)


def test_dual_motion_frames():
    n = 3
    fp = ForceParams.for_lame_orbit(n)
    t_oct = octant_period(n, fp)
    frames = dual_motion(n, fp, t_oct, 2)
    first, last = frames
    assert first.lame_point.r == 1.0 and first.lame_point.theta == 0.0
    assert first.spiral_point.r == 0.0
    assert math.isclose(last.lame_point.theta, math.pi / 4, rel_tol=1e-14)
    assert math.isclose(last.spiral_point.r, 1.0, rel_tol=1e-12)
    assert math.isclose(math.cos(last.spiral_point.theta), 1.0, rel_tol=1e-12)
    assert (last.octant_index, last.halfleaf_index) == (1, 1)


def test_dual_motion_ratio_on_every_frame():
    n = 2
    fp = ForceParams.for_lame_orbit(n)
    frames = dual_motion(n, fp, 8 * octant_period(n, fp), 33)
    for fr in frames:
        assert math.isclose(fr.traversed_length, 2 ** 1.5 * fr.swept_area, rel_tol=1e-10, abs_tol=1e-12)
        assert math.isclose(fr.lame_point.r, lame_polar_radius(n, fr.lame_point.theta), rel_tol=1e-15)


def test_spiral_speed_relation():
    fp = ForceParams(1.0, 0.7, 1.0)
    assert math.isclose(spiral_speed(3, fp), 2 ** (4 / 3) * 0.35, rel_tol=1e-15)


def test_boundary_crossings_simultaneous():
    fp = ForceParams.for_lame_orbit(4)
    crossings = boundary_crossings(4, fp)
    assert len(crossings) == 8
    for a, b in crossings:
        assert math.isclose(a, b, rel_tol=1e-12)


def test_cycle_schedule_lengths():
    assert len(cycle_schedule(3)) == 24
    assert [str(p) for p in cycle_schedule(2)] == [
        "(P1,Q1)", "(P2,Q2)", "(P3,Q3)", "(P4,Q4)", "(P5,Q1)", "(P6,Q2)", "(P7,Q3)", "(P8,Q4)",
    ]
    assert [p.halfleaf_index for p in cycle_schedule(1)] == [1, 2] * 4


def test_general_force_examples():
    fp = ForceParams(1.0, 1.0, 1.0)
    assert math.isclose(
        central_force_general(2, 2**0.25, math.pi / 4, fp), -(2**1.25) / 4, rel_tol=1e-15
    )
    assert central_force_general(4, 0.8, 0.0, fp) == 0.0
    assert central_force_general(3, 1.0, 0.0, fp) == 0.0
    with pytest.raises(DomainError):
        central_force_general(1, 1.0, 0.5, fp)


def test_explicit_force_examples():
    assert central_force_explicit(3, 1.0, 1.0) == 0.0
    assert math.isclose(central_force_explicit(2, 2**0.25, 1.0), -(2**0.25), rel_tol=1e-15)
    with pytest.raises(DomainError):
        central_force_explicit(6, 1.0, 1.0)


@pytest.mark.parametrize("n", [2, 3])
def test_binet_examples(n):
    assert binet_residual(n, math.pi / 4) <= 1e-8
    assert binet_residual(n, 0.7) <= 1e-8
    assert binet_residual(n, 0.0) <= 1e-8


@pytest.mark.parametrize("n", [2, 3])
def test_simulation_stays_on_curve(n):
    fp = ForceParams.for_lame_orbit(n)
    states = simulate_central_force(n, fp, 0.5 * orbit_period(n, fp))
    s0 = states[0]
    assert (s0.time, s0.position.x, s0.position.y, s0.velocity) == (0.0, 1.0, 0.0, (0.0, 1.0))
    worst = max(abs(lame_implicit(n, s.position)) for s in states)
    assert worst <= 1e-6
    assert all(math.isclose(s.angular_momentum, 1.0, rel_tol=1e-9) for s in states)
    # half a period lands on the opposite side
    assert math.isclose(states[-1].position.x, -1.0, abs_tol=1e-6)


def test_uncorrected_n5_force_is_not_proportional():
    fp = ForceParams(1.0, 1.0, 1.0)
    ratios = []
    for theta in (0.2, 0.5, 0.7):
        r = lame_polar_radius(5, theta)
        ratios.append(central_force_general(5, r, theta, fp) / central_force_explicit(5, r, 1.0, uncorrected=True))
    assert not math.isclose(ratios[0], ratios[-1], rel_tol=1e-3)
    r = lame_polar_radius(5, 0.5)
    assert math.isclose(central_force_general(5, r, 0.5, fp) / central_force_explicit(5, r, 1.0), 1e-4, rel_tol=1e-12)
