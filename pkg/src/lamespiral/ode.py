"""Dormand-Prince 5(4) integrator with proportional-integral step control."""

from __future__ import annotations

import math
from typing import Callable, Iterator, Sequence

from lamespiral.errors import SimulationError

Vector = list[float]

# Butcher tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
# fifth-order minus embedded fourth-order weights
_E = (
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

_SAFETY = 0.9
_BETA = 0.04
_EXPO = 0.2 - 0.75 * _BETA
_FAC_MIN = 0.2
_FAC_MAX = 10.0


def dopri5(
    rhs: Callable[[float, Sequence[float]], Vector],
    y0: Sequence[float],
    t0: float,
    t_end: float,
    rel_tol: float,
    abs_tol: float | None = None,
    h0: float | None = None,
) -> Iterator[tuple[float, Vector]]:
    """Yield ``(t, y)`` at the initial point and after every accepted step.

    The last step is shortened to land exactly on ``t_end``. ``abs_tol``
    defaults to ``rel_tol * 1e-2``.

    Raises
    ------
    SimulationError
        If the step size underflows.
    """
    if abs_tol is None:
        abs_tol = rel_tol * 1e-2
    dim = len(y0)
    t = float(t0)
    y = [float(v) for v in y0]
    span = t_end - t0
    h = h0 if h0 is not None else 1e-3 * span
    err_old = 1e-4
    yield t, list(y)
    k1 = rhs(t, y)
    while t < t_end:
        if h < 1e-14 * max(1.0, abs(t)):
            raise SimulationError(f"step size underflow at t={t!r} (h={h:.3e})")
        last = t + h >= t_end
        if last:
            h = t_end - t
        ks = [k1]
        for stage in range(1, 7):
            coeffs = _A[stage]
            ys = [y[i] + h * sum(a * k[i] for a, k in zip(coeffs, ks)) for i in range(dim)]
            ks.append(rhs(t + _C[stage] * h, ys))
        y_new = ys  # the seventh stage is evaluated at the fifth-order solution (FSAL)
        err_sq = 0.0
        for i in range(dim):
            delta = h * sum(e * k[i] for e, k in zip(_E, ks))
            scale = abs_tol + rel_tol * max(abs(y[i]), abs(y_new[i]))
            err_sq += (delta / scale) ** 2
        err = math.sqrt(err_sq / dim)
        if err <= 1.0:
            t = t_end if last else t + h
            y = y_new
            k1 = ks[6]
            yield t, list(y)
            fac = err**_EXPO / err_old**_BETA / _SAFETY if err > 0.0 else 1.0 / _FAC_MAX
            fac = min(1.0 / _FAC_MIN, max(1.0 / _FAC_MAX, fac))
            h /= fac
            err_old = max(err, 1e-4)
        else:
            fac = min(1.0 / _FAC_MIN, err**_EXPO / _SAFETY)
            h /= fac
