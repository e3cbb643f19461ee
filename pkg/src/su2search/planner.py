"""Turn matched phases into an executable certainty search.

The planner works along the matched curve ``theta -> phi(theta)``. On a
``1e-3`` grid it locates where the iteration function crosses an integer and
refines each crossing by bisection. The smallest integer reachable over all
root indices (see :func:`~su2search.matching.iteration_function_f`) is the
optimal count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect, minimize_scalar

from .errors import DegenerateKernel, DomainError, NoSolution, NotCertain, NotMatched, SearchError
from .kernel import kernel_angle_w, kernel_power_closed, kernel_power_iterative, build_kernel
from .matching import (
    MATCHED_TOL,
    SOLVER_TOL,
    MatchingInputs,
    _gamma,
    f_array,
    hoyer_point,
    iteration_function_f,
    matched_phi,
    matched_phi_array,
    matching_residual,
)
from .su2 import TWO_PI, PhasePair, wrap_angle

INTEGER_TOL = 1e-9
CERTAIN_TOL = 1e-6
GRID_RESOLUTION = 1e-3
BISECT_XTOL = 1e-12
M_MAX = 10**6


def iteration_count(f, tol=INTEGER_TOL):
    """Smallest integer ``>= f``; values within ``tol`` of an integer map to it."""
    f = float(f)
    if not math.isfinite(f) or f <= 0.0:
        raise DomainError(f"f must be positive and finite, got {f!r}")
    nearest = round(f)
    if abs(f - nearest) <= tol:
        return int(nearest)
    return int(math.ceil(f))


def _require_matched(phases, inputs):
    res = matching_residual(phases, inputs)
    if abs(res) >= MATCHED_TOL:
        raise NotMatched(f"phases are not matched (residual {res:.3e})", residual=res)


def certainty_residual(m, phases: PhasePair, inputs: MatchingInputs):
    """``cos(m w + gamma)``: zero exactly when ``m`` iterations reach the marked state."""
    _require_matched(phases, inputs)
    w = kernel_angle_w(phases, inputs.beta)
    return math.cos(m * w + _gamma(phases.phi, inputs))


def final_phase(m, phases: PhasePair, inputs: MatchingInputs):
    """Phase ``delta`` of the final state ``exp(i delta)|tau>`` after a certain search.

    Includes the start state's global phase. For later roots
    (``m w + gamma = pi/2 + n pi``) the amplitude picks up an extra ``n pi``.
    """
    r = certainty_residual(m, phases, inputs)
    if abs(r) > CERTAIN_TOL:
        raise NotCertain(f"{m} iterations do not reach the marked state (residual {r:.3e})", residual=r)
    w = kernel_angle_w(phases, inputs.beta)
    gamma = _gamma(phases.phi, inputs)
    n = round((m * w + gamma - math.pi / 2) / math.pi)
    psi = phases.phi / 2 - inputs.alpha_plus_u
    # arctan(cot psi) on the branch that matches the amplitude, i.e. pi/2 - psi
    omega = math.atan2(math.cos(psi), math.sin(psi))
    delta = m * (math.pi + (phases.phi + phases.theta) / 2) + omega + n * math.pi
    return wrap_angle(delta + inputs.init.global_phase)


def optimal_iterations(inputs: MatchingInputs):
    """Iteration count at ``phi = theta = pi``: ceil((pi/2 - asin(sin beta0 cos(alpha+u))) / (2 beta))."""
    num = math.pi / 2 - math.asin(math.sin(inputs.beta0) * math.cos(inputs.alpha_plus_u))
    value = num / (2 * inputs.beta)
    if value <= INTEGER_TOL:
        return 0
    return iteration_count(value)


def optimal_iterations_value(inputs: MatchingInputs):
    num = math.pi / 2 - math.asin(math.sin(inputs.beta0) * math.cos(inputs.alpha_plus_u))
    return num / (2 * inputs.beta)


def closed_form_optimal(beta):
    """``(m_op, phi_op)`` for the ``beta = beta0``, ``alpha + u = 0`` family with ``phi = theta``."""
    if not 0.0 < beta < math.pi / 2:
        raise DomainError(f"beta must lie in (0, pi/2), got {beta!r}")
    m_op = iteration_count((math.pi / 2 - beta) / (2 * beta))
    arg = math.sin(math.pi / (4 * m_op + 2)) / math.sin(beta)
    if arg > 1.0 + 1e-12:
        raise DomainError(f"arcsin argument {arg!r} exceeds 1")
    return m_op, 2 * math.asin(min(arg, 1.0))


# --- curve machinery -------------------------------------------------------


@dataclass(frozen=True)
class _Curve:
    thetas: np.ndarray
    phis: np.ndarray
    links: np.ndarray  # links[j]: grid points j and j+1 lie on one continuous branch


def _matched_curve(inputs, resolution=GRID_RESOLUTION):
    k = int(math.ceil(TWO_PI / resolution))
    thetas = (np.arange(k) + 0.5) * (TWO_PI / k)
    phis = matched_phi_array(thetas, inputs)
    with np.errstate(invalid="ignore"):
        links = np.isfinite(phis[:-1]) & np.isfinite(phis[1:]) & (np.abs(np.diff(phis)) < math.pi)
    return _Curve(thetas, phis, links)


def _f_scalar(theta, inputs, winding):
    phi = matched_phi_array(np.array([theta]), inputs)
    f, _ = f_array(np.array([theta]), phi, inputs, winding)
    return float(f[0])


def _segments(curve, f):
    """Index ranges [start, stop) of grid runs where f is finite and the curve continuous."""
    ok = np.isfinite(f)
    linked = curve.links & ok[:-1] & ok[1:]
    segs = []
    j, n = 0, len(f)
    while j < n:
        if not ok[j]:
            j += 1
            continue
        start = j
        while j < n - 1 and linked[j]:
            j += 1
        segs.append((start, j + 1))
        j += 1
    return segs


def _refine_extremum(curve, f, j, seg, inputs, winding, sign):
    """Refine a grid-local extremum of f at index j (sign=+1 minimum, -1 maximum)."""
    lo = curve.thetas[max(j - 1, seg[0])]
    hi = curve.thetas[min(j + 1, seg[1] - 1)]
    if hi <= lo:
        return float(curve.thetas[j]), float(f[j])
    res = minimize_scalar(
        lambda t: sign * _f_scalar(t, inputs, winding),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-13},
    )
    val = sign * res.fun
    if math.isfinite(val) and sign * val < sign * f[j]:
        return float(res.x), val
    return float(curve.thetas[j]), float(f[j])


def _local_extrema(f, start, stop, sign):
    out = []
    for j in range(start, stop):
        left = f[j - 1] if j > start else math.inf * sign
        right = f[j + 1] if j < stop - 1 else math.inf * sign
        if sign * f[j] <= sign * left and sign * f[j] <= sign * right:
            out.append(j)
    return out


def _segment_range(curve, f, seg, inputs, winding):
    start, stop = seg
    lows = [_refine_extremum(curve, f, j, seg, inputs, winding, +1)[1] for j in _local_extrema(f, start, stop, +1)]
    highs = [_refine_extremum(curve, f, j, seg, inputs, winding, -1)[1] for j in _local_extrema(f, start, stop, -1)]
    return min(lows), max(highs)


def _validated(theta, inputs, m, winding):
    try:
        phi = matched_phi(theta, inputs)
        pair = PhasePair(phi, theta)
        if abs(matching_residual(pair, inputs)) >= SOLVER_TOL:
            return None
        if abs(iteration_function_f(pair, inputs, winding) - m) >= INTEGER_TOL:
            return None
    except SearchError:
        return None
    return pair


def adjust_phases(m, inputs: MatchingInputs, winding=0, resolution=GRID_RESOLUTION):
    """Matched phase pairs at which the iteration function equals the integer ``m``.

    Returns every solution found on the matched curve, sorted by ``theta``. In
    the symmetric case ``alpha + u = 0`` there is one on each side of ``pi``.
    """
    m = int(m)
    if m < 1:
        raise DomainError(f"m must be a positive integer, got {m}")
    curve = _matched_curve(inputs, resolution)
    f, _ = f_array(curve.thetas, curve.phis, inputs, winding)
    h = lambda t: _f_scalar(t, inputs, winding) - m  # noqa: E731
    thetas = []
    for start, stop in _segments(curve, f):
        d = f[start:stop] - m
        for j in range(stop - start - 1):
            if d[j] == 0.0:
                thetas.append(float(curve.thetas[start + j]))
            elif d[j] * d[j + 1] < 0.0:
                a, b = curve.thetas[start + j], curve.thetas[start + j + 1]
                thetas.append(bisect(h, a, b, xtol=BISECT_XTOL, maxiter=200))
        # tangential touches and crossings hidden between grid points
        for sign in (+1, -1):
            for j in _local_extrema(f, start, stop, sign):
                if sign * (f[j] - m) <= 0.0 or sign * (f[j] - m) > 0.05:
                    continue
                x, val = _refine_extremum(curve, f, j, (start, stop), inputs, winding, sign)
                if abs(val - m) < INTEGER_TOL:
                    thetas.append(x)
                elif sign * (val - m) < 0.0:
                    lo = curve.thetas[max(start, j - 1)]
                    hi = curve.thetas[min(stop - 1, j + 1)]
                    if h(lo) * h(x) < 0.0:
                        thetas.append(bisect(h, lo, x, xtol=BISECT_XTOL, maxiter=200))
                    if h(x) * h(hi) < 0.0:
                        thetas.append(bisect(h, x, hi, xtol=BISECT_XTOL, maxiter=200))
    pairs = []
    for t in sorted(thetas):
        pair = _validated(t, inputs, m, winding)
        if pair is not None and all(abs(pair.theta - p.theta) > 1e-9 for p in pairs):
            pairs.append(pair)
    if not pairs:
        lows = [_segment_range(curve, f, seg, inputs, winding)[0] for seg in _segments(curve, f)]
        min_f = min(lows) if lows else None
        raise NoSolution(f"no matched phases give f = {m} (min f on the curve {min_f})", min_f=min_f)
    return pairs


def minimal_iterations(inputs: MatchingInputs, resolution=GRID_RESOLUTION, m_max=M_MAX):
    """Smallest integer ``m >= 1`` reachable on the matched curve, with its root index.

    Returns ``(m, winding)``.
    """
    curve = _matched_curve(inputs, resolution)
    best = None
    winding = 0
    while best is None or winding < best[0]:
        f, _ = f_array(curve.thetas, curve.phis, inputs, winding)
        for seg in _segments(curve, f):
            lo, hi = _segment_range(curve, f, seg, inputs, winding)
            cand = max(1, iteration_count(lo) if lo > 0 else 1)
            if cand <= hi + INTEGER_TOL and (best is None or cand < best[0]):
                best = (cand, winding)
        winding += 1
        if winding > m_max:
            break
    if best is None or best[0] > m_max:
        raise NoSolution("no integer iteration count found on the matched curve")
    return best


# --- plans -----------------------------------------------------------------


@dataclass(frozen=True)
class SearchPlan:
    phases: PhasePair
    m: int
    delta: float
    f_value: float
    predicted_success: float
    exact: bool
    winding: int = 0
    alternatives: tuple = field(default=())


def _marked_amplitude(phases, inputs, m):
    try:
        g_m = kernel_power_closed(phases, inputs.geom, m)
    except DegenerateKernel:
        g_m = kernel_power_iterative(build_kernel(phases, inputs.geom), m)
    return complex((g_m @ inputs.init.state())[0])


def _plan_from_pair(pair, m, inputs, winding, alternatives=()):
    f_value = iteration_function_f(pair, inputs, winding)
    amp = _marked_amplitude(pair, inputs, m)
    exact = abs(f_value - m) < INTEGER_TOL
    delta = final_phase(m, pair, inputs) if exact else wrap_angle(math.atan2(amp.imag, amp.real))
    return SearchPlan(
        phases=pair,
        m=m,
        delta=delta,
        f_value=f_value,
        predicted_success=min(1.0, abs(amp) ** 2),
        exact=exact,
        winding=winding,
        alternatives=tuple(alternatives),
    )


def plan_search(inputs: MatchingInputs, theta=None):
    """Plan a search.

    With ``theta`` given, pair it with its matched phase and run ``ceil(f)``
    iterations (success may fall short of 1). Without it, find the minimal
    integer count and adjust the phases so that it is exact.
    """
    if theta is not None:
        phi = matched_phi(theta, inputs)
        pair = PhasePair(phi, theta)
        m = iteration_count(iteration_function_f(pair, inputs))
        return _plan_from_pair(pair, m, inputs, 0)

    if math.cos(inputs.beta0) <= 1e-12:
        pair = hoyer_point(inputs) or PhasePair(math.pi, math.pi)
        amp = _marked_amplitude(pair, inputs, 0)
        return SearchPlan(pair, 0, inputs.init.global_phase, 0.0, abs(amp) ** 2, True, 0)

    m, winding = minimal_iterations(inputs)
    pairs = adjust_phases(m, inputs, winding)
    chosen = min(pairs, key=lambda p: (abs(p.theta - math.pi), p.theta))
    return _plan_from_pair(chosen, m, inputs, winding, alternatives=[p for p in pairs if p != chosen])
