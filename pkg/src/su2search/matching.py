"""Phase matching: which ``phi`` pairs with a given ``theta`` for a certainty search.

Writing ``p = phi/2`` and ``a = alpha + u``, the matching condition is linear in
``(sin p, cos p)``::

    sin(p) * D(theta) - cos(p) * N(theta) = 0

    N = sin(theta/2) * (cos(beta0) cos(2 beta) + sin(beta0) sin(2 beta) cos(a))
    D = cos(beta0) cos(theta/2) - sin(beta0) sin(theta/2) sin(2 beta) sin(a)

so ``p = atan2(N, D) mod pi``. With ``phi`` restricted to (0, 2*pi) the matched
phase is unique, and the tan(theta/2) pole at ``theta = pi`` never appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateKernel, DomainError, NoMatchedPhase, NotMatched
from .kernel import DEGENERACY_TOL, kernel_angle_w
from .su2 import TWO_PI, InitialStateParams, PhasePair, SearchGeometry, wrap_angle

SOLVER_TOL = 1e-10
MATCHED_TOL = 1e-8


@dataclass(frozen=True)
class MatchingInputs:
    geom: SearchGeometry
    init: InitialStateParams
    alpha_plus_u: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha_plus_u", wrap_angle(self.geom.alpha + self.init.u))

    @classmethod
    def from_angles(cls, beta, beta0, alpha_plus_u=0.0, alpha=0.0, global_phase=0.0):
        """Build inputs from the three angles that matter plus an optional split of ``alpha + u``."""
        return cls(
            SearchGeometry(beta, alpha),
            InitialStateParams(beta0, u=alpha_plus_u - alpha, global_phase=global_phase),
        )

    @property
    def beta(self):
        return self.geom.beta

    @property
    def beta0(self):
        return self.init.beta0


def matching_residual(phases: PhasePair, inputs: MatchingInputs):
    """Left minus right side of the matching condition; zero iff matched."""
    phi, theta = phases.phi, phases.theta
    beta, beta0, a = inputs.beta, inputs.beta0, inputs.alpha_plus_u
    lhs = (
        math.sin((phi - theta) / 2) + 2 * math.cos(phi / 2) * math.sin(theta / 2) * math.sin(beta) ** 2
    ) * math.cos(beta0)
    rhs = math.sin(theta / 2) * math.sin(2 * beta) * math.cos(phi / 2 - a) * math.sin(beta0)
    return lhs - rhs


def _num_den(theta, inputs):
    beta, beta0, a = inputs.beta, inputs.beta0, inputs.alpha_plus_u
    half = np.asarray(theta, dtype=float) / 2
    s2b = math.sin(2 * beta)
    num = np.sin(half) * (math.cos(beta0) * math.cos(2 * beta) + math.sin(beta0) * s2b * math.cos(a))
    den = math.cos(beta0) * np.cos(half) - math.sin(beta0) * np.sin(half) * s2b * math.sin(a)
    return num, den


def matched_phi_array(thetas, inputs: MatchingInputs):
    """Vectorized matched phases; NaN where no phi in (0, 2*pi) matches."""
    num, den = _num_den(thetas, inputs)
    p = np.mod(np.arctan2(num, den), math.pi)
    phi = 2.0 * p
    bad = (phi <= 0.0) | (phi >= TWO_PI) | (np.hypot(num, den) < 1e-15)
    return np.where(bad, np.nan, phi)


def matched_phi(theta, inputs: MatchingInputs, hint=None):
    """The phase ``phi`` in (0, 2*pi) satisfying the matching condition at ``theta``.

    ``hint`` is returned when the condition holds for every phi (N = D = 0) and
    ignored otherwise.
    """
    theta = PhasePair(math.pi, theta).theta
    num, den = (float(v) for v in _num_den(theta, inputs))
    if math.hypot(num, den) < 1e-15:
        if hint is not None:
            return PhasePair(hint, theta).phi
        raise NoMatchedPhase(f"matching condition is indeterminate at theta={theta!r}")
    p = math.atan2(num, den)
    if p < 0.0:
        p += math.pi
    elif p >= math.pi:
        p -= math.pi
    phi = 2.0 * p
    if not 0.0 < phi < TWO_PI:
        raise NoMatchedPhase(f"matched phase at theta={theta!r} sits on the excluded endpoint phi=0", residuals=(0.0,))
    res = matching_residual(PhasePair(phi, theta), inputs)
    if abs(res) >= SOLVER_TOL:
        raise NoMatchedPhase(f"no phase matches theta={theta!r} (residual {res:.3e})", residuals=(res,))
    return phi


def tan_half_phi_rational(theta, inputs: MatchingInputs):
    """``tan(phi/2)`` from the rational (tangent) form of the matching condition.

    Singular at ``theta = pi``; used only to cross-check :func:`matched_phi`.
    """
    beta, a = inputs.beta, inputs.alpha_plus_u
    t0 = math.tan(inputs.beta0)
    th = math.tan(theta / 2)
    num = math.cos(2 * beta) + math.sin(2 * beta) * t0 * math.cos(a)
    den = 1.0 - t0 * th * math.sin(2 * beta) * math.sin(a)
    return th * num / den


def hoyer_phi(theta, beta):
    """Phase obeying ``tan(phi/2) = tan(theta/2) cos(2 beta)``, continuous through ``theta = pi``."""
    theta = PhasePair(math.pi, theta).theta
    phi = 2.0 * math.atan2(math.sin(theta / 2) * math.cos(2 * beta), math.cos(theta / 2))
    return wrap_angle(phi)


def hoyer_point(inputs: MatchingInputs):
    """The matched pair with ``cos(phi/2 - alpha - u) = 0``, or None if phi would be 0."""
    phi = wrap_angle(2 * inputs.alpha_plus_u + math.pi)
    if phi == 0.0:
        return None
    theta = 2.0 * math.atan2(math.sin(phi / 2), math.cos(phi / 2) * math.cos(2 * inputs.beta))
    if not 0.0 < theta < TWO_PI:
        return None
    return PhasePair(phi, theta)


def _gamma(phi, inputs):
    arg = math.sin(inputs.beta0) * math.sin(phi / 2 - inputs.alpha_plus_u)
    return math.asin(min(1.0, max(-1.0, arg)))


def iteration_function_f(phases: PhasePair, inputs: MatchingInputs, winding=0):
    """Real-valued iteration count at which a matched search reaches the marked state.

    Certainty holds when ``m w + gamma = pi/2 + n pi`` with
    ``gamma = asin(sin(beta0) sin(phi/2 - alpha - u))``. ``winding`` selects ``n``;
    ``n = 0`` is the first root and the usual iteration function. Later roots
    matter when ``w > pi/2`` along the whole matched curve.
    """
    if winding < 0:
        raise DomainError(f"winding must be non-negative, got {winding}")
    res = matching_residual(phases, inputs)
    if abs(res) >= MATCHED_TOL:
        raise NotMatched(f"phases are not matched (residual {res:.3e})", residual=res)
    w = kernel_angle_w(phases, inputs.beta)
    if w <= DEGENERACY_TOL:
        raise DegenerateKernel(f"w = {w:.3e} is below {DEGENERACY_TOL:g}", sin_w=math.sin(w))
    return (math.pi / 2 + winding * math.pi - _gamma(phases.phi, inputs)) / w


def f_array(thetas, phis, inputs: MatchingInputs, winding=0):
    """Vectorized :func:`iteration_function_f` without the matched/degenerate checks.

    Returns ``(f, w)``; entries with NaN ``phi`` or ``w <= 1e-10`` are NaN in ``f``.
    """
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    sb = math.sin(inputs.beta)
    s = np.sin((phis - thetas) / 4) ** 2 + np.sin(phis / 2) * np.sin(thetas / 2) * sb * sb
    s = np.clip(s, 0.0, 1.0)
    w = 2.0 * np.arctan2(np.sqrt(s), np.sqrt(1.0 - s))
    gamma = np.arcsin(np.clip(math.sin(inputs.beta0) * np.sin(phis / 2 - inputs.alpha_plus_u), -1.0, 1.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        f = (math.pi / 2 + winding * math.pi - gamma) / w
    f = np.where(w > DEGENERACY_TOL, f, np.nan)
    return f, w


def special_case_f_equal_phases(phi, beta):
    """Iteration function on the ``phi = theta``, ``beta = beta0``, ``alpha + u = 0`` family."""
    phi = PhasePair(phi, math.pi).phi
    if not 0.0 < beta < math.pi / 2:
        raise DomainError(f"beta must lie in (0, pi/2), got {beta!r}")
    q = math.sin(phi / 2) * math.sin(beta)
    if not -1.0 <= q <= 1.0:
        raise DomainError(f"arcsin argument {q!r} outside [-1, 1]")
    den = 2 * math.asin(q)
    if den < 1e-12:
        raise DomainError(f"denominator {den:.3e} too small")
    return (math.pi / 2 - math.asin(q)) / den
