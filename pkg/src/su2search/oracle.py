"""Brute-force certainty oracle on the two-dimensional kernel.

Everything here is measured by repeated multiplication (``kernel_power_iterative``
or its batched twin) on the explicitly multiplied kernel ``-G_eta @ G_tau``,
never by the closed-form spectrum or the iteration function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from . import _backend
from .kernel import build_kernel_product, kernel_power_iterative
from .matching import MatchingInputs, matched_phi_array
from .su2 import TWO_PI, PhasePair

SUCCESS_TOL = 1e-9


def oracle_amplitudes(phases: PhasePair, inputs: MatchingInputs, m):
    g = build_kernel_product(phases, inputs.geom)
    return kernel_power_iterative(g, m) @ inputs.init.state()


def oracle_success(phases: PhasePair, inputs: MatchingInputs, m):
    """``(|<tau|G^m|s>|^2, arg <tau|G^m|s>)`` measured by iteration."""
    amp = oracle_amplitudes(phases, inputs, m)[0]
    return float(abs(amp) ** 2), float(np.angle(amp))


def _batch_kernels(phis, thetas, inputs):
    v = inputs.geom.eta_vector()
    proj = np.outer(v, v.conj())
    e_th = np.exp(1j * np.asarray(thetas)) - 1.0
    g_eta = np.eye(2)[None, :, :] + e_th[:, None, None] * proj[None, :, :]
    g_tau = np.zeros((len(phis), 2, 2), dtype=np.complex128)
    g_tau[:, 0, 0] = np.exp(1j * np.asarray(phis))
    g_tau[:, 1, 1] = 1.0
    return -(g_eta @ g_tau)


def _batch_failure(phis, thetas, inputs, m):
    gs = _batch_kernels(phis, thetas, inputs)
    vs = np.broadcast_to(inputs.init.state(), (len(phis), 2))
    out = _backend.apply_power2_batch(gs, vs, m)
    return np.abs(out[:, 1]) ** 2


def _scalar_failure(theta, inputs, m):
    phi = matched_phi_array(np.array([theta]), inputs)[0]
    if not math.isfinite(phi):
        return 1.0
    return float(abs(oracle_amplitudes(PhasePair(phi, theta), inputs, m)[1]) ** 2)


@dataclass(frozen=True)
class OracleResult:
    m: int | None
    success: float
    phases: PhasePair | None


def oracle_best_success(inputs: MatchingInputs, m, grid=2000):
    """Largest iterated success probability over matched pairs for a fixed ``m``."""
    thetas = (np.arange(grid) + 0.5) * (TWO_PI / grid)
    phis = matched_phi_array(thetas, inputs)
    ok = np.isfinite(phis)
    fail = np.full(grid, np.inf)
    fail[ok] = _batch_failure(phis[ok], thetas[ok], inputs, m)
    best_fail, best_theta = math.inf, None
    for j in np.argsort(fail)[: min(grid, 40)]:
        if not math.isfinite(fail[j]):
            continue
        lo = thetas[j - 1] if j > 0 else thetas[0] / 2
        hi = thetas[j + 1] if j < grid - 1 else (thetas[-1] + TWO_PI) / 2
        res = minimize_scalar(lambda t: _scalar_failure(t, inputs, m), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13})
        cand = (res.fun, float(res.x)) if res.fun < fail[j] else (fail[j], float(thetas[j]))
        if cand[0] < best_fail:
            best_fail, best_theta = cand
    if best_theta is None:
        return OracleResult(m, 0.0, None)
    phi = float(matched_phi_array(np.array([best_theta]), inputs)[0])
    pair = PhasePair(phi, best_theta)
    return OracleResult(m, oracle_success(pair, inputs, m)[0], pair)


def oracle_minimal_iterations(inputs: MatchingInputs, m_max=200, grid=2000):
    """Scan ``m = 0, 1, 2, ...`` and return the first count reaching success ``>= 1 - 1e-9``."""
    s0 = abs(inputs.init.state()[0]) ** 2
    if s0 >= 1.0 - SUCCESS_TOL:
        return OracleResult(0, float(s0), None)
    for m in range(1, m_max + 1):
        res = oracle_best_success(inputs, m, grid)
        if res.success >= 1.0 - SUCCESS_TOL:
            return res
    return OracleResult(None, 0.0, None)


def unconstrained_best_success(inputs: MatchingInputs, m, grid=181):
    """Largest iterated success over all ``(phi, theta)`` pairs, matched or not."""
    axis = (np.arange(grid) + 0.5) * (TWO_PI / grid)
    phis, thetas = (a.ravel() for a in np.meshgrid(axis, axis, indexing="ij"))
    gs = _batch_kernels(phis, thetas, inputs)
    vs = np.broadcast_to(inputs.init.state(), (len(phis), 2))
    succ = np.abs(_backend.apply_power2_batch(gs, vs, m)[:, 0]) ** 2

    def neg(x):
        phi, theta = x
        if not (0.0 < phi < TWO_PI and 0.0 < theta < TWO_PI):
            return 0.0
        return -oracle_success(PhasePair(phi, theta), inputs, m)[0]

    best = float(succ.max())
    for j in np.argsort(succ)[-8:]:
        res = minimize(neg, x0=[phis[j], thetas[j]], method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
        best = max(best, -float(res.fun))
    return best


def eigenphase_half_gap(phases: PhasePair, inputs: MatchingInputs):
    """Half the gap between numerically computed eigenphases: ``min(w, pi - w)``."""
    lam = np.linalg.eigvals(build_kernel_product(phases, inputs.geom))
    gap = abs(float(np.angle(lam[0] * np.conj(lam[1]))))
    return gap / 2
