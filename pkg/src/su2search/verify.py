"""Randomized property checks behind ``su2search verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateKernel, NoMatchedPhase
from .kernel import (
    build_kernel,
    build_kernel_product,
    eigen_decompose,
    kernel_power_closed,
    kernel_power_iterative,
)
from .matching import MatchingInputs, matched_phi, matching_residual, tan_half_phi_rational
from .ndim import build_random_unitary, build_walsh_hadamard, compare_with_2d, run_search
from .oracle import oracle_success
from .planner import plan_search
from .su2 import TWO_PI, PhasePair, SearchGeometry, unitarity_error

SUITES = ("kernel", "matching", "planner", "ndim")
POWERS = (1, 2, 5, 10, 100, 1000)


@dataclass(frozen=True)
class CheckResult:
    name: str
    worst: float
    tol: float

    @property
    def passed(self):
        return math.isfinite(self.worst) and self.worst <= self.tol


def _phase(rng):
    return float(rng.uniform(1e-3, TWO_PI - 1e-3))


def check_kernel(samples, rng, scale=1.0):
    unit = resid = power = prod = det = 0.0
    for _ in range(samples):
        phases = PhasePair(_phase(rng), _phase(rng))
        geom = SearchGeometry(float(rng.uniform(1e-3, math.pi / 2 - 1e-3)), float(rng.uniform(0, TWO_PI)))
        g = build_kernel(phases, geom)
        unit = max(unit, unitarity_error(g))
        prod = max(prod, float(np.max(np.abs(g - build_kernel_product(phases, geom)))))
        det = max(det, abs(np.linalg.det(g) - np.exp(1j * (phases.phi + phases.theta))))
        try:
            spec = eigen_decompose(phases, geom)
        except DegenerateKernel:
            continue
        for lam, vec in ((spec.lambda1, spec.g1), (spec.lambda2, spec.g2)):
            resid = max(resid, float(np.linalg.norm(g @ vec - lam * vec)))
        for m in POWERS:
            err = np.max(np.abs(kernel_power_closed(phases, geom, m) - kernel_power_iterative(g, m)))
            power = max(power, float(err) / max(1e-9, m * 1e-13))
    return [
        CheckResult("kernel.unitarity", unit, 1e-12 * scale),
        CheckResult("kernel.direct_vs_product", prod, 1e-14 * scale),
        CheckResult("kernel.determinant", det, 1e-12 * scale),
        CheckResult("kernel.eigen_residual", resid, 1e-11 * scale),
        CheckResult("kernel.power_equivalence_ratio", power, 1.0 * scale),
    ]


def _random_inputs(rng, beta_range=(1e-3, math.pi / 2 - 1e-3)):
    return MatchingInputs.from_angles(
        float(rng.uniform(*beta_range)),
        float(rng.uniform(0.0, math.pi / 2)),
        float(rng.uniform(0.0, TWO_PI)),
        alpha=float(rng.uniform(0.0, TWO_PI)),
    )


def check_matching(samples, rng, scale=1.0):
    resid = recover = rational = 0.0
    thetas = np.linspace(0.01, TWO_PI - 0.01, 64)
    for _ in range(samples):
        inputs = _random_inputs(rng)
        for theta in thetas:
            try:
                phi = matched_phi(float(theta), inputs)
            except NoMatchedPhase:
                continue
            resid = max(resid, abs(matching_residual(PhasePair(phi, float(theta)), inputs)))
            if abs(math.cos(theta / 2)) > 1e-3:
                t = tan_half_phi_rational(float(theta), inputs)
                if math.isfinite(t) and abs(t) < 1e6:
                    rational = max(rational, abs(math.tan(phi / 2) - t) / max(1.0, abs(t)))
        beta = float(rng.uniform(1e-3, math.pi / 2 - 1e-3))
        same = MatchingInputs.from_angles(beta, beta, 0.0)
        for theta in thetas:
            recover = max(recover, abs(matched_phi(float(theta), same) - theta))
    return [
        CheckResult("matching.residual", resid, 1e-10 * scale),
        CheckResult("matching.equal_phase_recovery", recover, 1e-12 * scale),
        CheckResult("matching.rational_form", rational, 1e-9 * scale),
    ]


def check_planner(samples, rng, scale=1.0):
    fail = phase = 0.0
    for _ in range(samples):
        inputs = _random_inputs(rng, beta_range=(0.05, 1.4))
        plan = plan_search(inputs)
        succ, arg = oracle_success(plan.phases, inputs, plan.m)
        fail = max(fail, 1.0 - succ)
        phase = max(phase, abs(math.remainder(arg - plan.delta, TWO_PI)))
    return [
        CheckResult("planner.oracle_success", fail, 1e-9 * scale),
        CheckResult("planner.final_phase", phase, 1e-8 * scale),
    ]


def check_ndim(samples, rng, scale=1.0):
    dev = leak = norm = 0.0
    for i in range(samples):
        n_qubits = int(rng.integers(2, 7))
        if i % 2:
            U = build_walsh_hadamard(n_qubits)
        else:
            U = build_random_unitary(1 << n_qubits, int(rng.integers(0, 2**31)))
        eta, tau = int(rng.integers(0, U.dim)), int(rng.integers(0, U.dim))
        s = U.column(eta)
        phases = PhasePair(_phase(rng), _phase(rng))
        d, lk = compare_with_2d(U, eta, tau, s, phases, 50)
        dev, leak = max(dev, d), max(leak, lk)
        norm = max(norm, abs(np.linalg.norm(run_search(U, eta, tau, s, phases, 200)) - 1.0))
    return [
        CheckResult("ndim.reduction_equivalence", dev, 1e-9 * scale),
        CheckResult("ndim.leakage", leak, 1e-12 * scale),
        CheckResult("ndim.norm", norm, 1e-11 * scale),
    ]


_CHECKS = {"kernel": check_kernel, "matching": check_matching, "planner": check_planner, "ndim": check_ndim}


def run_suite(suite, samples, seed=0, tol_scale=1.0):
    names = SUITES if suite == "all" else (suite,)
    rng = np.random.default_rng(seed)
    results = []
    for name in names:
        results.extend(_CHECKS[name](samples, rng, tol_scale))
    return results
