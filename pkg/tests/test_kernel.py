import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from su2search.errors import DegenerateKernel, DomainError
from su2search.kernel import (
    build_g_eta,
    build_g_tau,
    build_kernel,
    build_kernel_product,
    eigen_decompose,
    kernel_angle_w,
    kernel_cos_w,
    kernel_power_closed,
    kernel_power_iterative,
    l_m_product_form,
)
from su2search.su2 import TWO_PI, PhasePair, SearchGeometry, unitarity_error

phase = st.floats(1e-3, TWO_PI - 1e-3)
beta = st.floats(1e-3, math.pi / 2 - 1e-3)
alpha = st.floats(0.0, TWO_PI - 1e-9)


@settings(max_examples=200)
@given(phase, phase, beta, alpha)
def test_kernel_unitary_and_equals_product(phi, theta, b, a):
    p, g = PhasePair(phi, theta), SearchGeometry(b, a)
    k = build_kernel(p, g)
    assert unitarity_error(k) < 1e-12
    assert np.max(np.abs(k - build_kernel_product(p, g))) < 1e-14
    assert abs(np.linalg.det(k) - np.exp(1j * (phi + theta))) < 1e-12


def test_factors_are_unitary():
    assert unitarity_error(build_g_tau(1.0)) < 1e-15
    assert unitarity_error(build_g_eta(2.0, SearchGeometry(0.4, 0.3))) < 1e-15


def test_phase_domain_is_enforced():
    with pytest.raises(DomainError):
        build_g_tau(0.0)
    with pytest.raises(DomainError):
        build_g_eta(TWO_PI, SearchGeometry(0.4))


def test_grover_kernel_at_pi():
    b = 0.3
    k = build_kernel(PhasePair(math.pi, math.pi), SearchGeometry(b))
    rot = np.array([[math.cos(2 * b), math.sin(2 * b)], [-math.sin(2 * b), math.cos(2 * b)]])
    assert np.allclose(k, rot, atol=1e-14)
    assert kernel_angle_w(PhasePair(math.pi, math.pi), b) == pytest.approx(2 * b, abs=1e-14)


@settings(max_examples=200)
@given(phase, phase, beta)
def test_w_agrees_with_cos_form_and_numpy_eigenvalues(phi, theta, b):
    p = PhasePair(phi, theta)
    w = kernel_angle_w(p, b)
    assert 0.0 <= w <= math.pi
    assert abs(math.cos(w) - kernel_cos_w(p, b)) < 1e-12
    lam = np.linalg.eigvals(build_kernel(p, SearchGeometry(b)))
    # eigenvalues are -exp(i(phi+theta)/2) exp(+-i w)
    base = -np.exp(0.5j * (phi + theta))
    expected = np.sort_complex(np.array([base * np.exp(1j * w), base * np.exp(-1j * w)]))
    got = np.sort_complex(lam)
    assert min(np.max(np.abs(got - expected)), np.max(np.abs(got[::-1] - expected))) < 1e-7


@settings(max_examples=200)
@given(phase, phase, beta, alpha)
def test_eigen_decomposition(phi, theta, b, a):
    p, g = PhasePair(phi, theta), SearchGeometry(b, a)
    try:
        spec = eigen_decompose(p, g)
    except DegenerateKernel:
        return
    k = build_kernel(p, g)
    for lam, vec in ((spec.lambda1, spec.g1), (spec.lambda2, spec.g2)):
        assert abs(np.linalg.norm(vec) - 1.0) < 1e-12
        assert np.linalg.norm(k @ vec - lam * vec) < 1e-11
    assert abs(np.vdot(spec.g1, spec.g2)) < 1e-12
    assert 0.0 <= spec.x <= math.pi / 2
    assert spec.l_m == pytest.approx(l_m_product_form(p, b), rel=1e-9, abs=1e-14)


@pytest.mark.parametrize("m", [0, 1, 2, 5, 10, 100, 1000])
def test_closed_power_matches_numpy_matrix_power(m, rng):
    for _ in range(20):
        p = PhasePair(*rng.uniform(0.01, TWO_PI - 0.01, 2))
        g = SearchGeometry(rng.uniform(0.01, 1.5), rng.uniform(0, TWO_PI))
        k = build_kernel(p, g)
        oracle = np.linalg.matrix_power(k, m)
        assert np.max(np.abs(kernel_power_closed(p, g, m) - oracle)) < 1e-9
        assert np.max(np.abs(kernel_power_iterative(k, m) - oracle)) < 1e-9


def test_degenerate_kernel_raises():
    # phi = theta with vanishing overlap would need beta = 0; near it w is tiny.
    p = PhasePair(1e-6, 1e-6)
    with pytest.raises(DegenerateKernel):
        eigen_decompose(p, SearchGeometry(1e-6))


def test_negative_power_rejected():
    k = build_kernel(PhasePair(1.0, 2.0), SearchGeometry(0.3))
    with pytest.raises(DomainError):
        kernel_power_iterative(k, -1)
    with pytest.raises(DomainError):
        kernel_power_closed(PhasePair(1.0, 2.0), SearchGeometry(0.3), -1)
