"""The generalized Grover kernel ``G = -G_eta G_tau`` in the ``{|I>, |II>}`` basis.

``G_tau`` rotates the phase of the marked state by ``phi``; ``G_eta`` rotates
the phase of ``U|eta>`` by ``theta``. Because ``det G = exp(i(phi+theta))``,
``G`` factors as ``-exp(i(phi+theta)/2) * M`` with ``M`` in SU(2), and its
spectrum and powers have closed forms in the angles ``w`` and ``x``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DegenerateKernel, DomainError
from .su2 import TWO_PI, PhasePair, SearchGeometry, as_mat2

DEGENERACY_TOL = 1e-10


def _check_phase(name, value):
    value = float(value)
    if not (math.isfinite(value) and 0.0 < value < TWO_PI):
        raise DomainError(f"{name} must lie in (0, 2*pi), got {value!r}")
    return value


def build_g_tau(phi):
    phi = _check_phase("phi", phi)
    return np.diag([cmath.exp(1j * phi), 1.0 + 0j])


def build_g_eta(theta, geom: SearchGeometry):
    theta = _check_phase("theta", theta)
    v = geom.eta_vector()
    return np.eye(2, dtype=np.complex128) + (cmath.exp(1j * theta) - 1.0) * np.outer(v, v.conj())


def build_kernel(phases: PhasePair, geom: SearchGeometry):
    """Entrywise closed form of ``-G_eta G_tau``."""
    phi, theta = phases.phi, phases.theta
    s, c = math.sin(geom.beta), math.cos(geom.beta)
    e_phi = cmath.exp(1j * phi)
    e_th = cmath.exp(1j * theta) - 1.0
    e_al = cmath.exp(1j * geom.alpha)
    return -np.array(
        [
            [e_phi * (1.0 + e_th * s * s), e_th * s * c * e_al],
            [e_phi * e_th * s * c / e_al, 1.0 + e_th * c * c],
        ],
        dtype=np.complex128,
    )


def build_kernel_product(phases: PhasePair, geom: SearchGeometry):
    """``-G_eta @ G_tau`` by explicit multiplication (cross-check of :func:`build_kernel`)."""
    return -(build_g_eta(phases.theta, geom) @ build_g_tau(phases.phi))


def _half_angle_terms(phi, theta, beta):
    # sin^2(w/2) = sin^2((phi-theta)/4) + sin(phi/2) sin(theta/2) sin^2(beta)
    sb = math.sin(beta)
    s = math.sin((phi - theta) / 4.0) ** 2 + math.sin(phi / 2) * math.sin(theta / 2) * sb * sb
    return min(max(s, 0.0), 1.0)


def kernel_angle_w(phases: PhasePair, beta):
    """Half the eigenphase gap of ``G``, in [0, pi].

    Equivalent to ``arccos(cos((phi-theta)/2) - 2 sin(phi/2) sin(theta/2) sin^2(beta))``
    but evaluated through ``sin^2(w/2)`` so small and near-pi ``w`` keep full precision.
    """
    s = _half_angle_terms(phases.phi, phases.theta, beta)
    return 2.0 * math.atan2(math.sqrt(s), math.sqrt(1.0 - s))


def kernel_cos_w(phases: PhasePair, beta):
    """The printed right-hand side for ``cos(w)`` (no clamping)."""
    phi, theta = phases.phi, phases.theta
    return math.cos((phi - theta) / 2) - 2 * math.sin(phi / 2) * math.sin(theta / 2) * math.sin(beta) ** 2


def _su2_parts(phases, beta):
    """Imaginary diagonal part ``A`` and off-diagonal modulus ``k`` of the SU(2) factor."""
    phi, theta = phases.phi, phases.theta
    a = math.sin((phi - theta) / 2) + 2 * math.cos(phi / 2) * math.sin(theta / 2) * math.sin(beta) ** 2
    k = math.sin(theta / 2) * math.sin(2 * beta)
    return a, k


@dataclass(frozen=True)
class KernelSpectrum:
    w: float
    x: float
    l_m: float
    lambda1: complex
    lambda2: complex
    g1: np.ndarray
    g2: np.ndarray


def eigen_decompose(phases: PhasePair, geom: SearchGeometry) -> KernelSpectrum:
    w = kernel_angle_w(phases, geom.beta)
    sin_w = math.sin(w)
    if sin_w <= DEGENERACY_TOL:
        raise DegenerateKernel(f"sin(w) = {sin_w:.3e} is below {DEGENERACY_TOL:g}", sin_w=sin_w)
    a, k = _su2_parts(phases, geom.beta)
    l_m = (sin_w + a) ** 2 + k * k
    # x in [0, pi/2]: sin x = k / sqrt(l_m), cos x = (sin w + A) / sqrt(l_m) >= 0
    x = math.atan2(k, sin_w + a)
    half = (phases.phi + phases.theta) / 2
    chi = cmath.exp(1j * (phases.phi / 2 - geom.alpha))
    g1 = np.array([math.cos(x) / chi, math.sin(x)], dtype=np.complex128)
    g2 = np.array([-math.sin(x), chi * math.cos(x)], dtype=np.complex128)
    return KernelSpectrum(
        w=w,
        x=x,
        l_m=l_m,
        lambda1=-cmath.exp(1j * (half + w)),
        lambda2=-cmath.exp(1j * (half - w)),
        g1=g1,
        g2=g2,
    )


def l_m_product_form(phases: PhasePair, beta):
    """Second printed form of the eigenvector normalization, ``2 sin w (sin w + A)``."""
    sin_w = math.sin(kernel_angle_w(phases, beta))
    a, _ = _su2_parts(phases, beta)
    return 2 * sin_w * (sin_w + a)


def kernel_power_closed(phases: PhasePair, geom: SearchGeometry, m):
    """``G**m`` assembled from the spectrum; no repeated multiplication."""
    m = int(m)
    if m < 0:
        raise DomainError(f"m must be non-negative, got {m}")
    spec = eigen_decompose(phases, geom)
    w, x = spec.w, spec.x
    c2, s2 = math.cos(x) ** 2, math.sin(x) ** 2
    e_p, e_m = cmath.exp(1j * m * w), cmath.exp(-1j * m * w)
    off = 1j * math.sin(m * w) * math.sin(2 * x)
    chi = cmath.exp(1j * (phases.phi / 2 - geom.alpha))
    pref = (-1) ** (m % 2) * cmath.exp(1j * m * (phases.phi + phases.theta) / 2)
    return pref * np.array(
        [[e_p * c2 + e_m * s2, off / chi], [off * chi, e_p * s2 + e_m * c2]],
        dtype=np.complex128,
    )


def kernel_power_iterative(g, m):
    """``g**m`` by ``m`` successive 2x2 products. The brute-force reference."""
    m = int(m)
    if m < 0:
        raise DomainError(f"m must be non-negative, got {m}")
    return _backend.power2(as_mat2(g), m)
