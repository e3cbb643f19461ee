"""Two-dimensional complex Hilbert-space arithmetic and the shared parameter types.

States in the reduced space are length-2 ``complex128`` arrays holding the
amplitudes on ``|I> = |tau>`` and ``|II>``; operators are 2x2 ``complex128``
arrays. Angles are radians throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi
UNITARY_TOL = 1e-12


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def wrap_angle(x, lo=0.0):
    """Return ``x + 2*pi*k`` lying in ``[lo, lo + 2*pi)``."""
    x = _finite("x", x)
    lo = _finite("lo", lo)
    hi = lo + TWO_PI
    if lo <= x < hi:
        return x
    r = lo + math.fmod(x - lo, TWO_PI)
    if r < lo:
        r += TWO_PI
    if r >= hi:
        r -= TWO_PI
    if r < lo:  # fmod rounding right at the seam
        r = lo
    return r


def as_vec2(v):
    arr = np.asarray(v, dtype=np.complex128)
    if arr.shape != (2,):
        raise DomainError(f"expected a length-2 vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("vector has non-finite entries")
    return arr


def as_mat2(m):
    arr = np.asarray(m, dtype=np.complex128)
    if arr.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("matrix has non-finite entries")
    return arr


def mat2_mul(a, b):
    return as_mat2(a) @ as_mat2(b)


def mat2_apply(m, v):
    return as_mat2(m) @ as_vec2(v)


def dagger(m):
    return np.conj(np.asarray(m)).T


def unitarity_error(m):
    """Largest entrywise deviation of ``m^dagger m`` from the identity."""
    m = np.asarray(m, dtype=np.complex128)
    return float(np.max(np.abs(dagger(m) @ m - np.eye(m.shape[0]))))


def is_unitary(m, tol=UNITARY_TOL):
    return unitarity_error(m) <= tol


@dataclass(frozen=True)
class PhasePair:
    """The marked-state phase ``phi`` and the reflection phase ``theta``."""

    phi: float
    theta: float

    def __post_init__(self):
        for name in ("phi", "theta"):
            value = _finite(name, getattr(self, name))
            if not 0.0 < value < TWO_PI:
                raise DomainError(f"{name} must lie in (0, 2*pi), got {value!r}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class SearchGeometry:
    """Overlap ``<tau|U|eta> = sin(beta) * exp(i*alpha)``.

    ``alpha`` is a phase and is canonicalized into [0, 2*pi).
    """

    beta: float
    alpha: float = 0.0

    def __post_init__(self):
        beta = _finite("beta", self.beta)
        if not 0.0 < beta < math.pi / 2:
            raise DomainError(f"beta must lie in (0, pi/2), got {beta!r}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "alpha", wrap_angle(self.alpha))

    @property
    def overlap(self):
        return math.sin(self.beta) * complex(math.cos(self.alpha), math.sin(self.alpha))

    def eta_vector(self):
        """``U|eta>`` in the ``{|I>, |II>}`` basis."""
        return np.array([self.overlap, math.cos(self.beta)], dtype=np.complex128)


@dataclass(frozen=True)
class InitialStateParams:
    """Start state ``exp(i*global_phase) * (sin(beta0)|I> + cos(beta0) exp(i*u)|II>)``."""

    beta0: float
    u: float = 0.0
    global_phase: float = 0.0

    def __post_init__(self):
        beta0 = _finite("beta0", self.beta0)
        if not 0.0 <= beta0 <= math.pi / 2:
            raise DomainError(f"beta0 must lie in [0, pi/2], got {beta0!r}")
        object.__setattr__(self, "beta0", beta0)
        object.__setattr__(self, "u", wrap_angle(self.u))
        object.__setattr__(self, "global_phase", wrap_angle(self.global_phase))

    def state(self):
        g = np.exp(1j * self.global_phase)
        return np.array(
            [g * math.sin(self.beta0), g * math.cos(self.beta0) * np.exp(1j * self.u)],
            dtype=np.complex128,
        )
