"""Full N-dimensional statevector simulation of the search.

The kernel is applied literally: ``G_tau`` multiplies amplitude ``tau`` by
``exp(i phi)``, ``G_eta = U S_eta(theta) U^dagger`` is applied as adjoint,
phase, forward. The global minus sign is kept so phases compare directly with
the two-dimensional picture.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DegenerateKernel, DegenerateOverlap, DomainError, FileFormatError, OutOfSpan
from .kernel import build_kernel, kernel_power_closed, kernel_power_iterative
from .su2 import InitialStateParams, PhasePair, SearchGeometry, unitarity_error, wrap_angle

MAX_QUBITS = 14
MAX_DENSE = 4096
SPAN_TOL = 1e-10
OVERLAP_EPS = 1e-12
M_LIMIT = 10**6


class NUnitary:
    """Dense N x N unitary."""

    def __init__(self, matrix, tol=1e-10):
        matrix = np.array(matrix, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 2:
            raise DomainError(f"expected a square matrix of size >= 2, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise DomainError("matrix has non-finite entries")
        err = unitarity_error(matrix)
        if err > tol:
            raise DomainError(f"matrix is not unitary (max |U^dag U - I| = {err:.3e})")
        self._matrix = matrix
        self._adjoint = np.ascontiguousarray(matrix.conj().T)

    @property
    def dim(self):
        return self._matrix.shape[0]

    @property
    def matrix(self):
        return self._matrix

    def apply(self, v):
        return self._matrix @ v

    def apply_adjoint(self, v):
        return self._adjoint @ v

    def column(self, j):
        return np.array(self._matrix[:, j])


class WalshHadamard(NUnitary):
    """Walsh-Hadamard transform on ``n_qubits`` qubits, applied matrix-free."""

    def __init__(self, n_qubits):
        self.n_qubits = n_qubits
        self._dim = 1 << n_qubits

    @property
    def dim(self):
        return self._dim

    @property
    def matrix(self):
        if self._dim > MAX_DENSE:
            raise DomainError(f"dense Walsh-Hadamard limited to N <= {MAX_DENSE}")
        idx = np.arange(self._dim)
        parity = _popcount(idx[:, None] & idx[None, :]) & 1
        return np.where(parity, -1.0, 1.0).astype(np.complex128) / math.sqrt(self._dim)

    def apply(self, v):
        return _backend.fwht(v)

    apply_adjoint = apply

    def column(self, j):
        e = np.zeros(self._dim, dtype=np.complex128)
        e[j] = 1.0
        return _backend.fwht(e)


def _popcount(a):
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(a)
    count = np.zeros_like(a)
    while np.any(a):
        count += a & 1
        a = a >> 1
    return count


def build_walsh_hadamard(n_qubits):
    n_qubits = int(n_qubits)
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise DomainError(f"n_qubits must lie in [1, {MAX_QUBITS}], got {n_qubits}")
    return WalshHadamard(n_qubits)


def build_random_unitary(n, seed):
    """Haar-random unitary: QR of a seeded complex Gaussian matrix, diagonal phases fixed."""
    n = int(n)
    if not 2 <= n <= MAX_DENSE:
        raise DomainError(f"N must lie in [2, {MAX_DENSE}], got {n}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return NUnitary(q * (d / np.abs(d)))


def build_selective_phase(n, target, angle):
    """Identity with entry ``(target, target)`` replaced by ``exp(i angle)``."""
    n = int(n)
    if not 2 <= n <= MAX_DENSE:
        raise DomainError(f"N must lie in [2, {MAX_DENSE}], got {n}")
    _check_index("target", target, n)
    diag = np.ones(n, dtype=np.complex128)
    diag[target] = cmath.exp(1j * float(angle))
    return NUnitary(np.diag(diag))


def _check_index(name, index, n):
    if not (isinstance(index, (int, np.integer)) and 0 <= index < n):
        raise DomainError(f"{name} must be an index in [0, {n}), got {index!r}")


def as_nstate(amplitudes, tol=1e-12):
    v = np.array(amplitudes, dtype=np.complex128).ravel()
    if v.size < 2:
        raise DomainError("state must have at least two amplitudes")
    if not np.all(np.isfinite(v)):
        raise DomainError("state has non-finite amplitudes")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > tol:
        raise DomainError(f"state norm {norm!r} differs from 1")
    return v


@dataclass(frozen=True)
class ReductionData:
    beta: float
    alpha: float
    beta0: float
    u: float
    global_phase: float
    basis_II: np.ndarray

    @property
    def geometry(self):
        return SearchGeometry(self.beta, self.alpha)

    @property
    def initial(self):
        return InitialStateParams(self.beta0, self.u, self.global_phase)


def extract_reduction(U: NUnitary, eta, tau, s) -> ReductionData:
    """Angles of the two-dimensional reduction for ``U``, ``|eta>``, ``|tau>`` and start state ``s``."""
    n = U.dim
    _check_index("eta", eta, n)
    _check_index("tau", tau, n)
    s = as_nstate(s, tol=1e-10)
    if s.size != n:
        raise DomainError(f"state has {s.size} amplitudes, expected {n}")
    u_eta = U.column(eta)
    overlap = complex(u_eta[tau])
    r = abs(overlap)
    if not OVERLAP_EPS < r < 1.0 - OVERLAP_EPS:
        raise DegenerateOverlap(f"|<tau|U|eta>| = {r!r} leaves no two-dimensional subspace")
    l = math.sqrt((1.0 - r) * (1.0 + r))
    basis = u_eta.copy()
    basis[tau] -= overlap
    basis /= l
    basis /= np.linalg.norm(basis)

    a_i = complex(s[tau])
    a_ii = complex(np.vdot(basis, s))
    rest = s.copy()
    rest[tau] -= a_i
    rest -= a_ii * basis
    residual = float(np.linalg.norm(rest))
    if residual > SPAN_TOL:
        raise OutOfSpan(f"start state leaves span{{|tau>, U|eta>}} by {residual:.3e}", residual=residual)

    beta = math.atan2(r, l)
    alpha = wrap_angle(cmath.phase(overlap))
    beta0 = math.atan2(abs(a_i), abs(a_ii))
    if abs(a_i) > OVERLAP_EPS:
        g = cmath.phase(a_i)
    else:
        g = cmath.phase(a_ii)
    u = cmath.phase(a_ii) - g if abs(a_ii) > OVERLAP_EPS else 0.0
    return ReductionData(beta, alpha, beta0, wrap_angle(u), wrap_angle(g), basis)


def _step_dense(U, v, tau, eta, e_phi, e_theta):
    v[tau] *= e_phi
    w = U.apply_adjoint(v)
    w[eta] *= e_theta
    return -U.apply(w)


def iterate_search(U: NUnitary, eta, tau, s, phases: PhasePair, m):
    """Yield the state after ``k = 0, 1, ..., m`` kernel applications."""
    m = int(m)
    if not 0 <= m <= M_LIMIT:
        raise DomainError(f"m must lie in [0, {M_LIMIT}], got {m}")
    _check_index("eta", eta, U.dim)
    _check_index("tau", tau, U.dim)
    e_phi, e_theta = cmath.exp(1j * phases.phi), cmath.exp(1j * phases.theta)
    v = np.array(s, dtype=np.complex128)
    yield v.copy()
    for _ in range(m):
        if isinstance(U, WalshHadamard):
            v = _backend.walsh_search(v, tau, eta, e_phi, e_theta, 1)
        else:
            v = _step_dense(U, v, tau, eta, e_phi, e_theta)
        yield v.copy()


def run_search(U: NUnitary, eta, tau, s, phases: PhasePair, m):
    """``(-G_eta G_tau)^m s`` by ``m`` successive applications."""
    m = int(m)
    if not 0 <= m <= M_LIMIT:
        raise DomainError(f"m must lie in [0, {M_LIMIT}], got {m}")
    _check_index("eta", eta, U.dim)
    _check_index("tau", tau, U.dim)
    s = as_nstate(s, tol=1e-10)
    if isinstance(U, WalshHadamard):
        return _backend.walsh_search(s, tau, eta, cmath.exp(1j * phases.phi), cmath.exp(1j * phases.theta), m)
    e_phi, e_theta = cmath.exp(1j * phases.phi), cmath.exp(1j * phases.theta)
    v = s.copy()
    for _ in range(m):
        v = _step_dense(U, v, tau, eta, e_phi, e_theta)
    return v


def success_probability(state, tau):
    state = np.asarray(state)
    _check_index("tau", tau, state.size)
    return float(abs(state[tau]) ** 2)


def compare_with_2d(U: NUnitary, eta, tau, s, phases: PhasePair, m):
    """Worst deviation between projected N-dim iterates and the 2x2 closed form, and worst leakage.

    Returns ``(max_deviation, max_leakage)`` over steps ``0..m``.
    """
    red = extract_reduction(U, eta, tau, s)
    geom = red.geometry
    s2 = red.initial.state()
    try:
        kernel_power_closed(phases, geom, 0)
        power = lambda k: kernel_power_closed(phases, geom, k)  # noqa: E731
    except DegenerateKernel:
        g2 = build_kernel(phases, geom)
        power = lambda k: kernel_power_iterative(g2, k)  # noqa: E731
    dev = leak = 0.0
    for k, v in enumerate(iterate_search(U, eta, tau, s, phases, m)):
        p = np.array([v[tau], np.vdot(red.basis_II, v)])
        dev = max(dev, float(np.max(np.abs(p - power(k) @ s2))))
        rest = v.copy()
        rest[tau] -= p[0]
        rest -= p[1] * red.basis_II
        leak = max(leak, float(np.linalg.norm(rest)))
    return dev, leak


def load_unitary(path):
    """Read the plain-text format: first line ``N``, then N rows of N ``re,im`` tokens."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise FileFormatError(f"{path}: empty file")
    try:
        n = int(lines[0])
    except ValueError:
        raise FileFormatError(f"{path}: first line must be the dimension N, got {lines[0]!r}") from None
    if n < 2 or len(lines) != n + 1:
        raise FileFormatError(f"{path}: expected {n} matrix rows, found {len(lines) - 1}")
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if len(tokens) != n:
            raise FileFormatError(f"{path}:{i}: expected {n} entries, found {len(tokens)}")
        row = []
        for tok in tokens:
            try:
                re_s, im_s = tok.split(",")
                row.append(complex(float(re_s), float(im_s)))
            except ValueError:
                raise FileFormatError(f"{path}:{i}: bad entry {tok!r}, expected re,im") from None
        rows.append(row)
    return NUnitary(rows, tol=1e-8)


def save_unitary(U: NUnitary, path):
    m = U.matrix
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{m.shape[0]}\n")
        for row in m:
            fh.write(" ".join(f"{z.real:.17g},{z.imag:.17g}" for z in row) + "\n")
